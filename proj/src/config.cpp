#include "resint/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace resint {

namespace {

using nlohmann::json;

[[noreturn]] void fail(std::string const &path, std::string const &what)
{
  throw ConfigError(path + ": " + what);
}

void reject_unknown(json const &obj, std::string const &path, std::set<std::string> const &allowed)
{
  if (!obj.is_object()) fail(path, "expected an object");
  for (auto const &[key, value] : obj.items())
    if (!allowed.count(key)) fail(path + "." + key, "unknown key");
}

double number(json const &j, std::string const &path)
{
  if (!j.is_number()) fail(path, "expected a number");
  double const v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

int integer(json const &j, std::string const &path)
{
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

bool boolean(json const &j, std::string const &path)
{
  if (!j.is_boolean()) fail(path, "expected a boolean");
  return j.get<bool>();
}

std::string string(json const &j, std::string const &path)
{
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

std::complex<double> complex_pair(json const &j, std::string const &path)
{
  if (!j.is_array() || j.size() != 2) fail(path, "expected a complex number as [re, im]");
  return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
}

CVector3<double> complex_vector(json const &j, std::string const &path)
{
  if (!j.is_array() || j.size() != 3) fail(path, "expected three [re, im] components");
  CVector3<double> v;
  for (int i = 0; i < 3; ++i) v(i) = complex_pair(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

Vector3<double> real_vector(json const &j, std::string const &path)
{
  if (!j.is_array() || j.size() != 3) fail(path, "expected three numbers");
  Vector3<double> v;
  for (int i = 0; i < 3; ++i) v(i) = number(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

Range parse_range(json const &j, std::string const &path, bool allow_spacing)
{
  reject_unknown(j, path, allow_spacing ? std::set<std::string>{"min", "max", "count", "spacing"}
                                        : std::set<std::string>{"min", "max", "count"});
  Range r;
  if (!j.contains("min") || !j.contains("max") || !j.contains("count")) fail(path, "requires min, max and count");
  r.min = number(j["min"], path + ".min");
  r.max = number(j["max"], path + ".max");
  r.count = integer(j["count"], path + ".count");
  if (r.count < 1) fail(path + ".count", "must be >= 1");
  if (r.max < r.min) fail(path, "max must be >= min");
  if (j.contains("spacing")) {
    auto const s = string(j["spacing"], path + ".spacing");
    if (s == "linear")
      r.spacing = Spacing::Linear;
    else if (s == "log")
      r.spacing = Spacing::Log;
    else if (s == "extrema")
      r.spacing = Spacing::Extrema;
    else
      fail(path + ".spacing", "expected linear, log or extrema");
  }
  return r;
}

StateSpec parse_state(json const &j, std::string const &path)
{
  reject_unknown(j, path, {"pure", "werner", "matrix"});
  if (j.size() != 1) fail(path, "expected exactly one of pure, werner, matrix");
  StateSpec spec;
  if (j.contains("pure")) {
    auto const &p = j["pure"];
    reject_unknown(p, path + ".pure", {"theta", "phi"});
    if (!p.contains("theta") || !p.contains("phi")) fail(path + ".pure", "requires theta and phi");
    spec.kind = StateSpec::Kind::Pure;
    spec.theta = number(p["theta"], path + ".pure.theta");
    spec.phi = number(p["phi"], path + ".pure.phi");
  } else if (j.contains("werner")) {
    auto const &w = j["werner"];
    reject_unknown(w, path + ".werner", {"p"});
    if (!w.contains("p")) fail(path + ".werner", "requires p");
    spec.kind = StateSpec::Kind::Werner;
    spec.p = number(w["p"], path + ".werner.p");
  } else {
    auto const &m = j["matrix"];
    if (!m.is_array() || m.size() != 16) fail(path + ".matrix", "expected 16 [re, im] entries in row-major order");
    spec.kind = StateSpec::Kind::Matrix;
    for (int k = 0; k < 16; ++k)
      spec.matrix(k / 4, k % 4) = complex_pair(m[k], path + ".matrix[" + std::to_string(k) + "]");
  }
  return spec;
}

ScanSpec parse_scan(json const &j, std::string const &path)
{
  reject_unknown(j, path, {"theta", "phi", "p"});
  ScanSpec scan;
  if (j.contains("p")) {
    if (j.contains("theta") || j.contains("phi")) fail(path, "use either p or theta/phi, not both");
    scan.family = ScanSpec::Family::Werner;
    scan.p = parse_range(j["p"], path + ".p", false);
    if (scan.p.min < 0 || scan.p.max > 1) fail(path + ".p", "werner p must lie in [0, 1]");
  } else {
    if (!j.contains("theta") || !j.contains("phi")) fail(path, "requires theta and phi ranges, or p");
    scan.family = ScanSpec::Family::Pure;
    scan.theta = parse_range(j["theta"], path + ".theta", false);
    scan.phi = parse_range(j["phi"], path + ".phi", false);
  }
  return scan;
}

void parse_oracle(json const &j, std::string const &path, OracleConfig &cfg)
{
  reject_unknown(j, path,
                 {"eta_sequence", "rel_tol", "max_evals", "mode_cutoff_scale", "cutoff_exponent", "panel_tol"});
  if (j.contains("eta_sequence")) {
    auto const &seq = j["eta_sequence"];
    if (!seq.is_array()) fail(path + ".eta_sequence", "expected an array of numbers");
    cfg.eta_sequence.clear();
    for (std::size_t k = 0; k < seq.size(); ++k)
      cfg.eta_sequence.push_back(number(seq[k], path + ".eta_sequence[" + std::to_string(k) + "]"));
  }
  if (j.contains("rel_tol")) cfg.rel_tol = number(j["rel_tol"], path + ".rel_tol");
  if (j.contains("max_evals")) {
    if (!j["max_evals"].is_number_integer()) fail(path + ".max_evals", "expected an integer");
    cfg.max_evals = j["max_evals"].get<std::int64_t>();
  }
  if (j.contains("mode_cutoff_scale")) cfg.mode_cutoff_scale = number(j["mode_cutoff_scale"], path + ".mode_cutoff_scale");
  if (j.contains("cutoff_exponent")) cfg.cutoff_exponent = number(j["cutoff_exponent"], path + ".cutoff_exponent");
  if (j.contains("panel_tol")) cfg.panel_tol = number(j["panel_tol"], path + ".panel_tol");
  try {
    cfg.validate();
  } catch (DomainError const &e) {
    fail(path, e.what());
  }
}

void parse_tolerances(json const &j, std::string const &path, Tolerances<double> &tol)
{
  reject_unknown(j, path, {"herm", "trace", "psd", "geom", "zero"});
  if (j.contains("herm")) tol.herm = number(j["herm"], path + ".herm");
  if (j.contains("trace")) tol.trace = number(j["trace"], path + ".trace");
  if (j.contains("psd")) tol.psd = number(j["psd"], path + ".psd");
  if (j.contains("geom")) tol.geom = number(j["geom"], path + ".geom");
  if (j.contains("zero")) tol.zero = number(j["zero"], path + ".zero");
  if (!tol.valid()) fail(path, "all tolerances must be > 0");
}

bool needs_state(Mode m)
{
  return m != Mode::Tensor && m != Mode::Scan;
}

bool needs_dipole(Mode m)
{
  return m != Mode::Tensor;
}

} // namespace

std::string_view mode_name(Mode m)
{
  switch (m) {
  case Mode::Energy: return "energy";
  case Mode::Tensor: return "tensor";
  case Mode::Coherence: return "coherence";
  case Mode::Sweep: return "sweep";
  case Mode::Scan: return "scan";
  case Mode::OracleCheck: return "oracle-check";
  case Mode::SlopeFit: return "slope-fit";
  }
  return "unknown";
}

std::optional<Mode> parse_mode(std::string_view name)
{
  for (Mode m : {Mode::Energy, Mode::Tensor, Mode::Coherence, Mode::Sweep, Mode::Scan, Mode::OracleCheck,
                 Mode::SlopeFit})
    if (mode_name(m) == name) return m;
  return std::nullopt;
}

TwoAtomState<double> resolve_state(StateSpec const &spec, Tolerances<double> const &tol)
{
  TwoAtomState<double> rho;
  switch (spec.kind) {
  case StateSpec::Kind::Pure: rho = pure_state(spec.theta, spec.phi); break;
  case StateSpec::Kind::Werner:
    if (spec.p < 0 || spec.p > 1) fail("$.state.werner.p", "must lie in [0, 1]");
    rho = werner_state(spec.p);
    break;
  case StateSpec::Kind::Matrix: rho = TwoAtomState<double>(spec.matrix); break;
  }
  auto const report = validate_state(rho, tol);
  if (!report.empty()) fail("$.state", std::string(describe(report.front())));
  return rho;
}

std::vector<double> range_points(Range const &range, double omega0)
{
  std::vector<double> out;
  int const n = range.count;
  if (n < 1) throw ConfigError("range: count must be >= 1");
  switch (range.spacing) {
  case Spacing::Linear:
    for (int k = 0; k < n; ++k)
      out.push_back(n == 1 ? range.min : range.min + (range.max - range.min) * k / (n - 1));
    break;
  case Spacing::Log: {
    if (!(range.min > 0)) throw ConfigError("range: log spacing requires min > 0");
    double const lo = std::log(range.min);
    double const hi = std::log(range.max);
    for (int k = 0; k < n; ++k) out.push_back(n == 1 ? range.min : std::exp(lo + (hi - lo) * k / (n - 1)));
    out.front() = range.min;
    if (n > 1) out.back() = range.max;
    break;
  }
  case Spacing::Extrema: {
    double const step = std::numbers::pi / omega0;
    auto const k_lo = static_cast<long>(std::ceil(range.min / step - 1e-9));
    auto const k_hi = static_cast<long>(std::floor(range.max / step + 1e-9));
    if (k_lo < 1 || k_hi < k_lo) throw ConfigError("range: no cos extrema k pi/omega0 (k >= 1) inside [min, max]");
    std::vector<long> ks;
    for (int k = 0; k < n; ++k) {
      double const t = n == 1 ? 0.0 : double(k) / (n - 1);
      auto const kk = static_cast<long>(std::llround(std::exp(std::log(double(k_lo)) * (1 - t) + std::log(double(k_hi)) * t)));
      if (ks.empty() || kk > ks.back()) ks.push_back(kk);
    }
    for (long k : ks) out.push_back(k * step);
    break;
  }
  }
  return out;
}

RunConfig parse_config(std::string_view text, std::optional<Mode> mode)
{
  json doc;
  try {
    doc = json::parse(text);
  } catch (json::parse_error const &e) {
    throw ConfigError(std::string("$: malformed JSON: ") + e.what());
  }
  reject_unknown(doc, "$",
                 {"mode", "state", "dipole_a", "dipole_b", "omega0", "r", "r_range", "n", "output",
                  "coherence_columns", "average_period", "scan", "oracle", "tolerances", "workers"});

  RunConfig cfg;
  if (doc.contains("mode")) {
    auto const name = string(doc["mode"], "$.mode");
    auto const m = parse_mode(name);
    if (!m) fail("$.mode", "unknown mode '" + name + "'");
    if (mode && *mode != *m) fail("$.mode", "document mode '" + name + "' conflicts with the subcommand");
    cfg.mode = m;
  } else {
    cfg.mode = mode;
  }
  if (!cfg.mode) fail("$.mode", "no mode given (document or subcommand)");
  Mode const m = *cfg.mode;

  if (doc.contains("tolerances")) parse_tolerances(doc["tolerances"], "$.tolerances", cfg.tol);
  if (doc.contains("oracle")) parse_oracle(doc["oracle"], "$.oracle", cfg.oracle);

  if (doc.contains("omega0")) cfg.omega0 = number(doc["omega0"], "$.omega0");
  if (!(cfg.omega0 > 0)) fail("$.omega0", "must be > 0");

  if (doc.contains("n")) cfg.n = real_vector(doc["n"], "$.n");
  if (std::abs(cfg.n.norm() - 1) > cfg.tol.geom)
    fail("$.n", "direction must have unit norm (|n| = " + std::to_string(cfg.n.norm()) + ")");

  if (doc.contains("dipole_a")) {
    cfg.dipole_a = TransitionDipole<double>(complex_vector(doc["dipole_a"], "$.dipole_a"));
    if (!(cfg.dipole_a.norm() > 0)) fail("$.dipole_a", "must be nonzero");
  } else if (needs_dipole(m)) {
    fail("$.dipole_a", "required");
  }
  cfg.dipole_b = cfg.dipole_a;
  if (doc.contains("dipole_b")) {
    cfg.dipole_b = TransitionDipole<double>(complex_vector(doc["dipole_b"], "$.dipole_b"));
    if (!(cfg.dipole_b.norm() > 0)) fail("$.dipole_b", "must be nonzero");
  }

  if (doc.contains("state")) {
    cfg.state = parse_state(doc["state"], "$.state");
    cfg.rho = resolve_state(*cfg.state, cfg.tol);
  } else if (needs_state(m)) {
    fail("$.state", "required");
  }

  if (doc.contains("r")) {
    cfg.r = number(doc["r"], "$.r");
    if (!(*cfg.r > 0)) fail("$.r", "separation must be > 0");
  }
  if (doc.contains("r_range")) {
    cfg.r_range = parse_range(doc["r_range"], "$.r_range", true);
    if (!(cfg.r_range->min > 0)) fail("$.r_range.min", "separation must be > 0");
  }
  if (cfg.r && cfg.r_range) fail("$", "give exactly one of r and r_range");
  switch (m) {
  case Mode::Energy:
  case Mode::Tensor:
  case Mode::Scan:
    if (!cfg.r) fail("$.r", std::string("required for mode ") + std::string(mode_name(m)));
    break;
  case Mode::Sweep:
  case Mode::SlopeFit:
    if (!cfg.r_range) fail("$.r_range", std::string("required for mode ") + std::string(mode_name(m)));
    break;
  case Mode::OracleCheck:
    if (!cfg.r && !cfg.r_range) fail("$", "oracle-check requires r or r_range");
    break;
  case Mode::Coherence: break;
  }
  if (cfg.r_range) {
    try {
      (void)range_points(*cfg.r_range, cfg.omega0);
    } catch (ConfigError const &e) {
      fail("$.r_range", e.what());
    }
  }

  if (doc.contains("scan")) cfg.scan = parse_scan(doc["scan"], "$.scan");
  if (m == Mode::Scan && !cfg.scan) fail("$.scan", "required for mode scan");

  if (doc.contains("output")) cfg.output_path = string(doc["output"], "$.output");
  if (doc.contains("coherence_columns")) cfg.coherence_columns = boolean(doc["coherence_columns"], "$.coherence_columns");
  if (doc.contains("average_period")) {
    cfg.average_period = number(doc["average_period"], "$.average_period");
    if (!(*cfg.average_period > 0)) fail("$.average_period", "must be > 0");
  }
  if (doc.contains("workers")) {
    cfg.workers = integer(doc["workers"], "$.workers");
    if (cfg.workers < 1) fail("$.workers", "must be >= 1");
  }
  return cfg;
}

RunConfig load_config(std::string const &path, std::optional<Mode> mode)
{
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open configuration file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), mode);
}

} // namespace resint
