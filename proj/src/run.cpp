#include "resint/run.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace resint {

namespace {

class Csv
{
public:
  explicit Csv(std::vector<std::string> header)
  {
    rows_.push_back(std::move(header));
  }
  void row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }

  void write(std::string const &path) const
  {
    if (path.empty()) return;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    for (auto const &r : rows_) {
      for (std::size_t k = 0; k < r.size(); ++k) out << (k ? "," : "") << r[k];
      out << '\n';
    }
  }

private:
  std::vector<std::vector<std::string>> rows_;
};

std::string fmt(double v)
{
  return format_double(v);
}

std::string fmt_complex(Cx<double> z)
{
  std::ostringstream os;
  os << format_double(z.real()) << (z.imag() < 0 ? " - " : " + ") << format_double(std::abs(z.imag())) << "i";
  return os.str();
}

std::vector<std::string> sweep_header(bool coherence)
{
  std::vector<std::string> h{"r", "omega0_r", "steady_energy", "dimensionless_energy", "Q"};
  if (coherence) {
    h.push_back("l1");
    h.push_back("concurrence");
  }
  return h;
}

std::vector<std::string> sweep_cells(SweepRow const &row, bool coherence)
{
  std::vector<std::string> c{fmt(row.r), fmt(row.omega0_r), fmt(row.steady_energy), fmt(row.dimensionless_energy),
                             fmt(row.q)};
  if (coherence) {
    c.push_back(fmt(row.l1));
    c.push_back(fmt(row.concurrence));
  }
  return c;
}

SweepRow evaluate_point(TwoAtomState<double> const &rho, RunConfig const &cfg, double r, double q, double l1, double c)
{
  auto const geom = cfg.geometry_at(r);
  double const e = steady_energy(rho, cfg.dipole_a, cfg.dipole_b, geom, cfg.tol);
  return {r, geom.omega0_r(), e, dimensionless_energy(e, cfg.dipole_a, cfg.dipole_b, geom), q, l1, c};
}

std::string output_path(RunConfig const &cfg, RunOptions const &opts)
{
  return opts.out.empty() ? cfg.output_path : opts.out;
}

int workers_of(RunConfig const &cfg, RunOptions const &opts)
{
  return opts.workers.value_or(cfg.workers);
}

void print_matrix(std::ostream &os, std::string const &label, Matrix3<double> const &m)
{
  os << label << ":\n";
  for (int i = 0; i < 3; ++i) {
    os << "  ";
    for (int j = 0; j < 3; ++j) os << std::setw(26) << fmt(m(i, j));
    os << '\n';
  }
}

int run_energy(RunConfig const &cfg, RunOptions const &opts, std::ostream &os)
{
  auto const geom = cfg.geometry_at(*cfg.r);
  auto const res = interaction_energy(cfg.rho, cfg.dipole_a, cfg.dipole_b, geom, cfg.tol);
  auto const coh = coherence_report(cfg.rho, cfg.dipole_a, cfg.dipole_b, cfg.tol);
  double const dimless = dimensionless_energy(res.steady, cfg.dipole_a, cfg.dipole_b, geom);

  os << "steady_energy         " << fmt(res.steady) << '\n';
  if (opts.dimensionless) os << "dimensionless_energy  " << fmt(dimless) << '\n';
  os << "Q                     " << fmt(coh.q) << '\n';
  os << "oscillating_amplitude " << fmt_complex(res.oscillating_amplitude) << '\n';
  if (cfg.average_period)
    os << "time_averaged_energy  "
       << fmt(time_averaged_energy(cfg.rho, cfg.dipole_a, cfg.dipole_b, geom, *cfg.average_period, cfg.tol)) << '\n';

  Csv csv(sweep_header(cfg.coherence_columns));
  csv.row(sweep_cells({*cfg.r, geom.omega0_r(), res.steady, dimless, coh.q, coh.l1, coh.concurrence},
                      cfg.coherence_columns));
  csv.write(output_path(cfg, opts));
  return exit_code::ok;
}

int run_tensor(RunConfig const &cfg, RunOptions const &opts, std::ostream &os)
{
  auto const geom = cfg.geometry_at(*cfg.r);
  auto const full = dipole_tensor(geom);
  auto const near = near_zone_tensor(geom);
  auto const far = far_zone_tensor(geom);
  os << "omega0_r " << fmt(geom.omega0_r()) << '\n';
  print_matrix(os, "dipole_tensor", full.v);
  print_matrix(os, "near_zone_tensor", near.v);
  print_matrix(os, "far_zone_tensor", far.v);

  Csv csv({"i", "j", "dipole", "near_zone", "far_zone"});
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      csv.row({std::to_string(i), std::to_string(j), fmt(full.v(i, j)), fmt(near.v(i, j)), fmt(far.v(i, j))});
  csv.write(output_path(cfg, opts));
  return exit_code::ok;
}

int run_coherence(RunConfig const &cfg, RunOptions const &opts, std::ostream &os)
{
  auto const coh = coherence_report(cfg.rho, cfg.dipole_a, cfg.dipole_b, cfg.tol);
  os << "Q           " << fmt(coh.q) << '\n';
  os << "l1          " << fmt(coh.l1) << '\n';
  os << "concurrence " << fmt(coh.concurrence) << '\n';
  os << "nonpolar_a  " << (coh.nonpolar_a ? "true" : "false") << '\n';
  os << "nonpolar_b  " << (coh.nonpolar_b ? "true" : "false") << '\n';
  for (Atom atom : {Atom::A, Atom::B}) {
    auto const red = reduced_state(cfg.rho, atom);
    os << "reduced_" << (atom == Atom::A ? 'a' : 'b') << "   [[" << fmt_complex(red(0, 0)) << ", "
       << fmt_complex(red(0, 1)) << "], [" << fmt_complex(red(1, 0)) << ", " << fmt_complex(red(1, 1)) << "]]\n";
  }
  Csv csv({"Q", "l1", "concurrence", "nonpolar_a", "nonpolar_b"});
  csv.row({fmt(coh.q), fmt(coh.l1), fmt(coh.concurrence), coh.nonpolar_a ? "true" : "false",
           coh.nonpolar_b ? "true" : "false"});
  csv.write(output_path(cfg, opts));
  return exit_code::ok;
}

int run_sweep(RunConfig const &cfg, RunOptions const &opts, std::ostream &os)
{
  auto const rows = sweep(cfg, workers_of(cfg, opts));
  Csv csv(sweep_header(cfg.coherence_columns));
  for (auto const &row : rows) csv.row(sweep_cells(row, cfg.coherence_columns));
  csv.write(output_path(cfg, opts));
  os << "points " << rows.size() << '\n';
  if (!rows.empty())
    os << "first  r=" << fmt(rows.front().r) << " energy=" << fmt(opts.dimensionless ? rows.front().dimensionless_energy
                                                                                      : rows.front().steady_energy)
       << '\n'
       << "last   r=" << fmt(rows.back().r) << " energy=" << fmt(opts.dimensionless ? rows.back().dimensionless_energy
                                                                                     : rows.back().steady_energy)
       << '\n';
  return exit_code::ok;
}

int run_slope_fit(RunConfig const &cfg, RunOptions const &opts, std::ostream &os)
{
  auto const rows = sweep(cfg, workers_of(cfg, opts));
  std::vector<double> r, e;
  for (auto const &row : rows) {
    r.push_back(row.r);
    e.push_back(row.steady_energy);
  }
  auto const fit = fit_log_log(r, e);
  Csv csv(sweep_header(cfg.coherence_columns));
  for (auto const &row : rows) csv.row(sweep_cells(row, cfg.coherence_columns));
  csv.write(output_path(cfg, opts));
  os << "slope     " << fmt(fit.slope) << '\n';
  os << "intercept " << fmt(fit.intercept) << '\n';
  os << "points    " << fit.points << '\n';
  return exit_code::ok;
}

struct ScanPoint
{
  double theta = 0;
  double phi = 0;
  double p = 0;
};

int run_scan(RunConfig const &cfg, RunOptions const &opts, std::ostream &os)
{
  auto const &scan = *cfg.scan;
  std::vector<ScanPoint> points;
  if (scan.family == ScanSpec::Family::Werner) {
    for (double p : range_points(scan.p)) points.push_back({0, 0, p});
  } else {
    for (double theta : range_points(scan.theta))
      for (double phi : range_points(scan.phi)) points.push_back({theta, phi, 0});
  }

  bool const werner = scan.family == ScanSpec::Family::Werner;
  auto const rows = parallel_map(points.size(), workers_of(cfg, opts), [&](std::size_t i) {
    auto const &pt = points[i];
    auto const rho = werner ? werner_state(pt.p) : pure_state(pt.theta, pt.phi);
    return evaluate_point(rho, cfg, *cfg.r, quantum_classicality(rho), l1_coherence(rho), concurrence(rho));
  });

  std::vector<std::string> header = werner ? std::vector<std::string>{"p"} : std::vector<std::string>{"theta", "phi"};
  for (auto const &h : sweep_header(true)) header.push_back(h);
  Csv csv(header);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<std::string> cells = werner ? std::vector<std::string>{fmt(points[i].p)}
                                            : std::vector<std::string>{fmt(points[i].theta), fmt(points[i].phi)};
    for (auto const &c : sweep_cells(rows[i], true)) cells.push_back(c);
    csv.row(cells);
  }
  csv.write(output_path(cfg, opts));
  os << "points " << rows.size() << '\n';
  return exit_code::ok;
}

int run_oracle_check(RunConfig const &cfg, RunOptions const &opts, std::ostream &os, std::ostream &diag)
{
  std::vector<double> rs = cfg.r ? std::vector<double>{*cfg.r} : range_points(*cfg.r_range, cfg.omega0);

  struct Check
  {
    double r = 0, closed = 0, oracle = 0, error = 0;
    std::int64_t evals = 0;
    bool converged = false;
    std::string message;
  };
  auto const checks = parallel_map(rs.size(), workers_of(cfg, opts), [&](std::size_t i) {
    auto const geom = cfg.geometry_at(rs[i]);
    Check c;
    c.r = rs[i];
    c.closed = steady_energy(cfg.rho, cfg.dipole_a, cfg.dipole_b, geom, cfg.tol);
    try {
      auto const res = oracle_steady_energy(cfg.rho, cfg.dipole_a, cfg.dipole_b, geom, cfg.oracle, cfg.tol);
      c.oracle = res.value;
      c.error = res.estimated_error;
      c.evals = res.evaluations;
      c.converged = true;
    } catch (OracleNonConvergence const &e) {
      c.oracle = e.partial.value;
      c.error = e.partial.estimated_error;
      c.evals = e.partial.evaluations;
      c.message = e.what();
    }
    return c;
  });

  Csv csv({"r", "omega0_r", "closed_form", "oracle", "rel_diff", "estimated_error", "evaluations", "converged"});
  bool all = true;
  for (auto const &c : checks) {
    double const scale = energy_scale(cfg.dipole_a, cfg.dipole_b, cfg.geometry_at(c.r));
    double const rel = std::abs(c.oracle - c.closed) / std::max(std::abs(c.closed), 1e-9 * scale);
    csv.row({fmt(c.r), fmt(c.r * cfg.omega0), fmt(c.closed), fmt(c.oracle), fmt(rel), fmt(c.error),
             std::to_string(c.evals), c.converged ? "true" : "false"});
    os << "r=" << fmt(c.r) << " closed=" << fmt(c.closed) << " oracle=" << fmt(c.oracle) << " rel_diff=" << fmt(rel)
       << " est_err=" << fmt(c.error) << '\n';
    if (!c.converged) {
      diag << "oracle did not converge at r=" << fmt(c.r) << ": " << c.message << '\n';
      all = false;
    }
  }
  csv.write(output_path(cfg, opts));
  return all ? exit_code::ok : exit_code::oracle_nonconvergence;
}

} // namespace

std::string format_double(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

LineFit fit_log_log(std::vector<double> const &x, std::vector<double> const &y)
{
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (y[i] == 0 || !(x[i] > 0)) continue;
    double const lx = std::log(x[i]);
    double const ly = std::log(std::abs(y[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) throw std::runtime_error("slope fit needs at least two nonzero points");
  double const denom = n * sxx - sx * sx;
  if (denom == 0) throw std::runtime_error("slope fit needs distinct r values");
  LineFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.points = n;
  return fit;
}

std::vector<SweepRow> sweep(RunConfig const &cfg, int workers)
{
  if (!cfg.r_range) throw UsageError("sweep: configuration has no r_range");
  auto const rs = range_points(*cfg.r_range, cfg.omega0);
  double const q = quantum_classicality(cfg.rho);
  double const l1 = l1_coherence(cfg.rho);
  double const c = concurrence(cfg.rho);
  return parallel_map(rs.size(), workers, [&](std::size_t i) { return evaluate_point(cfg.rho, cfg, rs[i], q, l1, c); });
}

int run(RunConfig const &cfg, RunOptions const &opts, std::ostream &summary, std::ostream &diagnostics)
{
  if (!cfg.mode) {
    diagnostics << "no mode selected\n";
    return exit_code::invalid_config;
  }
  try {
    switch (*cfg.mode) {
    case Mode::Energy: return run_energy(cfg, opts, summary);
    case Mode::Tensor: return run_tensor(cfg, opts, summary);
    case Mode::Coherence: return run_coherence(cfg, opts, summary);
    case Mode::Sweep: return run_sweep(cfg, opts, summary);
    case Mode::Scan: return run_scan(cfg, opts, summary);
    case Mode::OracleCheck: return run_oracle_check(cfg, opts, summary, diagnostics);
    case Mode::SlopeFit: return run_slope_fit(cfg, opts, summary);
    }
  } catch (ConfigError const &e) {
    diagnostics << "invalid configuration: " << e.what() << '\n';
    return exit_code::invalid_config;
  } catch (UnsupportedInput const &e) {
    diagnostics << "unsupported input: " << e.what() << '\n';
    return exit_code::invalid_config;
  } catch (std::exception const &e) {
    diagnostics << "error: " << e.what() << '\n';
    return exit_code::failure;
  }
  return exit_code::failure;
}

} // namespace resint
