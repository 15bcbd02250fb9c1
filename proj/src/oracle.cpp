#include "resint/oracle.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace resint {

namespace {

using boost::math::quadrature::gauss_kronrod;
using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;
constexpr unsigned max_panel_depth = 10;

struct Contraction
{
  cd static_part;
  cd transverse_part;
};

// <g, M> = s(w) * sum (d - 3nn) o M - t(w) * sum (d - nn) o M.
Contraction contract(CMatrix3<double> const &m, Vector3<double> const &n)
{
  Matrix3<double> const a = detail::static_structure(n);
  Matrix3<double> const b = detail::transverse_projector(n);
  return {(m.array() * a.cast<cd>().array()).sum(), (m.array() * b.cast<cd>().array()).sum()};
}

// Stationary coefficients of one cross term, first atom X, second atom Y:
//   C^{XY} = minus * e^{-i w0 dt} + plus * e^{+i w0 dt}.
struct CrossTerm
{
  Contraction minus;
  Contraction plus;
};

// Panel edges: every half period pi/r of the kernel, refined geometrically around the
// resonance with widths eta * 4^j so the Lorentzian is resolved for any eta.
std::vector<double> panel_edges(double r, double omega0, double eta, double upper)
{
  std::vector<double> edges;
  double const half_period = pi / r;
  auto const panels = static_cast<std::size_t>(std::ceil(upper / half_period));
  edges.reserve(panels + 64);
  for (std::size_t k = 0; k <= panels; ++k) edges.push_back(std::min(upper, k * half_period));

  edges.push_back(omega0);
  double const reach = std::min(omega0, half_period);
  for (double w = eta; w < reach; w *= 4) {
    edges.push_back(omega0 - w);
    edges.push_back(omega0 + w);
  }
  std::sort(edges.begin(), edges.end());
  double const min_width = 1e-3 * std::min(eta, half_period);
  std::vector<double> out;
  out.reserve(edges.size());
  for (double e : edges)
    if (e >= 0 && e <= upper && (out.empty() || e - out.back() > min_width)) out.push_back(e);
  if (out.back() < upper) out.push_back(upper);
  return out;
}

struct TermValue
{
  cd value;
  double error = 0;
};

// Bisects until the Gauss-Kronrod error estimate drops below tol times the panel's
// L1 norm. Unlike a tolerance relative to the signed integral, this terminates on
// panels whose contributions cancel.
template <class F>
TermValue adaptive_panel(F const &f, double a, double b, double tol, unsigned depth)
{
  double err = 0;
  double l1 = 0;
  cd const value = gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &err, &l1);
  if (err <= tol * l1 || depth == 0) return {value, err};
  double const mid = 0.5 * (a + b);
  TermValue const lo = adaptive_panel(f, a, mid, tol, depth - 1);
  TermValue const hi = adaptive_panel(f, mid, b, tol, depth - 1);
  return {lo.value + hi.value, lo.error + hi.error};
}

class Budget
{
public:
  explicit Budget(std::int64_t limit, std::int64_t *counter)
    : limit_(limit)
    , counter_(counter)
  {
  }
  void charge(std::int64_t n) const
  {
    *counter_ += n;
    if (*counter_ > limit_) throw std::length_error("oracle evaluation budget exhausted");
  }

private:
  std::int64_t limit_;
  std::int64_t *counter_;
};

TermValue integrate_cross_term(CrossTerm const &term,
                               Geometry<double> const &geom,
                               double eta,
                               OracleConfig const &cfg,
                               Budget const &budget)
{
  double const r = geom.r;
  double const w0 = geom.omega0;
  double const eps = cfg.mode_cutoff_scale * r * eta / w0;
  double const upper = cfg.cutoff_exponent / eps;

  std::int64_t calls = 0;
  auto integrand = [&](double w) -> cd {
    ++calls;
    auto const prof = chi_kernel_profiles(w, r);
    cd const m_minus = prof.static_part * term.minus.static_part - prof.transverse_part * term.minus.transverse_part;
    cd const m_plus = prof.static_part * term.plus.static_part - prof.transverse_part * term.plus.transverse_part;
    cd const k_minus = 1.0 / cd(eta, -(w - w0)) - 1.0 / cd(eta, w + w0);
    cd const k_plus = 1.0 / cd(eta, -(w + w0)) - 1.0 / cd(eta, w - w0);
    return cd(0, -1) / (8 * pi * pi) * std::exp(-eps * w) * (m_minus * k_minus + m_plus * k_plus);
  };

  auto const edges = panel_edges(r, w0, eta, upper);
  TermValue out{cd(0, 0), 0};
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    auto const panel = adaptive_panel(integrand, edges[k], edges[k + 1], cfg.panel_tol, max_panel_depth);
    out.value += panel.value;
    out.error += panel.error;
    if ((k & 255) == 0) {
      budget.charge(calls);
      calls = 0;
    }
  }
  budget.charge(calls);
  return out;
}

std::vector<double> lagrange_weights_at_zero(std::vector<double> const &x)
{
  std::vector<double> w(x.size(), 1.0);
  for (std::size_t k = 0; k < x.size(); ++k)
    for (std::size_t j = 0; j < x.size(); ++j)
      if (j != k) w[k] *= x[j] / (x[j] - x[k]);
  return w;
}

} // namespace

std::vector<double> OracleConfig::default_eta_sequence(double omega0)
{
  std::vector<double> etas;
  for (int k = 4; k <= 12; ++k) etas.push_back(omega0 * std::ldexp(1.0, -k));
  return etas;
}

std::vector<double> OracleConfig::resolved_etas(double omega0) const
{
  return eta_sequence.empty() ? default_eta_sequence(omega0) : eta_sequence;
}

void OracleConfig::validate() const
{
  for (std::size_t k = 0; k < eta_sequence.size(); ++k) {
    if (!(eta_sequence[k] > 0)) throw DomainError("oracle: eta values must be > 0");
    if (k > 0 && !(eta_sequence[k] < eta_sequence[k - 1]))
      throw DomainError("oracle: eta sequence must be strictly decreasing");
  }
  if (!eta_sequence.empty() && eta_sequence.size() < 2)
    throw DomainError("oracle: eta sequence needs at least two values");
  if (!(rel_tol > 0)) throw DomainError("oracle: rel_tol must be > 0");
  if (!(mode_cutoff_scale > 0) || !(cutoff_exponent > 0) || !(panel_tol > 0))
    throw DomainError("oracle: cutoff settings must be > 0");
  if (max_evals <= 0) throw DomainError("oracle: max_evals must be > 0");
}

double extrapolate_to_zero(std::vector<double> const &x, std::vector<double> const &y)
{
  if (x.size() != y.size() || x.empty()) throw UsageError("extrapolate_to_zero: size mismatch");
  std::vector<double> p = y;
  for (std::size_t level = 1; level < x.size(); ++level)
    for (std::size_t i = 0; i + level < x.size(); ++i)
      p[i] = (x[i + level] * p[i] - x[i] * p[i + 1]) / (x[i + level] - x[i]);
  return p[0];
}

EtaSample oracle_sample(TwoAtomState<double> const &rho,
                        TransitionDipole<double> const &da,
                        TransitionDipole<double> const &db,
                        Geometry<double> const &geom,
                        double eta,
                        OracleConfig const &cfg,
                        std::int64_t *evaluations)
{
  using namespace basis;
  require_valid(geom);
  if (!(eta > 0)) throw DomainError("oracle: eta must be > 0");
  std::int64_t local = 0;
  std::int64_t *counter = evaluations ? evaluations : &local;
  Budget const budget(cfg.max_evals, counter);

  Geometry<double> reversed = geom;
  reversed.n = -geom.n;

  cd const r23 = rho(eg, ge);
  cd const r32 = rho(ge, eg);
  auto const &a = da.d;
  auto const &b = db.d;
  CrossTerm const ab{contract(r23 * (a * b.adjoint()), geom.n), contract(r32 * (a.conjugate() * b.transpose()), geom.n)};
  CrossTerm const ba{contract(r32 * (b * a.adjoint()), reversed.n),
                     contract(r23 * (b.conjugate() * a.transpose()), reversed.n)};

  TermValue const t_ab = integrate_cross_term(ab, geom, eta, cfg, budget);
  TermValue const t_ba = integrate_cross_term(ba, reversed, eta, cfg, budget);
  cd const total = t_ab.value + t_ba.value;
  return {eta, total.real(), t_ab.value.real(), t_ba.value.real(), total.imag(), t_ab.error + t_ba.error};
}

OracleResult oracle_steady_energy(TwoAtomState<double> const &rho,
                                  TransitionDipole<double> const &da,
                                  TransitionDipole<double> const &db,
                                  Geometry<double> const &geom,
                                  OracleConfig const &cfg,
                                  Tolerances<double> const &tol)
{
  using namespace basis;
  cfg.validate();
  require_valid(geom, tol);
  if (std::abs(rho(ee, gg)) + std::abs(rho(gg, ee)) > tol.zero)
    throw UnsupportedInput("oracle: state has |ee>/|gg> coherence; only the stationary part is supported");

  OracleResult result;
  auto const etas = cfg.resolved_etas(geom.omega0);
  try {
    for (double eta : etas)
      result.eta_extrapolation_table.push_back(oracle_sample(rho, da, db, geom, eta, cfg, &result.evaluations));
  } catch (std::length_error const &e) {
    throw OracleNonConvergence(e.what(), result);
  }

  std::vector<double> x, y, y_ab, y_ba;
  for (auto const &s : result.eta_extrapolation_table) {
    x.push_back(s.eta);
    y.push_back(s.value);
    y_ab.push_back(s.term_ab);
    y_ba.push_back(s.term_ba);
  }
  result.value = extrapolate_to_zero(x, y);
  result.term_ab = extrapolate_to_zero(x, y_ab);
  result.term_ba = extrapolate_to_zero(x, y_ba);

  // Truncation: drop the coarsest regulator and compare. Quadrature: propagate the
  // per-sample error estimates through the extrapolation weights.
  double const truncation = std::abs(result.value - extrapolate_to_zero(std::vector<double>(x.begin() + 1, x.end()),
                                                                       std::vector<double>(y.begin() + 1, y.end())));
  auto const weights = lagrange_weights_at_zero(x);
  double propagated = 0;
  double residue = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    auto const &s = result.eta_extrapolation_table[k];
    propagated += std::abs(weights[k]) * s.quadrature_error;
    residue = std::max(residue, std::abs(s.imag_residue));
  }
  result.estimated_error = truncation + propagated;

  double const scale = energy_scale(da, db, geom) * std::max(1.0, geom.omega0_r() * geom.omega0_r());
  // below this magnitude the tolerance is applied in absolute terms
  double const floor = 1e-5 * scale;
  if (residue > cfg.rel_tol * std::max(std::abs(result.value), scale))
    throw OracleNonConvergence("oracle: imaginary residue " + std::to_string(residue) + " exceeds tolerance", result);
  if (result.estimated_error > cfg.rel_tol * std::max(std::abs(result.value), floor))
    throw OracleNonConvergence("oracle: estimated error " + std::to_string(result.estimated_error) +
                                 " exceeds rel_tol",
                               result);
  result.converged = true;
  return result;
}

CMatrix3<double> chi_time_domain(double delta_tau, Geometry<double> const &geom, double eta)
{
  require_valid(geom);
  if (!(eta > 0)) throw DomainError("chi_time_domain: eta must be > 0");
  if (delta_tau == 0) return CMatrix3<double>::Zero();

  double const r = geom.r;
  double const upper = 50.0 / eta;
  double const half_period = pi / std::max(r, std::abs(delta_tau));
  auto const panels = static_cast<std::size_t>(std::ceil(upper / half_period));

  double static_int = 0;
  double transverse_int = 0;
  for (std::size_t k = 0; k < panels; ++k) {
    double const lo = k * half_period;
    double const hi = std::min(upper, lo + half_period);
    static_int += gauss_kronrod<double, 15>::integrate(
      [&](double w) { return chi_kernel_profiles(w, r).static_part * 2 * std::sin(w * delta_tau) * std::exp(-eta * w); },
      lo, hi, max_panel_depth, 1e-12);
    transverse_int += gauss_kronrod<double, 15>::integrate(
      [&](double w) {
        return chi_kernel_profiles(w, r).transverse_part * 2 * std::sin(w * delta_tau) * std::exp(-eta * w);
      },
      lo, hi, max_panel_depth, 1e-12);
  }
  Matrix3<double> const re = (static_int * detail::static_structure(geom.n) -
                              transverse_int * detail::transverse_projector(geom.n)) /
                             (8 * pi * pi);
  return cd(0, 1) * re.cast<cd>();
}

CMatrix3<double> chi_two_point_closed_form(double delta_tau, Geometry<double> const &geom, double eta)
{
  require_valid(geom);
  if (!(eta > 0)) throw DomainError("chi_two_point_closed_form: eta must be > 0");
  double const r = geom.r;

  // G(s) = int_0^inf g(w) e^{i w s} dw for Im s > 0, from h = int sin(wr) e^{iws} dw.
  auto transform = [r](cd s) -> std::pair<cd, cd> {
    cd const den = r * r - s * s;
    cd const h = r / den;
    cd const h_r = -(r * r + s * s) / (den * den);
    cd const h_ss = 2.0 * r / (den * den) + 8.0 * r * s * s / (den * den * den);
    return {h / (r * r * r) - h_r / (r * r), -h_ss / r};
  };
  auto const fwd = transform(cd(delta_tau, eta));
  auto const bwd = transform(cd(-delta_tau, eta));
  cd const static_part = (fwd.first - bwd.first) / (8 * pi * pi);
  cd const transverse_part = (fwd.second - bwd.second) / (8 * pi * pi);
  return static_part * detail::static_structure(geom.n).cast<cd>() -
         transverse_part * detail::transverse_projector(geom.n).cast<cd>();
}

} // namespace resint
