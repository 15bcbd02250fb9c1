// Acceptance checks: prints one PASS/FAIL line per criterion, exits nonzero on any failure.

#include "resint/run.hpp"
#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <thread>

using namespace resint;
using namespace resint::test;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome
{
  bool pass = false;
  std::string detail;
};

std::string num(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// 1. steady_energy / contraction = sin 2theta cos phi over a 20x20 grid
Outcome pure_state_law()
{
  auto const d = TransitionDipole<double>::real(0.3, -0.7, 0.65);
  Geometry<double> const g{1.4, Vector3<double>(0.48, 0.6, 0.64), 0.8};
  double const contraction = dipole_contraction(d, dipole_tensor(g));
  double worst = 0;
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) {
      double const theta = -pi + 2 * pi * (i + 0.5) / 20;
      double const phi = -pi + 2 * pi * (j + 0.5) / 20;
      double const expected = std::sin(2 * theta) * std::cos(phi);
      double const ratio = steady_energy(pure_state(theta, phi), d, d, g) / contraction;
      worst = std::max(worst, rel_diff(ratio, expected));
    }
  return {worst <= 1e-12, "max rel " + num(worst)};
}

// 2. Werner law and concurrence plateau
Outcome werner_law()
{
  auto const d = TransitionDipole<double>::real(1, 0, 0);
  Geometry<double> const g{2.0, Vector3<double>::UnitZ(), 1.0};
  double const full = steady_energy(pure_state(pi / 4, 0.0), d, d, g);
  double worst = 0, worst_c = 0;
  for (int k = 1; k <= 10; ++k) {
    double const p = 0.1 * k;
    worst = std::max(worst, rel_diff(steady_energy(werner_state(p), d, d, g), p * full));
    worst_c = std::max(worst_c, std::abs(concurrence(werner_state(p)) - std::max((3 * p - 1) / 2, 0.0)));
  }
  double plateau = 0;
  for (double p : {0.1, 0.2, 0.3, 1.0 / 3.0}) plateau = std::max(plateau, concurrence(werner_state(p)));
  return {worst <= 1e-12 && worst_c <= 1e-12 && plateau <= 1e-12,
          "energy rel " + num(worst) + ", concurrence abs " + num(worst_c) + ", plateau " + num(plateau)};
}

// 3. Zero interaction for Re(rho_23) = 0
Outcome zero_criterion()
{
  Rng rng(1003);
  std::vector<TwoAtomState<double>> states;
  Eigen::Matrix<cd, 4, 1> psi = Eigen::Matrix<cd, 4, 1>::Zero();
  psi(basis::ge) = 1 / std::sqrt(2.0);
  psi(basis::eg) = cd(0, 1 / std::sqrt(2.0));
  states.push_back(projector<double>(psi));
  states.push_back(basis_state<double>(basis::gg));
  states.push_back(basis_state<double>(basis::ee));
  states.push_back(maximally_mixed<double>());
  while (states.size() < 1000) states.push_back(random_zero_q_state(rng));

  double worst = 0;
  std::size_t invalid = 0;
  for (auto const &s : states) {
    if (!validate_state(s).empty()) ++invalid;
    auto const d = random_dipole(rng);
    Geometry<double> g{uniform(rng, 0.05, 20), random_unit(rng), uniform(rng, 0.1, 3)};
    worst = std::max(worst, std::abs(steady_energy(s, d, d, g)) / energy_scale(d, d, g));
  }
  return {worst <= 1e-12 && invalid == 0, "max |E| / scale " + num(worst) + ", invalid states " + std::to_string(invalid)};
}

// 4. Oracle against the closed form
Outcome oracle_equivalence()
{
  std::vector<double> const xs{0.1, 0.5, 1, 2, 5, 10};
  std::vector<TransitionDipole<double>> const dipoles{TransitionDipole<double>::real(1, 0, 0),
                                                      TransitionDipole<double>::real(0, 0, 1),
                                                      TransitionDipole<double>::real(1 / std::sqrt(2.0), 0,
                                                                                     1 / std::sqrt(2.0))};
  std::vector<TwoAtomState<double>> const states{pure_state(pi / 4, 0.0), pure_state(pi / 6, pi / 3),
                                                 werner_state(0.7)};
  std::size_t const count = xs.size() * dipoles.size() * states.size();

  struct Point
  {
    double rel = 0;
    bool consistent = false;
    bool converged = false;
  };
  int const workers = std::max(1u, std::thread::hardware_concurrency());
  auto const points = parallel_map(count, workers, [&](std::size_t idx) {
    std::size_t const s = idx % states.size();
    std::size_t const d = (idx / states.size()) % dipoles.size();
    std::size_t const x = idx / (states.size() * dipoles.size());
    Geometry<double> const g{1.0, Vector3<double>::UnitZ(), xs[x]};
    double const closed = steady_energy(states[s], dipoles[d], dipoles[d], g);
    Point p;
    try {
      auto const res = oracle_steady_energy(states[s], dipoles[d], dipoles[d], g);
      double const diff = std::abs(res.value - closed);
      p.rel = diff / std::max(std::abs(closed), 1e-9 * energy_scale(dipoles[d], dipoles[d], g));
      // consistent: the reported error bounds the observed one, and is itself within tolerance
      p.consistent = diff <= res.estimated_error && res.estimated_error <= 1e-3 * std::abs(closed);
      p.converged = true;
    } catch (OracleNonConvergence const &e) {
      p.rel = std::abs(e.partial.value - closed) / std::abs(closed);
    }
    return p;
  });

  double worst = 0;
  int inconsistent = 0, failed = 0;
  for (auto const &p : points) {
    worst = std::max(worst, p.rel);
    inconsistent += !p.consistent;
    failed += !p.converged;
  }
  return {worst <= 1e-3 && inconsistent == 0 && failed == 0,
          std::to_string(count) + " points, max rel " + num(worst) + ", error-estimate misses " +
            std::to_string(inconsistent) + ", non-converged " + std::to_string(failed)};
}

LineFit fit(std::vector<double> const &rs, TransitionDipole<double> const &d, double omega0)
{
  std::vector<double> e;
  for (double r : rs) e.push_back(steady_energy(pure_state(pi / 4, 0.0), d, d, {r, Vector3<double>::UnitZ(), omega0}));
  return fit_log_log(rs, e);
}

// 5. Near-zone r^-3
Outcome near_slope()
{
  Range const range{1e-3, 1e-2, 50, Spacing::Log};
  auto const f = fit(range_points(range), TransitionDipole<double>::real(1, 0, 0), 1.0);
  return {std::abs(f.slope + 3) <= 0.01, "slope " + num(f.slope)};
}

// 6. Far-zone r^-1 at cos extrema
Outcome far_slope()
{
  double const omega0 = 1.0;
  std::vector<double> rs;
  for (int k = 100; k <= 1000; k += 10) rs.push_back(k * pi / omega0);
  auto const f = fit(rs, TransitionDipole<double>::real(1, 0, 0), omega0);
  return {std::abs(f.slope + 1) <= 0.05, "slope " + num(f.slope)};
}

// 7. Oscillating terms average out
Outcome time_average()
{
  auto const d = TransitionDipole<double>::real(1, 0, 0);
  Geometry<double> const g{1.3, Vector3<double>::UnitZ(), 0.9};
  Eigen::Matrix<cd, 4, 1> psi = Eigen::Matrix<cd, 4, 1>::Zero();
  psi(basis::gg) = psi(basis::ee) = 1 / std::sqrt(2.0);
  auto const rho = projector<double>(psi);
  double const steady = steady_energy(rho, d, d, g);
  double const a = std::abs(oscillating_amplitude(rho, d, d, g));
  double const period_avg = std::abs(time_averaged_energy(rho, d, d, g, pi / g.omega0));

  bool bound = true;
  double worst_ratio = 0;
  for (double t = 1.0; t <= 1e6; t *= 1.7) {
    double const dev = std::abs(time_averaged_energy(rho, d, d, g, t) - steady);
    double const limit = a / (g.omega0 * t);
    bound = bound && dev <= limit;
    worst_ratio = std::max(worst_ratio, dev / limit);
  }
  return {steady == 0.0 && period_avg <= 1e-14 * a && bound,
          "steady " + num(steady) + ", |avg(pi/w0)|/|A| " + num(period_avg / a) + ", max dev/bound " + num(worst_ratio)};
}

// 8. Exchange symmetry and the Q reformulation
Outcome exchange_and_reformulation()
{
  Rng rng(1008);
  double worst_swap = 0, worst_reform = 0;
  for (int k = 0; k < 1000; ++k) {
    auto const rho = random_state(rng);
    auto const d = random_dipole(rng);
    Geometry<double> g{uniform(rng, 0.05, 20), random_unit(rng), uniform(rng, 0.1, 3)};
    Geometry<double> reversed = g;
    reversed.n = -g.n;
    double const e = steady_energy(rho, d, d, g);
    double const floor = 1e-300;
    worst_swap = std::max(worst_swap, rel_diff(e, steady_energy(swap_atoms(rho), d, d, reversed), floor));
    double const reform = 2 * quantum_classicality(rho) * dipole_contraction(d, dipole_tensor(g));
    worst_reform = std::max(worst_reform, rel_diff(e, reform, floor));
  }
  return {worst_swap <= 1e-12 && worst_reform <= 1e-12, "swap rel " + num(worst_swap) + ", reformulation rel " +
                                                          num(worst_reform)};
}

// 9. Trace identity and rotational covariance
Outcome tensor_properties()
{
  Rng rng(1009);
  double worst_trace = 0, worst_rot = 0;
  for (int k = 0; k < 100; ++k) {
    Geometry<double> g{uniform(rng, 0.05, 20), random_unit(rng), uniform(rng, 0.05, 5)};
    double const x = g.omega0_r();
    double const expected = -g.omega0 * g.omega0 * std::cos(x) / (2 * pi * g.r);
    double const scale = (std::abs(std::cos(x)) + x * std::abs(std::sin(x)) + x * x) / (4 * pi * g.r * g.r * g.r);
    worst_trace = std::max(worst_trace, std::abs(dipole_tensor(g).v.trace() - expected) / scale);

    Matrix3<double> const rot = random_rotation(rng);
    Geometry<double> rotated = g;
    rotated.n = rot * g.n;
    Matrix3<double> const target = rot * dipole_tensor(g).v * rot.transpose();
    worst_rot = std::max(worst_rot, (dipole_tensor(rotated).v - target).norm() / target.norm());
  }
  return {worst_trace <= 1e-12 && worst_rot <= 1e-12, "trace rel " + num(worst_trace) + ", rotation rel " +
                                                        num(worst_rot)};
}

} // namespace

int main()
{
  struct Criterion
  {
    char const *name;
    double budget_s;
    std::function<Outcome()> check;
  };
  std::vector<Criterion> const criteria{
    {"pure-state law", 1, pure_state_law},
    {"werner law", 1, werner_law},
    {"zero-interaction criterion", 5, zero_criterion},
    {"oracle equivalence", 300, oracle_equivalence},
    {"near-zone slope", 1, near_slope},
    {"far-zone slope", 1, far_slope},
    {"time average", 1, time_average},
    {"exchange and reformulation", 5, exchange_and_reformulation},
    {"tensor properties", 1, tensor_properties},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto const &c = criteria[i];
    auto const start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.check();
    } catch (std::exception const &e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    double const secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool const pass = out.pass && secs <= c.budget_s;
    failures += !pass;
    std::printf("%s  %zu. %s: %s (%.2f s, budget %.0f s)\n", pass ? "PASS" : "FAIL", i + 1, c.name,
                out.detail.c_str(), secs, c.budget_s);
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
  return failures ? 1 : 0;
}
