#pragma once

#include "energy.hpp"

#include <cstdint>
#include <utility>
#include <vector>

// Independent quadrature route to the steady resonance energy.
//
// The radiation-reaction cross term is integrated directly from the spectral field
// correlation and the stationary part of the atomic correlation:
//
//   T_XY = -i int_0^inf dw/(8 pi^2) e^{-eps w} [ <g(w), M-> K-(w) + <g(w), M+> K+(w) ]
//   K-(w) = 1/(eta - i(w - w0)) - 1/(eta + i(w + w0))
//   K+(w) = 1/(eta - i(w + w0)) - 1/(eta + i(w - w0))
//
// K+- are the time integrals over dt in [0, inf) with switching factor e^{-eta dt};
// e^{-eps w} is the i*eps prescription of the field two-point function, with
// eps = mode_cutoff_scale * r * eta / w0 so that both regulators vanish together.
// F(eta) = T_AB + T_BA is evaluated on a decreasing eta sequence and extrapolated to
// eta -> 0 with Neville's scheme.

namespace resint {

struct OracleConfig
{
  /// Strictly decreasing switching rates (1/time). Empty means w0 * 2^-k, k = 4..12.
  std::vector<double> eta_sequence;
  /// eps = mode_cutoff_scale * r * eta / w0.
  double mode_cutoff_scale = 1.0;
  /// The frequency integral stops where eps * w reaches this value.
  double cutoff_exponent = 45.0;
  /// Per-panel tolerance for Gauss-Kronrod, relative to the panel L1 norm.
  double panel_tol = 1e-9;
  double rel_tol = 1e-3;
  std::int64_t max_evals = 200'000'000;

  static std::vector<double> default_eta_sequence(double omega0);
  std::vector<double> resolved_etas(double omega0) const;
  void validate() const;
};

struct EtaSample
{
  double eta = 0;
  double value = 0;
  double term_ab = 0;
  double term_ba = 0;
  double imag_residue = 0;
  double quadrature_error = 0;
};

struct OracleResult
{
  double value = 0;
  double estimated_error = 0;
  /// eta -> 0 limits of the two cross terms separately.
  double term_ab = 0;
  double term_ba = 0;
  std::vector<EtaSample> eta_extrapolation_table;
  std::int64_t evaluations = 0;
  bool converged = false;
};

struct OracleNonConvergence : std::runtime_error
{
  OracleNonConvergence(std::string const &what, OracleResult partial_result)
    : std::runtime_error(what)
    , partial(std::move(partial_result))
  {
  }
  OracleResult partial;
};

/// Neville extrapolation of (x_k, y_k) to x = 0. Also used by tests.
double extrapolate_to_zero(std::vector<double> const &x, std::vector<double> const &y);

/// One regulated evaluation F(eta); exposed for convergence diagnostics.
EtaSample oracle_sample(TwoAtomState<double> const &rho,
                        TransitionDipole<double> const &da,
                        TransitionDipole<double> const &db,
                        Geometry<double> const &geom,
                        double eta,
                        OracleConfig const &cfg = {},
                        std::int64_t *evaluations = nullptr);

OracleResult oracle_steady_energy(TwoAtomState<double> const &rho,
                                  TransitionDipole<double> const &da,
                                  TransitionDipole<double> const &db,
                                  Geometry<double> const &geom,
                                  OracleConfig const &cfg = {},
                                  Tolerances<double> const &tol = {});

/// chi^F_ij(dt) = int_0^inf dw/(8 pi^2) g_ij(w) (e^{i w dt} - e^{-i w dt}) e^{-eta w}, by quadrature.
CMatrix3<double> chi_time_domain(double delta_tau, Geometry<double> const &geom, double eta);

/// Same quantity from the i*eps-regularized derivatives of the field two-point function,
/// written with s = +-dt + i*eta and h(s) = r/(r^2 - s^2).
CMatrix3<double> chi_two_point_closed_form(double delta_tau, Geometry<double> const &geom, double eta);

} // namespace resint
