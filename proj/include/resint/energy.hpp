#pragma once

#include "coherence.hpp"
#include "tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace resint {

/// Steady energy plus the complex coefficient A of e^{-2i w0 tau}; the oscillating
/// energy is A e^{-2i w0 tau} + conj(A) e^{2i w0 tau} for a Hermitian state.
template <typename Scalar = double>
struct EnergyResult
{
  Scalar steady = 0;
  Cx<Scalar> oscillating_amplitude{0, 0};
  Scalar omega0 = 1;
};

/// C^{AB}_ij(tau, tau') for the given state, including the non-stationary |ee>/|gg> terms.
template <typename Scalar>
CMatrix3<Scalar> atomic_correlation(TwoAtomState<Scalar> const &state,
                                    TransitionDipole<Scalar> const &da,
                                    TransitionDipole<Scalar> const &db,
                                    Scalar omega0,
                                    Scalar tau,
                                    Scalar tau_prime)
{
  using namespace basis;
  Scalar const dt = tau - tau_prime;
  auto const &a = da.d;
  auto const &b = db.d;
  auto phase = [](Scalar angle) { return std::polar(Scalar(1), angle); };

  CMatrix3<Scalar> c = state(eg, ge) * phase(-omega0 * dt) * (a * b.adjoint());
  c += state(ge, eg) * phase(omega0 * dt) * (a.conjugate() * b.transpose());
  c += state(ee, gg) * phase(omega0 * dt - 2 * omega0 * tau) * (a * b.transpose());
  c += state(gg, ee) * phase(-omega0 * dt + 2 * omega0 * tau) * (a.conjugate() * b.adjoint());
  return c;
}

/// Natural energy scale |dA||dB|/(4 pi r^3), used for dimensionless output and tolerances.
template <typename Scalar>
Scalar energy_scale(TransitionDipole<Scalar> const &da, TransitionDipole<Scalar> const &db, Geometry<Scalar> const &geom)
{
  return da.norm() * db.norm() / (4 * std::numbers::pi_v<Scalar> * geom.r * geom.r * geom.r);
}

/// sum_ij Re(d_i conj(d_j)) V_ij: the state-independent factor of the identical-atom energy.
template <typename Scalar>
Scalar dipole_contraction(TransitionDipole<Scalar> const &d, InteractionTensor<Scalar> const &tensor)
{
  Matrix3<Scalar> const dd = (d.d * d.d.adjoint()).real();
  return (dd.array() * tensor.v.array()).sum();
}

/*
 * Time-independent resonance energy
 *   dE = sum_ij (rho_23 dA_i conj(dB_j) + rho_32 conj(dA_i) dB_j) V_ij.
 * Both coherences are read from the matrix as given, so a non-Hermitian input shows
 * up as an imaginary residue. For identical dipoles the result must also equal
 * 2 Q sum_ij Re(d_i conj(d_j)) V_ij; a mismatch is reported as a ConsistencyError.
 */
template <typename Scalar>
Scalar steady_energy(TwoAtomState<Scalar> const &state,
                     TransitionDipole<Scalar> const &da,
                     TransitionDipole<Scalar> const &db,
                     Geometry<Scalar> const &geom,
                     Tolerances<Scalar> const &tol = {})
{
  using namespace basis;
  using std::abs;
  InteractionTensor<Scalar> const tensor = dipole_tensor(geom);
  CMatrix3<Scalar> const weight =
    state(eg, ge) * (da.d * db.d.adjoint()) + state(ge, eg) * (da.d.conjugate() * db.d.transpose());
  Cx<Scalar> const total = (weight.array() * tensor.v.template cast<Cx<Scalar>>().array()).sum();

  Scalar const scale = energy_scale(da, db, geom) * std::max(Scalar(1), geom.omega0_r() * geom.omega0_r());
  if (abs(total.imag()) > (tol.zero + 2 * tol.herm) * std::max(scale, abs(total.real())))
    throw ConsistencyError("steady_energy: imaginary residue; state is not Hermitian");

  if (da.d == db.d) {
    Scalar const reformulated = 2 * quantum_classicality(state) * dipole_contraction(da, tensor);
    Scalar const slack = Scalar(64) * std::numeric_limits<Scalar>::epsilon() *
                           std::max({abs(reformulated), abs(total.real()), scale * l1_coherence(state)}) +
                         4 * tol.herm * scale;
    if (abs(reformulated - total.real()) > slack)
      throw ConsistencyError("steady_energy: identical-atom reformulation disagrees");
  }
  return total.real();
}

/// A = rho_14 sum_ij dA_i dB_j V_ij.
template <typename Scalar>
Cx<Scalar> oscillating_amplitude(TwoAtomState<Scalar> const &state,
                                 TransitionDipole<Scalar> const &da,
                                 TransitionDipole<Scalar> const &db,
                                 Geometry<Scalar> const &geom)
{
  InteractionTensor<Scalar> const tensor = dipole_tensor(geom);
  Cx<Scalar> const contraction = (da.d.transpose() * tensor.v.template cast<Cx<Scalar>>() * db.d)(0, 0);
  return state(basis::ee, basis::gg) * contraction;
}

/// Instantaneous oscillating energy at observation time tau.
template <typename Scalar>
Scalar oscillating_energy(Cx<Scalar> amplitude, Scalar omega0, Scalar tau)
{
  return 2 * (amplitude * std::polar(Scalar(1), -2 * omega0 * tau)).real();
}

template <typename Scalar>
EnergyResult<Scalar> interaction_energy(TwoAtomState<Scalar> const &state,
                                        TransitionDipole<Scalar> const &da,
                                        TransitionDipole<Scalar> const &db,
                                        Geometry<Scalar> const &geom,
                                        Tolerances<Scalar> const &tol = {})
{
  return {steady_energy(state, da, db, geom, tol), oscillating_amplitude(state, da, db, geom), geom.omega0};
}

/// Closed-form average over [0, T]: steady + 2 Re[A (e^{-2i w0 T} - 1)/(-2i w0 T)].
template <typename Scalar>
Scalar time_averaged_energy(TwoAtomState<Scalar> const &state,
                            TransitionDipole<Scalar> const &da,
                            TransitionDipole<Scalar> const &db,
                            Geometry<Scalar> const &geom,
                            Scalar period,
                            Tolerances<Scalar> const &tol = {})
{
  if (!(period > 0)) throw DomainError("time_averaged_energy: T must be > 0");
  EnergyResult<Scalar> const e = interaction_energy(state, da, db, geom, tol);
  Scalar const theta = 2 * geom.omega0 * period;
  Cx<Scalar> const factor = (std::polar(Scalar(1), -theta) - Scalar(1)) / Cx<Scalar>(0, -theta);
  return e.steady + 2 * (e.oscillating_amplitude * factor).real();
}

/// dE * 4 pi r^3 / (|dA||dB|).
template <typename Scalar>
Scalar dimensionless_energy(Scalar energy,
                            TransitionDipole<Scalar> const &da,
                            TransitionDipole<Scalar> const &db,
                            Geometry<Scalar> const &geom)
{
  return energy / energy_scale(da, db, geom);
}

} // namespace resint
