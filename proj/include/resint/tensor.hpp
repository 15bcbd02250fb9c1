#pragma once

#include "types.hpp"

#include <cmath>
#include <numbers>

namespace resint {

template <typename Scalar = double>
struct InteractionTensor
{
  Matrix3<Scalar> v = Matrix3<Scalar>::Zero();
  Geometry<Scalar> geometry;
};

namespace detail {

// (delta_ij - 3 n_i n_j): the static (longitudinal-minus-transverse) structure.
template <typename Scalar>
Matrix3<Scalar> static_structure(Vector3<Scalar> const &n)
{
  return Matrix3<Scalar>::Identity() - Scalar(3) * n * n.transpose();
}

// (delta_ij - n_i n_j): transverse projector.
template <typename Scalar>
Matrix3<Scalar> transverse_projector(Vector3<Scalar> const &n)
{
  return Matrix3<Scalar>::Identity() - n * n.transpose();
}

template <typename Scalar>
Matrix3<Scalar> symmetrized(Matrix3<Scalar> const &m)
{
  return (m + m.transpose()) / Scalar(2);
}

} // namespace detail

/*
 * Retarded dipole-dipole interaction tensor
 *
 *   V_ij = 1/(4 pi r^3) [ (d_ij - 3 n_i n_j)(cos w r + w r sin w r)
 *                        - (d_ij - n_i n_j) (w r)^2 cos w r ],   w = omega0.
 */
template <typename Scalar>
InteractionTensor<Scalar> dipole_tensor(Geometry<Scalar> const &geom)
{
  using std::cos;
  using std::sin;
  require_valid(geom);
  Scalar const x = geom.omega0_r();
  Scalar const pref = Scalar(1) / (4 * std::numbers::pi_v<Scalar> * geom.r * geom.r * geom.r);
  Matrix3<Scalar> const v = pref * ((cos(x) + x * sin(x)) * detail::static_structure(geom.n) -
                                    x * x * cos(x) * detail::transverse_projector(geom.n));
  return {detail::symmetrized(v), geom};
}

/// omega0 r -> 0 limit, (delta_ij - 3 n_i n_j)/(4 pi r^3).
template <typename Scalar>
InteractionTensor<Scalar> near_zone_tensor(Geometry<Scalar> const &geom)
{
  require_valid(geom);
  Scalar const pref = Scalar(1) / (4 * std::numbers::pi_v<Scalar> * geom.r * geom.r * geom.r);
  return {detail::symmetrized<Scalar>(pref * detail::static_structure(geom.n)), geom};
}

/// Dominant r^-1 term, -(delta_ij - n_i n_j) omega0^2 cos(omega0 r)/(4 pi r).
/// The cos factor is kept; envelope comparisons should sample at its extrema.
template <typename Scalar>
InteractionTensor<Scalar> far_zone_tensor(Geometry<Scalar> const &geom)
{
  using std::cos;
  require_valid(geom);
  Scalar const w = geom.omega0;
  Scalar const pref = -w * w * cos(geom.omega0_r()) / (4 * std::numbers::pi_v<Scalar> * geom.r);
  return {detail::symmetrized<Scalar>(pref * detail::transverse_projector(geom.n)), geom};
}

/// Real spectral kernel of the antisymmetric field correlation between the two atoms:
///   g_ij(w) = (d_ij - 3 n_i n_j)(sin wr / r^3 - w cos wr / r^2) - (d_ij - n_i n_j) w^2 sin wr / r.
/// The full correlation is  int_0^inf dw/(8 pi^2) g_ij(w) (e^{i w dt} - e^{-i w dt}).
template <typename Scalar>
Matrix3<Scalar> chi_kernel(Scalar omega, Geometry<Scalar> const &geom)
{
  using std::cos;
  using std::sin;
  require_valid(geom);
  if (!(omega >= 0)) throw DomainError("chi_kernel: omega must be >= 0");
  Scalar const r = geom.r;
  Scalar const s = sin(omega * r);
  Scalar const c = cos(omega * r);
  Matrix3<Scalar> const g = (s / (r * r * r) - omega * c / (r * r)) * detail::static_structure(geom.n) -
                            (omega * omega * s / r) * detail::transverse_projector(geom.n);
  return detail::symmetrized(g);
}

/// The two scalar radial profiles of chi_kernel: g = static * (d - 3nn) - transverse * (d - nn).
template <typename Scalar>
struct KernelProfiles
{
  Scalar static_part;
  Scalar transverse_part;
};

template <typename Scalar>
KernelProfiles<Scalar> chi_kernel_profiles(Scalar omega, Scalar r)
{
  using std::cos;
  using std::sin;
  Scalar const s = sin(omega * r);
  Scalar const c = cos(omega * r);
  return {s / (r * r * r) - omega * c / (r * r), omega * omega * s / r};
}

} // namespace resint
