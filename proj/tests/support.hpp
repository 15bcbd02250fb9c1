#pragma once

#include "resint/energy.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace resint::test {

using Rng = std::mt19937_64;
using cd = std::complex<double>;

inline double uniform(Rng &rng, double lo, double hi)
{
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline cd gaussian_complex(Rng &rng)
{
  std::normal_distribution<double> n;
  return {n(rng), n(rng)};
}

/// Ginibre-distributed density matrix G G^dagger / Tr.
inline TwoAtomState<double> random_state(Rng &rng)
{
  CMatrix4<double> g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = gaussian_complex(rng);
  CMatrix4<double> rho = g * g.adjoint();
  rho /= rho.trace();
  return TwoAtomState<double>(rho);
}

/// Valid state with Re(rho_23) == 0 exactly: (rho + Z_A rho* Z_A)/2.
inline TwoAtomState<double> random_zero_q_state(Rng &rng)
{
  auto const base = random_state(rng);
  Eigen::Matrix<cd, 4, 1> z;
  z << 1, 1, -1, -1; // sigma_z on atom A in the {ee, eg, ge, gg} basis
  CMatrix4<double> flipped = z.asDiagonal() * base.rho.conjugate() * z.asDiagonal();
  return TwoAtomState<double>((base.rho + flipped) / 2.0);
}

inline TransitionDipole<double> random_dipole(Rng &rng)
{
  CVector3<double> d;
  for (int i = 0; i < 3; ++i) d(i) = gaussian_complex(rng);
  return TransitionDipole<double>(d);
}

inline Vector3<double> random_unit(Rng &rng)
{
  std::normal_distribution<double> n;
  Vector3<double> v(n(rng), n(rng), n(rng));
  return v.normalized();
}

inline Matrix3<double> random_rotation(Rng &rng)
{
  std::normal_distribution<double> n;
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  return q.normalized().toRotationMatrix();
}

inline double rel_diff(double a, double b, double floor = 0)
{
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

} // namespace resint::test
