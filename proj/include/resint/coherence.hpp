#pragma once

#include "state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace resint {

template <typename Scalar = double>
struct CoherenceReport
{
  Scalar q = 0;
  Scalar l1 = 0;
  Scalar concurrence = 0;
  bool nonpolar_a = true;
  bool nonpolar_b = true;
};

/// Quantum classicality Q = Re <eg|rho|ge>.
template <typename Scalar>
Scalar quantum_classicality(TwoAtomState<Scalar> const &state)
{
  return state.coherence().real();
}

/// Sum of |rho_ij| over all off-diagonal entries.
template <typename Scalar>
Scalar l1_coherence(TwoAtomState<Scalar> const &state)
{
  return state.rho.cwiseAbs().sum() - state.rho.diagonal().cwiseAbs().sum();
}

/*
 * Wootters concurrence C = max(0, l1 - l2 - l3 - l4), where l_k are the square roots
 * of the eigenvalues of rho (sy x sy) rho* (sy x sy) in decreasing order.
 *
 * With rho = X X^dagger and S = sy x sy, those l_k are the singular values of
 * X^T S X. Eigenvalues of rho below a rounding threshold are treated as exact zeros;
 * otherwise their square roots would leak ~sqrt(eps) into the result for pure states.
 */
template <typename Scalar>
Scalar concurrence(TwoAtomState<Scalar> const &state)
{
  // sigma_y x sigma_y is real and anti-diagonal with signs (-1, +1, +1, -1).
  Matrix4<Scalar> flip = Matrix4<Scalar>::Zero();
  flip(0, 3) = -1;
  flip(1, 2) = 1;
  flip(2, 1) = 1;
  flip(3, 0) = -1;

  Eigen::SelfAdjointEigenSolver<CMatrix4<Scalar>> eig((state.rho + state.rho.adjoint()) / Scalar(2));
  Eigen::Matrix<Scalar, 4, 1> weights = eig.eigenvalues();
  Scalar const cutoff = 16 * std::numeric_limits<Scalar>::epsilon() * std::max(Scalar(1), weights.cwiseAbs().maxCoeff());
  for (int k = 0; k < 4; ++k) weights(k) = weights(k) > cutoff ? std::sqrt(weights(k)) : Scalar(0);

  CMatrix4<Scalar> const x = eig.eigenvectors() * weights.template cast<Cx<Scalar>>().asDiagonal();
  CMatrix4<Scalar> const phi = x.transpose() * flip.template cast<Cx<Scalar>>() * x;
  Eigen::JacobiSVD<CMatrix4<Scalar>> svd(phi);
  auto const &lambda = svd.singularValues(); // decreasing
  Scalar const c = lambda(0) - lambda(1) - lambda(2) - lambda(3);
  return std::clamp(c, Scalar(0), Scalar(1));
}

/// Partial trace over the other atom; result in {|e>, |g>} ordering.
template <typename Scalar>
CMatrix2<Scalar> reduced_state(TwoAtomState<Scalar> const &state, Atom atom)
{
  CMatrix2<Scalar> out = CMatrix2<Scalar>::Zero();
  for (int a = 0; a < 2; ++a)
    for (int ap = 0; ap < 2; ++ap)
      for (int k = 0; k < 2; ++k) {
        if (atom == Atom::A)
          out(a, ap) += state.rho(2 * a + k, 2 * ap + k);
        else
          out(a, ap) += state.rho(2 * k + a, 2 * k + ap);
      }
  return out;
}

/// <D_i> = Tr(rho_atom D_i) with D_i = d_i |g><e| + conj(d_i) |e><g|.
template <typename Scalar>
CVector3<Scalar> dipole_expectation(TwoAtomState<Scalar> const &state, TransitionDipole<Scalar> const &d, Atom atom)
{
  CMatrix2<Scalar> const red = reduced_state(state, atom);
  return d.d * red(0, 1) + d.d.conjugate() * red(1, 0);
}

template <typename Scalar>
bool is_nonpolar(TwoAtomState<Scalar> const &state,
                 TransitionDipole<Scalar> const &d,
                 Atom atom,
                 Tolerances<Scalar> const &tol = {})
{
  CVector3<Scalar> const mean = dipole_expectation(state, d, atom);
  return mean.cwiseAbs().maxCoeff() <= tol.zero * d.norm();
}

template <typename Scalar>
CoherenceReport<Scalar> coherence_report(TwoAtomState<Scalar> const &state,
                                         TransitionDipole<Scalar> const &da,
                                         TransitionDipole<Scalar> const &db,
                                         Tolerances<Scalar> const &tol = {})
{
  return {quantum_classicality(state), l1_coherence(state), concurrence(state),
          is_nonpolar(state, da, Atom::A, tol), is_nonpolar(state, db, Atom::B, tol)};
}

} // namespace resint
