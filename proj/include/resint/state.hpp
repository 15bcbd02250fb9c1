#pragma once

#include "types.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string_view>
#include <vector>

namespace resint {

enum class StateViolation { NonFinite, NonHermitian, NonUnitTrace, NotPositive };

inline std::string_view describe(StateViolation v)
{
  switch (v) {
  case StateViolation::NonFinite: return "state has non-finite entries";
  case StateViolation::NonHermitian: return "state is not Hermitian";
  case StateViolation::NonUnitTrace: return "state trace differs from 1";
  case StateViolation::NotPositive: return "state has a negative eigenvalue";
  }
  return "unknown violation";
}

using ValidationReport = std::vector<StateViolation>;

/// Checks the three density-matrix invariants. Positivity is tested on the
/// Hermitian part so that rho and rho^dagger always produce the same report.
template <typename Scalar>
ValidationReport validate_state(TwoAtomState<Scalar> const &state, Tolerances<Scalar> const &tol = {})
{
  using std::abs;
  ValidationReport report;
  auto const &rho = state.rho;
  if (!rho.allFinite()) {
    report.push_back(StateViolation::NonFinite);
    return report;
  }

  Scalar const scale = std::max(Scalar(1), rho.cwiseAbs().maxCoeff());
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol.herm * scale)
    report.push_back(StateViolation::NonHermitian);

  if (abs(rho.trace() - Cx<Scalar>(1)) > tol.trace) report.push_back(StateViolation::NonUnitTrace);

  CMatrix4<Scalar> const herm = (rho + rho.adjoint()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<CMatrix4<Scalar>> eig(herm, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -tol.psd) report.push_back(StateViolation::NotPositive);

  return report;
}

template <typename Scalar>
void require_valid(TwoAtomState<Scalar> const &state, Tolerances<Scalar> const &tol = {})
{
  auto const report = validate_state(state, tol);
  if (!report.empty()) throw DomainError(std::string(describe(report.front())));
}

template <typename Scalar>
TwoAtomState<Scalar> projector(Eigen::Matrix<Cx<Scalar>, 4, 1> const &psi)
{
  return TwoAtomState<Scalar>(psi * psi.adjoint());
}

/// |psi> = sin(theta)|ge> + cos(theta) e^{i phi}|eg>, returned as |psi><psi|.
template <typename Scalar = double>
TwoAtomState<Scalar> pure_state(Scalar theta, Scalar phi)
{
  using std::cos;
  using std::sin;
  Eigen::Matrix<Cx<Scalar>, 4, 1> psi = Eigen::Matrix<Cx<Scalar>, 4, 1>::Zero();
  psi(basis::ge) = sin(theta);
  psi(basis::eg) = cos(theta) * std::polar(Scalar(1), phi);
  return projector<Scalar>(psi);
}

/// (1-p)/4 I + p |Psi+><Psi+|, with |Psi+> = (|ge> + |eg>)/sqrt(2).
template <typename Scalar = double>
TwoAtomState<Scalar> werner_state(Scalar p)
{
  if (!(p >= 0 && p <= 1)) throw DomainError("werner_state: p must lie in [0, 1]");
  CMatrix4<Scalar> rho = CMatrix4<Scalar>::Identity() * ((1 - p) / 4);
  rho(basis::eg, basis::eg) += p / 2;
  rho(basis::ge, basis::ge) += p / 2;
  rho(basis::eg, basis::ge) = p / 2;
  rho(basis::ge, basis::eg) = p / 2;
  return TwoAtomState<Scalar>(rho);
}

template <typename Scalar = double>
TwoAtomState<Scalar> basis_state(int index)
{
  CMatrix4<Scalar> rho = CMatrix4<Scalar>::Zero();
  rho(index, index) = 1;
  return TwoAtomState<Scalar>(rho);
}

template <typename Scalar = double>
TwoAtomState<Scalar> maximally_mixed()
{
  return TwoAtomState<Scalar>(CMatrix4<Scalar>::Identity() / Scalar(4));
}

/// Relabels A <-> B: exchanges basis rows and columns |eg> <-> |ge>.
template <typename Scalar>
TwoAtomState<Scalar> swap_atoms(TwoAtomState<Scalar> const &state)
{
  CMatrix4<Scalar> rho = state.rho;
  rho.row(basis::eg).swap(rho.row(basis::ge));
  rho.col(basis::eg).swap(rho.col(basis::ge));
  return TwoAtomState<Scalar>(rho);
}

/// Kronecker product of single-atom states, A as the left factor ({|e>,|g>} ordering).
template <typename Scalar>
TwoAtomState<Scalar> product_state(CMatrix2<Scalar> const &a, CMatrix2<Scalar> const &b)
{
  CMatrix4<Scalar> rho;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      rho.template block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return TwoAtomState<Scalar>(rho);
}

} // namespace resint
