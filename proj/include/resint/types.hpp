#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

// Shared domain types. All quantities are in natural units (hbar = c = eps0 = 1).
//
// Two-atom basis ordering, used everywhere:
//   index 0: |ee>   index 1: |eg>   index 2: |ge>   index 3: |gg>
// where the first label is atom A. |eg> therefore means atom A excited, and
// rho(1, 2) = <eg|rho|ge> is the single-excitation coherence.

namespace resint {

template <typename Scalar> using Cx = std::complex<Scalar>;
template <typename Scalar> using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar> using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar> using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;
template <typename Scalar> using CVector3 = Eigen::Matrix<Cx<Scalar>, 3, 1>;
template <typename Scalar> using CMatrix3 = Eigen::Matrix<Cx<Scalar>, 3, 3>;
template <typename Scalar> using CMatrix2 = Eigen::Matrix<Cx<Scalar>, 2, 2>;
template <typename Scalar> using CMatrix4 = Eigen::Matrix<Cx<Scalar>, 4, 4>;

namespace basis {
inline constexpr int ee = 0;
inline constexpr int eg = 1;
inline constexpr int ge = 2;
inline constexpr int gg = 3;
} // namespace basis

enum class Atom { A, B };

struct DomainError : std::domain_error
{
  using std::domain_error::domain_error;
};

struct UsageError : std::invalid_argument
{
  using std::invalid_argument::invalid_argument;
};

struct ConsistencyError : std::logic_error
{
  using std::logic_error::logic_error;
};

struct UnsupportedInput : std::invalid_argument
{
  using std::invalid_argument::invalid_argument;
};

template <typename Scalar = double>
struct Tolerances
{
  Scalar herm = Scalar(1e-12);
  Scalar trace = Scalar(1e-12);
  Scalar psd = Scalar(1e-10);
  Scalar geom = Scalar(1e-12);
  Scalar zero = Scalar(1e-12);

  bool valid() const { return herm > 0 && trace > 0 && psd > 0 && geom > 0 && zero > 0; }
};

// Joint density matrix of the two atoms in the fixed basis above.
template <typename Scalar = double>
struct TwoAtomState
{
  CMatrix4<Scalar> rho = CMatrix4<Scalar>::Zero();

  TwoAtomState() = default;
  explicit TwoAtomState(CMatrix4<Scalar> const &m)
    : rho(m)
  {
  }

  Cx<Scalar> operator()(int i, int j) const { return rho(i, j); }

  Cx<Scalar> coherence() const { return rho(basis::eg, basis::ge); }
};

// d_i = <g|D_i|e> of one atom.
template <typename Scalar = double>
struct TransitionDipole
{
  CVector3<Scalar> d = CVector3<Scalar>::Zero();

  TransitionDipole() = default;
  explicit TransitionDipole(CVector3<Scalar> const &v)
    : d(v)
  {
  }
  static TransitionDipole real(Scalar x, Scalar y, Scalar z)
  {
    return TransitionDipole(CVector3<Scalar>(Cx<Scalar>(x), Cx<Scalar>(y), Cx<Scalar>(z)));
  }

  Scalar norm() const { return d.norm(); }
  bool finite() const { return d.allFinite(); }
};

// Separation r along unit direction n (from A to B), transition frequency omega0.
template <typename Scalar = double>
struct Geometry
{
  Scalar r = Scalar(1);
  Vector3<Scalar> n = Vector3<Scalar>::UnitZ();
  Scalar omega0 = Scalar(1);

  Scalar omega0_r() const { return omega0 * r; }
};

template <typename Scalar>
void require_valid(Geometry<Scalar> const &g, Tolerances<Scalar> const &tol = {})
{
  using std::abs;
  if (!(g.r > 0)) throw DomainError("geometry: separation r must be > 0");
  if (!(g.omega0 > 0)) throw DomainError("geometry: omega0 must be > 0");
  if (!g.n.allFinite() || abs(g.n.norm() - Scalar(1)) > tol.geom)
    throw DomainError("geometry: direction n must have unit norm");
}

} // namespace resint
