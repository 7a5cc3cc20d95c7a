#pragma once

// Geometry of the open unit ball of B(K, H): Möbius automorphisms, the disc
// metric and the closed-form ball distance.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "opball/cmat.hpp"
#include "opball/config.hpp"
#include "opball/error.hpp"
#include "opball/matkernel.hpp"

namespace opball {

/// A dimH × dimK matrix of spectral norm strictly below one.
class BallPoint {
 public:
  explicit BallPoint(CMat mat, const Tolerances& tol = default_tolerances())
      : mat_(std::move(mat)), norm_(op_norm(mat_, tol)) {
    if (!mat_.all_finite()) throw Error(ErrorKind::NonFinite, "ball point has non-finite entries");
    if (!(norm_ < 1.0)) {
      throw Error(ErrorKind::OutsideBall,
                  "operator norm " + std::to_string(norm_) + " is not below 1");
    }
  }

  static BallPoint origin(std::size_t dim_h, std::size_t dim_k) {
    return BallPoint(CMat::zeros(dim_h, dim_k));
  }

  const CMat& mat() const noexcept { return mat_; }
  double norm() const noexcept { return norm_; }
  double margin() const noexcept { return 1.0 - norm_; }
  std::size_t dim_h() const noexcept { return mat_.rows(); }
  std::size_t dim_k() const noexcept { return mat_.cols(); }

  BallPoint operator-() const { return BallPoint(-mat_, norm_); }

 private:
  BallPoint(CMat mat, double norm) : mat_(std::move(mat)), norm_(norm) {}

  CMat mat_;
  double norm_;
};

namespace detail {

inline void require_same_shape(const CMat& a, const CMat& b, const char* what) {
  if (!a.same_shape(b)) {
    throw Error(ErrorKind::ShapeMismatch,
                std::string(what) + ": " + a.shape_string() + " vs " + b.shape_string());
  }
}

inline CMat defect_inv_sqrt(const CMat& d, const Tolerances& tol) {
  try {
    return inv_sqrtm(d, tol.defect_floor, tol);
  } catch (const EigenvalueBelowFloorError& e) {
    throw Error(ErrorKind::Singular,
                "defect operator eigenvalue " + std::to_string(e.eigenvalue()) +
                    " too close to the boundary");
  }
}

}  // namespace detail

/// tanh⁻¹ that refuses arguments at or beyond 1 instead of returning inf.
inline double checked_atanh(double x) {
  if (!(x < 1.0) || x < 0.0) {
    throw Error(ErrorKind::OutOfDisc, "tanh^-1 argument " + std::to_string(x) + " outside [0,1)");
  }
  return std::atanh(x);
}

/// η_A(Z) as a raw matrix, without the ball-membership check on the result.
inline CMat mobius_matrix(const BallPoint& a, const BallPoint& z,
                          const Tolerances& tol = default_tolerances()) {
  detail::require_same_shape(a.mat(), z.mat(), "mobius");
  const CMat& am = a.mat();
  const CMat adj = am.adjoint();
  const CMat left = detail::defect_inv_sqrt(CMat::identity(a.dim_h()) - am * adj, tol);
  const CMat right = sqrtm(CMat::identity(a.dim_k()) - adj * am, tol);
  const CMat middle = inverse(CMat::identity(a.dim_k()) + adj * z.mat(), tol);
  return left * (z.mat() + am) * middle * right;
}

/// η_A(Z) = (I − AA*)^{-1/2} (Z + A) (I + A*Z)^{-1} (I − A*A)^{1/2}.
inline BallPoint mobius(const BallPoint& a, const BallPoint& z,
                        const Tolerances& tol = default_tolerances()) {
  return BallPoint(mobius_matrix(a, z, tol), tol);
}

/// η_A⁻¹(Z) = (I − AA*)^{-1/2} (Z − A) (I − A*Z)^{-1} (I − A*A)^{1/2}, i.e. η with center −A.
inline BallPoint mobius_inv(const BallPoint& a, const BallPoint& z,
                            const Tolerances& tol = default_tolerances()) {
  return mobius(-a, z, tol);
}

/// ψ_X(Y): the automorphism sending X to the origin and the origin to −X.
inline BallPoint psi(const BallPoint& x, const BallPoint& y,
                     const Tolerances& tol = default_tolerances()) {
  return mobius(-x, y, tol);
}

/// Poincaré distance on the unit disc.
inline double poincare(cplx a, cplx b) {
  if (!(std::abs(a) < 1.0) || !(std::abs(b) < 1.0)) {
    throw Error(ErrorKind::OutOfDisc, "poincare arguments must lie in the open unit disc");
  }
  return checked_atanh(std::abs(a - b) / std::abs(1.0 - std::conj(a) * b));
}

/// Raw ψ_X(Y) matrix, without the ball-membership check on the result.
inline CMat psi_matrix(const BallPoint& x, const BallPoint& y,
                       const Tolerances& tol = default_tolerances()) {
  return mobius_matrix(-x, y, tol);
}

/// F = (I − X*X)^{-1/2} (I − X*Y) (I − Y*Y)^{-1/2}, with ‖F‖ = cosh of the ball distance.
/// I − ψ*ψ = (F F*)⁻¹, so ‖F‖ carries 1/(1 − ‖ψ‖²) without cancellation.
inline CMat ball_cosh_factor(const BallPoint& x, const BallPoint& y,
                             const Tolerances& tol = default_tolerances()) {
  detail::require_same_shape(x.mat(), y.mat(), "ball_cosh_factor");
  const std::size_t k = x.dim_k();
  const CMat xadj = x.mat().adjoint();
  const CMat yadj = y.mat().adjoint();
  const CMat dx = detail::defect_inv_sqrt(CMat::identity(k) - xadj * x.mat(), tol);
  const CMat dy = detail::defect_inv_sqrt(CMat::identity(k) - yadj * y.mat(), tol);
  return dx * (CMat::identity(k) - xadj * y.mat()) * dy;
}

namespace detail {

// tanh⁻¹(x) given x and c = cosh(tanh⁻¹ x) = 1/sqrt(1 − x²). Below 1/2 the
// direct tanh⁻¹ is well conditioned; above it log(c) + log1p(x) keeps full
// relative accuracy, with the value near 1 carried by c so x may overshoot 1
// by roundoff.
inline double atanh_from_cosh(double x, double c) {
  constexpr double kRoundoff = 1e-6;
  if (x < 0.0 || !(x < 1.0 + kRoundoff) || !std::isfinite(c)) {
    throw Error(ErrorKind::OutOfDisc, "tanh^-1 argument " + std::to_string(x) + " outside [0,1)");
  }
  if (x < 0.5) return std::atanh(x);
  return std::log(std::max(c, 1.0)) + std::log1p(std::min(x, 1.0));
}

}  // namespace detail

/// Kobayashi distance on the ball, in closed form tanh⁻¹‖ψ_X(Y)‖.
inline double ball_dist(const BallPoint& x, const BallPoint& y,
                        const Tolerances& tol = default_tolerances()) {
  const double psi_norm = op_norm(psi_matrix(x, y, tol), tol);
  return detail::atanh_from_cosh(psi_norm, op_norm(ball_cosh_factor(x, y, tol), tol));
}

}  // namespace opball
