#pragma once

// Bounded transform T ↦ T̂ = (I + T*T)^{-1/2} T* between operators H → K and the
// ball of B(K, H), the defect maps L_T / R_T, and the induced metric on operators.
//
// Finite-dimensional model: H = C^dimH, K = C^dimK, and every matrix stands for
// a closed densely-defined operator. Large norms play the role of unboundedness.

#include <cmath>
#include <string>

#include "opball/ball.hpp"
#include "opball/cmat.hpp"
#include "opball/config.hpp"
#include "opball/error.hpp"
#include "opball/matkernel.hpp"

namespace opball {

/// Operator H → K as a dimK × dimH matrix. Adjoints are computed on demand.
class OperatorHK {
 public:
  explicit OperatorHK(CMat mat, bool near_boundary = false)
      : mat_(std::move(mat)), near_boundary_(near_boundary) {
    if (mat_.rows() == 0 || mat_.cols() == 0) {
      throw Error(ErrorKind::BadDims, "operator needs positive dimensions, got " +
                                          mat_.shape_string());
    }
    if (!mat_.all_finite()) throw Error(ErrorKind::NonFinite, "operator has non-finite entries");
  }

  static OperatorHK zero(std::size_t dim_h, std::size_t dim_k) {
    return OperatorHK(CMat::zeros(dim_k, dim_h));
  }

  const CMat& mat() const noexcept { return mat_; }
  CMat adjoint() const { return mat_.adjoint(); }
  std::size_t dim_h() const noexcept { return mat_.cols(); }
  std::size_t dim_k() const noexcept { return mat_.rows(); }

  /// Set when produced from a ball point with margin below Tolerances::accurate_margin.
  bool near_boundary() const noexcept { return near_boundary_; }

 private:
  CMat mat_;
  bool near_boundary_;
};

namespace detail {

inline void require_same_spaces(const OperatorHK& a, const OperatorHK& b, const char* what) {
  if (!a.mat().same_shape(b.mat())) {
    throw Error(ErrorKind::ShapeMismatch,
                std::string(what) + ": " + a.mat().shape_string() + " vs " + b.mat().shape_string());
  }
}

// (I + XX*)^{±1/2} and friends: eigenvalues are at least one, so no floor is at risk.
inline CMat one_plus_gram_sqrt(const CMat& gram, const Tolerances& tol) {
  return sqrtm(CMat::identity(gram.rows()) + gram, tol);
}

inline CMat one_plus_gram_inv_sqrt(const CMat& gram, const Tolerances& tol) {
  return inv_sqrtm(CMat::identity(gram.rows()) + gram, 0.5, tol);
}

}  // namespace detail

/// T̂ = (I + T*T)^{-1/2} T*. Always lands strictly inside the ball.
///
/// The square root is taken on the smaller of H and K: T*(I + TT*)^{-1/2} when
/// dimK ≤ dimH, the literal form otherwise. On the larger side the Gram matrix is
/// singular next to eigenvalues of order ‖T‖², and for ‖T‖ ~ 1e3 that costs
/// three digits in 1 − ‖T̂‖².
inline BallPoint bounded_transform(const OperatorHK& t, const Tolerances& tol = default_tolerances()) {
  const CMat adj = t.adjoint();
  if (t.dim_h() < t.dim_k()) {
    return BallPoint(detail::one_plus_gram_inv_sqrt(adj * t.mat(), tol) * adj, tol);
  }
  return BallPoint(adj * detail::one_plus_gram_inv_sqrt(t.mat() * adj, tol), tol);
}

/// A₀ = (I − A*A)^{-1/2} A*, the operator whose bounded transform is A.
/// Evaluated on the smaller space, as for bounded_transform.
inline OperatorHK inverse_bounded_transform(const BallPoint& a,
                                            const Tolerances& tol = default_tolerances()) {
  const CMat adj = a.mat().adjoint();
  const bool near = a.margin() < tol.accurate_margin;
  if (a.dim_h() < a.dim_k()) {
    const CMat defect = CMat::identity(a.dim_h()) - a.mat() * adj;
    return OperatorHK(adj * inv_sqrtm(defect, tol.defect_floor, tol), near);
  }
  const CMat defect = CMat::identity(a.dim_k()) - adj * a.mat();
  return OperatorHK(inv_sqrtm(defect, tol.defect_floor, tol) * adj, near);
}

/// L_T(X) = (I + T*T)^{1/2} X* − T* (I + XX*)^{1/2}, a dimH × dimK matrix.
///
/// Rearranged with (I + T*T)^{1/2}T* = T*(I + TT*)^{1/2} into
///   (I + T*T)^{1/2}(X − T)* + T*[(I + TT*)^{1/2} − (I + XX*)^{1/2}],
/// which vanishes exactly at X = T instead of leaving ε‖T‖² of cancellation.
inline CMat l_op(const OperatorHK& t, const OperatorHK& x,
                 const Tolerances& tol = default_tolerances()) {
  detail::require_same_spaces(t, x, "l_op");
  const CMat tadj = t.adjoint();
  const CMat xadj = x.adjoint();
  return detail::one_plus_gram_sqrt(tadj * t.mat(), tol) * (xadj - tadj) +
         tadj * (detail::one_plus_gram_sqrt(t.mat() * tadj, tol) -
                 detail::one_plus_gram_sqrt(x.mat() * xadj, tol));
}

/// R_T(X) = (I + XX*)^{1/2} (I + TT*)^{1/2} − X T*, a dimK × dimK matrix.
inline CMat r_op(const OperatorHK& t, const OperatorHK& x,
                 const Tolerances& tol = default_tolerances()) {
  detail::require_same_spaces(t, x, "r_op");
  const CMat tadj = t.adjoint();
  return detail::one_plus_gram_sqrt(x.mat() * x.adjoint(), tol) *
             detail::one_plus_gram_sqrt(t.mat() * tadj, tol) -
         x.mat() * tadj;
}

/// R_S(T)⁻¹ = (I + SS*)^{-1/2} [I − T(I + T*T)^{-1/2}(I + S*S)^{-1/2}S*]⁻¹ (I + TT*)^{-1/2}.
inline CMat r_inv_closed(const OperatorHK& s, const OperatorHK& t,
                         const Tolerances& tol = default_tolerances()) {
  detail::require_same_spaces(s, t, "r_inv_closed");
  const CMat sadj = s.adjoint();
  const CMat tadj = t.adjoint();
  const std::size_t k = s.dim_k();
  const CMat coupling = t.mat() * detail::one_plus_gram_inv_sqrt(tadj * t.mat(), tol) *
                        detail::one_plus_gram_inv_sqrt(sadj * s.mat(), tol) * sadj;
  return detail::one_plus_gram_inv_sqrt(s.mat() * sadj, tol) *
         inverse(CMat::identity(k) - coupling, tol) *
         detail::one_plus_gram_inv_sqrt(t.mat() * tadj, tol);
}

/// d(T, S) = tanh⁻¹‖L_T(S) R_S(T)⁻¹‖.
///
/// Evaluated as log‖R_S(T)‖ + log1p‖L_T(S) R_S(T)⁻¹‖: the two expressions agree
/// because I − M*M = (R R*)⁻¹ for M = L_T(S) R_S(T)⁻¹, i.e. ‖R_S(T)‖ = cosh d.
/// The direct tanh⁻¹ loses every digit once ‖M‖ is within ~1e-15 of one, which
/// happens for operators of norm ~1e3.
inline double metric_d(const OperatorHK& t, const OperatorHK& s,
                       const Tolerances& tol = default_tolerances()) {
  const CMat r = r_op(s, t, tol);
  const CMat m = l_op(t, s, tol) * inverse(r, tol);
  return detail::atanh_from_cosh(op_norm(m, tol), op_norm(r, tol));
}

/// Same distance through the ball: K_B(T̂, Ŝ) = tanh⁻¹‖ψ_T̂(Ŝ)‖.
inline double metric_d_ball_route(const OperatorHK& t, const OperatorHK& s,
                                  const Tolerances& tol = default_tolerances()) {
  detail::require_same_spaces(t, s, "metric_d_ball_route");
  return ball_dist(bounded_transform(t, tol), bounded_transform(s, tol), tol);
}

}  // namespace opball
