#pragma once

// Conjugation pairs between two spaces and complex symmetry with respect to them.
//
// Conventions. Inner products are linear in the first slot. A conjugate-linear
// map C is stored as its linear part J and acts as x ↦ J·conj(x). Composition of
// two such maps is linear: C C' ↦ J·conj(J'). With this convention the pairing
// ⟨C₁x, y⟩ = ⟨C₂y, x⟩ holds exactly when J₁ = J₂ᵀ.
//
// Translation table used below (C₁ = fwd, C₂ = bwd, T linear):
//   C₂C₁         ↦ J₂·conj(J₁)
//   C₂T = T*C₁   ↦ J₂·conj(T) = T*·J₁
//   TC₂ = C₁T*   ↦ T·J₂ = J₁·Tᵀ
//   C₁T*C₁       ↦ J₁·Tᵀ·conj(J₁)

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "opball/ball.hpp"
#include "opball/cmat.hpp"
#include "opball/config.hpp"
#include "opball/error.hpp"
#include "opball/matkernel.hpp"
#include "opball/random.hpp"
#include "opball/transform.hpp"

namespace opball {

/// Which composition of the pair is the identity.
enum class PairSide {
  BwdFwdIsId,  // C₂C₁ = id on the source space
  FwdBwdIsId,  // C₁C₂ = id on the destination space
};

enum class Direction { Fwd, Bwd };

struct PairResiduals {
  double pairing = 0.0;      // ‖J₁ − J₂ᵀ‖
  double composition = 0.0;  // identity-composition defect on the recorded side
  double isometry = 0.0;     // orthonormality defect of the isometric factor
  double max() const { return std::max({pairing, composition, isometry}); }
};

/// A conjugation pair (C₁, C₂) from a source space to a destination space.
class ConjugationPair {
 public:
  /// Validates the pair invariants at `tolerance` and throws InvalidPair otherwise.
  ConjugationPair(CMat jfwd, CMat jbwd, PairSide side,
                  double tolerance = default_tolerances().pair)
      : jfwd_(std::move(jfwd)), jbwd_(std::move(jbwd)), side_(side) {
    if (jfwd_.rows() == 0 || jfwd_.cols() == 0 || jbwd_.rows() != jfwd_.cols() ||
        jbwd_.cols() != jfwd_.rows()) {
      throw Error(ErrorKind::ShapeMismatch, "pair factors " + jfwd_.shape_string() + " and " +
                                                jbwd_.shape_string() + " are not transposed shapes");
    }
    const PairResiduals r = residuals();
    if (!(r.max() <= tolerance)) {
      throw Error(ErrorKind::InvalidPair,
                  "pairing " + std::to_string(r.pairing) + ", composition " +
                      std::to_string(r.composition) + ", isometry " + std::to_string(r.isometry));
    }
  }

  std::size_t dim_src() const noexcept { return jfwd_.cols(); }
  std::size_t dim_dst() const noexcept { return jfwd_.rows(); }
  const CMat& jfwd() const noexcept { return jfwd_; }
  const CMat& jbwd() const noexcept { return jbwd_; }
  PairSide side() const noexcept { return side_; }

  PairResiduals residuals() const {
    PairResiduals r;
    r.pairing = op_norm(jfwd_ - jbwd_.transpose());
    if (side_ == PairSide::BwdFwdIsId) {
      r.composition = op_norm(jbwd_ * jfwd_.conj() - CMat::identity(dim_src()));
      r.isometry = op_norm(jfwd_.adjoint() * jfwd_ - CMat::identity(dim_src()));
    } else {
      r.composition = op_norm(jfwd_ * jbwd_.conj() - CMat::identity(dim_dst()));
      r.isometry = op_norm(jbwd_.adjoint() * jbwd_ - CMat::identity(dim_dst()));
    }
    return r;
  }

  /// ‖C₂C₁ − id_src‖ regardless of the recorded side.
  double source_composition_defect() const {
    return op_norm(jbwd_ * jfwd_.conj() - CMat::identity(dim_src()));
  }

  /// Linear matrix of C₁C₂ acting on the destination space.
  CMat fwd_bwd_linear() const { return jfwd_ * jbwd_.conj(); }

 private:
  CMat jfwd_;
  CMat jbwd_;
  PairSide side_;
};

/// C₁(z) = (z̄₁, …, z̄ₘ, 0, …, 0) into Cⁿ and C₂(z) = (z̄₁, …, z̄ₘ) back.
inline ConjugationPair canonical_pair(std::size_t m, std::size_t n) {
  if (m < 1 || n < m) {
    throw Error(ErrorKind::BadDims, "canonical pair needs n >= m >= 1, got m=" +
                                        std::to_string(m) + " n=" + std::to_string(n));
  }
  CMat jfwd(n, m);
  for (std::size_t i = 0; i < m; ++i) jfwd(i, i) = 1.0;
  CMat jbwd = jfwd.transpose();
  return ConjugationPair(std::move(jfwd), std::move(jbwd), PairSide::BwdFwdIsId);
}

/// Plain entrywise conjugation on Cⁿ.
inline ConjugationPair identity_pair(std::size_t n) { return canonical_pair(n, n); }

/// Seeded random pair; the identity composition lives on the smaller space
/// (on the source when the dimensions agree).
inline ConjugationPair random_pair(std::size_t dim_src, std::size_t dim_dst, std::uint64_t seed) {
  if (dim_src < 1 || dim_dst < 1) throw Error(ErrorKind::BadDims, "random_pair needs positive dims");
  Rng rng(seed);
  if (dim_src <= dim_dst) {
    CMat jfwd = random_isometry(rng, dim_dst, dim_src);
    CMat jbwd = jfwd.transpose();
    return ConjugationPair(std::move(jfwd), std::move(jbwd), PairSide::BwdFwdIsId);
  }
  CMat jbwd = random_isometry(rng, dim_src, dim_dst);
  CMat jfwd = jbwd.transpose();
  return ConjugationPair(std::move(jfwd), std::move(jbwd), PairSide::FwdBwdIsId);
}

/// Evaluates C₁x (Fwd) or C₂x (Bwd), i.e. J·conj(x).
inline std::vector<cplx> conj_apply(const ConjugationPair& pair, Direction dir,
                                    std::span<const cplx> x) {
  const CMat& j = dir == Direction::Fwd ? pair.jfwd() : pair.jbwd();
  if (x.size() != j.cols()) {
    throw Error(ErrorKind::ShapeMismatch, "vector of length " + std::to_string(x.size()) +
                                              " for conjugate-linear map " + j.shape_string());
  }
  std::vector<cplx> y(j.rows());
  for (std::size_t i = 0; i < j.rows(); ++i)
    for (std::size_t k = 0; k < j.cols(); ++k) y[i] += j(i, k) * std::conj(x[k]);
  return y;
}

/// Residual of (C₁, C₂)-symmetry for an operator source → destination
/// (a dim_dst × dim_src matrix). Zero exactly when the operator is symmetric.
inline double symmetry_residual(const CMat& t, const ConjugationPair& pair) {
  if (t.rows() != pair.dim_dst() || t.cols() != pair.dim_src()) {
    throw Error(ErrorKind::ShapeMismatch, "operator " + t.shape_string() + " against pair " +
                                              std::to_string(pair.dim_src()) + "->" +
                                              std::to_string(pair.dim_dst()));
  }
  if (pair.side() == PairSide::BwdFwdIsId) {
    return op_norm(pair.jbwd() * t.conj() - t.adjoint() * pair.jfwd());
  }
  return op_norm(t * pair.jbwd() - pair.jfwd() * t.transpose());
}

inline double symmetry_residual(const OperatorHK& t, const ConjugationPair& pair) {
  return symmetry_residual(t.mat(), pair);
}

/// (C̃₁, C̃₂) = ([[0, C₁], [C₁, 0]], [[0, C₂], [C₂, 0]]) on the doubled spaces.
inline ConjugationPair doubled_pair(const ConjugationPair& pair) {
  return ConjugationPair(block_antidiag(pair.jfwd(), pair.jfwd()),
                         block_antidiag(pair.jbwd(), pair.jbwd()), pair.side());
}

/// diag(T, C₁T*C₁) as a matrix on the doubled spaces.
inline CMat extend_matrix(const CMat& t, const ConjugationPair& pair) {
  if (t.rows() != pair.dim_dst() || t.cols() != pair.dim_src()) {
    throw Error(ErrorKind::ShapeMismatch, "operator " + t.shape_string() + " against pair " +
                                              std::to_string(pair.dim_src()) + "->" +
                                              std::to_string(pair.dim_dst()));
  }
  return block_diag(t, pair.jfwd() * t.transpose() * pair.jfwd().conj());
}

/// Orthogonal projection of A (source → destination) onto the operators that are
/// symmetric for a pair with C₂C₁ = id on the source: A is symmetric exactly when
/// J₁*A is a symmetric matrix, so keep sym(J₁*A) on ran J₁ and A on its complement.
inline CMat project_symmetric(const CMat& a, const ConjugationPair& pair) {
  if (!(pair.source_composition_defect() <= default_tolerances().pair)) {
    throw Error(ErrorKind::InvalidPair, "projection requires C2C1 = id on the source");
  }
  const CMat& j = pair.jfwd();
  CMat w = j.adjoint() * a;
  w = (w + w.transpose()) * cplx(0.5);
  return j * w + (a - j * (j.adjoint() * a));
}

struct SymmetricExtension {
  OperatorHK op;
  ConjugationPair pair;
};

/// Complex symmetric extension of an arbitrary operator on the doubled spaces.
inline SymmetricExtension symmetric_extension(const OperatorHK& t, const ConjugationPair& pair) {
  return {OperatorHK(extend_matrix(t.mat(), pair)), doubled_pair(pair)};
}

/// Given A in the ball of B(K, H), symmetric for a pair (C₁, C₂) from K to H
/// with C₂C₁ = id_K, builds the pair from H to K
///   𝒞₁ = (I − A*C₁C₂A)^{-1/2} C₂ (I − AA*)^{1/2},
///   𝒞₂ = (I − AA*)^{1/2} C₁ (I − A*C₁C₂A)^{-1/2},
/// for which (I − A*A)^{-1/2}A* is symmetric. 𝒞₁𝒞₂ = id_K.
inline ConjugationPair induced_pair(const BallPoint& a, const ConjugationPair& pair,
                                    const Tolerances& tol = default_tolerances()) {
  if (pair.dim_src() != a.dim_k() || pair.dim_dst() != a.dim_h()) {
    throw Error(ErrorKind::ShapeMismatch, "pair must run from K to H for A " +
                                              a.mat().shape_string());
  }
  if (!(pair.source_composition_defect() <= tol.pair)) {
    throw Error(ErrorKind::InvalidPair, "construction requires C2C1 = id on K");
  }
  const double res = symmetry_residual(a.mat(), pair);
  if (!(res <= tol.symmetric_input)) {
    throw Error(ErrorKind::NotSymmetric, "input residual " + std::to_string(res));
  }
  const CMat& am = a.mat();
  const CMat adj = am.adjoint();
  const CMat m = hermitian_part(CMat::identity(a.dim_k()) - adj * pair.fwd_bwd_linear() * am);
  const CMat m_inv_sqrt = inv_sqrtm(m, tol.pair_defect_floor, tol);
  const CMat defect_h = sqrtm(CMat::identity(a.dim_h()) - am * adj, tol);

  return ConjugationPair(m_inv_sqrt * pair.jbwd() * defect_h.conj(),
                         defect_h * pair.jfwd() * m_inv_sqrt.conj(), PairSide::FwdBwdIsId,
                         tol.induced_pair);
}

struct SymmetricOperator {
  OperatorHK op;
  ConjugationPair pair;
};

/// T = (I − A*A)^{-1/2}A* together with the induced pair that makes it symmetric.
inline SymmetricOperator symmetric_from_ball(const BallPoint& a, const ConjugationPair& pair,
                                             const Tolerances& tol = default_tolerances()) {
  ConjugationPair induced = induced_pair(a, pair, tol);
  return {inverse_bounded_transform(a, tol), std::move(induced)};
}

}  // namespace opball
