#pragma once

// Dense complex kernels: Hermitian eigensolver, Hermitian functional calculus,
// spectral norm and inversion. Sized for desk-scale problems (n <= 64).

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "opball/cmat.hpp"
#include "opball/config.hpp"
#include "opball/error.hpp"

namespace opball {

struct HermSpectrum {
  std::vector<double> eigenvalues;  // ascending
  CMat basis;                       // eigenvectors as columns
};

namespace detail {

inline void require_square(const CMat& a, const char* what) {
  if (!a.is_square()) {
    throw Error(ErrorKind::ShapeMismatch, std::string(what) + " needs a square matrix, got " +
                                              a.shape_string());
  }
}

// Cyclic complex Jacobi on a Hermitian matrix. `a` is overwritten with its
// (numerically) diagonal form, `v` accumulates the rotations.
inline void jacobi_sweeps(CMat& a, CMat& v, const Tolerances& tol) {
  const std::size_t n = a.rows();
  const double eps = std::numeric_limits<double>::epsilon();
  const double scale = a.frobenius_norm();
  if (scale == 0.0 || n < 2) return;
  const double floor = tol.jacobi_offdiag * scale;

  for (int sweep = 0; sweep < tol.jacobi_max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double g = std::abs(apq);
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        if (g <= floor || g <= eps * std::sqrt(std::abs(app * aqq))) continue;
        rotated = true;

        const cplx phase = apq / g;
        const double tau = (aqq - app) / (2.0 * g);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = t * c;
        // J = [[c, s e], [-s conj(e), c]] on coordinates (p, q); A <- J* A J.
        const cplx jpq = s * phase;
        const cplx jqp = -s * std::conj(phase);

        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          a(k, p) = akp * c + akq * jqp;
          a(k, q) = akp * jpq + akq * c;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k);
          a(p, k) = c * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();

        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = v(k, p);
          const cplx vkq = v(k, q);
          v(k, p) = vkp * c + vkq * jqp;
          v(k, q) = vkp * jpq + vkq * c;
        }
      }
    }
    if (!rotated) return;
  }
  throw Error(ErrorKind::NoConvergence,
              "Jacobi iteration exceeded " + std::to_string(tol.jacobi_max_sweeps) + " sweeps");
}

}  // namespace detail

/// Hermitian part (P + P*)/2.
inline CMat hermitian_part(const CMat& p) {
  CMat h = p + p.adjoint();
  h *= 0.5;
  return h;
}

/// Eigendecomposition of a Hermitian matrix. Inputs within the Hermitian guard
/// are symmetrized first; anything further from Hermitian is rejected.
inline HermSpectrum herm_eig(const CMat& p, const Tolerances& tol = default_tolerances()) {
  detail::require_square(p, "herm_eig");
  // Frobenius norms keep the guard independent of the eigensolver itself.
  const double asym = (p - p.adjoint()).frobenius_norm();
  if (asym > tol.hermitian * std::max(1.0, p.frobenius_norm())) {
    throw Error(ErrorKind::NotHermitian,
                "asymmetry " + std::to_string(asym) + " exceeds guard for " + p.shape_string());
  }
  const std::size_t n = p.rows();
  CMat a = hermitian_part(p);
  CMat v = CMat::identity(n);
  detail::jacobi_sweeps(a, v, tol);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() < a(j, j).real();
  });

  HermSpectrum out{std::vector<double>(n), CMat(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.basis(i, k) = v(i, order[k]);
  }
  return out;
}

/// basis · diag(f(λ)) · basis*. Eigenvalues below `floor` raise
/// EigenvalueBelowFloorError, which upstream usually means a point left the ball.
template <typename F>
CMat herm_fun(const CMat& p, F&& f, double floor = -std::numeric_limits<double>::infinity(),
              const Tolerances& tol = default_tolerances()) {
  const HermSpectrum spec = herm_eig(p, tol);
  const std::size_t n = p.rows();
  for (double lambda : spec.eigenvalues) {
    if (lambda < floor) throw EigenvalueBelowFloorError(lambda, floor);
  }
  CMat scaled = spec.basis;
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = f(spec.eigenvalues[k]);
    for (std::size_t i = 0; i < n; ++i) scaled(i, k) *= fk;
  }
  return hermitian_part(scaled * spec.basis.adjoint());
}

/// Principal square root of a positive semidefinite matrix.
inline CMat sqrtm(const CMat& p, const Tolerances& tol = default_tolerances()) {
  // Roundoff can push a zero eigenvalue slightly negative; clamp those only.
  const double slack = -1e-12 * std::max(1.0, p.frobenius_norm());
  return herm_fun(p, [](double x) { return std::sqrt(std::max(x, 0.0)); }, slack, tol);
}

/// Inverse principal square root; every eigenvalue must be at least `floor`.
inline CMat inv_sqrtm(const CMat& p, double floor, const Tolerances& tol = default_tolerances()) {
  return herm_fun(p, [](double x) { return 1.0 / std::sqrt(x); }, floor, tol);
}

/// Spectral norm σ_max(A).
inline double op_norm(const CMat& a, const Tolerances& tol = default_tolerances()) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  const double m = a.max_abs();
  if (m == 0.0) return 0.0;
  // Scale first so the Gram matrix neither overflows nor underflows.
  CMat b = a * cplx(1.0 / m);
  const CMat gram = b.rows() <= b.cols() ? b * b.adjoint() : b.adjoint() * b;
  const HermSpectrum spec = herm_eig(gram, tol);
  return m * std::sqrt(std::max(spec.eigenvalues.back(), 0.0));
}

/// Gauss-Jordan inverse with partial pivoting.
inline CMat inverse(const CMat& a, const Tolerances& tol = default_tolerances()) {
  detail::require_square(a, "inverse");
  const std::size_t n = a.rows();
  const double threshold = tol.pivot * op_norm(a, tol);
  CMat m = a;
  CMat inv = CMat::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
    }
    const double pmag = std::abs(m(piv, col));
    if (pmag == 0.0 || pmag < threshold) {
      throw Error(ErrorKind::Singular, "pivot " + std::to_string(pmag) + " in column " +
                                           std::to_string(col) + " of " + a.shape_string());
    }
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(m(piv, j), m(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    }
    const cplx d = 1.0 / m(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      m(col, j) *= d;
      inv(col, j) *= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const cplx f = m(r, col);
      if (f == cplx{}) continue;
      for (std::size_t j = 0; j < n; ++j) {
        m(r, j) -= f * m(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

}  // namespace opball
