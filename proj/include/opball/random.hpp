#pragma once

// Seeded generators for test ensembles and experiments. Everything here is a
// deterministic function of the seed.

#include <cmath>
#include <cstdint>
#include <random>

#include "opball/cmat.hpp"
#include "opball/error.hpp"

namespace opball {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent per-trial seeds from one master seed.
constexpr std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Entries with independent standard normal real and imaginary parts.
inline CMat random_gaussian(Rng& rng, std::size_t rows, std::size_t cols, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMat m(rows, cols);
  for (cplx& z : m.data()) {
    const double re = normal(rng);
    const double im = normal(rng);
    z = scale * cplx(re, im);
  }
  return m;
}

/// Orthonormal columns by modified Gram-Schmidt with one reorthogonalization pass.
inline CMat orthonormal_columns(CMat m) {
  if (m.cols() > m.rows()) {
    throw Error(ErrorKind::BadDims, "cannot orthonormalize " + m.shape_string() + " columns");
  }
  for (std::size_t j = 0; j < m.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < j; ++i) {
        cplx dot = 0.0;
        for (std::size_t r = 0; r < m.rows(); ++r) dot += std::conj(m(r, i)) * m(r, j);
        for (std::size_t r = 0; r < m.rows(); ++r) m(r, j) -= dot * m(r, i);
      }
    }
    double nrm = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r) nrm += std::norm(m(r, j));
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) throw Error(ErrorKind::Singular, "rank-deficient sample");
    for (std::size_t r = 0; r < m.rows(); ++r) m(r, j) /= nrm;
  }
  return m;
}

inline CMat random_isometry(Rng& rng, std::size_t rows, std::size_t cols) {
  return orthonormal_columns(random_gaussian(rng, rows, cols));
}

inline CMat random_unitary(Rng& rng, std::size_t n) { return random_isometry(rng, n, n); }

/// Random complex symmetric (B = Bᵀ) matrix.
inline CMat random_complex_symmetric(Rng& rng, std::size_t n, double scale = 1.0) {
  CMat g = random_gaussian(rng, n, n, scale);
  CMat s = g + g.transpose();
  s *= 0.5;
  return s;
}

/// Random Hermitian matrix.
inline CMat random_hermitian(Rng& rng, std::size_t n, double scale = 1.0) {
  CMat g = random_gaussian(rng, n, n, scale);
  CMat h = g + g.adjoint();
  h *= 0.5;
  return h;
}

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Log-uniform draw in [lo, hi].
inline double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

}  // namespace opball
