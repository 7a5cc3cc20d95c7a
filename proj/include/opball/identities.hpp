#pragma once

// Randomized identity suite over the ball, transform and symmetry modules.
// Every residual is scaled so that a single tolerance applies to all of them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "opball/ball.hpp"
#include "opball/matkernel.hpp"
#include "opball/random.hpp"
#include "opball/symmetry.hpp"
#include "opball/transform.hpp"

namespace opball {

/// Ball point of the given shape with norm uniform in [0, 1 − min_margin].
inline BallPoint random_ball_point(Rng& rng, std::size_t dim_h, std::size_t dim_k,
                                   double min_margin) {
  CMat g = random_gaussian(rng, dim_h, dim_k);
  const double target = uniform(rng, 0.0, 1.0 - min_margin);
  const double n = op_norm(g);
  if (n > 0.0) g *= cplx(target / n);
  return BallPoint(std::move(g));
}

/// Operator H → K with entry scale log-uniform in [lo, hi].
inline OperatorHK random_operator(Rng& rng, std::size_t dim_h, std::size_t dim_k, double lo,
                                  double hi) {
  return OperatorHK(random_gaussian(rng, dim_k, dim_h, log_uniform(rng, lo, hi)));
}

/// Operator H → K with spectral norm log-uniform in [lo, hi].
inline OperatorHK random_operator_with_norm(Rng& rng, std::size_t dim_h, std::size_t dim_k,
                                            double lo, double hi) {
  CMat g = random_gaussian(rng, dim_k, dim_h);
  g *= cplx(log_uniform(rng, lo, hi) / op_norm(g));
  return OperatorHK(std::move(g));
}

/// Ball point from K to H that is symmetric for `pair` (which must have C₂C₁ = id_K).
inline BallPoint random_symmetric_ball_point(Rng& rng, const ConjugationPair& pair,
                                             double min_margin) {
  CMat a = project_symmetric(random_gaussian(rng, pair.dim_dst(), pair.dim_src()), pair);
  const double target = uniform(rng, 0.0, 1.0 - min_margin);
  const double n = op_norm(a);
  if (n > 0.0) a *= cplx(target / n);
  return BallPoint(std::move(a));
}

struct IdentityConfig {
  std::uint64_t seed = 1;
  std::size_t trials = 100;
  std::size_t dim_h = 8;
  std::size_t dim_k = 3;
  double tol = 1e-8;
  unsigned threads = 1;
};

struct IdentityResult {
  std::string name;
  double max_residual = 0.0;
  bool pass = true;
};

namespace detail {

enum IdentityIndex : std::size_t {
  kMobiusRoundTrip,
  kCommutation,
  kMobiusInvariance,
  kBasePoint,
  kMetricTwoRoutes,
  kNormIdentity,
  kTransformRoundTrip,
  kClosedFormInverse,
  kGraphIdentity,
  kExtensionSymmetry,
  kBlockCharacterization,
  kInducedPair,
  kIdentityCount,
};

inline const char* identity_name(std::size_t i) {
  static const char* names[kIdentityCount] = {
      "mobius_round_trip",  "commutation_identity", "mobius_invariance",
      "base_point_formula", "metric_two_routes",    "bounded_transform_norm",
      "transform_round_trip", "closed_form_r_inverse", "graph_norm_identity",
      "extension_symmetry", "block_characterization", "induced_pair_symmetry",
  };
  return names[i];
}

// Residuals for one trial; block characterization reports a violation as +inf.
inline std::vector<double> identity_trial(const IdentityConfig& cfg, std::uint64_t trial_seed) {
  Rng rng(trial_seed);
  const std::size_t h = cfg.dim_h;
  const std::size_t k = cfg.dim_k;
  std::vector<double> res(kIdentityCount, 0.0);

  // Ball geometry.
  const BallPoint a = random_ball_point(rng, h, k, 0.05);
  const BallPoint z = random_ball_point(rng, h, k, 0.05);
  const BallPoint y = random_ball_point(rng, h, k, 0.05);
  res[kMobiusRoundTrip] = op_norm(mobius_inv(a, mobius(a, z)).mat() - z.mat());
  {
    const CMat& am = a.mat();
    const CMat& zm = z.mat();
    const CMat ik = CMat::identity(k);
    const CMat ih = CMat::identity(h);
    const CMat lhs = (zm - am) * inverse(ik - am.adjoint() * am) * (ik - am.adjoint() * zm);
    const CMat rhs = (ih - zm * am.adjoint()) * inverse(ih - am * am.adjoint()) * (zm - am);
    res[kCommutation] = op_norm(lhs - rhs) / (1.0 + a.norm() + z.norm());
  }
  res[kMobiusInvariance] =
      std::abs(ball_dist(mobius(a, z), mobius(a, y)) - ball_dist(z, y));
  res[kBasePoint] =
      std::abs(ball_dist(BallPoint::origin(h, k), y) - std::atanh(y.norm()));

  // Transform and metric.
  const OperatorHK t = random_operator(rng, h, k, 1e-2, 1e3);
  const OperatorHK s = random_operator_with_norm(rng, h, k, 1e-2, 1e3);
  const OperatorHK u = random_operator_with_norm(rng, h, k, 1e-2, 1e3);
  res[kMetricTwoRoutes] = std::abs(metric_d(u, s) - metric_d_ball_route(u, s));
  {
    const double g = op_norm(t.mat() * t.adjoint());
    const double nh = bounded_transform(t).norm();
    res[kNormIdentity] = std::abs(nh * nh - g / (1.0 + g)) / (1.0 + g);
  }
  {
    const OperatorHK back = inverse_bounded_transform(bounded_transform(u));
    const double op_rt = op_norm(back.mat() - u.mat()) / (1.0 + op_norm(u.mat()));
    const double ball_rt = op_norm(bounded_transform(inverse_bounded_transform(a)).mat() - a.mat());
    res[kTransformRoundTrip] = std::max(op_rt, ball_rt);
  }
  {
    const CMat direct = inverse(r_op(s, u));
    res[kClosedFormInverse] = op_norm(r_inv_closed(s, u) - direct) / op_norm(direct);
  }

  // Symmetry.
  const ConjugationPair pair_kh = random_pair(k, h, split_seed(trial_seed, 1));
  const BallPoint sym_a = random_symmetric_ball_point(rng, pair_kh, 0.05);
  const SymmetricOperator sym = symmetric_from_ball(sym_a, pair_kh);
  {
    const CMat d_inv = inv_sqrtm(CMat::identity(h) - sym_a.mat() * sym_a.mat().adjoint(), 1e-13);
    double worst = 0.0;
    for (int v = 0; v < 4; ++v) {
      const CMat x = random_gaussian(rng, h, 1);
      const double lhs = std::pow((sym.op.mat() * x).frobenius_norm(), 2) +
                         std::pow(x.frobenius_norm(), 2);
      const double rhs = std::pow((d_inv * x).frobenius_norm(), 2);
      worst = std::max(worst, std::abs(lhs - rhs) / rhs);
    }
    res[kGraphIdentity] = worst;
  }
  {
    const ConjugationPair pair_hk = random_pair(h, k, split_seed(trial_seed, 2));
    const SymmetricExtension ext = symmetric_extension(t, pair_hk);
    res[kExtensionSymmetry] = symmetry_residual(ext.op, ext.pair) / (1.0 + op_norm(t.mat()));
  }
  {
    // n × m model with n = h, m = k: symmetric top block ⇔ zero residual.
    const ConjugationPair canon = canonical_pair(k, h);
    CMat sym_model = random_gaussian(rng, h, k);
    CMat top = random_complex_symmetric(rng, k);
    sym_model.set_block(0, 0, top);
    CMat asym_model = sym_model;
    asym_model(0, k - 1) += cplx(0.5, 0.0);
    const double r_sym = symmetry_residual(sym_model, canon);
    const double r_asym = symmetry_residual(asym_model, canon);
    const double asym_top = op_norm(asym_model.block(0, 0, k, k) -
                                    asym_model.block(0, 0, k, k).transpose());
    const bool consistent = k == 1 ? true : r_asym > cfg.tol && asym_top > 1e-9;
    res[kBlockCharacterization] = consistent ? r_sym : INFINITY;
  }
  {
    const double pair_res = sym.pair.residuals().max();
    res[kInducedPair] = std::max(pair_res, symmetry_residual(sym.op, sym.pair));
  }
  return res;
}

}  // namespace detail

inline std::vector<IdentityResult> run_identities(const IdentityConfig& cfg) {
  std::vector<IdentityResult> out;
  if (cfg.trials == 0) return out;
  std::vector<std::vector<double>> per_trial(cfg.trials);
  std::vector<std::exception_ptr> errors(cfg.trials);
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < cfg.trials; i += stride) {
      try {
        per_trial[i] = detail::identity_trial(cfg, split_seed(cfg.seed, i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned workers =
      std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(cfg.trials)));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (std::size_t i = 0; i < detail::kIdentityCount; ++i) {
    IdentityResult r{detail::identity_name(i), 0.0, true};
    for (const auto& trial : per_trial) r.max_residual = std::max(r.max_residual, trial[i]);
    r.pass = r.max_residual <= cfg.tol;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace opball
