#pragma once

// Approximating an operator H → K by complex symmetric operators: truncate its
// bounded transform to the first n coordinates of H, extend symmetrically to the
// doubled spaces, and pull back through the inverse transform.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "opball/ball.hpp"
#include "opball/cmat.hpp"
#include "opball/config.hpp"
#include "opball/error.hpp"
#include "opball/random.hpp"
#include "opball/symmetry.hpp"
#include "opball/transform.hpp"

namespace opball {

/// Rows 1..n of T̂ kept, the rest zeroed (coordinate bases on H and K).
inline BallPoint truncate(const BallPoint& that, std::size_t n) {
  if (n < 1 || n > that.dim_h()) {
    throw Error(ErrorKind::BadDepth, "depth " + std::to_string(n) + " outside [1, " +
                                         std::to_string(that.dim_h()) + "]");
  }
  CMat m = that.mat();
  for (std::size_t i = n; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = 0.0;
  return BallPoint(std::move(m));
}

/// One member T_n of the approximating sequence.
struct ApproxStep {
  std::size_t depth;
  BallPoint extended;    // Ã_n in the ball of B(K⊕K, H⊕H)
  OperatorHK op;         // T_n : H⊕H → K⊕K
  ConjugationPair pair;  // pair from H⊕H to K⊕K making T_n symmetric
  double sym_residual;
  double margin;
};

namespace detail {

inline ApproxStep approx_from_transform(const BallPoint& that, const ConjugationPair& pair,
                                        std::size_t n, const Tolerances& tol) {
  const BallPoint a_n = truncate(that, n);
  BallPoint extended(extend_matrix(a_n.mat(), pair), tol);
  SymmetricOperator sym = symmetric_from_ball(extended, doubled_pair(pair), tol);
  const double res = symmetry_residual(sym.op, sym.pair);
  const double margin = extended.margin();
  return ApproxStep{n, std::move(extended), std::move(sym.op), std::move(sym.pair), res, margin};
}

inline void require_pair_k_to_h(const OperatorHK& t, const ConjugationPair& pair) {
  if (pair.dim_src() != t.dim_k() || pair.dim_dst() != t.dim_h()) {
    throw Error(ErrorKind::ShapeMismatch,
                "pair must run from K (" + std::to_string(t.dim_k()) + ") to H (" +
                    std::to_string(t.dim_h()) + ")");
  }
}

}  // namespace detail

/// T_n for a single depth n.
inline ApproxStep approx_operator(const OperatorHK& t, const ConjugationPair& pair, std::size_t n,
                                  const Tolerances& tol = default_tolerances()) {
  detail::require_pair_k_to_h(t, pair);
  return detail::approx_from_transform(bounded_transform(t, tol), pair, n, tol);
}

struct ProfileRow {
  std::size_t n;
  double dist;
  double sym_residual;
  double margin;
};

/// d(T_n, T_ref) for n = 1..dimH, with T_ref the full-depth iterate T_p.
struct ApproxProfile {
  std::vector<ProfileRow> rows;

  static constexpr double kFinalDistTol = 1e-8;
  static constexpr double kSymTol = 1e-8;

  /// Human-readable list of violated invariants; empty when the profile is valid.
  std::vector<std::string> violations() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].n != i + 1) out.push_back("depths are not 1..p");
      if (!(rows[i].sym_residual <= kSymTol)) {
        out.push_back("symmetry residual " + std::to_string(rows[i].sym_residual) + " at n=" +
                      std::to_string(rows[i].n));
      }
    }
    if (rows.empty()) {
      out.push_back("empty profile");
    } else if (!(rows.back().dist <= kFinalDistTol)) {
      out.push_back("final distance " + std::to_string(rows.back().dist));
    }
    return out;
  }

  bool valid() const { return violations().empty(); }

  /// True when no depth gets closer to the reference than the full depth.
  bool min_at_full_depth() const {
    if (rows.empty()) return false;
    return std::all_of(rows.begin(), rows.end(),
                       [&](const ProfileRow& r) { return r.dist >= rows.back().dist; });
  }

  double max_sym_residual() const {
    double m = 0.0;
    for (const auto& r : rows) m = std::max(m, r.sym_residual);
    return m;
  }
};

inline ApproxProfile density_profile(const OperatorHK& t, const ConjugationPair& pair,
                                     const Tolerances& tol = default_tolerances()) {
  detail::require_pair_k_to_h(t, pair);
  const BallPoint that = bounded_transform(t, tol);
  const std::size_t p = t.dim_h();
  const ApproxStep reference = detail::approx_from_transform(that, pair, p, tol);

  ApproxProfile profile;
  profile.rows.reserve(p);
  for (std::size_t n = 1; n <= p; ++n) {
    const ApproxStep step = detail::approx_from_transform(that, pair, n, tol);
    profile.rows.push_back({n, metric_d(step.op, reference.op, tol), step.sym_residual, step.margin});
  }
  return profile;
}

struct TrialResult {
  std::uint64_t seed;
  double entry_scale;
  ApproxProfile profile;
};

struct EnsembleReport {
  std::size_t dim_h;
  std::size_t dim_k;
  std::uint64_t seed;
  std::vector<TrialResult> trials;

  std::size_t valid_trials() const {
    return static_cast<std::size_t>(std::count_if(
        trials.begin(), trials.end(), [](const TrialResult& t) { return t.profile.valid(); }));
  }

  std::size_t min_at_full_depth_trials() const {
    return static_cast<std::size_t>(
        std::count_if(trials.begin(), trials.end(),
                      [](const TrialResult& t) { return t.profile.min_at_full_depth(); }));
  }

  double max_sym_residual() const {
    double m = 0.0;
    for (const auto& t : trials) m = std::max(m, t.profile.max_sym_residual());
    return m;
  }

  /// Median over trials of d(T_n, T_ref), one entry per depth.
  std::vector<double> median_dist() const {
    std::vector<double> out;
    if (trials.empty()) return out;
    for (std::size_t i = 0; i < dim_h; ++i) {
      std::vector<double> column;
      column.reserve(trials.size());
      for (const auto& t : trials) column.push_back(t.profile.rows[i].dist);
      std::sort(column.begin(), column.end());
      const std::size_t mid = column.size() / 2;
      out.push_back(column.size() % 2 == 1 ? column[mid] : 0.5 * (column[mid - 1] + column[mid]));
    }
    return out;
  }

  bool median_nonincreasing() const {
    const auto med = median_dist();
    for (std::size_t i = 1; i < med.size(); ++i)
      if (med[i] > med[i - 1]) return false;
    return true;
  }

  bool all_valid() const { return valid_trials() == trials.size(); }
};

/// Random input of one trial: T : C^p → C^q with complex Gaussian entries at a
/// log-uniform scale in [0.1, 10], and a random pair from K to H.
struct TrialInput {
  double entry_scale;
  OperatorHK op;
  ConjugationPair pair;
};

inline TrialInput draw_trial_input(std::size_t p, std::size_t q, std::uint64_t trial_seed) {
  Rng rng(trial_seed);
  const double scale = log_uniform(rng, 0.1, 10.0);
  OperatorHK t(random_gaussian(rng, q, p, scale));
  return {scale, std::move(t), random_pair(q, p, split_seed(trial_seed, 0))};
}

inline TrialResult run_trial(std::size_t p, std::size_t q, std::uint64_t trial_seed,
                             const Tolerances& tol = default_tolerances()) {
  const TrialInput in = draw_trial_input(p, q, trial_seed);
  return {trial_seed, in.entry_scale, density_profile(in.op, in.pair, tol)};
}

/// Trial i uses split_seed(seed, i), so results do not depend on `threads`.
inline EnsembleReport ensemble_experiment(std::size_t p, std::size_t q, std::size_t trials,
                                          std::uint64_t seed, unsigned threads = 1,
                                          const Tolerances& tol = default_tolerances()) {
  if (q < 1 || p < q) {
    throw Error(ErrorKind::BadDims, "need 1 <= dim_k <= dim_h, got dim_h=" + std::to_string(p) +
                                        " dim_k=" + std::to_string(q));
  }
  std::vector<std::optional<TrialResult>> slots(trials);
  std::vector<std::exception_ptr> errors(trials);
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < trials; i += stride) {
      try {
        slots[i] = run_trial(p, q, split_seed(seed, i), tol);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(trials)));
  if (workers <= 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  EnsembleReport report{p, q, seed, {}};
  report.trials.reserve(trials);
  for (auto& s : slots) report.trials.push_back(std::move(*s));
  return report;
}

}  // namespace opball
