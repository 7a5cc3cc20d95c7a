#pragma once

namespace opball {

/// Numerical thresholds shared by the library, the tests and the CLI.
struct Tolerances {
  /// Allowed ‖P − P*‖ / max(1, ‖P‖) before herm_eig refuses the input.
  double hermitian = 1e-10;
  /// Jacobi skips off-diagonal entries smaller than this times ‖P‖_F.
  double jacobi_offdiag = 1e-18;
  int jacobi_max_sweeps = 64;
  /// Relative pivot threshold for Gauss-Jordan inversion.
  double pivot = 1e-13;
  /// Smallest admissible eigenvalue of a defect operator I − AA* or I − A*A.
  double defect_floor = 1e-13;
  /// Conjugation pair invariants for directly specified pairs.
  double pair = 1e-10;
  /// Conjugation pair invariants for pairs computed through square roots.
  double induced_pair = 1e-8;
  /// Symmetry precondition for the induced conjugation pair construction.
  double symmetric_input = 1e-8;
  /// Floor for I − A*C₁C₂A in the pair construction.
  double pair_defect_floor = 1e-12;
  /// Ball points closer than this to the boundary are flagged by the inverse transform.
  double accurate_margin = 1e-8;
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

}  // namespace opball
