#pragma once

namespace qnr {

// Numerical tolerances shared across modules.
struct Tolerances {
  double entry = 1e-12;         // reconstruction / per-entry comparisons
  double hermitian = 1e-10;     // max |A - A*| accepted as Hermitian
  double eigen = 1e-10;         // Jacobi off-diagonal stopping threshold (relative)
  double unit = 1e-10;          // | ||x|| - 1 | accepted as a unit vector
  double slack_floor = -1e-9;   // outcome holds iff relative slack >= this
  double soft_floor = -1e-4;    // below slack_floor but above this: warning
  double square_zero = 1e-10;   // ||T^2|| <= this * max(1, ||T||^2)
  double normal = 1e-10;        // ||TT* - T*T|| <= this * max(1, ||T||^2)
  double sector_separation = 1e-9;
  double alpha_margin = 1e-3;   // radians added to estimated sectorial indices
};

inline constexpr Tolerances kTol{};

}  // namespace qnr
