#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qnr/linalg.hpp"
#include "qnr/qrange.hpp"

namespace qnr {

// S_alpha = {z : Re z > 0, |Im z| <= tan(alpha) Re z}, alpha in [0, pi/2).
struct SectorParams {
  double alpha = 0.0;
};

bool sector_membership(Complex z, SectorParams p);

struct SectorialVerdict {
  bool is_q_sectorial = false;
  std::optional<double> alpha_estimate;  // raw index estimate
  std::optional<double> alpha_margined;  // estimate + safety margin, kept below pi/2
  double min_real_part = 0.0;
  std::optional<Complex> witness;
};

// Closed form for Hermitian A and real q in (0, 1).
SectorialVerdict hermitian_q_sectorial_test(const ComplexMatrix& a, double q);

// Index from the outer boundary polygon. Sectorial only if every vertex and h(pi)
// clear the imaginary axis by the separation tolerance.
SectorialVerdict sectorial_index_estimate(const ComplexMatrix& a, const QParam& q, int m = 256,
                                          int restarts = 32, Seed seed = {});
SectorialVerdict verdict_from_polygon(const BoundaryPolygon& poly, double h_pi);

struct ClosureCheck {
  std::string name;
  bool sectorial = false;
  double alpha = 0.0;
  double allowed = 0.0;
  bool passed = false;
};

struct ClosureReport {
  double alpha = 0.0;  // common index of the inputs
  std::vector<ClosureCheck> checks;
  bool all_passed = false;
};

// Transpose, conjugate, adjoint and positive combinations of q-sectorial A, B.
ClosureReport closure_suite(const ComplexMatrix& a, const ComplexMatrix& b, double q, double lambda1,
                            double lambda2, int m = 256, int restarts = 32, Seed seed = {});

struct GeneratorOptions {
  int directions = 256;
  int restarts = 32;
  double low_window = 0.1;   // accept alpha >= target - low_window
  double high_window = 0.05; // accept alpha <= target + high_window
};

struct GeneratedSectorial {
  ComplexMatrix matrix;
  SectorialVerdict verdict;
  double epsilon = 0.0;
  bool in_window = false;
};

// A = I + eps B with B a seeded random matrix of unit spectral norm; eps by bisection.
GeneratedSectorial generate_q_sectorial(std::size_t dim, const QParam& q, double target_alpha, Seed seed,
                                        const GeneratorOptions& opts = {});
ComplexMatrix random_q_sectorial(std::size_t dim, const QParam& q, double target_alpha, Seed seed);

}  // namespace qnr
