#pragma once

#include <vector>

#include "qnr/linalg.hpp"

namespace qnr {

// q in the closed unit disc minus the origin.
class QParam {
 public:
  explicit QParam(Complex q);
  QParam(double q) : QParam(Complex(q, 0.0)) {}  // NOLINT(google-explicit-constructor)

  Complex value() const noexcept { return q_; }
  double modulus() const noexcept { return modulus_; }
  double s() const noexcept { return s_; }  // sqrt(1 - |q|^2)
  bool is_real() const noexcept { return q_.imag() == 0.0; }

 private:
  Complex q_;
  double modulus_;
  double s_;
};

enum class GradientMode { Analytic, CentralDifference };

struct AscentOptions {
  int restarts = 32;
  Seed seed{0};
  int max_iterations = 500;
  GradientMode gradient = GradientMode::Analytic;
};

// f(x) = |q| |<Tx,x>| + s sqrt(||Tx||^2 - |<Tx,x>|^2). sup over unit x is w_q(T).
double reduced_objective(const ComplexMatrix& t, const QParam& q, const ComplexVector& x);

// Riemannian gradient of reduced_objective at unit x (tangent to the sphere).
ComplexVector reduced_objective_gradient(const ComplexMatrix& t, const QParam& q,
                                         const ComplexVector& x,
                                         GradientMode mode = GradientMode::Analytic);

struct RadiusEstimate {
  double value = 0.0;     // f at a feasible x, hence a lower bound of w_q
  ComplexVector witness;  // unit x attaining value
};

RadiusEstimate q_numerical_radius(const ComplexMatrix& t, const QParam& q, const AscentOptions& opts);
RadiusEstimate q_numerical_radius(const ComplexMatrix& t, const QParam& q, int restarts = 32,
                                  Seed seed = {});

// Sampling oracle: max |<Tx,y>| over random feasible pairs (x, y).
double q_radius_bruteforce(const ComplexMatrix& t, const QParam& q, int trials, Seed seed);

struct SupportPoint {
  double value = 0.0;     // h(theta) lower estimate
  Complex point;          // boundary point z with Re(e^{-i theta} z) = value
  ComplexVector witness;
};

// h(theta) = sup over unit x of Re(e^{-i theta} q <Tx,x>) + s sqrt(||Tx||^2 - |<Tx,x>|^2).
SupportPoint support_point(const ComplexMatrix& t, const QParam& q, double theta,
                           const AscentOptions& opts,
                           const std::vector<ComplexVector>& warm_starts = {});
double support_function(const ComplexMatrix& t, const QParam& q, double theta, int restarts = 32,
                        Seed seed = {});

struct BoundaryPolygon {
  QParam q{1.0};
  std::vector<double> directions;
  std::vector<double> support_values;
  std::vector<Complex> support_points;
  std::vector<Complex> vertices;  // vertices[k] lies on lines k and k+1
  bool degenerate = false;        // range is numerically a single point; one vertex
};

BoundaryPolygon boundary_polygon(const ComplexMatrix& t, const QParam& q, int m, int restarts = 32,
                                 Seed seed = {});

struct EllipseDisc {
  double center_x = 0.0;
  double center_y = 0.0;
  double semi_axis_x = 0.0;
  double semi_axis_y = 0.0;

  bool contains(Complex z, double tol = 0.0) const;
};

// W_q(A) of a Hermitian A for real q in (0, 1).
EllipseDisc hermitian_qrange_ellipse(const ComplexMatrix& a, const QParam& q);
double ellipse_max_modulus(const EllipseDisc& e);

}  // namespace qnr
