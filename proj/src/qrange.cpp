#include "qnr/qrange.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

#include "qnr/config.hpp"
#include "qnr/error.hpp"
#include "qnr/random.hpp"

namespace qnr {

QParam::QParam(Complex q) : q_(q), modulus_(std::abs(q)) {
  if (!std::isfinite(q.real()) || !std::isfinite(q.imag())) {
    throw Error(ErrorKind::NonFinite, "q must be finite");
  }
  if (!(modulus_ > 0.0) || modulus_ > 1.0 + 1e-15) {
    throw Error(ErrorKind::QOutOfRange, "|q| must lie in (0, 1], got " + std::to_string(modulus_));
  }
  modulus_ = std::min(modulus_, 1.0);
  s_ = std::sqrt(std::max(0.0, (1.0 - modulus_) * (1.0 + modulus_)));
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ComplexVector axpy(const ComplexVector& x, double t, const ComplexVector& g) {
  ComplexVector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + t * g[i];
  return out;
}

void normalize_in_place(ComplexVector& x) {
  const double n = x.norm();
  for (std::size_t i = 0; i < x.size(); ++i) x[i] /= n;
}

// Either the radius objective |q||a| + s r or the support objective
// Re(kappa a) + s r, with a = <Tx,x> and r = sqrt(||Tx||^2 - |a|^2).
class Objective {
 public:
  Objective(const ComplexMatrix& t, const QParam& q)
      : t_(t), tadj_(t.adjoint()), qmod_(q.modulus()), s_(q.s()),
        scale_(t.frobenius_norm()) {}

  Objective(const ComplexMatrix& t, const QParam& q, double theta) : Objective(t, q) {
    support_ = true;
    kappa_ = std::polar(1.0, -theta) * q.value();
  }

  double scale() const noexcept { return scale_; }

  double value(const ComplexVector& x) const {
    const ComplexVector y = t_ * x;
    const Complex a = inner(y, x);
    const double r = radical(x, y, a);
    const double head = support_ ? (kappa_ * a).real() : qmod_ * std::abs(a);
    return head + s_ * r;
  }

  Complex point(const ComplexVector& x, double theta, Complex q) const {
    const ComplexVector y = t_ * x;
    const Complex a = inner(y, x);
    return q * a + s_ * radical(x, y, a) * std::polar(1.0, theta);
  }

  ComplexVector gradient(const ComplexVector& x, GradientMode mode) const {
    ComplexVector g = mode == GradientMode::Analytic ? analytic(x) : central(x);
    const double radial = inner(g, x).real();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] -= radial * x[i];
    return g;
  }

 private:
  // ||Tx - a x|| equals sqrt(||Tx||^2 - |a|^2) for unit x, without the cancellation.
  static double radical(const ComplexVector& x, const ComplexVector& y, Complex a) {
    double b = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) b += std::norm(y[i] - a * x[i]);
    return std::sqrt(b);
  }

  ComplexVector analytic(const ComplexVector& x) const {
    const ComplexVector y = t_ * x;
    const ComplexVector z = tadj_ * x;
    const Complex a = inner(y, x);
    const double abs_a = std::abs(a);
    Complex kappa = kappa_;
    if (!support_) kappa = abs_a > 1e-300 ? qmod_ * std::conj(a) / abs_a : Complex(0.0);

    ComplexVector g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = kappa * y[i] + std::conj(kappa) * z[i];

    const double r = radical(x, y, a);
    if (s_ > 0.0 && r > 1e-12 * std::max(scale_, 1e-300)) {
      const ComplexVector w = tadj_ * y;
      const double c = s_ / r;
      for (std::size_t i = 0; i < x.size(); ++i) {
        g[i] += c * (w[i] - a * z[i] - std::conj(a) * y[i]);
      }
    }
    return g;
  }

  ComplexVector central(const ComplexVector& x) const {
    constexpr double h = 1e-6;
    auto at = [&](ComplexVector p) {
      normalize_in_place(p);
      return value(p);
    };
    ComplexVector g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      ComplexVector p = x, m = x;
      p[i] += h;
      m[i] -= h;
      const double d_re = (at(p) - at(m)) / (2.0 * h);
      p = x;
      m = x;
      p[i] += Complex(0.0, h);
      m[i] -= Complex(0.0, h);
      const double d_im = (at(p) - at(m)) / (2.0 * h);
      g[i] = Complex(d_re, d_im);
    }
    return g;
  }

  const ComplexMatrix& t_;
  ComplexMatrix tadj_;
  double qmod_;
  double s_;
  double scale_;
  bool support_ = false;
  Complex kappa_{0.0};
};

struct AscentResult {
  double value;
  ComplexVector x;
};

// Projected gradient ascent on the unit sphere with an Armijo backtracking step
// that doubles after each accepted move.
AscentResult ascend(const Objective& obj, ComplexVector x, int max_iterations, GradientMode mode) {
  const double scale = std::max(obj.scale(), 1e-300);
  double f = obj.value(x);
  double step = 1.0 / scale;
  for (int it = 0; it < max_iterations; ++it) {
    const ComplexVector g = obj.gradient(x, mode);
    const double gn2 = std::pow(g.norm(), 2);
    if (gn2 <= 1e-28 * scale * scale) break;

    bool accepted = false;
    int tries = 0;
    ComplexVector next;
    double f_next = f;
    for (; tries < 60; ++tries) {
      next = axpy(x, step, g);
      normalize_in_place(next);
      f_next = obj.value(next);
      if (f_next >= f + 0.25 * step * gn2) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    const double gain = f_next - f;
    x = std::move(next);
    f = f_next;
    if (tries == 0) step *= 2.0;
    if (gain < 1e-11 * std::max(std::abs(f), scale)) break;
  }
  return {f, std::move(x)};
}

void require_restarts(int restarts) {
  if (restarts < 1) throw Error(ErrorKind::InvalidInput, "restarts must be >= 1");
}

std::vector<Complex> clip(const std::vector<Complex>& poly, Complex dir, double level) {
  std::vector<Complex> out;
  if (poly.empty()) return out;
  out.reserve(poly.size() + 1);
  auto dist = [&](Complex z) { return (std::conj(dir) * z).real() - level; };
  Complex prev = poly.back();
  double dp = dist(prev);
  for (const Complex& cur : poly) {
    const double dc = dist(cur);
    if (dc <= 0.0) {
      if (dp > 0.0) out.push_back(prev + (cur - prev) * (dp / (dp - dc)));
      out.push_back(cur);
    } else if (dp <= 0.0) {
      out.push_back(prev + (cur - prev) * (dp / (dp - dc)));
    }
    prev = cur;
    dp = dc;
  }
  return out;
}

double golden_max(const std::function<double(double)>& f, double lo, double hi, double best) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 100 && hi - lo > 1e-14; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    }
    best = std::max({best, f1, f2});
  }
  return best;
}

}  // namespace

double reduced_objective(const ComplexMatrix& t, const QParam& q, const ComplexVector& x) {
  if (t.dim() < 2) throw Error(ErrorKind::DimTooSmall, "reduced objective needs dim >= 2");
  if (x.size() != t.dim()) throw Error(ErrorKind::DimensionMismatch, "vector and matrix sizes differ");
  if (std::abs(x.norm() - 1.0) > kTol.unit) throw Error(ErrorKind::NotUnit, "x must be a unit vector");
  return Objective(t, q).value(x);
}

ComplexVector reduced_objective_gradient(const ComplexMatrix& t, const QParam& q,
                                         const ComplexVector& x, GradientMode mode) {
  if (t.dim() < 2) throw Error(ErrorKind::DimTooSmall, "reduced objective needs dim >= 2");
  if (x.size() != t.dim()) throw Error(ErrorKind::DimensionMismatch, "vector and matrix sizes differ");
  if (std::abs(x.norm() - 1.0) > kTol.unit) throw Error(ErrorKind::NotUnit, "x must be a unit vector");
  return Objective(t, q).gradient(x, mode);
}

RadiusEstimate q_numerical_radius(const ComplexMatrix& t, const QParam& q, const AscentOptions& opts) {
  require_restarts(opts.restarts);
  const std::size_t n = t.dim();
  if (n == 1) return {q.modulus() * std::abs(t(0, 0)), ComplexVector{Complex(1.0)}};

  const Objective obj(t, q);
  RadiusEstimate best{-1.0, {}};
  for (int r = 0; r < opts.restarts; ++r) {
    CounterRng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(r)));
    AscentResult run = ascend(obj, random_unit_vector(n, rng), opts.max_iterations, opts.gradient);
    if (run.value > best.value) best = {run.value, std::move(run.x)};
  }
  return best;
}

RadiusEstimate q_numerical_radius(const ComplexMatrix& t, const QParam& q, int restarts, Seed seed) {
  AscentOptions opts;
  opts.restarts = restarts;
  opts.seed = seed;
  return q_numerical_radius(t, q, opts);
}

double q_radius_bruteforce(const ComplexMatrix& t, const QParam& q, int trials, Seed seed) {
  if (trials < 1) throw Error(ErrorKind::InvalidInput, "trials must be >= 1");
  const std::size_t n = t.dim();
  if (n < 2) throw Error(ErrorKind::DimTooSmall, "sampling oracle needs dim >= 2");
  CounterRng rng(seed);
  const Complex qbar = std::conj(q.value());
  double best = 0.0;
  for (int k = 0; k < trials; ++k) {
    const ComplexVector x = random_unit_vector(n, rng);
    ComplexVector z = random_unit_vector(n, rng);
    const Complex proj = inner(z, x);
    for (std::size_t i = 0; i < n; ++i) z[i] -= proj * x[i];
    const double zn = z.norm();
    if (zn < 1e-12) continue;
    const Complex phase = std::polar(1.0, kTwoPi * rng.uniform());
    ComplexVector y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = qbar * x[i] + q.s() * phase * z[i] / zn;
    best = std::max(best, std::abs(inner(t * x, y)));
  }
  return best;
}

SupportPoint support_point(const ComplexMatrix& t, const QParam& q, double theta,
                           const AscentOptions& opts, const std::vector<ComplexVector>& warm_starts) {
  const std::size_t n = t.dim();
  if (n == 1) {
    const Complex z = q.value() * t(0, 0);
    return {(std::polar(1.0, -theta) * z).real(), z, ComplexVector{Complex(1.0)}};
  }
  if (opts.restarts < 0 || (opts.restarts == 0 && warm_starts.empty())) {
    throw Error(ErrorKind::InvalidInput, "support search needs at least one start");
  }

  const Objective obj(t, q, theta);
  AscentResult best{-std::numeric_limits<double>::infinity(), {}};
  auto consider = [&](AscentResult run) {
    if (run.value > best.value) best = std::move(run);
  };
  for (const ComplexVector& w : warm_starts) {
    if (w.size() != n) throw Error(ErrorKind::DimensionMismatch, "warm start has wrong size");
    consider(ascend(obj, w, opts.max_iterations, opts.gradient));
  }
  for (int r = 0; r < opts.restarts; ++r) {
    CounterRng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(r)));
    consider(ascend(obj, random_unit_vector(n, rng), opts.max_iterations, opts.gradient));
  }
  return {best.value, obj.point(best.x, theta, q.value()), std::move(best.x)};
}

double support_function(const ComplexMatrix& t, const QParam& q, double theta, int restarts, Seed seed) {
  require_restarts(restarts);
  AscentOptions opts;
  opts.restarts = restarts;
  opts.seed = seed;
  return support_point(t, q, theta, opts).value;
}

BoundaryPolygon boundary_polygon(const ComplexMatrix& t, const QParam& q, int m, int restarts, Seed seed) {
  if (m < 8) throw Error(ErrorKind::InvalidInput, "boundary polygon needs at least 8 directions");
  require_restarts(restarts);

  const auto count = static_cast<std::size_t>(m);
  BoundaryPolygon poly;
  poly.q = q;
  poly.directions.resize(count);
  for (std::size_t k = 0; k < count; ++k) poly.directions[k] = kTwoPi * static_cast<double>(k) / m;

  std::vector<SupportPoint> pts(count);
  for (std::size_t k = 0; k < count; ++k) {
    AscentOptions opts;
    opts.seed = derive_seed(seed, k);
    opts.restarts = (k % 16 == 0) ? restarts : std::min(restarts, 2);
    std::vector<ComplexVector> warm;
    if (k > 0 && pts[k - 1].witness.size() > 0) warm.push_back(pts[k - 1].witness);
    pts[k] = support_point(t, q, poly.directions[k], opts, warm);
  }
  if (t.dim() > 1) {
    AscentOptions warm_only;
    warm_only.restarts = 0;
    auto refine = [&](std::size_t k, std::size_t from) {
      SupportPoint cand = support_point(t, q, poly.directions[k], warm_only, {pts[from].witness});
      if (cand.value > pts[k].value) pts[k] = std::move(cand);
    };
    for (std::size_t j = count; j-- > 0;) refine(j, (j + 1) % count);
    for (std::size_t j = 0; j < count; ++j) refine(j, (j + count - 1) % count);
  }

  double hmax = 0.0;
  for (const SupportPoint& p : pts) {
    poly.support_values.push_back(p.value);
    poly.support_points.push_back(p.point);
    hmax = std::max(hmax, std::abs(p.value));
  }

  const double scale = std::max(t.frobenius_norm(), 1e-300);
  const double slack = 1e-12 * scale;
  const double box = 4.0 * hmax + scale;
  std::vector<Complex> region{{-box, -box}, {box, -box}, {box, box}, {-box, box}};
  for (std::size_t k = 0; k < count && !region.empty(); ++k) {
    region = clip(region, std::polar(1.0, poly.directions[k]), poly.support_values[k] + slack);
  }

  double diameter = 0.0;
  for (std::size_t i = 0; i < region.size(); ++i)
    for (std::size_t j = i + 1; j < region.size(); ++j)
      diameter = std::max(diameter, std::abs(region[i] - region[j]));

  if (region.empty() || diameter <= 1e-9 * scale) {
    Complex mean = 0.0;
    for (const Complex& z : poly.support_points) mean += z;
    poly.vertices = {mean / static_cast<double>(count)};
    poly.degenerate = true;
    return poly;
  }

  std::vector<double> tight(count);
  for (std::size_t k = 0; k < count; ++k) {
    const Complex dir = std::polar(1.0, -poly.directions[k]);
    double h = -std::numeric_limits<double>::infinity();
    for (const Complex& v : region) h = std::max(h, (dir * v).real());
    tight[k] = h;
  }
  poly.vertices.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t k1 = (k + 1) % count;
    const double c0 = std::cos(poly.directions[k]), s0 = std::sin(poly.directions[k]);
    const double c1 = std::cos(poly.directions[k1]), s1 = std::sin(poly.directions[k1]);
    const double det = c0 * s1 - s0 * c1;
    poly.vertices[k] = Complex((tight[k] * s1 - tight[k1] * s0) / det,
                               (c0 * tight[k1] - c1 * tight[k]) / det);
  }
  return poly;
}

bool EllipseDisc::contains(Complex z, double tol) const {
  const double dx = z.real() - center_x;
  const double dy = z.imag() - center_y;
  const double a = semi_axis_x;
  const double b = semi_axis_y;
  if (a > 0.0 && b > 0.0) return (dx / a) * (dx / a) + (dy / b) * (dy / b) <= 1.0 + tol;
  if (a > 0.0) return std::abs(dy) <= tol && std::abs(dx) <= a + tol;
  if (b > 0.0) return std::abs(dx) <= tol && std::abs(dy) <= b + tol;
  return std::abs(Complex(dx, dy)) <= tol;
}

EllipseDisc hermitian_qrange_ellipse(const ComplexMatrix& a, const QParam& q) {
  if (!q.is_real() || !(q.value().real() > 0.0) || !(q.value().real() < 1.0)) {
    throw Error(ErrorKind::QOutOfRange, "Hermitian ellipse needs real q in (0, 1)");
  }
  const std::vector<double> ev = hermitian_eigenvalues(a);
  const double l1 = ev.front();
  const double ln = ev.back();
  const double qr = q.value().real();
  const double half = 0.5 * (l1 - ln);
  return {qr * 0.5 * (l1 + ln), 0.0, half, q.s() * half};
}

double ellipse_max_modulus(const EllipseDisc& e) {
  auto mod = [&](double t) {
    return std::abs(Complex(e.center_x + e.semi_axis_x * std::cos(t),
                            e.center_y + e.semi_axis_y * std::sin(t)));
  };
  constexpr int grid = 2048;
  const double step = kTwoPi / grid;
  double best = -1.0;
  double best_t = 0.0;
  for (int k = 0; k < grid; ++k) {
    const double v = mod(k * step);
    if (v > best) {
      best = v;
      best_t = k * step;
    }
  }
  return golden_max(mod, best_t - step, best_t + step, best);
}

}  // namespace qnr
