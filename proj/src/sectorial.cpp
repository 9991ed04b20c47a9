#include "qnr/sectorial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qnr/config.hpp"
#include "qnr/error.hpp"
#include "qnr/random.hpp"

namespace qnr {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

double margined(double alpha) {
  return std::min(alpha + kTol.alpha_margin, 0.5 * (alpha + kHalfPi));
}

double angle_of(Complex z) { return std::atan2(std::abs(z.imag()), z.real()); }

struct AngleScan {
  bool sectorial;
  double alpha;
  double min_re;
  Complex widest;
  Complex leftmost;
};

AngleScan scan(const std::vector<Complex>& pts) {
  AngleScan out{true, 0.0, std::numeric_limits<double>::infinity(), pts.front(), pts.front()};
  for (const Complex& v : pts) {
    if (v.real() < out.min_re) {
      out.min_re = v.real();
      out.leftmost = v;
    }
    const double ang = angle_of(v);
    if (ang > out.alpha) {
      out.alpha = ang;
      out.widest = v;
    }
  }
  out.sectorial = out.min_re > kTol.sector_separation;
  return out;
}

void require_real_q01(double q) {
  if (!(q > 0.0) || !(q < 1.0)) throw Error(ErrorKind::QOutOfRange, "q must be real in (0, 1)");
}

}  // namespace

bool sector_membership(Complex z, SectorParams p) {
  if (!(p.alpha >= 0.0) || !(p.alpha < kHalfPi)) {
    throw Error(ErrorKind::InvalidInput, "sector half-angle must lie in [0, pi/2)");
  }
  return z.real() > 0.0 && std::atan2(std::abs(z.imag()), z.real()) <= p.alpha;
}

SectorialVerdict hermitian_q_sectorial_test(const ComplexMatrix& a, double q) {
  require_real_q01(q);
  const EllipseDisc e = hermitian_qrange_ellipse(a, QParam(q));
  const double c = e.center_x;
  const double ax = e.semi_axis_x;
  const double by = e.semi_axis_y;

  SectorialVerdict v;
  v.min_real_part = c - ax;
  if (!(c > ax)) {
    v.witness = Complex(c - ax, 0.0);
    return v;
  }
  v.is_q_sectorial = true;
  auto ang = [&](double t) { return std::atan2(by * std::sin(t), c + ax * std::cos(t)); };

  constexpr int grid = 2048;
  const double step = std::numbers::pi / grid;
  double best = 0.0;
  double best_t = 0.0;
  for (int k = 0; k <= grid; ++k) {
    const double val = ang(k * step);
    if (val > best) {
      best = val;
      best_t = k * step;
    }
  }
  double lo = std::max(0.0, best_t - step);
  double hi = std::min(std::numbers::pi, best_t + step);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
    const double x1 = hi - inv_phi * (hi - lo);
    const double x2 = lo + inv_phi * (hi - lo);
    if (ang(x1) < ang(x2)) {
      lo = x1;
    } else {
      hi = x2;
    }
  }
  const double t_star = 0.5 * (lo + hi);
  if (ang(t_star) > best) {
    best = ang(t_star);
    best_t = t_star;
  }
  v.alpha_estimate = best;
  v.alpha_margined = margined(best);
  v.witness = Complex(c + ax * std::cos(best_t), by * std::sin(best_t));
  return v;
}

SectorialVerdict verdict_from_polygon(const BoundaryPolygon& poly, double h_pi) {
  const AngleScan s = scan(poly.vertices);
  SectorialVerdict v;
  v.min_real_part = s.min_re;
  if (!s.sectorial || !(h_pi < -kTol.sector_separation)) {
    v.witness = s.leftmost;
    return v;
  }
  v.is_q_sectorial = true;
  v.alpha_estimate = s.alpha;
  v.alpha_margined = margined(s.alpha);
  v.witness = s.widest;
  return v;
}

SectorialVerdict sectorial_index_estimate(const ComplexMatrix& a, const QParam& q, int m, int restarts,
                                          Seed seed) {
  const BoundaryPolygon poly = boundary_polygon(a, q, m, restarts, seed);
  double h_pi = 0.0;
  if (m % 2 == 0) {
    h_pi = poly.support_values[static_cast<std::size_t>(m / 2)];
  } else {
    AscentOptions opts;
    opts.restarts = restarts;
    opts.seed = derive_seed(seed, static_cast<std::uint64_t>(m));
    h_pi = support_point(a, q, std::numbers::pi, opts).value;
  }
  return verdict_from_polygon(poly, h_pi);
}

ClosureReport closure_suite(const ComplexMatrix& a, const ComplexMatrix& b, double q, double lambda1,
                            double lambda2, int m, int restarts, Seed seed) {
  require_real_q01(q);
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) {
    throw Error(ErrorKind::InvalidInput, "combination weights must be positive");
  }
  const QParam qp(q);
  const SectorialVerdict va = sectorial_index_estimate(a, qp, m, restarts, seed);
  const SectorialVerdict vb = sectorial_index_estimate(b, qp, m, restarts, seed);
  if (!va.is_q_sectorial || !vb.is_q_sectorial) {
    throw Error(ErrorKind::PredicateUnmet, "closure suite needs q-sectorial inputs");
  }
  constexpr double allowance = 2e-2;
  ClosureReport report;
  const double alpha_a = *va.alpha_estimate;
  report.alpha = std::max(alpha_a, *vb.alpha_estimate);

  auto check = [&](std::string name, const ComplexMatrix& x, double index) {
    const SectorialVerdict vx = sectorial_index_estimate(x, qp, m, restarts, seed);
    ClosureCheck c;
    c.name = std::move(name);
    c.sectorial = vx.is_q_sectorial;
    c.alpha = vx.alpha_estimate.value_or(kHalfPi);
    c.allowed = index + allowance;
    c.passed = c.sectorial && c.alpha <= c.allowed;
    report.checks.push_back(c);
  };
  check("transpose", a.transpose(), alpha_a);
  check("conjugate", a.conjugate(), alpha_a);
  check("adjoint", a.adjoint(), alpha_a);
  check("combination", lambda1 * a + lambda2 * b, report.alpha);
  report.all_passed = std::all_of(report.checks.begin(), report.checks.end(),
                                  [](const ClosureCheck& c) { return c.passed; });
  return report;
}

GeneratedSectorial generate_q_sectorial(std::size_t dim, const QParam& q, double target_alpha, Seed seed,
                                        const GeneratorOptions& opts) {
  if (!(target_alpha > 0.0) || !(target_alpha < kHalfPi)) {
    throw Error(ErrorKind::InvalidInput, "target index must lie in (0, pi/2)");
  }
  ComplexMatrix b = random_matrix(dim, seed);
  b *= 1.0 / spectral_norm(b);
  const BoundaryPolygon pb = boundary_polygon(b, q, opts.directions, opts.restarts, derive_seed(seed, 1));
  const Complex center = q.value();

  // W_q(I + eps B) = q + eps W_q(B), so the candidate index is read off B's polygon.
  const double aim = target_alpha - 0.5 * (opts.low_window - opts.high_window);
  auto alpha_at = [&](double eps) -> std::optional<double> {
    std::vector<Complex> pts;
    pts.reserve(pb.vertices.size());
    for (const Complex& v : pb.vertices) pts.push_back(center + eps * v);
    const AngleScan s = scan(pts);
    if (!s.sectorial) return std::nullopt;
    return s.alpha;
  };
  auto ok = [&](double eps) {
    const auto alpha = alpha_at(eps);
    return alpha.has_value() && *alpha <= aim;
  };
  if (!ok(0.0)) throw Error(ErrorKind::GenerationFailed, "q itself lies outside the target sector");

  double lo = 0.0;
  double hi = 1.0;
  for (int k = 0; k < 60 && ok(hi); ++k) {
    lo = hi;
    hi *= 2.0;
  }
  for (int k = 0; k < 60; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (ok(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  double eps = lo;
  const Seed verify_seed = derive_seed(seed, 2);
  for (int attempt = 0; attempt < 30; ++attempt) {
    ComplexMatrix a = ComplexMatrix::identity(dim) + eps * b;
    SectorialVerdict v = sectorial_index_estimate(a, q, opts.directions, opts.restarts, verify_seed);
    if (v.is_q_sectorial) {
      const double alpha = *v.alpha_estimate;
      const bool in_window =
          alpha >= target_alpha - opts.low_window && alpha <= target_alpha + opts.high_window;
      return {std::move(a), std::move(v), eps, in_window};
    }
    eps *= 0.9;
  }
  throw Error(ErrorKind::GenerationFailed, "could not certify a q-sectorial candidate");
}

ComplexMatrix random_q_sectorial(std::size_t dim, const QParam& q, double target_alpha, Seed seed) {
  return generate_q_sectorial(dim, q, target_alpha, seed).matrix;
}

}  // namespace qnr
