#include "qnr/orlicz.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numeric>

#include "qnr/error.hpp"

namespace qnr {

namespace {

constexpr std::array<std::string_view, 7> kBuiltinNames = {
    "power", "exp_minus_one", "exp_minus_t_minus_one", "power_log",
    "exp_square", "power_over_p", "one_plus_log"};

std::string format_param(double p) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, p);
  (void)ec;
  return std::string(buf, end);
}

double parse_param(std::string_view text, std::string_view spec) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw Error(ErrorKind::InvalidInput, "bad parameter in Orlicz spec '" + std::string(spec) + "'");
  }
  return value;
}

OrliczFn power(double p) {
  if (!(p >= 1.0)) throw Error(ErrorKind::InvalidInput, "power needs p >= 1");
  return OrliczFn(
      "power:" + format_param(p), [p](double t) { return std::pow(t, p); },
      [p](double u) { return p == 1.0 ? 1.0 : p * std::pow(u, p - 1.0); }, std::nullopt, true);
}

OrliczFn power_over_p(double p) {
  if (!(p > 1.0)) throw Error(ErrorKind::InvalidInput, "power_over_p needs p > 1");
  const double conjugate = p / (p - 1.0);
  return OrliczFn(
      "power_over_p:" + format_param(p), [p](double t) { return std::pow(t, p) / p; },
      [p](double u) { return std::pow(u, p - 1.0); }, "power_over_p:" + format_param(conjugate));
}

OrliczFn power_log(double p) {
  if (!(p > 0.0)) throw Error(ErrorKind::InvalidInput, "power_log needs p > 0");
  return OrliczFn(
      "power_log:" + format_param(p), [p](double t) { return std::pow(t, p) * std::log1p(t); },
      [p](double u) {
        if (u == 0.0) return 0.0;
        return p * std::pow(u, p - 1.0) * std::log1p(u) + std::pow(u, p) / (1.0 + u);
      });
}

}  // namespace

OrliczFn::OrliczFn(std::string name, Map phi, Map kernel,
                   std::optional<std::string> complementary_name, bool submultiplicative)
    : name_(std::move(name)),
      phi_(std::move(phi)),
      kernel_(std::move(kernel)),
      complementary_(std::move(complementary_name)),
      submultiplicative_(submultiplicative) {}

double OrliczFn::kernel(double u) const {
  if (kernel_) return kernel_(u);
  const double h = std::max(1e-6, 1e-6 * u);
  if (u < h) return (phi_(u + h) - phi_(u)) / h;
  return (phi_(u + h) - phi_(u - h)) / (2.0 * h);
}

std::span<const std::string_view> builtin_names() { return kBuiltinNames; }

OrliczFn builtin(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view name = spec.substr(0, colon);
  const bool has_param = colon != std::string_view::npos;
  auto param = [&]() {
    if (!has_param) {
      throw Error(ErrorKind::InvalidInput, "Orlicz function '" + std::string(name) + "' needs a parameter");
    }
    return parse_param(spec.substr(colon + 1), spec);
  };
  auto no_param = [&]() {
    if (has_param) {
      throw Error(ErrorKind::InvalidInput, "Orlicz function '" + std::string(name) + "' takes no parameter");
    }
  };

  if (name == "power") return power(param());
  if (name == "power_over_p") return power_over_p(param());
  if (name == "power_log") return power_log(param());
  if (name == "exp_minus_one") {
    no_param();
    return OrliczFn(
        "exp_minus_one", [](double t) { return std::expm1(t); }, [](double u) { return std::exp(u); });
  }
  if (name == "exp_minus_t_minus_one") {
    no_param();
    return OrliczFn(
        "exp_minus_t_minus_one", [](double t) { return std::expm1(t) - t; },
        [](double u) { return std::expm1(u); }, "one_plus_log");
  }
  if (name == "one_plus_log") {
    no_param();
    return OrliczFn(
        "one_plus_log", [](double s) { return (1.0 + s) * std::log1p(s) - s; },
        [](double u) { return std::log1p(u); }, "exp_minus_t_minus_one");
  }
  if (name == "exp_square") {
    no_param();
    return OrliczFn(
        "exp_square", [](double t) { return std::expm1(t * t); },
        [](double u) { return 2.0 * u * std::exp(u * u); });
  }
  throw Error(ErrorKind::UnknownName, "unknown Orlicz function '" + std::string(spec) + "'");
}

double kernel(const OrliczFn& f, double u) {
  if (!(u >= 0.0)) throw Error(ErrorKind::InvalidInput, "kernel argument must be >= 0");
  return f.kernel(u);
}

double right_inverse(const OrliczFn& f, double v) {
  if (!(v >= 0.0)) throw Error(ErrorKind::InvalidInput, "right inverse argument must be >= 0");
  if (f.kernel(0.0) > v) return 0.0;
  double hi = 1.0;
  while (!(f.kernel(hi) > v)) {
    hi *= 2.0;
    if (hi > 1e12) {
      throw Error(ErrorKind::Unbounded, f.name() + ": kernel stays below " + std::to_string(v));
    }
  }
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 4e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f.kernel(mid) <= v) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

double adaptive_simpson(const std::function<double(double)>& g, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = g(lm);
  const double frm = g(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(g, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(g, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double numeric_complementary(const OrliczFn& f, double s) {
  if (!(s >= 0.0)) throw Error(ErrorKind::InvalidInput, "complementary argument must be >= 0");
  if (s == 0.0) return 0.0;
  const std::function<double(double)> eta = [&f](double v) { return right_inverse(f, v); };
  const double fa = eta(0.0);
  const double fm = eta(0.5 * s);
  const double fb = eta(s);
  const double whole = s / 6.0 * (fa + 4.0 * fm + fb);
  const double tol = 1e-9 * std::max(1.0, std::abs(whole));
  return adaptive_simpson(eta, 0.0, s, fa, fm, fb, whole, tol, 40);
}

ComplementaryPair complementary(const OrliczFn& f) {
  if (const auto& partner = f.complementary_name()) {
    return {f, builtin(*partner), false};
  }
  OrliczFn psi(
      "complement(" + f.name() + ")", [f](double s) { return numeric_complementary(f, s); },
      [f](double v) { return right_inverse(f, v); });
  return {f, std::move(psi), true};
}

double hermite_hadamard_integral(const OrliczFn& f, double a, double b) {
  if (!(a >= 0.0) || !(b >= 0.0)) {
    throw Error(ErrorKind::InvalidInput, "Hermite-Hadamard endpoints must be >= 0");
  }
  if (a == b) return f(a);
  constexpr int intervals = 1024;
  const double h = 1.0 / intervals;
  double sum = f(b) + f(a);  // t = 0 and t = 1
  for (int k = 1; k < intervals; ++k) {
    const double t = k * h;
    sum += (k % 2 == 1 ? 4.0 : 2.0) * f(t * a + (1.0 - t) * b);
  }
  return sum * h / 3.0;
}

YoungCheck young_check(const ComplementaryPair& pair, double u, double v) {
  if (!(u >= 0.0) || !(v >= 0.0)) throw Error(ErrorKind::InvalidInput, "Young arguments must be >= 0");
  const double lhs = u * v;
  const double rhs = pair.phi(u) + pair.psi(v);
  return {lhs, rhs, rhs - lhs};
}

MeanCheck jensen_mean_check(const OrliczFn& f, std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::InvalidInput, "mean check needs at least one value");
  double total = 0.0;
  double phi_total = 0.0;
  for (double a : values) {
    if (!(a >= 0.0)) throw Error(ErrorKind::InvalidInput, "mean check values must be >= 0");
    total += a;
    phi_total += f(a);
  }
  const auto n = static_cast<double>(values.size());
  return {f(total / n), phi_total / n};
}

}  // namespace qnr
