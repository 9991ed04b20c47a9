#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace qnr {

// A convex increasing phi on [0, inf) with phi(0) = 0, plus its kernel gamma.
class OrliczFn {
 public:
  using Map = std::function<double(double)>;

  // A kernel-less function falls back to finite differences of phi.
  OrliczFn(std::string name, Map phi, Map kernel = {},
           std::optional<std::string> complementary_name = std::nullopt,
           bool submultiplicative = false);

  const std::string& name() const noexcept { return name_; }
  double operator()(double t) const { return phi_(t); }
  bool has_closed_kernel() const noexcept { return static_cast<bool>(kernel_); }
  const std::optional<std::string>& complementary_name() const noexcept { return complementary_; }
  bool submultiplicative() const noexcept { return submultiplicative_; }

  double kernel(double u) const;

 private:
  std::string name_;
  Map phi_;
  Map kernel_;
  std::optional<std::string> complementary_;
  bool submultiplicative_;
};

// Names: power:p (p >= 1), exp_minus_one, exp_minus_t_minus_one, power_log:p (p > 0),
// exp_square, power_over_p:p (p > 1), one_plus_log.
OrliczFn builtin(std::string_view spec);
std::span<const std::string_view> builtin_names();

double kernel(const OrliczFn& f, double u);

// eta(v) = sup{u : gamma(u) <= v}. Throws Unbounded if gamma stays <= v up to 1e12.
double right_inverse(const OrliczFn& f, double v);

struct ComplementaryPair {
  OrliczFn phi;
  OrliczFn psi;
  bool numeric = false;
};

ComplementaryPair complementary(const OrliczFn& f);

// psi(s) = integral of eta over [0, s], adaptive Simpson.
double numeric_complementary(const OrliczFn& f, double s);

// Integral over t in [0, 1] of phi(t a + (1 - t) b); composite Simpson, 1025 nodes.
double hermite_hadamard_integral(const OrliczFn& f, double a, double b);

struct YoungCheck {
  double lhs;
  double rhs;
  double slack;
};

YoungCheck young_check(const ComplementaryPair& pair, double u, double v);

struct MeanCheck {
  double lhs;  // phi(mean)
  double rhs;  // mean of phi
};

MeanCheck jensen_mean_check(const OrliczFn& f, std::span<const double> values);

}  // namespace qnr
