#include "qnr/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <unordered_map>

#include "qnr/config.hpp"
#include "qnr/error.hpp"
#include "qnr/random.hpp"
#include "qnr/sectorial.hpp"

namespace qnr {

std::string_view to_string(Predicate p) {
  switch (p) {
    case Predicate::None: return "none";
    case Predicate::Normal: return "normal";
    case Predicate::SquareZero: return "square_zero";
    case Predicate::QSectorial: return "q_sectorial";
    case Predicate::QSectorialPair: return "q_sectorial_pair";
    case Predicate::Sectorial: return "sectorial";
    case Predicate::SectorialImDominant: return "sectorial_im_dominant";
    case Predicate::EqualityPremise: return "equality_premise";
  }
  return "unknown";
}

namespace {

using P = Predicate;

std::vector<BoundSpec> build_catalog() {
  return {
      {"L1a", "|q|/2 ||T|| <= w_q(T) <= ||T||", P::None, false, 1, false},
      {"L1b", "T normal: |q| ||T|| <= w_q(T) <= ||T||", P::Normal, false, 1, false},
      {"L2", "q/(2(2-q^2)) ||T|| <= w_q(T) <= ||T||", P::None, true, 1, false},
      {"L3", "q^2/(4(2-q^2)^2) N <= w_q^2 <= (q+2s)^2/2 N, N = ||T*T+TT*||", P::None, true, 1, false},
      {"L4", "w_q^2 <= q^2/2 (||T|| + ||T^2||^(1/2))^2 + (1-q^2+qs) ||T||^2", P::None, true, 1, false},
      {"L5", "T^2 = 0: w_q^2 <= (1 - 3q^2/4 + qs) ||T||^2", P::SquareZero, true, 1, false},
      {"T1", "phi(w_q) <= int_0^1 phi(t a + (1-t) b) <= (phi(a)+phi(b))/2, a = sqrt2|q|N^(1/2), b = 2sN^(1/2)",
       P::None, false, 1, true},
      {"R1", "w_q^r <= int_0^1 (t a + (1-t) b)^r <= 2^(r/2-1)(|q|^r + 2^(r/2) s^r) N^(r/2)", P::None, false, 1,
       false},
      {"C1", "|q|^2/4 N <= w_q^2 <= (2-|q|^2+2sqrt2|q|s)/2 N", P::None, false, 1, false},
      {"C2", "w_q^2 = |q|^2/4 N: phi(|q|^2||Re(e^{it}T)||^2) = phi(|q|^2||Im(e^{it}T)||^2) = phi(|q|^2N/4)",
       P::EqualityPremise, false, 1, true},
      {"T2", "phi(w_q^2(sum T_i)) <= 1/n sum phi(n^2(|q|^2 w^2(T_i) + (1-|q|^2+|q|s)||T_i||^2))", P::None,
       false, 0, true},
      {"Q1", "w_q^2 <= |q|^2 w^2 + (1-|q|^2+|q|s) ||T||^2", P::None, false, 1, false},
      {"Q2", "T^2 = 0: w_q^2 <= |q|^2 w^2 + (1-|q|^2+|q|s)||T||^2 <= (1 - 3|q|^2/4 + |q|s) ||T||^2",
       P::SquareZero, false, 1, false},
      {"T3", "phi(w_q(TRS)) <= int_0^1 phi(t a + (1-t) b) <= (phi(a)+phi(b))/2, a = |q|||R|| ||S*S+TT*||",
       P::None, false, 3, true},
      {"C3a", "w_q^r(TRS) <= int_0^1 (t a + (1-t) b)^r <= (a^r + b^r)/2", P::None, false, 3, false},
      {"C3b", "w_q(TRS) <= ||R||/2 (|q| ||S*S+TT*|| + 2k ||S|| ||T||)", P::None, false, 3, false},
      {"C3c", "w_q(T^2) <= (|q| ||T*T+TT*|| + 2k ||T||^2)/2", P::None, false, 1, false},
      {"C3d", "||R|| <= 1: phi(w_q(TRS)) <= ||R|| int_0^1 phi(...) <= ||R||/2 (phi(a') + phi(b'))", P::None,
       false, 3, true},
      {"S1", "phi(sup |Im <Ax,y>|) <= sin(alpha) phi(w_q(A))", P::QSectorial, false, 1, true},
      {"S2", "||Im A|| <= (sin(alpha)/|q| + 2s/|q|^2) w_q(A)", P::QSectorial, false, 1, false},
      {"S3", "phi(||AA*+A*A||/2) <= int_0^1 phi(2t w_q^2/|q|^2 + 2(1-t) K^2 w_q^2) <= half-sum",
       P::QSectorial, false, 1, true},
      {"S4", "(||AA*+A*A||/2)^r <= 2^(r-1) (w_q^(2r)/|q|^(2r) + K^(2r) w_q^(2r))", P::QSectorial, false, 1,
       false},
      {"S5", "|q|^4 ||AA*+A*A|| / (2(|q|^2 + (|q|sin(alpha)+2s)^2)) <= w_q^2", P::QSectorial, false, 1, false},
      {"S6", "||A|| <= (|q| + |q|sin(alpha) + 2s)/|q|^2 w_q(A)", P::QSectorial, false, 1, false},
      {"S7", "c^2 (N/4 + (||Im A||^2-||Re A||^2)/2) <= w_q^2 and c (||A||/2 + (||Im A||-||Re A||)/2) <= w_q",
       P::QSectorial, false, 1, false},
      {"S8", "||A||/(1+sin(alpha)) <= w(A)", P::Sectorial, false, 1, false},
      {"S9", "||Re A|| <= ||Im A||: ||A*A+AA*||/(4 sin^2(alpha)) <= w^2(A)", P::SectorialImDominant, false, 1,
       false},
      {"K1", "w_q(AXB +- BYA) <= 2|q| m (phi(u)+psi(u)+phi(v)+psi(v))^(1/2) + s ||AXB +- BYA||",
       P::QSectorial, false, 4, true},
      {"K2", "w_q(AXB +- BYA) <= 2/|q| m (|q|^2 + (|q|sin(alpha)+2s)^2)^(1/2) w_q(A) + s ||AXB +- BYA||",
       P::QSectorial, false, 4, false},
      {"K3", "w_q(AB +- BA) <= 2/|q| ||B|| (|q|^2 + (|q|sin(alpha)+2s)^2)^(1/2) w_q(A) + s ||AB +- BA||",
       P::QSectorial, false, 2, false},
      {"K4", "A, B q-sectorial: w_q(AB +- BA) <= min(mu1, mu2)", P::QSectorialPair, false, 2, false},
      {"K5", "w(AB +- BA) <= 2 sqrt(1+sin^2(alpha)) ||B|| w(A) <= 2 sqrt2 ||B|| w(A)", P::Sectorial, false, 2,
       false},
  };
}

std::uint64_t fnv_bytes(std::uint64_t h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001B3ULL;
  }
  return h;
}

template <typename T>
std::uint64_t fnv(std::uint64_t h, const T& value) {
  return fnv_bytes(h, &value, sizeof value);
}

constexpr std::uint64_t kFnvOffset = 0xCBF29CE484222325ULL;

std::uint64_t inputs_digest(std::string_view id, const EvalInputs& in) {
  std::uint64_t h = fnv_bytes(kFnvOffset, id.data(), id.size());
  for (const ComplexMatrix& m : in.matrices) h = fnv(h, matrix_digest(m));
  h = fnv(h, in.q.value().real());
  h = fnv(h, in.q.value().imag());
  if (in.phi != nullptr) h = fnv_bytes(h, in.phi->name().data(), in.phi->name().size());
  h = fnv(h, in.alpha.value_or(-1.0));
  h = fnv(h, in.r);
  return h;
}

double norm(const ComplexMatrix& a) { return spectral_norm(a); }

// ||T*T + TT*||
double sym_norm(const ComplexMatrix& t) {
  const ComplexMatrix h = t.adjoint();
  return norm(h * t + t * h);
}

LinkOutcome upper(std::string label, double lhs, double rhs) {
  return make_link(std::move(label), lhs, rhs, LinkKind::Upper);
}
LinkOutcome lower(std::string label, double lhs, double rhs) {
  return make_link(std::move(label), lhs, rhs, LinkKind::Lower);
}
LinkOutcome chain(std::string label, double lhs, double rhs) {
  return make_link(std::move(label), lhs, rhs, LinkKind::Chain);
}

// head <= scale * HH(f, a, b) <= scale * (f(a) + f(b)) / 2, plus the midpoint side of HH.
void hh_chain(std::vector<LinkOutcome>& links, const OrliczFn& f, double head, double a, double b,
              double scale = 1.0) {
  const double hh = scale * hermite_hadamard_integral(f, a, b);
  const double half = scale * 0.5 * (f(a) + f(b));
  links.push_back(upper("integral", head, hh));
  links.push_back(chain("half_sum", hh, half));
  links.push_back(chain("midpoint", scale * f(0.5 * (a + b)), hh));
}

struct Context {
  const EvalInputs& in;
  RadiusOracle& oracle;
  double alpha = 0.0;

  const ComplexMatrix& m(std::size_t i) const { return in.matrices[i]; }
  double q() const { return in.q.modulus(); }
  double s() const { return in.q.s(); }
  double wq(const ComplexMatrix& t) const { return oracle.certified(t, in.q); }
  double w(const ComplexMatrix& t) const { return oracle.classical(t); }
  const OrliczFn& phi() const { return *in.phi; }
  // sin(alpha)/|q| + 2s/|q|^2
  double big_k() const { return std::sin(alpha) / q() + 2.0 * s() / (q() * q()); }
  // sqrt(1-|q|^2) + sqrt(2|q| sqrt(1-|q|^2))
  double small_k() const { return s() + std::sqrt(2.0 * q() * s()); }
  // (|q|^2 + (|q| sin(alpha) + 2s)^2)^(1/2)
  double root_term() const {
    const double inner = q() * std::sin(alpha) + 2.0 * s();
    return std::sqrt(q() * q() + inner * inner);
  }
};

using Evaluator = std::function<std::vector<LinkOutcome>(Context&)>;

std::vector<LinkOutcome> eval_l1a(Context& c) {
  const double n = norm(c.m(0));
  const double w = c.wq(c.m(0));
  return {lower("lower", c.q() / 2.0 * n, w), upper("upper", w, n)};
}

std::vector<LinkOutcome> eval_l1b(Context& c) {
  const double n = norm(c.m(0));
  const double w = c.wq(c.m(0));
  return {lower("lower", c.q() * n, w), upper("upper", w, n)};
}

std::vector<LinkOutcome> eval_l2(Context& c) {
  const double q = c.q();
  const double n = norm(c.m(0));
  const double w = c.wq(c.m(0));
  return {lower("lower", q / (2.0 * (2.0 - q * q)) * n, w), upper("upper", w, n)};
}

std::vector<LinkOutcome> eval_l3(Context& c) {
  const double q = c.q();
  const double n2 = sym_norm(c.m(0));
  const double w2 = std::pow(c.wq(c.m(0)), 2);
  const double lo = q * q / (4.0 * std::pow(2.0 - q * q, 2)) * n2;
  const double hi = std::pow(q + 2.0 * c.s(), 2) / 2.0 * n2;
  return {lower("lower", lo, w2), upper("upper", w2, hi)};
}

double l4_rhs(double q, double s, double n, double n_sq) {
  return q * q / 2.0 * std::pow(n + std::sqrt(n_sq), 2) + (1.0 - q * q + q * s) * n * n;
}

double q1_rhs(double q, double s, double w, double n) {
  return q * q * w * w + (1.0 - q * q + q * s) * n * n;
}

double l5_rhs(double q, double s, double n) { return (1.0 - 0.75 * q * q + q * s) * n * n; }

std::vector<LinkOutcome> eval_l4(Context& c) {
  const ComplexMatrix& t = c.m(0);
  const double w2 = std::pow(c.wq(t), 2);
  return {upper("upper", w2, l4_rhs(c.q(), c.s(), norm(t), norm(t * t)))};
}

std::vector<LinkOutcome> eval_l5(Context& c) {
  const ComplexMatrix& t = c.m(0);
  return {upper("upper", std::pow(c.wq(t), 2), l5_rhs(c.q(), c.s(), norm(t)))};
}

std::vector<LinkOutcome> eval_t1(Context& c) {
  const ComplexMatrix& t = c.m(0);
  const double root = std::sqrt(sym_norm(t));
  std::vector<LinkOutcome> links;
  hh_chain(links, c.phi(), c.phi()(c.wq(t)), std::numbers::sqrt2 * c.q() * root, 2.0 * c.s() * root);
  return links;
}

std::vector<LinkOutcome> eval_r1(Context& c) {
  const ComplexMatrix& t = c.m(0);
  const double r = c.in.r;
  const double root = std::sqrt(sym_norm(t));
  const OrliczFn pr = builtin("power:" + std::to_string(c.in.r));
  const double a = std::numbers::sqrt2 * c.q() * root;
  const double b = 2.0 * c.s() * root;
  const double hh = hermite_hadamard_integral(pr, a, b);
  const double closed =
      std::pow(2.0, r / 2.0 - 1.0) * (std::pow(c.q(), r) + std::pow(2.0, r / 2.0) * std::pow(c.s(), r)) *
      std::pow(root, r);
  return {upper("integral", std::pow(c.wq(t), r), hh), chain("closed_form", hh, closed)};
}

std::vector<LinkOutcome> eval_c1(Context& c) {
  const double q = c.q();
  const double s = c.s();
  const double n2 = sym_norm(c.m(0));
  const double w2 = std::pow(c.wq(c.m(0)), 2);
  const double hi = (2.0 - q * q + 2.0 * std::numbers::sqrt2 * q * s) / 2.0 * n2;
  return {lower("lower", q * q / 4.0 * n2, w2), upper("upper", w2, hi)};
}

std::vector<LinkOutcome> eval_c2(Context& c) {
  const ComplexMatrix& t = c.m(0);
  const double q2 = c.q() * c.q();
  const double target = c.phi()(q2 * sym_norm(t) / 4.0);
  double dev = 0.0;
  constexpr int grid = 64;
  for (int k = 0; k < grid; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / grid;
    const double re = norm(rotated_real_part(t, theta));
    const double im = norm(rotated_real_part(t, theta - 0.5 * std::numbers::pi));
    dev = std::max({dev, std::abs(c.phi()(q2 * re * re) - target), std::abs(c.phi()(q2 * im * im) - target)});
  }
  return {upper("coincide", dev, 1e-6 * std::max(1.0, std::abs(target)))};
}

std::vector<LinkOutcome> eval_t2(Context& c) {
  const double q = c.q();
  const double s = c.s();
  const std::size_t n = c.in.matrices.size();
  ComplexMatrix sum = c.m(0);
  for (std::size_t i = 1; i < n; ++i) sum += c.m(i);
  const double nn = static_cast<double>(n * n);
  double rhs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = c.w(c.m(i));
    const double nt = norm(c.m(i));
    rhs += c.phi()(nn * (q * q * w * w + (1.0 - q * q + q * s) * nt * nt));
  }
  rhs /= static_cast<double>(n);
  return {upper("upper", c.phi()(std::pow(c.wq(sum), 2)), rhs)};
}

std::vector<LinkOutcome> eval_q1(Context& c) {
  const ComplexMatrix& t = c.m(0);
  return {upper("upper", std::pow(c.wq(t), 2), q1_rhs(c.q(), c.s(), c.w(t), norm(t)))};
}

std::vector<LinkOutcome> eval_q2(Context& c) {
  const ComplexMatrix& t = c.m(0);
  const double n = norm(t);
  const double mid = q1_rhs(c.q(), c.s(), c.w(t), n);
  return {upper("upper", std::pow(c.wq(t), 2), mid), chain("refines", mid, l5_rhs(c.q(), c.s(), n))};
}

struct ProductTerms {
  ComplexMatrix trs;
  double r_norm;
  double a;  // |q| ||S*S + TT*||
  double b;  // 2k ||S|| ||T||
};

ProductTerms product_terms(Context& c) {
  const ComplexMatrix& t = c.m(0);
  const ComplexMatrix& r = c.m(1);
  const ComplexMatrix& s = c.m(2);
  const double p = norm(s.adjoint() * s + t * t.adjoint());
  return {t * r * s, norm(r), c.q() * p, 2.0 * c.small_k() * norm(s) * norm(t)};
}

std::vector<LinkOutcome> eval_t3(Context& c) {
  const ProductTerms pt = product_terms(c);
  std::vector<LinkOutcome> links;
  hh_chain(links, c.phi(), c.phi()(c.wq(pt.trs)), pt.r_norm * pt.a, pt.r_norm * pt.b);
  return links;
}

std::vector<LinkOutcome> eval_c3a(Context& c) {
  const ProductTerms pt = product_terms(c);
  const double r = c.in.r;
  const OrliczFn pr = builtin("power:" + std::to_string(c.in.r));
  const double a = pt.r_norm * pt.a;
  const double b = pt.r_norm * pt.b;
  const double hh = hermite_hadamard_integral(pr, a, b);
  return {upper("integral", std::pow(c.wq(pt.trs), r), hh),
          chain("half_sum", hh, 0.5 * (std::pow(a, r) + std::pow(b, r)))};
}

std::vector<LinkOutcome> eval_c3b(Context& c) {
  const ProductTerms pt = product_terms(c);
  return {upper("upper", c.wq(pt.trs), pt.r_norm / 2.0 * (pt.a + pt.b))};
}

std::vector<LinkOutcome> eval_c3c(Context& c) {
  const ComplexMatrix& t = c.m(0);
  const double n = norm(t);
  const double rhs = 0.5 * (c.q() * sym_norm(t) + 2.0 * c.small_k() * n * n);
  return {upper("upper", c.wq(t * t), rhs)};
}

std::vector<LinkOutcome> eval_c3d(Context& c) {
  const ProductTerms pt = product_terms(c);
  std::vector<LinkOutcome> links;
  hh_chain(links, c.phi(), c.phi()(c.wq(pt.trs)), pt.a, pt.b, pt.r_norm);
  return links;
}

std::vector<LinkOutcome> eval_s1(Context& c) {
  const ComplexMatrix& a = c.m(0);
  const double up = c.oracle.support(a, c.in.q, 0.5 * std::numbers::pi);
  const double down = c.oracle.support(a, c.in.q, 1.5 * std::numbers::pi);
  const double im = std::max({up, down, 0.0});
  return {upper("upper", c.phi()(im), std::sin(c.alpha) * c.phi()(c.wq(a)))};
}

std::vector<LinkOutcome> eval_s2(Context& c) {
  const ComplexMatrix& a = c.m(0);
  return {upper("upper", norm(hermitian_parts(a).second), c.big_k() * c.wq(a))};
}

std::vector<LinkOutcome> eval_s3(Context& c) {
  const ComplexMatrix& a = c.m(0);
  const double w2 = std::pow(c.wq(a), 2);
  const double k = c.big_k();
  std::vector<LinkOutcome> links;
  hh_chain(links, c.phi(), c.phi()(sym_norm(a) / 2.0), 2.0 * w2 / (c.q() * c.q()), 2.0 * k * k * w2);
  return links;
}

std::vector<LinkOutcome> eval_s4(Context& c) {
  const ComplexMatrix& a = c.m(0);
  const double r = c.in.r;
  const double w2 = std::pow(c.wq(a), 2);
  const double k = c.big_k();
  const double q = c.q();
  const OrliczFn pr = builtin("power:" + std::to_string(c.in.r));
  const double hh = hermite_hadamard_integral(pr, 2.0 * w2 / (q * q), 2.0 * k * k * w2);
  const double closed = std::pow(2.0, r - 1.0) * (std::pow(w2 / (q * q), r) + std::pow(k * k * w2, r));
  return {upper("integral", std::pow(sym_norm(a) / 2.0, r), hh), chain("closed_form", hh, closed)};
}

std::vector<LinkOutcome> eval_s5(Context& c) {
  const ComplexMatrix& a = c.m(0);
  const double q = c.q();
  const double rt = c.root_term();
  return {lower("lower", std::pow(q, 4) * sym_norm(a) / (2.0 * rt * rt), std::pow(c.wq(a), 2))};
}

std::vector<LinkOutcome> eval_s6(Context& c) {
  const ComplexMatrix& a = c.m(0);
  const double q = c.q();
  const double coef = (q + q * std::sin(c.alpha) + 2.0 * c.s()) / (q * q);
  return {upper("upper", norm(a), coef * c.wq(a))};
}

std::vector<LinkOutcome> eval_s7(Context& c) {
  const ComplexMatrix& a = c.m(0);
  const double q = c.q();
  const auto [re, im] = hermitian_parts(a);
  const double nre = norm(re);
  const double nim = norm(im);
  const double coef = q * q / (q * std::sin(c.alpha) + 2.0 * c.s());
  const double w = c.wq(a);
  const double squared = coef * coef * (sym_norm(a) / 4.0 + (nim * nim - nre * nre) / 2.0);
  const double linear = coef * (norm(a) / 2.0 + (nim - nre) / 2.0);
  return {lower("squared", squared, w * w), lower("linear", linear, w)};
}

std::vector<LinkOutcome> eval_s8(Context& c) {
  const ComplexMatrix& a = c.m(0);
  return {lower("lower", norm(a) / (1.0 + std::sin(c.alpha)), c.wq(a))};
}

std::vector<LinkOutcome> eval_s9(Context& c) {
  const ComplexMatrix& a = c.m(0);
  const double sa = std::sin(c.alpha);
  return {lower("lower", sym_norm(a) / (4.0 * sa * sa), std::pow(c.wq(a), 2))};
}

const char* sign_label(int sign) { return sign > 0 ? "plus" : "minus"; }

ComplexMatrix signed_sum(const ComplexMatrix& x, const ComplexMatrix& y, int sign) {
  return sign > 0 ? x + y : x - y;
}

std::vector<LinkOutcome> eval_k1(Context& c) {
  const ComplexMatrix& a = c.m(0);
  const ComplexMatrix& b = c.m(1);
  const ComplexMatrix& x = c.m(2);
  const ComplexMatrix& y = c.m(3);
  const ComplementaryPair pair = complementary(c.phi());
  const double w = c.wq(a);
  const double u = w / c.q();
  const double v = c.big_k() * w;
  const double sigma = pair.phi(u) + pair.psi(u) + pair.phi(v) + pair.psi(v);
  const double mx = std::max(norm(x * b), norm(b * y));
  std::vector<LinkOutcome> links;
  for (int sign : {1, -1}) {
    const ComplexMatrix m = signed_sum(a * x * b, b * y * a, sign);
    const double rhs = 2.0 * c.q() * mx * std::sqrt(sigma) + c.s() * norm(m);
    links.push_back(upper(sign_label(sign), c.wq(m), rhs));
  }
  return links;
}

std::vector<LinkOutcome> eval_k2(Context& c) {
  const ComplexMatrix& a = c.m(0);
  const ComplexMatrix& b = c.m(1);
  const ComplexMatrix& x = c.m(2);
  const ComplexMatrix& y = c.m(3);
  const double mx = std::max(norm(x * b), norm(b * y));
  const double head = 2.0 / c.q() * mx * c.root_term() * c.wq(a);
  std::vector<LinkOutcome> links;
  for (int sign : {1, -1}) {
    const ComplexMatrix m = signed_sum(a * x * b, b * y * a, sign);
    links.push_back(upper(sign_label(sign), c.wq(m), head + c.s() * norm(m)));
  }
  return links;
}

std::vector<LinkOutcome> eval_k3(Context& c) {
  const ComplexMatrix& a = c.m(0);
  const ComplexMatrix& b = c.m(1);
  const double head = 2.0 / c.q() * norm(b) * c.root_term() * c.wq(a);
  std::vector<LinkOutcome> links;
  for (int sign : {1, -1}) {
    const ComplexMatrix m = commutator(a, b, sign);
    links.push_back(upper(sign_label(sign), c.wq(m), head + c.s() * norm(m)));
  }
  return links;
}

std::vector<LinkOutcome> eval_k4(Context& c) {
  const ComplexMatrix& a = c.m(0);
  const ComplexMatrix& b = c.m(1);
  const double mu1_head = 2.0 / c.q() * norm(b) * c.root_term() * c.wq(a);
  const double mu2_head = 2.0 / c.q() * norm(a) * c.root_term() * c.wq(b);
  std::vector<LinkOutcome> links;
  for (int sign : {1, -1}) {
    const ComplexMatrix m = commutator(a, b, sign);
    const double tail = c.s() * norm(m);
    links.push_back(upper(sign_label(sign), c.wq(m), std::min(mu1_head, mu2_head) + tail));
  }
  return links;
}

std::vector<LinkOutcome> eval_k5(Context& c) {
  const ComplexMatrix& a = c.m(0);
  const ComplexMatrix& b = c.m(1);
  const double sa = std::sin(c.alpha);
  const double coef = 2.0 * std::sqrt(1.0 + sa * sa);
  const double head = coef * norm(b) * c.wq(a);
  std::vector<LinkOutcome> links;
  for (int sign : {1, -1}) {
    const ComplexMatrix m = commutator(a, b, sign);
    links.push_back(upper(sign_label(sign), c.wq(m), head));
  }
  links.push_back(chain("coefficient", coef, 2.0 * std::numbers::sqrt2));
  return links;
}

const std::unordered_map<std::string_view, Evaluator>& evaluators() {
  static const std::unordered_map<std::string_view, Evaluator> table = {
      {"L1a", eval_l1a}, {"L1b", eval_l1b}, {"L2", eval_l2},   {"L3", eval_l3},   {"L4", eval_l4},
      {"L5", eval_l5},   {"T1", eval_t1},   {"R1", eval_r1},   {"C1", eval_c1},   {"C2", eval_c2},
      {"T2", eval_t2},   {"Q1", eval_q1},   {"Q2", eval_q2},   {"T3", eval_t3},   {"C3a", eval_c3a},
      {"C3b", eval_c3b}, {"C3c", eval_c3c}, {"C3d", eval_c3d}, {"S1", eval_s1},   {"S2", eval_s2},
      {"S3", eval_s3},   {"S4", eval_s4},   {"S5", eval_s5},   {"S6", eval_s6},   {"S7", eval_s7},
      {"S8", eval_s8},   {"S9", eval_s9},   {"K1", eval_k1},   {"K2", eval_k2},   {"K3", eval_k3},
      {"K4", eval_k4},   {"K5", eval_k5},
  };
  return table;
}

[[noreturn]] void unmet(const BoundSpec& spec, const std::string& why) {
  throw Error(ErrorKind::PredicateUnmet, spec.id + ": " + why);
}

double scaled_tol(double base, const ComplexMatrix& t) {
  const double n = norm(t);
  return base * std::max(1.0, n * n);
}

double resolve_alpha(const BoundSpec& spec, const ComplexMatrix& a, const EvalInputs& in,
                     RadiusOracle& oracle) {
  if (in.alpha) {
    if (!(*in.alpha >= 0.0) || !(*in.alpha < 0.5 * std::numbers::pi)) {
      throw Error(ErrorKind::InvalidInput, spec.id + ": sectorial index must lie in [0, pi/2)");
    }
    return *in.alpha;
  }
  const SectorialVerdict v = sectorial_index_estimate(a, in.q, 128, 16, oracle.options().seed);
  if (!v.is_q_sectorial) unmet(spec, "matrix is not q-sectorial");
  return *v.alpha_margined;
}

}  // namespace

LinkOutcome make_link(std::string label, double lhs, double rhs, LinkKind kind) {
  LinkOutcome l;
  l.label = std::move(label);
  l.lhs = lhs;
  l.rhs = rhs;
  l.kind = kind;
  l.slack = rhs - lhs;
  if (rhs == std::numeric_limits<double>::infinity()) {
    l.relative_slack = std::numeric_limits<double>::infinity();
    l.holds = true;
    return l;
  }
  if (std::isnan(lhs) || std::isnan(rhs)) {
    l.relative_slack = std::numeric_limits<double>::quiet_NaN();
    l.holds = false;
    return l;
  }
  l.relative_slack = l.slack / std::max({1.0, std::abs(lhs), std::abs(rhs)});
  l.holds = l.relative_slack >= kTol.slack_floor;
  return l;
}

const std::vector<BoundSpec>& catalog() {
  static const std::vector<BoundSpec> specs = build_catalog();
  return specs;
}

const BoundSpec& find_bound(std::string_view id) {
  for (const BoundSpec& s : catalog())
    if (s.id == id) return s;
  throw Error(ErrorKind::UnknownName, "unknown bound id '" + std::string(id) + "'");
}

std::uint64_t matrix_digest(const ComplexMatrix& a) {
  std::uint64_t h = fnv(kFnvOffset, static_cast<std::uint64_t>(a.dim()));
  return fnv_bytes(h, a.entries().data(), a.entries().size() * sizeof(Complex));
}

RadiusOracle::RadiusOracle(OracleOptions opts) : opts_(opts) {}

double RadiusOracle::certified(const ComplexMatrix& t, const QParam& q) {
  const std::uint64_t digest = matrix_digest(t);
  const Key key{digest, std::bit_cast<std::uint64_t>(q.value().real()),
                std::bit_cast<std::uint64_t>(q.value().imag())};
  if (auto it = radius_cache_.find(key); it != radius_cache_.end()) return it->second;

  double value = q_numerical_radius(t, q, opts_.restarts, derive_seed(opts_.seed, digest)).value;
  if (t.dim() >= 2 && opts_.sampler_trials > 0) {
    const Seed sampler_seed = derive_seed(opts_.seed, digest ^ 0xA5A5A5A5A5A5A5A5ULL);
    value = std::max(value, q_radius_bruteforce(t, q, opts_.sampler_trials, sampler_seed));
  }
  if (q.modulus() == 1.0) value = std::max(value, classical(t));
  radius_cache_.emplace(key, value);
  return value;
}

double RadiusOracle::classical(const ComplexMatrix& t) {
  const std::uint64_t digest = matrix_digest(t);
  if (auto it = classical_cache_.find(digest); it != classical_cache_.end()) return it->second;
  const double value = classical_numerical_radius(t);
  classical_cache_.emplace(digest, value);
  return value;
}

double RadiusOracle::support(const ComplexMatrix& t, const QParam& q, double theta) {
  AscentOptions opts;
  opts.restarts = opts_.support_restarts;
  opts.seed = derive_seed(opts_.seed, matrix_digest(t) ^ std::bit_cast<std::uint64_t>(theta));
  return support_point(t, q, theta, opts).value;
}

bool is_square_zero(const ComplexMatrix& t) { return norm(t * t) <= scaled_tol(kTol.square_zero, t); }

bool is_normal_matrix(const ComplexMatrix& t) {
  const ComplexMatrix h = t.adjoint();
  return norm(t * h - h * t) <= scaled_tol(kTol.normal, t);
}

void check_applicable(const BoundSpec& spec, const EvalInputs& in, RadiusOracle& oracle) {
  const std::size_t count = in.matrices.size();
  if (spec.arity == 0 ? count == 0 : count != static_cast<std::size_t>(spec.arity)) {
    throw Error(ErrorKind::ArityMismatch, spec.id + ": expected " +
                                              (spec.arity == 0 ? std::string("at least 1")
                                                               : std::to_string(spec.arity)) +
                                              " matrices, got " + std::to_string(count));
  }
  for (std::size_t i = 1; i < count; ++i) {
    if (in.matrices[i].dim() != in.matrices[0].dim()) {
      throw Error(ErrorKind::DimensionMismatch, spec.id + ": matrices must share a dimension");
    }
  }
  if (spec.orlicz_dependent && in.phi == nullptr) {
    throw Error(ErrorKind::InvalidInput, spec.id + ": needs an Orlicz function");
  }
  if (spec.q_open_unit && !(in.q.modulus() < 1.0)) unmet(spec, "requires 0 < |q| < 1");
  if ((spec.id == "R1" || spec.id == "C3a" || spec.id == "S4") && in.r < 1) {
    throw Error(ErrorKind::InvalidInput, spec.id + ": exponent r must be >= 1");
  }
  const ComplexMatrix& t = in.matrices[0];
  switch (spec.requires_predicate) {
    case Predicate::None:
    case Predicate::QSectorial:
    case Predicate::QSectorialPair:
      break;
    case Predicate::Normal:
      if (!is_normal_matrix(t)) unmet(spec, "matrix is not normal");
      break;
    case Predicate::SquareZero:
      if (!is_square_zero(t)) unmet(spec, "matrix does not square to zero");
      break;
    case Predicate::Sectorial:
      if (in.q.modulus() != 1.0) unmet(spec, "requires |q| = 1");
      break;
    case Predicate::SectorialImDominant: {
      if (in.q.modulus() != 1.0) unmet(spec, "requires |q| = 1");
      const auto [re, im] = hermitian_parts(t);
      if (norm(re) > norm(im)) unmet(spec, "requires ||Re A|| <= ||Im A||");
      break;
    }
    case Predicate::EqualityPremise: {
      const double n2 = sym_norm(t);
      const double w2 = std::pow(oracle.certified(t, in.q), 2);
      const double q2 = in.q.modulus() * in.q.modulus();
      if (std::abs(w2 - q2 / 4.0 * n2) > 1e-6 * std::max(1.0, n2)) unmet(spec, "equality premise fails");
      break;
    }
  }
  if (spec.id == "C3d" && norm(in.matrices[1]) > 1.0 + 1e-12) unmet(spec, "R must be a contraction");
}

BoundOutcome evaluate(std::string_view id, const EvalInputs& in, RadiusOracle& oracle) {
  const BoundSpec& spec = find_bound(id);
  check_applicable(spec, in, oracle);

  Context ctx{in, oracle};
  switch (spec.requires_predicate) {
    case Predicate::QSectorial:
    case Predicate::Sectorial:
    case Predicate::SectorialImDominant:
      ctx.alpha = resolve_alpha(spec, in.matrices[0], in, oracle);
      break;
    case Predicate::QSectorialPair:
      if (in.alpha) {
        ctx.alpha = resolve_alpha(spec, in.matrices[0], in, oracle);
      } else {
        ctx.alpha = std::max(resolve_alpha(spec, in.matrices[0], in, oracle),
                             resolve_alpha(spec, in.matrices[1], in, oracle));
      }
      break;
    default:
      break;
  }
  if (spec.requires_predicate == Predicate::SectorialImDominant && !(ctx.alpha > 0.0)) {
    unmet(spec, "requires alpha > 0");
  }

  BoundOutcome out;
  out.id = spec.id;
  out.links = evaluators().at(spec.id)(ctx);
  out.inputs_digest = inputs_digest(spec.id, in);

  const LinkOutcome* tightest = &out.links.front();
  bool all_hold = true;
  bool all_soft = true;
  for (const LinkOutcome& l : out.links) {
    const bool nan = std::isnan(l.relative_slack);
    if (nan || l.relative_slack < tightest->relative_slack) tightest = &l;
    all_hold = all_hold && l.holds;
    all_soft = all_soft && !nan && (l.holds || l.relative_slack >= kTol.soft_floor);
  }
  out.lhs = tightest->lhs;
  out.rhs = tightest->rhs;
  out.slack = tightest->slack;
  out.relative_slack = tightest->relative_slack;
  out.holds = all_hold;
  out.warning = !all_hold && all_soft;
  return out;
}

BoundOutcome evaluate(std::string_view id, const EvalInputs& in) {
  RadiusOracle oracle;
  return evaluate(id, in, oracle);
}

double tightness(const LinkOutcome& link) {
  if (!(link.rhs > 0.0)) throw Error(ErrorKind::DivisionDomain, "tightness needs rhs > 0");
  return link.lhs / link.rhs;
}

double tightness(const BoundOutcome& outcome) {
  if (!(outcome.rhs > 0.0)) throw Error(ErrorKind::DivisionDomain, "tightness needs rhs > 0");
  return outcome.lhs / outcome.rhs;
}

namespace {

const LinkOutcome& pick_link(const BoundOutcome& out, std::string_view label) {
  for (const LinkOutcome& l : out.links) {
    if (label.empty() ? l.kind != LinkKind::Chain : l.label == label) return l;
  }
  throw Error(ErrorKind::UnknownName, out.id + ": no link '" + std::string(label) + "'");
}

std::pair<std::string_view, std::string_view> split_ref(std::string_view ref) {
  const auto colon = ref.find(':');
  if (colon == std::string_view::npos) return {ref, {}};
  return {ref.substr(0, colon), ref.substr(colon + 1)};
}

}  // namespace

Comparison compare_bounds(std::string_view a, std::string_view b, const EvalInputs& in,
                          RadiusOracle& oracle) {
  const auto [id_a, label_a] = split_ref(a);
  const auto [id_b, label_b] = split_ref(b);
  const BoundOutcome out_a = evaluate(id_a, in, oracle);
  const BoundOutcome out_b = evaluate(id_b, in, oracle);
  const LinkOutcome& la = pick_link(out_a, label_a);
  const LinkOutcome& lb = pick_link(out_b, label_b);
  if (la.kind != lb.kind || la.kind == LinkKind::Chain) {
    throw Error(ErrorKind::InvalidInput, "compared links must both be upper or both be lower bounds");
  }
  Comparison c;
  c.a = std::string(a);
  c.b = std::string(b);
  c.kind = la.kind;
  const bool is_upper = la.kind == LinkKind::Upper;
  c.a_value = is_upper ? la.rhs : la.lhs;
  c.b_value = is_upper ? lb.rhs : lb.lhs;
  const double tol = 1e-12 * std::max({1.0, std::abs(c.a_value), std::abs(c.b_value)});
  if (std::abs(c.a_value - c.b_value) <= tol) {
    c.winner = 0;
  } else if (is_upper) {
    c.winner = c.a_value < c.b_value ? -1 : 1;
  } else {
    c.winner = c.a_value > c.b_value ? -1 : 1;
  }
  return c;
}

WinRate aggregate(std::span<const Comparison> comparisons) {
  WinRate w;
  for (const Comparison& c : comparisons) {
    if (c.winner < 0) {
      ++w.a_wins;
    } else if (c.winner > 0) {
      ++w.b_wins;
    } else {
      ++w.ties;
    }
  }
  return w;
}

}  // namespace qnr
