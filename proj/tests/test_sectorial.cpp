#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qnr/error.hpp"
#include "qnr/linalg.hpp"
#include "qnr/qrange.hpp"
#include "qnr/random.hpp"
#include "qnr/sectorial.hpp"

using namespace qnr;

namespace {

constexpr double kPi = std::numbers::pi;

ComplexMatrix a1() { return ComplexMatrix::from_rows({{2.5, -0.5}, {-0.5, 2.5}}); }
ComplexMatrix a2() { return ComplexMatrix::from_rows({{4.0, -3.0}, {-3.0, 4.0}}); }
ComplexMatrix jordan() { return ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}}); }

ComplexMatrix shifted_hermitian(std::size_t n, std::uint64_t seed) {
  CounterRng rng(Seed{seed}, 11);
  const double shift = 4.0 * rng.uniform();
  return random_hermitian(n, Seed{seed}) + Complex(shift) * ComplexMatrix::identity(n);
}

}  // namespace

TEST_CASE("sector membership examples") {
  for (double a : {0.0, 0.3, 1.2}) CHECK(sector_membership(Complex(1.0, 0.0), {a}));
  for (double a : {0.0, 0.3, 1.5}) CHECK_FALSE(sector_membership(Complex(0.0, 1.0), {a}));
  CHECK(sector_membership(Complex(1.0, 1.0), {kPi / 4.0}));
  CHECK_FALSE(sector_membership(Complex(1.0, 1.01), {kPi / 4.0}));
  CHECK_FALSE(sector_membership(Complex(-1.0, 0.0), {1.0}));
  CHECK_FALSE(sector_membership(Complex(0.0, 0.0), {1.0}));
}

TEST_CASE("hermitian test on the worked examples") {
  const SectorialVerdict v1 = hermitian_q_sectorial_test(a1(), 0.5);
  CHECK(v1.is_q_sectorial);
  REQUIRE(v1.alpha_estimate.has_value());
  CHECK(v1.min_real_part > 0.0);
  const SectorialVerdict v2 = hermitian_q_sectorial_test(a2(), 0.5);
  CHECK_FALSE(v2.is_q_sectorial);
  CHECK(v2.witness.has_value());
  const SectorialVerdict vi = hermitian_q_sectorial_test(ComplexMatrix::identity(3), 0.9);
  CHECK(vi.is_q_sectorial);
  CHECK(*vi.alpha_estimate <= 1e-12);
  CHECK_THROWS_AS(hermitian_q_sectorial_test(jordan(), 0.5), Error);
}

// Tangent from the origin to ((x-c)/a)^2 + (y/b)^2 = 1 has slope b / sqrt(c^2 - a^2).
TEST_CASE("hermitian index matches the tangent line") {
  const EllipseDisc e = hermitian_qrange_ellipse(a1(), 0.5);
  CHECK(std::abs(e.semi_axis_x - 0.5) <= 1e-12);
  for (std::uint64_t s = 0; s < 30; ++s) {
    const ComplexMatrix h = shifted_hermitian(2 + s % 4, s);
    const auto ev = hermitian_eigenvalues(h);
    for (double q : {0.3, 0.6, 0.9}) {
      const EllipseDisc el = hermitian_qrange_ellipse(h, q);
      const double sx = el.semi_axis_x;
      const double sy = el.semi_axis_y;
      const double c = el.center_x;
      const SectorialVerdict v = hermitian_q_sectorial_test(h, q);
      CHECK(v.is_q_sectorial == (q * (ev.front() + ev.back()) > ev.front() - ev.back()));
      if (v.is_q_sectorial) {
        const double oracle = std::atan(sy / std::sqrt(c * c - sx * sx));
        CHECK(std::abs(*v.alpha_estimate - oracle) <= 1e-8);
      }
    }
  }
}

TEST_CASE("estimator on the worked examples") {
  const SectorialVerdict est = sectorial_index_estimate(a1(), 0.5, 256);
  const SectorialVerdict ref = hermitian_q_sectorial_test(a1(), 0.5);
  CHECK(est.is_q_sectorial);
  CHECK(std::abs(*est.alpha_estimate - *ref.alpha_estimate) <= 2e-2);
  CHECK(*est.alpha_margined >= *est.alpha_estimate);
  CHECK(*est.alpha_margined < kPi / 2.0);

  const SectorialVerdict j = sectorial_index_estimate(jordan(), 0.5, 256);
  CHECK_FALSE(j.is_q_sectorial);
  CHECK(j.witness.has_value());

  const std::vector<Complex> d{Complex(1.0, 0.01), Complex(2.0, 0.01)};
  CHECK(sectorial_index_estimate(ComplexMatrix::diagonal(d), 0.9, 256).is_q_sectorial);
}

TEST_CASE("verdict invariants") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const ComplexMatrix a = random_matrix(3, Seed{s}) + Complex(2.0 + s % 3) * ComplexMatrix::identity(3);
    const SectorialVerdict v = sectorial_index_estimate(a, 0.7, 128, 16, Seed{s});
    if (v.is_q_sectorial) {
      CHECK(v.min_real_part > 0.0);
      CHECK(v.alpha_estimate.has_value());
      CHECK(*v.alpha_estimate < kPi / 2.0);
    } else {
      CHECK(v.witness.has_value());
    }
  }
}

TEST_CASE("estimator agrees with the hermitian test") {
  int sectorial = 0;
  int total = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const ComplexMatrix h = shifted_hermitian(2 + s % 4, 100 + s);
    for (double q : {0.3, 0.5, 0.7, 0.9}) {
      const SectorialVerdict ref = hermitian_q_sectorial_test(h, q);
      const SectorialVerdict est = sectorial_index_estimate(h, q, 256, 8, Seed{s});
      CAPTURE(s);
      CAPTURE(q);
      CHECK(est.is_q_sectorial == ref.is_q_sectorial);
      if (est.is_q_sectorial && ref.is_q_sectorial) {
        CHECK(std::abs(*est.alpha_estimate - *ref.alpha_estimate) <= 2e-2);
        ++sectorial;
      }
      ++total;
    }
  }
  CHECK(sectorial > 20);
  CHECK(sectorial < total);
}

TEST_CASE("sectoriality is monotone in q for hermitian matrices") {
  const std::vector<double> grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  for (std::uint64_t s = 0; s < 50; ++s) {
    const ComplexMatrix h = shifted_hermitian(2 + s % 4, 300 + s);
    if (hermitian_eigenvalues(h).back() <= 0.0) continue;
    bool seen = false;
    for (double q : grid) {
      const bool now = hermitian_q_sectorial_test(h, q).is_q_sectorial;
      if (seen) CHECK(now);
      seen = seen || now;
    }
  }
}

TEST_CASE("positive definite at unit q has zero index") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const ComplexMatrix h = random_hermitian(2 + s % 3, Seed{400 + s});
    const double shift = 0.5 - hermitian_eigenvalues(h).back();
    const ComplexMatrix pd = h + Complex(shift) * ComplexMatrix::identity(h.dim());
    const SectorialVerdict v = sectorial_index_estimate(pd, 1.0, 256, 8, Seed{s});
    CHECK(v.is_q_sectorial);
    CHECK(*v.alpha_estimate <= 2e-2);
  }
}

TEST_CASE("purely imaginary matrices are not sectorial") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    CounterRng rng(Seed{500 + s});
    const std::size_t n = 2 + s % 3;
    ComplexMatrix a(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) = Complex(0.0, rng.normal() + (i == j ? 3.0 : 0.0));
    for (double q : {0.3, 0.8}) CHECK_FALSE(sectorial_index_estimate(a, q, 128, 8, Seed{s}).is_q_sectorial);
  }
}

TEST_CASE("closure suite on the worked example") {
  const ClosureReport r = closure_suite(a1(), a1(), 0.5, 1.0, 1.0);
  CHECK(r.all_passed);
  CHECK(r.checks.size() >= 4);
  for (const ClosureCheck& c : r.checks) {
    CAPTURE(c.name);
    CHECK(c.passed);
    CHECK(c.alpha <= c.allowed);
  }
  const ClosureReport r2 = closure_suite(a1(), a1(), 0.5, 2.0, 0.5);
  CHECK(r2.all_passed);
  CHECK(sectorial_index_estimate(a1().transpose(), 0.5).alpha_estimate ==
        sectorial_index_estimate(a1(), 0.5).alpha_estimate);
}

TEST_CASE("closure suite on random sectorial pairs") {
  for (std::uint64_t s = 0; s < 3; ++s) {
    const GeneratedSectorial a = generate_q_sectorial(3, QParam(0.8), 0.4, Seed{600 + s});
    const GeneratedSectorial b = generate_q_sectorial(3, QParam(0.8), 0.4, Seed{700 + s});
    REQUIRE(a.verdict.is_q_sectorial);
    REQUIRE(b.verdict.is_q_sectorial);
    const ClosureReport r = closure_suite(a.matrix, b.matrix, 0.8, 0.7, 1.9, 256, 16, Seed{s});
    for (const ClosureCheck& c : r.checks) {
      CAPTURE(c.name);
      CHECK(c.passed);
    }
    CHECK(r.all_passed);
  }
}

TEST_CASE("closure suite rejects non-sectorial input") {
  try {
    closure_suite(a2(), a1(), 0.5, 1.0, 1.0);
    FAIL("expected PredicateUnmet");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PredicateUnmet);
  }
}

TEST_CASE("generator hits the window") {
  const GeneratedSectorial g = generate_q_sectorial(3, QParam(0.8), 0.5, Seed{1});
  CHECK(g.verdict.is_q_sectorial);
  CHECK(g.in_window);
  CHECK(*g.verdict.alpha_estimate >= 0.4);
  CHECK(*g.verdict.alpha_estimate <= 0.55);
  const ComplexMatrix m1 = random_q_sectorial(3, QParam(0.8), 0.5, Seed{1});
  const ComplexMatrix m2 = random_q_sectorial(3, QParam(0.8), 0.5, Seed{1});
  CHECK(m1 == m2);
  CHECK(m1 == g.matrix);
  CHECK_FALSE(m1 == random_q_sectorial(3, QParam(0.8), 0.5, Seed{2}));
}

TEST_CASE("generator over targets and q") {
  for (double q : {0.5, 0.9, 1.0}) {
    for (double target : {0.3, 0.8, 1.2}) {
      const GeneratedSectorial g = generate_q_sectorial(3, QParam(q), target, Seed{42});
      CAPTURE(q);
      CAPTURE(target);
      CHECK(g.verdict.is_q_sectorial);
      if (g.in_window) {
        CHECK(*g.verdict.alpha_estimate >= target - 0.1);
        CHECK(*g.verdict.alpha_estimate <= target + 0.05);
      }
    }
  }
}

TEST_CASE("generator rejects targets outside the open quarter turn") {
  CHECK_THROWS_AS(generate_q_sectorial(3, QParam(0.8), 0.0, Seed{1}), Error);
  CHECK_THROWS_AS(generate_q_sectorial(3, QParam(0.8), kPi / 2.0, Seed{1}), Error);
}
