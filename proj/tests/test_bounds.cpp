#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "qnr/bounds.hpp"
#include "qnr/error.hpp"
#include "qnr/linalg.hpp"
#include "qnr/orlicz.hpp"
#include "qnr/random.hpp"
#include "qnr/sectorial.hpp"

using namespace qnr;

namespace {

ComplexMatrix jordan() { return ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}}); }

// max over phi of sin(phi)(q cos(phi) + s sin(phi)) for the Jordan block
double jordan_radius(double q) { return 0.5 * (1.0 + std::sqrt(1.0 - q * q)); }

EvalInputs single(const ComplexMatrix& t, double q) {
  EvalInputs in;
  in.matrices = {t};
  in.q = QParam(q);
  return in;
}

const LinkOutcome& link(const BoundOutcome& out, const std::string& label) {
  for (const LinkOutcome& l : out.links)
    if (l.label == label) return l;
  FAIL("missing link " << label);
  return out.links.front();
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Io;
}

}  // namespace

TEST_CASE("catalog shape") {
  const auto& cat = catalog();
  CHECK(cat.size() >= 24);
  std::set<std::string> ids;
  for (const BoundSpec& b : cat) {
    CHECK(ids.insert(b.id).second);
    CHECK_FALSE(b.statement.empty());
  }
  CHECK(ids.count("C1") == 1);
  CHECK(find_bound("C1").id == "C1");
  CHECK(kind_of([] { find_bound("Z9"); }) == ErrorKind::UnknownName);
}

TEST_CASE("sectorial entries") {
  int entries = 0;
  std::set<std::string> groups;
  for (const BoundSpec& b : catalog()) {
    const bool sectorial = b.requires_predicate == Predicate::QSectorial ||
                           b.requires_predicate == Predicate::QSectorialPair ||
                           b.requires_predicate == Predicate::Sectorial ||
                           b.requires_predicate == Predicate::SectorialImDominant;
    if (!sectorial) continue;
    ++entries;
    groups.insert(b.id[0] == 'K' ? std::string("K") : b.id);
  }
  CHECK(entries == 14);
  CHECK(groups.size() == 10);
}

TEST_CASE("C1 on the Jordan block") {
  const BoundOutcome out = evaluate("C1", single(jordan(), 0.5));
  const LinkOutcome& lo = link(out, "lower");
  const LinkOutcome& hi = link(out, "upper");
  const double w2 = std::pow(jordan_radius(0.5), 2);
  CHECK(std::abs(lo.lhs - 0.0625) <= 1e-12);
  CHECK(std::abs(lo.rhs - w2) <= 1e-8);
  CHECK(std::abs(w2 - 0.8705) <= 1e-4);
  CHECK(std::abs(hi.rhs - (2.0 - 0.25 + 2.0 * std::sqrt(2.0) * 0.5 * std::sqrt(0.75)) / 2.0) <= 1e-12);
  CHECK(std::abs(hi.rhs - 1.4874) <= 1e-4);
  CHECK(out.holds);
  CHECK(std::abs(tightness(lo) - 0.0625 / w2) <= 1e-8);
  CHECK(std::abs(tightness(lo) - 0.0718) <= 1e-4);
}

TEST_CASE("L1a on the identity") {
  const BoundOutcome out = evaluate("L1a", single(ComplexMatrix::identity(3), 0.7));
  CHECK(std::abs(link(out, "lower").lhs - 0.35) <= 1e-12);
  CHECK(std::abs(link(out, "lower").rhs - 0.7) <= 1e-9);
  CHECK(std::abs(link(out, "upper").rhs - 1.0) <= 1e-12);
  CHECK(out.holds);
}

TEST_CASE("Q2 on the Jordan block") {
  const BoundOutcome out = evaluate("Q2", single(jordan(), 0.5));
  const LinkOutcome& r = link(out, "refines");
  CHECK(std::abs(r.rhs - (1.0 - 3.0 / 16.0 + 0.5 * std::sqrt(0.75))) <= 1e-12);
  CHECK(std::abs(r.rhs - 1.2455) <= 1e-4);
  CHECK(std::abs(link(out, "upper").lhs - std::pow(jordan_radius(0.5), 2)) <= 1e-8);
  CHECK(out.holds);
}

TEST_CASE("holds matches the slack floor") {
  const LinkOutcome ok = make_link("x", 1.0, 1.0 - 5e-10, LinkKind::Upper);
  CHECK(ok.holds);
  const LinkOutcome bad = make_link("x", 1.0, 1.0 - 2e-9, LinkKind::Upper);
  CHECK_FALSE(bad.holds);
  CHECK(std::abs(bad.slack + 2e-9) <= 1e-15);
  CHECK(make_link("x", 1.0, INFINITY, LinkKind::Upper).holds);
  CHECK_FALSE(make_link("x", NAN, 1.0, LinkKind::Upper).holds);
}

TEST_CASE("tightness examples") {
  CHECK(tightness(make_link("x", 2.0, 2.0, LinkKind::Upper)) == 1.0);
  CHECK(tightness(make_link("x", 0.0, 2.0, LinkKind::Upper)) == 0.0);
  CHECK(kind_of([] { tightness(make_link("x", 1.0, 0.0, LinkKind::Upper)); }) == ErrorKind::DivisionDomain);
  CHECK(kind_of([] { tightness(make_link("x", 1.0, -1.0, LinkKind::Upper)); }) == ErrorKind::DivisionDomain);
}

TEST_CASE("C1 upper refines L3 upper") {
  RadiusOracle oracle;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const ComplexMatrix t = random_matrix(2 + s % 4, Seed{s});
    const double n = spectral_norm(t.adjoint() * t + t * t.adjoint());
    const Comparison c = compare_bounds("C1:upper", "L3:upper", single(t, 0.5), oracle);
    CHECK(c.winner == -1);
    CHECK(std::abs(c.a_value - 1.4874 * n) <= 1e-4 * n);
    CHECK(std::abs(c.b_value - 2.4911 * n) <= 1e-4 * n);
  }
}

TEST_CASE("C1 lower refines L2 lower in squared units") {
  RadiusOracle oracle;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const ComplexMatrix t = random_matrix(2 + s % 4, Seed{100 + s});
    for (double q : {0.2, 0.5, 0.9}) {
      const double c1 = link(evaluate("C1", single(t, q), oracle), "lower").lhs;
      const double l2 = link(evaluate("L2", single(t, q), oracle), "lower").lhs;
      CHECK(c1 >= l2 * l2 - 1e-12);
    }
  }
}

TEST_CASE("compare_bounds rejects mixed link kinds") {
  RadiusOracle oracle;
  CHECK(kind_of([&] { compare_bounds("C1:lower", "L3:upper", single(jordan(), 0.5), oracle); }) ==
        ErrorKind::InvalidInput);
}

TEST_CASE("aggregate counts wins") {
  std::vector<Comparison> cs(5);
  cs[0].winner = -1;
  cs[1].winner = -1;
  cs[2].winner = 1;
  cs[3].winner = 0;
  cs[4].winner = -1;
  const WinRate w = aggregate(cs);
  CHECK(w.a_wins == 3);
  CHECK(w.b_wins == 1);
  CHECK(w.ties == 1);
}

TEST_CASE("S8 beats cos alpha past the crossover") {
  auto gap = [](double a) { return 1.0 / (1.0 + std::sin(a)) - std::cos(a); };
  double lo = 0.5;
  double hi = 1.5;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) < 0.0 ? lo : hi) = mid;
  }
  const double cross = 0.5 * (lo + hi);
  CHECK(std::abs(cross - 6.0 * std::numbers::pi / 19.0) <= 2e-2);
  CHECK(gap(0.99) < 0.0);
  CHECK(gap(cross + 0.05) > 0.0);
  CHECK(std::abs(1.0 / (1.0 + std::sin(0.99)) - 0.5446) <= 1e-4);
  CHECK(std::abs(std::cos(0.99) - 0.5487) <= 1e-4);
}

TEST_CASE("S8 evaluates with a supplied index") {
  const ComplexMatrix a = ComplexMatrix::from_rows({{2.5, -0.5}, {-0.5, 2.5}});
  EvalInputs in = single(a, 1.0);
  in.alpha = 0.0;
  const BoundOutcome out = evaluate("S8", in);
  CHECK(out.holds);
  CHECK(std::abs(tightness(out) - 1.0) <= 1e-8);
}

TEST_CASE("refinement properties") {
  RadiusOracle oracle;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const ComplexMatrix t = random_matrix(2 + s % 4, Seed{200 + s});
    for (double q : {0.3, 0.6, 0.9}) {
      const double q1 = link(evaluate("Q1", single(t, q), oracle), "upper").rhs;
      const double l4 = link(evaluate("L4", single(t, q), oracle), "upper").rhs;
      CHECK(q1 <= l4 + 1e-9);
    }
  }
  for (std::uint64_t s = 0; s < 10; ++s) {
    // strictly upper triangular 3x3 with a zero corner squares to zero
    CounterRng rng(Seed{s});
    ComplexMatrix t(3);
    t(0, 2) = rng.complex_normal();
    t(0, 1) = 0.0;
    t(1, 2) = 0.0;
    REQUIRE(is_square_zero(t));
    for (double q : {0.3, 0.6, 0.9}) {
      const double q2 = link(evaluate("Q2", single(t, q), oracle), "upper").rhs;
      const double l5 = link(evaluate("L5", single(t, q), oracle), "upper").rhs;
      CHECK(q2 <= l5 + 1e-9);
    }
  }
  for (int k = 0; k < 50; ++k) {
    const double alpha = k * (std::numbers::pi / 2.0) / 50.0;
    CHECK(2.0 * std::sqrt(1.0 + std::pow(std::sin(alpha), 2)) <= 2.0 * std::sqrt(2.0) + 1e-12);
  }
}

TEST_CASE("K5 coefficient link") {
  const GeneratedSectorial g = generate_q_sectorial(3, QParam(1.0), 0.5, Seed{3});
  REQUIRE(g.verdict.is_q_sectorial);
  EvalInputs in;
  in.matrices = {g.matrix, random_matrix(3, Seed{4})};
  in.q = QParam(1.0);
  in.alpha = *g.verdict.alpha_margined;
  const BoundOutcome out = evaluate("K5", in);
  const LinkOutcome& c = link(out, "coefficient");
  CHECK(std::abs(c.lhs - 2.0 * std::sqrt(1.0 + std::pow(std::sin(*in.alpha), 2))) <= 1e-12);
  CHECK(c.holds);
  CHECK(out.holds);
}

TEST_CASE("predicates and arity are enforced") {
  const ComplexMatrix t = random_matrix(3, Seed{5});
  CHECK(kind_of([&] { evaluate("L5", single(t, 0.5)); }) == ErrorKind::PredicateUnmet);
  CHECK(kind_of([&] { evaluate("L1b", single(jordan(), 0.5)); }) == ErrorKind::PredicateUnmet);
  CHECK(kind_of([&] { evaluate("C3a", single(t, 0.5)); }) == ErrorKind::ArityMismatch);
  CHECK(kind_of([&] { evaluate("L2", single(t, 1.0)); }) == ErrorKind::PredicateUnmet);
  CHECK(kind_of([&] { evaluate("S8", single(t, 0.5)); }) == ErrorKind::PredicateUnmet);
  CHECK(kind_of([&] { evaluate("T1", single(t, 0.5)); }) == ErrorKind::InvalidInput);
  CHECK(kind_of([&] { evaluate("S6", single(jordan(), 0.5)); }) == ErrorKind::PredicateUnmet);
  EvalInputs mixed;
  mixed.matrices = {t, random_matrix(2, Seed{6}), t};
  mixed.q = QParam(0.5);
  CHECK(kind_of([&] { evaluate("C3b", mixed); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("T2 with one summand and linear phi equals Q1") {
  const OrliczFn id = builtin("power:1");
  RadiusOracle oracle;
  for (std::uint64_t s = 0; s < 10; ++s) {
    EvalInputs in = single(random_matrix(2 + s % 3, Seed{300 + s}), 0.4 + 0.05 * s);
    in.phi = &id;
    const BoundOutcome t2 = evaluate("T2", in, oracle);
    const BoundOutcome q1 = evaluate("Q1", in, oracle);
    CHECK(std::abs(t2.lhs - q1.lhs) <= 1e-12 * q1.rhs);
    CHECK(std::abs(t2.rhs - q1.rhs) <= 1e-12 * q1.rhs);
  }
}

TEST_CASE("chain middle terms sit between the outer terms") {
  const OrliczFn sq = builtin("power:2");
  RadiusOracle oracle;
  for (std::uint64_t s = 0; s < 10; ++s) {
    EvalInputs in = single(random_matrix(2 + s % 3, Seed{400 + s}), 0.7);
    in.phi = &sq;
    const BoundOutcome t1 = evaluate("T1", in, oracle);
    CHECK(link(t1, "half_sum").holds);
    CHECK(link(t1, "midpoint").holds);
    CHECK(t1.holds);
  }
}

TEST_CASE("inputs digest depends on every input") {
  RadiusOracle oracle;
  const ComplexMatrix t = random_matrix(3, Seed{9});
  const auto d1 = evaluate("L1a", single(t, 0.5), oracle).inputs_digest;
  CHECK(d1 == evaluate("L1a", single(t, 0.5), oracle).inputs_digest);
  CHECK(d1 != evaluate("L1a", single(t, 0.6), oracle).inputs_digest);
  CHECK(d1 != evaluate("C1", single(t, 0.5), oracle).inputs_digest);
  CHECK(d1 != evaluate("L1a", single(random_matrix(3, Seed{10}), 0.5), oracle).inputs_digest);
}

TEST_CASE("non-sectorial single-matrix bounds hold on random matrices") {
  const OrliczFn phi = builtin("power:2");
  RadiusOracle oracle;
  int checked = 0;
  for (std::uint64_t s = 0; s < 12; ++s) {
    const ComplexMatrix t = random_matrix(2 + s % 5, Seed{500 + s});
    for (double q : {0.1, 0.5, 0.9, 1.0}) {
      for (const BoundSpec& b : catalog()) {
        if (b.arity != 1 || b.requires_predicate != Predicate::None) continue;
        if (b.q_open_unit && q == 1.0) continue;
        EvalInputs in = single(t, q);
        in.phi = &phi;
        const BoundOutcome out = evaluate(b.id, in, oracle);
        CAPTURE(b.id);
        CAPTURE(q);
        CHECK(out.holds);
        ++checked;
      }
    }
  }
  CHECK(checked > 300);
}
