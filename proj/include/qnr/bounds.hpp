#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "qnr/linalg.hpp"
#include "qnr/orlicz.hpp"
#include "qnr/qrange.hpp"

namespace qnr {

enum class Predicate {
  None,
  Normal,
  SquareZero,
  QSectorial,
  QSectorialPair,
  Sectorial,            // q = 1 and A sectorial
  SectorialImDominant,  // q = 1, A sectorial, ||Re A|| <= ||Im A||, alpha > 0
  EqualityPremise,      // w_q^2 = |q|^2/4 ||T*T + TT*||
};

std::string_view to_string(Predicate p);

struct BoundSpec {
  std::string id;
  std::string statement;
  Predicate requires_predicate = Predicate::None;
  bool q_open_unit = false;  // needs 0 < |q| < 1
  int arity = 1;             // 0 means any positive count
  bool orlicz_dependent = false;
};

// Fixed order, unique ids.
const std::vector<BoundSpec>& catalog();
const BoundSpec& find_bound(std::string_view id);

enum class LinkKind { Lower, Upper, Chain };

struct LinkOutcome {
  std::string label;
  double lhs = 0.0;
  double rhs = 0.0;
  LinkKind kind = LinkKind::Upper;
  double slack = 0.0;           // rhs - lhs
  double relative_slack = 0.0;  // slack / max(1, |lhs|, |rhs|)
  bool holds = false;
};

struct BoundOutcome {
  std::string id;
  double lhs = 0.0;  // from the tightest link
  double rhs = 0.0;
  double slack = 0.0;
  double relative_slack = 0.0;
  bool holds = false;
  bool warning = false;  // fails the hard floor but clears the soft floor
  std::vector<LinkOutcome> links;
  std::uint64_t inputs_digest = 0;
};

LinkOutcome make_link(std::string label, double lhs, double rhs, LinkKind kind);

struct OracleOptions {
  int restarts = 32;
  int sampler_trials = 10000;
  int support_restarts = 16;
  Seed seed{0};
};

// Certified w_q: max of the ascent optimizer and the sampling oracle (and the
// classical radius when |q| = 1). Results are cached per (matrix, q).
class RadiusOracle {
 public:
  explicit RadiusOracle(OracleOptions opts = {});

  double certified(const ComplexMatrix& t, const QParam& q);
  double classical(const ComplexMatrix& t);
  double support(const ComplexMatrix& t, const QParam& q, double theta);
  const OracleOptions& options() const noexcept { return opts_; }
  std::size_t cache_size() const noexcept { return radius_cache_.size(); }

 private:
  using Key = std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>;
  OracleOptions opts_;
  std::map<Key, double> radius_cache_;
  std::map<std::uint64_t, double> classical_cache_;
};

std::uint64_t matrix_digest(const ComplexMatrix& a);

struct EvalInputs {
  std::vector<ComplexMatrix> matrices;
  QParam q{1.0};
  const OrliczFn* phi = nullptr;
  std::optional<double> alpha;  // sectorial index, supplied by the caller
  int r = 2;                    // exponent of the t^r forms
};

BoundOutcome evaluate(std::string_view id, const EvalInputs& in, RadiusOracle& oracle);
BoundOutcome evaluate(std::string_view id, const EvalInputs& in);

// Throws PredicateUnmet, ArityMismatch or InvalidInput when id cannot be evaluated on in.
void check_applicable(const BoundSpec& spec, const EvalInputs& in, RadiusOracle& oracle);
bool is_square_zero(const ComplexMatrix& t);
bool is_normal_matrix(const ComplexMatrix& t);

// lhs / rhs of the reported pair.
double tightness(const BoundOutcome& outcome);
double tightness(const LinkOutcome& link);

struct Comparison {
  std::string a;  // "ID:label"
  std::string b;
  LinkKind kind = LinkKind::Upper;
  double a_value = 0.0;  // rhs for upper links, lhs for lower links
  double b_value = 0.0;
  int winner = 0;        // -1: a tighter, 1: b tighter, 0: tie
};

// a and b are "ID" or "ID:label"; both links must be of the same kind.
Comparison compare_bounds(std::string_view a, std::string_view b, const EvalInputs& in,
                          RadiusOracle& oracle);

struct WinRate {
  int a_wins = 0;
  int b_wins = 0;
  int ties = 0;
};

WinRate aggregate(std::span<const Comparison> comparisons);

}  // namespace qnr
