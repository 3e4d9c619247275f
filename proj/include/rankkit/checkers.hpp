#pragma once

// Ground truth for ranking and compression on finite prefixes of Sigma*,
// and refutation engines that check candidate functions against it.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "rankkit/compute.hpp"
#include "rankkit/sets.hpp"
#include "rankkit/strings.hpp"

namespace rankkit {

enum class Verdict { Pass, Refuted, Inconclusive };

std::string_view to_string(Verdict v);

struct Witness {
  std::string clause;               // which requirement failed
  std::vector<LexString> strings;   // the inputs involved, shortlex order of discovery
  std::vector<std::string> observed;  // what was seen on them
  std::string expected;             // what the requirement demanded, if one value
};

/// Surjectivity audit of a compression check. Holes are reported, never
/// treated as refutation: longer members could still fill them.
struct CoverAudit {
  std::uint64_t targets = 0;
  std::uint64_t witnessed = 0;
  std::vector<LexString> unwitnessed;  // at most the first 16
};

struct VerifyReport {
  Verdict verdict = Verdict::Pass;
  std::optional<Witness> witness;
  std::uint64_t examined = 0;  // strings examined
  Budget steps = 0;            // evaluation steps spent
  std::optional<CoverAudit> cover;
  std::string note;

  nlohmann::json to_json() const;
};

/// ||A^{<=x}||, or nullopt when a membership at or below x is Unknown.
std::optional<Natural> true_rank(const SetSpec& a, const LexString& x, Budget budget);

/// Memoized prefix counts of a set; the brute-force ranker behind the
/// oracle functions below. Shared between copies; thread-safe.
class RankOracle {
 public:
  RankOracle(SetSpec set, Budget budget);

  /// Same value as true_rank(set, x, budget).
  std::optional<Natural> count_upto(const LexString& x) const;
  Membership member(const LexString& x) const;

  /// Plain ranker: on every x outputs lex_unrank(count - 1), and eps
  /// when count is 0. Correct on members, arbitrary elsewhere.
  BudgetedFn ranker(Budget cost = 1) const;

  /// Partial ranker: correct on members, diverges (Pending) elsewhere.
  BudgetedFn partial_ranker(Budget cost = 1) const;

  /// Variant-"a" ranker: correct on members, Rejects on non-members.
  BudgetedFn variant_a_ranker(Budget cost = 1) const;

  const SetSpec& set() const noexcept { return set_; }

 private:
  struct Cache;
  SetSpec set_;
  Budget budget_;
  std::shared_ptr<Cache> cache_;
};

/// Rank output encoding: the c-th member maps to the c-th string of Sigma*.
inline LexString rank_string(const Natural& count) { return lex_unrank(count - 1); }

/// For every member x with |x| <= max_len: f(x) = lex_unrank(true_rank - 1).
/// Non-members are ignored. The reported witness is the shortlex-first
/// definite violation; when the wrong output repeats an earlier member's
/// rank it is reported as a collision between the two members.
VerifyReport check_ranking(const BudgetedFn& f, const SetSpec& a, std::size_t max_len, Budget budget);

/// On members with |x| <= max_len: (i) f halts with output, (ii) no two
/// members collide; plus a cover audit of the first cover_count strings.
VerifyReport check_compression(const BudgetedFn& f, const SetSpec& a, std::size_t max_len, std::uint64_t cover_count,
                               Budget budget);

enum class TruthTable { Identity, Negation, ConstantTrue, ConstantFalse };

std::string_view to_string(TruthTable t);
Membership apply(TruthTable t, Membership m);

/// A reduction making at most one query per input: A(x) = table(x)(B(query(x))).
struct OneTTReduction {
  std::string name;
  BudgetedFn query;
  std::function<TruthTable(const LexString&)> table;
};

VerifyReport check_1tt(const OneTTReduction& r, const SetSpec& a, const SetSpec& b, std::size_t max_len,
                       Budget budget);

/// Re-verifies the witness of a refuted ranking/compression report from
/// scratch. Returns Refuted when the violation reproduces, Pass when it does
/// not, Inconclusive when the cited evaluations do not resolve.
Verdict recheck_ranking(const VerifyReport& report, const BudgetedFn& f, const SetSpec& a, Budget budget);
Verdict recheck_compression(const VerifyReport& report, const BudgetedFn& f, const SetSpec& a, Budget budget);

}  // namespace rankkit
