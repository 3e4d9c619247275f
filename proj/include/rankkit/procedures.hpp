#pragma once

// Decision procedures driven by rankers, and the stage construction that
// defeats a list of candidate compressors.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "rankkit/checkers.hpp"
#include "rankkit/compute.hpp"
#include "rankkit/sets.hpp"

namespace rankkit {

enum class Decision { Accept, Reject, Inconclusive };

std::string_view to_string(Decision d);

struct DecisionRecord {
  Decision decision = Decision::Inconclusive;
  std::string clause;               // which rule fired
  std::vector<LexString> evidence;  // strings that justify it
  Budget steps = 0;

  nlohmann::json to_json() const;
};

/// Decides membership in an r.e. set from a repetition-free enumerator E
/// and a ranker f. Each enumerated y is ranked; the first rule to fire wins:
///   (a) y = x                                   -> accept
///   (b) some enumerated y > x has rank eps      -> reject
///   (c) enumerated y < x < y' with f(y') = successor(f(y)) -> reject
/// Throws PremiseViolation if two enumerated strings share a rank or f
/// fails to output on an enumerated string.
DecisionRecord decide_re_with_ranker(const Enumerator& e, const BudgetedFn& f, const LexString& x, Budget budget);

/// Races f(x) against the complement enumerator: outputs f(x) if it halts
/// first, `fallback` if x is enumerated first.
BudgetedFn totalize_ranker(BudgetedFn f, Enumerator complement, LexString fallback = LexString("101010"));

/// Decides a co-r.e. set from an enumerator of its complement, an
/// enumerator of an infinite subset, and a total ranker g:
/// find an enumerated subset member s_n > x, then exactly
/// n - lex_rank(g(s_n)) strings <= s_n lie outside the set; collect that
/// many from the complement enumerator and reject iff x is among them.
DecisionRecord decide_core_with_subset(const Enumerator& complement, const Enumerator& subset, const BudgetedFn& g,
                                       const LexString& x, Budget budget);

/// Decides membership from a variant-"a" ranker (never outputs on
/// non-members) by dovetailing it over Sigma*.
DecisionRecord variant_a_decider(const BudgetedFn& f, const LexString& x, Budget budget);

// ---------------------------------------------------------------------------
// Stage construction

enum class StageCase { Collision, Hole, FiniteDomain, Inconclusive };

std::string_view to_string(StageCase c);

struct StageRecord {
  std::size_t candidate = 0;       // index into the candidate list
  StageCase kind = StageCase::Inconclusive;
  LexString start;                 // frontier before the stage
  LexString frontier;              // frontier after the stage
  std::uint64_t window = 0;        // strings scanned from `start`
  std::vector<LexString> added;    // strings new to the set
  std::vector<LexString> witness;  // collision pair, or the frozen hole point
  std::optional<LexString> target; // shared output (collision) or excluded image (hole)
};

struct StageState {
  std::vector<LexString> members;  // sorted shortlex
  LexString frontier;
  std::vector<StageRecord> stages;

  bool contains(const LexString& x) const;
  /// Members after stage i (1-based); stage 0 is the empty set.
  std::vector<LexString> members_after(std::size_t stage) const;
  nlohmann::json to_json() const;
};

/// One stage per candidate, in order. Per stage, every string in the
/// current set plus the `search_horizon` strings from the frontier is run
/// for up to `stage_budget` steps; the stage then commits the first case it
/// can certify (collision, hole, finite domain) or logs inconclusive.
StageState diagonalize(std::span<const BudgetedFn> candidates, Budget stage_budget, std::uint64_t search_horizon);

/// Re-verifies every certified stage and the growth/freeze invariants.
/// Witness clause names the failing stage.
VerifyReport audit_diagonal(const StageState& state, std::span<const BudgetedFn> candidates, Budget budget);

}  // namespace rankkit
