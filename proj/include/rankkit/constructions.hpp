#pragma once

// Factories for the positive constructions: each returns the constructed
// function and/or set, plus the reductions needed to verify it.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "rankkit/checkers.hpp"
#include "rankkit/compute.hpp"
#include "rankkit/sets.hpp"

namespace rankkit {

struct NamedMap {
  enum class Kind { OneOne, ManyOne };
  std::string name;
  BudgetedFn map;
  Kind kind = Kind::ManyOne;
};

struct ConstructionBundle {
  std::optional<SetSpec> set;
  std::optional<BudgetedFn> fn;
  std::vector<NamedMap> reductions;
  std::string provenance;             // construction tag, e.g. "beta1"
  std::vector<std::string> checkers;  // checks the bundle must pass
};

/// eps -> eps, z0 -> z, z1 -> z. Ranks join_hat(S, complement(S)) for any S.
BudgetedFn join_hat_ranker();

/// s_{4i} -> s_{3i}, s_{4i+1} -> s_{3i+1}, s_{4i+2} -> s_{3i+2},
/// s_{4i+3} -> s_{3i+1}. Compresses interleave4(A) for any A.
BudgetedFn interleave4_compressor();

/// A <=_1tt interleave4(A): s_i -> s_{4i+1} with the identity table.
OneTTReduction interleave4_embedding();

/// interleave4(A) <=_1tt A: s_{4i}, s_{4i+2} constant true; s_{4i+1} asks
/// s_i with the identity table; s_{4i+3} asks s_i with the negation table.
OneTTReduction interleave4_retraction();

/// Decides A from a ranker g of interleave4(A): on s_i, accept iff the
/// ranks g assigns to s_{4i+2} and s_{4i} differ by exactly 2.
/// Throws PremiseViolation if g rejects one of those (always-member) inputs.
BudgetedFn recover_via_ranker(BudgetedFn g);

/// Maps the i-th string enumerated by `e` to s_i; undefined (Pending) on
/// strings never enumerated. Duplicates in `e` are filtered.
BudgetedFn re_compressor(const Enumerator& e);

/// L_A = { <x,eps> | x in A } union { <x,s_i> | i >= 1, x is the i-th string
/// enumerated by the complement enumerator }. The bundle carries L_A, the
/// first-coordinate projection (a compressor for L_A), the one-one
/// reduction A -> L_A and the many-one reduction L_A -> A.
/// Throws PremiseViolation unless A(x0) = Yes and A(x1) = No at `budget`.
ConstructionBundle la_construction(const SetSpec& a, const Enumerator& complement, const LexString& x0,
                                   const LexString& x1, Budget budget);

/// Result of the back-and-forth construction.
struct MyhillResult {
  enum class Status { Ok, InjectivityViolation, Inconclusive };
  Status status = Status::Ok;
  std::vector<std::pair<LexString, LexString>> pairs;  // h, in order of construction
  std::vector<LexString> witness;                      // colliding inputs, or the stuck input
  std::string detail;

  /// Looks up h(x) in the finished table.
  std::optional<LexString> image(const LexString& x) const;
  nlohmann::json to_json() const;
};

/// Builds a finite bijection h from one-one reductions f: A -> B and
/// g: B -> A by alternating forth steps (least unmatched domain string,
/// chased along f) and back steps (least unmatched range string, chased
/// along g), until the first n strings are in the domain of h.
MyhillResult myhill_isomorphism(const BudgetedFn& f, const BudgetedFn& g, std::uint64_t n, Budget budget);

/// A bijection of Sigma* carrying A onto cylinderize(B), with its inverse.
struct CylinderWitness {
  BudgetedFn forward;
  BudgetedFn inverse;
};

/// Upgrades a many-one reduction m: L -> A to a one-one reduction, given A's
/// cylinder structure: z -> inverse(pair(first(forward(m(z))), z)).
/// The witness is validated on the first `probe` strings; a non-injective
/// or non-inverse witness throws PremiseViolation.
BudgetedFn mto1_via_cylinder(BudgetedFn m, CylinderWitness witness, std::uint64_t probe, Budget budget);

enum class RetraceMode {
  Partial,  // follow the chain for as long as the budget allows
  Total,    // give up as soon as the chain fails to descend
};

/// Ranker from a retracing function: counts applications of f needed to
/// reach a0 and outputs lex_unrank(count). In Total mode a step y -> f(y)
/// with y != a0 and f(y) >= y aborts with output eps.
BudgetedFn retrace_to_rank(BudgetedFn f, LexString a0, RetraceMode mode);

/// The separator built from a 1-tt reduction and the finite sets
/// la = { f(x) | x in A, identity table } and lb = { f(x) | x in B,
/// negation table }: outputs "1" on A and "0" on B.
BudgetedFn inseparable_separator(OneTTReduction r, std::vector<LexString> la, std::vector<LexString> lb);

/// Collects la and lb from the strings of length <= max_len and builds the
/// separator. Throws PremiseViolation if a query or a membership in that
/// range does not resolve within `budget`.
BudgetedFn separator_from_prefix(const OneTTReduction& r, const SetSpec& a, const SetSpec& b, std::size_t max_len,
                                 Budget budget);

}  // namespace rankkit
