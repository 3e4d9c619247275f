#pragma once

// Set presentations with three-valued, budget-monotone membership.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rankkit/compute.hpp"
#include "rankkit/strings.hpp"

namespace rankkit {

enum class Membership { Yes, No, Unknown };

std::string_view to_string(Membership m);
Membership negate(Membership m);

/// A resumable, deterministic stream of strings. Every call of the cursor is
/// one step; a step may emit a string, emit nothing, or report that the
/// stream has ended. Emissions are cached and shared by all copies, so
/// queries are cheap after the first and safe from several threads.
class Enumerator {
 public:
  struct Tick {
    std::optional<LexString> emitted;
    bool done = false;
  };
  using Cursor = std::function<Tick()>;
  using Factory = std::function<Cursor()>;

  Enumerator(std::string name, Factory factory);

  /// Emits the list one element per step, then ends.
  static Enumerator from_list(std::vector<LexString> items, std::string name = "list");

  /// Emits sequence(0), sequence(1), ... one per step, forever.
  static Enumerator from_sequence(std::function<LexString(std::uint64_t)> sequence, std::string name = "sequence");

  /// Scans Sigma* in shortlex order, one string per step, emitting those
  /// satisfying `keep`. Never ends.
  static Enumerator scan_universe(std::function<bool(const LexString&)> keep, std::string name = "scan");

  /// Emits the inputs on which `f` halts with output, in dovetail discovery
  /// order. One step is one scheduler advance.
  static Enumerator domain_of(BudgetedFn f);

  /// Repetition-free view: drops any string already emitted.
  Enumerator distinct() const;

  /// The i-th (0-based) emission, if it happens within `budget` steps.
  std::optional<LexString> nth(std::uint64_t i, Budget budget) const;

  /// 0-based position of the first emission of `x` within `budget` steps.
  std::optional<std::uint64_t> position_of(const LexString& x, Budget budget) const;

  /// Steps at which the i-th emission happened, if it happens within budget.
  std::optional<Budget> emitted_at(std::uint64_t i, Budget budget) const;

  /// True if the stream ends within `budget` steps.
  bool ends_within(Budget budget) const;

  /// Everything emitted within `budget` steps, in order.
  std::vector<LexString> emitted_within(Budget budget) const;

  const std::string& name() const noexcept;

 private:
  struct State;
  std::shared_ptr<State> state_;
};

/// Membership interface shared by every presentation and combinator.
class SetNode {
 public:
  virtual ~SetNode() = default;
  virtual Membership member(const LexString& x, Budget budget) const = 0;
  virtual std::string describe() const = 0;
};

/// An immutable handle on a set presentation.
class SetSpec {
 public:
  explicit SetSpec(std::shared_ptr<const SetNode> node);

  static SetSpec finite(std::vector<LexString> members);
  static SetSpec universe();
  static SetSpec empty();

  /// Decidable set given by a host predicate (synthetic cost 1).
  static SetSpec predicate(std::string name, std::function<bool(const LexString&)> keep);

  /// Decided by a budgeted function: Halt means Yes, Reject means No. The
  /// effective budget is min(cap, query budget).
  static SetSpec decided_by(BudgetedFn decider, Budget cap);

  /// r.e. presentation: Yes once enumerated; No once a finite stream has
  /// ended without emitting x; Unknown otherwise.
  static SetSpec enumerated(Enumerator e);

  /// co-r.e. presentation from an enumerator of the complement.
  static SetSpec co_enumerated(Enumerator complement);

  Membership member(const LexString& x, Budget budget) const { return node_->member(x, budget); }
  std::string describe() const { return node_->describe(); }
  const SetNode& node() const noexcept { return *node_; }

 private:
  std::shared_ptr<const SetNode> node_;
};

inline Membership member(const SetSpec& s, const LexString& x, Budget budget) { return s.member(x, budget); }

SetSpec complement(const SetSpec& s);

/// { x0 | x in a } union { x1 | x in b }. eps is never a member.
SetSpec join_hat(const SetSpec& a, const SetSpec& b);

/// s_{4i}, s_{4i+2} always; s_{4i+1} iff s_i in a; s_{4i+3} iff s_i not in a.
SetSpec interleave4(const SetSpec& a);

/// { pair(x, y) | x in b, y in Sigma* }.
SetSpec cylinderize(const SetSpec& b);

/// Budgeted K = { x | machine lex_rank(x) accepts x }. Yes once acceptance
/// is observed, No once the machine is seen to reject, else Unknown.
SetSpec k_approx(Budget cap);

/// { <x,eps> | x not in K } union { <x, successor(y)> | machine lex_rank(x)
/// accepts x in exactly lex_rank(y) steps }, budgeted.
SetSpec cok_cylinder_set(Budget cap);

/// Members of `s` in shortlex order, one candidate per step, each decided
/// with `per_query` budget (Unknown candidates are skipped).
Enumerator enumerate_members(const SetSpec& s, Budget per_query);

/// Non-members of `s` in shortlex order, as above.
Enumerator enumerate_nonmembers(const SetSpec& s, Budget per_query);

// ---------------------------------------------------------------------------
// Textual set descriptions
//
//   expr := 'finite' '{' [string {',' string}] '}'
//         | 'sigma' | 'empty' | 'evens' | 'odds' | 'starts1'
//         | 'K_approx' '(' number ')' | 'coK_cyl' '(' number ')'
//         | 'random' '(' seed ',' max_len ')'
//         | 'joinhat' '(' expr ',' expr ')'
//         | ('interleave4' | 'complement' | 'cylinder') '(' expr ')'
//   string := binary literal | 'eps'

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::string token)
      : std::runtime_error(message), token_(std::move(token)) {}
  const std::string& token() const noexcept { return token_; }

 private:
  std::string token_;
};

SetSpec parse_set(std::string_view text);

/// The finite set used by random(seed, max_len): each string of length
/// <= max_len is a member with probability 1/2, drawn from mt19937_64(seed).
std::vector<LexString> random_finite_members(std::uint64_t seed, std::size_t max_len);

}  // namespace rankkit
