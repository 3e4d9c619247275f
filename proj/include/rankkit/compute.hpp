#pragma once

// Step-budgeted partial computable functions.
//
// A BudgetedFn is either a host closure with a declared step cost or a
// program for a small register machine. Both are evaluated through the same
// contract: run(f, x, k) halts, rejects, or reports Pending(k), and any
// answer other than Pending is stable under larger budgets.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

#include "rankkit/strings.hpp"

namespace rankkit {

using Budget = std::uint64_t;

class Outcome {
 public:
  enum class Tag { Halt, Reject, Pending };

  static Outcome halt(LexString output, Budget steps) { return {Tag::Halt, std::move(output), steps}; }
  static Outcome reject(Budget steps) { return {Tag::Reject, {}, steps}; }
  static Outcome pending(Budget steps) { return {Tag::Pending, {}, steps}; }

  Tag tag() const noexcept { return tag_; }
  bool halted() const noexcept { return tag_ == Tag::Halt; }
  bool rejected() const noexcept { return tag_ == Tag::Reject; }
  bool pending() const noexcept { return tag_ == Tag::Pending; }
  bool finished() const noexcept { return tag_ != Tag::Pending; }

  /// Throws std::logic_error unless halted().
  const LexString& output() const;

  /// Steps consumed: the halting time for Halt/Reject, the budget for Pending.
  Budget steps() const noexcept { return steps_; }

  /// "halt(01)@3", "reject@5", "pending@100".
  std::string describe() const;

  friend bool operator==(const Outcome&, const Outcome&) = default;

 private:
  Outcome(Tag tag, LexString output, Budget steps) : tag_(tag), output_(std::move(output)), steps_(steps) {}

  Tag tag_;
  LexString output_;
  Budget steps_;
};

/// Raised for malformed machine programs. Never folded into Pending.
class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A procedure's premise was observed to fail (e.g. a ranker assigning the
/// same rank to two members). Distinct from any answer.
class PremiseViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Register machine

enum class OpCode : std::uint8_t { Inc, DecJz, Copy, Accept, Reject };

struct Instruction {
  OpCode op = OpCode::Reject;
  std::uint32_t a = 0;       // register operand
  std::uint32_t b = 0;       // second register (Copy destination)
  std::uint32_t target = 0;  // jump target (DecJz)

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

/// A register-machine program.
///
/// Semantics, with R0 holding lex_rank(input) and all other registers 0:
///   inc r          R[r] += 1
///   decjz r t      if R[r] == 0 jump to t, else R[r] -= 1
///   copy a b       R[b] = R[a]
///   accept r       halt, output lex_unrank(R[r])
///   reject         halt without output
/// Each executed instruction costs one step. Reaching the end of the program
/// (falling off, or jumping to index size()) costs one step and accepts with
/// output lex_unrank(R0).
class Program {
 public:
  static constexpr std::uint32_t kMaxRegisters = 16;

  Program() = default;
  /// Throws DecodeError on out-of-range registers or jump targets.
  explicit Program(std::vector<Instruction> code);

  /// Parses the line-based assembly (see to_text). '#' starts a comment.
  static Program parse(std::string_view text);
  std::string to_text() const;

  const std::vector<Instruction>& code() const noexcept { return code_; }
  std::uint32_t register_count() const noexcept { return registers_; }

  friend bool operator==(const Program&, const Program&) = default;

 private:
  std::vector<Instruction> code_;
  std::uint32_t registers_ = 1;
};

/// Registers available to programs in the machine enumeration.
inline constexpr std::uint32_t kEnumeratedRegisters = 3;

/// Index -> program for the fixed machine enumeration. Programs are ordered
/// by length, then by the mixed-radix value of their instruction codes.
/// Total: every natural decodes to a program.
Program decode_machine(const Natural& index);

/// Inverse of decode_machine for programs that use at most
/// kEnumeratedRegisters registers. Throws DecodeError otherwise.
Natural encode_machine(const Program& program);

// ---------------------------------------------------------------------------
// Budgeted functions

class Execution;

class BudgetedFn {
 public:
  /// A host closure. It must be deterministic and budget-monotone: given
  /// budget k it returns Halt/Reject with steps <= k, or Pending(k).
  using Native = std::function<Outcome(const LexString&, Budget)>;

  static BudgetedFn native(std::string name, Native fn);

  /// Total function charged a fixed synthetic cost per evaluation.
  static BudgetedFn total(std::string name, std::function<LexString(const LexString&)> fn, Budget cost = 1);

  /// Total 0/1 decider: accept halts with output "1", reject halts rejecting.
  static BudgetedFn decider(std::string name, std::function<bool(const LexString&)> fn, Budget cost = 1);

  static BudgetedFn machine(Program program, std::string name = {});

  Outcome run(const LexString& x, Budget budget) const;

  /// Resumable evaluation of this function on `x`.
  Execution start(const LexString& x) const;

  const std::string& name() const noexcept { return name_; }
  bool is_machine() const noexcept { return program_ != nullptr; }
  /// nullptr for native closures.
  const Program* program() const noexcept { return program_.get(); }

 private:
  std::string name_;
  std::shared_ptr<const Native> native_;
  std::shared_ptr<const Program> program_;
};

inline Outcome run(const BudgetedFn& f, const LexString& x, Budget budget) { return f.run(x, budget); }

/// A resumable evaluation. Copyable; copies advance independently.
class Execution {
 public:
  /// Runs until `total_steps` steps have been spent in all, or the function
  /// finishes. Returns the outcome as of that point.
  Outcome advance_to(Budget total_steps);

  Budget steps() const noexcept { return steps_; }
  bool finished() const noexcept { return result_.has_value(); }
  const LexString& input() const noexcept { return input_; }

 private:
  friend class BudgetedFn;

  struct MachineState {
    std::vector<Natural> registers;
    std::size_t pc = 0;
  };

  std::shared_ptr<const BudgetedFn::Native> native_;
  std::shared_ptr<const Program> program_;
  LexString input_;
  Budget steps_ = 0;
  std::optional<Outcome> result_;
  std::optional<MachineState> machine_;
  Budget native_probe_ = 0;   // largest budget a native closure was asked about
  std::optional<Outcome> native_answer_;
};

/// The first `count` machines of the fixed enumeration.
std::vector<BudgetedFn> enumerate_machines(std::size_t count);

// ---------------------------------------------------------------------------
// Dovetailing

/// One finished computation observed by the scheduler.
struct Discovery {
  LexString input;
  Outcome outcome;
  std::uint64_t position = 0;  // 0-based position in the input stream
  std::uint64_t round = 0;     // 1-based round in which it finished
};

/// Round-robin scheduler over an input stream. Round r grants each of the
/// first r inputs a running total of r steps, in input-stream order; a
/// computation that halts or rejects is reported once, in discovery order.
/// Copying a Dovetail clones the cursor.
class Dovetail {
 public:
  using Inputs = std::function<LexString(std::uint64_t)>;

  /// Inputs default to Sigma* in shortlex order.
  explicit Dovetail(BudgetedFn f, Inputs inputs = {});

  /// Performs scheduling work until the next discovery, or until the total
  /// simulated steps reach `allowance`.
  std::optional<Discovery> next(Budget allowance);

  Budget steps_spent() const noexcept { return spent_; }
  std::uint64_t round() const noexcept { return round_; }

 private:
  struct Slot {
    std::uint64_t position;
    Execution exec;
  };

  /// Advances one slot; returns a discovery if that slot finished.
  std::optional<Discovery> step_once();

  BudgetedFn f_;
  Inputs inputs_;
  std::uint64_t round_ = 0;
  std::vector<Slot> active_;      // unfinished computations, by position
  std::size_t cursor_ = 0;        // next slot to advance in this round
  std::uint64_t admitted_ = 0;    // inputs started so far
  Budget spent_ = 0;
};

// ---------------------------------------------------------------------------
// The halting-style set K = { x | machine number lex_rank(x) accepts x }

enum class Probe { Yes, Unknown };

/// Yes iff machine lex_rank(x) accepts x within `budget` steps.
Probe halting_probe(const LexString& x, Budget budget);

/// The raw outcome behind halting_probe.
Outcome self_application(const LexString& x, Budget budget);

}  // namespace rankkit
