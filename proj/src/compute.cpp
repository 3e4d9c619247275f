#include "rankkit/compute.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace rankkit {

const LexString& Outcome::output() const {
  if (tag_ != Tag::Halt) throw std::logic_error("Outcome::output on a non-halting outcome");
  return output_;
}

std::string Outcome::describe() const {
  switch (tag_) {
    case Tag::Halt:
      return "halt(" + output_.token() + ")@" + std::to_string(steps_);
    case Tag::Reject:
      return "reject@" + std::to_string(steps_);
    case Tag::Pending:
      break;
  }
  return "pending@" + std::to_string(steps_);
}

// ---------------------------------------------------------------------------
// Programs

Program::Program(std::vector<Instruction> code) : code_(std::move(code)) {
  std::uint32_t highest = 0;
  for (std::size_t i = 0; i < code_.size(); ++i) {
    const Instruction& ins = code_[i];
    const auto where = "instruction " + std::to_string(i) + ": ";
    if (ins.a >= kMaxRegisters || ins.b >= kMaxRegisters) {
      throw DecodeError(where + "register out of range (max r" + std::to_string(kMaxRegisters - 1) + ")");
    }
    if (ins.op == OpCode::DecJz && ins.target > code_.size()) {
      throw DecodeError(where + "jump target " + std::to_string(ins.target) + " past end of program");
    }
    switch (ins.op) {
      case OpCode::Copy:
        highest = std::max({highest, ins.a, ins.b});
        break;
      case OpCode::Reject:
        break;
      default:
        highest = std::max(highest, ins.a);
    }
  }
  registers_ = highest + 1;
}

namespace {

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == ',')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != ',') ++j;
    if (j > i) words.push_back(line.substr(i, j - i));
    i = j;
  }
  return words;
}

std::uint32_t parse_number(std::string_view word, std::size_t line_no, bool is_register) {
  std::string_view digits = word;
  if (is_register) {
    if (digits.empty() || (digits.front() != 'r' && digits.front() != 'R')) {
      throw DecodeError("line " + std::to_string(line_no) + ": expected register, got '" + std::string(word) + "'");
    }
    digits.remove_prefix(1);
  }
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty()) {
    throw DecodeError("line " + std::to_string(line_no) + ": bad operand '" + std::string(word) + "'");
  }
  return value;
}

}  // namespace

Program Program::parse(std::string_view text) {
  std::vector<Instruction> code;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto words = split_words(line);
    if (words.empty()) continue;

    const std::string_view op = words[0];
    auto want = [&](std::size_t n) {
      if (words.size() != n + 1) {
        throw DecodeError("line " + std::to_string(line_no) + ": '" + std::string(op) + "' takes " +
                          std::to_string(n) + " operand(s)");
      }
    };
    Instruction ins;
    if (op == "inc") {
      want(1);
      ins = {OpCode::Inc, parse_number(words[1], line_no, true), 0, 0};
    } else if (op == "decjz") {
      want(2);
      ins = {OpCode::DecJz, parse_number(words[1], line_no, true), 0, parse_number(words[2], line_no, false)};
    } else if (op == "copy") {
      want(2);
      ins = {OpCode::Copy, parse_number(words[1], line_no, true), parse_number(words[2], line_no, true), 0};
    } else if (op == "accept") {
      want(1);
      ins = {OpCode::Accept, parse_number(words[1], line_no, true), 0, 0};
    } else if (op == "reject") {
      want(0);
      ins = {OpCode::Reject, 0, 0, 0};
    } else {
      throw DecodeError("line " + std::to_string(line_no) + ": unknown opcode '" + std::string(op) + "'");
    }
    code.push_back(ins);
  }
  return Program(std::move(code));
}

std::string Program::to_text() const {
  std::ostringstream out;
  for (const Instruction& ins : code_) {
    switch (ins.op) {
      case OpCode::Inc: out << "inc r" << ins.a; break;
      case OpCode::DecJz: out << "decjz r" << ins.a << ' ' << ins.target; break;
      case OpCode::Copy: out << "copy r" << ins.a << " r" << ins.b; break;
      case OpCode::Accept: out << "accept r" << ins.a; break;
      case OpCode::Reject: out << "reject"; break;
    }
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Machine enumeration
//
// For a program of length L, each instruction is one of
//   inc r (3) | decjz r t, t in [0, L] (3(L+1)) | copy a b (9) | accept r (3) | reject (1)
// so the per-instruction alphabet has 19 + 3L symbols, in that order.

namespace {

constexpr std::uint32_t R = kEnumeratedRegisters;

std::uint64_t alphabet_size(std::uint64_t length) { return R + R * (length + 1) + R * R + R + 1; }

Instruction decode_instruction(std::uint64_t c, std::uint64_t length) {
  if (c < R) return {OpCode::Inc, static_cast<std::uint32_t>(c), 0, 0};
  c -= R;
  if (c < R * (length + 1)) {
    return {OpCode::DecJz, static_cast<std::uint32_t>(c / (length + 1)), 0, static_cast<std::uint32_t>(c % (length + 1))};
  }
  c -= R * (length + 1);
  if (c < R * R) return {OpCode::Copy, static_cast<std::uint32_t>(c / R), static_cast<std::uint32_t>(c % R), 0};
  c -= R * R;
  if (c < R) return {OpCode::Accept, static_cast<std::uint32_t>(c), 0, 0};
  return {OpCode::Reject, 0, 0, 0};
}

std::uint64_t encode_instruction(const Instruction& ins, std::uint64_t length) {
  switch (ins.op) {
    case OpCode::Inc: return ins.a;
    case OpCode::DecJz: return R + ins.a * (length + 1) + ins.target;
    case OpCode::Copy: return R + R * (length + 1) + ins.a * R + ins.b;
    case OpCode::Accept: return R + R * (length + 1) + R * R + ins.a;
    case OpCode::Reject: break;
  }
  return R + R * (length + 1) + R * R + R;
}

}  // namespace

Program decode_machine(const Natural& index) {
  if (index < 0) throw std::domain_error("decode_machine: negative index");
  Natural rest = index;
  std::uint64_t length = 0;
  for (;; ++length) {
    const Natural count = boost::multiprecision::pow(Natural(alphabet_size(length)), static_cast<unsigned>(length));
    if (rest < count) break;
    rest -= count;
  }
  const std::uint64_t k = alphabet_size(length);
  std::vector<Instruction> code(length);
  for (std::uint64_t i = length; i-- > 0;) {
    const Natural digit = rest % k;
    rest /= k;
    code[i] = decode_instruction(digit.convert_to<std::uint64_t>(), length);
  }
  return Program(std::move(code));
}

Natural encode_machine(const Program& program) {
  const auto& code = program.code();
  const std::uint64_t length = code.size();
  for (const Instruction& ins : code) {
    const bool uses_b = ins.op == OpCode::Copy;
    if (ins.a >= R || (uses_b && ins.b >= R)) {
      throw DecodeError("encode_machine: program uses registers outside r0..r" + std::to_string(R - 1));
    }
  }
  Natural offset = 0;
  for (std::uint64_t l = 0; l < length; ++l) {
    offset += boost::multiprecision::pow(Natural(alphabet_size(l)), static_cast<unsigned>(l));
  }
  Natural value = 0;
  for (const Instruction& ins : code) value = value * alphabet_size(length) + encode_instruction(ins, length);
  return offset + value;
}

std::vector<BudgetedFn> enumerate_machines(std::size_t count) {
  std::vector<BudgetedFn> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(BudgetedFn::machine(decode_machine(Natural(i)), "M" + std::to_string(i)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// BudgetedFn

BudgetedFn BudgetedFn::native(std::string name, Native fn) {
  BudgetedFn f;
  f.name_ = std::move(name);
  f.native_ = std::make_shared<const Native>(std::move(fn));
  return f;
}

BudgetedFn BudgetedFn::total(std::string name, std::function<LexString(const LexString&)> fn, Budget cost) {
  return native(std::move(name), [fn = std::move(fn), cost](const LexString& x, Budget budget) {
    if (budget < cost) return Outcome::pending(budget);
    return Outcome::halt(fn(x), cost);
  });
}

BudgetedFn BudgetedFn::decider(std::string name, std::function<bool(const LexString&)> fn, Budget cost) {
  return native(std::move(name), [fn = std::move(fn), cost](const LexString& x, Budget budget) {
    if (budget < cost) return Outcome::pending(budget);
    return fn(x) ? Outcome::halt(LexString("1"), cost) : Outcome::reject(cost);
  });
}

BudgetedFn BudgetedFn::machine(Program program, std::string name) {
  BudgetedFn f;
  f.name_ = name.empty() ? "machine" : std::move(name);
  f.program_ = std::make_shared<const Program>(std::move(program));
  return f;
}

Outcome BudgetedFn::run(const LexString& x, Budget budget) const {
  if (native_) {
    Outcome o = (*native_)(x, budget);
    if (o.pending()) return Outcome::pending(budget);
    return o;
  }
  return start(x).advance_to(budget);
}

Execution BudgetedFn::start(const LexString& x) const {
  Execution e;
  e.native_ = native_;
  e.program_ = program_;
  e.input_ = x;
  if (program_) {
    Execution::MachineState m;
    m.registers.assign(program_->register_count(), Natural(0));
    m.registers[0] = lex_rank(x);
    e.machine_ = std::move(m);
  }
  return e;
}

Outcome Execution::advance_to(Budget total_steps) {
  if (result_) return *result_;
  if (total_steps <= steps_) return Outcome::pending(steps_);

  if (program_) {
    const auto& code = program_->code();
    auto& regs = machine_->registers;
    auto& pc = machine_->pc;
    while (steps_ < total_steps) {
      ++steps_;
      if (pc >= code.size()) {
        result_ = Outcome::halt(lex_unrank(regs[0]), steps_);
        return *result_;
      }
      const Instruction& ins = code[pc];
      switch (ins.op) {
        case OpCode::Inc:
          ++regs[ins.a];
          ++pc;
          break;
        case OpCode::DecJz:
          if (regs[ins.a] == 0) {
            pc = ins.target;
          } else {
            --regs[ins.a];
            ++pc;
          }
          break;
        case OpCode::Copy:
          regs[ins.b] = regs[ins.a];
          ++pc;
          break;
        case OpCode::Accept:
          result_ = Outcome::halt(lex_unrank(regs[ins.a]), steps_);
          return *result_;
        case OpCode::Reject:
          result_ = Outcome::reject(steps_);
          return *result_;
      }
    }
    return Outcome::pending(steps_);
  }

  // Native closures are re-asked with geometrically growing budgets; the
  // monotonicity contract makes the cached answer valid for smaller ones.
  if (!native_answer_ || (native_answer_->pending() && native_probe_ < total_steps)) {
    native_probe_ = std::max<Budget>({total_steps, native_probe_ * 2, 64});
    native_answer_ = (*native_)(input_, native_probe_);
  }
  if (native_answer_->finished() && native_answer_->steps() <= total_steps) {
    steps_ = native_answer_->steps();
    result_ = native_answer_;
    return *result_;
  }
  steps_ = total_steps;
  return Outcome::pending(steps_);
}

// ---------------------------------------------------------------------------
// Dovetail

Dovetail::Dovetail(BudgetedFn f, Inputs inputs) : f_(std::move(f)), inputs_(std::move(inputs)) {
  if (!inputs_) inputs_ = [](std::uint64_t i) { return lex_unrank(Natural(i)); };
}

std::optional<Discovery> Dovetail::step_once() {
  if (cursor_ >= active_.size()) {
    ++round_;
    active_.push_back(Slot{admitted_, f_.start(inputs_(admitted_))});
    ++admitted_;
    cursor_ = 0;
  }
  Slot& slot = active_[cursor_];
  const Budget before = slot.exec.steps();
  Outcome o = slot.exec.advance_to(round_);
  spent_ += slot.exec.steps() - before;
  if (o.finished()) {
    Discovery d{slot.exec.input(), std::move(o), slot.position, round_};
    active_.erase(active_.begin() + static_cast<std::ptrdiff_t>(cursor_));
    return d;
  }
  ++cursor_;
  return std::nullopt;
}

std::optional<Discovery> Dovetail::next(Budget allowance) {
  while (spent_ < allowance) {
    if (auto d = step_once()) return d;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// K approximation

Outcome self_application(const LexString& x, Budget budget) {
  return BudgetedFn::machine(decode_machine(lex_rank(x))).run(x, budget);
}

Probe halting_probe(const LexString& x, Budget budget) {
  return self_application(x, budget).halted() ? Probe::Yes : Probe::Unknown;
}

}  // namespace rankkit
