#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <random>

#include "oracles.hpp"
#include "rankkit/compute.hpp"

using namespace rankkit;

namespace {

BudgetedFn identity() {
  return BudgetedFn::total("identity", [](const LexString& x) { return x; });
}

BudgetedFn loop_program() { return BudgetedFn::machine(Program::parse("decjz r1 0\n"), "loop"); }

// Halts after cost(x) steps, with output x.
BudgetedFn costed(std::function<Budget(const LexString&)> cost) {
  return BudgetedFn::native("costed", [cost](const LexString& x, Budget b) {
    const Budget c = cost(x);
    return c <= b ? Outcome::halt(x, c) : Outcome::pending(b);
  });
}

}  // namespace

TEST_CASE("outcome descriptions") {
  CHECK(Outcome::halt(LexString("01"), 3).describe() == "halt(01)@3");
  CHECK(Outcome::reject(5).describe() == "reject@5");
  CHECK(Outcome::pending(100).describe() == "pending@100");
  CHECK_THROWS_AS(Outcome::pending(1).output(), std::logic_error);
}

TEST_CASE("run on native closures") {
  CHECK(identity().run(LexString("01"), 1) == Outcome::halt(LexString("01"), 1));
  CHECK(identity().run(LexString("01"), 0).pending());
  const BudgetedFn d = BudgetedFn::decider("starts1", [](const LexString& x) { return !x.empty() && x.bits()[0] == '1'; });
  CHECK(d.run(LexString("10"), 5).output() == LexString("1"));
  CHECK(d.run(LexString("01"), 5).rejected());
}

TEST_CASE("register machine semantics") {
  // Falling off the end outputs R0 and costs one step.
  const BudgetedFn empty = BudgetedFn::machine(Program{});
  CHECK(empty.run(LexString("101"), 1) == Outcome::halt(LexString("101"), 1));
  CHECK(empty.run(LexString("101"), 0).pending());

  // successor: inc r0, then fall off.
  const BudgetedFn succ = BudgetedFn::machine(Program::parse("inc r0"));
  for (const auto& s : oracle::all_strings(5)) {
    const Outcome o = succ.run(LexString(s), 10);
    REQUIRE(o.halted());
    CHECK(o.output().bits() == oracle::nth_string(oracle::index_of(s) + 1));
    CHECK(o.steps() == 2);
  }

  // Halving by repeated double decrement, output from r1.
  const BudgetedFn half = BudgetedFn::machine(Program::parse(R"(# r1 = r0 / 2
decjz r0 4
decjz r0 4
inc r1
decjz r2 0
accept r1
)"));
  for (std::uint64_t n = 0; n < 40; ++n) {
    const Outcome o = half.run(lex_unrank(n), 1000);
    REQUIRE(o.halted());
    CHECK(lex_rank(o.output()) == n / 2);
  }

  CHECK(BudgetedFn::machine(Program::parse("reject")).run(LexString("0"), 5) == Outcome::reject(1));
  const BudgetedFn copy = BudgetedFn::machine(Program::parse("copy r0 r2\naccept r2"));
  CHECK(copy.run(LexString("0110"), 5).output() == LexString("0110"));
}

TEST_CASE("loops stay pending") {
  for (Budget k : {Budget{1}, Budget{10}, Budget{1000}, Budget{100000}}) {
    const Outcome o = loop_program().run(LexString("0"), k);
    CHECK(o.pending());
    CHECK(o.steps() == k);
  }
}

TEST_CASE("malformed programs raise decode errors") {
  CHECK_THROWS_AS(Program::parse("jump r0"), DecodeError);
  CHECK_THROWS_AS(Program::parse("decjz r0 9"), DecodeError);
  CHECK_THROWS_AS(Program::parse("inc r99"), DecodeError);
  CHECK_THROWS_AS(encode_machine(Program::parse("inc r5")), DecodeError);
}

TEST_CASE("program text round-trips") {
  for (std::uint64_t i = 0; i < 3000; i += 7) {
    const Program p = decode_machine(i);
    CHECK(Program::parse(p.to_text()) == p);
  }
}

TEST_CASE("machine enumeration") {
  CHECK(enumerate_machines(0).empty());
  const auto five = enumerate_machines(5);
  const auto six = enumerate_machines(6);
  for (std::size_t i = 0; i < 5; ++i) CHECK(*five[i].program() == *six[i].program());

  // Index 0 is the empty program; the 22 length-1 programs follow.
  CHECK(decode_machine(0).code().empty());
  CHECK(decode_machine(1).code().size() == 1);
  CHECK(decode_machine(22).code().size() == 1);
  CHECK(decode_machine(23).code().size() == 2);

  for (std::uint64_t i = 0; i < 5000; i += 3) CHECK(encode_machine(decode_machine(i)) == i);

  // Some early machine computes the identity on short inputs.
  bool found = false;
  for (const BudgetedFn& m : enumerate_machines(200)) {
    bool ok = true;
    for (const auto& s : oracle::all_strings(3)) {
      const Outcome o = m.run(LexString(s), 1000);
      ok = ok && o.halted() && o.output().bits() == s;
    }
    found = found || ok;
  }
  CHECK(found);
}

TEST_CASE("budget monotonicity of machines and natives") {
  std::mt19937_64 rng(7);
  int halted = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const BudgetedFn f = BudgetedFn::machine(decode_machine(rng() % 20000));
    const LexString x = lex_unrank(rng() % 64);
    const Budget k = 1 + rng() % 50;
    const Outcome a = f.run(x, k);
    const Outcome b = f.run(x, 2 * k);
    CHECK(a == f.run(x, k));
    if (a.finished()) {
      ++halted;
      CHECK(a == b);
    }
  }
  CHECK(halted > 100);
}

TEST_CASE("resumable executions match fresh runs") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const BudgetedFn f = BudgetedFn::machine(decode_machine(rng() % 5000));
    const LexString x = lex_unrank(rng() % 32);
    Execution e = f.start(x);
    for (Budget k = 1; k <= 40; ++k) {
      const Outcome stepped = e.advance_to(k);
      const Outcome fresh = f.run(x, k);
      CHECK(stepped == fresh);
    }
  }
  // Natives are re-probed and their answer reused.
  Execution e = costed([](const LexString&) { return Budget{6}; }).start(LexString("1"));
  CHECK(e.advance_to(3).pending());
  CHECK(e.advance_to(10) == Outcome::halt(LexString("1"), 6));
}

TEST_CASE("dovetail order") {
  Dovetail id(identity());
  const auto first = id.next(100);
  REQUIRE(first);
  CHECK(first->input == LexString{});
  CHECK(first->outcome == Outcome::halt(LexString{}, 1));

  // Costs eps:5, "0":1 put "0" first.
  Dovetail costs(costed([](const LexString& x) { return x.empty() ? Budget{5} : x == LexString("0") ? Budget{1} : Budget{1000}; }));
  const auto a = costs.next(1000);
  const auto b = costs.next(1000);
  REQUIRE(a);
  REQUIRE(b);
  CHECK(a->input == LexString("0"));
  CHECK(b->input == LexString{});

  // Only "00" halts.
  const BudgetedFn only00 = BudgetedFn::native("only00", [](const LexString& x, Budget b) {
    return x == LexString("00") ? Outcome::halt(x, 1) : Outcome::pending(b);
  });
  Dovetail d(only00);
  const auto hit = d.next(5000);
  REQUIRE(hit);
  CHECK(hit->input == LexString("00"));
  CHECK_FALSE(d.next(5000));
}

TEST_CASE("dovetail fairness and copies") {
  // Halting time t(x) = 1 + lex_rank(x) % 7; position p is found by round max(p + 1, t).
  auto t = [](const LexString& x) { return Budget{1} + static_cast<Budget>(lex_rank(x) % 7); };
  Dovetail d(costed(t));
  std::map<std::string, std::uint64_t> found;
  while (found.size() < 60) {
    const auto hit = d.next(1u << 20);
    REQUIRE(hit);
    CHECK(found.emplace(hit->input.bits(), hit->round).second);
    CHECK(hit->round <= std::max<std::uint64_t>(hit->position + 1, t(hit->input)));
  }
  Dovetail clone = d;
  const auto x = d.next(1u << 20);
  const auto y = clone.next(1u << 20);
  REQUIRE(x);
  REQUIRE(y);
  CHECK(x->input == y->input);
}

TEST_CASE("halting probe") {
  const LexString accepts = lex_unrank(encode_machine(Program::parse("accept r0")));
  const LexString loops = lex_unrank(encode_machine(Program::parse("decjz r1 0")));
  CHECK(halting_probe(accepts, 10) == Probe::Yes);
  for (Budget k : {Budget{1}, Budget{100}, Budget{10000}}) CHECK(halting_probe(loops, k) == Probe::Unknown);

  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    const LexString x = lex_unrank(rng() % 3000);
    const Budget k = rng() % 30;
    if (halting_probe(x, k) == Probe::Yes) CHECK(halting_probe(x, k + 1) == Probe::Yes);
  }
}
