#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>
#include <thread>

#include "oracles.hpp"
#include "rankkit/sets.hpp"

using namespace rankkit;

namespace {

constexpr Budget kBudget = 10000;

bool yes(const SetSpec& s, const std::string& x) { return s.member(LexString(x), kBudget) == Membership::Yes; }

}  // namespace

TEST_CASE("membership examples") {
  const SetSpec f = SetSpec::finite({LexString("0"), LexString("10")});
  CHECK(f.member(LexString("10"), 0) == Membership::Yes);
  CHECK(f.member(LexString("1"), 0) == Membership::No);

  const Enumerator zeros = Enumerator::from_sequence([](std::uint64_t i) { return LexString(std::string(i + 1, '0')); });
  const SetSpec re = SetSpec::enumerated(zeros);
  for (Budget b : {Budget{0}, Budget{10}, Budget{1000}}) CHECK(re.member(LexString("1"), b) == Membership::Unknown);
  CHECK(re.member(LexString("000"), 10) == Membership::Yes);

  const SetSpec co = SetSpec::co_enumerated(Enumerator::from_sequence([](std::uint64_t i) { return lex_unrank(2 + i); }));
  CHECK(co.member(LexString("1"), 10) == Membership::No);
  CHECK(co.member(LexString("0"), 10) == Membership::Unknown);
}

TEST_CASE("finite enumerations settle both ways") {
  const SetSpec re = SetSpec::enumerated(oracle::listed({"11", "0"}));
  CHECK(re.member(LexString("0"), 1) == Membership::Unknown);
  CHECK(re.member(LexString("0"), 2) == Membership::Yes);
  CHECK(re.member(LexString("1"), 10) == Membership::No);
  const SetSpec co = SetSpec::co_enumerated(oracle::listed({"11", "0"}));
  CHECK(co.member(LexString("1"), 10) == Membership::Yes);
  CHECK(co.member(LexString("11"), 10) == Membership::No);
}

TEST_CASE("enumerators") {
  const Enumerator e = oracle::listed({"1", "0", "1", "00", "0"});
  CHECK(e.emitted_within(10).size() == 5);
  const Enumerator d = e.distinct();
  const auto got = d.emitted_within(10);
  REQUIRE(got.size() == 3);
  CHECK(got[2] == LexString("00"));
  CHECK(d.position_of(LexString("00"), 10) == 2u);
  CHECK(d.emitted_at(2, 10) == 4u);
  CHECK_FALSE(d.nth(3, 100));
  CHECK(d.ends_within(10));
  CHECK_FALSE(d.ends_within(4));

  // Copies share the cache but each query is answered from the start.
  const Enumerator evens = Enumerator::scan_universe([](const LexString& x) { return lex_rank(x) % 2 == 0; });
  CHECK(evens.nth(3, 100) == lex_unrank(6));
  const Enumerator copy = evens;
  CHECK(copy.nth(0, 1) == LexString{});
  CHECK_FALSE(copy.nth(3, 5));
}

TEST_CASE("domain enumerator follows dovetail discovery") {
  const BudgetedFn even_only = BudgetedFn::native("even", [](const LexString& x, Budget b) {
    return lex_rank(x) % 2 == 0 ? Outcome::halt(x, 1) : Outcome::pending(b);
  });
  const auto got = Enumerator::domain_of(even_only).emitted_within(200);
  REQUIRE(got.size() >= 5);
  for (const auto& x : got) CHECK(lex_rank(x) % 2 == 0);
}

TEST_CASE("enumerators are safe to query from several threads") {
  const Enumerator e = Enumerator::scan_universe([](const LexString& x) { return x.size() % 2 == 0; }).distinct();
  std::vector<std::thread> threads;
  std::vector<std::optional<LexString>> out(8);
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] { out[t] = e.nth(200 + t, 100000); });
  }
  for (auto& th : threads) th.join();
  for (int t = 0; t < 8; ++t) CHECK(out[t] == e.nth(200 + t, 100000));
}

TEST_CASE("join-hat") {
  const SetSpec j = join_hat(SetSpec::finite({LexString{}}), SetSpec::empty());
  for (const auto& s : oracle::all_strings(6)) CHECK(yes(j, s) == (s == "0"));

  const auto members = oracle::random_table(5, 7);
  const SetSpec a = oracle::finite_spec(members);
  const SetSpec jc = join_hat(a, complement(a));
  CHECK(jc.member(LexString{}, kBudget) == Membership::No);
  for (const auto& x : oracle::all_strings(8)) {
    CHECK(yes(jc, x + "0") != yes(jc, x + "1"));
    CHECK(yes(jc, x + "0") == (members.count(x) > 0));
  }
}

TEST_CASE("interleave4") {
  CHECK(yes(interleave4(SetSpec::empty()), ""));
  CHECK(yes(interleave4(SetSpec::empty()), oracle::nth_string(3)));
  const auto members = oracle::random_table(9, 7);
  const SetSpec b = interleave4(oracle::finite_spec(members));
  for (std::uint64_t i = 0; i <= 200; ++i) {
    const bool in_a = members.count(oracle::nth_string(i)) > 0;
    CHECK(yes(b, oracle::nth_string(4 * i)));
    CHECK(yes(b, oracle::nth_string(4 * i + 2)));
    CHECK(yes(b, oracle::nth_string(4 * i + 1)) == in_a);
    CHECK(yes(b, oracle::nth_string(4 * i + 3)) == !in_a);
  }
}

TEST_CASE("cylinderize") {
  const SetSpec none = cylinderize(SetSpec::empty());
  for (const auto& s : oracle::all_strings(6)) CHECK_FALSE(yes(none, s));

  const SetSpec eps = cylinderize(SetSpec::finite({LexString{}}));
  for (std::uint64_t n = 0; n < 64; ++n) {
    const LexString z = lex_unrank(n);
    CHECK(yes(eps, z.bits()) == unpair(z).first.empty());
  }
  std::mt19937_64 rng(4);
  const auto members = oracle::random_table(3, 5);
  const SetSpec c = cylinderize(oracle::finite_spec(members));
  for (int i = 0; i < 300; ++i) {
    const LexString x = lex_unrank(rng() % 63);
    const LexString y = lex_unrank(rng() % 500);
    CHECK(yes(c, pair(x, y).bits()) == (members.count(x.bits()) > 0));
  }
}

TEST_CASE("combinators agree with direct recomputation") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto ma = oracle::random_table(100 + seed, 9);
    const auto mb = oracle::random_table(200 + seed, 9);
    const SetSpec a = oracle::finite_spec(ma);
    const SetSpec b = oracle::finite_spec(mb);
    const SetSpec j = join_hat(a, b);
    const SetSpec i4 = interleave4(a);
    const SetSpec na = complement(a);
    for (const auto& s : oracle::all_strings(10)) {
      const bool want_j = !s.empty() && (s.back() == '0' ? ma.count(s.substr(0, s.size() - 1)) > 0
                                                          : mb.count(s.substr(0, s.size() - 1)) > 0);
      CHECK(yes(j, s) == want_j);
      const std::uint64_t i = oracle::index_of(s);
      const bool in = ma.count(oracle::nth_string(i / 4)) > 0;
      const bool want_i = i % 4 == 0 || i % 4 == 2 || (i % 4 == 1 && in) || (i % 4 == 3 && !in);
      CHECK(yes(i4, s) == want_i);
      CHECK(yes(na, s) == (ma.count(s) == 0));
    }
  }
}

TEST_CASE("budget monotone soundness") {
  const SetSpec k = k_approx(1u << 30);
  std::mt19937_64 rng(12);
  for (int i = 0; i < 300; ++i) {
    const LexString x = lex_unrank(rng() % 2000);
    const Budget b = rng() % 40;
    const Membership lo = k.member(x, b);
    if (lo != Membership::Unknown) CHECK(k.member(x, b + 1 + rng() % 40) == lo);
  }
}

TEST_CASE("K approximation and its complement cylinder") {
  const LexString accepts = lex_unrank(encode_machine(Program::parse("accept r0")));
  const LexString loops = lex_unrank(encode_machine(Program::parse("decjz r1 0")));
  const SetSpec cok = cok_cylinder_set(1u << 20);
  CHECK(cok.member(pair(accepts, LexString{}), 10) == Membership::No);
  CHECK(cok.member(pair(accepts, successor(lex_unrank(1))), 10) == Membership::Yes);
  for (Budget b : {Budget{10}, Budget{1000}, Budget{100000}}) {
    CHECK(cok.member(pair(loops, LexString{}), b) == Membership::Unknown);
  }
  CHECK(k_approx(100).member(accepts, 10) == Membership::Yes);
  CHECK(k_approx(100).member(loops, 100) == Membership::Unknown);

  // At most one accept time per index.
  for (std::uint64_t x = 0; x < 50; ++x) {
    int hits = 0;
    for (std::uint64_t y = 0; y < 200; ++y) {
      hits += cok.member(pair(lex_unrank(x), successor(lex_unrank(y))), 10000) == Membership::Yes;
    }
    CHECK(hits <= 1);
  }
}

TEST_CASE("set description parser") {
  CHECK(yes(parse_set("finite{0,10}"), "10"));
  CHECK(yes(parse_set("finite{eps}"), ""));
  CHECK_FALSE(yes(parse_set("empty"), "0"));
  CHECK(yes(parse_set("sigma"), "0101"));
  CHECK(yes(parse_set("complement(finite{0})"), "1"));
  const SetSpec j = parse_set("joinhat(finite{0,1}, complement(finite{0,1}))");
  CHECK(yes(j, "00"));
  CHECK(yes(j, "001"));
  CHECK(yes(parse_set("interleave4(empty)"), oracle::nth_string(3)));
  CHECK(yes(parse_set("cylinder(finite{eps})"), pair(LexString{}, LexString("0110")).bits()));
  CHECK(yes(parse_set("evens"), oracle::nth_string(4)));
  CHECK(yes(parse_set("starts1"), "10"));

  const SetSpec r = parse_set("random(4, 5)");
  const auto members = random_finite_members(4, 5);
  for (const auto& s : oracle::all_strings(5)) {
    CHECK(yes(r, s) == std::binary_search(members.begin(), members.end(), LexString(s)));
  }
}

TEST_CASE("parse errors name the offending token") {
  for (const auto& [text, token] : std::vector<std::pair<std::string, std::string>>{
           {"finite{0,2}", "2"}, {"bogus", "bogus"}, {"complement(sigma", "<end>"}, {"joinhat(sigma)", ")"}}) {
    try {
      parse_set(text);
      FAIL("no error for " << text);
    } catch (const ParseError& e) {
      CHECK(e.token() == token);
      CHECK(std::string(e.what()).find("'" + token + "'") != std::string::npos);
    }
  }
}
