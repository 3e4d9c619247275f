#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "oracles.hpp"
#include "rankkit/checkers.hpp"
#include "rankkit/procedures.hpp"

using namespace rankkit;

namespace {

constexpr Budget kBudget = 100000;

BudgetedFn identity() {
  return BudgetedFn::total("identity", [](const LexString& x) { return x; });
}
BudgetedFn constant_eps() {
  return BudgetedFn::total("constant-eps", [](const LexString&) { return LexString{}; });
}
BudgetedFn reject_all() {
  return BudgetedFn::native("reject-all", [](const LexString&, Budget) { return Outcome::reject(1); });
}
BudgetedFn never() {
  return BudgetedFn::native("never", [](const LexString&, Budget b) { return Outcome::pending(b); });
}

bool evens(const LexString& x) { return lex_rank(x) % 2 == 0; }
bool starts1(const LexString& x) { return !x.empty() && x.bits()[0] == '1'; }

// The exact ranker of `set`, except that it never halts on `hold`.
BudgetedFn ranker_diverging_at(const SetSpec& set, LexString hold) {
  const BudgetedFn base = RankOracle(set, kBudget).variant_a_ranker();
  return BudgetedFn::native("diverging", [base, hold](const LexString& x, Budget b) {
    return x == hold ? Outcome::pending(b) : base.run(x, b);
  });
}

}  // namespace

TEST_CASE("r.e. decider examples") {
  const DecisionRecord a = decide_re_with_ranker(Enumerator::scan_universe([](const LexString&) { return true; }),
                                                 identity(), LexString("01"), kBudget);
  CHECK(a.decision == Decision::Accept);
  CHECK(a.clause == "enumerated");

  const SetSpec s1 = SetSpec::predicate("starts1", starts1);
  const DecisionRecord b = decide_re_with_ranker(Enumerator::scan_universe(starts1), RankOracle(s1, kBudget).ranker(),
                                                 LexString("0"), kBudget);
  CHECK(b.decision == Decision::Reject);
  CHECK(b.clause == "least-member-above");
  CHECK(b.evidence == std::vector<LexString>{LexString("1")});

  const SetSpec ev = SetSpec::predicate("evens", evens);
  const DecisionRecord c = decide_re_with_ranker(Enumerator::scan_universe(evens), RankOracle(ev, kBudget).ranker(),
                                                 lex_unrank(3), kBudget);
  CHECK(c.decision == Decision::Reject);
  CHECK(c.clause == "consecutive-ranks-bracket");
  CHECK(c.evidence == std::vector<LexString>{LexString("1"), LexString("01")});
}

TEST_CASE("r.e. decider agrees with direct membership") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto members = oracle::random_table(300 + seed, 6);
    oracle::Pred in = oracle::table_pred(members);
    // Infinite: the table, plus every string longer than 6.
    oracle::Pred in_inf = [in](const std::string& s) { return s.size() > 6 || in(s); };
    const auto table = std::make_shared<const oracle::PrefixTable>(in_inf, 9);
    const BudgetedFn f = oracle::table_ranker(table, oracle::OffSet::Arbitrary);
    const Enumerator e = oracle::block_reversed(in_inf);
    for (const auto& x : oracle::all_strings(5)) {
      const DecisionRecord d = decide_re_with_ranker(e, f, LexString(x), kBudget);
      CHECK(d.decision == (in(x) ? Decision::Accept : Decision::Reject));
    }
  }
}

TEST_CASE("r.e. decider premises and budget") {
  CHECK_THROWS_AS(decide_re_with_ranker(Enumerator::scan_universe([](const LexString&) { return true; }), constant_eps(),
                                        LexString("1"), kBudget),
                  PremiseViolation);
  CHECK_THROWS_AS(decide_re_with_ranker(oracle::listed({"0"}), reject_all(), LexString("1"), kBudget), PremiseViolation);

  const DecisionRecord ended = decide_re_with_ranker(oracle::listed({"0"}), constant_eps(), LexString("1"), kBudget);
  CHECK(ended.decision == Decision::Reject);
  CHECK(ended.clause == "enumeration-ended");

  const DecisionRecord slow = decide_re_with_ranker(Enumerator::scan_universe([](const LexString&) { return true; }),
                                                    never(), LexString("1"), 1000);
  CHECK(slow.decision == Decision::Inconclusive);
}

TEST_CASE("totalizer") {
  const BudgetedFn g = totalize_ranker(never(), oracle::listed({"1"}));
  CHECK(g.run(LexString("1"), 100).output() == LexString("101010"));
  CHECK(g.run(LexString("0"), 100).pending());
  const BudgetedFn h = totalize_ranker(identity(), oracle::listed({"1"}));
  CHECK(h.run(LexString("0"), 100) == Outcome::halt(LexString("0"), 2));
  CHECK(h.run(LexString("0"), 1).pending());
}

TEST_CASE("co-r.e. decider from an infinite subset") {
  const SetSpec a = complement(parse_set("finite{0}"));
  const Enumerator comp = oracle::listed({"0"});
  const Enumerator subset = Enumerator::scan_universe([](const LexString& x) { return x != LexString("0"); });
  const BudgetedFn g = RankOracle(a, kBudget).ranker();
  const DecisionRecord at0 = decide_core_with_subset(comp, subset, g, LexString("0"), kBudget);
  CHECK(at0.decision == Decision::Reject);
  CHECK(at0.clause == "in-complement-prefix");
  const DecisionRecord at1 = decide_core_with_subset(comp, subset, g, LexString("1"), kBudget);
  CHECK(at1.decision == Decision::Accept);
  CHECK(at1.clause == "complement-prefix-complete");

  CHECK_THROWS_AS(decide_core_with_subset(comp, oracle::listed({"1"}), g, LexString("1"), kBudget), PremiseViolation);
  // g claims two outside strings below "1" but only one is ever enumerated.
  CHECK_THROWS_AS(decide_core_with_subset(comp, subset, constant_eps(), LexString("0"), kBudget), PremiseViolation);
}

TEST_CASE("decider from a rejecting ranker") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto members = oracle::random_table(500 + seed, 6);
    oracle::Pred in = oracle::table_pred(members);
    oracle::Pred in_inf = [in](const std::string& s) { return s.size() > 6 || in(s); };
    const BudgetedFn f =
        oracle::table_ranker(std::make_shared<const oracle::PrefixTable>(in_inf, 10), oracle::OffSet::Reject);
    for (const auto& x : oracle::all_strings(5)) {
      const DecisionRecord d = variant_a_decider(f, LexString(x), kBudget);
      CHECK(d.decision == (in(x) ? Decision::Accept : Decision::Reject));
      CHECK(d.clause == (in(x) ? "ranked" : "declared-nonmember"));
    }
  }
}

TEST_CASE("rejecting-ranker decider falls back on rank evidence") {
  const SetSpec s1 = SetSpec::predicate("starts1", starts1);
  const DecisionRecord a = variant_a_decider(ranker_diverging_at(s1, LexString("0")), LexString("0"), kBudget);
  CHECK(a.decision == Decision::Reject);
  CHECK(a.clause == "least-member-above");

  const SetSpec ev = SetSpec::predicate("evens", evens);
  const DecisionRecord b = variant_a_decider(ranker_diverging_at(ev, lex_unrank(3)), lex_unrank(3), kBudget);
  CHECK(b.decision == Decision::Reject);
  CHECK(b.clause == "consecutive-ranks-bracket");

  CHECK(variant_a_decider(never(), LexString("0"), 1000).decision == Decision::Inconclusive);
}

TEST_CASE("decision json") {
  const DecisionRecord d = decide_re_with_ranker(oracle::listed({"0"}), constant_eps(), LexString("0"), kBudget);
  const auto j = d.to_json();
  CHECK(j["decision"] == "accept");
  CHECK(j["clause"] == "enumerated");
}

TEST_CASE("diagonal stages") {
  const std::vector<BudgetedFn> cands{constant_eps(), identity(), reject_all()};
  const StageState st = diagonalize(cands, 1000, 50);
  REQUIRE(st.stages.size() == 3);

  CHECK(st.stages[0].kind == StageCase::Collision);
  CHECK(st.stages[0].witness == std::vector<LexString>{LexString{}, LexString("0")});
  CHECK(st.stages[0].frontier == LexString("1"));

  CHECK(st.stages[1].kind == StageCase::Hole);
  CHECK(st.stages[1].witness == std::vector<LexString>{LexString("1")});
  CHECK(st.stages[1].added == std::vector<LexString>{LexString("00")});
  CHECK_FALSE(st.contains(LexString("1")));

  CHECK(st.stages[2].kind == StageCase::FiniteDomain);
  CHECK(st.members == std::vector<LexString>{LexString{}, LexString("0"), LexString("00"), LexString("01")});
  CHECK(st.members_after(1) == std::vector<LexString>{LexString{}, LexString("0")});

  const VerifyReport ok = audit_diagonal(st, cands, 1000);
  CHECK(ok.verdict == Verdict::Pass);
  CHECK(ok.examined == 3);

  // Collisions and undefined members refute; a hole leaves its image uncovered.
  const SetSpec built = SetSpec::finite(st.members);
  CHECK(check_compression(cands[0], built, 3, 0, 1000).verdict == Verdict::Refuted);
  CHECK(check_compression(cands[2], built, 3, 0, 1000).verdict == Verdict::Refuted);
  const VerifyReport hole = check_compression(cands[1], built, 3, 3, 1000);
  REQUIRE(hole.cover);
  CHECK(hole.cover->unwitnessed == std::vector<LexString>{LexString("1")});
}

TEST_CASE("a stage that cannot certify is logged, not guessed") {
  const std::vector<BudgetedFn> cands{never()};
  const StageState st = diagonalize(cands, 100, 20);
  CHECK(st.stages[0].kind == StageCase::Inconclusive);
  CHECK(st.members == std::vector<LexString>{LexString{}});
  CHECK(audit_diagonal(st, cands, 100).verdict == Verdict::Pass);
}

TEST_CASE("audit refutes tampered logs") {
  const std::vector<BudgetedFn> cands{constant_eps(), identity()};
  const StageState st = diagonalize(cands, 1000, 50);

  StageState wrong_image = st;
  wrong_image.stages[1].target = LexString("0");
  const VerifyReport a = audit_diagonal(wrong_image, cands, 1000);
  CHECK(a.verdict == Verdict::Refuted);
  REQUIRE(a.witness);
  CHECK(a.witness->clause.rfind("stage 2", 0) == 0);

  StageState thawed = st;
  thawed.stages[1].added.push_back(LexString{});
  CHECK(audit_diagonal(thawed, cands, 1000).verdict == Verdict::Refuted);

  // Swapping the candidates breaks the certificates.
  const std::vector<BudgetedFn> swapped{identity(), constant_eps()};
  CHECK(audit_diagonal(st, swapped, 1000).verdict == Verdict::Refuted);
}

TEST_CASE("stage json") {
  const std::vector<BudgetedFn> cands{constant_eps(), identity()};
  const auto j = diagonalize(cands, 1000, 50).to_json();
  CHECK(j["stages"].size() == 2);
  CHECK(j["stages"][0]["case"] == "collision");
  CHECK(j["stages"][1]["case"] == "hole");
  CHECK(j["stages"][1]["target"] == "1");
  CHECK(j["members"][0] == "eps");
}
