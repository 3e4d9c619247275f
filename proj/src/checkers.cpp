#include "rankkit/checkers.hpp"

#include <mutex>
#include <unordered_map>
#include <unordered_set>

namespace rankkit {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Refuted: return "refuted";
    case Verdict::Inconclusive: break;
  }
  return "inconclusive";
}

std::string_view to_string(TruthTable t) {
  switch (t) {
    case TruthTable::Identity: return "identity";
    case TruthTable::Negation: return "negation";
    case TruthTable::ConstantTrue: return "constant-true";
    case TruthTable::ConstantFalse: break;
  }
  return "constant-false";
}

Membership apply(TruthTable t, Membership m) {
  switch (t) {
    case TruthTable::Identity: return m;
    case TruthTable::Negation: return negate(m);
    case TruthTable::ConstantTrue: return Membership::Yes;
    case TruthTable::ConstantFalse: break;
  }
  return Membership::No;
}

nlohmann::json VerifyReport::to_json() const {
  nlohmann::json j;
  j["verdict"] = std::string(to_string(verdict));
  if (witness) {
    nlohmann::json w;
    w["clause"] = witness->clause;
    w["strings"] = nlohmann::json::array();
    for (const auto& s : witness->strings) w["strings"].push_back(s.token());
    w["observed"] = witness->observed;
    if (!witness->expected.empty()) w["expected"] = witness->expected;
    j["witness"] = std::move(w);
  } else {
    j["witness"] = nullptr;
  }
  j["examined"] = examined;
  j["steps"] = steps;
  if (cover) {
    nlohmann::json c;
    c["targets"] = cover->targets;
    c["witnessed"] = cover->witnessed;
    c["unwitnessed"] = nlohmann::json::array();
    for (const auto& s : cover->unwitnessed) c["unwitnessed"].push_back(s.token());
    j["cover"] = std::move(c);
  }
  if (!note.empty()) j["note"] = note;
  return j;
}

std::optional<Natural> true_rank(const SetSpec& a, const LexString& x, Budget budget) {
  Natural count = 0;
  for (LexString s;; s = successor(s)) {
    switch (a.member(s, budget)) {
      case Membership::Yes: ++count; break;
      case Membership::Unknown: return std::nullopt;
      case Membership::No: break;
    }
    if (s == x) return count;
  }
}

// ---------------------------------------------------------------------------
// RankOracle

struct RankOracle::Cache {
  std::mutex mu;
  std::vector<std::uint64_t> counts;  // counts[i] = members among s_0..s_i
  std::vector<Membership> members;
  LexString next;                     // s_{counts.size()}
  bool blocked = false;               // an Unknown was hit at index counts.size()
};

RankOracle::RankOracle(SetSpec set, Budget budget)
    : set_(std::move(set)), budget_(budget), cache_(std::make_shared<Cache>()) {}

std::optional<Natural> RankOracle::count_upto(const LexString& x) const {
  const std::uint64_t index = to_u64(lex_rank(x));
  std::lock_guard lock(cache_->mu);
  Cache& c = *cache_;
  while (c.counts.size() <= index && !c.blocked) {
    const Membership m = set_.member(c.next, budget_);
    if (m == Membership::Unknown) {
      c.blocked = true;
      break;
    }
    const std::uint64_t before = c.counts.empty() ? 0 : c.counts.back();
    c.counts.push_back(before + (m == Membership::Yes ? 1 : 0));
    c.members.push_back(m);
    c.next = successor(c.next);
  }
  if (index < c.counts.size()) return Natural(c.counts[index]);
  return std::nullopt;
}

Membership RankOracle::member(const LexString& x) const {
  if (count_upto(x)) {
    std::lock_guard lock(cache_->mu);
    return cache_->members[to_u64(lex_rank(x))];
  }
  return set_.member(x, budget_);
}

BudgetedFn RankOracle::ranker(Budget cost) const {
  return BudgetedFn::native("oracle-ranker(" + set_.describe() + ")", [self = *this, cost](const LexString& x, Budget b) {
    if (b < cost) return Outcome::pending(b);
    const auto count = self.count_upto(x);
    if (!count) return Outcome::pending(b);
    return Outcome::halt(*count == 0 ? LexString{} : rank_string(*count), cost);
  });
}

BudgetedFn RankOracle::partial_ranker(Budget cost) const {
  return BudgetedFn::native("partial-ranker(" + set_.describe() + ")", [self = *this, cost](const LexString& x, Budget b) {
    if (b < cost || self.member(x) != Membership::Yes) return Outcome::pending(b);
    return Outcome::halt(rank_string(*self.count_upto(x)), cost);
  });
}

BudgetedFn RankOracle::variant_a_ranker(Budget cost) const {
  return BudgetedFn::native("variant-a-ranker(" + set_.describe() + ")", [self = *this, cost](const LexString& x, Budget b) {
    if (b < cost) return Outcome::pending(b);
    switch (self.member(x)) {
      case Membership::Yes: return Outcome::halt(rank_string(*self.count_upto(x)), cost);
      case Membership::No: return Outcome::reject(cost);
      case Membership::Unknown: break;
    }
    return Outcome::pending(b);
  });
}

// ---------------------------------------------------------------------------
// Checkers

namespace {

Witness make_witness(std::string clause, std::vector<LexString> strings, std::vector<std::string> observed,
                     std::string expected = {}) {
  return Witness{std::move(clause), std::move(strings), std::move(observed), std::move(expected)};
}

void finish(VerifyReport& r, bool unresolved) {
  if (r.witness) {
    r.verdict = Verdict::Refuted;
  } else {
    r.verdict = unresolved ? Verdict::Inconclusive : Verdict::Pass;
  }
}

}  // namespace

VerifyReport check_ranking(const BudgetedFn& f, const SetSpec& a, std::size_t max_len, Budget budget) {
  VerifyReport report;
  bool unresolved = false;
  bool count_known = true;
  Natural count = 0;
  std::unordered_map<LexString, LexString, LexStringHash> ranked;  // output -> member
  LexString x;
  for (std::uint64_t i = 0, n = universe_prefix_size(max_len); i < n; ++i, x = successor(x)) {
    ++report.examined;
    const Membership m = a.member(x, budget);
    if (m == Membership::Unknown) {
      count_known = false;
      unresolved = true;
      continue;
    }
    if (m == Membership::No) continue;
    ++count;
    if (!count_known) continue;

    const Outcome o = f.run(x, budget);
    report.steps += o.steps();
    const LexString expected = rank_string(count);
    if (o.pending()) {
      unresolved = true;
    } else if (o.rejected()) {
      report.witness = make_witness("rejected-on-member", {x}, {o.describe()}, expected.token());
      break;
    } else if (o.output() != expected) {
      // An output already given to an earlier member is the sharper witness.
      if (auto it = ranked.find(o.output()); it != ranked.end()) {
        report.witness = make_witness("collision", {it->second, x}, {o.describe()}, expected.token());
      } else {
        report.witness = make_witness("rank-mismatch", {x}, {o.describe()}, expected.token());
      }
      break;
    } else {
      ranked.emplace(o.output(), x);
    }
  }
  finish(report, unresolved);
  return report;
}

VerifyReport check_compression(const BudgetedFn& f, const SetSpec& a, std::size_t max_len, std::uint64_t cover_count,
                               Budget budget) {
  VerifyReport report;
  bool unresolved = false;
  std::unordered_map<LexString, LexString, LexStringHash> preimage;
  LexString x;
  for (std::uint64_t i = 0, n = universe_prefix_size(max_len); i < n; ++i, x = successor(x)) {
    ++report.examined;
    const Membership m = a.member(x, budget);
    if (m == Membership::Unknown) {
      unresolved = true;
      continue;
    }
    if (m == Membership::No) continue;

    const Outcome o = f.run(x, budget);
    report.steps += o.steps();
    if (o.pending()) {
      unresolved = true;
      continue;
    }
    if (o.rejected()) {
      report.witness = make_witness("undefined-on-member", {x}, {o.describe()});
      break;
    }
    auto [it, fresh] = preimage.try_emplace(o.output(), x);
    if (!fresh) {
      report.witness = make_witness("collision", {it->second, x}, {o.describe(), o.describe()});
      break;
    }
  }

  CoverAudit cover;
  cover.targets = cover_count;
  LexString t;
  for (std::uint64_t i = 0; i < cover_count; ++i, t = successor(t)) {
    if (preimage.count(t)) {
      ++cover.witnessed;
    } else if (cover.unwitnessed.size() < 16) {
      cover.unwitnessed.push_back(t);
    }
  }
  report.cover = std::move(cover);
  finish(report, unresolved);
  return report;
}

VerifyReport check_1tt(const OneTTReduction& r, const SetSpec& a, const SetSpec& b, std::size_t max_len,
                       Budget budget) {
  VerifyReport report;
  bool unresolved = false;
  LexString x;
  for (std::uint64_t i = 0, n = universe_prefix_size(max_len); i < n; ++i, x = successor(x)) {
    ++report.examined;
    const Membership in_a = a.member(x, budget);
    const TruthTable table = r.table(x);
    Membership predicted = Membership::Unknown;
    LexString query;
    if (table == TruthTable::ConstantTrue || table == TruthTable::ConstantFalse) {
      predicted = apply(table, Membership::Unknown);
    } else {
      const Outcome q = r.query.run(x, budget);
      report.steps += q.steps();
      if (q.pending()) {
        unresolved = true;
        continue;
      }
      if (q.rejected()) {
        report.witness = make_witness("query-undefined", {x}, {q.describe()});
        break;
      }
      query = q.output();
      predicted = apply(table, b.member(query, budget));
    }
    if (in_a == Membership::Unknown || predicted == Membership::Unknown) {
      unresolved = true;
      continue;
    }
    if (in_a != predicted) {
      report.witness = make_witness("1tt-mismatch", {x, query},
                                    {"A(x)=" + std::string(to_string(in_a)),
                                     "table=" + std::string(to_string(table)),
                                     "predicted=" + std::string(to_string(predicted))});
      break;
    }
  }
  finish(report, unresolved);
  return report;
}

Verdict recheck_ranking(const VerifyReport& report, const BudgetedFn& f, const SetSpec& a, Budget budget) {
  if (report.verdict != Verdict::Refuted || !report.witness || report.witness->strings.empty()) return Verdict::Pass;
  // The offending member is the last cited string.
  const LexString& x = report.witness->strings.back();
  const Membership m = a.member(x, budget);
  if (m == Membership::Unknown) return Verdict::Inconclusive;
  if (m == Membership::No) return Verdict::Pass;
  const auto count = true_rank(a, x, budget);
  if (!count) return Verdict::Inconclusive;
  const Outcome o = f.run(x, budget);
  if (o.pending()) return Verdict::Inconclusive;
  if (o.rejected() || o.output() != rank_string(*count)) return Verdict::Refuted;
  return Verdict::Pass;
}

Verdict recheck_compression(const VerifyReport& report, const BudgetedFn& f, const SetSpec& a, Budget budget) {
  if (report.verdict != Verdict::Refuted || !report.witness) return Verdict::Pass;
  const Witness& w = *report.witness;
  for (const LexString& s : w.strings) {
    const Membership m = a.member(s, budget);
    if (m == Membership::Unknown) return Verdict::Inconclusive;
    if (m == Membership::No) return Verdict::Pass;
  }
  if (w.clause == "undefined-on-member" && w.strings.size() == 1) {
    const Outcome o = f.run(w.strings[0], budget);
    if (o.pending()) return Verdict::Inconclusive;
    return o.rejected() ? Verdict::Refuted : Verdict::Pass;
  }
  if (w.clause == "collision" && w.strings.size() == 2 && w.strings[0] != w.strings[1]) {
    const Outcome o1 = f.run(w.strings[0], budget);
    const Outcome o2 = f.run(w.strings[1], budget);
    if (o1.pending() || o2.pending()) return Verdict::Inconclusive;
    if (o1.halted() && o2.halted() && o1.output() == o2.output()) return Verdict::Refuted;
  }
  return Verdict::Pass;
}

}  // namespace rankkit
