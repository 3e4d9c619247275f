#include "rankkit/procedures.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

namespace rankkit {

std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::Accept: return "accept";
    case Decision::Reject: return "reject";
    case Decision::Inconclusive: break;
  }
  return "inconclusive";
}

std::string_view to_string(StageCase c) {
  switch (c) {
    case StageCase::Collision: return "collision";
    case StageCase::Hole: return "hole";
    case StageCase::FiniteDomain: return "finite-domain";
    case StageCase::Inconclusive: break;
  }
  return "inconclusive";
}

nlohmann::json DecisionRecord::to_json() const {
  nlohmann::json j;
  j["decision"] = std::string(to_string(decision));
  j["clause"] = clause;
  j["evidence"] = nlohmann::json::array();
  for (const auto& s : evidence) j["evidence"].push_back(s.token());
  j["steps"] = steps;
  return j;
}

namespace {

DecisionRecord decided(Decision d, std::string clause, std::vector<LexString> evidence, Budget steps) {
  return DecisionRecord{d, std::move(clause), std::move(evidence), steps};
}

// Ranks observed so far, keyed by lex_rank of the ranker's output. Detects
// premise failures and reports when the ranks bracket x.
class RankLedger {
 public:
  /// Records y with the given rank index. Returns the rule that fires, if any.
  std::optional<DecisionRecord> record(const LexString& y, const Natural& rank, const LexString& x, Budget steps) {
    auto [it, fresh] = by_rank_.try_emplace(rank, y);
    if (!fresh && it->second != y) {
      throw PremiseViolation("ranker assigns rank " + lex_unrank(rank).token() + " to both " + it->second.token() +
                             " and " + y.token());
    }
    if (it != by_rank_.begin() && std::prev(it)->second >= y) {
      throw PremiseViolation("ranks out of order at " + std::prev(it)->second.token() + " and " + y.token());
    }
    if (std::next(it) != by_rank_.end() && std::next(it)->second <= y) {
      throw PremiseViolation("ranks out of order at " + y.token() + " and " + std::next(it)->second.token());
    }
    if (rank == 0 && y > x) return decided(Decision::Reject, "least-member-above", {y}, steps);
    if (it != by_rank_.begin()) {
      const auto prev = std::prev(it);
      if (prev->first + 1 == rank && prev->second < x && x < y) {
        return decided(Decision::Reject, "consecutive-ranks-bracket", {prev->second, y}, steps);
      }
    }
    if (const auto next = std::next(it); next != by_rank_.end()) {
      if (next->first == rank + 1 && y < x && x < next->second) {
        return decided(Decision::Reject, "consecutive-ranks-bracket", {y, next->second}, steps);
      }
    }
    return std::nullopt;
  }

 private:
  std::map<Natural, LexString> by_rank_;
};

}  // namespace

DecisionRecord decide_re_with_ranker(const Enumerator& e_raw, const BudgetedFn& f, const LexString& x, Budget budget) {
  const Enumerator e = e_raw.distinct();
  RankLedger ledger;
  Budget ranker_steps = 0;
  Budget enum_steps = 0;
  for (std::uint64_t i = 0;; ++i) {
    const Budget left = budget - std::min(budget, ranker_steps);
    const auto at = e.emitted_at(i, left);
    if (!at) {
      if (e.ends_within(left)) {
        // A finite enumeration has been seen in full.
        return decided(Decision::Reject, "enumeration-ended", {}, ranker_steps + left);
      }
      return decided(Decision::Inconclusive, "budget", {}, budget);
    }
    enum_steps = *at;
    const LexString y = *e.nth(i, left);
    if (y == x) return decided(Decision::Accept, "enumerated", {y}, enum_steps + ranker_steps);

    const Outcome o = f.run(y, budget - std::min(budget, enum_steps + ranker_steps));
    ranker_steps += o.steps();
    if (o.pending()) return decided(Decision::Inconclusive, "budget", {y}, budget);
    if (o.rejected()) throw PremiseViolation("ranker gives no output on enumerated member " + y.token());
    if (auto d = ledger.record(y, lex_rank(o.output()), x, enum_steps + ranker_steps)) return *d;
  }
}

BudgetedFn totalize_ranker(BudgetedFn f, Enumerator complement, LexString fallback) {
  std::string name = "totalized(" + f.name() + ")";
  return BudgetedFn::native(std::move(name), [f = std::move(f), e = std::move(complement),
                                              fallback = std::move(fallback)](const LexString& x, Budget budget) {
    Execution exec = f.start(x);
    // One step of each per round.
    for (Budget k = 1; 2 * k <= budget; ++k) {
      const Outcome o = exec.advance_to(k);
      if (o.halted()) return Outcome::halt(o.output(), 2 * k);
      if (o.rejected() || e.position_of(x, k)) return Outcome::halt(fallback, 2 * k);
    }
    return Outcome::pending(budget);
  });
}

DecisionRecord decide_core_with_subset(const Enumerator& complement_raw, const Enumerator& subset, const BudgetedFn& g,
                                       const LexString& x, Budget budget) {
  const Enumerator complement = complement_raw.distinct();

  // Find an enumerated subset member beyond x.
  Budget spent = 0;
  LexString sn;
  for (std::uint64_t i = 0;; ++i) {
    const auto at = subset.emitted_at(i, budget);
    if (!at) {
      if (subset.ends_within(budget)) throw PremiseViolation("subset enumerator ended; the subset must be infinite");
      return decided(Decision::Inconclusive, "budget", {}, budget);
    }
    spent = *at;
    sn = *subset.nth(i, budget);
    if (sn > x) break;
  }

  const Outcome rank = g.run(sn, budget - spent);
  spent += rank.steps();
  if (rank.pending()) return decided(Decision::Inconclusive, "budget", {sn}, budget);
  if (rank.rejected()) throw PremiseViolation("ranker gives no output on subset member " + sn.token());

  const Natural n = lex_rank(sn);
  const Natural outside = n - lex_rank(rank.output());
  if (outside < 0) {
    throw PremiseViolation("ranker claims more members than strings up to " + sn.token());
  }

  // Collect exactly `outside` complement strings at or below s_n.
  Natural found = 0;
  bool saw_x = false;
  Budget enum_steps = 0;
  for (std::uint64_t j = 0; found < outside; ++j) {
    const Budget left = budget - std::min(budget, spent);
    const auto at = complement.emitted_at(j, left);
    if (!at) {
      if (complement.ends_within(left)) {
        throw PremiseViolation("complement enumerator ended with fewer than n - g(s_n) strings below " + sn.token());
      }
      return decided(Decision::Inconclusive, "budget", {sn}, budget);
    }
    enum_steps = *at;
    const LexString c = *complement.nth(j, left);
    if (c == sn) throw PremiseViolation("complement enumerator emitted subset member " + sn.token());
    if (c > sn) continue;
    ++found;
    saw_x = saw_x || c == x;
  }
  const Budget steps = spent + enum_steps;
  if (saw_x) return decided(Decision::Reject, "in-complement-prefix", {sn, x}, steps);
  return decided(Decision::Accept, "complement-prefix-complete", {sn}, steps);
}

DecisionRecord variant_a_decider(const BudgetedFn& f, const LexString& x, Budget budget) {
  Dovetail dovetail(f);
  RankLedger ledger;
  while (auto d = dovetail.next(budget)) {
    const Budget steps = dovetail.steps_spent();
    if (d->input == x) {
      if (d->outcome.halted()) return decided(Decision::Accept, "ranked", {x}, steps);
      return decided(Decision::Reject, "declared-nonmember", {x}, steps);
    }
    if (!d->outcome.halted()) continue;
    if (auto r = ledger.record(d->input, lex_rank(d->outcome.output()), x, steps)) return *r;
  }
  return decided(Decision::Inconclusive, "budget", {}, dovetail.steps_spent());
}

// ---------------------------------------------------------------------------
// Stage construction

bool StageState::contains(const LexString& x) const { return std::binary_search(members.begin(), members.end(), x); }

std::vector<LexString> StageState::members_after(std::size_t stage) const {
  std::vector<LexString> out;
  for (std::size_t i = 0; i < stage && i < stages.size(); ++i) {
    out.insert(out.end(), stages[i].added.begin(), stages[i].added.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

nlohmann::json StageState::to_json() const {
  nlohmann::json j;
  j["stages"] = nlohmann::json::array();
  auto tokens = [](const std::vector<LexString>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& s : v) a.push_back(s.token());
    return a;
  };
  for (const StageRecord& s : stages) {
    nlohmann::json r;
    r["candidate"] = s.candidate;
    r["case"] = std::string(to_string(s.kind));
    r["witness"] = tokens(s.witness);
    r["target"] = s.target ? nlohmann::json(s.target->token()) : nlohmann::json(nullptr);
    r["added"] = tokens(s.added);
    r["start"] = s.start.token();
    r["frontier"] = s.frontier.token();
    r["window"] = s.window;
    j["stages"].push_back(std::move(r));
  }
  j["members"] = tokens(members);
  return j;
}

StageState diagonalize(std::span<const BudgetedFn> candidates, Budget stage_budget, std::uint64_t search_horizon) {
  StageState state;
  std::set<LexString> members;

  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const BudgetedFn& phi = candidates[i];
    const LexString w = state.frontier;
    StageRecord rec;
    rec.candidate = i;
    rec.start = w;
    rec.window = search_horizon;

    // Region: committed members (all below w) then the window from w on,
    // which together are in shortlex order.
    std::vector<LexString> region(members.begin(), members.end());
    {
      LexString s = w;
      for (std::uint64_t k = 0; k < search_horizon; ++k, s = successor(s)) region.push_back(s);
    }
    std::unordered_map<LexString, Outcome, LexStringHash> outcomes;
    std::unordered_map<LexString, LexString, LexStringHash> first_with_output;
    std::optional<std::pair<LexString, LexString>> collision;
    for (const LexString& z : region) {
      const Outcome o = phi.run(z, stage_budget);
      outcomes.emplace(z, o);
      if (!o.halted()) continue;
      auto [it, fresh] = first_with_output.try_emplace(o.output(), z);
      if (!fresh) {
        collision = {it->second, z};
        rec.target = o.output();
        break;
      }
    }

    std::vector<LexString> add;
    if (collision) {
      rec.kind = StageCase::Collision;
      rec.witness = {collision->first, collision->second};
      add = {collision->first, collision->second, w};
      rec.frontier = successor(shortlex_max(shortlex_max(collision->first, collision->second), w));
    } else {
      std::optional<LexString> defined;
      bool window_resolved = true;
      for (std::size_t k = members.size(); k < region.size(); ++k) {
        const Outcome& o = outcomes.at(region[k]);
        if (o.halted()) {
          defined = region[k];
          break;
        }
        if (o.pending()) window_resolved = false;
      }
      if (defined) {
        // Certify that no committed string, and not successor(x), can map
        // onto phi(x).
        const LexString& x = *defined;
        const LexString target = outcomes.at(x).output();
        const LexString next = successor(x);
        bool certified = true;
        auto check = [&](const LexString& m) {
          auto it = outcomes.find(m);
          const Outcome o = it != outcomes.end() ? it->second : phi.run(m, stage_budget);
          if (o.pending() || (o.halted() && o.output() == target)) certified = false;
        };
        for (const LexString& m : members) check(m);
        check(next);
        if (certified) {
          rec.kind = StageCase::Hole;
          rec.witness = {x};
          rec.target = target;
          add = {next};
          rec.frontier = successor(next);
        }
      } else if (window_resolved) {
        rec.kind = StageCase::FiniteDomain;
        add = {w};
        rec.frontier = successor(w);
      }
      if (add.empty()) {
        rec.kind = StageCase::Inconclusive;
        add = {w};
        rec.frontier = successor(w);
      }
    }

    for (const LexString& s : add) {
      if (members.insert(s).second) rec.added.push_back(s);
    }
    std::sort(rec.added.begin(), rec.added.end());
    state.frontier = rec.frontier;
    state.stages.push_back(std::move(rec));
  }
  state.members.assign(members.begin(), members.end());
  return state;
}

VerifyReport audit_diagonal(const StageState& state, std::span<const BudgetedFn> candidates, Budget budget) {
  VerifyReport report;
  bool unresolved = false;
  auto fail = [&](std::size_t stage, const std::string& why, std::vector<LexString> strings) {
    report.witness = Witness{"stage " + std::to_string(stage + 1) + ": " + why, std::move(strings), {}, {}};
    report.verdict = Verdict::Refuted;
    return report;
  };

  std::set<LexString> so_far;
  LexString frontier;
  for (std::size_t i = 0; i < state.stages.size(); ++i) {
    const StageRecord& rec = state.stages[i];
    if (rec.start != frontier) return fail(i, "does not start at the previous frontier", {rec.start, frontier});
    if (rec.frontier <= rec.start) return fail(i, "frontier does not advance", {rec.start, rec.frontier});
    if (rec.added.empty()) return fail(i, "adds no string", {});
    for (const LexString& s : rec.added) {
      if (s < rec.start) return fail(i, "changes membership below the frozen frontier", {s, rec.start});
      if (!so_far.insert(s).second) return fail(i, "re-adds a member", {s});
    }
    if (!so_far.empty() && *so_far.rbegin() >= rec.frontier) {
      return fail(i, "member at or beyond its own frontier", {*so_far.rbegin(), rec.frontier});
    }
    frontier = rec.frontier;
  }
  if (std::vector<LexString>(so_far.begin(), so_far.end()) != state.members) {
    return fail(state.stages.size() ? state.stages.size() - 1 : 0, "member list disagrees with the stage log", {});
  }

  for (std::size_t i = 0; i < state.stages.size(); ++i) {
    const StageRecord& rec = state.stages[i];
    if (rec.kind == StageCase::Inconclusive) continue;
    if (rec.candidate >= candidates.size()) return fail(i, "candidate index out of range", {});
    const BudgetedFn& phi = candidates[rec.candidate];
    ++report.examined;

    switch (rec.kind) {
      case StageCase::Collision: {
        if (rec.witness.size() != 2 || rec.witness[0] == rec.witness[1]) return fail(i, "malformed collision", rec.witness);
        for (const LexString& s : rec.witness) {
          if (!state.contains(s)) return fail(i, "collision witness not in the set", {s});
        }
        const Outcome a = phi.run(rec.witness[0], budget);
        const Outcome b = phi.run(rec.witness[1], budget);
        report.steps += a.steps() + b.steps();
        if (a.pending() || b.pending()) {
          unresolved = true;
        } else if (!a.halted() || !b.halted() || a.output() != b.output()) {
          return fail(i, "collision does not reproduce", rec.witness);
        }
        break;
      }
      case StageCase::Hole: {
        if (rec.witness.size() != 1 || !rec.target) return fail(i, "malformed hole", rec.witness);
        const LexString& x = rec.witness[0];
        if (state.contains(x)) return fail(i, "hole point is a member", {x});
        if (x >= rec.frontier) return fail(i, "hole point is not frozen", {x, rec.frontier});
        const Outcome ox = phi.run(x, budget);
        report.steps += ox.steps();
        if (ox.pending()) {
          unresolved = true;
          break;
        }
        if (!ox.halted() || ox.output() != *rec.target) return fail(i, "hole image does not reproduce", {x});
        for (const LexString& m : state.members) {
          const Outcome om = phi.run(m, budget);
          report.steps += om.steps();
          if (om.halted() && om.output() == *rec.target) return fail(i, "a member maps onto the hole image", {x, m});
          if (om.pending() && m < rec.frontier) unresolved = true;
        }
        break;
      }
      case StageCase::FiniteDomain: {
        LexString s = rec.start;
        for (std::uint64_t k = 0; k < rec.window; ++k, s = successor(s)) {
          const Outcome o = phi.run(s, budget);
          report.steps += o.steps();
          if (o.halted()) return fail(i, "defined point inside the scanned window", {s});
          if (o.pending()) unresolved = true;
        }
        break;
      }
      case StageCase::Inconclusive:
        break;
    }
  }
  report.verdict = unresolved ? Verdict::Inconclusive : Verdict::Pass;
  return report;
}

}  // namespace rankkit
