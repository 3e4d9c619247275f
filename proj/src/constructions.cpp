#include "rankkit/constructions.hpp"

#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace rankkit {

BudgetedFn join_hat_ranker() {
  return BudgetedFn::total("thm103", [](const LexString& x) { return x.empty() ? x : x.drop_last(); });
}

BudgetedFn interleave4_compressor() {
  return BudgetedFn::total("thm123", [](const LexString& x) {
    static constexpr int kOffset[4] = {0, 1, 2, 1};
    const Natural m = lex_rank(x);
    return lex_unrank(3 * (m / 4) + kOffset[static_cast<int>(m % 4)]);
  });
}

OneTTReduction interleave4_embedding() {
  return {"thm123",
          BudgetedFn::total("embed", [](const LexString& x) { return lex_unrank(4 * lex_rank(x) + 1); }),
          [](const LexString&) { return TruthTable::Identity; }};
}

OneTTReduction interleave4_retraction() {
  return {"thm123-back",
          BudgetedFn::total("retract", [](const LexString& x) { return lex_unrank(lex_rank(x) / 4); }),
          [](const LexString& x) {
            switch (static_cast<int>(lex_rank(x) % 4)) {
              case 1: return TruthTable::Identity;
              case 3: return TruthTable::Negation;
              default: return TruthTable::ConstantTrue;
            }
          }};
}

BudgetedFn recover_via_ranker(BudgetedFn g) {
  std::string name = "recover(" + g.name() + ")";
  return BudgetedFn::native(std::move(name), [g = std::move(g)](const LexString& x, Budget budget) {
    const Natural i = lex_rank(x);
    const Outcome low = g.run(lex_unrank(4 * i), budget);
    if (low.pending()) return Outcome::pending(budget);
    const Outcome high = g.run(lex_unrank(4 * i + 2), budget - low.steps());
    if (high.pending()) return Outcome::pending(budget);
    if (low.rejected() || high.rejected()) {
      throw PremiseViolation("ranker rejected a string that is always a member");
    }
    const Budget steps = low.steps() + high.steps();
    const Natural diff = lex_rank(high.output()) - lex_rank(low.output());
    return diff == 2 ? Outcome::halt(LexString("1"), steps) : Outcome::reject(steps);
  });
}

BudgetedFn re_compressor(const Enumerator& e) {
  return BudgetedFn::native("prop106(" + e.name() + ")", [e = e.distinct()](const LexString& x, Budget budget) {
    const auto position = e.position_of(x, budget);
    if (!position) return Outcome::pending(budget);
    return Outcome::halt(lex_unrank(Natural(*position)), *e.emitted_at(*position, budget));
  });
}

// ---------------------------------------------------------------------------
// L_A

namespace {

class LaNode final : public SetNode {
 public:
  LaNode(SetSpec a, Enumerator complement) : a_(std::move(a)), e_(std::move(complement)) {}

  Membership member(const LexString& z, Budget budget) const override {
    const auto [x, y] = unpair(z);
    if (y.empty()) return a_.member(x, budget);
    const std::uint64_t i = to_u64(lex_rank(y));
    if (const auto e = e_.nth(i - 1, budget)) return *e == x ? Membership::Yes : Membership::No;
    if (e_.ends_within(budget)) return Membership::No;
    return Membership::Unknown;
  }
  std::string describe() const override { return "L_A(" + a_.describe() + ")"; }

 private:
  SetSpec a_;
  Enumerator e_;
};

}  // namespace

ConstructionBundle la_construction(const SetSpec& a, const Enumerator& complement, const LexString& x0,
                                   const LexString& x1, Budget budget) {
  if (a.member(x0, budget) != Membership::Yes) {
    throw PremiseViolation("x0 = " + x0.token() + " is not a resolvable member of A");
  }
  if (a.member(x1, budget) != Membership::No) {
    throw PremiseViolation("x1 = " + x1.token() + " is not a resolvable non-member of A");
  }
  const Enumerator e = complement.distinct();

  ConstructionBundle bundle;
  bundle.provenance = "beta1";
  bundle.set = SetSpec(std::make_shared<LaNode>(a, e));
  bundle.fn = BudgetedFn::total("projection", [](const LexString& z) { return unpair(z).first; });
  bundle.reductions.push_back(
      {"A->L_A", BudgetedFn::total("pad-eps", [](const LexString& x) { return pair(x, LexString{}); }),
       NamedMap::Kind::OneOne});
  bundle.reductions.push_back(
      {"L_A->A", BudgetedFn::native("la-to-a", [e, x0, x1](const LexString& z, Budget b) {
         const auto [x, y] = unpair(z);
         if (y.empty()) return Outcome::halt(x, 1);
         const std::uint64_t i = to_u64(lex_rank(y));
         if (const auto at = e.emitted_at(i - 1, b)) {
           return Outcome::halt(*e.nth(i - 1, b) == x ? x0 : x1, *at);
         }
         if (e.ends_within(b)) return Outcome::halt(x1, b);
         return Outcome::pending(b);
       }),
       NamedMap::Kind::ManyOne});
  bundle.checkers = {"check_compression(projection, L_A)", "check_1tt(A->L_A)"};
  return bundle;
}

// ---------------------------------------------------------------------------
// Myhill back-and-forth

std::optional<LexString> MyhillResult::image(const LexString& x) const {
  for (const auto& [from, to] : pairs) {
    if (from == x) return to;
  }
  return std::nullopt;
}

nlohmann::json MyhillResult::to_json() const {
  nlohmann::json j;
  switch (status) {
    case Status::Ok: j["status"] = "ok"; break;
    case Status::InjectivityViolation: j["status"] = "injectivity-violation"; break;
    case Status::Inconclusive: j["status"] = "inconclusive"; break;
  }
  j["pairs"] = nlohmann::json::array();
  for (const auto& [x, y] : pairs) j["pairs"].push_back({x.token(), y.token()});
  j["witness"] = nlohmann::json::array();
  for (const auto& w : witness) j["witness"].push_back(w.token());
  if (!detail.empty()) j["detail"] = detail;
  return j;
}

namespace {

struct Stop {
  MyhillResult::Status status;
  std::vector<LexString> witness;
  std::string detail;
};

// Evaluates a reduction with memoization and watches for two inputs with
// the same output.
class InjectiveEval {
 public:
  InjectiveEval(const BudgetedFn& f, Budget budget, std::string label)
      : f_(f), budget_(budget), label_(std::move(label)) {}

  LexString operator()(const LexString& x) {
    if (auto it = values_.find(x); it != values_.end()) return it->second;
    const Outcome o = f_.run(x, budget_);
    if (!o.halted()) {
      throw Stop{MyhillResult::Status::Inconclusive, {x}, label_ + " did not produce a value: " + o.describe()};
    }
    if (auto [it, fresh] = preimage_.try_emplace(o.output(), x); !fresh) {
      throw Stop{MyhillResult::Status::InjectivityViolation, {it->second, x},
                 label_ + " maps both to " + o.output().token()};
    }
    values_.emplace(x, o.output());
    return o.output();
  }

 private:
  const BudgetedFn& f_;
  Budget budget_;
  std::string label_;
  std::unordered_map<LexString, LexString, LexStringHash> values_;
  std::unordered_map<LexString, LexString, LexStringHash> preimage_;
};

}  // namespace

MyhillResult myhill_isomorphism(const BudgetedFn& f, const BudgetedFn& g, std::uint64_t n, Budget budget) {
  MyhillResult result;
  std::unordered_map<LexString, LexString, LexStringHash> forth;  // h
  std::unordered_map<LexString, LexString, LexStringHash> back;   // h^-1
  InjectiveEval eval_f(f, budget, "f");
  InjectiveEval eval_g(g, budget, "g");
  LexString next_domain;
  LexString next_range;
  std::uint64_t covered = 0;  // strings among s_0..s_{n-1} in dom(h)
  const LexString limit = n == 0 ? LexString{} : lex_unrank(Natural(n - 1));

  auto add = [&](const LexString& x, const LexString& y) {
    forth.emplace(x, y);
    back.emplace(y, x);
    result.pairs.emplace_back(x, y);
    if (n > 0 && x <= limit) ++covered;
  };

  try {
    while (covered < n) {
      while (forth.count(next_domain)) next_domain = successor(next_domain);
      {
        // Chase f-images already taken by h until a free one turns up.
        std::unordered_set<LexString, LexStringHash> seen;
        LexString y = eval_f(next_domain);
        while (back.count(y)) {
          if (!seen.insert(y).second) throw Stop{MyhillResult::Status::InjectivityViolation, {y}, "f-chain cycles"};
          y = eval_f(back.at(y));
        }
        add(next_domain, y);
      }
      if (covered >= n) break;

      while (back.count(next_range)) next_range = successor(next_range);
      {
        std::unordered_set<LexString, LexStringHash> seen;
        LexString x = eval_g(next_range);
        while (forth.count(x)) {
          if (!seen.insert(x).second) throw Stop{MyhillResult::Status::InjectivityViolation, {x}, "g-chain cycles"};
          x = eval_g(forth.at(x));
        }
        add(x, next_range);
      }
    }
  } catch (const Stop& stop) {
    result.status = stop.status;
    result.witness = stop.witness;
    result.detail = stop.detail;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Cylinder padding

BudgetedFn mto1_via_cylinder(BudgetedFn m, CylinderWitness witness, std::uint64_t probe, Budget budget) {
  std::unordered_map<LexString, LexString, LexStringHash> seen;
  LexString x;
  for (std::uint64_t i = 0; i < probe; ++i, x = successor(x)) {
    const Outcome fx = witness.forward.run(x, budget);
    if (!fx.halted()) throw PremiseViolation("cylinder witness undefined on " + x.token());
    if (auto [it, fresh] = seen.try_emplace(fx.output(), x); !fresh) {
      throw PremiseViolation("cylinder witness not injective: " + it->second.token() + " and " + x.token() +
                             " both map to " + fx.output().token());
    }
    const Outcome back = witness.inverse.run(fx.output(), budget);
    if (!back.halted() || back.output() != x) {
      throw PremiseViolation("cylinder witness inverse fails at " + x.token());
    }
  }

  std::string name = "one-one(" + m.name() + ")";
  return BudgetedFn::native(std::move(name), [m = std::move(m), w = std::move(witness)](const LexString& z,
                                                                                         Budget b) {
    const Outcome mz = m.run(z, b);
    if (!mz.halted()) return mz.rejected() ? mz : Outcome::pending(b);
    const Outcome hz = w.forward.run(mz.output(), b - mz.steps());
    if (!hz.halted()) return Outcome::pending(b);
    // The second coordinate carries z itself, so distinct inputs stay distinct.
    const LexString padded = pair(unpair(hz.output()).first, z);
    const Outcome out = w.inverse.run(padded, b - mz.steps() - hz.steps());
    if (!out.halted()) return Outcome::pending(b);
    return Outcome::halt(out.output(), mz.steps() + hz.steps() + out.steps());
  });
}

// ---------------------------------------------------------------------------
// Retraceable sets

BudgetedFn retrace_to_rank(BudgetedFn f, LexString a0, RetraceMode mode) {
  std::string name = std::string(mode == RetraceMode::Total ? "retrace-total(" : "retrace(") + f.name() + ")";
  return BudgetedFn::native(std::move(name), [f = std::move(f), a0 = std::move(a0), mode](const LexString& x,
                                                                                          Budget budget) {
    if (budget == 0) return Outcome::pending(0);
    Budget spent = 0;
    Natural applications = 0;
    LexString y = x;
    while (y != a0) {
      if (spent >= budget) return Outcome::pending(budget);
      const Outcome o = f.run(y, budget - spent);
      // Every application is charged at least one step.
      spent += std::max<Budget>(o.steps(), 1);
      if (o.pending()) return Outcome::pending(budget);
      if (o.rejected() || (mode == RetraceMode::Total && o.output() >= y)) {
        if (mode == RetraceMode::Total && spent <= budget) return Outcome::halt(LexString{}, spent);
        return Outcome::pending(budget);
      }
      y = o.output();
      ++applications;
    }
    if (spent > budget) return Outcome::pending(budget);
    return Outcome::halt(lex_unrank(applications), std::max<Budget>(spent, 1));
  });
}

BudgetedFn inseparable_separator(OneTTReduction r, std::vector<LexString> la, std::vector<LexString> lb) {
  using Table = std::unordered_set<LexString, LexStringHash>;
  auto in_la = std::make_shared<const Table>(la.begin(), la.end());
  auto in_lb = std::make_shared<const Table>(lb.begin(), lb.end());
  std::string name = "separator(" + r.name + ")";
  return BudgetedFn::native(std::move(name), [r = std::move(r), in_la, in_lb](const LexString& x, Budget budget) {
    const TruthTable table = r.table(x);
    if (table == TruthTable::ConstantTrue) return Outcome::halt(LexString("1"), 1);
    if (table == TruthTable::ConstantFalse) return Outcome::halt(LexString("0"), 1);
    const Outcome q = r.query.run(x, budget);
    if (q.pending()) return Outcome::pending(budget);
    if (q.rejected()) return q;
    const bool one = table == TruthTable::Identity ? in_la->count(q.output()) > 0 : in_lb->count(q.output()) == 0;
    return Outcome::halt(LexString(one ? "1" : "0"), q.steps());
  });
}

BudgetedFn separator_from_prefix(const OneTTReduction& r, const SetSpec& a, const SetSpec& b, std::size_t max_len,
                                 Budget budget) {
  std::vector<LexString> la;
  std::vector<LexString> lb;
  for (const LexString& x : universe_prefix(max_len)) {
    const TruthTable t = r.table(x);
    const bool in_a = t == TruthTable::Identity;
    const bool in_b = t == TruthTable::Negation;
    if (!in_a && !in_b) continue;
    const Membership m = (in_a ? a : b).member(x, budget);
    if (m == Membership::Unknown) throw PremiseViolation("membership of " + x.token() + " does not resolve");
    if (m == Membership::No) continue;
    const Outcome q = r.query.run(x, budget);
    if (!q.halted()) throw PremiseViolation("query of " + x.token() + " does not resolve");
    (in_a ? la : lb).push_back(q.output());
  }
  return inseparable_separator(r, std::move(la), std::move(lb));
}

}  // namespace rankkit
