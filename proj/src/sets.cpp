#include "rankkit/sets.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <random>
#include <unordered_map>
#include <unordered_set>

namespace rankkit {

std::string_view to_string(Membership m) {
  switch (m) {
    case Membership::Yes: return "yes";
    case Membership::No: return "no";
    case Membership::Unknown: break;
  }
  return "unknown";
}

Membership negate(Membership m) {
  switch (m) {
    case Membership::Yes: return Membership::No;
    case Membership::No: return Membership::Yes;
    case Membership::Unknown: break;
  }
  return Membership::Unknown;
}

// ---------------------------------------------------------------------------
// Enumerator

struct Enumerator::State {
  std::string name;
  Factory factory;

  std::mutex mu;
  Cursor cursor;
  Budget steps = 0;
  std::vector<std::pair<LexString, Budget>> emitted;
  std::unordered_map<LexString, std::uint64_t, LexStringHash> first_position;
  std::optional<Budget> ended_at;

  // Requires mu held.
  void pump_until(Budget budget, const std::function<bool()>& satisfied) {
    if (!cursor) cursor = factory();
    while (!satisfied() && steps < budget && !ended_at) {
      Tick t = cursor();
      ++steps;
      if (t.emitted) {
        first_position.try_emplace(*t.emitted, emitted.size());
        emitted.emplace_back(std::move(*t.emitted), steps);
      }
      if (t.done) ended_at = steps;
    }
  }
};

Enumerator::Enumerator(std::string name, Factory factory) : state_(std::make_shared<State>()) {
  state_->name = std::move(name);
  state_->factory = std::move(factory);
}

Enumerator Enumerator::from_list(std::vector<LexString> items, std::string name) {
  auto shared = std::make_shared<const std::vector<LexString>>(std::move(items));
  return Enumerator(std::move(name), [shared] {
    return Cursor([shared, i = std::size_t{0}]() mutable {
      Tick t;
      if (i < shared->size()) t.emitted = (*shared)[i++];
      t.done = i >= shared->size();
      return t;
    });
  });
}

Enumerator Enumerator::from_sequence(std::function<LexString(std::uint64_t)> sequence, std::string name) {
  return Enumerator(std::move(name), [sequence = std::move(sequence)] {
    return Cursor([sequence, i = std::uint64_t{0}]() mutable { return Tick{sequence(i++), false}; });
  });
}

Enumerator Enumerator::scan_universe(std::function<bool(const LexString&)> keep, std::string name) {
  return Enumerator(std::move(name), [keep = std::move(keep)] {
    return Cursor([keep, s = LexString{}]() mutable {
      Tick t;
      if (keep(s)) t.emitted = s;
      s = successor(s);
      return t;
    });
  });
}

Enumerator Enumerator::domain_of(BudgetedFn f) {
  std::string name = "domain(" + f.name() + ")";
  return Enumerator(std::move(name), [f = std::move(f)] {
    return Cursor([dovetail = Dovetail(f)]() mutable {
      Tick t;
      // One scheduler advance per step; the allowance only bounds this call.
      if (auto d = dovetail.next(dovetail.steps_spent() + 1); d && d->outcome.halted()) t.emitted = d->input;
      return t;
    });
  });
}

Enumerator Enumerator::distinct() const {
  return Enumerator(state_->name, [factory = state_->factory] {
    auto inner = factory();
    auto seen = std::make_shared<std::unordered_set<LexString, LexStringHash>>();
    return Cursor([inner, seen]() mutable {
      Tick t = inner();
      if (t.emitted && !seen->insert(*t.emitted).second) t.emitted.reset();
      return t;
    });
  });
}

std::optional<LexString> Enumerator::nth(std::uint64_t i, Budget budget) const {
  std::lock_guard lock(state_->mu);
  state_->pump_until(budget, [&] { return state_->emitted.size() > i; });
  if (i < state_->emitted.size() && state_->emitted[i].second <= budget) return state_->emitted[i].first;
  return std::nullopt;
}

std::optional<Budget> Enumerator::emitted_at(std::uint64_t i, Budget budget) const {
  std::lock_guard lock(state_->mu);
  state_->pump_until(budget, [&] { return state_->emitted.size() > i; });
  if (i < state_->emitted.size() && state_->emitted[i].second <= budget) return state_->emitted[i].second;
  return std::nullopt;
}

std::optional<std::uint64_t> Enumerator::position_of(const LexString& x, Budget budget) const {
  std::lock_guard lock(state_->mu);
  auto found = [&] { return state_->first_position.count(x) > 0; };
  state_->pump_until(budget, found);
  auto it = state_->first_position.find(x);
  if (it == state_->first_position.end()) return std::nullopt;
  if (state_->emitted[it->second].second > budget) return std::nullopt;
  return it->second;
}

bool Enumerator::ends_within(Budget budget) const {
  std::lock_guard lock(state_->mu);
  state_->pump_until(budget, [] { return false; });
  return state_->ended_at && *state_->ended_at <= budget;
}

std::vector<LexString> Enumerator::emitted_within(Budget budget) const {
  std::lock_guard lock(state_->mu);
  state_->pump_until(budget, [] { return false; });
  std::vector<LexString> out;
  for (const auto& [s, at] : state_->emitted) {
    if (at > budget) break;
    out.push_back(s);
  }
  return out;
}

const std::string& Enumerator::name() const noexcept { return state_->name; }

// ---------------------------------------------------------------------------
// Presentations

namespace {

class FiniteNode final : public SetNode {
 public:
  explicit FiniteNode(std::vector<LexString> members) : sorted_(std::move(members)) {
    std::sort(sorted_.begin(), sorted_.end());
    sorted_.erase(std::unique(sorted_.begin(), sorted_.end()), sorted_.end());
    lookup_.insert(sorted_.begin(), sorted_.end());
  }
  Membership member(const LexString& x, Budget) const override {
    return lookup_.count(x) ? Membership::Yes : Membership::No;
  }
  std::string describe() const override {
    std::string out = "finite{";
    for (std::size_t i = 0; i < sorted_.size(); ++i) out += (i ? "," : "") + sorted_[i].token();
    return out + "}";
  }

 private:
  std::vector<LexString> sorted_;
  std::unordered_set<LexString, LexStringHash> lookup_;
};

class PredicateNode final : public SetNode {
 public:
  PredicateNode(std::string name, std::function<bool(const LexString&)> keep)
      : name_(std::move(name)), keep_(std::move(keep)) {}
  Membership member(const LexString& x, Budget) const override {
    return keep_(x) ? Membership::Yes : Membership::No;
  }
  std::string describe() const override { return name_; }

 private:
  std::string name_;
  std::function<bool(const LexString&)> keep_;
};

class DecidedNode final : public SetNode {
 public:
  DecidedNode(BudgetedFn f, Budget cap) : f_(std::move(f)), cap_(cap) {}
  Membership member(const LexString& x, Budget budget) const override {
    const Outcome o = f_.run(x, std::min(cap_, budget));
    if (o.halted()) return Membership::Yes;
    if (o.rejected()) return Membership::No;
    return Membership::Unknown;
  }
  std::string describe() const override { return "decided(" + f_.name() + ")"; }

 private:
  BudgetedFn f_;
  Budget cap_;
};

class EnumeratedNode final : public SetNode {
 public:
  EnumeratedNode(Enumerator e, bool complement) : e_(std::move(e)), complement_(complement) {}
  Membership member(const LexString& x, Budget budget) const override {
    Membership m = Membership::Unknown;
    if (e_.position_of(x, budget)) {
      m = Membership::Yes;
    } else if (e_.ends_within(budget)) {
      m = Membership::No;
    }
    return complement_ ? negate(m) : m;
  }
  std::string describe() const override { return (complement_ ? "coenum(" : "enum(") + e_.name() + ")"; }

 private:
  Enumerator e_;
  bool complement_;
};

class ComplementNode final : public SetNode {
 public:
  explicit ComplementNode(SetSpec s) : s_(std::move(s)) {}
  Membership member(const LexString& x, Budget budget) const override { return negate(s_.member(x, budget)); }
  std::string describe() const override { return "complement(" + s_.describe() + ")"; }

 private:
  SetSpec s_;
};

class JoinHatNode final : public SetNode {
 public:
  JoinHatNode(SetSpec a, SetSpec b) : a_(std::move(a)), b_(std::move(b)) {}
  Membership member(const LexString& x, Budget budget) const override {
    if (x.empty()) return Membership::No;
    return (x.back() == '0' ? a_ : b_).member(x.drop_last(), budget);
  }
  std::string describe() const override { return "joinhat(" + a_.describe() + "," + b_.describe() + ")"; }

 private:
  SetSpec a_, b_;
};

class Interleave4Node final : public SetNode {
 public:
  explicit Interleave4Node(SetSpec a) : a_(std::move(a)) {}
  Membership member(const LexString& x, Budget budget) const override {
    const Natural m = lex_rank(x);
    const int phase = static_cast<int>(m % 4);
    if (phase == 0 || phase == 2) return Membership::Yes;
    const Membership inner = a_.member(lex_unrank(m / 4), budget);
    return phase == 1 ? inner : negate(inner);
  }
  std::string describe() const override { return "interleave4(" + a_.describe() + ")"; }

 private:
  SetSpec a_;
};

class CylinderNode final : public SetNode {
 public:
  explicit CylinderNode(SetSpec b) : b_(std::move(b)) {}
  Membership member(const LexString& x, Budget budget) const override {
    return b_.member(unpair(x).first, budget);
  }
  std::string describe() const override { return "cylinder(" + b_.describe() + ")"; }

 private:
  SetSpec b_;
};

class KApproxNode final : public SetNode {
 public:
  explicit KApproxNode(Budget cap) : cap_(cap) {}
  Membership member(const LexString& x, Budget budget) const override {
    const Outcome o = self_application(x, std::min(cap_, budget));
    if (o.halted()) return Membership::Yes;
    if (o.rejected()) return Membership::No;
    return Membership::Unknown;
  }
  std::string describe() const override { return "K_approx(" + std::to_string(cap_) + ")"; }

 private:
  Budget cap_;
};

class CoKCylinderNode final : public SetNode {
 public:
  explicit CoKCylinderNode(Budget cap) : cap_(cap) {}

  Membership member(const LexString& q, Budget budget) const override {
    const Budget b = std::min(cap_, budget);
    const auto [x, z] = unpair(q);
    const Outcome o = probe(x, b);
    if (z.empty()) {
      if (o.halted()) return Membership::No;
      if (o.rejected()) return Membership::Yes;
      return Membership::Unknown;
    }
    const Natural exact = lex_rank(predecessor(z));
    if (o.halted()) return Natural(o.steps()) == exact ? Membership::Yes : Membership::No;
    if (o.rejected()) return Membership::No;
    // Still running after b steps, so it did not accept at any time <= b.
    return exact <= b ? Membership::No : Membership::Unknown;
  }
  std::string describe() const override { return "coK_cyl(" + std::to_string(cap_) + ")"; }

 private:
  // Self-application of x, cached at the largest budget seen so far.
  Outcome probe(const LexString& x, Budget b) const {
    {
      std::lock_guard lock(mu_);
      if (auto it = cache_.find(x); it != cache_.end()) {
        const auto& [probed, o] = it->second;
        if (o.finished()) return o.steps() <= b ? o : Outcome::pending(b);
        if (probed >= b) return Outcome::pending(b);
      }
    }
    Outcome o = self_application(x, b);
    std::lock_guard lock(mu_);
    auto it = cache_.find(x);
    if (it == cache_.end()) {
      cache_.emplace(x, std::pair<Budget, Outcome>{b, o});
    } else if (o.finished() || it->second.first < b) {
      it->second = {b, o};
    }
    return o;
  }

  Budget cap_;
  mutable std::mutex mu_;
  mutable std::map<LexString, std::pair<Budget, Outcome>> cache_;
};

}  // namespace

SetSpec::SetSpec(std::shared_ptr<const SetNode> node) : node_(std::move(node)) {
  if (!node_) throw std::invalid_argument("SetSpec: null node");
}

SetSpec SetSpec::finite(std::vector<LexString> members) {
  return SetSpec(std::make_shared<FiniteNode>(std::move(members)));
}

SetSpec SetSpec::universe() {
  return predicate("sigma", [](const LexString&) { return true; });
}

SetSpec SetSpec::empty() { return finite({}); }

SetSpec SetSpec::predicate(std::string name, std::function<bool(const LexString&)> keep) {
  return SetSpec(std::make_shared<PredicateNode>(std::move(name), std::move(keep)));
}

SetSpec SetSpec::decided_by(BudgetedFn decider, Budget cap) {
  return SetSpec(std::make_shared<DecidedNode>(std::move(decider), cap));
}

SetSpec SetSpec::enumerated(Enumerator e) { return SetSpec(std::make_shared<EnumeratedNode>(std::move(e), false)); }

SetSpec SetSpec::co_enumerated(Enumerator complement) {
  return SetSpec(std::make_shared<EnumeratedNode>(std::move(complement), true));
}

SetSpec complement(const SetSpec& s) { return SetSpec(std::make_shared<ComplementNode>(s)); }
SetSpec join_hat(const SetSpec& a, const SetSpec& b) { return SetSpec(std::make_shared<JoinHatNode>(a, b)); }
SetSpec interleave4(const SetSpec& a) { return SetSpec(std::make_shared<Interleave4Node>(a)); }
SetSpec cylinderize(const SetSpec& b) { return SetSpec(std::make_shared<CylinderNode>(b)); }
SetSpec k_approx(Budget cap) { return SetSpec(std::make_shared<KApproxNode>(cap)); }
SetSpec cok_cylinder_set(Budget cap) { return SetSpec(std::make_shared<CoKCylinderNode>(cap)); }

Enumerator enumerate_members(const SetSpec& s, Budget per_query) {
  return Enumerator::scan_universe(
      [s, per_query](const LexString& x) { return s.member(x, per_query) == Membership::Yes; },
      "members(" + s.describe() + ")");
}

Enumerator enumerate_nonmembers(const SetSpec& s, Budget per_query) {
  return Enumerator::scan_universe(
      [s, per_query](const LexString& x) { return s.member(x, per_query) == Membership::No; },
      "nonmembers(" + s.describe() + ")");
}

std::vector<LexString> random_finite_members(std::uint64_t seed, std::size_t max_len) {
  std::mt19937_64 rng(seed);
  std::vector<LexString> out;
  LexString s;
  for (std::uint64_t i = 0, n = universe_prefix_size(max_len); i < n; ++i, s = successor(s)) {
    if (rng() & 1) out.push_back(s);
  }
  return out;
}

}  // namespace rankkit
