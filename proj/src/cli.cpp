#include "rankkit/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "rankkit/checkers.hpp"
#include "rankkit/constructions.hpp"
#include "rankkit/procedures.hpp"

namespace rankkit {
namespace {

using nlohmann::json;

constexpr Budget kDefaultBudget = 100000;

Budget default_budget() {
  if (const char* env = std::getenv("RANKKIT_BUDGET")) {
    try {
      const unsigned long long v = std::stoull(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
  }
  return kDefaultBudget;
}

struct Options {
  std::string fn = "identity";
  std::string gn = "identity";
  std::string set;
  std::string set_b;
  std::string reduction = "identity";
  std::string thm;
  std::string proc;
  std::string x;
  std::size_t max_len = 10;
  std::uint64_t cover = 0;
  Budget budget = default_budget();
  std::uint64_t horizon = 1000;
  std::uint64_t machines = 20;
  std::uint64_t n = 200;
  std::uint64_t seed = 1;
  bool recheck = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Pass: return kExitPass;
    case Verdict::Refuted: return kExitRefuted;
    case Verdict::Inconclusive: break;
  }
  return kExitInconclusive;
}

int exit_code(Decision d) {
  switch (d) {
    case Decision::Accept: return kExitPass;
    case Decision::Reject: return kExitRefuted;
    case Decision::Inconclusive: break;
  }
  return kExitInconclusive;
}

// Refuted dominates inconclusive, which dominates pass.
Verdict combine(Verdict a, Verdict b) {
  if (a == Verdict::Refuted || b == Verdict::Refuted) return Verdict::Refuted;
  if (a == Verdict::Inconclusive || b == Verdict::Inconclusive) return Verdict::Inconclusive;
  return Verdict::Pass;
}

SetSpec require_set(const std::string& text, const char* flag) {
  if (text.empty()) throw UsageError(std::string("missing ") + flag);
  return parse_set(text);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("unknown function '" + path + "' (not a builtin tag or readable program file)");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Builtin tags, "machine:N", or a program file.
BudgetedFn resolve_fn(const std::string& ref, const std::optional<SetSpec>& set, Budget budget) {
  if (ref == "identity") return BudgetedFn::total("identity", [](const LexString& x) { return x; });
  if (ref == "constant-eps") return BudgetedFn::total("constant-eps", [](const LexString&) { return LexString{}; });
  if (ref == "successor") return BudgetedFn::total("successor", [](const LexString& x) { return successor(x); });
  if (ref == "swap01") {
    return BudgetedFn::total("swap01", [](const LexString& x) {
      std::string s = x.bits();
      for (char& c : s) c = c == '0' ? '1' : '0';
      return LexString(std::move(s));
    });
  }
  if (ref == "thm103") return join_hat_ranker();
  if (ref == "thm123") return interleave4_compressor();
  if (ref == "oracle-rank" || ref == "oracle-partial" || ref == "oracle-variant-a") {
    if (!set) throw UsageError("--fn " + ref + " needs --set");
    const RankOracle oracle(*set, budget);
    if (ref == "oracle-rank") return oracle.ranker();
    if (ref == "oracle-partial") return oracle.partial_ranker();
    return oracle.variant_a_ranker();
  }
  if (ref.rfind("machine:", 0) == 0) {
    const std::string digits = ref.substr(8);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
      throw ParseError("unexpected token '" + digits + "' in machine index", digits);
    }
    return BudgetedFn::machine(decode_machine(Natural(digits)), "M" + digits);
  }
  return BudgetedFn::machine(Program::parse(slurp(ref)), ref);
}

json strings_json(const std::vector<LexString>& v) {
  json a = json::array();
  for (const auto& s : v) a.push_back(s.token());
  return a;
}

struct Result {
  json report;
  int code = kExitPass;
  std::string summary;
};

std::string report_summary(const VerifyReport& r) {
  std::string s(to_string(r.verdict));
  if (r.witness) {
    s += " (" + r.witness->clause;
    if (!r.witness->strings.empty()) s += " at " + r.witness->strings.front().token();
    s += ")";
  }
  return s;
}

Result verify_rank(const Options& o, bool compress) {
  const SetSpec a = require_set(o.set, "--set");
  const BudgetedFn f = resolve_fn(o.fn, a, o.budget);
  const VerifyReport r =
      compress ? check_compression(f, a, o.max_len, o.cover, o.budget) : check_ranking(f, a, o.max_len, o.budget);
  Result out{r.to_json(), exit_code(r.verdict), report_summary(r)};
  out.report["function"] = f.name();
  out.report["set"] = a.describe();
  if (o.recheck && r.verdict == Verdict::Refuted) {
    const Verdict again = compress ? recheck_compression(r, f, a, o.budget) : recheck_ranking(r, f, a, o.budget);
    out.report["recheck"] = std::string(to_string(again));
    out.summary += ", recheck " + std::string(to_string(again));
  }
  return out;
}

OneTTReduction resolve_reduction(const std::string& name) {
  if (name == "identity") {
    return {"identity", BudgetedFn::total("identity", [](const LexString& x) { return x; }),
            [](const LexString&) { return TruthTable::Identity; }};
  }
  if (name == "negation") {
    return {"negation", BudgetedFn::total("identity", [](const LexString& x) { return x; }),
            [](const LexString&) { return TruthTable::Negation; }};
  }
  if (name == "thm123") return interleave4_embedding();
  if (name == "thm123-back") return interleave4_retraction();
  throw UsageError("unknown reduction '" + name + "'");
}

Result verify_1tt(const Options& o) {
  const SetSpec s = require_set(o.set, "--set");
  const OneTTReduction r = resolve_reduction(o.reduction);
  std::optional<SetSpec> a;
  std::optional<SetSpec> b;
  if (o.reduction == "thm123") {
    a = s;
    b = interleave4(s);
  } else if (o.reduction == "thm123-back") {
    a = interleave4(s);
    b = s;
  } else {
    a = s;
    b = o.set_b.empty() ? (o.reduction == "negation" ? complement(s) : s) : parse_set(o.set_b);
  }
  const VerifyReport rep = check_1tt(r, *a, *b, o.max_len, o.budget);
  Result out{rep.to_json(), exit_code(rep.verdict), report_summary(rep)};
  out.report["reduction"] = r.name;
  out.report["from"] = a->describe();
  out.report["to"] = b->describe();
  return out;
}

std::optional<LexString> first_with(const SetSpec& s, Membership want, std::size_t max_len, Budget budget) {
  for (const LexString& x : universe_prefix(max_len)) {
    if (s.member(x, budget) == want) return x;
  }
  return std::nullopt;
}

Result construct(const Options& o) {
  const SetSpec s = o.set.empty() ? parse_set("random(" + std::to_string(o.seed) + ",6)") : parse_set(o.set);
  const std::size_t n = o.max_len;
  json j;
  j["construction"] = o.thm;
  Verdict verdict = Verdict::Pass;
  auto attach = [&](const std::string& key, const VerifyReport& r) {
    j["checks"][key] = r.to_json();
    verdict = combine(verdict, r.verdict);
  };

  if (o.thm == "thm103") {
    const SetSpec joined = join_hat(s, complement(s));
    j["set"] = joined.describe();
    attach("check_ranking", check_ranking(join_hat_ranker(), joined, n, o.budget));
  } else if (o.thm == "thm123") {
    const SetSpec b = interleave4(s);
    const std::uint64_t cover = 3 * (universe_prefix_size(n) / 4);
    j["set"] = b.describe();
    attach("check_compression", check_compression(interleave4_compressor(), b, n, cover, o.budget));
    attach("check_1tt(A->B)", check_1tt(interleave4_embedding(), s, b, n, o.budget));
    attach("check_1tt(B->A)", check_1tt(interleave4_retraction(), b, s, n, o.budget));
  } else if (o.thm == "prop106") {
    const BudgetedFn f = re_compressor(enumerate_members(s, o.budget));
    j["set"] = s.describe();
    attach("check_compression", check_compression(f, s, n, o.cover, o.budget));
  } else if (o.thm == "beta1") {
    const auto x0 = first_with(s, Membership::Yes, n, o.budget);
    const auto x1 = first_with(s, Membership::No, n, o.budget);
    if (!x0 || !x1) throw PremiseViolation("need a resolvable member and non-member within --max-len");
    const ConstructionBundle bundle = la_construction(s, enumerate_nonmembers(s, o.budget), *x0, *x1, o.budget);
    j["set"] = bundle.set->describe();
    j["x0"] = x0->token();
    j["x1"] = x1->token();
    attach("check_compression", check_compression(*bundle.fn, *bundle.set, n, o.cover, o.budget));
    const OneTTReduction pad{"A->L_A", bundle.reductions.front().map,
                             [](const LexString&) { return TruthTable::Identity; }};
    attach("check_1tt(A->L_A)", check_1tt(pad, s, *bundle.set, n, o.budget));
  } else if (o.thm == "retrace") {
    // Retracer built from the members in the prefix; non-members map to
    // themselves so the total-mode abort fires on them.
    std::vector<LexString> members;
    for (const LexString& x : universe_prefix(n)) {
      const Membership m = s.member(x, o.budget);
      if (m == Membership::Unknown) throw PremiseViolation("membership of " + x.token() + " does not resolve");
      if (m == Membership::Yes) members.push_back(x);
    }
    if (members.empty()) throw PremiseViolation("the set has no member within --max-len");
    auto table = std::make_shared<std::map<LexString, LexString>>();
    for (std::size_t i = 0; i < members.size(); ++i) (*table)[members[i]] = members[i == 0 ? 0 : i - 1];
    const BudgetedFn f = BudgetedFn::total("retracer", [table](const LexString& y) {
      const auto it = table->find(y);
      return it == table->end() ? y : it->second;
    });
    j["set"] = s.describe();
    j["a0"] = members.front().token();
    attach("check_ranking", check_ranking(retrace_to_rank(f, members.front(), RetraceMode::Total), s, n, o.budget));
  } else if (o.thm == "separator") {
    // A = strings whose 1-tt answer from S is yes, B = the rest.
    OneTTReduction r{"drop-last",
                     BudgetedFn::total("drop-last", [](const LexString& x) { return x.empty() ? x : x.drop_last(); }),
                     [](const LexString& x) {
                       return x.empty() || x.back() == '0' ? TruthTable::Identity : TruthTable::Negation;
                     }};
    const SetSpec sq = o.set.empty() ? parse_set("finite{0,11}") : s;
    const SetSpec a = SetSpec::predicate("separator-A", [r, sq, budget = o.budget](const LexString& x) {
      const Outcome q = r.query.run(x, budget);
      return apply(r.table(x), sq.member(q.output(), budget)) == Membership::Yes;
    });
    const SetSpec b = complement(a);
    const BudgetedFn g = separator_from_prefix(r, a, b, n, o.budget);
    VerifyReport rep;
    for (const LexString& x : universe_prefix(n)) {
      ++rep.examined;
      const bool in_a = a.member(x, o.budget) == Membership::Yes;
      const Outcome out = g.run(x, o.budget);
      rep.steps += out.steps();
      const std::string want = in_a ? "1" : "0";
      if (!out.halted() || out.output().bits() != want) {
        rep.verdict = Verdict::Refuted;
        rep.witness = Witness{"separator-mismatch", {x}, {out.describe()}, want};
        break;
      }
    }
    j["set"] = sq.describe();
    attach("separation", rep);
  } else {
    throw UsageError("unknown construction '" + o.thm + "'");
  }
  j["verdict"] = std::string(to_string(verdict));
  return {j, exit_code(verdict), o.thm + ": " + std::string(to_string(verdict))};
}

Result decide(const Options& o) {
  const SetSpec s = require_set(o.set, "--set");
  if (o.x.empty()) throw UsageError("missing --x");
  const LexString x = LexString::parse(o.x);
  const RankOracle oracle(s, o.budget);
  DecisionRecord d;
  if (o.proc == "thm25") {
    d = decide_re_with_ranker(enumerate_members(s, o.budget), oracle.ranker(), x, o.budget);
  } else if (o.proc == "thm167") {
    d = decide_core_with_subset(enumerate_nonmembers(s, o.budget), enumerate_members(s, o.budget), oracle.ranker(),
                                x, o.budget);
  } else if (o.proc == "variant-a") {
    d = variant_a_decider(oracle.variant_a_ranker(), x, o.budget);
  } else {
    throw UsageError("unknown procedure '" + o.proc + "'");
  }
  json j = d.to_json();
  j["procedure"] = o.proc;
  j["set"] = s.describe();
  j["x"] = x.token();
  return {j, exit_code(d.decision), std::string(to_string(d.decision)) + " via " + d.clause};
}

Result run_diagonalize(const Options& o) {
  const std::vector<BudgetedFn> candidates = enumerate_machines(o.machines);
  const StageState state = diagonalize(candidates, o.budget, o.horizon);
  const VerifyReport audit = audit_diagonal(state, candidates, o.budget);
  json j = state.to_json();
  j["audit"] = audit.to_json();
  std::size_t certified = 0;
  for (const auto& s : state.stages) certified += s.kind != StageCase::Inconclusive;
  j["certified"] = certified;
  return {j, exit_code(audit.verdict),
          std::to_string(certified) + "/" + std::to_string(state.stages.size()) + " stages certified, audit " +
              std::string(to_string(audit.verdict))};
}

Result isomorphism(const Options& o) {
  std::optional<SetSpec> a;
  if (!o.set.empty()) a = parse_set(o.set);
  const std::optional<SetSpec> b = o.set_b.empty() ? a : std::optional<SetSpec>(parse_set(o.set_b));
  const BudgetedFn f = resolve_fn(o.fn, a, o.budget);
  const BudgetedFn g = resolve_fn(o.gn, b, o.budget);
  const MyhillResult h = myhill_isomorphism(f, g, o.n, o.budget);
  json j = h.to_json();
  int code = h.status == MyhillResult::Status::Ok                    ? kExitPass
             : h.status == MyhillResult::Status::InjectivityViolation ? kExitRefuted
                                                                      : kExitInconclusive;
  if (a && code == kExitPass) {
    std::uint64_t checked = 0;
    for (const auto& [x, y] : h.pairs) {
      const Membership mx = a->member(x, o.budget);
      const Membership my = b->member(y, o.budget);
      if (mx == Membership::Unknown || my == Membership::Unknown) continue;
      ++checked;
      if (mx != my) {
        j["mismatch"] = strings_json({x, y});
        code = kExitRefuted;
        break;
      }
    }
    j["membership_checked"] = checked;
  }
  const char* word = code == kExitPass ? "bijection ok" : code == kExitRefuted ? "refuted" : "inconclusive";
  return {j, code, std::string(word) + " on " + std::to_string(h.pairs.size()) + " pairs"};
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Rankability and compressibility toolkit", "rankkit"};
  app.require_subcommand(1);

  auto positive = CLI::PositiveNumber;
  auto add_budget = [&](CLI::App* c) {
    c->add_option("--budget", o.budget, "step budget (default: $RANKKIT_BUDGET or 100000)")->check(positive);
  };
  auto add_prefix = [&](CLI::App* c) {
    c->add_option("--max-len", o.max_len, "check every string up to this length")->check(positive);
  };

  auto* vr = app.add_subcommand("verify-rank", "check a function is a ranking function on a prefix");
  auto* vc = app.add_subcommand("verify-compress", "check a function is a compression function on a prefix");
  for (auto* c : {vr, vc}) {
    c->add_option("--fn", o.fn, "function tag, machine:N, or program file");
    c->add_option("--set", o.set, "set description")->required();
    add_prefix(c);
    add_budget(c);
    c->add_flag("--recheck", o.recheck, "re-verify a refutation witness from scratch");
  }
  vc->add_option("--cover", o.cover, "audit that the first N strings are images");

  auto* v1 = app.add_subcommand("verify-1tt", "check a 1-truth-table reduction on a prefix");
  v1->add_option("--reduction", o.reduction, "identity, negation, thm123, thm123-back");
  v1->add_option("--set", o.set, "source set (or the base set for thm123*)")->required();
  v1->add_option("--set-b", o.set_b, "target set");
  add_prefix(v1);
  add_budget(v1);

  auto* cs = app.add_subcommand("construct", "build a construction and run its checks");
  cs->add_option("--thm", o.thm, "thm103, thm123, prop106, beta1, retrace, separator")->required();
  cs->add_option("--set", o.set, "base set (default: random(seed,6))");
  cs->add_option("--seed", o.seed, "seed for the default random base set");
  cs->add_option("--cover", o.cover, "cover audit size for compression checks");
  add_prefix(cs);
  add_budget(cs);

  auto* dc = app.add_subcommand("decide", "run a decision procedure driven by an oracle ranker");
  dc->add_option("--proc", o.proc, "thm25, thm167, variant-a")->required();
  dc->add_option("--set", o.set, "set description")->required();
  dc->add_option("--x", o.x, "input string (binary or eps)")->required();
  add_budget(dc);

  auto* dg = app.add_subcommand("diagonalize", "defeat the first machines as compressors");
  dg->add_option("--machines", o.machines, "number of candidate machines")->check(positive);
  dg->add_option("--horizon", o.horizon, "strings scanned per stage")->check(positive);
  add_budget(dg);

  auto* iso = app.add_subcommand("isomorphism", "back-and-forth bijection from two one-one reductions");
  iso->add_option("--fn", o.fn, "reduction A -> B");
  iso->add_option("--gn", o.gn, "reduction B -> A");
  iso->add_option("--n", o.n, "domain strings to cover")->check(positive);
  iso->add_option("--set", o.set, "A, for the membership check");
  iso->add_option("--set-b", o.set_b, "B (default: A)");
  add_budget(iso);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    Result r;
    if (command == "verify-rank") r = verify_rank(o, false);
    else if (command == "verify-compress") r = verify_rank(o, true);
    else if (command == "verify-1tt") r = verify_1tt(o);
    else if (command == "construct") r = construct(o);
    else if (command == "decide") r = decide(o);
    else if (command == "diagonalize") r = run_diagonalize(o);
    else r = isomorphism(o);
    r.report["command"] = command;
    out << r.report.dump(2) << "\n";
    err << command << ": " << r.summary << "\n";
    return r.code;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    out << json{{"command", command}, {"error", "parse"}, {"token", e.token()}, {"detail", e.what()}}.dump(2)
        << "\n";
  } catch (const PremiseViolation& e) {
    err << "premise violation: " << e.what() << "\n";
    out << json{{"command", command}, {"error", "premise-violation"}, {"detail", e.what()}}.dump(2) << "\n";
  } catch (const DecodeError& e) {
    err << "program error: " << e.what() << "\n";
    out << json{{"command", command}, {"error", "decode"}, {"detail", e.what()}}.dump(2) << "\n";
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
  }
  return kExitError;
}

}  // namespace rankkit
