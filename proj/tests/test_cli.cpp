#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <sstream>

#include "json.hpp"

#include "rankkit/cli.hpp"

using namespace rankkit;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
  nlohmann::json json() const { return nlohmann::json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace

TEST_CASE("join-hat ranking passes") {
  const Run r = run({"verify-rank", "--fn", "thm103", "--set", "joinhat(finite{0,1}, complement(finite{0,1}))",
                     "--max-len", "10"});
  CHECK(r.code == kExitPass);
  CHECK(r.json()["verdict"] == "pass");
  CHECK(r.json()["command"] == "verify-rank");
}

TEST_CASE("decide rejects a non-member") {
  const Run r = run({"decide", "--proc", "thm25", "--set", "finite{0,10}", "--x", "1", "--budget", "100000"});
  CHECK(r.code == kExitRefuted);
  CHECK(r.json()["decision"] == "reject");
  CHECK(run({"decide", "--proc", "thm25", "--set", "finite{0,10}", "--x", "10"}).code == kExitPass);
  CHECK(run({"decide", "--proc", "variant-a", "--set", "finite{0,10}", "--x", "1"}).code == kExitRefuted);
  CHECK(run({"decide", "--proc", "thm167", "--set", "complement(finite{0})", "--x", "1"}).code == kExitPass);
}

TEST_CASE("constant map is refuted with a witness that rechecks") {
  const Run r = run({"verify-rank", "--fn", "constant-eps", "--set", "finite{0,1}", "--recheck"});
  CHECK(r.code == kExitRefuted);
  const auto j = r.json();
  CHECK(j["witness"]["clause"] == "collision");
  CHECK(j["recheck"] == "refuted");

  const Run c = run({"verify-compress", "--fn", "constant-eps", "--set", "finite{0,1}", "--recheck"});
  CHECK(c.code == kExitRefuted);
  CHECK(c.json()["recheck"] == "refuted");
}

TEST_CASE("parse errors exit 3 and name the token") {
  const Run r = run({"verify-rank", "--fn", "identity", "--set", "finite{0,2}"});
  CHECK(r.code == kExitError);
  CHECK(r.json()["error"] == "parse");
  CHECK(r.json()["token"] == "2");
  CHECK(r.err.find("'2'") != std::string::npos);

  CHECK(run({"verify-rank", "--set", "sigma", "--max-len", "0"}).code == kExitError);
  CHECK(run({"bogus"}).code == kExitError);
  CHECK(run({"verify-rank", "--fn", "no-such-fn", "--set", "sigma"}).code == kExitError);
}

TEST_CASE("output is deterministic") {
  const std::vector<std::string> args{"diagonalize", "--machines", "6", "--horizon", "200"};
  const Run a = run(args);
  const Run b = run(args);
  CHECK(a.code == b.code);
  CHECK(a.out == b.out);
  CHECK(a.json()["stages"].size() == 6);
  CHECK(a.json()["audit"]["verdict"] != "refuted");
}

TEST_CASE("constructions by tag") {
  for (const char* tag : {"thm103", "thm123", "prop106", "beta1", "retrace", "separator"}) {
    const Run r = run({"construct", "--thm", tag, "--seed", "2"});
    CHECK_MESSAGE(r.code == kExitPass, tag);
    CHECK(r.json()["construction"] == tag);
  }
  CHECK(run({"construct", "--thm", "nope"}).code == kExitError);
}

TEST_CASE("1tt reductions") {
  CHECK(run({"verify-1tt", "--reduction", "thm123", "--set", "random(2,5)", "--max-len", "8"}).code == kExitPass);
  CHECK(run({"verify-1tt", "--reduction", "negation", "--set", "random(2,5)", "--set-b", "random(2,5)"}).code ==
        kExitRefuted);
}

TEST_CASE("isomorphism") {
  const Run r = run({"isomorphism", "--fn", "swap01", "--gn", "swap01", "--n", "20", "--set", "finite{0}", "--set-b",
                     "finite{1}"});
  CHECK(r.code == kExitPass);
}

TEST_CASE("budget default comes from the environment") {
  const std::vector<std::string> args{"decide", "--proc", "thm25", "--set", "finite{0,10}", "--x", "1"};
  ::setenv("RANKKIT_BUDGET", "1", 1);
  const Run low = run(args);
  ::unsetenv("RANKKIT_BUDGET");
  CHECK(low.code == kExitInconclusive);
  CHECK(run(args).code == kExitRefuted);
}
