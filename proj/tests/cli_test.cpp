#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "countlab/cli.hpp"
#include "countlab/corpus.hpp"
#include "countlab/formula.hpp"

using namespace countlab;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Scratch {
 public:
  Scratch() : dir_(fs::temp_directory_path() / ("countlab_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(dir_);
  }
  ~Scratch() { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) const {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string write(const std::string& name, const CnfFormula& f) const {
    return write(name, emit_dimacs(f));
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static std::string read(const std::string& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
  }

 private:
  fs::path dir_;
};

}  // namespace

TEST_CASE("count") {
  Scratch s;
  const std::string f = s.write("or.cnf", "p cnf 2 1\n1 2 0\n");
  CHECK(run({"count", f}).out == "accepted=3 paths=2^2\n");
  CHECK(run({"count", f, "--engine", "bruteforce"}).out == "accepted=3 paths=2^2\n");
  CHECK(run({"count", f, "--engine", "enumerate"}).out == "accepted=3 paths=2^2\n");
  const Run unsat = run({"count", s.write("unsat.cnf", "p cnf 1 2\n1 0\n-1 0\n")});
  CHECK(unsat.code == cli::kOk);
  CHECK(unsat.out.rfind("accepted=0 ", 0) == 0);
}

TEST_CASE("exit codes") {
  Scratch s;
  const Run bad = run({"count", s.write("bad.cnf", "p cnf 1 1\n2 0\n")});
  CHECK(bad.code == cli::kParseError);
  CHECK(bad.err.find("line 2") != std::string::npos);
  CHECK(run({"count", s.path("missing.cnf")}).code == cli::kUsage);
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"frobnicate"}).code == cli::kUsage);
  CHECK(run({"count", s.write("ok.cnf", "p cnf 1 0\n"), "--engine", "magic"}).code ==
        cli::kUsage);
  CHECK(run({"--help"}).code == cli::kOk);
  const Run bad_machine =
      run({"count", s.write("m.cnf", "c countlab: machine vars=5\np cnf 1 0\n")});
  CHECK(bad_machine.code == cli::kParseError);
}

TEST_CASE("classify") {
  Scratch s;
  const std::string seven3 = s.write("seven3.cnf", formula_with_models(3, 7));
  const std::string seven4 = s.write("seven4.cnf", formula_with_models(4, 7));
  const std::string five = s.write("five.cnf", formula_with_models(3, 5));
  CHECK(run({"classify", seven3, "--class", "MNS"}).out == "accepted=7 paths=2^3\nAccept\n");
  CHECK(run({"classify", seven4, "--class", "PP"}).out == "accepted=7 paths=2^4\nReject\n");
  CHECK(run({"classify", five, "--class", "F=P", "--target", "5"}).out ==
        "accepted=5 paths=2^3\nAccept\n");
  CHECK(run({"classify", five, "--class", "MNP"}).out ==
        "accepted=5 paths=2^3\nPromiseViolated\n");

  const Run unknown = run({"classify", five, "--class", "NQP"});
  CHECK(unknown.code == cli::kUsage);
  CHECK(unknown.err.find("MNS") != std::string::npos);
  const Run missing = run({"classify", five, "--class", "F=P"});
  CHECK(missing.code == cli::kUsage);
  CHECK(missing.err.find("--target") != std::string::npos);
  CHECK(run({"classify", five, "--class", "F=P", "--target", "x"}).code == cli::kUsage);
}

TEST_CASE("transform writes provenance and the audit expression") {
  Scratch s;
  const std::string one = s.write("one.cnf", formula_with_models(3, 1));
  const std::string out = s.path("us.cnf");
  const Run t = run({"transform", "us_to_mns", one, "--out", out});
  REQUIRE(t.code == cli::kOk);
  CHECK(t.out.find("count: 7*a\n") != std::string::npos);
  CHECK(Scratch::read(out).find("c countlab: construction=us_to_mns params=n=3\n") !=
        std::string::npos);
  CHECK(run({"count", out}).out == "accepted=7 paths=2^6\n");

  const std::string four = s.write("four.cnf", formula_with_models(4, 8));
  const std::string ceq = s.path("ceq.cnf");
  const Run c = run({"transform", "cequal_to_mns", four, "--out", ceq});
  REQUIRE(c.code == cli::kOk);
  CHECK(c.out.find("machine_vars: 8\n") != std::string::npos);
  const CnfFormula emitted = parse_dimacs(Scratch::read(ceq));
  CHECK(emitted.num_vars() > 8);
  CHECK(run({"count", ceq}).out == "accepted=127 paths=2^8\n");
  CHECK(run({"classify", ceq, "--class", "MNS"}).out.find("Accept") != std::string::npos);

  const Run fewp = run({"transform", "fewp_to_mnp", s.write("two.cnf", formula_with_models(2, 2)),
                        "--q-bound", "3", "--out", s.path("fewp.cnf")});
  REQUIRE(fewp.code == cli::kOk);
  CHECK(run({"count", s.path("fewp.cnf")}).out == "accepted=3 paths=2^9\n");
}

TEST_CASE("complement twice restores the count") {
  Scratch s;
  const std::string f = s.write("f.cnf", "p cnf 3 2\n1 2 0\n-3 0\n");
  REQUIRE(run({"transform", "complement", f, "--out", s.path("c1.cnf")}).code == cli::kOk);
  CHECK(run({"count", s.path("c1.cnf")}).out == "accepted=5 paths=2^3\n");
  REQUIRE(run({"transform", "complement", s.path("c1.cnf"), "--out", s.path("c2.cnf")}).code ==
          cli::kOk);
  CHECK(run({"count", s.path("c2.cnf")}).out == "accepted=3 paths=2^3\n");
}

TEST_CASE("transform parameters") {
  Scratch s;
  const std::string f = s.write("f.cnf", formula_with_models(3, 2));
  const Run add = run({"transform", "add_const", f, "--param", "c=3", "--out", s.path("a.cnf")});
  REQUIRE(add.code == cli::kOk);
  CHECK(add.out.find("count: a + 3\n") != std::string::npos);
  CHECK(run({"count", s.path("a.cnf")}).out == "accepted=5 paths=2^4\n");

  CHECK(run({"transform", "add_const", f}).code == cli::kUsage);
  CHECK(run({"transform", "add_const", f, "--param", "c=99"}).code == cli::kUsage);
  CHECK(run({"transform", "pad_pow2", f, "--param", "j=1"}).code == cli::kUsage);
  CHECK(run({"transform", "teleport", f}).code == cli::kUsage);

  // Without --out the DIMACS goes to stdout and the summary to stderr.
  const Run piped = run({"transform", "multiply_mersenne", f, "--param", "t=2"});
  REQUIRE(piped.code == cli::kOk);
  CHECK(parse_dimacs(piped.out).num_vars() == 5);
  CHECK(piped.err.find("count: 3*a\n") != std::string::npos);

  REQUIRE(run({"transform", "complement", f, "--out", s.path("c.cnf")}).code == cli::kOk);
  CHECK(run({"transform", "us_to_mns", s.path("c.cnf")}).code == cli::kUsage);
}

TEST_CASE("oracle simulations print traces and write reports") {
  Scratch s;
  const std::string f = s.write("f.cnf", formula_with_models(3, 5));
  const std::string report = s.path("trace.json");
  const Run m = run({"transform", "majority_np_mns", f, "--report", report});
  REQUIRE(m.code == cli::kOk);
  CHECK(m.out.find("verdict: Accept\n") != std::string::npos);
  const auto j = nlohmann::json::parse(Scratch::read(report));
  CHECK(j["queries"].size() == 4);
  CHECK(j["verdict"] == "Accept");

  const Run p = run({"transform", "parity_np_mns", f});
  CHECK(p.out.find("gate: none\n") != std::string::npos);
  CHECK(p.out.find("verdict: Accept\n") != std::string::npos);

  const Run d = run({"transform", "mns_to_cequal", s.write("g.cnf", formula_with_models(3, 7)),
                     "--report", s.path("dtt.json")});
  CHECK(d.out.find("decision: YES\n") != std::string::npos);
  CHECK(nlohmann::json::parse(Scratch::read(s.path("dtt.json")))["decision"] == true);
}

TEST_CASE("verify") {
  Scratch s;
  const Run t3 = run({"verify", "T3", "--n-max", "6", "--report", s.path("t3.json")});
  CHECK(t3.code == cli::kOk);
  CHECK(t3.out.find("result: PASS\n") != std::string::npos);
  const std::string first = Scratch::read(s.path("t3.json"));
  run({"verify", "T3", "--n-max", "6", "--report", s.path("t3b.json")});
  CHECK(first == Scratch::read(s.path("t3b.json")));
  CHECK(nlohmann::json::parse(first)["failures"].empty());

  const Run t7 = run({"verify", "T7", "--n-max", "2"});
  CHECK(t7.code == cli::kVerificationFailed);
  CHECK(t7.out.find("replay: countlab verify T7 --n-max 2 --seed 0") != std::string::npos);

  CHECK(run({"verify", "T99"}).code == cli::kUsage);
  CHECK(run({"verify", "T3", "--n-max", "99"}).code == cli::kUsage);
}

TEST_CASE("catalog") {
  const Run c = run({"catalog"});
  CHECK(c.code == cli::kOk);
  CHECK(c.out.find("MNS  [syntactic]") != std::string::npos);
  CHECK(c.out.find("F=P  [semantic]") != std::string::npos);
  CHECK(c.out.find("(needs --target)") != std::string::npos);
  CHECK(c.out.find("  T7  ") != std::string::npos);
}
