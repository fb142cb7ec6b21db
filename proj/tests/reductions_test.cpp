#include <doctest.h>

#include "countlab/errors.hpp"
#include "countlab/reductions.hpp"
#include "oracles.hpp"

using namespace countlab;
using oracle::with_models;

namespace {

BigInt enumerate(const GadgetResult& g) { return count_enumerate(g.formula).accepted; }

// Answers YES on the calls listed in `yes_on` (0-based), NO otherwise.
Oracle scripted(std::vector<int> yes_on, int* calls) {
  return [yes_on = std::move(yes_on), calls](const GadgetResult& q) {
    const int call = (*calls)++;
    bool yes = false;
    for (int c : yes_on) yes = yes || c == call;
    return OracleAnswer{CountProfile::make(0, q.machine_vars), yes};
  };
}

}  // namespace

TEST_CASE("fewp_to_mnp examples") {
  CHECK(enumerate(fewp_to_mnp(with_models(2, 0), 3)) == 0);
  CHECK(enumerate(fewp_to_mnp(with_models(2, 3), 3)) == 7);
  CHECK(enumerate(fewp_to_mnp(with_models(3, 2), 5)) == 3);
  const GadgetResult g = fewp_to_mnp(with_models(2, 1), 4);
  CHECK(g.machine_vars == 12);
  CHECK(g.formula.comments().back() == "countlab: construction=fewp_to_mnp params=q=4");
  CHECK_THROWS_AS(fewp_to_mnp(with_models(2, 1), 0), ContractViolation);
}

TEST_CASE("fewp_to_mnp counts subsets of size 1..q") {
  for (std::uint32_t q = 1; q <= 4; ++q) {
    for (std::uint64_t a = 0; a <= 4; ++a) {
      const GadgetResult g = fewp_to_mnp(with_models(2, a), q);
      const BigInt models = enumerate(g);
      CHECK(models == g.count(a));
      CHECK(count_dpll(g.formula).accepted == models);
      if (a <= q) CHECK(models == pow2(static_cast<std::uint32_t>(a)) - 1);
    }
  }
  // Larger block counts, where the ordered enumerator gets expensive.
  const GadgetResult g = fewp_to_mnp(with_models(4, 6), 6);
  CHECK(count_dpll(g.formula).accepted == 63);
}

TEST_CASE("us_to_mns") {
  const GadgetResult one = us_to_mns(with_models(3, 1));
  CHECK(oracle::count_by_evaluation(one.formula) == 7);
  CHECK(is_mersenne(7));
  const GadgetResult two = us_to_mns(with_models(3, 2));
  CHECK(oracle::count_by_evaluation(two.formula) == 14);
  CHECK_FALSE(is_mersenne(14));
  for (std::uint64_t a = 0; a <= 8; ++a) {
    const BigInt models = oracle::count_by_evaluation(us_to_mns(with_models(3, a)).formula);
    CHECK(is_mersenne(models) == (a == 1));
  }
}

TEST_CASE("majority_np_mns") {
  const OracleTrace five = majority_np_mns(with_models(3, 5), mersenne_oracle());
  CHECK(five.verdict == Verdict::Accept);
  CHECK(five.gate_satisfiable == true);
  CHECK(five.queries.size() == 4);

  const OracleTrace four = majority_np_mns(with_models(3, 4), mersenne_oracle());
  CHECK(four.verdict == Verdict::Reject);
  for (const OracleQuery& q : four.queries) {
    CHECK_FALSE(q.answer.yes);
    CHECK(q.answer.profile.accepted == 4 + 7 + q.value);
    CHECK(q.query.machine_vars == 5);
  }

  const OracleTrace none = majority_np_mns(with_models(3, 0), mersenne_oracle());
  CHECK(none.verdict == Verdict::Reject);
  CHECK(none.gate_satisfiable == false);
  CHECK(none.queries.empty());

  CHECK_THROWS_AS(majority_np_mns(with_models(1, 1), mersenne_oracle()), ContractViolation);
}

TEST_CASE("majority_np_mns agrees with strict majority") {
  for (std::uint32_t n = 2; n <= 4; ++n) {
    for (std::uint64_t a = 0; a <= (1ULL << n); ++a) {
      const OracleTrace t = majority_np_mns(with_models(n, a), mersenne_oracle());
      CHECK((t.verdict == Verdict::Accept) == (2 * a > (1ULL << n)));
    }
  }
}

TEST_CASE("parity_np_mns") {
  CHECK(parity_np_mns(with_models(2, 3), mersenne_oracle()).verdict == Verdict::Accept);
  CHECK(parity_np_mns(with_models(2, 2), mersenne_oracle()).verdict == Verdict::Reject);
  const OracleTrace zero = parity_np_mns(with_models(2, 0), mersenne_oracle());
  CHECK(zero.verdict == Verdict::Reject);
  CHECK_FALSE(zero.gate_satisfiable.has_value());
  CHECK(zero.queries.size() == 2);
  for (std::uint32_t n = 1; n <= 4; ++n) {
    for (std::uint64_t a = 0; a <= (1ULL << n); ++a) {
      const OracleTrace t = parity_np_mns(with_models(n, a), mersenne_oracle());
      CHECK((t.verdict == Verdict::Accept) == (a % 2 == 1));
    }
  }
}

TEST_CASE("mnp_in_parity_check") {
  const ParityAgreement seven = mnp_in_parity_check(CountProfile::make(7, 3));
  CHECK(seven.mnp == Verdict::Accept);
  CHECK(seven.parity == Verdict::Accept);
  CHECK(seven.agree);
  const ParityAgreement zero = mnp_in_parity_check(CountProfile::make(0, 3));
  CHECK(zero.mnp == Verdict::Reject);
  CHECK(zero.parity == Verdict::Reject);
  CHECK(zero.agree);
  const ParityAgreement six = mnp_in_parity_check(CountProfile::make(6, 3));
  CHECK(six.mnp == Verdict::PromiseViolated);
  CHECK(six.promise_violated);
  CHECK_FALSE(six.agree);
}

TEST_CASE("cequal_to_mns at n = 3") {
  const GadgetResult half = cequal_to_mns(with_models(4, 8));
  CHECK(half.machine_vars == 8);
  CHECK(enumerate(half) == 127);
  CHECK(half.count(8) == 127);
  CHECK(enumerate(cequal_to_mns(with_models(4, 7))) == 121);
  CHECK(enumerate(cequal_to_mns(with_models(4, 16))) == 175);
  CHECK(half.count.to_string() == "6*a + 79");
  for (std::uint64_t a = 0; a <= 16; ++a) {
    const BigInt models = enumerate(cequal_to_mns(with_models(4, a)));
    CHECK(is_mersenne(models) == (a == 8));
  }
}

TEST_CASE("cequal_to_mns at n = 1 collapses to a constant") {
  // The multiplier 2^n - 2 vanishes, so every F on two variables gets 7.
  for (std::uint64_t a = 0; a <= 4; ++a) {
    CHECK(enumerate(cequal_to_mns(with_models(2, a))) == 7);
  }
  CHECK_THROWS_AS(cequal_to_mns(with_models(1, 1)), ContractViolation);
}

TEST_CASE("mns_to_cequal at n = 3") {
  auto answers = [](std::uint64_t a) {
    const DttOutcome out = dtt_evaluate(mns_to_cequal(with_models(3, a)), equal_oracle());
    std::vector<bool> yes;
    for (const OracleQuery& q : out.queries) yes.push_back(q.answer.yes);
    REQUIRE(out.accepted == (std::find(yes.begin(), yes.end(), true) != yes.end()));
    return yes;
  };
  CHECK(answers(7) == std::vector<bool>{false, false, true});
  CHECK(answers(3) == std::vector<bool>{false, true, false});
  CHECK(answers(1) == std::vector<bool>{true, false, false});
  CHECK(answers(4) == std::vector<bool>{false, false, false});
  CHECK(answers(0) == std::vector<bool>{false, false, false});

  const DttReduction r = mns_to_cequal(with_models(3, 5));
  REQUIRE(r.queries.size() == 3);
  CHECK(r.queries[1].parameter == "i");
  CHECK(r.queries[1].value == 2);
  CHECK(r.queries[1].query.machine_vars == 4);
  CHECK(r.queries[1].query.count(5) == 5 + 8 - 4 + 1);
}

TEST_CASE("mns_to_cequal decides Mersenne counts") {
  for (std::uint32_t n = 1; n <= 5; ++n) {
    for (std::uint64_t a = 0; a <= (1ULL << n); ++a) {
      const DttOutcome out =
          dtt_evaluate(mns_to_cequal(with_models(n, a)), equal_oracle());
      CHECK(out.accepted == is_mersenne(BigInt(a)));
    }
  }
}

TEST_CASE("dtt_evaluate ORs the answers") {
  const DttReduction r = mns_to_cequal(with_models(3, 0));
  int calls = 0;
  CHECK(dtt_evaluate(r, scripted({1}, &calls)).accepted);
  CHECK(calls == 3);  // every query is asked, even after a YES
  calls = 0;
  CHECK_FALSE(dtt_evaluate(r, scripted({}, &calls)).accepted);
  CHECK_THROWS_AS(dtt_evaluate(DttReduction{}, scripted({}, &calls)), ContractViolation);
}

TEST_CASE("max_mersenne_dnf") {
  CHECK(max_mersenne_dnf(DnfFormula(2, {{1}, {2}}), unique_oracle()));
  CHECK_FALSE(max_mersenne_dnf(DnfFormula(2, {{1}}), unique_oracle()));
  CHECK_FALSE(max_mersenne_dnf(DnfFormula(2, {}), unique_oracle()));
  CHECK_FALSE(max_mersenne_dnf(DnfFormula(1, {{1}, {-1}}), unique_oracle()));
  CHECK(max_mersenne_dnf(DnfFormula(1, {{1}}), unique_oracle()));
}

TEST_CASE("trace serialization") {
  const OracleTrace t = majority_np_mns(with_models(2, 3), mersenne_oracle());
  const nlohmann::json j = to_json(t);
  CHECK(j["machine"] == "majority_np_mns");
  CHECK(j["gate_satisfiable"] == true);
  CHECK(j["verdict"] == "Accept");
  REQUIRE(j["queries"].size() == 2);
  CHECK(j["queries"][0]["parameter"] == "k");
  CHECK(j["queries"][0]["value"] == 0);
  CHECK(j["queries"][0]["count"] == "6");
  CHECK(j["queries"][1]["count"] == "7");
  CHECK(j["queries"][1]["answer"] == true);
  CHECK(j["queries"][0]["machine_vars"] == 4);
  CHECK(j["queries"][0]["digest"].get<std::string>().size() == 16);

  const std::string text = to_text(t);
  CHECK(text.find("machine: majority_np_mns\n") == 0);
  CHECK(text.find("gate: satisfiable\n") != std::string::npos);
  CHECK(text.find("count=7 width=4 answer=YES") != std::string::npos);
  CHECK(text.find("verdict: Accept\n") != std::string::npos);

  const nlohmann::json none = to_json(parity_np_mns(with_models(1, 0), mersenne_oracle()));
  CHECK(none["gate_satisfiable"].is_null());

  const nlohmann::json dtt = to_json(dtt_evaluate(mns_to_cequal(with_models(2, 3)), equal_oracle()));
  CHECK(dtt["decision"] == true);
  CHECK(dtt["queries"].size() == 2);
}
