#include <doctest.h>

#include <set>

#include "countlab/classes.hpp"
#include "countlab/errors.hpp"

using namespace countlab;

namespace {

ClassSpec get(std::string_view name) {
  auto spec = find_class(name);
  REQUIRE(spec.has_value());
  return *spec;
}

// Every spec with its aux slots filled by sample values.
std::vector<ClassSpec> configured_catalog(const BigInt& margin = 1) {
  std::vector<ClassSpec> out;
  for (const ClassSpec& s : spec_catalog()) {
    ClassSpec c = s;
    c.aux.target = 3;
    c.aux.gap_target = 4;
    c.aux.few_bound = 2;
    c.aux.ambiguity_bound = 2;
    if (c.name == "RP" || c.name == "BPP") c.aux.margin = margin;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

TEST_CASE("classify examples") {
  CHECK(classify(CountProfile::make(7, 4), get("MNS")) == Verdict::Accept);
  CHECK(classify(CountProfile::make(8, 4), get("C=P")) == Verdict::Accept);
  CHECK(classify(CountProfile::make(5, 4), get("MNP")) == Verdict::PromiseViolated);
  CHECK(classify(CountProfile::make(1, 3), get("EP")) == Verdict::Accept);
  CHECK(classify(CountProfile::make(1, 3), get("MNP")) == Verdict::Accept);
  CHECK(classify(CountProfile::make(0, 3), get("MNP")) == Verdict::Reject);
  CHECK(classify(CountProfile::make(0, 3), get("MNS")) == Verdict::Reject);
  CHECK(classify(CountProfile::make(3, 2), get("PP")) == Verdict::Accept);
  CHECK(classify(CountProfile::make(2, 2), get("PP")) == Verdict::Reject);
  CHECK(classify(CountProfile::make(3, 2), get("SPP")) == Verdict::Accept);
  CHECK(classify(CountProfile::make(1, 2), get("SPP")) == Verdict::PromiseViolated);
  CHECK(classify(CountProfile::make(1, 0), get("C=P")) == Verdict::Reject);
}

TEST_CASE("catalog shape") {
  const auto& catalog = spec_catalog();
  REQUIRE(catalog.size() == 17);
  const std::vector<std::string> names{"UP", "UP_O(k)", "FewP", "EP", "Half_P", "C=P",
                                       "ES", "PP", "US", "ParityP", "RP", "BPP",
                                       "SPP", "WPP", "MNS", "MNP", "F=P"};
  const std::set<std::string> syntactic{"C=P", "ES", "PP", "US", "ParityP", "MNS"};
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    CHECK(catalog[i].name == names[i]);
    CHECK(catalog[i].kind ==
          (syntactic.count(names[i]) ? ClassKind::Syntactic : ClassKind::Semantic));
    CHECK_FALSE(catalog[i].criterion.empty());
  }
  CHECK(get("⊕P").name == "ParityP");
  CHECK(get("+P").name == "ParityP");
  CHECK(get("CeqP").name == "C=P");
  CHECK_FALSE(find_class("NQP").has_value());
}

TEST_CASE("missing or illegal aux parameters") {
  const CountProfile p = CountProfile::make(1, 2);
  CHECK_THROWS_AS(classify(p, get("F=P")), ConfigurationError);
  CHECK_THROWS_AS(classify(p, get("WPP")), ConfigurationError);
  CHECK_THROWS_AS(classify(p, get("FewP")), ConfigurationError);
  CHECK_THROWS_AS(classify(p, get("UP_O(k)")), ConfigurationError);
  CHECK_THROWS_AS(classify(p, get("F=P").with(AuxKind::Target, 0)), ConfigurationError);
  CHECK_THROWS_AS(classify(p, get("WPP").with(AuxKind::GapTarget, 0)), ConfigurationError);
  CHECK_THROWS_AS(classify(p, get("UP_O(k)").with(AuxKind::AmbiguityBound, 1)),
                  ConfigurationError);
  CHECK_THROWS_AS(classify(p, get("RP").with(AuxKind::Margin, 0)), ConfigurationError);
  CHECK(classify(p, get("F=P").with(AuxKind::Target, 1)) == Verdict::Accept);
  CHECK(classify(p, get("WPP").with(AuxKind::GapTarget, -2)) == Verdict::Accept);
}

TEST_CASE("margins on RP and BPP") {
  const ClassSpec rp = get("RP").with(AuxKind::Margin, 2);
  const ClassSpec bpp = get("BPP").with(AuxKind::Margin, 2);
  CHECK(classify(CountProfile::make(10, 4), rp) == Verdict::Accept);
  CHECK(classify(CountProfile::make(9, 4), rp) == Verdict::PromiseViolated);
  CHECK(classify(CountProfile::make(0, 4), rp) == Verdict::Reject);
  CHECK(classify(CountProfile::make(6, 4), bpp) == Verdict::Reject);
  CHECK(classify(CountProfile::make(7, 4), bpp) == Verdict::PromiseViolated);
  CHECK(classify(CountProfile::make(8, 4), bpp) == Verdict::PromiseViolated);
  CHECK(classify(CountProfile::make(9, 4), get("BPP")) == Verdict::Accept);
  CHECK(classify(CountProfile::make(8, 4), get("BPP")) == Verdict::PromiseViolated);
}

TEST_CASE("syntactic specs are total, semantic specs disjoint") {
  for (const BigInt& margin : {BigInt(1), BigInt(3)}) {
    for (const ClassSpec& s : configured_catalog(margin)) {
      for (std::uint32_t p = 0; p <= 12; ++p) {
        for (std::uint64_t a = 0; a <= (1ULL << p); ++a) {
          const CountProfile profile{BigInt(a), p};
          const bool acc = s.accept(profile, s.aux);
          const bool rej = s.reject(profile, s.aux);
          if (acc && rej) FAIL(s.name << " overlaps at a=" << a << " p=" << p);
          if (s.kind == ClassKind::Syntactic && !(acc || rej)) {
            FAIL(s.name << " not total at a=" << a << " p=" << p);
          }
        }
      }
    }
  }
}

TEST_CASE("EP and MNP meet exactly in UP; MNP accepts only odd counts") {
  const ClassSpec ep = get("EP"), mnp = get("MNP"), up = get("UP"),
                  parity = get("ParityP");
  for (std::uint64_t a = 0; a <= (1ULL << 20); ++a) {
    const CountProfile profile{BigInt(a), 20};
    const bool both = classify(profile, ep) == Verdict::Accept &&
                      classify(profile, mnp) == Verdict::Accept;
    if (both != (classify(profile, up) == Verdict::Accept)) FAIL("EP/MNP/UP at " << a);
    if (classify(profile, mnp) == Verdict::Accept &&
        classify(profile, parity) != Verdict::Accept) {
      FAIL("MNP accepts even count " << a);
    }
  }
}

TEST_CASE("containment scans") {
  CHECK(containment_witness_scan(get("EP"), get("UP"), 10).empty());
  CHECK(containment_witness_scan(get("MNS"), get("US"), 10).empty());
  CHECK(containment_witness_scan(get("ParityP"), get("MNP"), 10).empty());

  const auto w = containment_witness_scan(get("MNP"), get("EP"), 6);
  bool has_four = false;
  for (const CountProfile& p : w) has_four |= p.accepted == 4;
  CHECK(has_four);

  // UP within UP_O(2) within FewP within EP, at q = k = 2.
  const ClassSpec upk = get("UP_O(k)").with(AuxKind::AmbiguityBound, 2);
  const ClassSpec fewp = get("FewP").with(AuxKind::FewBound, 2);
  CHECK(containment_witness_scan(upk, get("UP"), 8).empty());
  CHECK(containment_witness_scan(fewp, upk, 8).empty());
  CHECK(containment_witness_scan(get("EP"), fewp, 8).empty());
  // At q = 3 the last step fails on three accepting paths.
  const auto three = containment_witness_scan(
      get("EP"), get("FewP").with(AuxKind::FewBound, 3), 4);
  REQUIRE_FALSE(three.empty());
  CHECK(three.front().accepted == 3);

  CHECK(containment_witness_scan(satisfiability_spec(), get("MNP"), 8).empty());
  CHECK_THROWS_AS(containment_witness_scan(get("EP"), get("UP"), 21), ContractViolation);
}
