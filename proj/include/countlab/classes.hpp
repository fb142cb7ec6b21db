#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "countlab/counting.hpp"

namespace countlab {

// Syntactic: accept and reject criteria partition every profile.
// Semantic: they are disjoint, and profiles outside both break the promise.
enum class ClassKind { Syntactic, Semantic };

enum class Verdict { Accept, Reject, PromiseViolated };

const char* to_string(Verdict verdict);
const char* to_string(ClassKind kind);

enum class AuxKind { Target, GapTarget, FewBound, AmbiguityBound, Margin };

const char* to_string(AuxKind kind);

// Per-instance parameters some criteria need. Polynomials and FP functions
// are supplied as their value on the instance at hand.
struct AuxParams {
  std::optional<BigInt> target;           // f(x) for F=P
  std::optional<BigInt> gap_target;       // g(x) for WPP
  std::optional<BigInt> few_bound;        // q(x) for FewP
  std::optional<BigInt> ambiguity_bound;  // k for UP_O(k)
  std::optional<BigInt> margin;           // epsilon for RP/BPP

  const std::optional<BigInt>& get(AuxKind kind) const;
  std::optional<BigInt>& get(AuxKind kind);
};

using ProfilePredicate =
    std::function<bool(const CountProfile&, const AuxParams&)>;

struct ClassSpec {
  std::string name;
  ClassKind kind = ClassKind::Syntactic;
  // The acceptance/rejection criteria in words.
  std::string criterion;
  std::vector<AuxKind> required;
  ProfilePredicate accept;
  // For syntactic specs this is always the negation of `accept`.
  ProfilePredicate reject;
  AuxParams aux;

  ClassSpec with(AuxKind kind, BigInt value) const;
};

// Throws ConfigurationError when a required or supplied aux parameter is
// missing or out of its legal range.
Verdict classify(const CountProfile& profile, const ClassSpec& spec);

// The 17 built-in criteria, in a fixed order.
const std::vector<ClassSpec>& spec_catalog();

// Looks a spec up by name; also accepts "⊕P", "+P" and "CeqP" aliases.
std::optional<ClassSpec> find_class(std::string_view name);

// "accepted >= 1": the satisfiability side of NP, for containment scans.
ClassSpec satisfiability_spec();

// Every profile with path exponent <= p_max on which `inner` accepts but
// `outer` does not. An empty result certifies the containment at this scale.
std::vector<CountProfile> containment_witness_scan(const ClassSpec& outer,
                                                   const ClassSpec& inner,
                                                   std::uint32_t p_max);

}  // namespace countlab
