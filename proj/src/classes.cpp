#include "countlab/classes.hpp"

#include "countlab/errors.hpp"

namespace countlab {

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Accept:
      return "Accept";
    case Verdict::Reject:
      return "Reject";
    case Verdict::PromiseViolated:
      return "PromiseViolated";
  }
  return "?";
}

const char* to_string(ClassKind kind) {
  return kind == ClassKind::Syntactic ? "syntactic" : "semantic";
}

const char* to_string(AuxKind kind) {
  switch (kind) {
    case AuxKind::Target:
      return "target";
    case AuxKind::GapTarget:
      return "gap-target";
    case AuxKind::FewBound:
      return "q-bound";
    case AuxKind::AmbiguityBound:
      return "k-bound";
    case AuxKind::Margin:
      return "epsilon";
  }
  return "?";
}

const std::optional<BigInt>& AuxParams::get(AuxKind kind) const {
  switch (kind) {
    case AuxKind::Target:
      return target;
    case AuxKind::GapTarget:
      return gap_target;
    case AuxKind::FewBound:
      return few_bound;
    case AuxKind::AmbiguityBound:
      return ambiguity_bound;
    case AuxKind::Margin:
      return margin;
  }
  throw ContractViolation("unknown aux kind");
}

std::optional<BigInt>& AuxParams::get(AuxKind kind) {
  return const_cast<std::optional<BigInt>&>(std::as_const(*this).get(kind));
}

ClassSpec ClassSpec::with(AuxKind kind, BigInt value) const {
  ClassSpec copy = *this;
  copy.aux.get(kind) = std::move(value);
  return copy;
}

namespace {

// Half of the paths is 2^(p-1); compare 2*accepted with 2^p to stay integral
// at p = 0.
BigInt twice(const CountProfile& p) { return 2 * p.accepted; }

bool zero(const CountProfile& p, const AuxParams&) { return p.accepted == 0; }

BigInt gap(const CountProfile& p) { return gap_value(p).gap; }

ClassSpec syntactic(std::string name, std::string criterion,
                    ProfilePredicate accept,
                    std::vector<AuxKind> required = {}) {
  ClassSpec s;
  s.name = std::move(name);
  s.kind = ClassKind::Syntactic;
  s.criterion = std::move(criterion);
  s.required = std::move(required);
  s.accept = accept;
  s.reject = [accept](const CountProfile& p, const AuxParams& aux) {
    return !accept(p, aux);
  };
  return s;
}

ClassSpec semantic(std::string name, std::string criterion,
                   ProfilePredicate accept, ProfilePredicate reject,
                   std::vector<AuxKind> required = {}) {
  ClassSpec s;
  s.name = std::move(name);
  s.kind = ClassKind::Semantic;
  s.criterion = std::move(criterion);
  s.required = std::move(required);
  s.accept = std::move(accept);
  s.reject = std::move(reject);
  return s;
}

// Strict majority, or at least half + epsilon when a margin is supplied.
bool above_half(const CountProfile& p, const AuxParams& aux) {
  if (aux.margin) return twice(p) >= p.total_paths() + 2 * *aux.margin;
  return twice(p) > p.total_paths();
}

bool below_half(const CountProfile& p, const AuxParams& aux) {
  if (aux.margin) return twice(p) <= p.total_paths() - 2 * *aux.margin;
  return twice(p) < p.total_paths();
}

std::vector<ClassSpec> build_catalog() {
  using P = const CountProfile&;
  using A = const AuxParams&;
  std::vector<ClassSpec> c;
  c.push_back(semantic(
      "UP", "accept: #acc = 1; reject: #acc = 0",
      [](P p, A) { return p.accepted == 1; }, zero));
  c.push_back(semantic(
      "UP_O(k)", "accept: 1 <= #acc <= k (k > 1); reject: #acc = 0",
      [](P p, A a) { return p.accepted >= 1 && p.accepted <= *a.ambiguity_bound; },
      zero, {AuxKind::AmbiguityBound}));
  c.push_back(semantic(
      "FewP", "accept: 1 <= #acc <= q(x); reject: #acc = 0",
      [](P p, A a) { return p.accepted >= 1 && p.accepted <= *a.few_bound; },
      zero, {AuxKind::FewBound}));
  c.push_back(semantic(
      "EP", "accept: #acc = 2^t, t >= 0; reject: #acc = 0",
      [](P p, A) { return is_power_of_two(p.accepted); }, zero));
  c.push_back(semantic(
      "Half_P", "accept: #acc = 2^(p-1); reject: #acc = 0",
      [](P p, A) { return twice(p) == p.total_paths(); }, zero));
  c.push_back(syntactic(
      "C=P", "accept iff #acc = 2^(p-1)",
      [](P p, A) { return twice(p) == p.total_paths(); }));
  c.push_back(syntactic(
      "ES", "accept iff #acc = 2^t, t >= 0",
      [](P p, A) { return is_power_of_two(p.accepted); }));
  c.push_back(syntactic(
      "PP", "accept iff #acc > 2^(p-1)",
      [](P p, A) { return twice(p) > p.total_paths(); }));
  c.push_back(syntactic(
      "US", "accept iff #acc = 1", [](P p, A) { return p.accepted == 1; }));
  c.push_back(syntactic(
      "ParityP", "accept iff #acc is odd",
      [](P p, A) { return boost::multiprecision::bit_test(p.accepted, 0); }));
  c.push_back(semantic(
      "RP",
      "accept: #acc > 2^(p-1) (or >= 2^(p-1) + epsilon); reject: #acc = 0",
      above_half, zero));
  c.push_back(semantic(
      "BPP",
      "accept: #acc > 2^(p-1); reject: #acc < 2^(p-1) (margins +/- epsilon)",
      above_half, below_half));
  c.push_back(semantic(
      "SPP", "accept: gap = 2; reject: gap = 0, gap = #acc - #rej",
      [](P p, A) { return gap(p) == 2; }, [](P p, A) { return gap(p) == 0; }));
  c.push_back(semantic(
      "WPP", "accept: gap = g(x) (g != 0); reject: gap = 0",
      [](P p, A a) { return gap(p) == *a.gap_target; },
      [](P p, A) { return gap(p) == 0; }, {AuxKind::GapTarget}));
  c.push_back(syntactic(
      "MNS", "accept iff #acc = 2^t - 1, t >= 1",
      [](P p, A) { return is_mersenne(p.accepted); }));
  c.push_back(semantic(
      "MNP", "accept: #acc = 2^t - 1, t >= 1; reject: #acc = 0",
      [](P p, A) { return is_mersenne(p.accepted); }, zero));
  c.push_back(semantic(
      "F=P", "accept: #acc = f(x) (f >= 1); reject: #acc = 0",
      [](P p, A a) { return p.accepted == *a.target; }, zero,
      {AuxKind::Target}));
  return c;
}

void check_aux(const ClassSpec& spec) {
  for (AuxKind kind : spec.required) {
    if (!spec.aux.get(kind)) {
      throw ConfigurationError(spec.name + " needs --" + to_string(kind));
    }
  }
  auto bad = [&](AuxKind kind, const char* rule) {
    throw ConfigurationError(spec.name + ": " + to_string(kind) + " " + rule);
  };
  const AuxParams& a = spec.aux;
  if (a.target && *a.target < 1) bad(AuxKind::Target, "must be >= 1");
  if (a.gap_target && *a.gap_target == 0) bad(AuxKind::GapTarget, "must be nonzero");
  if (a.few_bound && *a.few_bound < 1) bad(AuxKind::FewBound, "must be >= 1");
  if (a.ambiguity_bound && *a.ambiguity_bound < 2) {
    bad(AuxKind::AmbiguityBound, "must be > 1");
  }
  if (a.margin && *a.margin < 1) bad(AuxKind::Margin, "must be >= 1");
}

}  // namespace

Verdict classify(const CountProfile& profile, const ClassSpec& spec) {
  check_aux(spec);
  if (spec.accept(profile, spec.aux)) return Verdict::Accept;
  if (spec.reject(profile, spec.aux)) return Verdict::Reject;
  if (spec.kind == ClassKind::Syntactic) {
    throw ContractViolation(spec.name + ": syntactic criteria must be total");
  }
  return Verdict::PromiseViolated;
}

const std::vector<ClassSpec>& spec_catalog() {
  static const std::vector<ClassSpec> catalog = build_catalog();
  return catalog;
}

std::optional<ClassSpec> find_class(std::string_view name) {
  if (name == "⊕P" || name == "+P") name = "ParityP";
  if (name == "CeqP") name = "C=P";
  if (name == "UPk") name = "UP_O(k)";
  for (const ClassSpec& s : spec_catalog()) {
    if (s.name == name) return s;
  }
  return std::nullopt;
}

ClassSpec satisfiability_spec() {
  return syntactic("NP", "accept iff #acc >= 1",
                   [](const CountProfile& p, const AuxParams&) {
                     return p.accepted >= 1;
                   });
}

std::vector<CountProfile> containment_witness_scan(const ClassSpec& outer,
                                                   const ClassSpec& inner,
                                                   std::uint32_t p_max) {
  if (p_max > 20) throw ContractViolation("containment scan: p_max <= 20");
  check_aux(outer);
  check_aux(inner);
  std::vector<CountProfile> witnesses;
  for (std::uint32_t p = 0; p <= p_max; ++p) {
    const std::uint64_t total = 1ULL << p;
    for (std::uint64_t a = 0; a <= total; ++a) {
      CountProfile profile{BigInt(a), p};
      if (classify(profile, inner) == Verdict::Accept &&
          classify(profile, outer) != Verdict::Accept) {
        witnesses.push_back(std::move(profile));
      }
    }
  }
  return witnesses;
}

}  // namespace countlab
