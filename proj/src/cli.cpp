#include "countlab/cli.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "countlab/classes.hpp"
#include "countlab/counting.hpp"
#include "countlab/errors.hpp"
#include "countlab/formula.hpp"
#include "countlab/gadgets.hpp"
#include "countlab/reductions.hpp"
#include "countlab/verify.hpp"

namespace countlab::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::map<std::string, Engine> kEngines{
    {"bruteforce", Engine::Bruteforce},
    {"enumerate", Engine::Enumerate},
    {"dpll", Engine::Dpll},
};

BigInt parse_big(const std::string& flag, const std::string& text) {
  const bool digits =
      !text.empty() &&
      std::all_of(text.begin() + (text[0] == '-' ? 1 : 0), text.end(),
                  [](unsigned char ch) { return std::isdigit(ch); }) &&
      text != "-";
  if (!digits) throw UsageError(flag + ": not an integer: " + text);
  return BigInt(text);
}

std::uint32_t parse_small(const std::string& flag, const std::string& text) {
  const BigInt v = parse_big(flag, text);
  if (v < 0 || v > 1'000'000) throw UsageError(flag + ": out of range: " + text);
  return v.convert_to<std::uint32_t>();
}

CnfFormula load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  return parse_dimacs(in);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

std::string catalog_listing() {
  std::ostringstream out;
  for (const ClassSpec& s : spec_catalog()) {
    out << s.name << "  [" << to_string(s.kind) << "]  " << s.criterion;
    if (!s.required.empty()) {
      out << "  (needs";
      for (AuxKind k : s.required) out << " --" << to_string(k);
      out << ')';
    }
    out << '\n';
  }
  return out.str();
}

struct Options {
  std::string path;
  std::string engine = "dpll";
  std::string class_name;
  std::map<AuxKind, std::string> aux;
  std::string construction;
  std::vector<std::string> params;
  std::string suite;
  std::optional<std::uint32_t> n_max;
  std::uint64_t seed = 0;
  std::size_t corpus_size = 200;
  std::string out_path;
  std::string report_path;
  bool with_time = false;
};

Engine engine_of(const Options& o) {
  const auto it = kEngines.find(o.engine);
  if (it == kEngines.end()) throw UsageError("unknown engine " + o.engine);
  return it->second;
}

// ---------------------------------------------------------------------------

// Paths are the machine's own variables when the file records its shape.
CountProfile machine_profile(const Options& o) {
  const GadgetResult m = read_machine(load(o.path));
  return m.profile(count_models(m.formula, engine_of(o)).accepted);
}

int cmd_count(const Options& o, std::ostream& out) {
  out << to_string(machine_profile(o)) << '\n';
  return kOk;
}

int cmd_classify(const Options& o, std::ostream& out, std::ostream& err) {
  std::optional<ClassSpec> spec = find_class(o.class_name);
  if (!spec) {
    err << "unknown class " << o.class_name << "; catalog:\n" << catalog_listing();
    return kUsage;
  }
  for (const auto& [kind, text] : o.aux) {
    *spec = spec->with(kind, parse_big(std::string("--") + to_string(kind), text));
  }
  const CountProfile profile = machine_profile(o);
  out << to_string(profile) << '\n' << to_string(classify(profile, *spec)) << '\n';
  return kOk;
}

class Params {
 public:
  explicit Params(const std::vector<std::string>& raw) {
    for (const std::string& p : raw) {
      const auto eq = p.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw UsageError("--param expects name=value, got " + p);
      }
      values_[p.substr(0, eq)] = p.substr(eq + 1);
    }
  }

  std::optional<std::string> take(const std::string& name) {
    const auto it = values_.find(name);
    if (it == values_.end()) return std::nullopt;
    std::string v = it->second;
    values_.erase(it);
    return v;
  }

  BigInt big(const std::string& name, std::optional<BigInt> fallback = std::nullopt) {
    if (auto v = take(name)) return parse_big("param " + name, *v);
    if (!fallback) throw UsageError("missing --param " + name + "=...");
    return *fallback;
  }

  std::uint32_t small(const std::string& name,
                      std::optional<std::uint32_t> fallback = std::nullopt) {
    if (auto v = take(name)) return parse_small("param " + name, *v);
    if (!fallback) throw UsageError("missing --param " + name + "=...");
    return *fallback;
  }

  void finish(const std::string& construction) const {
    if (values_.empty()) return;
    throw UsageError(construction + " does not take param " + values_.begin()->first);
  }

 private:
  std::map<std::string, std::string> values_;
};

const std::vector<std::string> kConstructions{
    "multiply_mersenne", "add_const",       "complement",    "pad_pow2",
    "fewp_to_mnp",       "us_to_mns",       "cequal_to_mns", "majority_np_mns",
    "parity_np_mns",     "mns_to_cequal"};

int emit_trace(const Options& o, const std::string& text, const nlohmann::json& json,
               std::ostream& out) {
  out << text;
  if (!o.report_path.empty()) write_file(o.report_path, json.dump(2) + "\n");
  return kOk;
}

int cmd_transform(const Options& o, std::ostream& out, std::ostream& err) {
  const std::string& name = o.construction;
  if (std::find(kConstructions.begin(), kConstructions.end(), name) ==
      kConstructions.end()) {
    err << "unknown construction " << name << "; known:";
    for (const auto& c : kConstructions) err << ' ' << c;
    err << '\n';
    return kUsage;
  }
  const GadgetResult input = read_machine(load(o.path));
  const CnfFormula& f = input.formula;
  const bool plain = input.machine_vars == f.num_vars();
  Params params(o.params);
  const Engine engine = engine_of(o);
  auto require_plain = [&] {
    if (!plain) throw UsageError(name + " needs a formula without auxiliary variables");
  };

  if (name == "majority_np_mns" || name == "parity_np_mns") {
    require_plain();
    params.finish(name);
    const Oracle oracle = mersenne_oracle(engine);
    const OracleTrace t =
        name == "majority_np_mns" ? majority_np_mns(f, oracle) : parity_np_mns(f, oracle);
    return emit_trace(o, to_text(t), to_json(t), out);
  }
  if (name == "mns_to_cequal") {
    require_plain();
    params.finish(name);
    const DttOutcome d = dtt_evaluate(mns_to_cequal(f), equal_oracle(engine));
    std::ostringstream text;
    for (const OracleQuery& q : d.queries) {
      text << "query " << q.parameter << '=' << q.value << " digest="
           << digest_hex(q.query.formula) << " count=" << q.answer.profile.accepted
           << " width=" << q.query.machine_vars
           << " answer=" << (q.answer.yes ? "YES" : "NO") << '\n';
    }
    text << "decision: " << (d.accepted ? "YES" : "NO") << '\n';
    return emit_trace(o, text.str(), to_json(d), out);
  }

  GadgetResult g = [&] {
    if (name == "multiply_mersenne") return multiply_mersenne(input, params.small("t", 1));
    if (name == "add_const") {
      const BigInt c = params.big("c");
      return add_const(input, c, params.small("width", input.machine_vars));
    }
    if (name == "complement") return complement(input);
    if (name == "pad_pow2") return pad_pow2(input, params.small("k", 1));
    require_plain();
    if (name == "fewp_to_mnp") {
      std::optional<std::uint32_t> q;
      if (auto it = o.aux.find(AuxKind::FewBound); it != o.aux.end()) {
        q = parse_small("--q-bound", it->second);
      }
      return fewp_to_mnp(f, params.small("q", q));
    }
    if (name == "us_to_mns") return us_to_mns(f);
    return cequal_to_mns(f);
  }();
  params.finish(name);

  const std::string dimacs = emit_dimacs(g.formula.with_comment(machine_comment(g)));
  std::ostream& summary = o.out_path.empty() ? err : out;
  if (o.out_path.empty()) {
    out << dimacs;
  } else {
    write_file(o.out_path, dimacs);
  }
  summary << "count: " << g.count.to_string() << '\n'
          << "machine_vars: " << g.machine_vars << '\n'
          << "num_vars: " << g.formula.num_vars() << '\n'
          << "digest: " << digest_hex(g.formula) << '\n';
  if (!o.report_path.empty()) {
    nlohmann::json j{{"construction", name},
                     {"params", o.params},
                     {"count_expression", g.count.to_string()},
                     {"machine_vars", g.machine_vars},
                     {"num_vars", g.formula.num_vars()},
                     {"num_clauses", g.formula.num_clauses()},
                     {"digest", digest_hex(g.formula)}};
    write_file(o.report_path, j.dump(2) + "\n");
  }
  return kOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  std::vector<std::string> ids;
  if (o.suite == "all") {
    ids = suite_ids();
  } else {
    ids.push_back(o.suite);
  }
  VerifyOptions vo;
  vo.n_max = o.n_max;
  vo.seed = o.seed;
  vo.corpus_size = o.corpus_size;
  bool passed = true;
  nlohmann::json reports = nlohmann::json::array();
  for (const std::string& id : ids) {
    const VerificationReport r = run_suite(id, vo);
    out << to_text(r);
    if (o.with_time) out << "wall: " << r.wall_seconds << " s\n";
    reports.push_back(to_json(r, o.with_time));
    passed = passed && r.passed();
  }
  if (!o.report_path.empty()) {
    const nlohmann::json j = ids.size() == 1 ? reports[0] : reports;
    write_file(o.report_path, j.dump(2) + "\n");
  }
  return passed ? kOk : kVerificationFailed;
}

int cmd_catalog(std::ostream& out) {
  out << catalog_listing();
  out << "\nverification suites:\n";
  for (const std::string& id : suite_ids()) {
    out << "  " << id << "  " << suite_description(id) << '\n';
  }
  return kOk;
}

void add_engine(CLI::App* cmd, Options& o) {
  cmd->add_option("--engine", o.engine, "bruteforce, enumerate or dpll")
      ->check(CLI::IsMember({"bruteforce", "enumerate", "dpll"}));
}

void add_aux(CLI::App* cmd, Options& o) {
  for (AuxKind k : {AuxKind::Target, AuxKind::GapTarget, AuxKind::FewBound,
                    AuxKind::AmbiguityBound, AuxKind::Margin}) {
    cmd->add_option_function<std::string>(
        std::string("--") + to_string(k),
        [&o, k](const std::string& v) { o.aux[k] = v; },
        std::string("value for ") + to_string(k));
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"countlab: model counting around Mersenne-number acceptance"};
  app.name("countlab");
  app.require_subcommand(1);
  Options o;

  auto* count = app.add_subcommand("count", "print the model count of a DIMACS file");
  count->add_option("path", o.path, "DIMACS CNF file")->required();
  add_engine(count, o);

  auto* cls = app.add_subcommand("classify", "judge a formula's profile against a class");
  cls->add_option("path", o.path, "DIMACS CNF file")->required();
  cls->add_option("--class", o.class_name, "class name, see `catalog`")->required();
  add_engine(cls, o);
  add_aux(cls, o);

  auto* tr = app.add_subcommand("transform", "apply a construction to a formula");
  tr->add_option("construction", o.construction, "construction name")->required();
  tr->add_option("path", o.path, "DIMACS CNF file")->required();
  tr->add_option("--param", o.params, "construction parameter name=value");
  tr->add_option("--out", o.out_path, "where to write the output DIMACS");
  tr->add_option("--report", o.report_path, "structured JSON report");
  add_engine(tr, o);
  add_aux(tr, o);

  auto* ver = app.add_subcommand("verify", "run a verification suite");
  ver->add_option("suite", o.suite, "suite id or `all`")->required();
  ver->add_option("--n-max", o.n_max, "largest size parameter");
  ver->add_option("--seed", o.seed, "corpus seed");
  ver->add_option("--corpus-size", o.corpus_size, "formulas per corpus");
  ver->add_option("--report", o.report_path, "structured JSON report");
  ver->add_flag("--time", o.with_time, "include wall time in the output");

  auto* cat = app.add_subcommand("catalog", "list classes and verification suites");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (count->parsed()) return cmd_count(o, out);
    if (cls->parsed()) return cmd_classify(o, out, err);
    if (tr->parsed()) return cmd_transform(o, out, err);
    if (ver->parsed()) return cmd_verify(o, out);
    if (cat->parsed()) return cmd_catalog(out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParseError;
  } catch (const FormulaError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParseError;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConfigurationError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ContractViolation& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const EnumerationRefused& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace countlab::cli
