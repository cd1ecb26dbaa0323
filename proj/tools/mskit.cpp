#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mskit/error.hpp"
#include "mskit/io.hpp"
#include "mskit/measures.hpp"
#include "mskit/surgery.hpp"
#include "mskit/verify.hpp"

#ifndef MSKIT_DATA_DIR
#define MSKIT_DATA_DIR "data"
#endif

using namespace mskit;

namespace {

enum Exit { kOk = 0, kInput = 1, kPrecondition = 2, kVerification = 3 };

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

Mode parse_mode(const std::string& s) {
  if (s == "exact") return Mode::Exact;
  if (s == "empirical") return Mode::Empirical;
  throw ParseError("unknown mode '" + s + "'");
}

EntropyMethod parse_method(const std::string& s) {
  if (s == "radius") return EntropyMethod::NegLogR;
  if (s == "truncation") return EntropyMethod::FiniteSubgraphSup;
  if (s == "root") return EntropyMethod::RootOfF;
  throw ParseError("unknown method '" + s + "'");
}

VertexId root_of(const GraphSpec& s) { return s.is_finite() ? s.finite.id(0) : s.loops.base; }

/// p_uu(0..N) at the root vertex.
std::vector<BigInt> return_counts(const GraphSpec& s, std::size_t N) {
  if (s.is_finite()) return path_counts(s.finite, root_of(s), root_of(s), N).values;
  return renewal_convolve(s.loops.counts.prefix(N), N);
}

int cmd_classify(const GraphSpec& s, const std::string& mode, std::size_t horizon) {
  const Mode m = parse_mode(mode);
  if (s.is_finite()) {
    if (!is_strongly_connected(s.finite)) throw PreconditionError("classify: the graph is not strongly connected");
    if (m == Mode::Empirical) {
      const VertexId u = root_of(s);
      emit(report("classify", to_json(classify_empirical(first_return_counts(s.finite, u, horizon),
                                                         path_counts(s.finite, u, u, horizon)))));
      return kOk;
    }
    // Finite strongly connected graphs are positive recurrent and SPR.
    const EntropyReport e = entropy(s.finite);
    Json j;
    j["class"] = to_string(VereJonesClass::PositiveRecurrent);
    j["spr"] = true;
    j["mode"] = to_string(Mode::Exact);
    if (e.radius) j["R"] = to_json(*e.radius);
    j["entropy"] = to_json(e.value);
    emit(report("classify", j));
    return kOk;
  }
  if (m == Mode::Exact) {
    emit(report("classify", to_json(classify_exact(s.loops))));
  } else {
    const CountTable f = first_return_counts(s.loops, horizon);
    CountTable p = f;
    p.kind = CountKind::P;
    p.values = renewal_convolve(f.values, horizon);
    emit(report("classify", to_json(classify_empirical(f, p))));
  }
  return kOk;
}

int cmd_entropy(const GraphSpec& s, const std::string& method, std::uint64_t max_len, const std::string& csv,
                std::size_t horizon) {
  const EntropyMethod m = parse_method(method);
  EntropyReport e = s.is_finite() ? entropy(s.finite) : entropy(s.loops, m, max_len);
  e.method = m;
  emit(report("entropy", to_json(e)));
  if (!csv.empty()) {
    const std::vector<BigInt> p = return_counts(s, horizon);
    std::ofstream file;
    if (csv != "-") {
      file.open(csv);
      if (!file) throw ParseError("cannot write " + csv);
    }
    std::ostream& out = csv == "-" ? std::cout : file;
    out << "n,value\n";
    out.precision(17);
    for (std::size_t n = 1; n < p.size(); ++n)
      if (p[n] > 0) out << n << "," << ln(p[n]) / static_cast<double>(n) << "\n";
  }
  return kOk;
}

struct SurgeryArgs {
  std::string op;
  std::string spec;
  std::string output;
  std::uint64_t loop = 1;
  std::string index = "1";
  std::size_t max_terms = 64;
  std::uint64_t horizon = 64;
  std::uint64_t n = 2;
};

int cmd_surgery(const SurgeryArgs& a) {
  GraphSpec s = load_spec(a.spec);
  if (s.is_finite()) throw PreconditionError("surgery: loop-system input required");
  SurgeryResult r;
  if (a.op == "extend-transient")
    r = transient_extension(s.loops);
  else if (a.op == "extend-recurrent")
    r = recurrent_extension(s.loops, a.max_terms);
  else if (a.op == "pad-null")
    r = null_recurrent_padding(s.loops, a.horizon);
  else if (a.op == "contract")
    r = branch_contraction(s.loops, a.loop, parse_count(a.index));
  else if (a.op == "concentrate")
    r = entropy_concentration(s.loops, a.n);
  else
    throw ParseError("unknown surgery '" + a.op + "'");

  GraphSpec out = s;
  out.loops = r.after;
  out.provenance.push_back({r.operation, r.params});
  if (!a.output.empty()) save_spec(out, a.output);
  Json j = to_json(r);
  j["spec"] = to_json(out);
  emit(report("surgery", j));
  return r.claim_verified ? kOk : kVerification;
}

std::vector<VertexId> parse_word(const std::string& text, VertexId base) {
  std::vector<VertexId> word;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok == "base")
      word.push_back(base);
    else
      word.push_back(parse_count(tok).get_ui());
  }
  return word;
}

int cmd_measure(const GraphSpec& s, const std::string& cylinder, std::uint64_t abramov_horizon) {
  if (s.is_finite()) {
    emit(report("measure", to_json(parry_measure(s.finite))));
    return kOk;
  }
  const LoopMaximalMeasure mm = loop_maximal_measure(s.loops);
  Json j = to_json(mm);
  if (!cylinder.empty()) {
    const std::vector<VertexId> word = parse_word(cylinder, s.loops.base);
    j["cylinder"] = {{"word", word}, {"measure", to_string(cylinder_measure(mm, word))}};
  }
  if (abramov_horizon > 0) {
    const AbramovReport a = abramov_check(mm, abramov_horizon);
    j["abramov"] = {{"value", a.value}, {"target", a.target}, {"deviation", a.deviation}, {"within", a.within}};
  }
  emit(report("measure", j));
  return kOk;
}

int cmd_verify(bool list, const std::string& data_dir) {
  if (list) {
    for (const std::string& n : paper_check_names()) std::cout << n << "\n";
    return kOk;
  }
  const std::vector<PaperCheck> checks = run_paper_checks(data_dir);
  bool all = true;
  std::cout << "check | expected | got | pass\n";
  for (const PaperCheck& c : checks) {
    std::cout << c.name << " | " << c.expected << " | " << c.got << " | " << (c.pass ? "PASS" : "FAIL") << "\n";
    all = all && c.pass;
  }
  std::cout << (all ? "all checks passed" : "verification failed") << "\n";
  return all ? kOk : kVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mskit: countable-state Markov shift toolkit"};
  app.require_subcommand(1);

  std::string spec, mode = "exact", method = "radius", csv, cylinder, data_dir = MSKIT_DATA_DIR;
  std::size_t horizon = 256, csv_horizon = 128;
  std::uint64_t max_len = 64, abramov = 0;
  bool list = false;

  auto* classify = app.add_subcommand("classify", "Vere-Jones classification");
  classify->add_option("spec", spec, "graph spec file")->required();
  classify->add_option("--mode", mode, "exact|empirical")->check(CLI::IsMember({"exact", "empirical"}));
  classify->add_option("--horizon", horizon, "coefficient horizon for empirical mode");

  auto* ent = app.add_subcommand("entropy", "Gurevich entropy");
  ent->add_option("spec", spec, "graph spec file")->required();
  ent->add_option("--method", method, "radius|truncation|root")->check(CLI::IsMember({"radius", "truncation", "root"}));
  ent->add_option("--max-len", max_len, "truncation bound for loop systems");
  ent->add_option("--csv", csv, "write n,(1/n)log p(n) to this file ('-' for stdout)");
  ent->add_option("--horizon", csv_horizon, "CSV horizon");

  SurgeryArgs sa;
  auto* surgery = app.add_subcommand("surgery", "entropy-preserving graph surgery");
  surgery->require_subcommand(1);
  const std::pair<const char*, const char*> ops[] = {
      {"extend-transient", "add loops of one length so F(R) stays below 1"},
      {"extend-recurrent", "add loops so F(R) = 1 with R unchanged"},
      {"pad-null", "add a padding family that makes the mean diverge"},
      {"contract", "delete one loop"},
      {"concentrate", "delete every loop shorter than n"},
  };
  for (const auto& [op, about] : ops) {
    auto* sub = surgery->add_subcommand(op, about);
    sub->add_option("spec", sa.spec, "graph spec file")->required();
    sub->add_option("-o,--output", sa.output, "write the resulting spec here");
    sub->callback([&sa, op] { sa.op = op; });
    if (std::string(op) == "extend-recurrent") sub->add_option("--max-terms", sa.max_terms, "term budget for the addition search");
    if (std::string(op) == "pad-null") sub->add_option("--horizon", sa.horizon, "largest padding index n");
    if (std::string(op) == "contract") {
      sub->add_option("--loop", sa.loop, "length of the loop to delete");
      sub->add_option("--index", sa.index, "index of the loop among those of that length");
    }
    if (std::string(op) == "concentrate") sub->add_option("--n", sa.n, "remove loops shorter than n");
  }

  auto* measure = app.add_subcommand("measure", "maximal measure");
  measure->add_option("spec", spec, "graph spec file")->required();
  measure->add_option("--cylinder", cylinder, "comma-separated word, 'base' allowed");
  measure->add_option("--abramov", abramov, "run the Abramov check to this horizon");

  auto* verify = app.add_subcommand("verify-paper", "run the bundled worked-example checks");
  verify->add_flag("--list", list, "list checks without running");
  verify->add_option("--data-dir", data_dir, "directory with the bundled specs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*classify) return cmd_classify(load_spec(spec), mode, horizon);
    if (*ent) return cmd_entropy(load_spec(spec), method, max_len, csv, csv_horizon);
    if (*surgery) return cmd_surgery(sa);
    if (*measure) return cmd_measure(load_spec(spec), cylinder, abramov);
    if (*verify) return cmd_verify(list, data_dir);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const UnknownVertex& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return kPrecondition;
  } catch (const Unresolved& e) {
    std::cerr << "unresolved: " << e.what() << "\n";
    return kPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  }
  return kOk;
}
