#include "mskit/verify.hpp"

#include <functional>
#include <sstream>

#include "mskit/error.hpp"
#include "mskit/io.hpp"
#include "mskit/measures.hpp"
#include "mskit/metric.hpp"
#include "mskit/surgery.hpp"

namespace mskit {

namespace {

namespace fs = std::filesystem;

struct Entry {
  std::string name;
  std::string expected;
  std::function<std::string(const fs::path&)> run;
};

LoopSystem loops(const fs::path& dir, const char* file) {
  const GraphSpec s = load_spec(dir / file);
  if (s.is_finite()) throw ParseError(std::string(file) + ": expected a loop system");
  return s.loops;
}

FiniteGraph finite(const fs::path& dir, const char* file) {
  const GraphSpec s = load_spec(dir / file);
  if (!s.is_finite()) throw ParseError(std::string(file) + ": expected a finite graph");
  return s.finite;
}

std::string series(const SeriesValue& v) {
  if (v.diverges()) return "diverges";
  if (v.is_exact()) return to_string(v.value());
  return "[" + to_string(v.lo) + "," + to_string(v.hi) + "]";
}

std::string radius(const RadiusInfo& r) {
  if (r.infinite) return "inf";
  if (r.is_exact()) return to_string(r.value());
  return "[" + to_string(r.lo) + "," + to_string(r.hi) + "]";
}

std::string yes(bool b) { return b ? "yes" : "no"; }

const std::vector<Entry>& table() {
  static const std::vector<Entry> entries = {
      {"example1.L", "1/2", [](const fs::path& d) { return radius(classify_exact(loops(d, "example1.json")).L); }},
      {"example1.F_at_L", "1",
       [](const fs::path& d) { return series(classify_exact(loops(d, "example1.json")).discriminant.F_at_L); }},
      {"example1.mean_finite", "yes",
       [](const fs::path& d) { return yes(classify_exact(loops(d, "example1.json")).mean_at_R.is_finite()); }},
      {"example1.class", "PositiveRecurrent",
       [](const fs::path& d) { return to_string(classify_exact(loops(d, "example1.json")).cls); }},
      {"example2.L", "1/2", [](const fs::path& d) { return radius(classify_exact(loops(d, "example2.json")).L); }},
      {"example2.F_at_L", "1",
       [](const fs::path& d) { return series(classify_exact(loops(d, "example2.json")).discriminant.F_at_L); }},
      {"example2.mean", "diverges",
       [](const fs::path& d) { return series(classify_exact(loops(d, "example2.json")).mean_at_R); }},
      {"example2.class", "NullRecurrent",
       [](const fs::path& d) { return to_string(classify_exact(loops(d, "example2.json")).cls); }},
      {"gprime.F_at_L", "1/2",
       [](const fs::path& d) { return series(classify_exact(loops(d, "exampleGprime.json")).discriminant.F_at_L); }},
      {"gprime.class", "Transient",
       [](const fs::path& d) { return to_string(classify_exact(loops(d, "exampleGprime.json")).cls); }},
      {"gprime.R_equals_L", "1/2",
       [](const fs::path& d) {
         const ClassificationReport r = classify_exact(loops(d, "exampleGprime.json"));
         return r.R.is_exact() && r.L.is_exact() && r.R.value() == r.L.value() ? radius(r.R) : "R!=L";
       }},
      {"gprime.equal_entropy", "yes",
       [](const fs::path& d) {
         const ClassificationReport g = classify_exact(loops(d, "example1.json"));
         const ClassificationReport gp = classify_exact(loops(d, "exampleGprime.json"));
         return yes(g.R.is_exact() && gp.R.is_exact() && g.R.value() == gp.R.value());
       }},
      {"gprime.from_deleting_self_loop", "yes",
       [](const fs::path& d) {
         const SurgeryResult r = branch_contraction(loops(d, "example1.json"), 1, 1);
         return yes(r.after.counts.prefix(64) == loops(d, "exampleGprime.json").counts.prefix(64));
       }},
      {"transient.extends_to_recurrent", "PositiveRecurrent",
       [](const fs::path& d) {
         const SurgeryResult r = recurrent_extension(loops(d, "exampleGprime.json"));
         return r.entropy_preserved ? to_string(r.verification.cls) : "entropy changed";
       }},
      {"transient.salama_extension", "Transient",
       [](const fs::path& d) {
         const SurgeryResult r = transient_extension(loops(d, "exampleGprime.json"));
         return r.entropy_preserved ? to_string(r.verification.cls) : "entropy changed";
       }},
      {"transient.padding_keeps_transient", "Transient",
       [](const fs::path& d) {
         const SurgeryResult r = null_recurrent_padding(loops(d, "exampleGprime.json"));
         return r.entropy_preserved ? to_string(r.verification.cls) : "entropy changed";
       }},
      {"transient.padding_mean_diverges", "yes",
       [](const fs::path& d) {
         const SurgeryResult r = null_recurrent_padding(loops(d, "exampleGprime.json"));
         return yes(r.padding && r.padding->min_contribution && *r.padding->min_contribution > 0 &&
                    r.verification.mean_at_R.diverges());
       }},
      {"null_recurrent.no_maximal_measure", "error",
       [](const fs::path& d) -> std::string {
         try {
           loop_maximal_measure(loops(d, "example2.json"));
         } catch (const PreconditionError&) {
           return "error";
         }
         return "measure";
       }},
      {"full2.spr", "yes", [](const fs::path& d) { return yes(spr_test(finite(d, "full2.json")).spr); }},
      {"full2.gz_single_vertex", "PassesSPR",
       [](const fs::path& d) { return to_string(gz_test(finite(d, "full2.json"), {0}).verdict); }},
      {"spr.no_equal_entropy_subgraph", "error",
       [](const fs::path& d) -> std::string {
         try {
           branch_contraction(loops(d, "geometric.json"), 1, 1);
         } catch (const PreconditionError&) {
           return "error";
         }
         return "contracted";
       }},
      {"entropy_at_infinity.caveat", "yes",
       [](const fs::path& d) {
         const LoopSystem ls = loops(d, "example1.json");
         const EntropyAtInfinity e = entropy_at_infinity(ls, materialization_exhaustion(ls, {1, 4, 9}));
         return yes(e.limit.hi == 0.0 && e.below_h && e.caveat_instance);
       }},
      {"metric.bound", "yes",
       [](const fs::path& d) {
         const LoopSystem ls = loops(d, "example1.json");
         const BiPath x = loop_word_path(ls, {{4, 1}, {9, 3}}, {1, 1});
         const BiPath y = loop_word_path(ls, {{9, 64}, {4, 4}}, {4, 2});
         return yes(path_distance(x, y, kDefaultK).hi <= 3);
       }},
  };
  return entries;
}

}  // namespace

std::vector<std::string> paper_check_names() {
  std::vector<std::string> out;
  for (const Entry& e : table()) out.push_back(e.name);
  return out;
}

std::vector<PaperCheck> run_paper_checks(const std::filesystem::path& data_dir) {
  std::vector<PaperCheck> out;
  for (const Entry& e : table()) {
    PaperCheck c{e.name, e.expected, "", false};
    try {
      c.got = e.run(data_dir);
    } catch (const std::exception& ex) {
      c.got = std::string("error: ") + ex.what();
    }
    c.pass = c.got == c.expected;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace mskit
