#include "mskit/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "mskit/error.hpp"

namespace mskit {

namespace {

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(where + ": missing field '" + key + "'");
  return j.at(key);
}

std::uint64_t as_uint(const Json& j, const std::string& where) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
  if (j.is_string()) {
    const BigInt z = parse_count(j.get<std::string>());
    if (z.fits_ulong_p()) return z.get_ui();
  }
  throw ParseError(where + ": expected a nonnegative integer");
}

BigInt as_count(const Json& j, const std::string& where) {
  if (j.is_string()) return parse_count(j.get<std::string>());
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return BigInt(std::to_string(j.get<std::int64_t>()));
  if (j.is_number_unsigned()) return BigInt(std::to_string(j.get<std::uint64_t>()));
  throw ParseError(where + ": expected a count (decimal string)");
}

Rational as_rational(const Json& j, const std::string& where) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(BigInt(std::to_string(j.get<std::int64_t>())));
  throw ParseError(where + ": expected a rational string \"p/q\"");
}

std::string shape_name(SupportShape s) {
  switch (s) {
    case SupportShape::All: return "all";
    case SupportShape::Squares: return "squares";
    case SupportShape::Powers: return "powers";
    case SupportShape::Arithmetic: return "arithmetic";
  }
  return "all";
}

Json support_json(const Support& s) {
  Json j;
  j["shape"] = shape_name(s.shape);
  j["k0"] = s.k0;
  if (s.shape == SupportShape::Powers) j["base"] = s.base;
  if (s.shape == SupportShape::Arithmetic) {
    j["step"] = s.step;
    j["offset"] = s.offset;
  }
  return j;
}

Support support_from_json(const Json& j) {
  const std::string where = "support";
  const std::string shape = field(j, "shape", where).get<std::string>();
  const std::uint64_t k0 = j.contains("k0") ? as_uint(j.at("k0"), where) : 1;
  Support s;
  if (shape == "all")
    s = Support::all(k0);
  else if (shape == "squares")
    s = Support::squares(k0);
  else if (shape == "powers")
    s = Support::powers(as_uint(field(j, "base", where), where), k0);
  else if (shape == "arithmetic")
    s = Support::arithmetic(as_uint(field(j, "step", where), where),
                            j.contains("offset") ? as_uint(j.at("offset"), where) : 0, k0);
  else
    throw ParseError("support: unknown shape '" + shape + "'");
  s.validate();
  return s;
}

Json interval_pair(const Rational& lo, const Rational& hi) { return Json{{"lo", to_string(lo)}, {"hi", to_string(hi)}}; }

}  // namespace

Json to_json(const SequenceFamily& f) {
  Json terms = Json::array();
  if (!f.explicit_terms().empty()) {
    Json t;
    t["type"] = "explicit";
    Json m = Json::object();
    for (const auto& [n, c] : f.explicit_terms()) m[std::to_string(n)] = to_string(c);
    t["terms"] = m;
    terms.push_back(t);
  }
  for (const LacunaryTerm& l : f.tails()) {
    Json t;
    t["type"] = "lacunary";
    t["support"] = support_json(l.support);
    t["c"] = to_string(l.c);
    t["beta"] = to_string(l.beta);
    t["gamma"] = to_string(l.gamma);
    t["floor"] = l.floor;
    terms.push_back(t);
  }
  return terms;
}

SequenceFamily family_from_json(const Json& terms) {
  if (!terms.is_array()) throw ParseError("counts: expected an array of family terms");
  std::map<std::uint64_t, BigInt> expl;
  std::vector<LacunaryTerm> tails;
  for (const Json& t : terms) {
    const std::string type = field(t, "type", "family term").get<std::string>();
    if (type == "explicit") {
      const Json& m = field(t, "terms", "explicit term");
      if (!m.is_object()) throw ParseError("explicit term: 'terms' must be an object");
      for (const auto& [key, value] : m.items()) {
        const std::uint64_t n = as_uint(Json(key), "explicit term length");
        if (n == 0) throw ParseError("explicit term: loop length must be >= 1");
        expl[n] += as_count(value, "explicit term " + key);
      }
    } else if (type == "lacunary") {
      LacunaryTerm l;
      l.support = support_from_json(field(t, "support", "lacunary term"));
      l.c = as_rational(field(t, "c", "lacunary term"), "c");
      l.beta = as_rational(field(t, "beta", "lacunary term"), "beta");
      l.gamma = as_rational(field(t, "gamma", "lacunary term"), "gamma");
      l.floor = t.contains("floor") && t.at("floor").get<bool>();
      l.validate();
      tails.push_back(l);
    } else {
      throw ParseError("family term: unknown type '" + type + "'");
    }
  }
  return SequenceFamily(std::move(expl), std::move(tails));
}

GraphSpec spec_from_json(const Json& j) {
  try {
    GraphSpec s;
    if (!j.is_object()) throw ParseError("graph spec: expected an object");
    if (j.contains("schemaVersion") && j.at("schemaVersion").get<int>() > kSchemaVersion)
      throw ParseError("graph spec: unsupported schemaVersion");
    if (j.contains("name")) s.name = j.at("name").get<std::string>();
    const std::string kind = field(j, "kind", "graph spec").get<std::string>();
    if (kind == "finite") {
      s.kind = GraphSpec::Kind::Finite;
      const Json& f = field(j, "finite", "graph spec");
      std::vector<VertexId> vs;
      for (const Json& v : field(f, "vertices", "finite")) vs.push_back(as_uint(v, "vertex"));
      std::vector<Arrow> as;
      for (const Json& a : field(f, "arrows", "finite")) {
        if (!a.is_array() || a.size() != 2) throw ParseError("finite: arrows are [from, to] pairs");
        as.emplace_back(as_uint(a[0], "arrow"), as_uint(a[1], "arrow"));
      }
      s.finite = FiniteGraph(std::move(vs), std::move(as));
    } else if (kind == "loop_system") {
      s.kind = GraphSpec::Kind::LoopSystem;
      const Json& l = field(j, "loop_system", "graph spec");
      s.loops.base = l.contains("base") ? as_uint(l.at("base"), "base") : 0;
      s.loops.counts = family_from_json(field(l, "counts", "loop_system"));
      s.loops.validate();
    } else {
      throw ParseError("graph spec: unknown kind '" + kind + "'");
    }
    if (j.contains("provenance")) {
      for (const Json& p : j.at("provenance")) {
        ProvenanceEntry e;
        e.operation = field(p, "operation", "provenance").get<std::string>();
        if (p.contains("params"))
          for (const auto& [k, v] : p.at("params").items()) e.params[k] = v.is_string() ? v.get<std::string>() : v.dump();
        s.provenance.push_back(std::move(e));
      }
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("graph spec: ") + e.what());
  }
}

Json to_json(const GraphSpec& spec) {
  Json j;
  j["schemaVersion"] = kSchemaVersion;
  if (!spec.name.empty()) j["name"] = spec.name;
  if (spec.is_finite()) {
    j["kind"] = "finite";
    Json arrows = Json::array();
    for (const auto& [u, v] : spec.finite.arrows()) arrows.push_back(Json::array({u, v}));
    j["finite"] = Json{{"vertices", spec.finite.vertices()}, {"arrows", arrows}};
  } else {
    j["kind"] = "loop_system";
    j["loop_system"] = Json{{"base", spec.loops.base}, {"counts", to_json(spec.loops.counts)}};
  }
  if (!spec.provenance.empty()) {
    Json p = Json::array();
    for (const ProvenanceEntry& e : spec.provenance) p.push_back(Json{{"operation", e.operation}, {"params", e.params}});
    j["provenance"] = p;
  }
  return j;
}

GraphSpec load_spec(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError("cannot open " + file.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(file.string() + ": " + e.what());
  }
  return spec_from_json(j);
}

void save_spec(const GraphSpec& spec, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw ParseError("cannot write " + file.string());
  out << to_json(spec).dump(2) << "\n";
}

Json to_json(const RealInterval& v) {
  const double w = v.hi - v.lo;
  const int err = w > 0 ? static_cast<int>(std::ceil(std::log2(w))) : -1074;
  return Json{{"lo", v.lo}, {"hi", v.hi}, {"errorExp", err}};
}

Json to_json(const SeriesValue& v) {
  switch (v.status) {
    case SeriesValue::Status::Exact: return Json{{"status", "exact"}, {"value", to_string(v.lo)}};
    case SeriesValue::Status::Interval: {
      Json j = interval_pair(v.lo, v.hi);
      j["status"] = "interval";
      j["tailBound"] = to_string(v.tail_bound);
      return j;
    }
    case SeriesValue::Status::Diverges: return Json{{"status", "diverges"}};
  }
  return {};
}

Json to_json(const RadiusInfo& r) {
  if (r.infinite) return Json{{"status", "infinite"}};
  if (r.is_exact()) return Json{{"status", "exact"}, {"value", to_string(r.lo)}};
  Json j = interval_pair(r.lo, r.hi);
  j["status"] = r.rigorous ? "enclosure" : "estimate";
  if (!r.rigorous) j["estimate"] = r.estimate;
  return j;
}

Json to_json(const ClassificationReport& r) {
  Json j;
  j["class"] = to_string(r.cls);
  j["spr"] = r.spr;
  j["mode"] = to_string(r.mode);
  j["R"] = to_json(r.R);
  j["L"] = to_json(r.L);
  j["entropy"] = r.R.infinite ? Json() : to_json(r.R.neg_log());
  j["F_at_R"] = to_json(r.F_at_R);
  j["mean_at_R"] = to_json(r.mean_at_R);
  Json d;
  d["F_at_L"] = to_json(r.discriminant.F_at_L);
  d["sign"] = r.discriminant.sign;
  d["infinite"] = r.discriminant.infinite;
  if (r.discriminant.value) d["value"] = to_json(*r.discriminant.value);
  j["discriminant"] = d;
  if (r.renewal_limit) j["renewal_limit"] = to_string(*r.renewal_limit);
  j["notes"] = r.notes;
  return j;
}

Json to_json(const EntropyReport& r) {
  Json j;
  j["method"] = to_string(r.method);
  j["value"] = to_json(r.value);
  j["exact"] = r.exact;
  j["lower_bound"] = r.lower_bound;
  if (r.radius) j["radius"] = to_json(*r.radius);
  Json w = Json::array();
  for (const EntropyWitness& e : r.witnesses) w.push_back(Json{{"max_len", e.max_len}, {"value", to_json(e.value)}});
  j["witnesses"] = w;
  return j;
}

Json to_json(const GzReport& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["rigorous"] = r.rigorous;
  j["h_W"] = to_json(r.h_W);
  if (r.tau) j["tau"] = to_json(*r.tau);
  j["tau_hat"] = r.tau_hat;
  Json s = Json::array();
  for (const auto& [n, v] : r.series) s.push_back(Json::array({n, v}));
  j["series"] = s;
  return j;
}

Json to_json(const SurgeryResult& r) {
  Json j;
  j["operation"] = r.operation;
  j["params"] = r.params;
  j["claimed"] = to_string(r.claimed);
  j["verification"] = to_json(r.verification);
  j["claim_verified"] = r.claim_verified;
  j["entropy_preserved"] = r.entropy_preserved;
  if (r.addition) {
    const LoopAddition& a = *r.addition;
    Json add;
    add["p"] = to_string(a.p);
    add["alpha"] = to_string(a.alpha);
    add["deficiency"] = to_string(a.deficiency);
    add["index_set_finite"] = a.index_set_finite;
    add["residual"] = to_string(a.residual);
    Json items = Json::array();
    for (const auto& [n, c] : a.additions) items.push_back(Json{{"length", n}, {"count", to_string(c)}});
    add["additions"] = items;
    Json trace = Json::array();
    for (const GreedyStep& s : a.trace)
      trace.push_back(Json{{"n", s.n}, {"partial", to_string(s.partial)}, {"tail_after", to_string(s.tail_after)}});
    add["trace"] = trace;
    if (!a.continuation.empty()) add["continuation"] = a.continuation;
    j["addition"] = add;
  }
  if (r.padding) {
    const Padding& p = *r.padding;
    Json pad;
    pad["k"] = p.k;
    if (p.tail) pad["tail"] = to_json(SequenceFamily({}, {*p.tail}))[0];
    Json ex = Json::object();
    for (const auto& [n, c] : p.explicit_terms) ex[std::to_string(n)] = to_string(c);
    pad["explicit_terms"] = ex;
    Json contrib = Json::array();
    for (const auto& [n, c] : p.contributions) contrib.push_back(Json{{"length", n}, {"contribution", to_string(c)}});
    pad["contributions"] = contrib;
    if (p.min_contribution) pad["min_contribution"] = to_string(*p.min_contribution);
    if (!p.continuation.empty()) pad["continuation"] = p.continuation;
    j["padding"] = pad;
  }
  j["notes"] = r.notes;
  return j;
}

Json to_json(const ParryMeasure& m) {
  Json j;
  j["lambda"] = interval_pair(m.lambda_lo, m.lambda_hi);
  j["entropy"] = to_json(m.entropy);
  j["row_residual"] = to_string(m.row_residual);
  j["stationarity_residual"] = to_string(m.stationarity_residual);
  const std::vector<Rational> pi = m.stationary_vector();
  Json st = Json::object();
  for (std::size_t i = 0; i < pi.size(); ++i) st[std::to_string(m.graph.id(i))] = to_string(pi[i]);
  j["stationary"] = st;
  Json tr = Json::array();
  for (const auto& [u, v] : m.graph.arrows()) tr.push_back(Json{{"from", u}, {"to", v}, {"p", to_string(m.transition(u, v))}});
  j["transitions"] = tr;
  return j;
}

Json to_json(const LoopMaximalMeasure& m) {
  Json j;
  j["R"] = to_json(m.R);
  j["mean_return"] = to_json(m.mean_return);
  j["entropy"] = to_json(m.entropy);
  if (m.R.is_exact() && m.mean_return.is_exact()) j["base_frequency"] = to_string(m.base_frequency());
  return j;
}

Json report(const std::string& command, Json payload) {
  Json j;
  j["schemaVersion"] = kSchemaVersion;
  j["command"] = command;
  j["result"] = std::move(payload);
  return j;
}

}  // namespace mskit
