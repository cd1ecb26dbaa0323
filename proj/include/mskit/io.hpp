#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mskit/classify.hpp"
#include "mskit/graph.hpp"
#include "mskit/measures.hpp"
#include "mskit/surgery.hpp"

namespace mskit {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

struct ProvenanceEntry {
  std::string operation;
  std::map<std::string, std::string> params;
  bool operator==(const ProvenanceEntry&) const = default;
};

/// Graph description file: a finite digraph or a loop system.
struct GraphSpec {
  enum class Kind { Finite, LoopSystem };

  Kind kind = Kind::LoopSystem;
  std::string name;
  FiniteGraph finite;
  LoopSystem loops;
  std::vector<ProvenanceEntry> provenance;

  bool is_finite() const { return kind == Kind::Finite; }
  bool operator==(const GraphSpec&) const = default;
};

/// Throws ParseError on malformed documents.
GraphSpec spec_from_json(const Json& j);
Json to_json(const GraphSpec& spec);

/// Throws ParseError (including I/O failures).
GraphSpec load_spec(const std::filesystem::path& file);
void save_spec(const GraphSpec& spec, const std::filesystem::path& file);

Json to_json(const SequenceFamily& f);
SequenceFamily family_from_json(const Json& terms);

Json to_json(const RealInterval& v);
Json to_json(const SeriesValue& v);
Json to_json(const RadiusInfo& r);
Json to_json(const ClassificationReport& r);
Json to_json(const EntropyReport& r);
Json to_json(const GzReport& r);
Json to_json(const SurgeryResult& r);
Json to_json(const ParryMeasure& m);
Json to_json(const LoopMaximalMeasure& m);

/// Wraps a payload with the schema version and command name.
Json report(const std::string& command, Json payload);

}  // namespace mskit
