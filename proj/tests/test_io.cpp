#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "mskit/error.hpp"
#include "mskit/io.hpp"

using namespace mskit;
using namespace fixtures;
namespace fs = std::filesystem;

TEST_SUITE("io") {
  TEST_CASE("bundled specs round-trip") {
    for (const auto& entry : fs::directory_iterator(MSKIT_DATA_DIR)) {
      if (entry.path().extension() != ".json") continue;
      CAPTURE(entry.path().string());
      const GraphSpec s = load_spec(entry.path());
      CHECK(spec_from_json(to_json(s)) == s);
      const Json j = to_json(s);
      CHECK(to_json(spec_from_json(j)) == j);
    }
  }

  TEST_CASE("bundled specs describe the worked examples") {
    const fs::path dir(MSKIT_DATA_DIR);
    CHECK(load_spec(dir / "example1.json").loops == example1());
    CHECK(load_spec(dir / "example2.json").loops.counts.prefix(300) == example2().counts.prefix(300));
    CHECK(load_spec(dir / "exampleGprime.json").loops.counts.prefix(300) == gprime().counts.prefix(300));
    CHECK(load_spec(dir / "full2.json").finite == full2());
  }

  TEST_CASE("counts survive arbitrary magnitude") {
    GraphSpec s;
    s.loops = {3, SequenceFamily::from_explicit({{1, BigInt(1)}, {200, pow(BigInt(2), 190)}})};
    s.provenance.push_back({"contract", {{"n", "4"}}});
    const Json j = to_json(s);
    CHECK(j["loop_system"]["counts"][0]["terms"]["200"].get<std::string>() == to_string(pow(BigInt(2), 190)));
    CHECK(spec_from_json(j) == s);
  }

  TEST_CASE("malformed documents") {
    CHECK_THROWS_AS(spec_from_json(Json::parse(R"({"kind":"graph"})")), ParseError);
    CHECK_THROWS_AS(spec_from_json(Json::parse(R"({"kind":"finite","finite":{"vertices":[0],"arrows":[[0,1]]}})")),
                    ParseError);
    CHECK_THROWS_AS(
        spec_from_json(Json::parse(R"({"kind":"loop_system","loop_system":{"counts":[{"type":"explicit","terms":{"1":"2"}}]}})")),
        ParseError);
    CHECK_THROWS_AS(spec_from_json(Json::parse(
                        R"({"kind":"loop_system","loop_system":{"counts":[{"type":"lacunary","support":{"shape":"cubes"},"c":"1","beta":"2","gamma":"1"}]}})")),
                    ParseError);
    CHECK_THROWS_AS(load_spec("/nonexistent/spec.json"), ParseError);
    const fs::path bad = fs::temp_directory_path() / "mskit_bad_spec.json";
    std::ofstream(bad) << "{ not json";
    CHECK_THROWS_AS(load_spec(bad), ParseError);
    fs::remove(bad);
  }

  TEST_CASE("reports carry the schema version and exact strings") {
    const Json r = report("classify", to_json(classify_exact(example1())));
    CHECK(r["schemaVersion"] == kSchemaVersion);
    CHECK(r["result"]["class"] == "PositiveRecurrent");
    CHECK(r["result"]["mean_at_R"]["value"] == "6");
    CHECK(r["result"]["R"]["value"] == "1/2");
  }
}
