#include "doctest.h"

#include "blt/scenarios.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace blt;
using namespace blt::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("blt_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_tool(const std::string& args) {
  const std::string cmd = std::string(BLT_EXE) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const auto p = dir / "config.json";
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("configs are validated") {
  CHECK_THROWS_AS(parse_config("analyze", Json::parse(R"({"nx": 100})")), ConfigError);
  CHECK_THROWS_AS(parse_config("analyze", Json::parse(R"({"colour": 1})")), ConfigError);
  CHECK_THROWS_AS(parse_config("degree-check", Json::parse(R"({"eps": [0.0625, 0.125]})")), ConfigError);
  CHECK_THROWS_AS(parse_config("sweep-embedding", Json::parse(R"({"count": 5})")), ConfigError);
  CHECK_THROWS_AS(parse_config("analyze", Json::parse(R"({"signal": "triangle"})")), ConfigError);
  CHECK_THROWS_AS(parse_config("mystery", Json::object()), ConfigError);

  const auto c = parse_config("analyze", Json::parse(R"({"signal": {"kind": "bspline", "order": 4}, "nx": 128})"));
  CHECK(c.nx == 128);
  CHECK(c.signal.kind == signal::Kind::BSpline);
  CHECK(c.signal.order == 4);
  CHECK(parse_signal(Json("bspline3")).order == 3);
  const auto d = parse_config("degree-check", Json::object());
  CHECK(d.eps.size() == 3);
  CHECK(d.count == 0);
}

TEST_CASE("periodic control has degree zero and the report keeps its layout") {
  auto cfg = parse_config("degree-check", Json::parse(R"({"fields": ["hat", "periodic_constant"], "nx": 64})"));
  cfg.out = scratch("degree");
  const auto r = run_degree_check(cfg);
  CHECK(r.passed);
  std::vector<std::string> keys;
  for (auto it = r.json.begin(); it != r.json.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"scenario", "config", "results", "assertions", "provenance", "passed"});
  bool saw_control = false;
  for (const auto& res : r.json["results"]) {
    CHECK(res.contains("operation"));
    CHECK(res.contains("resolution"));
    CHECK(res.contains("values"));
    if (res["values"].value("field", "") == "periodic_constant") {
      saw_control = true;
      CHECK(res["values"]["degree"] == 0);
    }
  }
  CHECK(saw_control);
  CHECK(r.json["provenance"].contains("versions"));
  CHECK(fs::exists(cfg.out / "report.json"));
}

TEST_CASE("exit codes") {
  const auto dir = scratch("exit");
  CHECK(run_tool("weight-table --config " + write_config(dir, "{}").string() + " --out " +
                 (dir / "ok").string()) == 0);
  CHECK(fs::exists(dir / "ok" / "weight_table.csv"));
  CHECK(run_tool("weight-table --config " + write_config(dir, R"({"bogus": true})").string()) == 2);
  CHECK(run_tool("analyze --config " + write_config(dir, "{ not json").string()) == 2);
  const auto cfg = write_config(dir, R"({"signal": "box", "nx": 64, "expect": {"A": [0, 0.5]}})");
  CHECK(run_tool("analyze --config " + cfg.string() + " --out " + (dir / "fail").string()) == 1);
}

TEST_CASE("runs are reproducible from the seed") {
  const auto dir = scratch("seed");
  const auto cfg = write_config(dir, R"({"count": 20, "planar": {"n": 32, "bandwidth": 6}})").string();
  REQUIRE(run_tool("sweep-embedding --config " + cfg + " --seed 5 --out " + (dir / "a").string()) == 0);
  REQUIRE(run_tool("sweep-embedding --config " + cfg + " --seed 5 --out " + (dir / "b").string()) == 0);
  REQUIRE(run_tool("sweep-embedding --config " + cfg + " --seed 6 --out " + (dir / "c").string()) == 0);
  const auto a = slurp(dir / "a" / "embedding.csv");
  CHECK_FALSE(a.empty());
  CHECK(a == slurp(dir / "b" / "embedding.csv"));
  CHECK(a != slurp(dir / "c" / "embedding.csv"));
}
