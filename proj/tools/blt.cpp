#include "blt/scenarios.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Zak transform and Balian-Low experiments"};
  std::string scenario, config_path, out_dir;
  std::optional<std::uint64_t> seed;
  app.add_option("scenario", scenario, "analyze | sweep-critical | sweep-embedding | weight-table | degree-check")
      ->required();
  app.add_option("--config", config_path, "JSON configuration")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (overrides the config)");
  app.add_option("--seed", seed, "random seed (overrides the config)");
  CLI11_PARSE(app, argc, argv);

  try {
    std::ifstream in(config_path);
    blt::cli::Json doc;
    try {
      doc = blt::cli::Json::parse(in);
    } catch (const blt::cli::Json::parse_error& e) {
      throw blt::cli::ConfigError(std::string("invalid JSON: ") + e.what());
    }
    auto cfg = blt::cli::parse_config(scenario, doc);
    if (!out_dir.empty()) cfg.out = out_dir;
    if (seed) cfg.seed = *seed;
    const auto report = blt::cli::run_scenario(cfg);
    for (const auto& a : report.json["assertions"]) {
      std::cout << (a["passed"].get<bool>() ? "ok    " : "FAIL  ") << a["name"].get<std::string>();
      const auto detail = a["detail"].get<std::string>();
      if (!detail.empty()) std::cout << "  [" << detail << "]";
      std::cout << '\n';
    }
    std::cout << "report: " << (cfg.out / "report.json").string() << '\n';
    return report.passed ? 0 : 1;
  } catch (const blt::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const blt::cli::StageError& e) {
    std::cerr << "stage failed: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
