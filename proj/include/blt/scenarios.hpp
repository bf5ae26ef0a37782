#pragma once

#include "blt/export.hpp"
#include "blt/signal.hpp"

#include <cstdint>
#include <filesystem>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace blt::cli {

using io::Json;

/// A failure inside a named stage of a scenario.
class StageError : public std::runtime_error {
public:
  StageError(const std::string& stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(stage) {}
  const std::string& stage() const { return stage_; }

private:
  std::string stage_;
};

class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct FieldEntry {
  std::string name;  // "periodic_constant" or a generator label
  bool periodic_constant = false;
  signal::GeneratorSpec spec;
};

struct ScenarioConfig {
  std::string scenario;
  signal::GeneratorSpec signal = signal::GeneratorSpec::hat();
  std::string signal_csv;  // custom signal, overrides `signal`
  std::vector<signal::GeneratorSpec> families;
  long nx = 256;
  long ny = 256;
  long planar_n = 64;
  double torus_side = 1.0;
  int bandwidth = 12;
  std::vector<double> p_values;
  std::vector<double> eps{1.0 / 8, 1.0 / 16, 1.0 / 32};
  std::pair<int, int> k0_range{0, 12};
  std::pair<int, int> window_exponents{6, 12};
  double window_pad = 1.0;
  int count = 100;
  std::uint64_t seed = 1;
  std::vector<FieldEntry> fields;
  int random_fields = 0;
  double threshold = 0.1;
  double refine_tol = 1e-12;
  std::filesystem::path out;
  Json expect = Json::object();
  Json raw = Json::object();
};

inline const std::vector<std::string> kScenarios{"analyze", "sweep-critical", "sweep-embedding", "weight-table",
                                                 "degree-check"};

/// Applies defaults for the scenario and validates the document. Unknown keys are rejected.
ScenarioConfig parse_config(const std::string& scenario, const Json& doc);
signal::GeneratorSpec parse_signal(const Json& j);

struct Report {
  Json json;
  bool passed = true;
  std::vector<std::filesystem::path> files;
};

Report run_scenario(const ScenarioConfig& cfg);
Report run_analyze(const ScenarioConfig& cfg);
Report run_sweep_critical(const ScenarioConfig& cfg);
Report run_sweep_embedding(const ScenarioConfig& cfg);
Report run_weight_table(const ScenarioConfig& cfg);
Report run_degree_check(const ScenarioConfig& cfg);

/// sum over |k1|, |k2| <= bandwidth of c_k e^{2 pi i (k . x)/side}, standard complex normal c_k,
/// sampled on an n x n torus of the given side.
PlanarField random_bandlimited(std::mt19937_64& rng, long n, double side, int bandwidth);

/// Same coefficients sampled at two resolutions.
std::pair<PlanarField, PlanarField> random_bandlimited_pair(std::mt19937_64& rng, long n, double side, int bandwidth);

struct SweepCell {
  std::vector<long> windows;
  std::vector<double> norms;
  bool divergent = false;
  double slope = 0.0;  // last increment of norm^2 per window doubling
};

/// H^s norm of the generator sampled at step 1/N for each window N, padded by `pad` on each side.
/// Flagged divergent when the last norm^2 increment exceeds 0.75 times the previous one.
SweepCell sobolev_growth(const signal::GeneratorSpec& spec, double s, std::pair<int, int> exponents, double pad,
                         bool fourier_side);

}  // namespace blt::cli
