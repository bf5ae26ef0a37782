#include "blt/scenarios.hpp"

#include "blt/degree.hpp"
#include "blt/fft.hpp"
#include "blt/oscillation.hpp"
#include "blt/zak.hpp"

#include <fftw3.h>

#include <boost/version.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace blt::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

bool power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

template <typename F>
auto stage(const std::string& name, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

void require_power_of_two(long n, const std::string& what) {
  if (!power_of_two(n)) throw ConfigError(what + " must be a power of two (got " + std::to_string(n) + ")");
}

std::vector<signal::GeneratorSpec> default_families() {
  std::vector<signal::GeneratorSpec> f{signal::GeneratorSpec::box(), signal::GeneratorSpec::hat()};
  for (int order = 2; order <= 6; ++order) f.push_back(signal::GeneratorSpec::bspline(order));
  f.push_back(signal::GeneratorSpec::gaussian());
  f.push_back(signal::GeneratorSpec::smoothed_box(0.25));
  return f;
}

std::vector<double> default_p(const std::string& scenario) {
  if (scenario == "sweep-critical") return {1.1, 1.25, 1.5, 2.0, 3.0, 4.0};
  if (scenario == "sweep-embedding") return {1.25, 1.5, 2.0, 3.0};
  return {1.25, 1.5, 2.0};
}

std::string param_of(const signal::GeneratorSpec& s) {
  switch (s.kind) {
    case signal::Kind::BSpline:
      return std::to_string(s.order);
    case signal::Kind::SmoothedBox:
      return io::format_double(s.transition);
    default:
      return "";
  }
}

void add_assertion(Report& r, const std::string& name, bool ok, const std::string& detail) {
  r.json["assertions"].push_back(Json{{"name", name}, {"passed", ok}, {"detail", detail}});
  r.passed = r.passed && ok;
}

Json labelled(const std::string& operation, Json resolution, Json values) {
  return Json{{"operation", operation}, {"resolution", std::move(resolution)}, {"values", std::move(values)}};
}

Report start_report(const ScenarioConfig& cfg, Json resolutions, Json tolerances) {
  Report r;
  r.json["scenario"] = cfg.scenario;
  r.json["config"] = cfg.raw;
  r.json["results"] = Json::array();
  r.json["assertions"] = Json::array();
  r.json["provenance"] = Json{{"resolutions", std::move(resolutions)},
                              {"tolerances", std::move(tolerances)},
                              {"versions", {{"blt", kVersion}, {"fftw", std::string(fftw_version)}, {"boost", BOOST_LIB_VERSION}}},
                              {"seed", cfg.seed}};
  return r;
}

void finish(Report& r, const ScenarioConfig& cfg) {
  r.json["passed"] = r.passed;
  r.files.push_back(io::write_text(cfg.out, "report.json", r.json.dump(2) + "\n"));
}

std::string fmt(double v) { return io::format_double(v); }

}  // namespace

// --- configuration -------------------------------------------------------------

namespace {

signal::Kind kind_named(const std::string& name) {
  try {
    return signal::kind_from_string(name);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

signal::GeneratorSpec parse_signal(const Json& j) {
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (name.rfind("bspline", 0) == 0 && name.size() > 7) return signal::GeneratorSpec::bspline(std::stoi(name.substr(7)));
    return signal::GeneratorSpec::of(kind_named(name));
  }
  if (!j.is_object() || !j.contains("kind")) throw ConfigError("signal spec needs a \"kind\"");
  for (const auto& [key, _] : j.items()) {
    if (key != "kind" && key != "order" && key != "transition") throw ConfigError("unknown signal key \"" + key + "\"");
  }
  auto spec = signal::GeneratorSpec::of(kind_named(j.at("kind").get<std::string>()));
  if (spec.kind == signal::Kind::Custom) throw ConfigError("custom signals are given with \"signal_csv\"");
  if (j.contains("order")) spec.order = j.at("order").get<int>();
  if (j.contains("transition")) spec.transition = j.at("transition").get<double>();
  return spec;
}

ScenarioConfig parse_config(const std::string& scenario, const Json& doc) {
  if (std::find(kScenarios.begin(), kScenarios.end(), scenario) == kScenarios.end()) {
    throw ConfigError("unknown scenario \"" + scenario + "\"");
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known{"scenario", "signal",      "signal_csv", "families",       "nx",
                                           "ny",       "planar",      "p_values",   "eps",            "k0_range",
                                           "windows",  "window_pad",  "count",      "seed",           "fields",
                                           "random_fields", "threshold", "refine_tol", "out",         "expect"};
  for (const auto& [key, _] : doc.items()) {
    if (!known.count(key)) throw ConfigError("unknown config key \"" + key + "\"");
  }
  ScenarioConfig c;
  c.scenario = scenario;
  c.raw = doc;
  try {
    if (doc.contains("scenario") && doc.at("scenario").get<std::string>() != scenario) {
      throw ConfigError("config is for scenario \"" + doc.at("scenario").get<std::string>() + "\"");
    }
    if (doc.contains("signal")) c.signal = parse_signal(doc.at("signal"));
    if (doc.contains("signal_csv")) c.signal_csv = doc.at("signal_csv").get<std::string>();
    if (doc.contains("families")) {
      for (const auto& f : doc.at("families")) c.families.push_back(parse_signal(f));
      if (c.families.empty()) throw ConfigError("families must be nonempty");
    } else {
      c.families = default_families();
    }
    c.nx = doc.value("nx", c.nx);
    c.ny = doc.value("ny", c.nx);
    if (doc.contains("planar")) {
      const auto& p = doc.at("planar");
      c.planar_n = p.value("n", c.planar_n);
      c.torus_side = p.value("torus_side", c.torus_side);
      c.bandwidth = p.value("bandwidth", c.bandwidth);
    }
    c.p_values = doc.contains("p_values") ? doc.at("p_values").get<std::vector<double>>() : default_p(scenario);
    if (doc.contains("eps")) c.eps = doc.at("eps").get<std::vector<double>>();
    if (doc.contains("k0_range")) {
      const auto v = doc.at("k0_range").get<std::vector<int>>();
      if (v.size() != 2 || v[0] > v[1]) throw ConfigError("k0_range must be [lo, hi]");
      c.k0_range = {v[0], v[1]};
    }
    if (doc.contains("windows")) {
      const auto v = doc.at("windows").get<std::vector<int>>();
      if (v.size() != 2 || v[0] > v[1] || v[0] < 3) throw ConfigError("windows must be exponents [lo, hi] with lo >= 3");
      c.window_exponents = {v[0], v[1]};
    }
    c.window_pad = doc.value("window_pad", c.window_pad);
    c.count = doc.value("count", scenario == "degree-check" ? 0 : c.count);
    c.seed = doc.value("seed", c.seed);
    if (doc.contains("fields")) {
      for (const auto& f : doc.at("fields")) {
        FieldEntry e;
        if (f.is_string() && f.get<std::string>() == "periodic_constant") {
          e.name = "periodic_constant";
          e.periodic_constant = true;
        } else {
          e.spec = parse_signal(f);
          e.name = signal::describe(e.spec);
        }
        c.fields.push_back(e);
      }
    } else if (scenario == "degree-check") {
      for (auto s : {signal::GeneratorSpec::hat(), signal::GeneratorSpec::gaussian()}) {
        c.fields.push_back({signal::describe(s), false, s});
      }
      c.fields.push_back({"periodic_constant", true, {}});
    }
    c.random_fields = doc.value("random_fields", c.random_fields);
    c.threshold = doc.value("threshold", c.threshold);
    c.refine_tol = doc.value("refine_tol", c.refine_tol);
    c.out = doc.value("out", std::string("out/") + scenario);
    if (doc.contains("expect")) c.expect = doc.at("expect");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }

  if (c.signal_csv.empty()) require_power_of_two(c.nx, "nx");
  require_power_of_two(c.ny, "ny");
  require_power_of_two(c.planar_n, "planar.n");
  if (!(c.torus_side > 0.0)) throw ConfigError("planar.torus_side must be positive");
  if (c.bandwidth < 1) throw ConfigError("planar.bandwidth must be >= 1");
  for (double p : c.p_values) {
    if (!(p > 1.0) || !std::isfinite(p)) throw ConfigError("p values must be finite and > 1");
  }
  for (std::size_t i = 0; i < c.eps.size(); ++i) {
    if (!(c.eps[i] > 0.0) || (i > 0 && !(c.eps[i] < c.eps[i - 1]))) {
      throw ConfigError("eps must be positive and strictly decreasing");
    }
  }
  if (scenario == "sweep-embedding" && c.count < 20) throw ConfigError("sweep-embedding needs count >= 20");
  if (c.count < 0 || c.random_fields < 0) throw ConfigError("counts must be nonnegative");
  if (c.window_pad < 0.0) throw ConfigError("window_pad must be nonnegative");
  return c;
}

// --- random fields -------------------------------------------------------------

namespace {

struct BandCoefficients {
  std::vector<std::pair<std::array<int, 2>, Complex>> terms;
};

BandCoefficients draw_band(std::mt19937_64& rng, int bandwidth) {
  std::normal_distribution<double> normal(0.0, 1.0);
  BandCoefficients c;
  for (int k2 = -bandwidth; k2 <= bandwidth; ++k2) {
    for (int k1 = -bandwidth; k1 <= bandwidth; ++k1) {
      const double re = normal(rng);
      const double im = normal(rng);
      c.terms.push_back({{k1, k2}, {re, im}});
    }
  }
  return c;
}

PlanarField synthesize(const BandCoefficients& c, long n, double side) {
  PlanarField f;
  f.origin_x = 0.0;
  f.origin_y = 0.0;
  f.step = side / static_cast<double>(n);
  f.periodic_extent = side;
  f.values = ComplexMatrix(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (const auto& [k, coef] : c.terms) {
    f.values(static_cast<std::size_t>(positive_mod(k[1], n)), static_cast<std::size_t>(positive_mod(k[0], n))) = coef;
  }
  fft::transform_2d(f.values, fft::Direction::Backward);
  return f;
}

}  // namespace

PlanarField random_bandlimited(std::mt19937_64& rng, long n, double side, int bandwidth) {
  if (2 * bandwidth >= n) throw std::invalid_argument("random_bandlimited: bandwidth above Nyquist");
  return synthesize(draw_band(rng, bandwidth), n, side);
}

std::pair<PlanarField, PlanarField> random_bandlimited_pair(std::mt19937_64& rng, long n, double side, int bandwidth) {
  if (2 * bandwidth >= n) throw std::invalid_argument("random_bandlimited: bandwidth above Nyquist");
  const auto c = draw_band(rng, bandwidth);
  return {synthesize(c, n, side), synthesize(c, 2 * n, side)};
}

SweepCell sobolev_growth(const signal::GeneratorSpec& spec, double s, std::pair<int, int> exponents, double pad,
                         bool fourier_side) {
  SweepCell cell;
  for (int e = exponents.first; e <= exponents.second; ++e) {
    const long n = 1L << e;
    const auto f = signal::make_signal(spec, 1.0 / static_cast<double>(n), pad);
    const double v = fourier_side ? signal::sobolev_norm(signal::fourier_transform(f), {s})
                                  : signal::sobolev_norm(f, {s});
    cell.windows.push_back(n);
    cell.norms.push_back(v);
  }
  const std::size_t m = cell.norms.size();
  if (m >= 3) {
    const double d1 = cell.norms[m - 2] * cell.norms[m - 2] - cell.norms[m - 3] * cell.norms[m - 3];
    const double d2 = cell.norms[m - 1] * cell.norms[m - 1] - cell.norms[m - 2] * cell.norms[m - 2];
    cell.slope = d2;
    const double scale = cell.norms[m - 1] * cell.norms[m - 1];
    // increments at rounding level count as converged
    cell.divergent = d2 > 1e-10 * scale && d2 > 0.75 * d1;
  }
  return cell;
}

// --- analyze ---------------------------------------------------------------------

constexpr long kProfileCells = 64;

Report run_analyze(const ScenarioConfig& cfg) {
  const auto f = stage("signal", [&] {
    if (!cfg.signal_csv.empty()) {
      std::ifstream in(cfg.signal_csv);
      if (!in) throw std::runtime_error("cannot open " + cfg.signal_csv);
      return signal::read_csv(in);
    }
    return signal::make_signal(cfg.signal, 1.0 / static_cast<double>(cfg.nx));
  });
  const long nx = signal::points_per_unit(f.step);
  const std::string label = cfg.signal_csv.empty() ? signal::describe(cfg.signal) : cfg.signal_csv;
  const Json res{{"nx", nx}, {"ny", cfg.ny}};
  Report r = start_report(cfg, res,
                          Json{{"refine_tol", cfg.refine_tol},
                               {"unitarity", 1e-3},
                               {"qp_residual", 1e-9},
                               {"witness_threshold", cfg.threshold},
                               {"eps", cfg.eps}});

  const auto z = stage("zak_transform", [&] { return zak::zak_transform(f, cfg.ny); });
  const auto diag = stage("frame_diagnostics", [&] { return zak::frame_diagnostics(z, cfg.refine_tol); });
  r.json["results"].push_back(labelled("frame_diagnostics", res, io::to_json(diag)));

  const double qp = stage("qp_residual", [&] { return zak::qp_residual(f, z); });
  r.json["results"].push_back(labelled("qp_residual", res, Json{{"max_deviation", qp}}));
  add_assertion(r, "qp_residual", qp < 1e-9, fmt(qp));

  const double nf = signal::l2_norm(f);
  const double unit = std::abs(zak::l2_norm(z) - nf) / nf;
  r.json["results"].push_back(labelled("unitarity", res, Json{{"norm_f", nf}, {"relative_error", unit}}));
  add_assertion(r, "unitarity", unit < 1e-3, fmt(unit));

  std::ostringstream zcsv;
  io::write_zak_csv(zcsv, z);
  r.files.push_back(io::write_text(cfg.out, "zak.csv", zcsv.str()));
  r.files.push_back(io::write_text(cfg.out, "zak.json", io::zak_sidecar(z, label).dump(2) + "\n"));

  std::optional<int> degree;
  if (z.nx == z.ny) {
    try {
      const degree::QuasiPeriodicZak base(z, label);
      const auto d = stage("vmo_degree", [&] { return degree::vmo_degree(base, cfg.eps, degree::unit_square()); });
      Json levels = Json::array();
      for (const auto& l : d.levels) levels.push_back(io::to_json(l.winding, l.epsilon));
      r.json["results"].push_back(labelled("winding_number", res, levels));
      degree = d.degree;
      add_assertion(r, "winding stable across eps", true, "degree " + std::to_string(d.degree));
    } catch (const StageError& e) {
      r.json["results"].push_back(labelled("winding_number", res, Json{{"error", e.what()}}));
      add_assertion(r, "winding stable across eps", false, e.what());
    }
    const auto w = stage("ess_inf_witness", [&] { return degree::ess_inf_witness(z, cfg.eps, cfg.threshold); });
    Json rows = Json::array();
    for (const auto& row : w.rows) {
      rows.push_back(Json{{"eps", row.epsilon},
                          {"min_mod", row.min_modulus},
                          {"argmin", {row.argmin.x, row.argmin.y}},
                          {"winding", row.winding_defined ? Json(row.winding) : Json()},
                          {"qp_defect", row.qp_defect}});
    }
    r.json["results"].push_back(labelled("ess_inf_witness", res, Json{{"rows", rows}, {"consistent", w.consistent}}));
    add_assertion(r, "ess-inf witness consistent", w.consistent,
                  "nonzero winding needs min|F_eps| < " + fmt(cfg.threshold) + " at the finest eps");
    std::ostringstream wcsv;
    io::write_witness_csv(wcsv, w);
    r.files.push_back(io::write_text(cfg.out, "ess_inf.csv", wcsv.str()));
  }

  // Oscillation of the windowed extension, on a 64-per-unit subgrid to keep the planar field small.
  if (z.nx == z.ny && z.nx >= kProfileCells) {
    const long stride = z.nx / kProfileCells;
    zak::ZakField coarse;
    coarse.nx = coarse.ny = kProfileCells;
    coarse.values = ComplexMatrix(kProfileCells, kProfileCells);
    for (long j = 0; j < kProfileCells; ++j)
      for (long k = 0; k < kProfileCells; ++k) coarse.values(j, k) = z(j * stride, k * stride);
    const auto w = stage("window_field", [&] { return osc::window_field(coarse, osc::WindowSpec{}); });
    const auto sc = osc::default_scales(w);
    const auto prof = stage("vmo_modulus", [&] { return osc::vmo_modulus(w, sc); });
    const double direct = stage("bmo_direct", [&] { return osc::bmo_direct(w, sc); });
    const double lp = stage("bmo_lp", [&] { return osc::bmo_lp(w, 3, sc); });
    const Json wres{{"cells_per_unit", kProfileCells}, {"grid", w.rows()}, {"torus_side", *w.periodic_extent}};
    r.json["results"].push_back(labelled(
        "vmo_modulus", wres,
        Json{{"scales", prof.scales}, {"omega", prof.values}, {"per_scale", prof.per_scale}, {"bmo_direct", direct},
             {"bmo_lp", lp}, {"fine_to_coarse", prof.values.back() / prof.values.front()}}));
    std::ostringstream pcsv;
    io::write_profile_csv(pcsv, prof);
    r.files.push_back(io::write_text(cfg.out, "oscillation.csv", pcsv.str()));
  }

  // optional expectations
  const auto& ex = cfg.expect;
  auto in_range = [&](const char* key, double v) {
    if (!ex.contains(key)) return;
    const auto b = ex.at(key).get<std::vector<double>>();
    add_assertion(r, std::string("expect ") + key, v >= b.at(0) && v <= b.at(1), fmt(v));
  };
  in_range("A", diag.lower_bound_A);
  in_range("B", diag.upper_bound_B);
  in_range("min_abs", diag.min_abs);
  if (ex.contains("argmin")) {
    const auto a = ex.at("argmin").get<std::vector<double>>();  // x, y, tolerance
    const double dist = std::hypot(diag.argmin[0] - a.at(0), diag.argmin[1] - a.at(1));
    add_assertion(r, "expect argmin", dist <= a.at(2), fmt(diag.argmin[0]) + "," + fmt(diag.argmin[1]));
  }
  if (ex.contains("winding")) {
    const int w = ex.at("winding").get<int>();
    add_assertion(r, "expect winding", degree && *degree == w, degree ? std::to_string(*degree) : "undefined");
  }
  finish(r, cfg);
  return r;
}

// --- sweep-critical --------------------------------------------------------------

Report run_sweep_critical(const ScenarioConfig& cfg) {
  const Json res{{"zak", cfg.nx},
                 {"windows", {1L << cfg.window_exponents.first, 1L << cfg.window_exponents.second}},
                 {"window_pad", cfg.window_pad}};
  const double tol = 1e-3;
  Report r = start_report(cfg, res,
                          Json{{"divergence_ratio", 0.75}, {"min_abs_tolerance", tol}, {"refine_tol", cfg.refine_tol}});
  std::ostringstream csv;
  csv << "family,param,p,norm_f,norm_fhat,min_abs_zak\n";
  for (const auto& spec : cfg.families) {
    const std::string fam = signal::to_string(spec.kind);
    const std::string name = signal::describe(spec);
    const auto f = stage(name + ": signal", [&] { return signal::make_signal(spec, 1.0 / static_cast<double>(cfg.nx)); });
    const auto z = stage(name + ": zak_transform", [&] { return zak::zak_transform(f, cfg.nx); });
    const auto diag = stage(name + ": frame_diagnostics", [&] { return zak::frame_diagnostics(z, cfg.refine_tol); });
    bool any_joint_finite = false;
    bool all_divergent = true;
    Json cells = Json::array();
    for (double p : cfg.p_values) {
      const double q = osc::conjugate_exponent(p);
      const auto nf = stage(name + ": sobolev_norm",
                            [&] { return sobolev_growth(spec, p / 2, cfg.window_exponents, cfg.window_pad, false); });
      const auto nh = stage(name + ": sobolev_norm(fourier)",
                            [&] { return sobolev_growth(spec, q / 2, cfg.window_exponents, cfg.window_pad, true); });
      const bool joint = !nf.divergent && !nh.divergent;
      any_joint_finite = any_joint_finite || joint;
      all_divergent = all_divergent && (nf.divergent || nh.divergent);
      auto cell = [](const SweepCell& c) { return fmt(c.norms.back()) + (c.divergent ? ":divergent" : ""); };
      csv << fam << ',' << param_of(spec) << ',' << fmt(p) << ',' << cell(nf) << ',' << cell(nh) << ','
          << fmt(diag.min_abs) << '\n';
      cells.push_back(Json{{"p", p},
                           {"norm_f", {{"windows", nf.windows}, {"norms", nf.norms}, {"divergent", nf.divergent},
                                       {"slope", nf.slope}}},
                           {"norm_fhat", {{"windows", nh.windows}, {"norms", nh.norms}, {"divergent", nh.divergent},
                                          {"slope", nh.slope}}}});
    }
    r.json["results"].push_back(labelled("sobolev_norm", res, Json{{"family", name}, {"cells", cells}}));
    r.json["results"].push_back(labelled("frame_diagnostics", Json{{"nx", cfg.nx}, {"ny", cfg.nx}},
                                         Json{{"family", name}, {"min_abs_zak", diag.min_abs}}));
    if (any_joint_finite) {
      add_assertion(r, name + ": finite joint norms force a Zak zero", diag.min_abs < tol, fmt(diag.min_abs));
    }
    if (spec.kind == signal::Kind::Box) {
      add_assertion(r, name + ": |Zf| = 1 and every conjugate pair divergent",
                    std::abs(diag.min_abs - 1.0) < 1e-9 && all_divergent, fmt(diag.min_abs));
    }
  }
  r.files.push_back(io::write_text(cfg.out, "sweep_critical.csv", csv.str()));
  finish(r, cfg);
  return r;
}

// --- sweep-embedding -------------------------------------------------------------

Report run_sweep_embedding(const ScenarioConfig& cfg) {
  const long n = cfg.planar_n;
  const Json res{{"n", {n, 2 * n}}, {"torus_side", cfg.torus_side}, {"bandwidth", cfg.bandwidth}};
  Report r = start_report(cfg, res, Json{{"doubling_factor", 2.0}, {"homogeneity", 1e-9}, {"c", 3}});
  std::mt19937_64 rng(cfg.seed);
  const std::size_t np = cfg.p_values.size();
  std::vector<double> max_lo(np, 0.0), max_hi(np, 0.0);
  double worst_homog = 0.0;
  std::ostringstream csv;
  csv << "field,p,n,ratio\n";
  for (int i = 0; i < cfg.count; ++i) {
    const auto [lo, hi] = stage("random_field", [&] { return random_bandlimited_pair(rng, n, cfg.torus_side, cfg.bandwidth); });
    // bmo_lp does not depend on p
    const std::array<double, 2> bmo{stage("bmo_lp", [&] { return osc::bmo_lp(lo, 3, osc::default_scales(lo)); }),
                                    stage("bmo_lp", [&] { return osc::bmo_lp(hi, 3, osc::default_scales(hi)); })};
    for (std::size_t ip = 0; ip < np; ++ip) {
      const double p = cfg.p_values[ip];
      const double q = osc::conjugate_exponent(p);
      const double a = bmo[0] / stage("spq_norm", [&] { return osc::spq_norm(lo, p, q); });
      const double b = bmo[1] / stage("spq_norm", [&] { return osc::spq_norm(hi, p, q); });
      max_lo[ip] = std::max(max_lo[ip], a);
      max_hi[ip] = std::max(max_hi[ip], b);
      csv << i << ',' << fmt(p) << ',' << n << ',' << fmt(a) << '\n';
      csv << i << ',' << fmt(p) << ',' << 2 * n << ',' << fmt(b) << '\n';
      if (i == 0) {
        PlanarField scaled = lo;
        for (auto& v : scaled.values.flat()) v *= 10.0;
        const double c = osc::embedding_ratio(scaled, p);
        worst_homog = std::max(worst_homog, std::abs(c - a) / a);
      }
    }
  }
  for (std::size_t ip = 0; ip < np; ++ip) {
    const double p = cfg.p_values[ip];
    const double ratio = max_hi[ip] / max_lo[ip];
    r.json["results"].push_back(labelled("embedding_ratio", res,
                                         Json{{"p", p}, {"max_ratio", {{std::to_string(n), max_lo[ip]},
                                                                      {std::to_string(2 * n), max_hi[ip]}}}}));
    add_assertion(r, "p = " + fmt(p) + ": max ratio finite", std::isfinite(max_lo[ip]) && std::isfinite(max_hi[ip]),
                  fmt(max_lo[ip]) + ", " + fmt(max_hi[ip]));
    add_assertion(r, "p = " + fmt(p) + ": stable under grid doubling", ratio < 2.0 && ratio > 0.5, fmt(ratio));
  }
  r.json["results"].push_back(labelled("embedding_ratio", res, Json{{"homogeneity_error", worst_homog}}));
  add_assertion(r, "ratio invariant under F -> 10 F", worst_homog < 1e-9, fmt(worst_homog));
  r.files.push_back(io::write_text(cfg.out, "embedding.csv", csv.str()));
  finish(r, cfg);
  return r;
}

// --- weight-table ------------------------------------------------------------------

Report run_weight_table(const ScenarioConfig& cfg) {
  const Json res{{"k0", {cfg.k0_range.first, cfg.k0_range.second}}, {"extent", "8 * 2^k0"}};
  Report r = start_report(cfg, res, Json{{"quadrature_rel", 1e-5}, {"late_variation", 0.1}});
  std::vector<osc::WeightRow> rows;
  for (double p : cfg.p_values) {
    std::vector<double> masses;
    std::vector<double> decay;
    for (int k0 = cfg.k0_range.first; k0 <= cfg.k0_range.second; ++k0) {
      const auto row = stage("weight_sweep", [&] { return osc::weight_sweep(k0, p); });
      rows.push_back(row);
      masses.push_back(row.max_mass);
      decay.push_back(row.decay_term);
    }
    r.json["results"].push_back(labelled("weight_sweep", res, Json{{"p", p}, {"max_mass", masses}, {"decay_term", decay}}));
    const int late = std::max(cfg.k0_range.first, cfg.k0_range.second - 4);
    const auto first = masses.begin() + (late - cfg.k0_range.first);
    const auto [mn, mx] = std::minmax_element(first, masses.end());
    const double variation = (*mx - *mn) / *mx;
    add_assertion(r, "p = " + fmt(p) + ": late-k0 variation < 10%", variation < 0.1, fmt(variation));
    if (osc::conjugate_exponent(p) > 2.0) {
      const bool mono = std::is_sorted(decay.rbegin(), decay.rend()) && decay.front() > decay.back();
      add_assertion(r, "p = " + fmt(p) + ": decay term decreasing", mono, fmt(decay.back()));
    }
  }
  std::ostringstream csv;
  io::write_weight_csv(csv, rows);
  r.files.push_back(io::write_text(cfg.out, "weight_table.csv", csv.str()));
  finish(r, cfg);
  return r;
}

// --- degree-check --------------------------------------------------------------------

Report run_degree_check(const ScenarioConfig& cfg) {
  const long n = cfg.nx;
  const Json res{{"nx", n}, {"ny", n}};
  Report r = start_report(cfg, res, Json{{"eps", cfg.eps}, {"defect_growth", 1.5}, {"telescoping", "2 defect / min|F|"}});

  struct Item {
    std::string name;
    std::unique_ptr<degree::ExtendedField> base;
    int expected;
  };
  std::vector<Item> items;
  for (const auto& e : cfg.fields) {
    if (e.periodic_constant) {
      items.push_back({e.name, std::make_unique<degree::PeriodicGrid>(
                                   ComplexMatrix(static_cast<std::size_t>(n), static_cast<std::size_t>(n), 1.0), e.name),
                       0});
    } else {
      const auto f = stage(e.name + ": signal", [&] { return signal::make_signal(e.spec, 1.0 / static_cast<double>(n)); });
      items.push_back({e.name, std::make_unique<degree::QuasiPeriodicZak>(zak::zak_transform(f, n), e.name), 1});
    }
  }
  for (const auto& item : items) {
    const bool qp = item.expected == 1;
    Json entry{{"field", item.name}};
    try {
      const auto d = degree::vmo_degree(*item.base, cfg.eps, degree::unit_square());
      const auto dense = degree::vmo_degree(*item.base, cfg.eps, degree::unit_square(), 8 * static_cast<std::size_t>(n));
      Json levels = Json::array();
      for (const auto& l : d.levels) levels.push_back(io::to_json(l.winding, l.epsilon));
      entry["winding"] = levels;
      entry["degree"] = d.degree;
      add_assertion(r, item.name + ": degree " + std::to_string(item.expected), d.degree == item.expected,
                    std::to_string(d.degree));
      add_assertion(r, item.name + ": degree independent of path density", dense.degree == d.degree,
                    std::to_string(dense.degree));

      if (qp) {
        Json defects = Json::array();
        std::vector<double> over_eps;
        bool y_exact = true;
        for (std::size_t i = 0; i < cfg.eps.size(); ++i) {
          const double eps = cfg.eps[i];
          const auto fe = degree::mollify(*item.base, eps, degree::default_region(n, 8));
          const auto qd = degree::qp_defect(fe);
          const auto& lvl = d.levels[i].winding;
          const auto t = degree::telescoping(fe, qd, lvl.offset, 0);
          y_exact = y_exact && qd.y_defect == 0.0;
          over_eps.push_back(qd.defect / eps);
          defects.push_back(Json{{"eps", eps},
                                 {"defect", qd.defect},
                                 {"y_defect", qd.y_defect},
                                 {"telescoping_residual", t.residual},
                                 {"telescoping_bound", t.bound},
                                 {"psi_max", t.psi_max},
                                 {"closure", t.closure},
                                 {"min_modulus_vertical", t.min_modulus}});
          add_assertion(r, item.name + ": telescoping residual at eps = " + fmt(eps), t.residual < t.bound,
                        fmt(t.residual) + " < " + fmt(t.bound));
        }
        Json halving = Json::array();
        for (std::size_t i = 1; i < over_eps.size(); ++i) halving.push_back(over_eps[i] * cfg.eps[i] / (over_eps[i - 1] * cfg.eps[i - 1]));
        entry["qp_defect"] = defects;
        entry["defect_halving_ratios"] = halving;
        add_assertion(r, item.name + ": y-periodicity exact after mollification", y_exact, "");
        const double growth = *std::max_element(over_eps.begin(), over_eps.end()) / over_eps.front();
        add_assertion(r, item.name + ": defect / eps bounded", growth <= 1.5, fmt(growth));
      }
    } catch (const degree::WindingError& e) {
      entry["error"] = e.what();
      add_assertion(r, item.name + ": degree " + std::to_string(item.expected), false, e.what());
    }
    r.json["results"].push_back(labelled("vmo_degree", res, entry));
  }

  // Random Gabor-synthesized fields: the law is asserted for those whose mollified
  // quasi-periodicity defect stays below half of |F_eps| along the path.
  if (cfg.random_fields > 0) {
    std::mt19937_64 rng(cfg.seed);
    const auto zg = stage("random fields", [&] {
      return zak::zak_transform(signal::make_signal(signal::GeneratorSpec::gaussian(), 1.0 / static_cast<double>(n)), n);
    });
    int accepted = 0, drawn = 0, violations = 0;
    Json rows = Json::array();
    while (accepted < cfg.random_fields && drawn < 10 * cfg.random_fields) {
      ++drawn;
      const auto z = degree::gabor_synthesis(zg, degree::random_gabor_terms(rng, 1));
      const auto law = degree::quasi_periodic_winding_law(degree::QuasiPeriodicZak(z), cfg.eps);
      Json levels = Json::array();
      for (const auto& l : law.levels) {
        levels.push_back(Json{{"eps", l.epsilon},
                              {"winding", l.defined ? Json(l.winding) : Json()},
                              {"edge_ratio", l.defined ? Json(l.edge_ratio) : Json()}});
      }
      rows.push_back(Json{{"draw", drawn - 1}, {"admissible", law.admissible}, {"levels", levels}});
      if (!law.admissible) continue;
      ++accepted;
      if (!law.holds) ++violations;
    }
    r.json["results"].push_back(labelled("quasi_periodic_winding_law", res,
                                         Json{{"edge_ratio_tolerance", degree::kEdgeRatioTolerance},
                                              {"drawn", drawn},
                                              {"accepted", accepted},
                                              {"fields", rows}}));
    add_assertion(r, "random fields: enough admissible draws", accepted == cfg.random_fields,
                  std::to_string(accepted) + " of " + std::to_string(drawn));
    add_assertion(r, "random fields: winding +1 at every eps", violations == 0, std::to_string(violations) + " violations");
  }
  finish(r, cfg);
  return r;
}

Report run_scenario(const ScenarioConfig& cfg) {
  if (cfg.scenario == "analyze") return run_analyze(cfg);
  if (cfg.scenario == "sweep-critical") return run_sweep_critical(cfg);
  if (cfg.scenario == "sweep-embedding") return run_sweep_embedding(cfg);
  if (cfg.scenario == "weight-table") return run_weight_table(cfg);
  if (cfg.scenario == "degree-check") return run_degree_check(cfg);
  throw ConfigError("unknown scenario \"" + cfg.scenario + "\"");
}

}  // namespace blt::cli
