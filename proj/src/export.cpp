#include "blt/export.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace blt::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void write_zak_csv(std::ostream& out, const zak::ZakField& z) {
  out << "j,k,re,im\n";
  for (long j = 0; j < z.nx; ++j) {
    for (long k = 0; k < z.ny; ++k) {
      const Complex v = z(j, k);
      out << j << ',' << k << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
    }
  }
}

Json zak_sidecar(const zak::ZakField& z, const std::string& source) {
  return Json{{"nx", z.nx}, {"ny", z.ny}, {"source", source}};
}

Json to_json(const zak::FrameDiagnostics& d) {
  return Json{{"min_abs", d.min_abs},         {"argmin", {d.argmin[0], d.argmin[1]}},
              {"max_abs", d.max_abs},         {"A", d.lower_bound_A},
              {"B", d.upper_bound_B},         {"refined", d.refined}};
}

void write_field_csv(std::ostream& out, const PlanarField& f) {
  out << "x,y,re,im\n";
  for (std::size_t r = 0; r < f.rows(); ++r) {
    for (std::size_t c = 0; c < f.cols(); ++c) {
      const Complex v = f.values(r, c);
      out << format_double(f.x_at(c)) << ',' << format_double(f.y_at(r)) << ',' << format_double(v.real()) << ','
          << format_double(v.imag()) << '\n';
    }
  }
}

Json field_sidecar(const PlanarField& f, const std::string& operation) {
  Json j{{"operation", operation},
         {"origin", {f.origin_x, f.origin_y}},
         {"step", f.step},
         {"rows", f.rows()},
         {"cols", f.cols()}};
  if (f.periodic_extent) j["periodic_extent"] = *f.periodic_extent;
  return j;
}

void write_profile_csv(std::ostream& out, const osc::OscillationProfile& p) {
  out << "scale,omega\n";
  for (std::size_t i = 0; i < p.scales.size(); ++i) {
    out << format_double(p.scales[i]) << ',' << format_double(p.values[i]) << '\n';
  }
}

void write_weight_csv(std::ostream& out, const std::vector<osc::WeightRow>& rows) {
  out << "k0,p,max_mass,argmax_cube,decay_term\n";
  for (const auto& r : rows) {
    out << r.k0 << ',' << format_double(r.p) << ',' << format_double(r.max_mass) << ',' << r.argmax.label() << ','
        << format_double(r.decay_term) << '\n';
  }
}

Json to_json(const degree::WindingResult& w, double eps) {
  return Json{{"winding", w.winding},
              {"min_modulus_on_path", w.min_modulus_on_path},
              {"max_phase_step", w.max_phase_step},
              {"eps", eps},
              {"path_points", w.path_points}};
}

void write_witness_csv(std::ostream& out, const degree::WitnessReport& r) {
  out << "eps,min_mod,x,y,winding\n";
  for (const auto& row : r.rows) {
    out << format_double(row.epsilon) << ',' << format_double(row.min_modulus) << ',' << format_double(row.argmin.x)
        << ',' << format_double(row.argmin.y) << ',' << (row.winding_defined ? std::to_string(row.winding) : "nan")
        << '\n';
  }
}

std::filesystem::path write_text(const std::filesystem::path& dir, const std::string& name, const std::string& text) {
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  return path;
}

}  // namespace blt::io
