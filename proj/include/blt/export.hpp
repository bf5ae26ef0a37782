#pragma once

#include "blt/degree.hpp"
#include "blt/oscillation.hpp"
#include "blt/zak.hpp"

#include "json.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace blt::io {

using Json = nlohmann::ordered_json;

// CSV writers use 17 significant digits so that reruns are byte-identical.

/// "j,k,re,im" plus a JSON sidecar {nx, ny, source}.
void write_zak_csv(std::ostream& out, const zak::ZakField& z);
Json zak_sidecar(const zak::ZakField& z, const std::string& source);

Json to_json(const zak::FrameDiagnostics& d);

/// "x,y,re,im" in row order.
void write_field_csv(std::ostream& out, const PlanarField& f);
Json field_sidecar(const PlanarField& f, const std::string& operation);

/// "scale,omega"
void write_profile_csv(std::ostream& out, const osc::OscillationProfile& p);

/// "k0,p,max_mass,argmax_cube,decay_term"
void write_weight_csv(std::ostream& out, const std::vector<osc::WeightRow>& rows);

Json to_json(const degree::WindingResult& w, double eps);

/// "eps,min_mod,x,y,winding"; an undefined winding is written as "nan".
void write_witness_csv(std::ostream& out, const degree::WitnessReport& r);

/// Writes text to dir/name, creating dir. Returns the path written.
std::filesystem::path write_text(const std::filesystem::path& dir, const std::string& name, const std::string& text);

std::string format_double(double v);

}  // namespace blt::io
