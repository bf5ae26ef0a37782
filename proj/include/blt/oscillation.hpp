#pragma once

#include "blt/planar_field.hpp"
#include "blt/zak.hpp"

#include <string>
#include <utility>
#include <vector>

namespace blt::osc {

/// Square of side 2^scale_exp with corner at anchor*side, or at (anchor + 1/2)*side
/// on the half-shifted mesh.
struct DyadicCube {
  int scale_exp = 0;
  std::array<long, 2> anchor{0, 0};
  bool shifted = false;

  double side() const;
  double x0() const;
  double y0() const;
  std::string label() const;
};

/// Inclusive range of dyadic exponents j (cube sides 2^j).
using ScaleRange = std::pair<int, int>;

struct OscillationProfile {
  std::vector<double> scales;     // strictly decreasing
  std::vector<double> values;     // omega(a): sup over cubes of side <= a
  std::vector<double> per_scale;  // sup over cubes of side exactly a
};

// --- windowing -------------------------------------------------------------

struct WindowSpec {
  Rect inner{-1.0, -1.0, 2.0, 2.0};
  double transition = 0.5;
  double torus_side = 8.0;
};

/// Smooth e^{-1/t}-type cutoff: 1 on [a, b], 0 outside (a - t, b + t).
double cutoff_1d(double x, double a, double b, double transition);

/// Quasi-periodic extension of z times a smooth tensor cutoff, sampled on a torus of
/// side spec.torus_side centred on the inner rectangle, step 1/nx.
PlanarField window_field(const zak::ZakField& z, const WindowSpec& spec);

// --- mean oscillation --------------------------------------------------------

double mean_oscillation(const PlanarField& f, const DyadicCube& q);

/// Cubes of side 2^j on the dyadic and half-shifted meshes that lie inside the field.
std::vector<DyadicCube> cubes_in_field(const PlanarField& f, int j);

double bmo_direct(const PlanarField& f, ScaleRange scales);
OscillationProfile vmo_modulus(const PlanarField& f, ScaleRange scales);

/// Largest usable scale range: cube sides from 2*step up to half the shorter side.
ScaleRange default_scales(const PlanarField& f);

// --- Littlewood-Paley ---------------------------------------------------------

/// Radial partition of unity. phi is 1 on [0,1], 0 on [2,inf), and
/// psi_k(xi) = phi(|xi|/2^k) - phi(|xi|/2^{k-1}) is supported in 2^{k-1} <= |xi| <= 2^{k+1}.
struct LPPartition {
  static double phi(double r);
  static double psi(int k, double radius);
  static double low(int k, double radius);  // phi(|xi|/2^k)
};

PlanarField lp_project(const PlanarField& f, int k);
/// Multiplier phi(|xi|/2^k); sum_{k0<=k<=k1} P_k + lowpass(k0-1) = lowpass(k1).
PlanarField lp_lowpass(const PlanarField& f, int k);

double bmo_lp(const PlanarField& f, int c, ScaleRange scales);

/// (sum |F^(xi)|^2 (1 + |xi_1|^p + |xi_2|^q) dxi)^{1/2}, continuum scaled.
double spq_norm(const PlanarField& f, double p, double q);

/// bmo_lp(f, 3, scales) / spq_norm(f, p, p'); rejects the zero field.
double embedding_ratio(const PlanarField& f, double p, ScaleRange scales);
double embedding_ratio(const PlanarField& f, double p);

// --- frequency-side weight -------------------------------------------------

inline double conjugate_exponent(double p) { return p / (p - 1.0); }

/// Mesh cubes of side 2^k0 inside [-extent, extent]^2 lying in |xi| >= 2^{k0+1}. On the mesh this
/// removes exactly the central block [-2^{k0+1}, 2^{k0+1})^2, the cubes within reach of the origin
/// once P_k f (k >= k0 + 3) is smeared by a 2^k0-wide kernel.
std::vector<DyadicCube> admissible_cubes(int k0, double extent);
bool is_admissible(const DyadicCube& j);

/// (integral over 3J of (1 + |xi_1|^p + |xi_2|^{p'})^{-1})^{1/2}, adaptive Gauss-Kronrod.
double weight_mass(const DyadicCube& j, double p);

struct WeightRow {
  int k0 = 0;
  double p = 0.0;
  double max_mass = 0.0;
  DyadicCube argmax;
  double decay_term = 0.0;  // 2^{k0 (2 - p')}
};

/// Max of weight_mass over admissible cubes inside [-8*2^k0, 8*2^k0]^2.
WeightRow weight_sweep(int k0, double p);

}  // namespace blt::osc
