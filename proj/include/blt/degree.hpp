#pragma once

#include "blt/planar_field.hpp"
#include "blt/zak.hpp"

#include <array>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace blt::degree {

/// A field known at every lattice point (i/n, j/n) of the plane.
class ExtendedField {
public:
  virtual ~ExtendedField() = default;
  virtual long cells_per_unit() const = 0;
  virtual Complex at(long i, long j) const = 0;
  virtual std::string name() const = 0;
  double step() const { return 1.0 / static_cast<double>(cells_per_unit()); }
};

/// Zak field continued by the quasi-periodicity relations.
class QuasiPeriodicZak final : public ExtendedField {
public:
  explicit QuasiPeriodicZak(zak::ZakField z, std::string label = "zak");
  long cells_per_unit() const override { return z_.nx; }
  Complex at(long i, long j) const override { return z_.extended(i, j); }
  std::string name() const override { return label_; }
  const zak::ZakField& field() const { return z_; }

private:
  zak::ZakField z_;
  std::string label_;
};

/// Samples on the unit square continued periodically in both directions.
class PeriodicGrid final : public ExtendedField {
public:
  PeriodicGrid(ComplexMatrix values, std::string label = "periodic");  // (i, j) = (x, y) index
  long cells_per_unit() const override { return static_cast<long>(values_.rows()); }
  Complex at(long i, long j) const override;
  std::string name() const override { return label_; }

private:
  ComplexMatrix values_;
  std::string label_;
};

/// Finite planar field; lattice points outside it are an error. Origin must be grid aligned.
class BoundedPlanar final : public ExtendedField {
public:
  explicit BoundedPlanar(PlanarField f, std::string label = "planar");
  long cells_per_unit() const override { return per_unit_; }
  Complex at(long i, long j) const override;
  std::string name() const override { return label_; }

private:
  PlanarField f_;
  long per_unit_;
  long i0_, j0_;
  std::string label_;
};

/// Inclusive lattice-index box.
struct IndexRegion {
  long i0, i1, j0, j1;
};

struct MollifiedField {
  double epsilon = 0.0;
  long cells_per_unit = 0;  // of the evaluation lattice
  long i0 = 0, j0 = 0;  // lattice index of values(0, 0)
  PlanarField values;   // cube averages on the base lattice

  Complex at(long i, long j) const;  // absolute lattice indices
  bool contains(long i, long j) const;
};

/// Averages of the base over cubes of side epsilon centred at each point of the evaluation
/// lattice (base lattice refined `oversample` times; region is in evaluation-lattice indices).
/// Samples are treated as cell-centred constants, so cut cells are weighted by overlap area.
MollifiedField mollify(const ExtendedField& base, double epsilon, IndexRegion region, int oversample = 1);

/// Region covering [-margin, 2 + margin] x [-margin, 1 + margin] in lattice units, enough for
/// winding on (shifted) unit squares and the x -> x + 1 comparison.
IndexRegion default_region(long cells_per_unit, long margin_cells);

struct QPDefect {
  double defect = 0.0;    // max |F(x+1, y) - e^{2 pi i y} F(x, y)| over [0,1)^2
  double y_defect = 0.0;  // max |F(x, y+1) - F(x, y)|
};

QPDefect qp_defect(const MollifiedField& f);

struct Point {
  double x = 0.0, y = 0.0;
};
using Path = std::vector<Point>;  // closed polyline, last vertex joins the first

/// Boundary of [x0, x0+1] x [y0, y0+1], counterclockwise.
Path unit_square(double x0 = 0.0, double y0 = 0.0);

struct WindingResult {
  int winding = 0;
  double min_modulus_on_path = 0.0;
  double max_phase_step = 0.0;
  std::size_t path_points = 0;
  double total_phase = 0.0;
  Point offset{};  // translation applied to the requested path, if any
};

class WindingError : public std::runtime_error {
public:
  enum class Kind { ZeroNearPath, NonConvergent, Instability };
  WindingError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

/// Tracks arg F along the path with bilinear interpolation, refining any step of pi/2 or more.
WindingResult winding_number(const PlanarField& f, const Path& path, std::size_t points_per_side);

inline const std::vector<double> kDefaultEpsilons{1.0 / 8, 1.0 / 16, 1.0 / 32};

struct DegreeLevel {
  double epsilon = 0.0;
  WindingResult winding;
};

struct DegreeResult {
  int degree = 0;
  std::vector<DegreeLevel> levels;
};

/// Winding of each mollification F_eps on the path; if the path passes too close to a zero it is
/// shifted diagonally by 2 lattice cells (up to 3 times). Disagreement across eps throws.
DegreeResult vmo_degree(const ExtendedField& base, const std::vector<double>& eps_list, const Path& path,
                        std::size_t points_per_side = 0);

/// Same, reusing already mollified fields.
WindingResult winding_with_retry(const MollifiedField& f, const Path& path, std::size_t points_per_side);

struct Telescoping {
  std::array<Complex, 4> edge_increments{};  // log-branch increments: bottom, right, top, left (downward)
  int winding = 0;
  /// |sum of the four increments - 2 pi i winding|
  double closure = 0.0;
  /// Psi(y) = gamma(x0+1, y) - gamma(x0, y) - 2 pi i (y - y0) along the vertical edges, with gamma
  /// continued separately up each edge from the path branch at the bottom corners.
  Complex psi_start{};
  Complex psi_end{};
  /// |(sum of increments) - 2 pi i - (Psi(top) - Psi(bottom)) - (bottom + top increments)|
  double identity_error = 0.0;
  /// Defect part of the decomposition: |Psi(top) - Psi(bottom)|.
  double residual = 0.0;
  /// max over the edge of |Psi(y) - 2 pi i j|, j the integer nearest Psi(bottom)/(2 pi i).
  double psi_max = 0.0;
  double bound = 0.0;  // 2 * defect / min|F| on the vertical edges
  double min_modulus = 0.0;
};

/// Decomposes the winding on the unit square with lower-left corner `corner` through the
/// mollified quasi-periodicity relation.
Telescoping telescoping(const MollifiedField& f, const QPDefect& defect, Point corner, std::size_t points_per_side);

/// max over the left edge of the unit square at `corner` (a lattice point) of
/// |F(x0+1, y) - e^{2 pi i y} F(x0, y)| / |F(x0, y)|.
double edge_defect_ratio(const MollifiedField& f, Point corner);

/// Below this edge ratio the log-branch defect stays under log 2, so a quasi-periodic field must
/// wind exactly once around the unit square.
inline constexpr double kEdgeRatioTolerance = 0.5;

struct LawLevel {
  double epsilon = 0.0;
  bool defined = false;
  int winding = 0;
  double edge_ratio = 0.0;
};

struct WindingLaw {
  std::vector<LawLevel> levels;
  bool admissible = true;  // winding defined and edge ratio below tolerance at every eps
  bool holds = true;       // admissible implies winding +1 at every eps
};

WindingLaw quasi_periodic_winding_law(const ExtendedField& base, const std::vector<double>& eps_list);

struct WitnessRow {
  double epsilon = 0.0;
  double min_modulus = 0.0;
  Point argmin{};
  int winding = 0;
  bool winding_defined = false;
  double qp_defect = 0.0;
};

struct WitnessReport {
  std::vector<WitnessRow> rows;
  double threshold = 0.0;
  /// A nonzero winding must come with min|F_eps| below threshold at the finest eps.
  bool consistent = true;
};

WitnessReport ess_inf_witness(const zak::ZakField& z, const std::vector<double>& eps_list, double threshold);

struct GaborTerm {
  long m = 0, n = 0;
  Complex coefficient{};
};

/// Zak field of sum c_{m,n} e^{2 pi i m .} g(. - n), computed from Zg. The source signal is dropped.
zak::ZakField gabor_synthesis(const zak::ZakField& zg, const std::vector<GaborTerm>& terms);

/// Standard complex normal coefficients on {-radius..radius}^2.
std::vector<GaborTerm> random_gabor_terms(std::mt19937_64& rng, int radius);

}  // namespace blt::degree
