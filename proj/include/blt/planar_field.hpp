#pragma once

#include "blt/grid.hpp"

#include <functional>
#include <optional>

namespace blt {

struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
};

/// Complex samples on a uniform square grid. values(r, c) sits at
/// (origin_x + c*step, origin_y + r*step).
struct PlanarField {
  double origin_x = 0.0;
  double origin_y = 0.0;
  double step = 1.0;
  ComplexMatrix values;
  /// Torus side for spectral operations; when set, equals step*rows = step*cols.
  std::optional<double> periodic_extent;

  std::size_t rows() const { return values.rows(); }
  std::size_t cols() const { return values.cols(); }
  double x_at(std::size_t c) const { return origin_x + static_cast<double>(c) * step; }
  double y_at(std::size_t r) const { return origin_y + static_cast<double>(r) * step; }
  double x_end() const { return origin_x + static_cast<double>(cols()) * step; }
  double y_end() const { return origin_y + static_cast<double>(rows()) * step; }

  /// Bilinear interpolation; (x, y) must lie inside the sampled rectangle.
  Complex bilinear(double x, double y) const;
};

/// Checks the PlanarField invariants; throws std::invalid_argument.
void validate(const PlanarField& f);

/// Samples fn on an n x n grid with the given origin and step.
PlanarField sample_field(double origin_x, double origin_y, double step, std::size_t n,
                         const std::function<Complex(double, double)>& fn);

/// Same, tagged as a torus of side n*step.
PlanarField sample_torus(double origin_x, double origin_y, double step, std::size_t n,
                         const std::function<Complex(double, double)>& fn);

}  // namespace blt
