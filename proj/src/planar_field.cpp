#include "blt/planar_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace blt {

Complex PlanarField::bilinear(double x, double y) const {
  const double u = (x - origin_x) / step;
  const double v = (y - origin_y) / step;
  const double last_c = static_cast<double>(cols() - 1);
  const double last_r = static_cast<double>(rows() - 1);
  constexpr double slack = 1e-9;
  if (u < -slack || v < -slack || u > last_c + slack || v > last_r + slack) {
    throw std::out_of_range("bilinear: point outside the sampled field");
  }
  const double uc = std::clamp(u, 0.0, last_c);
  const double vc = std::clamp(v, 0.0, last_r);
  const auto c0 = static_cast<std::size_t>(std::min(std::floor(uc), last_c - 1));
  const auto r0 = static_cast<std::size_t>(std::min(std::floor(vc), last_r - 1));
  const double a = uc - static_cast<double>(c0);
  const double b = vc - static_cast<double>(r0);
  return (1 - a) * (1 - b) * values(r0, c0) + a * (1 - b) * values(r0, c0 + 1) +
         (1 - a) * b * values(r0 + 1, c0) + a * b * values(r0 + 1, c0 + 1);
}

void validate(const PlanarField& f) {
  if (!(f.step > 0.0)) throw std::invalid_argument("planar field: step must be positive");
  if (f.rows() < 2 || f.cols() < 2) throw std::invalid_argument("planar field: need at least 2x2 samples");
  for (const auto& v : f.values.flat()) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw std::invalid_argument("planar field: non-finite value");
  }
  if (f.periodic_extent) {
    const double t = *f.periodic_extent;
    if (f.rows() != f.cols() || std::abs(t - f.step * static_cast<double>(f.cols())) > 1e-9 * t) {
      throw std::invalid_argument("planar field: periodic extent must equal step*rows = step*cols");
    }
  }
}

PlanarField sample_field(double origin_x, double origin_y, double step, std::size_t n,
                         const std::function<Complex(double, double)>& fn) {
  PlanarField f;
  f.origin_x = origin_x;
  f.origin_y = origin_y;
  f.step = step;
  f.values = ComplexMatrix(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) f.values(r, c) = fn(f.x_at(c), f.y_at(r));
  }
  return f;
}

PlanarField sample_torus(double origin_x, double origin_y, double step, std::size_t n,
                         const std::function<Complex(double, double)>& fn) {
  PlanarField f = sample_field(origin_x, origin_y, step, n, fn);
  f.periodic_extent = step * static_cast<double>(n);
  return f;
}

}  // namespace blt
