#include "blt/oscillation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace blt::osc {
namespace {

double smooth_step(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / u);
  const double b = std::exp(-1.0 / (1.0 - u));
  return a / (a + b);
}

long to_index(double v, double step, const char* what) {
  const double u = v / step;
  const double r = std::round(u);
  if (std::abs(u - r) > 1e-9 * std::max(1.0, std::abs(u))) {
    throw std::invalid_argument(std::string(what) + " is not aligned with the grid");
  }
  return static_cast<long>(r);
}

struct IndexBox {
  long c0, r0, size;
};

// Sample block covered by q, or nullopt when q leaves the field.
std::optional<IndexBox> locate(const PlanarField& f, const DyadicCube& q) {
  const long c0 = to_index(q.x0() - f.origin_x, f.step, "cube corner");
  const long r0 = to_index(q.y0() - f.origin_y, f.step, "cube corner");
  const long n = to_index(q.side(), f.step, "cube side");
  if (c0 < 0 || r0 < 0 || c0 + n > static_cast<long>(f.cols()) || r0 + n > static_cast<long>(f.rows())) {
    return std::nullopt;
  }
  return IndexBox{c0, r0, n};
}

template <typename Value>
double block_oscillation(const Matrix<Value>& m, const IndexBox& b) {
  Value mean{};
  for (long r = b.r0; r < b.r0 + b.size; ++r) {
    for (long c = b.c0; c < b.c0 + b.size; ++c) mean += m(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
  }
  const double count = static_cast<double>(b.size * b.size);
  mean /= count;
  double dev = 0.0;
  for (long r = b.r0; r < b.r0 + b.size; ++r) {
    for (long c = b.c0; c < b.c0 + b.size; ++c) {
      dev += std::abs(m(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) - mean);
    }
  }
  return dev / count;
}

double scale_sup(const PlanarField& f, int j) {
  double best = 0.0;
  for (const auto& q : cubes_in_field(f, j)) {
    best = std::max(best, block_oscillation(f.values, *locate(f, q)));
  }
  return best;
}

void check_scales(const PlanarField& f, ScaleRange scales) {
  if (scales.first > scales.second) throw std::invalid_argument("scale range is empty");
  const double finest = std::ldexp(1.0, scales.first);
  if (finest < 2.0 * f.step * (1 - 1e-12)) throw std::invalid_argument("cube scale below grid resolution");
}

}  // namespace

double DyadicCube::side() const { return std::ldexp(1.0, scale_exp); }
double DyadicCube::x0() const { return (static_cast<double>(anchor[0]) + (shifted ? 0.5 : 0.0)) * side(); }
double DyadicCube::y0() const { return (static_cast<double>(anchor[1]) + (shifted ? 0.5 : 0.0)) * side(); }

std::string DyadicCube::label() const {
  std::ostringstream os;
  os << scale_exp << ':' << anchor[0] << ':' << anchor[1];
  if (shifted) os << ":s";
  return os.str();
}

double cutoff_1d(double x, double a, double b, double transition) {
  return smooth_step((x - (a - transition)) / transition) * smooth_step(((b + transition) - x) / transition);
}

PlanarField window_field(const zak::ZakField& z, const WindowSpec& spec) {
  if (z.nx != z.ny) throw std::invalid_argument("window_field: needs a square Zak grid (nx == ny)");
  const Rect& in = spec.inner;
  if (in.x0 > 0.0 || in.y0 > 0.0 || in.x1 < 1.0 || in.y1 < 1.0) {
    throw std::invalid_argument("window_field: inner rectangle must contain the unit square");
  }
  if (!(spec.transition > 0.0)) throw std::invalid_argument("window_field: transition must be positive");
  const double h = 1.0 / static_cast<double>(z.nx);
  const double side = spec.torus_side;
  if (side < std::max(in.width(), in.height()) + 2.0 * spec.transition) {
    throw std::invalid_argument("window_field: torus too small for the grown rectangle");
  }
  const double ox = 0.5 * (in.x0 + in.x1) - 0.5 * side;
  const double oy = 0.5 * (in.y0 + in.y1) - 0.5 * side;
  for (double v : {in.x0, in.y0, in.x1, in.y1, spec.transition, side, ox, oy}) to_index(v, h, "window geometry");

  const long n = to_index(side, h, "torus side");
  const long jx0 = to_index(ox, h, "origin");
  const long jy0 = to_index(oy, h, "origin");
  PlanarField out;
  out.origin_x = ox;
  out.origin_y = oy;
  out.step = h;
  out.periodic_extent = side;
  out.values = ComplexMatrix(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  std::vector<double> wx(static_cast<std::size_t>(n)), wy(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    wx[static_cast<std::size_t>(i)] = cutoff_1d(ox + static_cast<double>(i) * h, in.x0, in.x1, spec.transition);
    wy[static_cast<std::size_t>(i)] = cutoff_1d(oy + static_cast<double>(i) * h, in.y0, in.y1, spec.transition);
  }
  for (long r = 0; r < n; ++r) {
    const double ay = wy[static_cast<std::size_t>(r)];
    if (ay == 0.0) continue;
    for (long c = 0; c < n; ++c) {
      const double w = ay * wx[static_cast<std::size_t>(c)];
      if (w == 0.0) continue;
      out.values(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = w * z.extended(jx0 + c, jy0 + r);
    }
  }
  return out;
}

double mean_oscillation(const PlanarField& f, const DyadicCube& q) {
  const auto box = locate(f, q);
  if (!box) throw std::out_of_range("mean_oscillation: cube " + q.label() + " leaves the field");
  if (box->size < 1) throw std::invalid_argument("mean_oscillation: cube smaller than a grid cell");
  return block_oscillation(f.values, *box);
}

std::vector<DyadicCube> cubes_in_field(const PlanarField& f, int j) {
  std::vector<DyadicCube> out;
  const double s = std::ldexp(1.0, j);
  for (bool shifted : {false, true}) {
    const double off = shifted ? 0.5 : 0.0;
    const long ax0 = static_cast<long>(std::ceil(f.origin_x / s - off - 1e-9));
    const long ax1 = static_cast<long>(std::floor(f.x_end() / s - off + 1e-9)) - 1;
    const long ay0 = static_cast<long>(std::ceil(f.origin_y / s - off - 1e-9));
    const long ay1 = static_cast<long>(std::floor(f.y_end() / s - off + 1e-9)) - 1;
    for (long ay = ay0; ay <= ay1; ++ay) {
      for (long ax = ax0; ax <= ax1; ++ax) out.push_back(DyadicCube{j, {ax, ay}, shifted});
    }
  }
  return out;
}

double bmo_direct(const PlanarField& f, ScaleRange scales) {
  check_scales(f, scales);
  double best = 0.0;
  for (int j = scales.first; j <= scales.second; ++j) best = std::max(best, scale_sup(f, j));
  return best;
}

OscillationProfile vmo_modulus(const PlanarField& f, ScaleRange scales) {
  check_scales(f, scales);
  OscillationProfile prof;
  for (int j = scales.second; j >= scales.first; --j) {
    prof.scales.push_back(std::ldexp(1.0, j));
    prof.per_scale.push_back(scale_sup(f, j));
  }
  prof.values.resize(prof.per_scale.size());
  double run = 0.0;
  for (std::size_t i = prof.per_scale.size(); i-- > 0;) {
    run = std::max(run, prof.per_scale[i]);
    prof.values[i] = run;
  }
  return prof;
}

ScaleRange default_scales(const PlanarField& f) {
  const double shorter = std::min(f.x_end() - f.origin_x, f.y_end() - f.origin_y);
  const int lo = static_cast<int>(std::ceil(std::log2(2.0 * f.step) - 1e-9));
  const int hi = static_cast<int>(std::floor(std::log2(0.5 * shorter) + 1e-9));
  return {lo, std::max(lo, hi)};
}

}  // namespace blt::osc
