#include "blt/oscillation.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <stdexcept>

namespace blt::osc {
namespace {

using boost::math::quadrature::gauss_kronrod;

constexpr double kInnerTol = 1e-7;
constexpr double kOuterTol = 1e-5;
constexpr unsigned kMaxDepth = 20;

// Adaptive Gauss-Kronrod with a breakpoint at 0, where |xi|^p has its kink.
template <typename F>
double integrate(F&& f, double a, double b, double tol) {
  if (a < 0.0 && b > 0.0) return integrate(f, a, 0.0, tol) + integrate(f, 0.0, b, tol);
  return gauss_kronrod<double, 15>::integrate(f, a, b, kMaxDepth, tol);
}

}  // namespace

bool is_admissible(const DyadicCube& j) {
  if (j.shifted) return false;
  // nearest point of the closed cube to the origin must have |xi| >= 2^{k0+1}
  const double s = j.side();
  auto nearest = [s](double a) { return a > 0.0 ? a : (a + s < 0.0 ? -(a + s) : 0.0); };
  return std::hypot(nearest(j.x0()), nearest(j.y0())) >= 2.0 * s;
}

std::vector<DyadicCube> admissible_cubes(int k0, double extent) {
  const double s = std::ldexp(1.0, k0);
  const long lo = static_cast<long>(std::ceil(-extent / s - 1e-9));
  const long hi = static_cast<long>(std::floor(extent / s + 1e-9)) - 1;
  std::vector<DyadicCube> out;
  for (long a2 = lo; a2 <= hi; ++a2) {
    for (long a1 = lo; a1 <= hi; ++a1) {
      DyadicCube j{k0, {a1, a2}, false};
      if (is_admissible(j)) out.push_back(j);
    }
  }
  return out;
}

double weight_mass(const DyadicCube& j, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("weight_mass: need 1 < p < inf");
  const double pc = conjugate_exponent(p);
  const double s = j.side();
  const double x0 = j.x0() - s, x1 = j.x0() + 2.0 * s;
  const double y0 = j.y0() - s, y1 = j.y0() + 2.0 * s;
  auto inner = [&](double xi1) {
    const double a = 1.0 + std::pow(std::abs(xi1), p);
    auto g = [a, pc](double xi2) { return 1.0 / (a + std::pow(std::abs(xi2), pc)); };
    return integrate(g, y0, y1, kInnerTol);
  };
  return std::sqrt(integrate(inner, x0, x1, kOuterTol));
}

WeightRow weight_sweep(int k0, double p) {
  WeightRow row;
  row.k0 = k0;
  row.p = p;
  row.decay_term = std::exp2(static_cast<double>(k0) * (2.0 - conjugate_exponent(p)));
  // The weight is even in each coordinate and the admissible set is symmetric under
  // a -> -a - 1, so the closed first quadrant of anchors covers every value.
  for (const auto& j : admissible_cubes(k0, 8.0 * std::ldexp(1.0, k0))) {
    if (j.anchor[0] < 0 || j.anchor[1] < 0) continue;
    const double m = weight_mass(j, p);
    if (m > row.max_mass) {
      row.max_mass = m;
      row.argmax = j;
    }
  }
  return row;
}

}  // namespace blt::osc
