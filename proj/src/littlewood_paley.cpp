#include "blt/fft.hpp"
#include "blt/oscillation.hpp"

#include <algorithm>
#include <cmath>
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

double torus_side(const PlanarField& f) {
  validate(f);
  if (!f.periodic_extent) throw std::invalid_argument("spectral operation needs a periodic field");
  return *f.periodic_extent;
}

// |xi| for every FFT bin.
Matrix<double> radii(std::size_t n, double side) {
  Matrix<double> out(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    const double x2 = static_cast<double>(fft::signed_index(r, n)) / side;
    for (std::size_t c = 0; c < n; ++c) {
      const double x1 = static_cast<double>(fft::signed_index(c, n)) / side;
      out(r, c) = std::hypot(x1, x2);
    }
  }
  return out;
}

template <typename Symbol>
PlanarField apply_multiplier(const PlanarField& f, const ComplexMatrix& spectrum, const Matrix<double>& rad,
                             Symbol symbol) {
  PlanarField out = f;
  out.values = spectrum;
  const double norm = 1.0 / static_cast<double>(spectrum.size());
  auto flat = out.values.flat();
  auto rflat = rad.flat();
  for (std::size_t i = 0; i < flat.size(); ++i) flat[i] *= symbol(rflat[i]) * norm;
  fft::transform_2d(out.values, fft::Direction::Backward);
  return out;
}

ComplexMatrix spectrum_of(const PlanarField& f) {
  ComplexMatrix s = f.values;
  fft::transform_2d(s, fft::Direction::Forward);
  return s;
}

}  // namespace

double LPPartition::phi(double r) { return 1.0 - smooth_step(r - 1.0); }

double LPPartition::low(int k, double radius) { return phi(radius / std::ldexp(1.0, k)); }

double LPPartition::psi(int k, double radius) {
  return phi(radius / std::ldexp(1.0, k)) - phi(radius / std::ldexp(1.0, k - 1));
}

PlanarField lp_project(const PlanarField& f, int k) {
  const double side = torus_side(f);
  const double nyquist = 0.5 / f.step;
  if (std::ldexp(1.0, k + 1) > nyquist * (1 + 1e-12)) {
    throw std::invalid_argument("lp_project: band 2^(k+1) exceeds the grid Nyquist frequency");
  }
  const auto rad = radii(f.rows(), side);
  return apply_multiplier(f, spectrum_of(f), rad, [k](double r) { return LPPartition::psi(k, r); });
}

PlanarField lp_lowpass(const PlanarField& f, int k) {
  const double side = torus_side(f);
  const auto rad = radii(f.rows(), side);
  return apply_multiplier(f, spectrum_of(f), rad, [k](double r) { return LPPartition::low(k, r); });
}

double bmo_lp(const PlanarField& f, int c, ScaleRange scales) {
  const double side = torus_side(f);
  if (scales.first > scales.second) throw std::invalid_argument("scale range is empty");
  if (std::ldexp(1.0, scales.first) < 2.0 * f.step * (1 - 1e-12)) {
    throw std::invalid_argument("bmo_lp: cube scale below grid resolution");
  }
  const std::size_t n = f.rows();
  const auto rad = radii(n, side);
  const ComplexMatrix spec = spectrum_of(f);
  const double max_radius = std::sqrt(2.0) * 0.5 / f.step;

  const int k_lo = c - scales.second;
  int k_hi = k_lo;
  while (std::ldexp(1.0, k_hi - 1) <= max_radius) ++k_hi;
  k_hi = std::max(k_hi, c - scales.first);

  // tail[k - k_lo] = sum_{k' >= k} |P_k' f|^2
  std::vector<Matrix<double>> tail(static_cast<std::size_t>(k_hi - k_lo + 1), Matrix<double>(n, n, 0.0));
  for (int k = k_hi; k >= k_lo; --k) {
    auto& acc = tail[static_cast<std::size_t>(k - k_lo)];
    if (k < k_hi) acc = tail[static_cast<std::size_t>(k + 1 - k_lo)];
    const PlanarField piece = apply_multiplier(f, spec, rad, [k](double r) { return LPPartition::psi(k, r); });
    auto a = acc.flat();
    auto p = piece.values.flat();
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += std::norm(p[i]);
  }

  double best = 0.0;
  for (int j = scales.first; j <= scales.second; ++j) {
    const auto& square = tail[static_cast<std::size_t>(c - j - k_lo)];
    const long m = std::lround(std::ldexp(1.0, j) / f.step);
    for (const auto& q : cubes_in_field(f, j)) {
      const long c0 = std::lround((q.x0() - f.origin_x) / f.step);
      const long r0 = std::lround((q.y0() - f.origin_y) / f.step);
      double sum = 0.0;
      for (long r = r0; r < r0 + m; ++r) {
        for (long cc = c0; cc < c0 + m; ++cc) sum += square(static_cast<std::size_t>(r), static_cast<std::size_t>(cc));
      }
      best = std::max(best, std::sqrt(sum / static_cast<double>(m * m)));
    }
  }
  return best;
}

double spq_norm(const PlanarField& f, double p, double q) {
  const double side = torus_side(f);
  if (!(p > 0.0) || !(q > 0.0) || !std::isfinite(p) || !std::isfinite(q)) {
    throw std::invalid_argument("spq_norm: exponents must be positive and finite");
  }
  const std::size_t n = f.rows();
  const ComplexMatrix spec = spectrum_of(f);
  const double scale = f.step * f.step;
  double acc = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    const double xi2 = std::abs(static_cast<double>(fft::signed_index(r, n)) / side);
    const double w2 = std::pow(xi2, q);
    for (std::size_t c = 0; c < n; ++c) {
      const double xi1 = std::abs(static_cast<double>(fft::signed_index(c, n)) / side);
      acc += std::norm(spec(r, c) * scale) * (1.0 + std::pow(xi1, p) + w2);
    }
  }
  return std::sqrt(acc) / side;
}

double embedding_ratio(const PlanarField& f, double p, ScaleRange scales) {
  if (!(p > 1.0)) throw std::invalid_argument("embedding_ratio: p must exceed 1");
  const double s = spq_norm(f, p, conjugate_exponent(p));
  if (!(s > 0.0)) throw std::invalid_argument("embedding_ratio: zero field");
  return bmo_lp(f, 3, scales) / s;
}

double embedding_ratio(const PlanarField& f, double p) { return embedding_ratio(f, p, default_scales(f)); }

}  // namespace blt::osc
