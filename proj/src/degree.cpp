#include "blt/degree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace blt::degree {

QuasiPeriodicZak::QuasiPeriodicZak(zak::ZakField z, std::string label) : z_(std::move(z)), label_(std::move(label)) {
  if (z_.nx != z_.ny) throw std::invalid_argument("QuasiPeriodicZak: planar lattice needs nx == ny");
}

PeriodicGrid::PeriodicGrid(ComplexMatrix values, std::string label)
    : values_(std::move(values)), label_(std::move(label)) {
  if (values_.rows() != values_.cols() || values_.rows() < 2) {
    throw std::invalid_argument("PeriodicGrid: need a square grid");
  }
}

Complex PeriodicGrid::at(long i, long j) const {
  const long n = cells_per_unit();
  return values_(static_cast<std::size_t>(positive_mod(i, n)), static_cast<std::size_t>(positive_mod(j, n)));
}

BoundedPlanar::BoundedPlanar(PlanarField f, std::string label) : f_(std::move(f)), label_(std::move(label)) {
  validate(f_);
  const double inv = 1.0 / f_.step;
  per_unit_ = std::lround(inv);
  if (per_unit_ < 1 || std::abs(inv - static_cast<double>(per_unit_)) > 1e-9 * inv) {
    throw std::invalid_argument("BoundedPlanar: 1/step must be an integer");
  }
  const double ui = f_.origin_x * inv, uj = f_.origin_y * inv;
  i0_ = std::lround(ui);
  j0_ = std::lround(uj);
  if (std::abs(ui - static_cast<double>(i0_)) > 1e-7 || std::abs(uj - static_cast<double>(j0_)) > 1e-7) {
    throw std::invalid_argument("BoundedPlanar: origin not on the lattice");
  }
}

Complex BoundedPlanar::at(long i, long j) const {
  const long c = i - i0_, r = j - j0_;
  if (c < 0 || r < 0 || c >= static_cast<long>(f_.cols()) || r >= static_cast<long>(f_.rows())) {
    throw std::out_of_range("BoundedPlanar: lattice point outside the field");
  }
  return f_.values(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
}

bool MollifiedField::contains(long i, long j) const {
  return i >= i0 && j >= j0 && i - i0 < static_cast<long>(values.cols()) && j - j0 < static_cast<long>(values.rows());
}

Complex MollifiedField::at(long i, long j) const {
  if (!contains(i, j)) throw std::out_of_range("MollifiedField: lattice point outside the region");
  return values.values(static_cast<std::size_t>(j - j0), static_cast<std::size_t>(i - i0));
}

namespace {

// Weights of base cells d = -R..R (cell [d - 1/2, d + 1/2]) for an averaging window
// [c - a, c + a], normalized to sum one.
std::vector<double> box_weights(double c, double a, long radius) {
  std::vector<double> w(static_cast<std::size_t>(2 * radius + 1));
  double total = 0.0;
  for (long d = -radius; d <= radius; ++d) {
    const double lo = std::max(static_cast<double>(d) - 0.5, c - a);
    const double hi = std::min(static_cast<double>(d) + 0.5, c + a);
    const double v = std::max(0.0, hi - lo);
    w[static_cast<std::size_t>(d + radius)] = v;
    total += v;
  }
  for (auto& v : w) v /= total;
  return w;
}

}  // namespace

MollifiedField mollify(const ExtendedField& base, double epsilon, IndexRegion region, int oversample) {
  const long n = base.cells_per_unit();
  const double h = base.step();
  if (oversample < 1) throw std::invalid_argument("mollify: oversample must be >= 1");
  if (!(epsilon > 0.0) || epsilon < 2.0 * h * (1.0 - 1e-12)) {
    throw std::invalid_argument("mollify: epsilon must be at least two grid cells");
  }
  if (region.i1 < region.i0 || region.j1 < region.j0) throw std::invalid_argument("mollify: empty region");
  const long os = oversample;
  const double a = epsilon / (2.0 * h);
  const long r = static_cast<long>(std::ceil(a + 1.5));
  std::vector<std::vector<double>> w;
  for (long o = 0; o < os; ++o) w.push_back(box_weights(static_cast<double>(o) / static_cast<double>(os), a, r));

  const long nx_out = region.i1 - region.i0 + 1;
  const long ny_out = region.j1 - region.j0 + 1;
  const long bi0 = floor_div(region.i0, os) - r, bi1 = floor_div(region.i1, os) + r;
  const long bj0 = floor_div(region.j0, os) - r, bj1 = floor_div(region.j1, os) + r;
  const long nx_in = bi1 - bi0 + 1, ny_in = bj1 - bj0 + 1;

  ComplexMatrix cache(static_cast<std::size_t>(ny_in), static_cast<std::size_t>(nx_in));
  for (long jj = 0; jj < ny_in; ++jj) {
    for (long ii = 0; ii < nx_in; ++ii) {
      cache(static_cast<std::size_t>(jj), static_cast<std::size_t>(ii)) = base.at(bi0 + ii, bj0 + jj);
    }
  }
  // x pass, then y pass
  ComplexMatrix tmp(static_cast<std::size_t>(ny_in), static_cast<std::size_t>(nx_out));
  for (long jj = 0; jj < ny_in; ++jj) {
    const auto src = cache.row(static_cast<std::size_t>(jj));
    for (long ii = 0; ii < nx_out; ++ii) {
      const long out_i = region.i0 + ii;
      const auto& wo = w[static_cast<std::size_t>(positive_mod(out_i, os))];
      const auto first = static_cast<std::size_t>(floor_div(out_i, os) - r - bi0);
      Complex acc{};
      for (std::size_t d = 0; d < wo.size(); ++d) acc += wo[d] * src[first + d];
      tmp(static_cast<std::size_t>(jj), static_cast<std::size_t>(ii)) = acc;
    }
  }
  const double ho = h / static_cast<double>(os);
  MollifiedField out;
  out.epsilon = epsilon;
  out.cells_per_unit = n * os;
  out.i0 = region.i0;
  out.j0 = region.j0;
  out.values.origin_x = static_cast<double>(region.i0) * ho;
  out.values.origin_y = static_cast<double>(region.j0) * ho;
  out.values.step = ho;
  out.values.values = ComplexMatrix(static_cast<std::size_t>(ny_out), static_cast<std::size_t>(nx_out));
  for (long jj = 0; jj < ny_out; ++jj) {
    const long out_j = region.j0 + jj;
    const auto& wo = w[static_cast<std::size_t>(positive_mod(out_j, os))];
    const auto first = static_cast<std::size_t>(floor_div(out_j, os) - r - bj0);
    for (long ii = 0; ii < nx_out; ++ii) {
      Complex acc{};
      for (std::size_t d = 0; d < wo.size(); ++d) acc += wo[d] * tmp(first + d, static_cast<std::size_t>(ii));
      out.values.values(static_cast<std::size_t>(jj), static_cast<std::size_t>(ii)) = acc;
    }
  }
  return out;
}

IndexRegion default_region(long cells_per_unit, long margin_cells) {
  return {-margin_cells, 2 * cells_per_unit + margin_cells, -margin_cells, 2 * cells_per_unit + margin_cells};
}

QPDefect qp_defect(const MollifiedField& f) {
  const long n = f.cells_per_unit;
  if (!f.contains(0, 0) || !f.contains(2 * n - 1, 2 * n - 1)) {
    throw std::out_of_range("qp_defect: region must cover [0, 2) x [0, 2)");
  }
  QPDefect out;
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      const Complex v = f.at(i, j);
      out.defect = std::max(out.defect, std::abs(f.at(i + n, j) - unit_root(j, n) * v));
      out.y_defect = std::max(out.y_defect, std::abs(f.at(i, j + n) - v));
    }
  }
  return out;
}

Path unit_square(double x0, double y0) {
  return {{x0, y0}, {x0 + 1.0, y0}, {x0 + 1.0, y0 + 1.0}, {x0, y0 + 1.0}};
}

namespace {

constexpr int kMaxBisection = 40;

// Interpolation error scale at the grid node nearest (x, y): (|F_xx| + |F_yy|) h^2 / 8.
double interpolation_bound(const PlanarField& f, double x, double y) {
  const long cols = static_cast<long>(f.cols()), rows = static_cast<long>(f.rows());
  const long c = std::clamp(std::lround((x - f.origin_x) / f.step), 1L, cols - 2);
  const long r = std::clamp(std::lround((y - f.origin_y) / f.step), 1L, rows - 2);
  auto v = [&](long rr, long cc) { return f.values(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc)); };
  const double dxx = std::abs(v(r, c + 1) - 2.0 * v(r, c) + v(r, c - 1));
  const double dyy = std::abs(v(r + 1, c) - 2.0 * v(r, c) + v(r - 1, c));
  return (dxx + dyy) / 8.0;
}

struct Tracker {
  const PlanarField& f;
  double min_modulus = std::numeric_limits<double>::infinity();
  double max_step = 0.0;
  std::size_t points = 0;
  bool near_zero = false;
  Point worst{};

  Complex sample(Point p) {
    const Complex v = f.bilinear(p.x, p.y);
    const double m = std::abs(v);
    ++points;
    if (m < min_modulus) {
      min_modulus = m;
      worst = p;
    }
    if (m < 10.0 * interpolation_bound(f, p.x, p.y) || m == 0.0) near_zero = true;
    return v;
  }

  // Unwrapped phase change from a (value va) to b (value vb), bisecting while a step reaches pi/2.
  double increment(Point a, Complex va, Point b, Complex vb, int depth) {
    if (near_zero) return 0.0;  // the path is rejected once it is done
    const double d = std::arg(vb / va);
    if (std::abs(d) < kPi / 2) {
      max_step = std::max(max_step, std::abs(d));
      return d;
    }
    if (depth >= kMaxBisection) throw WindingError(WindingError::Kind::NonConvergent, "winding: phase refinement did not converge");
    const Point m{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
    const Complex vm = sample(m);
    return increment(a, va, m, vm, depth + 1) + increment(m, vm, b, vb, depth + 1);
  }

  // Log-branch values at the n + 1 uniform points of segment a -> b, continuing from start.
  std::vector<Complex> segment(Point a, Point b, std::size_t n, Complex start) {
    std::vector<Complex> gamma{start};
    Point prev = a;
    Complex vprev = sample(a);
    double phase = start.imag();
    for (std::size_t k = 1; k <= n; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(n);
      const Point p{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
      const Complex v = sample(p);
      phase += increment(prev, vprev, p, v, 0);
      gamma.emplace_back(std::log(std::abs(v)), phase);
      prev = p;
      vprev = v;
    }
    return gamma;
  }
};

std::size_t default_points(const PlanarField& f) {
  return static_cast<std::size_t>(std::max(16.0, 4.0 / f.step));
}

}  // namespace

WindingResult winding_number(const PlanarField& f, const Path& path, std::size_t points_per_side) {
  if (path.size() < 2) throw std::invalid_argument("winding_number: path needs at least two vertices");
  if (points_per_side == 0) points_per_side = default_points(f);
  Tracker tr{f};
  double total = 0.0;
  for (std::size_t s = 0; s < path.size(); ++s) {
    const Point a = path[s], b = path[(s + 1) % path.size()];
    Point prev = a;
    Complex vprev = tr.sample(a);
    for (std::size_t k = 1; k <= points_per_side; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(points_per_side);
      const Point p{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
      const Complex v = tr.sample(p);
      total += tr.increment(prev, vprev, p, v, 0);
      prev = p;
      vprev = v;
    }
  }
  if (tr.near_zero) {
    throw WindingError(WindingError::Kind::ZeroNearPath,
                       "winding: zero too close to path (|F| = " + std::to_string(tr.min_modulus) + " at (" +
                           std::to_string(tr.worst.x) + ", " + std::to_string(tr.worst.y) + "))");
  }
  const double turns = total / kTwoPi;
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) >= 0.05) {
    throw WindingError(WindingError::Kind::NonConvergent, "winding: total phase is not a multiple of 2 pi");
  }
  WindingResult out;
  out.winding = static_cast<int>(rounded);
  out.min_modulus_on_path = tr.min_modulus;
  out.max_phase_step = tr.max_step;
  out.path_points = tr.points;
  out.total_phase = total;
  return out;
}

WindingResult winding_with_retry(const MollifiedField& f, const Path& path, std::size_t points_per_side) {
  const double delta = 2.0 / static_cast<double>(f.cells_per_unit);
  for (int attempt = 0;; ++attempt) {
    const double off = delta * attempt;
    Path shifted = path;
    for (auto& p : shifted) {
      p.x += off;
      p.y += off;
    }
    try {
      WindingResult r = winding_number(f.values, shifted, points_per_side);
      r.offset = {off, off};
      return r;
    } catch (const WindingError& e) {
      if (e.kind() != WindingError::Kind::ZeroNearPath || attempt == 3) throw;
    }
  }
}

namespace {

IndexRegion region_for(const Path& path, long n, long margin) {
  double x0 = path[0].x, x1 = x0, y0 = path[0].y, y1 = y0;
  for (const auto& p : path) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  const double s = static_cast<double>(n);
  return {static_cast<long>(std::floor(x0 * s)) - margin, static_cast<long>(std::ceil(x1 * s)) + margin,
          static_cast<long>(std::floor(y0 * s)) - margin, static_cast<long>(std::ceil(y1 * s)) + margin};
}

}  // namespace

DegreeResult vmo_degree(const ExtendedField& base, const std::vector<double>& eps_list, const Path& path,
                        std::size_t points_per_side) {
  if (eps_list.empty()) throw std::invalid_argument("vmo_degree: empty epsilon list");
  for (std::size_t i = 1; i < eps_list.size(); ++i) {
    if (!(eps_list[i] < eps_list[i - 1])) throw std::invalid_argument("vmo_degree: epsilon list must be decreasing");
  }
  const long n = base.cells_per_unit();
  const IndexRegion region = region_for(path, n, 8);
  DegreeResult out;
  for (double eps : eps_list) {
    const MollifiedField fe = mollify(base, eps, region);
    WindingResult w;
    try {
      w = winding_with_retry(fe, path, points_per_side);
    } catch (const WindingError& e) {
      throw WindingError(WindingError::Kind::Instability,
                         base.name() + ": winding undefined at eps = " + std::to_string(eps) + ": " + e.what());
    }
    if (!out.levels.empty() && w.winding != out.levels.front().winding.winding) {
      throw WindingError(WindingError::Kind::Instability,
                         base.name() + ": winding changes across eps (" +
                             std::to_string(out.levels.front().winding.winding) + " vs " +
                             std::to_string(w.winding) + " at eps = " + std::to_string(eps) + ")");
    }
    out.levels.push_back({eps, w});
  }
  out.degree = out.levels.front().winding.winding;
  return out;
}

Telescoping telescoping(const MollifiedField& f, const QPDefect& defect, Point corner, std::size_t points_per_side) {
  if (points_per_side == 0) points_per_side = default_points(f.values);
  Tracker tr{f.values};
  const Point p00 = corner, p10{corner.x + 1.0, corner.y}, p11{corner.x + 1.0, corner.y + 1.0},
              p01{corner.x, corner.y + 1.0};
  const Complex start = std::log(f.values.bilinear(p00.x, p00.y));
  const auto bottom = tr.segment(p00, p10, points_per_side, start);
  const auto right = tr.segment(p10, p11, points_per_side, bottom.back());
  const auto top = tr.segment(p11, p01, points_per_side, right.back());
  const auto left = tr.segment(p01, p00, points_per_side, top.back());
  const auto left_up = tr.segment(p00, p01, points_per_side, start);
  if (tr.near_zero) throw WindingError(WindingError::Kind::ZeroNearPath, "telescoping: zero too close to path");

  Telescoping out;
  out.edge_increments = {bottom.back() - bottom.front(), right.back() - right.front(), top.back() - top.front(),
                         left.back() - left.front()};
  Complex sum{};
  for (const auto& d : out.edge_increments) sum += d;
  out.winding = static_cast<int>(std::lround(sum.imag() / kTwoPi));
  const Complex two_pi_i{0.0, kTwoPi};
  out.closure = std::abs(sum - static_cast<double>(out.winding) * two_pi_i);

  std::vector<Complex> psi(points_per_side + 1);
  double min_mod = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k <= points_per_side; ++k) {
    const double y = corner.y + static_cast<double>(k) / static_cast<double>(points_per_side);
    psi[k] = right[k] - left_up[k] - two_pi_i * y;
    min_mod = std::min({min_mod, std::exp(right[k].real()), std::exp(left_up[k].real())});
  }
  out.psi_start = psi.front();
  out.psi_end = psi.back();
  out.identity_error =
      std::abs(sum - two_pi_i - (out.psi_end - out.psi_start) - (out.edge_increments[0] + out.edge_increments[2]));
  out.residual = std::abs(out.psi_end - out.psi_start);
  const double j = std::round(out.psi_start.imag() / kTwoPi);
  for (const auto& v : psi) out.psi_max = std::max(out.psi_max, std::abs(v - two_pi_i * j));
  out.min_modulus = min_mod;
  out.bound = 2.0 * defect.defect / min_mod;
  return out;
}

double edge_defect_ratio(const MollifiedField& f, Point corner) {
  const long m = f.cells_per_unit;
  const double s = static_cast<double>(m);
  const long i0 = std::lround(corner.x * s), j0 = std::lround(corner.y * s);
  if (std::abs(corner.x * s - static_cast<double>(i0)) > 1e-7 || std::abs(corner.y * s - static_cast<double>(j0)) > 1e-7) {
    throw std::invalid_argument("edge_defect_ratio: corner must be a lattice point");
  }
  double worst = 0.0;
  for (long j = j0; j <= j0 + m; ++j) {
    const Complex v = f.at(i0, j);
    worst = std::max(worst, std::abs(f.at(i0 + m, j) - unit_root(j, m) * v) / std::abs(v));
  }
  return worst;
}

WindingLaw quasi_periodic_winding_law(const ExtendedField& base, const std::vector<double>& eps_list) {
  const long n = base.cells_per_unit();
  WindingLaw law;
  for (double eps : eps_list) {
    const MollifiedField fe = mollify(base, eps, default_region(n, 8));
    LawLevel lvl;
    lvl.epsilon = eps;
    try {
      const auto w = winding_with_retry(fe, unit_square(), 0);
      lvl.defined = true;
      lvl.winding = w.winding;
      lvl.edge_ratio = edge_defect_ratio(fe, w.offset);
    } catch (const WindingError&) {
      lvl.defined = false;
      lvl.edge_ratio = std::numeric_limits<double>::infinity();
    }
    law.admissible = law.admissible && lvl.defined && lvl.edge_ratio < kEdgeRatioTolerance;
    law.levels.push_back(lvl);
  }
  if (law.admissible) {
    for (const auto& l : law.levels) law.holds = law.holds && l.winding == 1;
  }
  return law;
}

WitnessReport ess_inf_witness(const zak::ZakField& z, const std::vector<double>& eps_list, double threshold) {
  const QuasiPeriodicZak base(z);
  const long n = base.cells_per_unit();
  WitnessReport out;
  out.threshold = threshold;
  for (double eps : eps_list) {
    // Half-cell evaluation grid: jumps of the cell-centred base sit between base lattice points.
    const MollifiedField fe = mollify(base, eps, default_region(2 * n, 16), 2);
    const long m = fe.cells_per_unit;
    WitnessRow row;
    row.epsilon = eps;
    row.min_modulus = std::numeric_limits<double>::infinity();
    for (long i = 0; i < m; ++i) {
      for (long j = 0; j < m; ++j) {
        const double v = std::abs(fe.at(i, j));
        if (v < row.min_modulus) {
          row.min_modulus = v;
          row.argmin = {static_cast<double>(i) / static_cast<double>(m), static_cast<double>(j) / static_cast<double>(m)};
        }
      }
    }
    try {
      row.winding = winding_with_retry(fe, unit_square(), 0).winding;
      row.winding_defined = true;
    } catch (const WindingError&) {
      row.winding_defined = false;
    }
    row.qp_defect = qp_defect(fe).defect;
    out.rows.push_back(row);
  }
  if (!out.rows.empty()) {
    auto finest = std::min_element(out.rows.begin(), out.rows.end(),
                                   [](const WitnessRow& a, const WitnessRow& b) { return a.epsilon < b.epsilon; });
    if (finest->winding_defined && finest->winding != 0) out.consistent = finest->min_modulus < threshold;
  }
  return out;
}

zak::ZakField gabor_synthesis(const zak::ZakField& zg, const std::vector<GaborTerm>& terms) {
  zak::ZakField out = zg;
  for (long j = 0; j < zg.nx; ++j) {
    for (long k = 0; k < zg.ny; ++k) {
      Complex p{};
      // Z(e^{2 pi i m .} g(. - n)) = e^{2 pi i (m x - n y)} Zg
      for (const auto& t : terms) p += t.coefficient * unit_root(t.m * j, zg.nx) * unit_root(-t.n * k, zg.ny);
      out.values(static_cast<std::size_t>(j), static_cast<std::size_t>(k)) = p * zg(j, k);
    }
  }
  out.source.reset();
  return out;
}

std::vector<GaborTerm> random_gabor_terms(std::mt19937_64& rng, int radius) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<GaborTerm> terms;
  for (long m = -radius; m <= radius; ++m) {
    for (long n = -radius; n <= radius; ++n) {
      const double re = normal(rng);
      const double im = normal(rng);
      terms.push_back({m, n, {re, im}});
    }
  }
  return terms;
}

}  // namespace blt::degree
