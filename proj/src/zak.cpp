#include "blt/zak.hpp"

#include "blt/fft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace blt::zak {
namespace {

long grid_index(double v, long n, const char* axis) {
  const double u = v * static_cast<double>(n);
  const double r = std::round(u);
  if (std::abs(u - r) > 1e-9 * std::max(1.0, std::abs(u))) {
    throw std::invalid_argument(std::string("extend: ") + axis + " coordinate is off the grid");
  }
  return static_cast<long>(r);
}

}  // namespace

Complex ZakField::extended(long jj, long kk) const {
  const long m = floor_div(jj, nx);
  const long j = jj - m * nx;
  const long k = positive_mod(kk, ny);
  if (m == 0) return (*this)(j, k);
  return unit_root(m * kk, ny) * (*this)(j, k);
}

ZakField zak_transform(const SampledSignal& f, long ny) {
  if (ny < 2) throw std::invalid_argument("zak_transform: ny must be >= 2");
  const long nx = signal::points_per_unit(f.step);
  const long s0 = f.start_index();
  const long len = static_cast<long>(f.size());

  ZakField z;
  z.nx = nx;
  z.ny = ny;
  z.source_step = f.step;
  z.values = ComplexMatrix(static_cast<std::size_t>(nx), static_cast<std::size_t>(ny));
  z.source = std::make_shared<const SampledSignal>(f);

  // Sample at lattice index n sits at t = n/nx = j/nx - l, so n = j - l*nx.
  // The phase e^{2 pi i l k/ny} only depends on l mod ny: fold, then one inverse DFT per column.
  std::vector<Complex> classes(static_cast<std::size_t>(ny));
  for (long j = 0; j < nx; ++j) {
    std::fill(classes.begin(), classes.end(), Complex{});
    const long first = s0 + positive_mod(j - s0, nx);
    for (long n = first; n < s0 + len; n += nx) {
      const long l = (j - n) / nx;
      classes[static_cast<std::size_t>(positive_mod(l, ny))] += f.samples[static_cast<std::size_t>(n - s0)];
    }
    fft::transform(classes, fft::Direction::Backward);
    auto row = z.values.row(static_cast<std::size_t>(j));
    std::copy(classes.begin(), classes.end(), row.begin());
  }
  return z;
}

Complex extend(const ZakField& z, double x, double y) {
  return z.extended(grid_index(x, z.nx, "x"), grid_index(y, z.ny, "y"));
}

Complex zak_direct(const SampledSignal& f, double x, double y) {
  const long lo = static_cast<long>(std::ceil(x - f.end())) - 1;
  const long hi = static_cast<long>(std::floor(x - f.start)) + 1;
  Complex acc{};
  for (long l = lo; l <= hi; ++l) {
    const double t = x - static_cast<double>(l);
    if (t < f.start || t >= f.end()) continue;
    acc += std::polar(1.0, kTwoPi * static_cast<double>(l) * y) * f.evaluate(t);
  }
  return acc;
}

double qp_residual(const SampledSignal& f, const ZakField& z) {
  const long nx = z.nx;
  const long ny = z.ny;
  if (signal::points_per_unit(f.step) != nx) throw std::invalid_argument("qp_residual: field and signal disagree on nx");
  const long s0 = f.start_index();
  const long len = static_cast<long>(f.size());
  // Terms of the sum at x = 1 + j/nx: f((nx + j - l*nx)/nx).
  double worst = 0.0;
  for (long j = 0; j < nx; ++j) {
    const long jj = nx + j;
    const long lmin = floor_div(jj - (s0 + len - 1), nx);
    const long lmax = floor_div(jj - s0, nx);
    for (long k = 0; k < ny; ++k) {
      Complex direct{};
      for (long l = lmin; l <= lmax; ++l) {
        const long n = jj - l * nx;
        if (n < s0 || n >= s0 + len) continue;
        direct += unit_root(l * k, ny) * f.samples[static_cast<std::size_t>(n - s0)];
      }
      worst = std::max(worst, std::abs(direct - z.extended(jj, k)));
    }
  }
  return worst;
}

double l2_norm(const ZakField& z) {
  double acc = 0.0;
  for (const auto& v : z.values.flat()) acc += std::norm(v);
  return std::sqrt(acc / static_cast<double>(z.nx * z.ny));
}

FourierCheck zak_fourier_check(const SampledSignal& f) {
  const long n = signal::points_per_unit(f.step);
  const long s0 = f.start_index();
  const long len = static_cast<long>(f.size());
  const long window = n * n;  // n time units
  if (len > window / 2) {
    throw std::invalid_argument("zak_fourier_check: support too long for a window of 1/step units");
  }
  const long center = s0 + len / 2;
  const SampledSignal padded = signal::reframe(f, center - window / 2, static_cast<std::size_t>(window));
  const SampledSignal fh = signal::fourier_transform(padded);

  FourierCheck out;
  out.n = n;
  for (std::size_t i = 0; i < fh.size(); ++i) {
    if (std::abs(fh.position(i)) >= 0.375 * static_cast<double>(n)) {
      out.tail = std::max(out.tail, std::abs(fh.samples[i]));
    }
  }
  out.tail_warning = out.tail > kTailThreshold;

  const ZakField zf = zak_transform(padded, n);
  const ZakField zfh = zak_transform(fh, n);
  for (long j = 0; j < n; ++j) {
    for (long k = 0; k < n; ++k) {
      const Complex rhs = unit_root(j * k, n * n) * zf.extended(-k, j);
      out.deviation = std::max(out.deviation, std::abs(zfh(j, k) - rhs));
    }
  }
  return out;
}

FrameDiagnostics frame_diagnostics(const ZakField& z, double refine_tol) {
  FrameDiagnostics d;
  d.min_abs = std::numeric_limits<double>::infinity();
  long jmin = 0, kmin = 0;
  for (long j = 0; j < z.nx; ++j) {
    for (long k = 0; k < z.ny; ++k) {
      const double a = std::abs(z(j, k));
      if (a < d.min_abs) {
        d.min_abs = a;
        jmin = j;
        kmin = k;
      }
      d.max_abs = std::max(d.max_abs, a);
    }
  }
  d.argmin = {static_cast<double>(jmin) / static_cast<double>(z.nx),
              static_cast<double>(kmin) / static_cast<double>(z.ny)};

  if (z.source && refine_tol > 0.0) {
    double hx = 1.0 / static_cast<double>(z.nx);
    double hy = 1.0 / static_cast<double>(z.ny);
    for (int iter = 0; iter < 60; ++iter) {
      if (d.min_abs == 0.0) {
        d.refined = true;
        break;
      }
      hx *= 0.5;
      hy *= 0.5;
      double best = d.min_abs;
      auto best_at = d.argmin;
      for (int a = -2; a <= 2; ++a) {
        for (int b = -2; b <= 2; ++b) {
          if (a == 0 && b == 0) continue;
          const double x = d.argmin[0] + a * hx;
          const double y = d.argmin[1] + b * hy;
          const double v = std::abs(zak_direct(*z.source, x, y));
          if (v < best) {
            best = v;
            best_at = {x, y};
          }
        }
      }
      const double change = d.min_abs - best;
      d.min_abs = best;
      d.argmin = best_at;
      if (change < refine_tol) {
        d.refined = true;
        break;
      }
    }
  }
  d.lower_bound_A = d.min_abs * d.min_abs;
  d.upper_bound_B = d.max_abs * d.max_abs;
  return d;
}

Complex gabor_coefficient(const SampledSignal& f, const SampledSignal& g, long m, long n) {
  return signal::l2_inner(f, signal::modulate(signal::translate(g, n), m));
}

FrameRatio frame_ratio(const SampledSignal& g, const SampledSignal& x, long m_max) {
  const double xnorm2 = std::pow(signal::l2_norm(x), 2);
  if (!(xnorm2 > 0.0)) throw std::invalid_argument("frame_ratio: x must be nonzero");
  if (std::abs(g.step - x.step) > 1e-12 * g.step) throw signal::GridError("frame_ratio: steps differ");
  const long per = signal::points_per_unit(x.step);
  const long gs = g.start_index();
  const long xs = x.start_index();
  const long gl = static_cast<long>(g.size());
  const long xl = static_cast<long>(x.size());

  // energy[m index] accumulates sum_n |c_{m,n}|^2 over the aliased modulation range.
  std::vector<double> energy(static_cast<std::size_t>(per), 0.0);
  std::vector<Complex> folded(static_cast<std::size_t>(per));
  const long nlo = floor_div(xs - (gs + gl), per);
  const long nhi = floor_div(xs + xl - gs, per) + 1;
  for (long n = nlo; n <= nhi; ++n) {
    const long lo = std::max(xs, gs + n * per);
    const long hi = std::min(xs + xl, gs + n * per + gl);
    if (lo >= hi) continue;
    std::fill(folded.begin(), folded.end(), Complex{});
    for (long i = lo; i < hi; ++i) {
      folded[static_cast<std::size_t>(positive_mod(i, per))] +=
          x.samples[static_cast<std::size_t>(i - xs)] * std::conj(g.samples[static_cast<std::size_t>(i - n * per - gs)]);
    }
    fft::transform(folded, fft::Direction::Forward);
    for (long k = 0; k < per; ++k) {
      energy[static_cast<std::size_t>(k)] += std::norm(folded[static_cast<std::size_t>(k)] * x.step);
    }
  }

  // Cumulative energy by |m|.
  const long half = per / 2;
  std::vector<double> by_abs(static_cast<std::size_t>(half + 1), 0.0);
  for (long k = 0; k < per; ++k) {
    const long m = fft::signed_index(static_cast<std::size_t>(k), static_cast<std::size_t>(per));
    by_abs[static_cast<std::size_t>(std::min(std::abs(m), half))] += energy[static_cast<std::size_t>(k)];
  }
  double total = 0.0;
  for (double e : by_abs) total += e;

  auto tail_after = [&](long cutoff) {
    double t = 0.0;
    for (long m = cutoff + 1; m <= half; ++m) t += by_abs[static_cast<std::size_t>(m)];
    return t / xnorm2;
  };

  FrameRatio out;
  if (m_max <= 0) {
    long cutoff = 0;
    while (cutoff < half && tail_after(cutoff) > kFrameTailThreshold / 10.0) ++cutoff;
    out.m_max = cutoff;
  } else {
    out.m_max = std::min(m_max, half);
  }
  out.tail = tail_after(out.m_max);
  out.tail_warning = out.tail > kFrameTailThreshold;
  out.ratio = (total / xnorm2) - out.tail;
  return out;
}

}  // namespace blt::zak
