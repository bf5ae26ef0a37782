#include "blt/signal.hpp"

#include "blt/fft.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace blt::signal {
namespace {

// Canonical C-infinity step: 0 for u <= 0, 1 for u >= 1.
double smooth_step(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / u);
  const double b = std::exp(-1.0 / (1.0 - u));
  return a / (a + b);
}

// Cardinal B-spline of the given order on [0, order), via Cox-de Boor.
double cardinal_bspline(int order, double t) {
  if (order == 1) return (t >= 0.0 && t < 1.0) ? 1.0 : 0.0;
  if (t <= 0.0 || t >= order) return 0.0;
  const double r = order - 1;
  return (t * cardinal_bspline(order - 1, t) + (order - t) * cardinal_bspline(order - 1, t - 1.0)) / r;
}

double gaussian(double t) { return std::pow(2.0, 0.25) * std::exp(-kPi * t * t); }

bool near_integer(double v, double tol = 1e-9) { return std::abs(v - std::round(v)) <= tol; }

}  // namespace

long SampledSignal::start_index() const {
  const double q = start / step;
  if (!near_integer(q, 1e-7)) {
    throw GridError("signal start " + std::to_string(start) + " is not a multiple of the step");
  }
  return std::lround(q);
}

Complex SampledSignal::at_index(long n) const {
  const long i = n - start_index();
  if (i < 0 || i >= static_cast<long>(samples.size())) return {};
  return samples[static_cast<std::size_t>(i)];
}

Complex SampledSignal::evaluate(double t) const {
  if (model) return model(t);
  const double u = (t - start) / step;
  const double fl = std::floor(u);
  const long i = static_cast<long>(fl);
  const double w = u - fl;
  auto get = [&](long k) -> Complex {
    if (k < 0 || k >= static_cast<long>(samples.size())) return {};
    return samples[static_cast<std::size_t>(k)];
  };
  return (1.0 - w) * get(i) + w * get(i + 1);
}

std::string to_string(Kind kind) {
  switch (kind) {
    case Kind::Box: return "box";
    case Kind::Hat: return "hat";
    case Kind::BSpline: return "bspline";
    case Kind::Gaussian: return "gaussian";
    case Kind::SmoothedBox: return "smoothed_box";
    case Kind::Custom: return "custom";
  }
  return "unknown";
}

Kind kind_from_string(const std::string& name) {
  for (Kind k : {Kind::Box, Kind::Hat, Kind::BSpline, Kind::Gaussian, Kind::SmoothedBox, Kind::Custom}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown generator kind '" + name + "'");
}

std::string describe(const GeneratorSpec& spec) {
  std::ostringstream os;
  os << to_string(spec.kind);
  if (spec.kind == Kind::BSpline) os << spec.order;
  if (spec.kind == Kind::SmoothedBox) os << spec.transition;
  return os.str();
}

long points_per_unit(double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw GridError("step must be positive and finite");
  const double inv = 1.0 / step;
  const double n = std::round(inv);
  if (n < 1.0 || std::abs(inv - n) > 1e-9 * n) {
    throw GridError("1/step = " + std::to_string(inv) + " is not an integer; unit translates would leave the grid");
  }
  return static_cast<long>(n);
}

Complex evaluate_generator(const GeneratorSpec& spec, double t) {
  switch (spec.kind) {
    case Kind::Box: return (t >= 0.0 && t < 1.0) ? 1.0 : 0.0;
    case Kind::Hat: return cardinal_bspline(2, t);
    case Kind::BSpline: return cardinal_bspline(spec.order, t);
    case Kind::Gaussian: return gaussian(t);
    case Kind::SmoothedBox: {
      const double tau = spec.transition;
      auto ramp = [tau](double u) { return smooth_step((u + tau) / (2.0 * tau)); };
      return ramp(t) - ramp(t - 1.0);
    }
    case Kind::Custom: return {};  // no closed form
  }
  return {};
}

SampledSignal make_signal(const GeneratorSpec& spec, double step, double pad) {
  const long n = points_per_unit(step);
  if (n < 8) throw GridError("step must be 1/N with N >= 8");
  if (pad < 0.0) throw std::invalid_argument("pad must be nonnegative");
  const double h = 1.0 / static_cast<double>(n);

  long first = 0;
  long last = 0;  // exclusive
  switch (spec.kind) {
    case Kind::Box:
      first = 0;
      last = n;
      break;
    case Kind::Hat:
      first = 0;
      last = 2 * n;
      break;
    case Kind::BSpline:
      if (spec.order < 1) throw std::invalid_argument("bspline order must be >= 1");
      first = 0;
      last = static_cast<long>(spec.order) * n;
      break;
    case Kind::Gaussian: {
      long m = 0;
      while (gaussian(static_cast<double>(m + 1) * h) >= kGaussianTruncation) ++m;
      first = -m;
      last = m + 1;
      break;
    }
    case Kind::SmoothedBox: {
      const double tau = spec.transition;
      if (!(tau > 0.0) || tau > 0.5) throw std::invalid_argument("smoothed_box transition must lie in (0, 1/2]");
      first = static_cast<long>(std::ceil(-tau * static_cast<double>(n)));
      last = static_cast<long>(std::floor((1.0 + tau) * static_cast<double>(n))) + 1;
      break;
    }
    case Kind::Custom: {
      SampledSignal s;
      s.start = spec.custom_start;
      s.step = h;
      s.samples = spec.custom_samples;
      if (s.samples.empty()) throw std::invalid_argument("custom signal needs samples");
      for (const auto& v : s.samples) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw std::invalid_argument("non-finite sample");
      }
      const long s0 = s.start_index();
      const long p = std::lround(pad * static_cast<double>(n));
      return reframe(s, s0 - p, s.samples.size() + static_cast<std::size_t>(2 * p));
    }
  }

  const long p = std::lround(pad * static_cast<double>(n));
  SampledSignal out;
  out.step = h;
  out.start = static_cast<double>(first - p) * h;
  out.samples.resize(static_cast<std::size_t>(last - first + 2 * p));
  for (long i = first; i < last; ++i) {
    out.samples[static_cast<std::size_t>(i - first + p)] = evaluate_generator(spec, static_cast<double>(i) * h);
  }
  out.model = [spec](double t) { return evaluate_generator(spec, t); };
  return out;
}

SampledSignal fourier_transform(const SampledSignal& f) {
  const std::size_t len = f.size();
  const long half = static_cast<long>(len / 2);
  std::vector<Complex> spectrum = f.samples;
  fft::transform(spectrum, fft::Direction::Forward);

  SampledSignal out;
  out.step = 1.0 / (static_cast<double>(len) * f.step);
  out.start = -static_cast<double>(half) * out.step;
  out.domain = f.domain == Domain::Time ? Domain::Frequency : Domain::Time;
  out.samples.resize(len);

  const double q = f.start / f.step;
  const bool aligned = near_integer(q);
  const long s0 = std::lround(q);
  const long n = static_cast<long>(len);
  for (std::size_t k = 0; k < len; ++k) {
    const long kk = static_cast<long>(k) - half;
    // e^{-2 pi i xi start} with xi*start = kk*s0/len.
    const Complex phase = aligned ? unit_root(-kk * s0, n)
                                  : std::polar(1.0, -kTwoPi * static_cast<double>(kk) * q / static_cast<double>(n));
    out.samples[k] = f.step * phase * spectrum[static_cast<std::size_t>(positive_mod(kk, n))];
  }
  return out;
}

double sobolev_norm(const SampledSignal& f, SobolevSpec spec) {
  if (!(spec.s >= 0.0) || !std::isfinite(spec.s)) throw std::invalid_argument("sobolev order must be finite and >= 0");
  const SampledSignal fh = fourier_transform(f);
  double acc = 0.0;
  for (std::size_t k = 0; k < fh.size(); ++k) {
    const double xi = fh.position(k);
    acc += std::norm(fh.samples[k]) * std::pow(1.0 + xi * xi, spec.s);
  }
  return std::sqrt(acc * fh.step);
}

double decay_functional(const SampledSignal& f) {
  const double inv = 1.0 / f.step;
  const bool aligned = near_integer(inv) && near_integer(f.start / f.step);
  std::vector<std::pair<long, double>> cells;
  for (std::size_t i = 0; i < f.size(); ++i) {
    long cell;
    if (aligned) {
      cell = floor_div(f.start_index() + static_cast<long>(i), std::lround(inv));
    } else {
      cell = static_cast<long>(std::floor(f.position(i)));
    }
    const double v = std::abs(f.samples[i]);
    if (cells.empty() || cells.back().first != cell) {
      cells.emplace_back(cell, v);
    } else {
      cells.back().second = std::max(cells.back().second, v);
    }
  }
  double total = 0.0;
  for (const auto& c : cells) total += c.second;
  return total;
}

namespace {

long aligned_offset(const SampledSignal& f, const SampledSignal& g) {
  if (std::abs(f.step - g.step) > 1e-12 * f.step) throw GridError("signals have different steps");
  const double off = (g.start - f.start) / f.step;
  if (!near_integer(off, 1e-7)) throw GridError("signal grids are not aligned");
  return std::lround(off);
}

}  // namespace

Complex l2_inner(const SampledSignal& f, const SampledSignal& g) {
  const long off = aligned_offset(f, g);  // g sample j sits at f index j + off
  const long lo = std::max(0L, off);
  const long hi = std::min(static_cast<long>(f.size()), off + static_cast<long>(g.size()));
  Complex acc{};
  for (long i = lo; i < hi; ++i) {
    acc += f.samples[static_cast<std::size_t>(i)] * std::conj(g.samples[static_cast<std::size_t>(i - off)]);
  }
  return acc * f.step;
}

double l2_norm(const SampledSignal& f) {
  double acc = 0.0;
  for (const auto& v : f.samples) acc += std::norm(v);
  return std::sqrt(acc * f.step);
}

SampledSignal reframe(const SampledSignal& f, long first, std::size_t count) {
  SampledSignal out;
  out.step = f.step;
  out.domain = f.domain;
  out.model = f.model;
  out.start = static_cast<double>(first) * f.step;
  out.samples.resize(count);
  const long s0 = f.start_index();
  for (std::size_t i = 0; i < count; ++i) {
    const long src = first + static_cast<long>(i) - s0;
    if (src >= 0 && src < static_cast<long>(f.size())) out.samples[i] = f.samples[static_cast<std::size_t>(src)];
  }
  return out;
}

SampledSignal translate(const SampledSignal& f, long n) {
  SampledSignal out = f;
  const long per_unit = points_per_unit(f.step);
  out.start = static_cast<double>(f.start_index() + n * per_unit) * f.step;
  if (f.model) {
    out.model = [m = f.model, n](double t) { return m(t - static_cast<double>(n)); };
  }
  return out;
}

SampledSignal modulate(const SampledSignal& f, long m) {
  SampledSignal out = f;
  const long per_unit = points_per_unit(f.step);
  const long s0 = f.start_index();
  for (std::size_t i = 0; i < f.size(); ++i) {
    out.samples[i] *= unit_root(m * (s0 + static_cast<long>(i)), per_unit);
  }
  if (f.model) {
    out.model = [md = f.model, m](double t) { return std::polar(1.0, kTwoPi * static_cast<double>(m) * t) * md(t); };
  }
  return out;
}

}  // namespace blt::signal
