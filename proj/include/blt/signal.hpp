#pragma once

#include "blt/grid.hpp"

#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace blt::signal {

/// Raised when a grid spacing or window is incompatible with the unit lattice.
class GridError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

enum class Domain { Time, Frequency };

/// Closed-form evaluator of the function a signal was sampled from.
using Model = std::function<Complex(double)>;

/// Uniformly sampled, compactly supported 1D function. Zero outside
/// [start, start + size()*step).
struct SampledSignal {
  double start = 0.0;
  double step = 1.0;
  std::vector<Complex> samples;
  Domain domain = Domain::Time;
  /// Optional; set by make_signal so that callers can evaluate off-grid.
  Model model;

  std::size_t size() const { return samples.size(); }
  double end() const { return start + static_cast<double>(samples.size()) * step; }
  double position(std::size_t i) const { return start + static_cast<double>(i) * step; }

  /// start/step as an integer; throws GridError if start is not on the step lattice.
  long start_index() const;
  /// Sample at absolute lattice index n (position n*step), zero outside the window.
  Complex at_index(long n) const;
  /// Continuous evaluation: the model when present, otherwise linear interpolation.
  Complex evaluate(double t) const;
};

enum class Kind { Box, Hat, BSpline, Gaussian, SmoothedBox, Custom };

struct GeneratorSpec {
  Kind kind = Kind::Box;
  int order = 2;             // BSpline
  double transition = 0.25;  // SmoothedBox half-width of each ramp
  std::vector<Complex> custom_samples;
  double custom_start = 0.0;

  static GeneratorSpec of(Kind k) {
    GeneratorSpec g;
    g.kind = k;
    return g;
  }
  static GeneratorSpec box() { return of(Kind::Box); }
  static GeneratorSpec hat() { return of(Kind::Hat); }
  static GeneratorSpec gaussian() { return of(Kind::Gaussian); }
  static GeneratorSpec bspline(int order) {
    GeneratorSpec g = of(Kind::BSpline);
    g.order = order;
    return g;
  }
  static GeneratorSpec smoothed_box(double transition) {
    GeneratorSpec g = of(Kind::SmoothedBox);
    g.transition = transition;
    return g;
  }
  static GeneratorSpec custom(std::vector<Complex> samples, double start) {
    GeneratorSpec g = of(Kind::Custom);
    g.custom_samples = std::move(samples);
    g.custom_start = start;
    return g;
  }
};

std::string to_string(Kind kind);
Kind kind_from_string(const std::string& name);
/// Short label, e.g. "bspline4" or "smoothed_box0.25".
std::string describe(const GeneratorSpec& spec);

/// 1/step as an integer; throws GridError when 1/step is not integral.
long points_per_unit(double step);

/// Gaussian amplitude below which samples are dropped.
inline constexpr double kGaussianTruncation = 1e-16;

/// Closed-form generator value. Box, hat, B-splines and smoothed boxes are
/// normalized so that their integer translates sum to one; the gaussian is
/// 2^{1/4} e^{-pi t^2}, which has unit L2 norm.
Complex evaluate_generator(const GeneratorSpec& spec, double t);

/// Samples a generator on step = 1/N (N >= 8), widening the window by pad on both sides.
SampledSignal make_signal(const GeneratorSpec& spec, double step, double pad = 0.0);

/// Continuum-scaled transform: samples of \int f(t) e^{-2 pi i xi t} dt on the grid
/// xi_k = (k - floor(L/2)) / (L*step). Applied to a frequency-domain signal it returns
/// samples of f(-t).
SampledSignal fourier_transform(const SampledSignal& f);

struct SobolevSpec {
  double s = 0.0;
};

/// (sum |f^(xi)|^2 (1+|xi|^2)^s dxi)^{1/2} over the discrete frequency grid.
double sobolev_norm(const SampledSignal& f, SobolevSpec spec);

/// sum_k sup_{x in [k,k+1)} |f(x)|, the amalgam norm controlling uniform
/// convergence of the Zak series.
double decay_functional(const SampledSignal& f);

/// Riemann sum sum f(t) conj(g(t)) step over the common support.
Complex l2_inner(const SampledSignal& f, const SampledSignal& g);
double l2_norm(const SampledSignal& f);

/// Zero-extends f so that its window is [first*step, (first+count)*step).
SampledSignal reframe(const SampledSignal& f, long first, std::size_t count);
/// t -> f(t - n) for integer n.
SampledSignal translate(const SampledSignal& f, long n);
/// t -> e^{2 pi i m t} f(t).
SampledSignal modulate(const SampledSignal& f, long m);

// CSV with header "t,re,im".
void write_csv(std::ostream& out, const SampledSignal& f);
SampledSignal read_csv(std::istream& in);

}  // namespace blt::signal
