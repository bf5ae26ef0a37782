#pragma once

#include "blt/grid.hpp"
#include "blt/signal.hpp"

#include <array>
#include <memory>

namespace blt::zak {

using signal::SampledSignal;

/// Zak transform sampled on the fundamental square: values(j, k) = Zf(j/nx, k/ny).
struct ZakField {
  long nx = 0;
  long ny = 0;
  ComplexMatrix values;  // nx rows (x index j), ny columns (y index k)
  double source_step = 0.0;
  /// Generating signal, kept for off-grid evaluation of the defining sum.
  std::shared_ptr<const SampledSignal> source;

  Complex operator()(long j, long k) const {
    return values(static_cast<std::size_t>(j), static_cast<std::size_t>(k));
  }
  /// Value at lattice point (jj/nx, kk/ny) for any integers, using
  /// Zf(x+1, y) = e^{2 pi i y} Zf(x, y) and Zf(x, y+1) = Zf(x, y).
  Complex extended(long jj, long kk) const;
};

/// Zf(x, y) = sum_l e^{2 pi i l y} f(x - l) on the nx x ny grid, nx = 1/f.step.
ZakField zak_transform(const SampledSignal& f, long ny);

/// Quasi-periodic extension at a grid point (x*nx and y*ny integral); off-grid points are rejected.
Complex extend(const ZakField& z, double x, double y);

/// Defining sum evaluated directly at an arbitrary point, using f.evaluate.
Complex zak_direct(const SampledSignal& f, double x, double y);

/// Max deviation between the defining sum on [1,2) x [0,1) and the extension of z.
double qp_residual(const SampledSignal& f, const ZakField& z);

/// Discrete L2(Q0) norm of the field.
double l2_norm(const ZakField& z);

struct FourierCheck {
  double deviation = 0.0;  // max |Z fhat(x,y) - e^{2 pi i xy} Zf(-y, x)|
  double tail = 0.0;       // largest |fhat| in the outer eighth of the frequency window
  bool tail_warning = false;
  long n = 0;              // grid size used on both sides
};

inline constexpr double kTailThreshold = 1e-12;

/// Checks Z fhat(x, y) = e^{2 pi i xy} Zf(-y, x) on an n x n grid with n = 1/f.step.
/// f is zero-padded to a window of length n so that fhat lands on the same lattice.
FourierCheck zak_fourier_check(const SampledSignal& f);

struct FrameDiagnostics {
  double min_abs = 0.0;
  std::array<double, 2> argmin{0.0, 0.0};
  double max_abs = 0.0;
  double lower_bound_A = 0.0;
  double upper_bound_B = 0.0;
  bool refined = false;
};

FrameDiagnostics frame_diagnostics(const ZakField& z, double refine_tol);

/// <f, e^{2 pi i m .} g(. - n)>
Complex gabor_coefficient(const SampledSignal& f, const SampledSignal& g, long m, long n);

struct FrameRatio {
  double ratio = 0.0;
  long m_max = 0;
  double tail = 0.0;  // measured relative energy beyond m_max
  bool tail_warning = false;
};

inline constexpr double kFrameTailThreshold = 1e-6;

/// sum_{|m| <= m_max, n} |<x, e^{2 pi i m .} g(. - n)>|^2 / ||x||^2.
/// m_max <= 0 picks the smallest cutoff whose measured tail is a factor 10 below threshold.
FrameRatio frame_ratio(const SampledSignal& g, const SampledSignal& x, long m_max = 0);

}  // namespace blt::zak
