#include "doctest.h"
#include "oracles.hpp"

#include "blt/signal.hpp"
#include "blt/zak.hpp"

using namespace blt;
using namespace blt::zak;
using signal::GeneratorSpec;
using signal::make_signal;

TEST_CASE("box has unimodular Zak transform") {
  const auto z = zak_transform(make_signal(GeneratorSpec::box(), 1.0 / 64), 64);
  for (long j = 0; j < 64; ++j)
    for (long k = 0; k < 64; ++k) CHECK(std::abs(z(j, k)) == doctest::Approx(1.0).epsilon(1e-14));
  const auto d = frame_diagnostics(z, 1e-12);
  CHECK(d.lower_bound_A == doctest::Approx(1.0));
  CHECK(d.upper_bound_B == doctest::Approx(1.0));
}

TEST_CASE("hat matches its closed form and vanishes at the centre") {
  const long n = 128;
  const auto z = zak_transform(make_signal(GeneratorSpec::hat(), 1.0 / n), n);
  double worst = 0.0;
  for (long j = 0; j < n; ++j)
    for (long k = 0; k < n; ++k) {
      const double x = double(j) / n, y = double(k) / n;
      worst = std::max(worst, std::abs(z(j, k) - oracle::zak_hat(x, y)));
    }
  CHECK(worst < 1e-12);
  CHECK(std::abs(z(n / 2, n / 2)) < 1e-14);
  const auto d = frame_diagnostics(z, 1e-12);
  CHECK(d.lower_bound_A < 1e-20);
  CHECK(d.argmin[0] == doctest::Approx(0.5));
  CHECK(d.argmin[1] == doctest::Approx(0.5));
  CHECK(d.upper_bound_B == doctest::Approx(1.0));
}

TEST_CASE("gaussian Zak transform agrees with the direct sum and vanishes at the centre") {
  const long n = 64;
  const auto g = make_signal(GeneratorSpec::gaussian(), 1.0 / n);
  const auto z = zak_transform(g, n);
  for (long j = 0; j < n; j += 5)
    for (long k = 0; k < n; k += 3) {
      const auto ref = oracle::zak_sum(oracle::gauss, double(j) / n, double(k) / n);
      CHECK(std::abs(z(j, k) - ref) < 1e-12);
    }
  CHECK(std::abs(z(n / 2, n / 2)) < 1e-12);
  const auto d = frame_diagnostics(z, 1e-12);
  CHECK(d.lower_bound_A < 1e-20);
  CHECK(std::sqrt(d.upper_bound_B) == doctest::Approx(1.2923).epsilon(1e-3));
}

TEST_CASE("quasi-periodic extension") {
  const long n = 32;
  const auto g = make_signal(GeneratorSpec::hat(), 1.0 / n);
  const auto z = zak_transform(g, n);
  for (long jj = -2 * n; jj <= 3 * n; jj += 7)
    for (long kk = -n; kk <= 2 * n; kk += 5) {
      const double x = double(jj) / n, y = double(kk) / n;
      CHECK(std::abs(z.extended(jj, kk) - oracle::qp_extend(oracle::zak_hat, x, y)) < 1e-12);
      CHECK(z.extended(jj, kk + n) == z.extended(jj, kk));
      CHECK(extend(z, x, y) == z.extended(jj, kk));
    }
  CHECK(qp_residual(g, z) < 1e-12);
  CHECK_THROWS(extend(z, 0.3 / n, 0.0));
}

TEST_CASE("Zak transform is unitary") {
  for (auto spec : {GeneratorSpec::gaussian(), GeneratorSpec::hat(), GeneratorSpec::bspline(3)}) {
    const auto f = make_signal(spec, 1.0 / 64);
    CHECK(l2_norm(zak_transform(f, 64)) == doctest::Approx(signal::l2_norm(f)).epsilon(1e-12));
  }
}

TEST_CASE("basis functions map to exponentials") {
  const long n = 32;
  const auto box = make_signal(GeneratorSpec::box(), 1.0 / n);
  const auto e = signal::translate(signal::modulate(box, 2), -1);
  const auto z = zak_transform(e, n);
  for (long j = 0; j < n; ++j)
    for (long k = 0; k < n; ++k) {
      const double x = double(j) / n, y = double(k) / n;
      // e_{m,n}(t) = e^{2 pi i m t} box(t - n) has Zak transform e^{2 pi i (m x - n y)}
      const auto want = oracle::expi(2 * oracle::pi * (2 * x + 1 * y));
      CHECK(std::abs(z(j, k) - want) < 1e-12);
    }
}

TEST_CASE("translation and modulation act by multiplication") {
  const long n = 32;
  const auto h = make_signal(GeneratorSpec::hat(), 1.0 / n);
  const auto z = zak_transform(h, n);
  const auto zt = zak_transform(signal::translate(h, 3), n);
  const auto zm = zak_transform(signal::modulate(h, -2), n);
  for (long j = 0; j < n; ++j)
    for (long k = 0; k < n; ++k) {
      const double x = double(j) / n, y = double(k) / n;
      CHECK(std::abs(zt(j, k) - oracle::expi(-2 * oracle::pi * 3 * y) * z(j, k)) < 1e-12);
      CHECK(std::abs(zm(j, k) - oracle::expi(-2 * oracle::pi * 2 * x) * z(j, k)) < 1e-12);
    }
}

TEST_CASE("Fourier covariance") {
  const auto c = zak_fourier_check(make_signal(GeneratorSpec::gaussian(), 1.0 / 64, 2.0));
  CHECK(c.deviation < 1e-6);
  CHECK_FALSE(c.tail_warning);
  const auto b = zak_fourier_check(make_signal(GeneratorSpec::box(), 1.0 / 64));
  CHECK(b.tail_warning);
}

TEST_CASE("Gabor system of the box is orthonormal") {
  const auto box = make_signal(GeneratorSpec::box(), 1.0 / 64);
  for (long m = -2; m <= 2; ++m)
    for (long k = -1; k <= 1; ++k) {
      const auto e = signal::translate(signal::modulate(box, m), k);
      const auto c = gabor_coefficient(e, box, 0, 0);
      CHECK(std::abs(c - Complex(m == 0 && k == 0 ? 1.0 : 0.0)) < 1e-12);
    }
}

TEST_CASE("frame ratio") {
  const auto x = make_signal(GeneratorSpec::gaussian(), 1.0 / 64, 2.0);
  const auto box = make_signal(GeneratorSpec::box(), 1.0 / 64);
  const auto rb = frame_ratio(box, x);
  CHECK(rb.ratio == doctest::Approx(1.0).epsilon(1e-5));
  CHECK_FALSE(rb.tail_warning);

  // sum |<x, g_{mn}>|^2 = int |Zx|^2 |Zg|^2 over the square
  const auto hat = make_signal(GeneratorSpec::hat(), 1.0 / 64);
  const auto r = frame_ratio(hat, x);
  auto zx = [](double u, double v) { return oracle::zak_sum(oracle::gauss, u, v); };
  const double num = oracle::midpoint_2d(
      [&](double u, double v) { return std::norm(zx(u, v)) * std::norm(oracle::zak_hat(u, v)); }, 0, 1, 0, 1, 128);
  const double den = oracle::midpoint_2d([&](double u, double v) { return std::norm(zx(u, v)); }, 0, 1, 0, 1, 128);
  CHECK(r.ratio == doctest::Approx(num / den).epsilon(1e-3));
  CHECK(r.ratio < 1.0);
}
