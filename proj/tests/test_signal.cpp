#include "doctest.h"
#include "oracles.hpp"

#include "blt/signal.hpp"

#include <random>
#include <sstream>

using namespace blt;
using namespace blt::signal;

TEST_CASE("generators sample on the right window") {
  const auto box = make_signal(GeneratorSpec::box(), 1.0 / 64);
  CHECK(box.start == 0.0);
  CHECK(box.size() == 64);
  CHECK(box.samples.front() == Complex(1.0));

  const auto hat = make_signal(GeneratorSpec::hat(), 1.0 / 64);
  CHECK(hat.size() == 128);
  CHECK(hat.samples[64].real() == doctest::Approx(1.0));
  CHECK(hat.samples[32].real() == doctest::Approx(0.5));

  const auto padded = make_signal(GeneratorSpec::hat(), 1.0 / 64, 1.0);
  CHECK(padded.start == doctest::Approx(-1.0));
  CHECK(padded.size() == 128 + 128);
}

TEST_CASE("grid preconditions") {
  CHECK_THROWS_AS(make_signal(GeneratorSpec::box(), 1.0 / 4), GridError);
  CHECK_THROWS_AS(make_signal(GeneratorSpec::box(), 0.3), GridError);
  CHECK_THROWS_AS(points_per_unit(1.0 / 3.5), GridError);
  CHECK(points_per_unit(1.0 / 256) == 256);
  CHECK_THROWS(make_signal(GeneratorSpec::smoothed_box(0.7), 1.0 / 64));
  CHECK_THROWS(make_signal(GeneratorSpec::bspline(0), 1.0 / 64));
}

TEST_CASE("closed forms agree with the reference generators") {
  for (double t = -1.5; t < 3.0; t += 0.0137) {
    CHECK(evaluate_generator(GeneratorSpec::box(), t).real() == oracle::box(t));
    CHECK(evaluate_generator(GeneratorSpec::hat(), t).real() == doctest::Approx(oracle::hat(t)).epsilon(1e-14));
    CHECK(evaluate_generator(GeneratorSpec::gaussian(), t).real() == doctest::Approx(oracle::gauss(t)).epsilon(1e-14));
  }
}

TEST_CASE("B-splines and smoothed boxes form partitions of unity") {
  for (int order = 2; order <= 6; ++order) {
    for (double t = 0.0; t < 1.0; t += 0.0625) {
      double s = 0.0;
      for (int k = -order; k <= order; ++k) s += evaluate_generator(GeneratorSpec::bspline(order), t + k).real();
      CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
    }
  }
  for (double t = 0.0; t < 1.0; t += 0.03125) {
    double s = 0.0;
    for (int k = -2; k <= 2; ++k) s += evaluate_generator(GeneratorSpec::smoothed_box(0.3), t + k).real();
    CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("gaussian has unit norm") {
  const auto g = make_signal(GeneratorSpec::gaussian(), 1.0 / 64);
  CHECK(l2_norm(g) == doctest::Approx(1.0).epsilon(1e-12));
  // symmetric window
  CHECK(g.start_index() + static_cast<long>(g.size()) - 1 == -g.start_index());
}

TEST_CASE("Fourier transform of the sampled box is the Dirichlet sum") {
  const int n = 256;
  const auto f = make_signal(GeneratorSpec::box(), 1.0 / n);
  const auto fh = fourier_transform(f);
  CHECK(fh.domain == Domain::Frequency);
  CHECK(fh.step == doctest::Approx(1.0));
  for (std::size_t i = 0; i < fh.size(); i += 7) {
    const double xi = fh.position(i);
    CHECK(std::abs(fh.samples[i] - oracle::dirichlet_box(xi, n)) < 1e-12);
    if (std::abs(xi) <= 4.0) {
      // continuum: e^{-pi i xi} sin(pi xi)/(pi xi)
      const auto cont = oracle::expi(-oracle::pi * xi) * oracle::sinc_pi(xi);
      CHECK(std::abs(fh.samples[i] - cont) < 2e-2);
    }
  }
}

TEST_CASE("Fourier transform matches the naive sum and fixes the gaussian") {
  const auto g = make_signal(GeneratorSpec::gaussian(), 1.0 / 32, 2.0);
  const auto gh = fourier_transform(g);
  for (std::size_t i = 0; i < gh.size(); i += 11) {
    CHECK(std::abs(gh.samples[i] - oracle::naive_ft(g.samples, g.start, g.step, gh.position(i))) < 1e-11);
    CHECK(std::abs(gh.samples[i] - oracle::gauss(gh.position(i))) < 1e-10);
  }
}

TEST_CASE("transforming twice reflects the signal") {
  for (auto spec : {GeneratorSpec::gaussian(), GeneratorSpec::hat()}) {
    const auto f = make_signal(spec, 1.0 / 32, 2.0);
    const auto back = fourier_transform(fourier_transform(f));
    CHECK(back.domain == Domain::Time);
    CHECK(back.step == doctest::Approx(f.step));
    for (std::size_t i = 0; i < back.size(); ++i) {
      const double t = back.position(i);
      CHECK(std::abs(back.samples[i] - f.evaluate(-t)) < 1e-12);
    }
  }
}

TEST_CASE("Sobolev norms") {
  const auto g = make_signal(GeneratorSpec::gaussian(), 1.0 / 64, 2.0);
  // Parseval at s = 0
  CHECK(sobolev_norm(g, {0.0}) == doctest::Approx(l2_norm(g)).epsilon(1e-12));
  CHECK(std::pow(sobolev_norm(g, {1.0}), 2) == doctest::Approx(oracle::gaussian_h1_squared()).epsilon(1e-10));
  const auto h = make_signal(GeneratorSpec::hat(), 1.0 / 64, 1.0);
  double prev = 0.0;
  for (double s : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const double v = sobolev_norm(h, {s});
    CHECK(v > prev);
    prev = v;
  }
  // either domain: the transform of a frequency signal is weighted in time
  const auto gh = fourier_transform(g);
  CHECK(sobolev_norm(gh, {1.0}) == doctest::Approx(sobolev_norm(g, {1.0})).epsilon(1e-10));
  CHECK_THROWS(sobolev_norm(g, {-0.5}));
}

TEST_CASE("box H^{1/2} norm grows with the window, hat H^{1/2} does not") {
  auto norm2 = [](GeneratorSpec s, int n) { return std::pow(sobolev_norm(make_signal(s, 1.0 / n, 1.0), {0.5}), 2); };
  const double b1 = norm2(GeneratorSpec::box(), 256), b2 = norm2(GeneratorSpec::box(), 512),
               b3 = norm2(GeneratorSpec::box(), 1024);
  CHECK(b2 > b1);
  CHECK(b3 > b2);
  // logarithmic growth: equal increments per doubling
  CHECK((b3 - b2) / (b2 - b1) == doctest::Approx(1.0).epsilon(0.1));
  const double h1 = norm2(GeneratorSpec::hat(), 256), h2 = norm2(GeneratorSpec::hat(), 512),
               h3 = norm2(GeneratorSpec::hat(), 1024);
  CHECK((h3 - h2) / (h2 - h1) < 0.5);
}

TEST_CASE("decay functional") {
  const auto g = make_signal(GeneratorSpec::gaussian(), 1.0 / 256);
  CHECK(decay_functional(g) == doctest::Approx(oracle::gaussian_decay_functional()).epsilon(1e-3));
  CHECK(decay_functional(make_signal(GeneratorSpec::box(), 1.0 / 64)) == doctest::Approx(1.0));
  CHECK(decay_functional(make_signal(GeneratorSpec::hat(), 1.0 / 64)) == doctest::Approx(2.0).epsilon(1e-2));
}

TEST_CASE("inner products, translation and modulation") {
  const int n = 1024;
  const auto box = make_signal(GeneratorSpec::box(), 1.0 / n);
  const auto hat = make_signal(GeneratorSpec::hat(), 1.0 / n);
  CHECK(std::abs(l2_inner(box, hat) - Complex(0.5)) < 1e-3);

  const auto t = translate(box, 3);
  CHECK(t.start == doctest::Approx(3.0));
  CHECK(t.evaluate(3.5).real() == 1.0);
  CHECK(std::abs(l2_inner(box, t)) == 0.0);

  const auto m = modulate(box, 2);
  for (std::size_t i = 0; i < m.size(); i += 37) {
    const double x = m.position(i);
    CHECK(std::abs(m.samples[i] - oracle::expi(2 * oracle::pi * 2 * x)) < 1e-13);
  }
  CHECK(std::abs(l2_inner(box, m)) < 1e-12);

  SampledSignal shifted = box;
  shifted.start = 0.5 / n;
  CHECK_THROWS_AS(l2_inner(box, shifted), GridError);
}

TEST_CASE("CSV round trip") {
  const auto g = make_signal(GeneratorSpec::gaussian(), 1.0 / 16);
  std::stringstream ss;
  write_csv(ss, g);
  const auto back = read_csv(ss);
  CHECK(back.step == doctest::Approx(g.step).epsilon(1e-12));
  CHECK(back.start == doctest::Approx(g.start));
  REQUIRE(back.size() == g.size());
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(back.samples[i] == g.samples[i]);

  std::stringstream bad("t,re,im\n0,1,0\n0.1,1,0\n0.3,1,0\n");
  CHECK_THROWS(read_csv(bad));
  std::stringstream header("x,y\n0,1\n");
  CHECK_THROWS(read_csv(header));
}
