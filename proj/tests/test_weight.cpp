#include "doctest.h"
#include "oracles.hpp"

#include "blt/oscillation.hpp"

using namespace blt::osc;

namespace {

double mass_oracle(double x0, double y0, double side, double p) {
  const double q = p / (p - 1.0);
  const double v = oracle::midpoint_2d(
      [&](double a, double b) { return 1.0 / (1.0 + std::pow(std::abs(a), p) + std::pow(std::abs(b), q)); },
      x0 - side, x0 + 2 * side, y0 - side, y0 + 2 * side, 600);
  return std::sqrt(v);
}

}  // namespace

TEST_CASE("admissible cubes stay clear of the central block") {
  CHECK(is_admissible(DyadicCube{0, {2, 0}, false}));  // J*
  CHECK(is_admissible(DyadicCube{0, {-3, 1}, false}));
  CHECK(is_admissible(DyadicCube{0, {2, 2}, false}));
  CHECK(is_admissible(DyadicCube{2, {0, -3}, false}));
  CHECK_FALSE(is_admissible(DyadicCube{0, {0, 0}, false}));
  CHECK_FALSE(is_admissible(DyadicCube{0, {1, 1}, false}));
  CHECK_FALSE(is_admissible(DyadicCube{0, {-2, -2}, false}));
  CHECK_FALSE(is_admissible(DyadicCube{3, {1, -2}, false}));
  CHECK_FALSE(is_admissible(DyadicCube{0, {6, 6}, true}));

  for (int k0 : {0, 3}) {
    const double s = std::ldexp(1.0, k0);
    std::size_t want = 0;
    for (long a = -8; a < 8; ++a)
      for (long b = -8; b < 8; ++b)
        if (a < -2 || a >= 2 || b < -2 || b >= 2) ++want;
    const auto cubes = admissible_cubes(k0, 8.0 * s);
    CHECK(cubes.size() == want);
    for (const auto& c : cubes) {
      CHECK(c.scale_exp == k0);
      CHECK(is_admissible(c));
      CHECK(c.x0() >= -8.0 * s);
      CHECK(c.x0() + c.side() <= 8.0 * s);
    }
  }
  // the excluded block scales with the cube side
  CHECK(1024 - admissible_cubes(0, 16.0).size() == 16);
  CHECK(1024 - admissible_cubes(5, 512.0).size() == 16);
}

TEST_CASE("weight mass matches midpoint quadrature") {
  for (double p : {1.5, 2.0, 3.0}) {
    for (auto a : {std::array<long, 2>{2, 0}, {0, 2}, {-3, 1}, {5, -4}}) {
      const DyadicCube j{0, a, false};
      CHECK(weight_mass(j, p) == doctest::Approx(mass_oracle(j.x0(), j.y0(), 1.0, p)).epsilon(1e-2));
    }
    const DyadicCube big{2, {2, -1}, false};
    CHECK(weight_mass(big, p) == doctest::Approx(mass_oracle(big.x0(), big.y0(), 4.0, p)).epsilon(1e-2));
  }
}

TEST_CASE("sweep maximiser at the finest level") {
  const auto row = weight_sweep(0, 2.0);
  CHECK(row.decay_term == 1.0);
  CHECK(is_admissible(row.argmax));
  for (const auto& c : admissible_cubes(0, 8.0)) CHECK(weight_mass(c, 2.0) <= row.max_mass * (1 + 1e-12));
  CHECK(row.max_mass == doctest::Approx(mass_oracle(row.argmax.x0(), row.argmax.y0(), 1.0, 2.0)).epsilon(1e-2));
  // J* or its mirror image across the diagonal attains the maximum for p = 2
  CHECK(weight_mass(DyadicCube{0, {2, 0}, false}, 2.0) == doctest::Approx(row.max_mass).epsilon(1e-6));
}

TEST_CASE("weight mass is at most the root of the tripled area") {
  for (double p : {1.25, 2.0, 3.0})
    for (int k0 : {0, 2, 5})
      for (const auto& c : admissible_cubes(k0, 6.0 * std::ldexp(1.0, k0)))
        CHECK(weight_mass(c, p) <= 3.0 * c.side());
}

TEST_CASE("weight stays bounded as k0 grows") {
  for (double p : {1.5, 2.0, 3.0}) {
    const double m6 = weight_sweep(6, p).max_mass, m8 = weight_sweep(8, p).max_mass;
    CHECK(std::abs(m8 - m6) / m6 < 0.1);
    const auto r = weight_sweep(5, p);
    CHECK(r.decay_term == doctest::Approx(std::pow(2.0, 5 * (2 - conjugate_exponent(p)))));
  }
  CHECK(weight_sweep(6, 1.5).decay_term < weight_sweep(5, 1.5).decay_term);
  CHECK(weight_sweep(6, 3.0).decay_term > weight_sweep(5, 3.0).decay_term);
}
