#include "doctest.h"
#include "oracles.hpp"

#include "blt/degree.hpp"
#include "blt/signal.hpp"
#include "blt/zak.hpp"

using namespace blt;
using namespace blt::degree;
using signal::GeneratorSpec;
using signal::make_signal;

namespace {

zak::ZakField zak_of(GeneratorSpec s, long n) { return zak::zak_transform(make_signal(s, 1.0 / double(n)), n); }

PlanarField closed_form(const std::function<Complex(double, double)>& fn, double lo, std::size_t n, double step) {
  return sample_field(lo, lo, step, n, fn);
}

double sup_abs(const PlanarField& f) {
  double m = 0.0;
  for (const auto& v : f.values.flat()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_CASE("mollification fixes constants and affine fields") {
  const long n = 32;
  ComplexMatrix c(n, n, Complex(0.3, -0.7));
  const PeriodicGrid pc(c);
  const auto mc = mollify(pc, 1.0 / 8, default_region(n, 4));
  for (const auto& v : mc.values.values.flat()) CHECK(std::abs(v - Complex(0.3, -0.7)) < 1e-14);

  auto affine = [](double x, double y) { return Complex(1.0 + 2.0 * x, -0.5 * y + x); };
  const BoundedPlanar bp(closed_form(affine, -2.0, 5 * n, 1.0 / n));
  for (int os : {1, 2}) {
    const auto m = mollify(bp, 3.0 / 16, IndexRegion{0, os * n, 0, os * n}, os);
    CHECK(m.cells_per_unit == os * n);
    for (long i = 0; i <= os * n; i += 3)
      for (long j = 0; j <= os * n; j += 5) {
        const double x = double(i) / double(os * n), y = double(j) / double(os * n);
        CHECK(std::abs(m.at(i, j) - affine(x, y)) < 1e-12);
      }
  }
}

TEST_CASE("mollification preconditions and lookups") {
  const long n = 32;
  const QuasiPeriodicZak hat(zak_of(GeneratorSpec::hat(), n));
  CHECK_THROWS(mollify(hat, 1.0 / 32, default_region(n, 4)));
  const auto m = mollify(hat, 1.0 / 8, default_region(n, 4));
  CHECK(m.contains(0, 0));
  CHECK(m.contains(2 * n + 4, -4));
  CHECK_FALSE(m.contains(2 * n + 5, 0));
  CHECK_THROWS(m.at(-5, 0));
  const BoundedPlanar bp(closed_form([](double, double) { return 1.0; }, 0.0, n, 1.0 / n));
  CHECK_THROWS(bp.at(-1, 0));
}

TEST_CASE("mollification contracts the sup norm and keeps y-periodicity") {
  const long n = 64;
  for (auto spec : {GeneratorSpec::box(), GeneratorSpec::hat(), GeneratorSpec::gaussian()}) {
    const QuasiPeriodicZak base(zak_of(spec, n));
    double sup_base = 0.0;
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j) sup_base = std::max(sup_base, std::abs(base.at(i, j)));
    for (double eps : kDefaultEpsilons) {
      const auto m = mollify(base, eps, default_region(n, 4));
      CHECK(sup_abs(m.values) <= sup_base * (1 + 1e-12));
      const auto d = qp_defect(m);
      CHECK(d.y_defect == 0.0);
      CHECK(d.defect > 0.0);
    }
  }
}

TEST_CASE("averages near the hat zero stay small and converge") {
  const long n = 128;
  const QuasiPeriodicZak base(zak_of(GeneratorSpec::hat(), n));
  // closed-form cube average of x + (1 - x) e^{-2 pi i y} at the centre
  const double eps = 1.0 / 16;
  const Complex avg = 0.5 * (1.0 - oracle::sinc_pi(eps));
  const auto m = mollify(base, eps, default_region(n, 4));
  CHECK(std::abs(m.at(n / 2, n / 2)) < 0.05);
  CHECK(std::abs(m.at(n / 2, n / 2) - avg) < 1e-3);

  std::vector<MollifiedField> fs;
  for (double e : kDefaultEpsilons) fs.push_back(mollify(base, e, default_region(n, 4)));
  auto gap = [&](const MollifiedField& a, const MollifiedField& b) {
    double g = 0.0;
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j) g = std::max(g, std::abs(a.at(i, j) - b.at(i, j)));
    return g;
  };
  CHECK(gap(fs[1], fs[2]) < 0.5 * gap(fs[0], fs[1]));
}

TEST_CASE("box defect stays within 2 pi eps sup|F|") {
  const long n = 128;
  const QuasiPeriodicZak base(zak_of(GeneratorSpec::box(), n));
  for (double eps : kDefaultEpsilons) {
    const auto m = mollify(base, eps, default_region(n, 4));
    CHECK(qp_defect(m).defect <= 2 * oracle::pi * eps * sup_abs(m.values));
  }
}

TEST_CASE("winding of closed-form maps") {
  const double h = 1.0 / 64;
  struct Case {
    std::function<Complex(double, double)> fn;
    int want;
  };
  const std::vector<Case> cases{
      {[](double x, double y) { return Complex(x - 0.5, y - 0.5); }, 1},
      {[](double x, double y) { return Complex(x - 0.3, 0.4 - y); }, -1},
      {[](double x, double y) { return std::pow(Complex(x - 0.6, y - 0.45), 2); }, 2},
      {[](double x, double y) { return Complex(x - 0.5, y - 0.5) * Complex(x - 0.2, 0.7 - y); }, 0},
      {[](double x, double y) { return Complex(3.0 + x, y); }, 0},
      {[](double x, double y) { return oracle::zak_hat(x, y); }, 1},
  };
  for (const auto& c : cases) {
    const auto f = closed_form(c.fn, -0.5, 129, h);
    CHECK(std::lround(oracle::winding_closed_form(c.fn, 400)) == c.want);
    const auto w = winding_number(f, unit_square(), 0);
    CHECK(w.winding == c.want);
    CHECK(std::abs(w.total_phase - 2 * oracle::pi * c.want) < 1e-9);
    CHECK(w.max_phase_step < oracle::pi / 2);
    CHECK(w.path_points >= 4 * 16);
  }
}

TEST_CASE("a zero on the path is rejected") {
  const auto f = closed_form([](double x, double y) { return Complex(x, y - 0.5); }, -0.5, 129, 1.0 / 64);
  try {
    (void)winding_number(f, unit_square(), 0);
    FAIL("expected a rejection");
  } catch (const WindingError& e) {
    CHECK(e.kind() == WindingError::Kind::ZeroNearPath);
  }
}

TEST_CASE("degree of Zak fields") {
  const long n = 64;
  for (auto spec : {GeneratorSpec::box(), GeneratorSpec::hat(), GeneratorSpec::gaussian(), GeneratorSpec::bspline(3)}) {
    const QuasiPeriodicZak base(zak_of(spec, n));
    const auto d = vmo_degree(base, kDefaultEpsilons, unit_square());
    CHECK(d.degree == 1);
    REQUIRE(d.levels.size() == 3);
    for (const auto& l : d.levels) CHECK(l.winding.winding == 1);
    // density stability
    const auto fine = vmo_degree(base, kDefaultEpsilons, unit_square(), 8 * n);
    CHECK(fine.degree == d.degree);
  }
  const PeriodicGrid pc(ComplexMatrix(n, n, Complex(1.0)), "periodic_constant");
  CHECK(vmo_degree(pc, kDefaultEpsilons, unit_square()).degree == 0);
  CHECK_THROWS(vmo_degree(pc, {1.0 / 16, 1.0 / 8}, unit_square()));
}

TEST_CASE("degree follows the path offset through the retry") {
  const long n = 64;
  const QuasiPeriodicZak base(zak_of(GeneratorSpec::hat(), n));
  // the hat zero sits at (1/2, 1/2); a square with that point on its edge must be moved
  const auto m = mollify(base, 1.0 / 16, default_region(n, 24));
  const auto w = winding_with_retry(m, unit_square(0.5, 0.0), 0);
  CHECK(w.winding == 1);
  CHECK((w.offset.x != 0.0 || w.offset.y != 0.0));
}

TEST_CASE("telescoping decomposition") {
  const long n = 64;
  for (auto spec : {GeneratorSpec::hat(), GeneratorSpec::gaussian()}) {
    const QuasiPeriodicZak base(zak_of(spec, n));
    for (double eps : kDefaultEpsilons) {
      const auto m = mollify(base, eps, default_region(n, 8));
      const auto d = qp_defect(m);
      const auto t = telescoping(m, d, Point{0.0, 0.0}, 4 * n);
      CHECK(t.winding == 1);
      CHECK(t.closure < 1e-9);
      CHECK(t.identity_error < 1e-9);
      CHECK(t.residual <= t.bound);
      CHECK(t.psi_max <= t.bound);
      CHECK(t.bound == doctest::Approx(2 * d.defect / t.min_modulus));
    }
  }
}

TEST_CASE("ess inf witness") {
  const long n = 64;
  for (auto spec : {GeneratorSpec::hat(), GeneratorSpec::gaussian()}) {
    const auto r = ess_inf_witness(zak_of(spec, n), kDefaultEpsilons, 0.1);
    REQUIRE(r.rows.size() == 3);
    CHECK(r.consistent);
    const auto& last = r.rows.back();
    CHECK(last.min_modulus < 0.004);
    CHECK(std::abs(last.argmin.x - 0.5) < 0.05);
    CHECK(std::abs(last.argmin.y - 0.5) < 0.05);
    CHECK(last.winding_defined);
    CHECK(last.winding == 1);
  }
  const auto box = ess_inf_witness(zak_of(GeneratorSpec::box(), 256), kDefaultEpsilons, 0.1);
  CHECK(box.consistent);
  for (const auto& row : box.rows) {
    CHECK(row.min_modulus == doctest::Approx(oracle::box_mollified_min(row.epsilon)).epsilon(0.02));
    // the minimum sits on the jump line x = 0 ~ 1
    CHECK(std::min(row.argmin.x, 1.0 - row.argmin.x) < 0.01);
  }
}

TEST_CASE("Gabor synthesis") {
  const long n = 32;
  const auto zb = zak_of(GeneratorSpec::box(), n);
  const auto z = gabor_synthesis(zb, {GaborTerm{2, -1, Complex(0.0, 2.0)}});
  CHECK_FALSE(z.source);
  for (long j = 0; j < n; ++j)
    for (long k = 0; k < n; ++k) {
      const double x = double(j) / n, y = double(k) / n;
      CHECK(std::abs(z(j, k) - Complex(0.0, 2.0) * oracle::expi(2 * oracle::pi * (2 * x + y))) < 1e-12);
    }

  std::mt19937_64 a(7), b(7);
  const auto ta = random_gabor_terms(a, 2), tb = random_gabor_terms(b, 2);
  REQUIRE(ta.size() == 25);
  for (std::size_t i = 0; i < ta.size(); ++i) CHECK(ta[i].coefficient == tb[i].coefficient);
}

TEST_CASE("quasi-periodic winding law on random fields") {
  const long n = 64;
  const auto zg = zak_of(GeneratorSpec::gaussian(), n);
  std::mt19937_64 rng(11);
  int admissible = 0;
  for (int draw = 0; draw < 12; ++draw) {
    const QuasiPeriodicZak f(gabor_synthesis(zg, random_gabor_terms(rng, 1)), "random");
    const auto law = quasi_periodic_winding_law(f, kDefaultEpsilons);
    CHECK(law.holds);
    if (law.admissible) {
      ++admissible;
      for (const auto& l : law.levels) CHECK(l.winding == 1);
    }
  }
  CHECK(admissible >= 4);
  const PeriodicGrid pc(ComplexMatrix(n, n, Complex(1.0)));
  const auto control = quasi_periodic_winding_law(pc, kDefaultEpsilons);
  for (const auto& l : control.levels) CHECK(l.winding == 0);
}
