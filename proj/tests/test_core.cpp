#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "itjulia/core.hpp"
#include "itjulia/error.hpp"

using namespace itj;
using std::numbers::pi;

namespace {

Polynomial z2c(cplx c) { return Polynomial::quadratic(1.0, 0.0, c); }

// spherical distance by midpoint-rule integration of |dz|/(1+|z|^2) along a segment
double integrate_density(cplx a, cplx b, int steps) {
  double s = 0.0;
  for (int k = 0; k < steps; ++k) {
    const cplx z = a + (b - a) * ((k + 0.5) / steps);
    s += std::abs(b - a) / steps / (1.0 + std::norm(z));
  }
  return s;
}

}  // namespace

TEST_CASE("polynomial evaluation") {
  CHECK(std::abs(Polynomial::shifted_square(3.0)(3.0)) == doctest::Approx(0.0));
  const cplx v = Polynomial::monomial(2)(cplx{1.0, 1.0});
  CHECK(v.real() == doctest::Approx(0.0));
  CHECK(v.imag() == doctest::Approx(2.0));
  CHECK(eval_poly(z2c(2.0), 0.0) == cplx{2.0, 0.0});
  const Polynomial p({1.0, -2.0, 0.0, 3.0});
  CHECK(p.degree() == 3);
  const cplx z{0.3, -1.2};
  CHECK(std::abs(eval_poly_derivative(p, z) - (-2.0 + 9.0 * z * z)) < 1e-12);
  const auto [val, der] = p.eval_with_derivative(z);
  CHECK(std::abs(val - p(z)) < 1e-12);
  CHECK(std::abs(der - p.derivative_at(z)) < 1e-12);
}

TEST_CASE("trailing zeros are trimmed") {
  const Polynomial p({1.0, 2.0, 0.0, 0.0});
  CHECK(p.degree() == 1);
  CHECK(p == Polynomial({1.0, 2.0}));
}

TEST_CASE("compose_eval and composition_degree") {
  const Bounds b{2, 1.0, 9.0};
  const SequenceSpec seq = SequenceSpec::periodic({Polynomial::monomial(2), Polynomial::shifted_square(3.0)},
                                                  {Polynomial::monomial(2)}, b);
  const OrbitValue v = compose_eval(seq, 0, 2, 2.0);
  CHECK_FALSE(v.escaped);
  CHECK(std::abs(v.value - cplx{1.0, 0.0}) < 1e-12);
  CHECK(compose_eval(seq, 3, 3, cplx{0.7, 0.1}).value == cplx{0.7, 0.1});
  CHECK(composition_degree(seq, 0, 2) == 4);
  CHECK(composition_degree(seq, 4, 4) == 1);
}

TEST_CASE("degree via growth at |z| = 1e6") {
  // monic terms, so log|Q(z)| / log|z| -> D with an O(M/|z|) error
  const SequenceSpec seq = random_bounded_sequence(Bounds{3, 1.0, 0.5}, 6, 7);
  for (long m = 0; m <= 2; ++m) {
    for (long n = m; n <= m + 3; ++n) {
      const cplx z = std::polar(1e6, 0.37);
      const OrbitValue v = compose_eval(seq, m, n, z);
      REQUIRE_FALSE(v.escaped);
      const double ratio = std::log(std::abs(v.value)) / std::log(1e6);
      CHECK(std::abs(ratio - static_cast<double>(composition_degree(seq, m, n))) <= 0.01);
    }
  }
}

TEST_CASE("escape radius values") {
  CHECK(escape_radius(Bounds{2, 1.0, 0.0}) == doctest::Approx(2.0));
  CHECK(escape_radius(Bounds{2, 1.0, 0.25}) == doctest::Approx(2.5));
  CHECK(escape_radius(Bounds{2, 1.0, 9.0}) == doctest::Approx(20.0));
}

TEST_CASE("escape guarantee by sampling") {
  for (const Bounds& b : {Bounds{2, 1.0, 0.0}, Bounds{2, 1.0, 0.25}, Bounds{2, 1.0, 9.0}, Bounds{3, 2.0, 1.0},
                          Bounds{4, 1.5, 0.3}}) {
    const double R = escape_radius(b);
    const SequenceSpec seq = random_bounded_sequence(b, 100, 11);
    long violations = 0;
    for (long m = 1; m <= 100; ++m) {
      const Polynomial& p = seq.term(m);
      for (int k = 0; k < 10000; ++k) {
        const cplx z = std::polar(R, 2.0 * pi * (k + 0.25) / 10000);
        // z^2 at |z| = 2 meets the bound with equality
        if (std::abs(p(z)) < 2.0 * std::abs(z) * (1.0 - 1e-12)) ++violations;
      }
    }
    CHECK(violations == 0);
  }
  // the extreme polynomial (z-3)^2 for M = 9
  const Polynomial p = Polynomial::shifted_square(3.0);
  for (int k = 0; k < 10000; ++k) {
    const cplx z = std::polar(20.0, 2.0 * pi * k / 10000);
    CHECK(std::abs(p(z)) >= 2.0 * std::abs(z));
  }
}

TEST_CASE("critical points") {
  auto near = [](const std::vector<cplx>& got, std::vector<cplx> want) {
    if (got.size() != want.size()) return false;
    for (const cplx& w : want) {
      bool hit = false;
      for (const cplx& g : got) hit = hit || std::abs(g - w) < 1e-9;
      if (!hit) return false;
    }
    return true;
  };
  CHECK(near(critical_points(z2c(0.3)), {0.0}));
  CHECK(near(critical_points(Polynomial::shifted_square(3.0)), {3.0}));
  CHECK(near(critical_points(Polynomial({0.0, -3.0, 0.0, 1.0})), {1.0, -1.0}));
  const Polynomial q({cplx{0.2, 1.0}, cplx{-1.0, 0.5}, 0.0, cplx{0.0, 2.0}, 0.0, 1.0});
  for (const cplx& c : critical_points(q)) CHECK(std::abs(q.derivative_at(c)) <= 1e-9);
  CHECK(critical_points(q).size() == 4);
}

TEST_CASE("roots and preimages") {
  const Polynomial p({-6.0, 11.0, -6.0, 1.0});  // (z-1)(z-2)(z-3)
  const auto r = polynomial_roots(p);
  REQUIRE(r.size() == 3);
  CHECK(r[0].real() == doctest::Approx(1.0));
  CHECK(r[1].real() == doctest::Approx(2.0));
  CHECK(r[2].real() == doctest::Approx(3.0));
  for (const cplx& z : preimages(z2c(2.0), 6.0)) CHECK(std::abs(z * z + 2.0 - 6.0) < 1e-10);
}

TEST_CASE("spherical distance values") {
  CHECK(spherical_dist(0.0, kInfinity) == doctest::Approx(pi / 2));
  CHECK(spherical_dist(cplx{0.4, -2.0}, cplx{0.4, -2.0}) == 0.0);
  CHECK(spherical_dist(0.0, 1.0) == doctest::Approx(pi / 4));
  CHECK(spherical_dist(0.0, 1.0) == doctest::Approx(integrate_density(0.0, 1.0, 20000)).epsilon(1e-8));
  // radial segments are geodesics
  CHECK(spherical_dist(0.5, 3.0) == doctest::Approx(integrate_density(0.5, 3.0, 20000)).epsilon(1e-8));
  CHECK(spherical_dist(1.0, -1.0) == doctest::Approx(pi / 2));
  CHECK(spherical_dist(cplx{3.0, 4.0}, kInfinity) == doctest::Approx(std::asin(1.0 / std::sqrt(26.0))));
}

TEST_CASE("spherical distance symmetry and triangle inequality") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd(0.0, 2.0);
  auto draw = [&]() {
    const cplx z{nd(rng), nd(rng)};
    return (rng() % 50 == 0) ? kInfinity : z;
  };
  int bad = 0;
  for (int i = 0; i < 100000; ++i) {
    const cplx a = draw(), b = draw(), c = draw();
    if (spherical_dist(a, b) != spherical_dist(b, a)) ++bad;
    if (spherical_dist(a, c) > spherical_dist(a, b) + spherical_dist(b, c) + 1e-12) ++bad;
  }
  CHECK(bad == 0);
}

TEST_CASE("spherical derivative") {
  const Polynomial id = Polynomial::monomial(1);
  CHECK(spherical_derivative(id, 0.0) == doctest::Approx(1.0));
  CHECK(spherical_derivative(Polynomial({cplx{2.0, 1.0}}), cplx{0.3, 0.3}) == 0.0);
  CHECK(spherical_derivative(Polynomial::monomial(2), 1.0) == doctest::Approx(1.0));

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double h = 1e-6;
  for (int trial = 0; trial < 200; ++trial) {
    const int deg = 1 + static_cast<int>(rng() % 4);
    std::vector<cplx> c;
    for (int k = 0; k <= deg; ++k) c.emplace_back(u(rng), u(rng));
    c.back() += 1.0;
    const Polynomial p(c);
    cplx z{2.0 * u(rng), 2.0 * u(rng)};
    if (std::abs(z) > 2.0) z *= 2.0 / std::abs(z);
    const double fd = spherical_dist(p(z + h), p(z - h)) / (2.0 * h);
    CHECK(std::abs(fd - spherical_derivative(p, z)) <= 1e-5);
  }
}

TEST_CASE("bounds validation") {
  CHECK_THROWS_AS(Bounds({1, 1.0, 0.0}).validate(), InputError);
  CHECK_THROWS_AS(Bounds({2, 0.5, 0.0}).validate(), InputError);
  CHECK_THROWS_AS(Bounds({2, 1.0, -1.0}).validate(), InputError);
  const Bounds b{2, 2.0, 1.0};
  CHECK(b.admits(Polynomial::quadratic(0.5, 0.0, cplx{0.6, 0.8})));
  CHECK_FALSE(b.admits(Polynomial::quadratic(3.0, 0.0, 0.0)));
  CHECK_FALSE(b.admits(Polynomial::quadratic(1.0, 0.0, 1.5)));
  CHECK_FALSE(b.admits(Polynomial::monomial(3)));
  CHECK_THROWS_AS(SequenceSpec::constant(Polynomial::monomial(3), b), InputError);
}

TEST_CASE("counterexample sequence terms") {
  const SequenceSpec one = SequenceSpec::counterexample(1);
  CHECK(one.term(2) == Polynomial::shifted_square(3.0));
  for (long m : {1L, 3L, 4L, 5L, 9L}) CHECK(one.term(m) == Polynomial::monomial(2));
  const SequenceSpec lim = SequenceSpec::counterexample_limit();
  for (long m = 1; m <= 60; ++m) {
    const bool cyc = m == 2 || m == 5 || m == 9 || m == 14 || m == 20 || m == 27 || m == 35 || m == 44 || m == 54;
    CHECK((lim.term(m) == Polynomial::shifted_square(3.0)) == cyc);
  }
  CHECK(lim.term(5) == Polynomial::shifted_square(3.0));
  CHECK(lim.bounds().d == 2);
  CHECK(lim.bounds().K == 1.0);
  CHECK(lim.bounds().M == 9.0);
  CHECK(cycle_time(1) == 2);
  CHECK(cycle_time(2) == 5);
  CHECK(cycle_time(3) == 9);
  CHECK(cycle_time(4) == 14);
  CHECK(cycle_index(9) == 3);
  CHECK(cycle_index(10) == 0);
}

TEST_CASE("periodic tail and determinism") {
  const Bounds b{2, 1.0, 0.5};
  const SequenceSpec seq = SequenceSpec::periodic({z2c(0.1)}, {z2c(0.2), z2c(-0.3)}, b);
  CHECK(seq.term(1) == z2c(0.1));
  CHECK(seq.term(2) == z2c(0.2));
  CHECK(seq.term(3) == z2c(-0.3));
  CHECK(seq.term(102) == z2c(0.2));
  const SequenceSpec a = random_bounded_sequence(Bounds{2, 2.0, 1.0}, 10, 42);
  const SequenceSpec c = random_bounded_sequence(Bounds{2, 2.0, 1.0}, 10, 42);
  for (long m = 1; m <= 12; ++m) CHECK(a.term(m) == c.term(m));
}
