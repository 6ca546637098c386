#include <cmath>
#include <numbers>

#include "doctest.h"
#include "itjulia/apps.hpp"
#include "itjulia/dynamics.hpp"
#include "itjulia/error.hpp"

using namespace itj;
using std::numbers::pi;

namespace {

SequenceSpec z_squared() { return SequenceSpec::constant(Polynomial::monomial(2), Bounds{2, 1.0, 0.0}); }
SequenceSpec z_squared_plus_two() {
  return SequenceSpec::constant(Polynomial::quadratic(1.0, 0.0, 2.0), Bounds{2, 1.0, 2.0});
}

std::vector<cplx> circle(double r, int n) {
  std::vector<cplx> pts;
  for (int k = 0; k < n; ++k) pts.push_back(std::polar(r, 2.0 * pi * k / n));
  return pts;
}

}  // namespace

TEST_CASE("escape_time examples") {
  CHECK_FALSE(escape_time(z_squared(), 0, 0.0, 100).escaped);
  const EscapeResult e = escape_time(z_squared(), 0, 3.0, 100);
  CHECK(e.escaped);
  CHECK(e.steps <= 1);
  // orbit 0 -> 2 -> 6 -> 38 with R = 6
  const EscapeResult f = escape_time(z_squared_plus_two(), 0, 0.0, 100);
  CHECK(f.escaped);
  CHECK(f.steps == 3);
  const EscapeResult g = escape_time(z_squared_plus_two(), 0, cplx{0.0, 2.0}, 50);
  CHECK(g.escaped);
}

TEST_CASE("filled Julia set of z^2") {
  const GridSpec g = chart_for_radius(2.0, 512);
  const JuliaApprox ja = filled_julia(z_squared(), 0, g, 40);
  CHECK(ja.k_mask.area() == doctest::Approx(pi).epsilon(0.02));
  const double h = g.cell_width();
  for (const cplx& z : ja.j_points()) CHECK(std::abs(std::abs(z) - 1.0) <= 2.0 * h);
  CHECK(components(ja.k_mask).size() == 1);
}

TEST_CASE("depth zero keeps the escape disc") {
  const GridSpec g = chart_for_radius(2.0, 256);
  const JuliaApprox ja = filled_julia(z_squared(), 0, g, 0);
  for (std::size_t i = 0; i < g.cell_count(); ++i) CHECK(ja.k_mask.test(i) == (std::abs(g.cell_center(i)) <= 2.0));
}

TEST_CASE("grid must cover the escape disc") {
  CHECK_THROWS_AS(filled_julia(z_squared(), 0, GridSpec{0.0, 2.0, 128}, 10), GridTooSmall);
}

TEST_CASE("depth monotonicity and boundary correctness") {
  const Bounds b{2, 2.0, 1.0};
  const std::vector<SequenceSpec> seqs = {random_bounded_sequence(b, 30, 1, 0.25),
                                          random_bounded_sequence(b, 30, 2, 0.25),
                                          SequenceSpec::periodic({}, {Polynomial::quadratic(1.0, 0.0, -1.0),
                                                                      Polynomial::quadratic(1.0, 0.0, 0.25)},
                                                                 Bounds{2, 1.0, 1.0})};
  for (const SequenceSpec& seq : seqs) {
    const GridSpec g = chart_for_radius(escape_radius(seq.bounds()), 256);
    for (int depth : {5, 15, 30}) {
      const JuliaApprox a = filled_julia(seq, 1, g, depth);
      const JuliaApprox deeper = filled_julia(seq, 1, g, depth + 10);
      std::size_t violations = 0;
      for (std::size_t i = 0; i < g.cell_count(); ++i) violations += deeper.k_mask.test(i) && !a.k_mask.test(i);
      CHECK(violations == 0);
      std::vector<std::uint8_t> is_j(g.cell_count(), 0);
      for (std::size_t i : a.j_cells) {
        is_j[i] = 1;
        CHECK(a.k_mask.test(i));
        const int r = static_cast<int>(i) / g.resolution, c = static_cast<int>(i) % g.resolution;
        CHECK((!a.k_mask.test(r - 1, c) || !a.k_mask.test(r + 1, c) || !a.k_mask.test(r, c - 1) ||
               !a.k_mask.test(r, c + 1)));
      }
      // interior cells are never boundary cells
      for (std::size_t i = 0; i < g.cell_count(); ++i) {
        if (is_j[i] || !a.k_mask.test(i)) continue;
        const int r = static_cast<int>(i) / g.resolution, c = static_cast<int>(i) % g.resolution;
        CHECK((a.k_mask.test(r - 1, c) && a.k_mask.test(r + 1, c) && a.k_mask.test(r, c - 1) &&
               a.k_mask.test(r, c + 1)));
      }
    }
  }
}

TEST_CASE("Cantor Julia set of z^2+2 splits") {
  const GridSpec g = chart_for_radius(6.0, 512);
  const JuliaApprox ja = filled_julia(z_squared_plus_two(), 0, g, 30, JuliaMethod::Pullback);
  CHECK(components(ja.k_mask).size() >= 2);
  // the pullback cover contains every escape-time survivor
  const JuliaApprox et = filled_julia(z_squared_plus_two(), 0, g, 30);
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    if (et.k_mask.test(i)) CHECK(ja.k_mask.test(i));
  }
}

TEST_CASE("invariance check") {
  const GridSpec g = chart_for_radius(2.0, 512);
  const JuliaApprox a = filled_julia(z_squared(), 0, g, 30);
  const JuliaApprox b = filled_julia(z_squared(), 3, g, 30);
  const InvarianceResult r = invariance_check(z_squared(), 0, 3, a, b, 200);
  CHECK(r.samples == 200);
  CHECK(r.escaped == 0);
  CHECK(r.max_cell_deviation <= 1.0);
  CHECK(invariance_check(z_squared(), 0, 0, a, a, 50).max_cell_deviation == 0.0);

  const SequenceSpec alt = SequenceSpec::periodic(
      {}, {Polynomial::quadratic(1.0, 0.0, 0.2), Polynomial::quadratic(1.0, 0.0, -0.1)}, Bounds{2, 1.0, 0.25});
  const GridSpec ga = chart_for_radius(escape_radius(alt.bounds()), 512);
  const InvarianceResult ra =
      invariance_check(alt, 0, 3, filled_julia(alt, 0, ga, 30), filled_julia(alt, 3, ga, 30), 200, 42);
  CHECK(ra.max_cell_deviation <= 3.0);
}

TEST_CASE("hausdorff distance") {
  const std::vector<cplx> a = circle(1.0, 4096);
  CHECK(hausdorff_dist(a, a) == 0.0);
  CHECK(hausdorff_dist({0.0}, {1.0}) == doctest::Approx(pi / 4));
  const std::vector<cplx> b = circle(1.1, 4096);
  CHECK(std::abs(hausdorff_dist(a, b) - spherical_dist(1.0, 1.1)) <= 1e-3);
  CHECK(hausdorff_dist(a, b) == hausdorff_dist(b, a));
  const std::vector<cplx> c = {cplx{0.1, 0.2}, cplx{-3.0, 1.0}, kInfinity};
  const std::vector<cplx> d = {kInfinity, cplx{-3.0, 1.0}, cplx{0.1, 0.2}, cplx{0.1, 0.2}};
  CHECK(hausdorff_dist(c, d) == 0.0);
  CHECK(hausdorff_dist(c, {cplx{0.1, 0.2}}) > 0.0);
  CHECK_THROWS_AS(hausdorff_dist({}, a), InputError);
}

TEST_CASE("components") {
  const GridSpec g{0.0, 1.5, 256};
  const auto one = components(disc_mask(g, 0.0, 1.0));
  REQUIRE(one.size() == 1);
  CHECK(std::abs(one.front().centroid) < 1e-9);
  CHECK(one.front().diameter == doctest::Approx(pi / 2).epsilon(0.02));

  // depth-one preimage of D(0, R) under z^2 + 2 for R < 2
  const double R = 1.75;
  const GridSpec gp = chart_for_radius(6.0, 512);
  const Polynomial p = Polynomial::quadratic(1.0, 0.0, 2.0);
  const auto two = components(mask_from(gp, [&](cplx z) { return std::abs(p(z)) < R; }));
  REQUIRE(two.size() == 2);
  CHECK(std::abs(two[0].centroid + two[1].centroid) < gp.cell_width());
}

TEST_CASE("component counts agree across resolutions") {
  for (int j = 1; j <= 2; ++j) {
    const long t = cycle_time(j);
    std::size_t counts[2];
    int k = 0;
    for (int res : {512, 1024}) {
      const JuliaApprox ja = filled_julia(counterexample_seq(std::nullopt), t, counterexample_chart(res), 40,
                                          JuliaMethod::Pullback);
      counts[k++] = components(ja.k_mask).size();
    }
    CHECK(counts[0] == counts[1]);
    CHECK(counts[0] == static_cast<std::size_t>(1 << (j + 1)));
  }
}
