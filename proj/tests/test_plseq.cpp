#include <cmath>
#include <numbers>

#include "doctest.h"
#include "itjulia/error.hpp"
#include "itjulia/plseq.hpp"

using namespace itj;
using std::numbers::pi;

namespace {

SequenceSpec constant_quadratic(double c) {
  return SequenceSpec::constant(Polynomial::quadratic(1.0, 0.0, c), Bounds{2, 1.0, std::max(std::abs(c), 0.0)});
}

std::size_t symmetric_difference(const RegionMask& a, const RegionMask& b) {
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.bits.size(); ++i) d += a.bits[i] != b.bits[i];
  return d;
}

}  // namespace

TEST_CASE("disc construction for z^2") {
  const PLSeq pl = disc_pl_from_polys(constant_quadratic(0.0), 4.0, 6, {256});
  REQUIRE(pl.horizon() == 6);
  CHECK(pl.U.size() == 6);
  CHECK(pl.V.size() == 7);
  // U_m = preimage of D(0, 4) = D(0, 2)
  const RegionMask disc2 = disc_mask(pl.grid(), 0.0, 2.0);
  CHECK(symmetric_difference(pl.U[0], disc2) <= disc2.count() / 200);
  for (const RegionMask& u : pl.U) CHECK(u.basepoint == cplx{0.0, 0.0});
  CHECK(pl.K >= 1.0);
}

TEST_CASE("construction faults name the time") {
  try {
    disc_pl_from_polys(constant_quadratic(0.0), 1.0, 4, {256});
    FAIL("expected ConstructionError");
  } catch (const ConstructionError& e) {
    CHECK(e.time() == 0);
  }
  CHECK_THROWS_AS(disc_pl_from_polys(constant_quadratic(0.0), 0.0, 4, {256}), InputError);
  CHECK_THROWS_AS(disc_pl_from_polys(constant_quadratic(0.0), 4.0, 0, {256}), InputError);
}

TEST_CASE("z^2 + 2 preimage stays inside D(0, sqrt(10))") {
  const PLSeq pl = disc_pl_from_polys(constant_quadratic(2.0), 8.0, 3, {512});
  const double h = pl.grid().cell_width();
  for (std::size_t i = 0; i < pl.grid().cell_count(); ++i) {
    if (pl.U[0].test(i)) CHECK(std::abs(pl.grid().cell_center(i)) <= std::sqrt(10.0) + h);
  }
}

TEST_CASE("verify_pl on disc constructions") {
  for (double c : {0.0, 0.2}) {
    for (double rho : {4.0, 8.0}) {
      const PLSeq pl = disc_pl_from_polys(constant_quadratic(c), rho, 8, {256});
      const PLReport r = verify_pl(pl);
      CHECK(r.ok());
      for (int d : r.degrees) CHECK(d == 2);
      for (double v : r.basepoint_derivative) CHECK(v <= 1e-9);
      for (bool b : r.containment) CHECK(b);
      CHECK(r.max_bound <= pl.K);
      CHECK(r.max_critical_upper <= pl.K);
    }
  }
}

TEST_CASE("U equal to V fails compact containment") {
  const GridSpec g{0.0, 4.2, 256};
  RegionMask V = disc_mask(g, 0.0, 4.0);
  V.basepoint = 0.0;
  const PLSeq pl = pl_from_masks({V, V}, {V, V, V}, {Polynomial::monomial(2), Polynomial::monomial(2)}, 2, 2.0);
  const PLReport r = verify_pl(pl);
  CHECK_FALSE(r.pl1);
  CHECK_FALSE(r.ok());
}

TEST_CASE("proper degree") {
  const GridSpec g{0.0, 4.2, 256};
  const RegionMask V = disc_mask(g, 0.0, 4.0);
  const RegionMask U = disc_mask(g, 0.0, 2.0);
  CHECK(proper_degree(Polynomial::monomial(2), U, V, 50, 1) == 2);
  CHECK(proper_degree(Polynomial::monomial(3), disc_mask(g, 0.0, std::cbrt(4.0)), V, 50, 1) == 3);
}

TEST_CASE("restriction preserves degrees and containments") {
  const PLSeq pl = disc_pl_from_polys(constant_quadratic(0.2), 8.0, 8, {512});
  const auto [rpl, res] = restrict_pl(pl, 4.0);
  CHECK(res.B == 4.0);
  REQUIRE(res.steps.size() == static_cast<std::size_t>(pl.horizon()));
  CHECK(res.original_degrees == res.restricted_degrees);
  for (const RestrictionStep& s : res.steps) {
    CHECK(s.Gamma_separates);
    CHECK(s.gamma_separates);
    CHECK(s.U_prime_inside_U);
    CHECK(s.V_prime_inside_V);
    CHECK(s.U_prime_compact_in_V_prime);
    CHECK(s.Gamma.closed);
    CHECK(s.gamma.closed);
  }
  const PLReport r = verify_pl(rpl);
  CHECK(r.ok());
  CHECK(rpl.K <= 2.0 * pl.K + 1e-12);
  CHECK(r.max_bound <= 2.0 * pl.K);
  CHECK_THROWS_AS(restrict_pl(pl, 1.0), InputError);
}

TEST_CASE("filled Julia set of a polynomial-like sequence") {
  const PLSeq pl = disc_pl_from_polys(constant_quadratic(0.0), 4.0, 41, {512});
  CHECK(symmetric_difference(pl_filled_julia(pl, 0, 0).k_mask, pl.U[0]) == 0);
  const JuliaApprox ja = pl_filled_julia(pl, 0, 40);
  CHECK(ja.k_mask.area() == doctest::Approx(pi).epsilon(0.02));
  CHECK_THROWS_AS(pl_filled_julia(pl, 1, 40), ConstructionError);
  CHECK_THROWS_AS(pl_filled_julia(pl, 41, 0), InputError);

  const PLSeq pl2 = disc_pl_from_polys(constant_quadratic(0.2), 8.0, 31, {512});
  const JuliaApprox a = pl_filled_julia(pl2, 0, 30);
  const JuliaApprox b = filled_julia(constant_quadratic(0.2), 0, pl2.grid(), 30);
  const double h = pl2.grid().cell_width();
  std::vector<cplx> pa = a.j_points(), pb = b.j_points();
  double worst = 0.0;
  for (const auto* pair : {&pa, &pb}) {
    const auto& from = *pair;
    const auto& to = pair == &pa ? pb : pa;
    for (const cplx& p : from) {
      double best = 1e300;
      for (const cplx& q : to) best = std::min(best, std::abs(p - q));
      worst = std::max(worst, best);
    }
  }
  CHECK(worst <= 3.0 * h);
}

TEST_CASE("identical sequences have identical K") {
  const PLSeq pl = disc_pl_from_polys(constant_quadratic(0.2), 8.0, 31, {256});
  CHECK(restriction_preserves_K(pl, pl, 0, 30) == 0.0);
  const PLSeq other = disc_pl_from_polys(constant_quadratic(0.2), 8.0, 31, {512});
  CHECK_THROWS_AS(restriction_preserves_K(pl, other, 0, 30), InputError);
}
