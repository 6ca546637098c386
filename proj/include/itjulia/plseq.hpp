#pragma once

#include <cstdint>
#include <vector>

#include "itjulia/core.hpp"
#include "itjulia/dynamics.hpp"
#include "itjulia/geometry.hpp"
#include "itjulia/grid.hpp"

namespace itj {

/// Polynomial-like mapping sequence f_{m+1}: U_m -> V_{m+1}, materialized
/// for m = 0 .. horizon-1. U has horizon entries, V has horizon+1 and
/// maps[m] is f_{m+1}.
struct PLSeq {
  std::vector<RegionMask> U;
  std::vector<RegionMask> V;
  std::vector<Polynomial> maps;
  int degree_bound = 2;
  double K = 1.0;

  int horizon() const { return static_cast<int>(maps.size()); }
  const GridSpec& grid() const { return V.front().grid; }
};

struct PLBuildOptions {
  int resolution = 512;
  /// Chart half width; 0 selects 1.05 rho.
  double half_width = 0.0;
  /// Carathéodory/critical-value constant; 0 selects the measured maximum
  /// (at least 1).
  double K = 0.0;
};

/// V_m = D(0, rho), U_m = P_{m+1}^{-1}(V_{m+1}), base points at the critical
/// point of smallest modulus. Throws ConstructionError naming m when U_m
/// dilated by two cells leaves V_m.
PLSeq disc_pl_from_polys(const SequenceSpec& seq, double rho, int horizon, const PLBuildOptions& opt = {});

/// Assembles a sequence from explicit masks; used for hand-built examples.
PLSeq pl_from_masks(std::vector<RegionMask> U, std::vector<RegionMask> V, std::vector<Polynomial> maps,
                    int degree_bound, double K);

struct PLReport {
  bool pl1 = false;
  bool pl2 = false;
  bool pl3 = false;
  bool ok() const { return pl1 && pl2 && pl3; }

  /// per m: caratheodory bounds of (U_m, u_m) and (V_m, v_m)
  std::vector<double> u_bounds;
  std::vector<double> v_bounds;
  std::vector<bool> containment;
  /// per m: preimage count (or -1 when the counts disagree across targets)
  std::vector<int> degrees;
  std::vector<double> basepoint_derivative;
  /// per m: largest bracket over the critical values of f_{m+1}
  std::vector<DistBounds> critical_brackets;
  double max_bound = 0.0;
  double max_critical_upper = 0.0;
};

/// Checks PL1 (Carathéodory bounds and compact containment), PL2 (constant
/// proper degree in [2, d] over 50 targets; critical base points) and PL3
/// (critical values within hyperbolic distance K of the base point).
PLReport verify_pl(const PLSeq& pl, int targets = 50, std::uint64_t seed = 42);

/// Preimage count of f - w inside U for `targets` seeded targets in V; -1
/// when the counts disagree.
int proper_degree(const Polynomial& f, const RegionMask& U, const RegionMask& V, int targets, std::uint64_t seed);

struct RestrictionStep {
  AnnulusData T;
  Curve Gamma;
  RegionMask V_prime;
  RegionMask S;
  Curve gamma;
  RegionMask U_prime;
  AnnulusData L;
  bool Gamma_separates = false;
  bool gamma_separates = false;
  bool U_prime_inside_U = false;
  bool V_prime_inside_V = false;
  bool U_prime_compact_in_V_prime = false;
};

struct RestrictionResult {
  double B = 4.0;
  /// steps[m] holds the data at time m; steps has horizon entries, and
  /// V'_{horizon} is kept in last_V_prime.
  std::vector<RestrictionStep> steps;
  RegionMask last_V_prime;
  std::vector<int> original_degrees;
  std::vector<int> restricted_degrees;
};

/// Stage-I restriction: T_m from the hyperbolic bracket midpoint in
/// (BK, 2BK), Gamma_m its equator, V'_m the disc it bounds, S_m the
/// pullback of T_{m+1}, gamma_m the curve bounding f^{-1}(V'_{m+1}) around
/// u_m and U'_m the disc it bounds.
std::pair<PLSeq, RestrictionResult> restrict_pl(const PLSeq& pl, double B);

/// Definition-style sieve: keep cells whose orbit stays in U_n for every
/// materialized n up to m + depth.
JuliaApprox pl_filled_julia(const PLSeq& pl, int m, int depth);

/// |K_m xor K'_m| / |K_m| in cells.
double restriction_preserves_K(const PLSeq& pl, const PLSeq& restricted, int m, int depth);

}  // namespace itj
