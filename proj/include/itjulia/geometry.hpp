#pragma once

#include <cstdint>
#include <vector>

#include "itjulia/contour.hpp"
#include "itjulia/core.hpp"
#include "itjulia/grid.hpp"

namespace itj {

/// Two-sided bracket for a hyperbolic distance (curvature -1).
struct DistBounds {
  double lower = 0.0;
  double upper = 0.0;
  bool contains(double x) const { return lower <= x && x <= upper; }
};

/// Quasihyperbolic path length from `source` to every cell of the domain on
/// the 8-neighbour graph. Edge weight is the step length times the mean of
/// 1/delta at its ends, with delta from boundary_distance. Cells that cannot
/// be reached hold +inf.
std::vector<double> quasihyperbolic_field(const RegionMask& domain, cplx source);

/// Quasihyperbolic path length between two points of the domain.
double quasihyperbolic_dist(const RegionMask& domain, cplx z, cplx w);

/// (Q/2, 2Q) from the quasihyperbolic length Q; upper is exactly 4 * lower.
DistBounds hyperbolic_dist_bounds(const RegionMask& domain, cplx z, cplx w);

/// Exact hyperbolic distance in the unit disc.
double disc_hyperbolic_dist(cplx z, cplx w);
/// Exact hyperbolic distance in the round annulus {r < |z| < R}.
double round_annulus_hyperbolic_dist(double r, double R, cplx z, cplx w);

/// Harmonic measure of the outer boundary in a doubly connected mask.
struct AnnulusPotential {
  /// Potential at every cell: solved values on the mask, 0 on the inner
  /// complement, 1 on the outer complement.
  std::vector<double> field;
  double energy = 0.0;
  int iterations = 0;
  int inner_component = 0;
  int outer_component = 1;
  /// A point of the inner complement, used for separation checks.
  cplx inner_point{0.0, 0.0};
};

AnnulusPotential annulus_potential(const RegionMask& mask);

struct AnnulusData {
  RegionMask mask;
  double modulus = 0.0;
  Curve equator;
  int inner_component = 0;
  int outer_component = 1;
  cplx inner_point{0.0, 0.0};
};

/// Modulus 1/E of the discrete Dirichlet energy; round annuli give
/// log(R/r)/(2 pi).
double annulus_modulus(const RegionMask& mask);
/// Half level set of the harmonic potential as one closed curve.
Curve equator(const RegionMask& mask);
/// Modulus and equator from one potential solve.
AnnulusData annulus_data(const RegionMask& mask);

/// Whether a closed curve winds around the inner complement and not around
/// the outside of the chart.
bool separates(const Curve& curve, cplx inner_point, const GridSpec& grid);

struct CaratheodoryLimit {
  bool degenerate = false;
  RegionMask domain;
  cplx point{0.0, 0.0};
  /// Largest Hausdorff step between consecutive complements in the trailing
  /// half, in cells.
  double oscillation_cells = 0.0;
};

/// Carathéodory kernel of a sequence of pointed domains on a shared chart.
CaratheodoryLimit caratheodory_limit(const std::vector<RegionMask>& domains);

/// |log(delta(u) * diam(complement))| with spherical distance to the
/// boundary and spherical diameter of the complement.
double caratheodory_bound_disc(const RegionMask& domain);

/// Largest spherical derivative of p over sampled cells whose hyperbolic
/// upper bound from the base point is at most radius.
double lipschitz_profile(const Polynomial& p, const RegionMask& domain, double radius, int samples,
                         std::uint64_t seed = 42);

struct AnnulusCalibration {
  double modulus = 0.0;
  /// min over sampled pairs of exact distance / quasihyperbolic length
  double lower_constant = 0.0;
  /// max over sampled pairs of exact distance / quasihyperbolic length
  double upper_ratio = 0.0;
  bool upper_holds = false;
};

/// Samples pairs on the middle circle of a round annulus of the given
/// modulus and compares the exact hyperbolic distance with the
/// quasihyperbolic length.
AnnulusCalibration calibrate_round_annulus(double modulus, int resolution);

}  // namespace itj
