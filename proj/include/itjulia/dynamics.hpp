#pragma once

#include <cstdint>
#include <vector>

#include "itjulia/core.hpp"
#include "itjulia/grid.hpp"

namespace itj {

struct EscapeResult {
  bool escaped = false;
  int steps = 0;
};

/// Follows z, Q_{m,m+1}(z), ..., Q_{m,m+max_depth}(z) and reports the first
/// index whose modulus exceeds escape_radius(seq.bounds()).
EscapeResult escape_time(const SequenceSpec& seq, long m, cplx z, int max_depth);

enum class JuliaMethod {
  /// Cell centres that do not escape within the depth.
  EscapeTime,
  /// Escape-time survivors together with the cells hit by backward orbits
  /// of the escape circle. Covers Julia sets too thin for centre sampling.
  Pullback,
};

struct JuliaApprox {
  long time = 0;
  int depth = 0;
  RegionMask k_mask;
  std::vector<std::size_t> j_cells;
  /// Escape step per cell, -1 when the centre never escaped.
  std::vector<int> steps;

  std::vector<cplx> j_points() const;
};

JuliaApprox filled_julia(const SequenceSpec& seq, long m, const GridSpec& grid, int depth,
                         JuliaMethod method = JuliaMethod::EscapeTime);

/// Cells met by the iterated preimages Q_{m,m+depth}^{-1}(C(0, R)),
/// deduplicated on a sub-grid of `oversample` points per cell side.
std::vector<std::uint8_t> pullback_cover(const SequenceSpec& seq, long m, const GridSpec& grid, int depth,
                                         int oversample = 4);

struct InvarianceResult {
  /// Largest Chebyshev cell distance from an image to the nearest j_cell of
  /// the target; +inf when an image leaves the chart or escapes.
  double max_cell_deviation = 0.0;
  int samples = 0;
  int escaped = 0;
};

/// Samples j_cells of ja_m, moves each centre onto the escape boundary by
/// bisection towards an exterior neighbour, maps it by Q_{m,n} and measures
/// the distance to the j_cells of ja_n.
InvarianceResult invariance_check(const SequenceSpec& seq, long m, long n, const JuliaApprox& ja_m,
                                  const JuliaApprox& ja_n, int samples, std::uint64_t seed = 42);

/// Spherical Hausdorff distance between two finite point sets.
double hausdorff_dist(const std::vector<cplx>& a, const std::vector<cplx>& b);

struct ComponentInfo {
  std::size_t cell_count = 0;
  double diameter = 0.0;
  cplx centroid{0.0, 0.0};
  std::vector<std::size_t> cells;
};

/// 8-connected components of the mask with spherical diameters.
std::vector<ComponentInfo> components(const RegionMask& mask);

/// Smallest spherical distance between cells of two different components.
double min_component_gap(const RegionMask& mask, const std::vector<ComponentInfo>& comps);

/// Spherical diameter of a finite point set.
double spherical_diameter(const std::vector<cplx>& pts);

}  // namespace itj
