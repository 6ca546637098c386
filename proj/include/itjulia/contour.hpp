#pragma once

#include <vector>

#include "itjulia/core.hpp"
#include "itjulia/grid.hpp"

namespace itj {

/// Ordered polyline. Closed curves do not repeat their first point.
struct Curve {
  std::vector<cplx> points;
  bool closed = false;
  int basepoint_index = 0;

  double length() const;
  /// Largest gap between consecutive points (wrapping when closed).
  double max_step() const;
};

/// Level-set extraction by marching squares on a field sampled at cell
/// centres. `outside` is the value assumed beyond the chart edge, so every
/// contour of a padded field closes. Saddles are resolved by the centre
/// average.
std::vector<Curve> marching_squares(const std::vector<double>& field, const GridSpec& grid, double level,
                                    double outside);

/// Winding number of a closed curve about z (0 when z lies on the curve).
int winding_number(const Curve& curve, cplx z);

/// Whether z lies inside the closed polygon (even-odd rule).
bool point_in_polygon(const Curve& curve, cplx z);

/// Cells whose centres have nonzero winding number with respect to the curve.
RegionMask enclosed_region(const Curve& curve, const GridSpec& grid);

}  // namespace itj
