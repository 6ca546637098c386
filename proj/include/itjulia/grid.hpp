#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "itjulia/core.hpp"

namespace itj {

/// Square raster chart. Row 0 is the top edge (largest imaginary part).
struct GridSpec {
  cplx center{0.0, 0.0};
  double half_width = 2.0;
  int resolution = 512;

  void validate() const;
  double cell_width() const { return 2.0 * half_width / resolution; }
  std::size_t cell_count() const {
    return static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution);
  }
  cplx cell_center(int row, int col) const;
  cplx cell_center(std::size_t index) const;
  /// Cell containing z, or nothing when z lies outside the chart.
  std::optional<std::size_t> cell_of(cplx z) const;
  /// Fractional (row, col) coordinates of z in cell units.
  std::pair<double, double> to_cell_coords(cplx z) const;
  bool contains_disc(cplx c, double radius) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Chart of half width radius + 1 centred at 0.
GridSpec chart_for_radius(double radius, int resolution);

/// Throws GridTooSmall unless the chart covers the closed disc of radius
/// escape_radius + 1 about 0.
void require_escape_disc(const GridSpec& grid, double escape_r);

/// A region of the sphere drawn on a chart: the set cells, plus every point
/// outside the chart (including infinity) when contains_infinity is set.
struct RegionMask {
  GridSpec grid;
  std::vector<std::uint8_t> bits;
  bool contains_infinity = false;
  cplx basepoint{0.0, 0.0};

  RegionMask() = default;
  explicit RegionMask(const GridSpec& g, bool infinity = false);

  bool test(std::size_t i) const { return bits[i] != 0; }
  bool test(int row, int col) const;
  void set(std::size_t i, bool v = true) { bits[i] = v ? 1 : 0; }
  /// Membership of an arbitrary point (outside the chart uses the infinity flag).
  bool contains(cplx z) const;
  std::size_t count() const;
  double area() const;
  RegionMask complement() const;
};

/// Mask of a predicate evaluated at cell centres.
template <class Pred>
RegionMask mask_from(const GridSpec& grid, Pred&& inside, bool infinity = false) {
  RegionMask m(grid, infinity);
  for (std::size_t i = 0; i < grid.cell_count(); ++i) m.bits[i] = inside(grid.cell_center(i)) ? 1 : 0;
  return m;
}

RegionMask disc_mask(const GridSpec& grid, cplx center, double radius);
/// {r < |z - center| < R}
RegionMask annulus_mask(const GridSpec& grid, cplx center, double r, double R);

/// Connected-component labels (-1 where the predicate fails).
struct Labeling {
  std::vector<int> labels;
  int count = 0;
  std::vector<std::size_t> sizes;
};

/// Labels cells with bits[i] == want using 4- or 8-connectivity.
Labeling label_cells(const std::vector<std::uint8_t>& bits, int resolution, bool want,
                     int connectivity);

/// Components of the complement of a mask on the sphere. Complement cells
/// touching the chart border join the region outside the chart unless that
/// region belongs to the mask. `outer` is the id of the component containing
/// the outside of the chart (and infinity), or -1 when there is none.
struct ComplementComponents {
  Labeling cells;
  int outer = -1;
  int count() const { return cells.count + (outer_is_virtual ? 1 : 0); }
  bool outer_is_virtual = false;
};
ComplementComponents complement_components(const RegionMask& mask);

/// Mask cells with a 4-neighbour outside the mask. Cells on the chart border
/// count as touching the outside unless the mask contains infinity.
std::vector<std::size_t> boundary_cells(const RegionMask& mask);

/// Exact squared Euclidean distance transform in cell units: for every cell,
/// the squared distance to the nearest cell whose feature bit is set.
/// Cells are at integer positions; with no feature the result is +inf.
std::vector<double> squared_distance_transform(const std::vector<std::uint8_t>& feature,
                                               int resolution);

/// Chebyshev (chessboard) distance in cells to the nearest feature cell.
std::vector<int> chessboard_distance(const std::vector<std::uint8_t>& feature, int resolution);

/// Euclidean distance from each mask cell centre to the complement, in world
/// units, minus half a cell (0 outside the mask). The outside of the chart
/// counts as complement unless the mask contains infinity.
std::vector<double> boundary_distance(const RegionMask& mask);

/// Chessboard dilation by `radius` cells.
std::vector<std::uint8_t> dilate(const std::vector<std::uint8_t>& bits, int resolution, int radius);
/// Chessboard erosion by `radius` cells (outside the chart counts as unset).
std::vector<std::uint8_t> erode(const std::vector<std::uint8_t>& bits, int resolution, int radius);

/// Cells of the 8-connected component of the mask containing `cell`.
RegionMask component_containing(const RegionMask& mask, std::size_t cell);

/// Cells not reachable from the chart border through unset cells, i.e. the
/// mask with its holes filled.
RegionMask fill_holes(const RegionMask& mask);

}  // namespace itj
