#pragma once

#include <optional>
#include <vector>

#include "itjulia/core.hpp"
#include "itjulia/dynamics.hpp"
#include "itjulia/grid.hpp"

namespace itj {

/// The counterexample sequence with n cycles, or the limit sequence when n
/// is empty.
SequenceSpec counterexample_seq(std::optional<int> n);

/// Chart covering the escape disc of the counterexample bounds (d=2, K=1, M=9).
GridSpec counterexample_chart(int resolution);

struct Thm72Row {
  int j = 0;
  long time_index = 0;
  int component_count = 0;
  double max_diameter = 0.0;
  double min_diameter = 0.0;
  double min_single_step_derivative_on_J = 0.0;
  double adjacent_gap = 0.0;
};

/// Geometry of the Julia set at time (j+1)(j+2)/2 - 1: component count,
/// spherical diameters, min |P'_{t+1}| over J cells and the smallest
/// spherical gap between components. For finite n and j == n the set is the
/// unit circle; the row then has one component and a NaN gap.
Thm72Row thm72_geometry(std::optional<int> n, int j, const GridSpec& grid, int depth);

struct ContainmentResult {
  bool pass = false;
  /// J cells found inside D(3, 1 - 2h) at time t_j - 1
  std::size_t hits_before = 0;
  /// J cells found inside D(0, 1 - 2h) at times t_j and t_j + 1
  std::size_t hits_at = 0;
  std::size_t hits_after = 0;
};

ContainmentResult thm72_containment(std::optional<int> n, int j, const GridSpec& grid, int depth);

struct SeparationResult {
  double R = 0.0;
  double delta = 0.0;
  int components = 0;
  double component_gap = 0.0;
  int circle_samples = 0;
  int circle_escaped = 0;
  bool gap_ok = false;
};

/// For z^2 + 2: checks that C(0, 2) escapes, finds the smallest R on a 0.01
/// grid in (1, 2) with the filled set inside D(0, R), and measures the
/// depth-one preimage of D(0, R). delta = 2 sqrt(2 - R) is Euclidean.
SeparationResult z2plus2_separation(const GridSpec& grid, int depth);

/// delta divided by the adjacent gap at time t_j of the limit sequence.
std::vector<double> equiconjugacy_violation(const std::vector<int>& j_list, const GridSpec& grid, int depth);

struct TurningReport {
  double constant = 0.0;
  int resolution = 0;
  int depth = 0;
  int n_points = 0;
};

/// Bounded-turning constant max diam(smaller arc) / |z1 - z2| over point
/// pairs at index separation >= min_separation on a closed curve.
double turning_constant(const std::vector<cplx>& closed_curve, int min_separation = 8);

/// Resamples a closed polyline to n points equally spaced in arc length.
std::vector<cplx> resample_closed(const std::vector<cplx>& pts, int n);

/// Julia set at time 0 of a sequence of monic centred quadratics z^2 + c_m
/// with sup |c_m| < 1/4, traced as a closed curve; returns its turning
/// constant. Throws InputError outside the hypothesis.
TurningReport thm71_quasicircle(const SequenceSpec& seq, const GridSpec& grid, int depth, int n_points = 512);

/// Spherical Hausdorff distance between J_m of counterexample_seq(n) and of
/// the limit sequence for each n.
std::vector<double> hausdorff_convergence(const std::vector<int>& n_list, long m, const GridSpec& grid, int depth);

}  // namespace itj
