#include "itjulia/apps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "itjulia/contour.hpp"
#include "itjulia/error.hpp"

namespace itj {

SequenceSpec counterexample_seq(std::optional<int> n) {
  return n ? SequenceSpec::counterexample(*n) : SequenceSpec::counterexample_limit();
}

GridSpec counterexample_chart(int resolution) {
  return chart_for_radius(escape_radius(Bounds{2, 1.0, 9.0}), resolution);
}

namespace {

void check_j(std::optional<int> n, int j) {
  if (j < 1) throw InputError("j must be >= 1");
  if (n && j > *n) throw InputError("j must not exceed n");
}

double euclidean_gap(const RegionMask& mask, const std::vector<ComponentInfo>& comps) {
  const GridSpec& g = mask.grid;
  const int N = g.resolution;
  std::vector<std::vector<cplx>> edge(comps.size());
  for (std::size_t l = 0; l < comps.size(); ++l) {
    for (std::size_t i : comps[l].cells) {
      const int r = static_cast<int>(i / N), c = static_cast<int>(i % N);
      if (!mask.test(r - 1, c) || !mask.test(r + 1, c) || !mask.test(r, c - 1) || !mask.test(r, c + 1))
        edge[l].push_back(g.cell_center(i));
    }
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < comps.size(); ++a) {
    for (std::size_t b = a + 1; b < comps.size(); ++b) {
      for (const cplx& p : edge[a]) {
        for (const cplx& q : edge[b]) best = std::min(best, std::norm(p - q));
      }
    }
  }
  return std::sqrt(best);
}

}  // namespace

Thm72Row thm72_geometry(std::optional<int> n, int j, const GridSpec& grid, int depth) {
  check_j(n, j);
  const SequenceSpec seq = counterexample_seq(n);
  Thm72Row row;
  row.j = j;
  row.time_index = cycle_time(j);
  const JuliaApprox ja = filled_julia(seq, row.time_index, grid, depth, JuliaMethod::Pullback);
  const std::vector<ComponentInfo> comps = components(ja.k_mask);
  // after the last cycle of a finite sequence only z^2 follows and J is the unit circle
  const bool last_cycle = n && j == *n;
  if (comps.size() < 2 && !last_cycle) {
    std::ostringstream os;
    os << "Julia set at time " << row.time_index << " shows " << comps.size()
       << " component(s); resolution insufficient to separate the pieces, try doubling it";
    throw ResolutionError(os.str());
  }
  row.component_count = static_cast<int>(comps.size());
  row.max_diameter = 0.0;
  row.min_diameter = std::numeric_limits<double>::infinity();
  for (const auto& c : comps) {
    row.max_diameter = std::max(row.max_diameter, c.diameter);
    row.min_diameter = std::min(row.min_diameter, c.diameter);
  }
  const Polynomial& next = seq.term(row.time_index + 1);
  row.min_single_step_derivative_on_J = std::numeric_limits<double>::infinity();
  for (const cplx& z : ja.j_points())
    row.min_single_step_derivative_on_J = std::min(row.min_single_step_derivative_on_J, std::abs(next.derivative_at(z)));
  row.adjacent_gap = comps.size() >= 2 ? min_component_gap(ja.k_mask, comps) : std::numeric_limits<double>::quiet_NaN();
  return row;
}

ContainmentResult thm72_containment(std::optional<int> n, int j, const GridSpec& grid, int depth) {
  check_j(n, j);
  const SequenceSpec seq = counterexample_seq(n);
  const long t = cycle_time(j);
  const double h = grid.cell_width();
  auto hits = [&](long time, cplx centre) {
    const JuliaApprox ja = filled_julia(seq, time, grid, depth, JuliaMethod::Pullback);
    std::size_t count = 0;
    for (const cplx& z : ja.j_points()) {
      if (std::abs(z - centre) < 1.0 - 2.0 * h) ++count;
    }
    return count;
  };
  ContainmentResult res;
  res.hits_before = hits(t - 1, 3.0);
  res.hits_at = hits(t, 0.0);
  res.hits_after = hits(t + 1, 0.0);
  res.pass = res.hits_before == 0 && res.hits_at == 0 && res.hits_after == 0;
  return res;
}

SeparationResult z2plus2_separation(const GridSpec& grid, int depth) {
  const Bounds bounds{2, 1.0, 2.0};
  const SequenceSpec seq = SequenceSpec::constant(Polynomial({2.0, 0.0, 1.0}), bounds);
  SeparationResult res;

  res.circle_samples = 512;
  for (int k = 0; k < res.circle_samples; ++k) {
    const cplx z = std::polar(2.0, 2.0 * std::numbers::pi * k / res.circle_samples);
    if (escape_time(seq, 0, z, 50).escaped) ++res.circle_escaped;
  }

  const JuliaApprox ja = filled_julia(seq, 0, grid, depth, JuliaMethod::Pullback);
  const double h = grid.cell_width();
  double reach = 0.0;
  for (std::size_t i = 0; i < ja.k_mask.bits.size(); ++i) {
    if (ja.k_mask.bits[i]) reach = std::max(reach, std::abs(grid.cell_center(i)) + h / std::numbers::sqrt2);
  }
  if (!(reach < 2.0)) throw ResolutionError("filled set is not inside D(0, 2) at this depth; increase the depth");
  // smallest R = k/100 in (1, 2) with the filled set inside D(0, R)
  int k = std::max(101, static_cast<int>(std::floor(reach * 100.0)));
  while (k / 100.0 < reach) ++k;
  if (k >= 200) throw ResolutionError("no admissible R below 2 at this resolution");
  res.R = k / 100.0;
  res.delta = 2.0 * std::sqrt(2.0 - res.R);

  const Polynomial& p = seq.term(1);
  RegionMask pre = mask_from(grid, [&](cplx z) { return std::abs(p(z)) < res.R; });
  const std::vector<ComponentInfo> comps = components(pre);
  res.components = static_cast<int>(comps.size());
  res.component_gap = comps.size() >= 2 ? euclidean_gap(pre, comps) : 0.0;
  res.gap_ok = res.components == 2 && res.component_gap >= res.delta - 4.0 * h;
  return res;
}

std::vector<double> equiconjugacy_violation(const std::vector<int>& j_list, const GridSpec& grid, int depth) {
  for (std::size_t i = 1; i < j_list.size(); ++i) {
    if (j_list[i] <= j_list[i - 1]) throw InputError("j_list must be increasing");
  }
  const SeparationResult sep = z2plus2_separation(chart_for_radius(escape_radius(Bounds{2, 1.0, 2.0}), grid.resolution), depth);
  std::vector<double> ratios;
  for (int j : j_list) {
    const Thm72Row row = thm72_geometry(std::nullopt, j, grid, depth);
    ratios.push_back(sep.delta / row.adjacent_gap);
  }
  return ratios;
}

std::vector<cplx> resample_closed(const std::vector<cplx>& pts, int n) {
  if (pts.size() < 3 || n < 3) throw InputError("resample_closed needs a closed polyline and n >= 3");
  const std::size_t m = pts.size();
  std::vector<double> cum(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) cum[i + 1] = cum[i] + std::abs(pts[(i + 1) % m] - pts[i]);
  const double total = cum[m];
  std::vector<cplx> out;
  out.reserve(static_cast<std::size_t>(n));
  std::size_t seg = 0;
  for (int k = 0; k < n; ++k) {
    const double s = total * k / n;
    while (seg + 1 < m && cum[seg + 1] <= s) ++seg;
    const double len = cum[seg + 1] - cum[seg];
    const double t = len > 0.0 ? (s - cum[seg]) / len : 0.0;
    out.push_back(pts[seg] + t * (pts[(seg + 1) % m] - pts[seg]));
  }
  return out;
}

double turning_constant(const std::vector<cplx>& curve, int min_separation) {
  const int n = static_cast<int>(curve.size());
  if (n < 2 * min_separation + 1) throw InputError("turning_constant: too few points for the separation");
  // arc[i][k]: diameter of the forward arc from i covering k steps
  std::vector<double> arc(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    double* row = arc.data() + static_cast<std::size_t>(i) * n;
    row[0] = 0.0;
    for (int k = 1; k < n; ++k) {
      const cplx zk = curve[(i + k) % n];
      double far = 0.0;
      for (int l = 0; l < k; ++l) far = std::max(far, std::norm(zk - curve[(i + l) % n]));
      row[k] = std::max(row[k - 1], std::sqrt(far));
    }
  }
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int k = min_separation; k <= n - min_separation; ++k) {
      const int j = (i + k) % n;
      const double chord = std::abs(curve[i] - curve[j]);
      if (chord == 0.0) return std::numeric_limits<double>::infinity();
      const double smaller = std::min(arc[static_cast<std::size_t>(i) * n + k], arc[static_cast<std::size_t>(j) * n + (n - k)]);
      worst = std::max(worst, smaller / chord);
    }
  }
  return worst;
}

TurningReport thm71_quasicircle(const SequenceSpec& seq, const GridSpec& grid, int depth, int n_points) {
  std::vector<Polynomial> distinct;
  if (seq.kind() != SequenceKind::PeriodicTail) {
    throw InputError("outside quasicircle hypothesis (terms must be monic centred quadratics z^2 + c_m)");
  }
  for (const auto& p : seq.prefix()) distinct.push_back(p);
  for (const auto& p : seq.tail()) distinct.push_back(p);
  double sup = 0.0;
  for (const auto& p : distinct) {
    const auto& a = p.coeffs();
    if (p.degree() != 2 || a[2] != cplx{1.0, 0.0} || a[1] != cplx{0.0, 0.0})
      throw InputError("outside quasicircle hypothesis (terms must be monic centred quadratics z^2 + c_m)");
    sup = std::max(sup, std::abs(a[0]));
  }
  if (!(sup < 0.25)) {
    std::ostringstream os;
    os << "outside quasicircle hypothesis (sup |c_m| = " << sup << " must be < 1/4)";
    throw InputError(os.str());
  }

  const JuliaApprox ja = filled_julia(seq, 0, grid, depth);
  std::vector<double> field(grid.cell_count(), 0.0);
  for (std::size_t i = 0; i < field.size(); ++i) field[i] = ja.k_mask.bits[i] ? 1.0 : 0.0;
  const std::vector<Curve> curves = marching_squares(field, grid, 0.5, 0.0);
  const Curve* best = nullptr;
  for (const Curve& c : curves) {
    if (c.closed && (!best || c.length() > best->length())) best = &c;
  }
  if (!best || best->points.size() < 16) throw ResolutionError("Julia set boundary does not close into a curve at this resolution");
  // the traced boundary must surround the rest of the filled set
  for (const Curve& c : curves) {
    if (&c != best && c.closed && winding_number(*best, c.points.front()) == 0)
      throw ResolutionError("Julia set boundary splits into several curves at this resolution; try doubling it");
  }
  TurningReport rep;
  rep.resolution = grid.resolution;
  rep.depth = depth;
  rep.n_points = n_points;
  rep.constant = turning_constant(resample_closed(best->points, n_points), 8);
  return rep;
}

std::vector<double> hausdorff_convergence(const std::vector<int>& n_list, long m, const GridSpec& grid, int depth) {
  for (std::size_t i = 1; i < n_list.size(); ++i) {
    if (n_list[i] <= n_list[i - 1]) throw InputError("n_list must be increasing");
  }
  const JuliaApprox lim = filled_julia(counterexample_seq(std::nullopt), m, grid, depth, JuliaMethod::Pullback);
  const std::vector<cplx> lim_pts = lim.j_points();
  std::vector<double> out;
  for (int n : n_list) {
    const JuliaApprox ja = filled_julia(counterexample_seq(n), m, grid, depth, JuliaMethod::Pullback);
    out.push_back(hausdorff_dist(ja.j_points(), lim_pts));
  }
  return out;
}

}  // namespace itj
