#include "itjulia/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "itjulia/error.hpp"

namespace itj {

namespace {

struct Vec3 {
  double x, y, z;
};

Vec3 sphere_point(cplx w) {
  if (is_infinite(w)) return {0.0, 0.0, 1.0};
  const double r2 = std::norm(w);
  const double s = 1.0 + r2;
  return {2.0 * w.real() / s, 2.0 * w.imag() / s, (r2 - 1.0) / s};
}

double sq_dist(const Vec3& a, const Vec3& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz;
}

std::vector<Vec3> lift(const std::vector<cplx>& pts) {
  std::vector<Vec3> out;
  out.reserve(pts.size());
  for (const cplx& p : pts) out.push_back(sphere_point(p));
  return out;
}

std::vector<const Polynomial*> term_table(const SequenceSpec& seq, long m, int depth) {
  std::vector<const Polynomial*> t;
  t.reserve(static_cast<std::size_t>(std::max(depth, 0)));
  for (int k = 1; k <= depth; ++k) t.push_back(&seq.term(m + k));
  return t;
}

int escape_steps(const std::vector<const Polynomial*>& terms, cplx z, double r2) {
  if (std::norm(z) > r2) return 0;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    z = (*terms[k])(z);
    // NaN compares false, so test the negation
    if (!(std::norm(z) <= r2)) return static_cast<int>(k) + 1;
  }
  return -1;
}

}  // namespace

EscapeResult escape_time(const SequenceSpec& seq, long m, cplx z, int max_depth) {
  if (max_depth < 0) throw InputError("escape_time needs max_depth >= 0");
  if (m < 0) throw InputError("escape_time needs m >= 0");
  if (is_infinite(z)) return {true, 0};
  const double r = escape_radius(seq.bounds());
  const int s = escape_steps(term_table(seq, m, max_depth), z, r * r);
  if (s < 0) return {false, max_depth};
  return {true, s};
}

std::vector<cplx> JuliaApprox::j_points() const {
  std::vector<cplx> pts;
  pts.reserve(j_cells.size());
  for (std::size_t i : j_cells) pts.push_back(k_mask.grid.cell_center(i));
  return pts;
}

std::vector<std::uint8_t> pullback_cover(const SequenceSpec& seq, long m, const GridSpec& grid, int depth,
                                         int oversample) {
  grid.validate();
  const double R = escape_radius(seq.bounds());
  const double sub = grid.cell_width() / oversample;
  const long sub_n = static_cast<long>(grid.resolution) * oversample;
  auto key_of = [&](cplx z) -> long {
    const double fc = std::floor((z.real() - (grid.center.real() - grid.half_width)) / sub);
    const double fr = std::floor(((grid.center.imag() + grid.half_width) - z.imag()) / sub);
    if (fc < 0 || fr < 0 || fc >= sub_n || fr >= sub_n) return -1;
    return static_cast<long>(fr) * sub_n + static_cast<long>(fc);
  };
  auto dedup = [&](std::vector<cplx>& pts) {
    std::vector<std::pair<long, cplx>> keyed;
    keyed.reserve(pts.size());
    for (const cplx& p : pts) {
      const long k = key_of(p);
      if (k >= 0) keyed.emplace_back(k, p);
    }
    std::stable_sort(keyed.begin(), keyed.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    pts.clear();
    for (std::size_t i = 0; i < keyed.size(); ++i) {
      if (i == 0 || keyed[i].first != keyed[i - 1].first) pts.push_back(keyed[i].second);
    }
  };

  const int samples = std::max(64, static_cast<int>(std::ceil(2.0 * std::numbers::pi * R / sub)));
  std::vector<cplx> pts;
  pts.reserve(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) pts.push_back(std::polar(R, 2.0 * std::numbers::pi * k / samples));
  dedup(pts);

  std::vector<cplx> next;
  for (long t = m + depth; t > m; --t) {
    const Polynomial& p = seq.term(t);
    next.clear();
    next.reserve(pts.size() * static_cast<std::size_t>(p.degree()));
    for (const cplx& w : pts) {
      for (const cplx& z : preimages(p, w)) next.push_back(z);
    }
    pts.swap(next);
    dedup(pts);
  }

  std::vector<std::uint8_t> cover(grid.cell_count(), 0);
  for (const cplx& z : pts) {
    if (auto c = grid.cell_of(z)) cover[*c] = 1;
  }
  return cover;
}

JuliaApprox filled_julia(const SequenceSpec& seq, long m, const GridSpec& grid, int depth, JuliaMethod method) {
  grid.validate();
  if (depth < 0) throw InputError("filled_julia needs depth >= 0");
  if (m < 0) throw InputError("filled_julia needs m >= 0");
  const double R = escape_radius(seq.bounds());
  require_escape_disc(grid, R);

  JuliaApprox ja;
  ja.time = m;
  ja.depth = depth;
  ja.k_mask = RegionMask(grid, false);
  ja.steps.assign(grid.cell_count(), -1);
  const auto terms = term_table(seq, m, depth);
  const double r2 = R * R;
  for (std::size_t i = 0; i < grid.cell_count(); ++i) {
    const int s = escape_steps(terms, grid.cell_center(i), r2);
    ja.steps[i] = s;
    ja.k_mask.bits[i] = s < 0 ? 1 : 0;
  }
  if (method == JuliaMethod::Pullback && depth > 0) {
    const auto cover = pullback_cover(seq, m, grid, depth);
    for (std::size_t i = 0; i < cover.size(); ++i) {
      if (cover[i]) ja.k_mask.bits[i] = 1;
    }
  }
  ja.j_cells = boundary_cells(ja.k_mask);
  // a point of the filled set for the base point, when one exists
  if (!ja.j_cells.empty()) ja.k_mask.basepoint = grid.cell_center(ja.j_cells.front());
  return ja;
}

InvarianceResult invariance_check(const SequenceSpec& seq, long m, long n, const JuliaApprox& ja_m,
                                  const JuliaApprox& ja_n, int samples, std::uint64_t seed) {
  if (n < m || m < 0) throw InputError("invariance_check needs 0 <= m <= n");
  if (!(ja_m.k_mask.grid == ja_n.k_mask.grid)) throw InputError("invariance_check needs a shared grid");
  InvarianceResult res;
  if (ja_m.j_cells.empty()) throw InputError("invariance_check: source Julia approximation is empty");
  if (samples <= 0) return res;
  if (m == n) {
    res.samples = samples;
    return res;
  }
  const GridSpec& grid = ja_m.k_mask.grid;
  const int N = grid.resolution;

  std::vector<std::uint8_t> target(grid.cell_count(), 0);
  for (std::size_t i : ja_n.j_cells) target[i] = 1;
  if (ja_n.j_cells.empty()) throw InputError("invariance_check: target Julia approximation is empty");
  const std::vector<int> cheb = chessboard_distance(target, N);

  const double R = escape_radius(seq.bounds());
  // Q_{m,n} carries the escape level of depth D + (n - m) at time m onto the
  // depth-D level at time n, which is the one ja_n approximates
  const auto terms = term_table(seq, m, ja_n.depth + static_cast<int>(n - m));
  auto survives = [&](cplx z) { return escape_steps(terms, z, R * R) < 0; };

  std::mt19937_64 rng(seed);
  const std::size_t pool = ja_m.j_cells.size();
  for (int s = 0; s < samples; ++s) {
    const std::size_t pick = static_cast<std::size_t>((rng() >> 11) * 0x1.0p-53 * static_cast<double>(pool));
    const std::size_t cell = ja_m.j_cells[std::min(pick, pool - 1)];
    const int r = static_cast<int>(cell / N);
    const int c = static_cast<int>(cell % N);
    cplx inside = grid.cell_center(cell);
    // exterior 4-neighbour; the chart border counts as exterior
    cplx outside = inside;
    static const int d4[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
    for (const auto& d : d4) {
      if (!ja_m.k_mask.test(r + d[0], c + d[1])) {
        outside = grid.cell_center(r + d[0], c + d[1]);
        break;
      }
    }
    if (survives(inside) && !survives(outside)) {
      for (int it = 0; it < 50; ++it) {
        const cplx mid = 0.5 * (inside + outside);
        if (survives(mid)) {
          inside = mid;
        } else {
          outside = mid;
        }
      }
    }
    const OrbitValue img = compose_eval(seq, m, n, inside);
    ++res.samples;
    std::optional<std::size_t> at;
    if (!img.escaped) at = grid.cell_of(img.value);
    if (!at) {
      ++res.escaped;
      res.max_cell_deviation = std::numeric_limits<double>::infinity();
      continue;
    }
    res.max_cell_deviation = std::max(res.max_cell_deviation, static_cast<double>(cheb[*at]));
  }
  return res;
}

double hausdorff_dist(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.empty() || b.empty()) throw InputError("hausdorff_dist needs nonempty point sets");
  const std::vector<Vec3> va = lift(a);
  const std::vector<Vec3> vb = lift(b);
  // directed distance with the early-break scheme of Taha and Hanbury
  auto directed = [](const std::vector<Vec3>& x, const std::vector<Vec3>& y, std::size_t& ix, std::size_t& iy) {
    double cmax = -1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double cmin = std::numeric_limits<double>::infinity();
      std::size_t best = 0;
      bool broke = false;
      for (std::size_t j = 0; j < y.size(); ++j) {
        const double d = sq_dist(x[i], y[j]);
        if (d < cmin) {
          cmin = d;
          best = j;
          if (cmin <= cmax) {
            broke = true;
            break;
          }
        }
      }
      if (!broke && cmin > cmax) {
        cmax = cmin;
        ix = i;
        iy = best;
      }
    }
    return cmax;
  };
  std::size_t ai = 0, bi = 0, bj = 0, aj = 0;
  const double dab = directed(va, vb, ai, bi);
  const double dba = directed(vb, va, bj, aj);
  if (dab >= dba) return spherical_dist(a[ai], b[bi]);
  return spherical_dist(b[bj], a[aj]);
}

double spherical_diameter(const std::vector<cplx>& pts) {
  if (pts.size() < 2) return 0.0;
  const std::vector<Vec3> v = lift(pts);
  double best = -1.0;
  std::size_t bi = 0, bj = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      const double d = sq_dist(v[i], v[j]);
      if (d > best) {
        best = d;
        bi = i;
        bj = j;
      }
    }
  }
  return spherical_dist(pts[bi], pts[bj]);
}

std::vector<ComponentInfo> components(const RegionMask& mask) {
  const GridSpec& g = mask.grid;
  const int N = g.resolution;
  const Labeling lab = label_cells(mask.bits, N, true, 8);
  std::vector<ComponentInfo> out(static_cast<std::size_t>(lab.count));
  std::vector<std::vector<cplx>> edge_pts(out.size());
  for (std::size_t i = 0; i < mask.bits.size(); ++i) {
    const int l = lab.labels[i];
    if (l < 0) continue;
    ComponentInfo& ci = out[l];
    ci.cells.push_back(i);
    ci.centroid += g.cell_center(i);
    const int r = static_cast<int>(i / N);
    const int c = static_cast<int>(i % N);
    if (!mask.test(r - 1, c) || !mask.test(r + 1, c) || !mask.test(r, c - 1) || !mask.test(r, c + 1))
      edge_pts[l].push_back(g.cell_center(i));
  }
  for (std::size_t l = 0; l < out.size(); ++l) {
    ComponentInfo& ci = out[l];
    ci.cell_count = ci.cells.size();
    ci.centroid /= static_cast<double>(ci.cell_count);
    double diam = spherical_diameter(edge_pts[l]);
    // a component holding a point and its antipode has the full diameter
    for (const cplx& p : edge_pts[l]) {
      if (p == cplx{0.0, 0.0}) continue;
      const cplx anti = -1.0 / std::conj(p);
      auto cell = g.cell_of(anti);
      if (cell && lab.labels[*cell] == static_cast<int>(l)) {
        diam = std::numbers::pi / 2.0;
        break;
      }
    }
    ci.diameter = diam;
  }
  return out;
}

double min_component_gap(const RegionMask& mask, const std::vector<ComponentInfo>& comps) {
  if (comps.size() < 2) return std::numeric_limits<double>::infinity();
  const GridSpec& g = mask.grid;
  const int N = g.resolution;
  std::vector<std::vector<Vec3>> edges(comps.size());
  std::vector<std::vector<cplx>> raw(comps.size());
  for (std::size_t l = 0; l < comps.size(); ++l) {
    for (std::size_t i : comps[l].cells) {
      const int r = static_cast<int>(i / N);
      const int c = static_cast<int>(i % N);
      if (!mask.test(r - 1, c) || !mask.test(r + 1, c) || !mask.test(r, c - 1) || !mask.test(r, c + 1)) {
        raw[l].push_back(g.cell_center(i));
        edges[l].push_back(sphere_point(raw[l].back()));
      }
    }
  }
  double best = std::numeric_limits<double>::infinity();
  cplx pa, pb;
  for (std::size_t a = 0; a < comps.size(); ++a) {
    for (std::size_t b = a + 1; b < comps.size(); ++b) {
      for (std::size_t i = 0; i < edges[a].size(); ++i) {
        for (std::size_t j = 0; j < edges[b].size(); ++j) {
          const double d = sq_dist(edges[a][i], edges[b][j]);
          if (d < best) {
            best = d;
            pa = raw[a][i];
            pb = raw[b][j];
          }
        }
      }
    }
  }
  return spherical_dist(pa, pb);
}

}  // namespace itj
