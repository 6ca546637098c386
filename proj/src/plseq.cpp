#include "itjulia/plseq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "itjulia/contour.hpp"
#include "itjulia/error.hpp"

namespace itj {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool same_mask(const RegionMask& a, const RegionMask& b) {
  return a.grid == b.grid && a.contains_infinity == b.contains_infinity && a.basepoint == b.basepoint &&
         a.bits == b.bits;
}

bool subset(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] && !b[i]) return false;
  }
  return true;
}

bool compactly_inside(const RegionMask& inner, const RegionMask& outer, int cells) {
  return subset(dilate(inner.bits, inner.grid.resolution, cells), outer.bits);
}

cplx smallest_critical_point(const Polynomial& p) {
  const std::vector<cplx> crit = critical_points(p);
  cplx best = crit.front();
  for (const cplx& c : crit) {
    if (std::abs(c) < std::abs(best)) best = c;
  }
  return best;
}

double critical_upper(const Polynomial& f, const RegionMask& V) {
  double worst = 0.0;
  for (const cplx& c : critical_points(f)) {
    const cplx cv = f(c);
    if (!V.contains(cv) || !V.grid.cell_of(cv)) return kInf;
    worst = std::max(worst, hyperbolic_dist_bounds(V, cv, V.basepoint).upper);
  }
  return worst;
}

DistBounds critical_bracket(const Polynomial& f, const RegionMask& V) {
  DistBounds worst{0.0, 0.0};
  for (const cplx& c : critical_points(f)) {
    const cplx cv = f(c);
    if (!V.grid.cell_of(cv) || !V.contains(cv)) return {kInf, kInf};
    const DistBounds b = hyperbolic_dist_bounds(V, cv, V.basepoint);
    if (b.upper > worst.upper) worst = b;
  }
  return worst;
}

}  // namespace

PLSeq pl_from_masks(std::vector<RegionMask> U, std::vector<RegionMask> V, std::vector<Polynomial> maps,
                    int degree_bound, double K) {
  if (maps.empty()) throw InputError("polynomial-like sequence needs at least one map");
  if (U.size() != maps.size() || V.size() != maps.size() + 1)
    throw InputError("polynomial-like sequence needs |U| = |maps| and |V| = |maps| + 1");
  for (const auto& m : U) {
    if (!(m.grid == V.front().grid)) throw InputError("polynomial-like sequence needs one shared grid");
  }
  for (const auto& m : V) {
    if (!(m.grid == V.front().grid)) throw InputError("polynomial-like sequence needs one shared grid");
  }
  PLSeq pl;
  pl.U = std::move(U);
  pl.V = std::move(V);
  pl.maps = std::move(maps);
  pl.degree_bound = degree_bound;
  pl.K = K;
  return pl;
}

PLSeq disc_pl_from_polys(const SequenceSpec& seq, double rho, int horizon, const PLBuildOptions& opt) {
  if (!(rho > 0.0)) throw InputError("disc_pl_from_polys needs rho > 0");
  if (horizon < 1) throw InputError("disc_pl_from_polys needs horizon >= 1");
  GridSpec grid{0.0, opt.half_width > 0.0 ? opt.half_width : 1.05 * rho, opt.resolution};
  grid.validate();
  if (!grid.contains_disc(0.0, rho)) throw InputError("chart does not contain the disc D(0, rho)");

  PLSeq pl;
  pl.degree_bound = seq.bounds().d;
  std::vector<cplx> base(static_cast<std::size_t>(horizon) + 1);
  for (int m = 0; m <= horizon; ++m) {
    const Polynomial& p = seq.term(m + 1);
    base[m] = smallest_critical_point(p);
  }
  for (int m = 0; m <= horizon; ++m) {
    RegionMask V = disc_mask(grid, 0.0, rho);
    V.basepoint = base[m];
    if (!V.contains(base[m])) {
      std::ostringstream os;
      os << "base point of V_" << m << " lies outside D(0, rho)";
      throw ConstructionError(os.str(), m);
    }
    pl.V.push_back(std::move(V));
  }
  for (int m = 0; m < horizon; ++m) {
    const Polynomial& p = seq.term(m + 1);
    pl.maps.push_back(p);
    if (m > 0 && p == pl.maps[m - 1] && base[m] == base[m - 1] && same_mask(pl.V[m + 1], pl.V[m])) {
      pl.U.push_back(pl.U.back());
      continue;
    }
    const RegionMask& Vn = pl.V[m + 1];
    RegionMask U = mask_from(grid, [&](cplx z) { return Vn.contains(p(z)); });
    U.basepoint = base[m];
    if (!U.contains(base[m])) {
      std::ostringstream os;
      os << "critical base point of f_" << m + 1 << " is not in U_" << m;
      throw ConstructionError(os.str(), m);
    }
    if (!compactly_inside(U, pl.V[m], 2)) {
      std::ostringstream os;
      os << "preimage U_" << m << " is not compactly contained in V_" << m << " (rho too small)";
      throw ConstructionError(os.str(), m);
    }
    pl.U.push_back(std::move(U));
  }

  if (opt.K > 0.0) {
    pl.K = opt.K;
  } else {
    double k = 1.0;
    for (int m = 0; m < horizon; ++m) {
      if (m > 0 && same_mask(pl.U[m], pl.U[m - 1]) && same_mask(pl.V[m + 1], pl.V[m]) &&
          same_mask(pl.V[m], pl.V[m - 1]) && pl.maps[m] == pl.maps[m - 1])
        continue;
      k = std::max({k, caratheodory_bound_disc(pl.U[m]), caratheodory_bound_disc(pl.V[m]),
                    critical_upper(pl.maps[m], pl.V[m + 1])});
    }
    k = std::max(k, caratheodory_bound_disc(pl.V[horizon]));
    pl.K = k;
  }
  return pl;
}

int proper_degree(const Polynomial& f, const RegionMask& U, const RegionMask& V, int targets, std::uint64_t seed) {
  const GridSpec& g = V.grid;
  // targets keep away from the edge of V far enough that no preimage sits
  // in a boundary cell of U
  double slope = 0.0;
  for (std::size_t i = 0; i < U.bits.size(); ++i) {
    if (U.bits[i]) slope = std::max(slope, std::abs(f.derivative_at(g.cell_center(i))));
  }
  const int margin = 2 + static_cast<int>(std::ceil(slope));
  std::vector<std::uint8_t> deep = erode(V.bits, g.resolution, margin);
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < deep.size(); ++i) {
    if (deep[i]) pool.push_back(i);
  }
  if (pool.empty()) {
    for (std::size_t i = 0; i < V.bits.size(); ++i) {
      if (V.bits[i]) pool.push_back(i);
    }
  }
  if (pool.empty()) return -1;
  std::mt19937_64 rng(seed);
  int degree = -2;
  for (int t = 0; t < targets; ++t) {
    const auto k = static_cast<std::size_t>((rng() >> 11) * 0x1.0p-53 * static_cast<double>(pool.size()));
    const cplx w = g.cell_center(pool[std::min(k, pool.size() - 1)]);
    int count = 0;
    for (const cplx& z : preimages(f, w)) {
      if (U.contains(z)) ++count;
    }
    if (degree == -2) {
      degree = count;
    } else if (degree != count) {
      return -1;
    }
  }
  return degree < 0 ? -1 : degree;
}

PLReport verify_pl(const PLSeq& pl, int targets, std::uint64_t seed) {
  const int H = pl.horizon();
  PLReport rep;
  rep.pl1 = rep.pl2 = rep.pl3 = true;
  for (int m = 0; m < H; ++m) {
    const bool repeat = m > 0 && same_mask(pl.U[m], pl.U[m - 1]) && same_mask(pl.V[m], pl.V[m - 1]) &&
                        same_mask(pl.V[m + 1], pl.V[m]) && pl.maps[m] == pl.maps[m - 1];
    if (repeat) {
      rep.u_bounds.push_back(rep.u_bounds.back());
      rep.v_bounds.push_back(rep.v_bounds.back());
      rep.containment.push_back(rep.containment.back());
      rep.degrees.push_back(rep.degrees.back());
      rep.basepoint_derivative.push_back(rep.basepoint_derivative.back());
      rep.critical_brackets.push_back(rep.critical_brackets.back());
    } else {
      rep.u_bounds.push_back(caratheodory_bound_disc(pl.U[m]));
      rep.v_bounds.push_back(caratheodory_bound_disc(pl.V[m]));
      rep.containment.push_back(compactly_inside(pl.U[m], pl.V[m], 2));
      rep.degrees.push_back(proper_degree(pl.maps[m], pl.U[m], pl.V[m + 1], targets, seed));
      rep.basepoint_derivative.push_back(std::abs(pl.maps[m].derivative_at(pl.U[m].basepoint)));
      rep.critical_brackets.push_back(critical_bracket(pl.maps[m], pl.V[m + 1]));
    }
  }
  rep.v_bounds.push_back(same_mask(pl.V[H], pl.V[H - 1]) ? rep.v_bounds.back() : caratheodory_bound_disc(pl.V[H]));

  for (int m = 0; m < H; ++m) {
    rep.max_bound = std::max({rep.max_bound, rep.u_bounds[m], rep.v_bounds[m]});
    if (!rep.containment[m]) rep.pl1 = false;
    if (rep.degrees[m] < 2 || rep.degrees[m] > pl.degree_bound) rep.pl2 = false;
    if (!(rep.basepoint_derivative[m] <= 1e-9)) rep.pl2 = false;
    rep.max_critical_upper = std::max(rep.max_critical_upper, rep.critical_brackets[m].upper);
  }
  rep.max_bound = std::max(rep.max_bound, rep.v_bounds[H]);
  if (!(rep.max_bound <= pl.K)) rep.pl1 = false;
  if (!(rep.max_critical_upper <= pl.K)) rep.pl3 = false;
  return rep;
}

namespace {

struct OuterData {
  AnnulusData T;
  RegionMask V_prime;
  bool inside_V = false;
};

OuterData outer_step(const RegionMask& V, double lo, double hi) {
  const std::vector<double> q = quasihyperbolic_field(V, V.basepoint);
  RegionMask T(V.grid, false);
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double mid = 1.25 * q[i];
    if (V.bits[i] && mid > lo && mid < hi) T.bits[i] = 1;
  }
  OuterData out;
  try {
    out.T = annulus_data(T);
  } catch (const InputError& e) {
    throw ResolutionError(std::string("hyperbolic annulus T is not doubly connected (") + e.what() +
                          "); try a larger B or a finer grid");
  }
  out.V_prime = enclosed_region(out.T.equator, V.grid);
  out.V_prime.basepoint = V.basepoint;
  if (!out.V_prime.contains(V.basepoint))
    throw ResolutionError("equator of T does not enclose the base point; try a larger B or a finer grid");
  out.inside_V = compactly_inside(out.V_prime, V, 1);
  return out;
}

}  // namespace

std::pair<PLSeq, RestrictionResult> restrict_pl(const PLSeq& pl, double B) {
  if (!(B > 1.0)) throw InputError("restrict needs B > 1");
  const int H = pl.horizon();
  const GridSpec& g = pl.grid();
  const double lo = B * pl.K;
  const double hi = 2.0 * B * pl.K;

  std::vector<OuterData> outer;
  for (int m = 0; m <= H; ++m) {
    if (m > 0 && same_mask(pl.V[m], pl.V[m - 1])) {
      outer.push_back(outer.back());
    } else {
      outer.push_back(outer_step(pl.V[m], lo, hi));
    }
  }

  RestrictionResult res;
  res.B = B;
  for (int m = 0; m < H; ++m) {
    const bool repeat = m > 0 && pl.maps[m] == pl.maps[m - 1] && same_mask(pl.U[m], pl.U[m - 1]) &&
                        same_mask(outer[m + 1].V_prime, outer[m].V_prime) &&
                        same_mask(outer[m].V_prime, outer[m - 1].V_prime);
    if (repeat) {
      res.steps.push_back(res.steps.back());
      continue;
    }
    const Polynomial& f = pl.maps[m];
    const RegionMask& U = pl.U[m];
    const cplx u = U.basepoint;
    RestrictionStep st;
    st.T = outer[m].T;
    st.Gamma = outer[m].T.equator;
    st.Gamma_separates = separates(st.Gamma, outer[m].T.inner_point, g);
    st.V_prime = outer[m].V_prime;
    st.V_prime_inside_V = outer[m].inside_V;

    const RegionMask& T_next = outer[m + 1].T.mask;
    const RegionMask& Vp_next = outer[m + 1].V_prime;
    st.S = RegionMask(g, false);
    std::vector<double> indicator(g.cell_count(), 0.0);
    for (std::size_t i = 0; i < g.cell_count(); ++i) {
      const cplx w = f(g.cell_center(i));
      if (U.bits[i] && T_next.contains(w)) st.S.bits[i] = 1;
      if (Vp_next.contains(w)) indicator[i] = 1.0;
    }
    st.S.basepoint = u;

    // the pullback curve around the base point
    const std::vector<Curve> curves = marching_squares(indicator, g, 0.5, 0.0);
    const Curve* best = nullptr;
    for (const Curve& c : curves) {
      if (!c.closed || winding_number(c, u) == 0) continue;
      if (!best || c.length() > best->length()) best = &c;
    }
    if (!best) throw ResolutionError("pullback curve does not close around the base point; try a larger B or a finer grid");
    st.gamma = *best;
    st.gamma.basepoint_index = 0;
    st.gamma_separates = separates(st.gamma, u, g);
    st.U_prime = enclosed_region(st.gamma, g);
    st.U_prime.basepoint = u;
    st.U_prime_inside_U = subset(st.U_prime.bits, U.bits);
    st.U_prime_compact_in_V_prime = compactly_inside(st.U_prime, st.V_prime, 1);

    RegionMask L(g, false);
    const auto closure = dilate(st.U_prime.bits, g.resolution, 1);
    for (std::size_t i = 0; i < L.bits.size(); ++i) L.bits[i] = (st.V_prime.bits[i] && !closure[i]) ? 1 : 0;
    try {
      st.L = annulus_data(L);
    } catch (const InputError& e) {
      throw ResolutionError(std::string("annulus L is not doubly connected (") + e.what() +
                            "); try a larger B or a finer grid");
    }
    res.steps.push_back(std::move(st));
  }
  res.last_V_prime = outer[H].V_prime;

  std::vector<RegionMask> Up, Vp;
  for (int m = 0; m < H; ++m) Up.push_back(res.steps[m].U_prime);
  for (int m = 0; m <= H; ++m) Vp.push_back(outer[m].V_prime);
  PLSeq restricted = pl_from_masks(std::move(Up), std::move(Vp), pl.maps, pl.degree_bound, 2.0 * pl.K);

  for (int m = 0; m < H; ++m) {
    if (m > 0 && res.steps[m].U_prime.bits == res.steps[m - 1].U_prime.bits && pl.maps[m] == pl.maps[m - 1] &&
        same_mask(pl.U[m], pl.U[m - 1]) && same_mask(pl.V[m + 1], pl.V[m]) &&
        same_mask(restricted.V[m + 1], restricted.V[m])) {
      res.original_degrees.push_back(res.original_degrees.back());
      res.restricted_degrees.push_back(res.restricted_degrees.back());
      continue;
    }
    res.original_degrees.push_back(proper_degree(pl.maps[m], pl.U[m], pl.V[m + 1], 50, 42));
    res.restricted_degrees.push_back(proper_degree(pl.maps[m], restricted.U[m], restricted.V[m + 1], 50, 42));
  }
  return {std::move(restricted), std::move(res)};
}

JuliaApprox pl_filled_julia(const PLSeq& pl, int m, int depth) {
  const int H = pl.horizon();
  if (m < 0 || m >= H) throw InputError("pl_filled_julia: time outside the materialized range");
  if (depth < 0) throw InputError("pl_filled_julia needs depth >= 0");
  if (m + depth > H - 1) {
    std::ostringstream os;
    os << "horizon " << H << " exhausted before depth " << depth << " at time " << m
       << " (needs horizon >= " << m + depth + 1 << ")";
    throw ConstructionError(os.str(), m + depth);
  }
  const GridSpec& g = pl.grid();
  JuliaApprox ja;
  ja.time = m;
  ja.depth = depth;
  ja.k_mask = RegionMask(g, false);
  ja.k_mask.basepoint = pl.U[m].basepoint;
  ja.steps.assign(g.cell_count(), -1);
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    if (!pl.U[m].bits[i]) {
      ja.steps[i] = 0;
      continue;
    }
    cplx z = g.cell_center(i);
    bool keep = true;
    for (int k = 1; k <= depth; ++k) {
      z = pl.maps[m + k - 1](z);
      if (!pl.U[m + k].contains(z)) {
        keep = false;
        ja.steps[i] = k;
        break;
      }
    }
    ja.k_mask.bits[i] = keep ? 1 : 0;
  }
  ja.j_cells = boundary_cells(ja.k_mask);
  return ja;
}

double restriction_preserves_K(const PLSeq& pl, const PLSeq& restricted, int m, int depth) {
  if (!(pl.grid() == restricted.grid())) throw InputError("restriction_preserves_K needs a shared grid");
  const JuliaApprox a = pl_filled_julia(pl, m, depth);
  const JuliaApprox b = pl_filled_julia(restricted, m, depth);
  std::size_t diff = 0, base = 0;
  for (std::size_t i = 0; i < a.k_mask.bits.size(); ++i) {
    if (a.k_mask.bits[i]) ++base;
    if (a.k_mask.bits[i] != b.k_mask.bits[i]) ++diff;
  }
  if (base == 0) return diff == 0 ? 0.0 : 1.0;
  return static_cast<double>(diff) / static_cast<double>(base);
}

}  // namespace itj
