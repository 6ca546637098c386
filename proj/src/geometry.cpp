#include "itjulia/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <random>
#include <sstream>

#include "itjulia/dynamics.hpp"
#include "itjulia/error.hpp"

namespace itj {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t require_cell(const RegionMask& domain, cplx z, const char* what) {
  auto cell = domain.grid.cell_of(z);
  if (!cell || !domain.bits[*cell]) {
    std::ostringstream os;
    os << what << " (" << z.real() << ", " << z.imag() << ") is not in the domain";
    throw InputError(os.str());
  }
  return *cell;
}

// Dijkstra over the 8-neighbour graph; stops early once `target` settles.
std::vector<double> qh_dijkstra(const RegionMask& domain, const std::vector<double>& delta, std::size_t source,
                                double source_leg, long target) {
  const int N = domain.grid.resolution;
  const double h = domain.grid.cell_width();
  std::vector<double> dist(domain.bits.size(), kInf);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[source] = source_leg;
  pq.emplace(source_leg, source);
  static const int dr[8] = {-1, 1, 0, 0, -1, -1, 1, 1};
  static const int dc[8] = {0, 0, -1, 1, -1, 1, -1, 1};
  const double len[8] = {h, h, h, h, h * std::numbers::sqrt2, h * std::numbers::sqrt2, h * std::numbers::sqrt2,
                         h * std::numbers::sqrt2};
  while (!pq.empty()) {
    const auto [d, cur] = pq.top();
    pq.pop();
    if (d > dist[cur]) continue;
    if (target >= 0 && cur == static_cast<std::size_t>(target)) break;
    const int r = static_cast<int>(cur / N);
    const int c = static_cast<int>(cur % N);
    const double inv_cur = 1.0 / delta[cur];
    for (int k = 0; k < 8; ++k) {
      const int rr = r + dr[k];
      const int cc = c + dc[k];
      if (rr < 0 || cc < 0 || rr >= N || cc >= N) continue;
      const std::size_t nb = static_cast<std::size_t>(rr) * N + cc;
      if (!domain.bits[nb]) continue;
      const double nd = d + len[k] * 0.5 * (inv_cur + 1.0 / delta[nb]);
      if (nd < dist[nb]) {
        dist[nb] = nd;
        pq.emplace(nd, nb);
      }
    }
  }
  return dist;
}

}  // namespace

std::vector<double> quasihyperbolic_field(const RegionMask& domain, cplx source) {
  const std::size_t cs = require_cell(domain, source, "source");
  const std::vector<double> delta = boundary_distance(domain);
  const double leg = std::abs(source - domain.grid.cell_center(cs)) / delta[cs];
  return qh_dijkstra(domain, delta, cs, leg, -1);
}

double quasihyperbolic_dist(const RegionMask& domain, cplx z, cplx w) {
  const std::size_t cz = require_cell(domain, z, "point");
  const std::size_t cw = require_cell(domain, w, "point");
  if (z == w) return 0.0;
  const std::vector<double> delta = boundary_distance(domain);
  const double leg_z = std::abs(z - domain.grid.cell_center(cz)) / delta[cz];
  const double leg_w = std::abs(w - domain.grid.cell_center(cw)) / delta[cw];
  if (cz == cw) return std::abs(z - w) / delta[cz];
  const std::vector<double> dist = qh_dijkstra(domain, delta, cz, leg_z, static_cast<long>(cw));
  return dist[cw] + leg_w;
}

DistBounds hyperbolic_dist_bounds(const RegionMask& domain, cplx z, cplx w) {
  const double q = quasihyperbolic_dist(domain, z, w);
  return {0.5 * q, 2.0 * q};
}

double disc_hyperbolic_dist(cplx z, cplx w) {
  const double t = std::abs(z - w) / std::abs(1.0 - std::conj(w) * z);
  return 2.0 * std::atanh(t);
}

double round_annulus_hyperbolic_dist(double r, double R, cplx z, cplx w) {
  if (!(r > 0.0) || !(R > r)) throw InputError("round annulus needs 0 < r < R");
  const double W = std::log(R / r);
  // log-coordinates to the strip {0 < Re s < pi}, then e^{is} to the upper half plane
  auto to_half_plane = [&](double logmod, double arg) {
    const double theta = std::numbers::pi * (logmod - std::log(r)) / W;
    const double y = std::numbers::pi * arg / W;
    return std::exp(-y) * cplx{std::cos(theta), std::sin(theta)};
  };
  const double lz = std::log(std::abs(z));
  const double lw = std::log(std::abs(w));
  const double az = std::arg(z);
  double best = kInf;
  const cplx a = to_half_plane(lz, 0.0);
  for (int k = -2; k <= 2; ++k) {
    double darg = std::arg(w) - az + 2.0 * std::numbers::pi * k;
    const cplx b = to_half_plane(lw, darg);
    const double arg = 1.0 + std::norm(a - b) / (2.0 * a.imag() * b.imag());
    best = std::min(best, std::acosh(arg));
  }
  return best;
}

AnnulusPotential annulus_potential(const RegionMask& mask) {
  if (mask.contains_infinity) throw InputError("annulus_potential: the annulus must not contain infinity");
  const ComplementComponents cc = complement_components(mask);
  if (cc.count() != 2) {
    std::ostringstream os;
    os << "mask is not doubly connected: its complement has " << cc.count() << " components";
    throw InputError(os.str());
  }
  const GridSpec& g = mask.grid;
  const int N = g.resolution;
  const int outer = cc.outer;
  const int inner = outer == 0 ? 1 : 0;

  AnnulusPotential out;
  out.inner_component = inner;
  out.outer_component = outer;
  out.field.assign(mask.bits.size(), 0.0);
  for (std::size_t i = 0; i < mask.bits.size(); ++i) {
    if (!mask.bits[i]) {
      out.field[i] = cc.cells.labels[i] == outer ? 1.0 : 0.0;
      if (cc.cells.labels[i] == inner) out.inner_point = g.cell_center(i);
    }
  }

  // unknowns and their 4-neighbour structure
  std::vector<long> index(mask.bits.size(), -1);
  std::vector<std::size_t> cells;
  for (std::size_t i = 0; i < mask.bits.size(); ++i) {
    if (mask.bits[i]) {
      index[i] = static_cast<long>(cells.size());
      cells.push_back(i);
    }
  }
  const std::size_t n = cells.size();
  std::vector<std::array<long, 4>> nbr(n);
  std::vector<double> b(n, 0.0);
  static const int dr[4] = {-1, 1, 0, 0};
  static const int dc[4] = {0, 0, -1, 1};
  for (std::size_t u = 0; u < n; ++u) {
    const int r = static_cast<int>(cells[u] / N);
    const int c = static_cast<int>(cells[u] % N);
    for (int k = 0; k < 4; ++k) {
      const int rr = r + dr[k];
      const int cc2 = c + dc[k];
      if (rr < 0 || cc2 < 0 || rr >= N || cc2 >= N) {
        nbr[u][k] = -1;
        b[u] += 1.0;  // outside the chart belongs to the outer complement
        continue;
      }
      const std::size_t j = static_cast<std::size_t>(rr) * N + cc2;
      nbr[u][k] = index[j];
      if (index[j] < 0) b[u] += out.field[j];
    }
  }
  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t u = 0; u < n; ++u) {
      double s = 4.0 * x[u];
      for (int k = 0; k < 4; ++k) {
        if (nbr[u][k] >= 0) s -= x[nbr[u][k]];
      }
      y[u] = s;
    }
  };
  // conjugate gradients from the harmonic-mean initial guess of 1/2
  std::vector<double> x(n, 0.5), rres(n), p(n), ap(n);
  apply(x, ap);
  double bnorm = 0.0;
  for (std::size_t u = 0; u < n; ++u) {
    rres[u] = b[u] - ap[u];
    bnorm += b[u] * b[u];
  }
  bnorm = std::sqrt(bnorm);
  p = rres;
  double rr = 0.0;
  for (double v : rres) rr += v * v;
  const double tol = 1e-8 * std::max(bnorm, 1e-300);
  int it = 0;
  const int max_it = static_cast<int>(20 * std::sqrt(static_cast<double>(n))) + 1000;
  while (std::sqrt(rr) > tol && it < max_it) {
    apply(p, ap);
    double pap = 0.0;
    for (std::size_t u = 0; u < n; ++u) pap += p[u] * ap[u];
    const double alpha = rr / pap;
    double rr_new = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      x[u] += alpha * p[u];
      rres[u] -= alpha * ap[u];
      rr_new += rres[u] * rres[u];
    }
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t u = 0; u < n; ++u) p[u] = rres[u] + beta * p[u];
    ++it;
  }
  if (std::sqrt(rr) > tol) throw ResolutionError("annulus potential: conjugate gradients did not converge");
  out.iterations = it;
  for (std::size_t u = 0; u < n; ++u) out.field[cells[u]] = x[u];

  // Dirichlet energy over every edge that touches an unknown
  double energy = 0.0;
  for (std::size_t u = 0; u < n; ++u) {
    const int r = static_cast<int>(cells[u] / N);
    const int c = static_cast<int>(cells[u] % N);
    for (int k = 0; k < 4; ++k) {
      const int r2 = r + dr[k];
      const int c2 = c + dc[k];
      double v;
      if (r2 < 0 || c2 < 0 || r2 >= N || c2 >= N) {
        v = 1.0;
      } else {
        const std::size_t j = static_cast<std::size_t>(r2) * N + c2;
        // count edges between two unknowns once
        if (index[j] >= 0 && static_cast<std::size_t>(index[j]) < u) continue;
        v = out.field[j];
      }
      const double diff = x[u] - v;
      energy += diff * diff;
    }
  }
  out.energy = energy;
  return out;
}

double annulus_modulus(const RegionMask& mask) { return 1.0 / annulus_potential(mask).energy; }

bool separates(const Curve& curve, cplx inner_point, const GridSpec& grid) {
  if (!curve.closed || curve.points.size() < 3) return false;
  const cplx far = grid.center + cplx{4.0 * grid.half_width, 3.0 * grid.half_width};
  return winding_number(curve, inner_point) != 0 && winding_number(curve, far) == 0;
}

namespace {

Curve equator_from(const RegionMask& mask, const AnnulusPotential& pot) {
  std::vector<Curve> curves = marching_squares(pot.field, mask.grid, 0.5, 1.0);
  if (curves.size() != 1 || !curves.front().closed) {
    std::ostringstream os;
    os << "equator level set splits into " << curves.size()
       << " pieces at this resolution; try doubling the resolution";
    throw ResolutionError(os.str());
  }
  Curve eq = std::move(curves.front());
  eq.basepoint_index = 0;
  if (!separates(eq, pot.inner_point, mask.grid))
    throw ResolutionError("equator does not separate the complementary components; try doubling the resolution");
  return eq;
}

}  // namespace

Curve equator(const RegionMask& mask) { return equator_from(mask, annulus_potential(mask)); }

AnnulusData annulus_data(const RegionMask& mask) {
  const AnnulusPotential pot = annulus_potential(mask);
  AnnulusData out;
  out.mask = mask;
  out.modulus = 1.0 / pot.energy;
  out.equator = equator_from(mask, pot);
  out.inner_component = pot.inner_component;
  out.outer_component = pot.outer_component;
  out.inner_point = pot.inner_point;
  out.mask.basepoint = out.equator.points.front();
  return out;
}

CaratheodoryLimit caratheodory_limit(const std::vector<RegionMask>& domains) {
  if (domains.empty()) throw InputError("caratheodory_limit needs at least one domain");
  const GridSpec& g = domains.front().grid;
  for (const auto& d : domains) {
    if (!(d.grid == g)) throw InputError("caratheodory_limit needs masks on one shared grid");
  }
  const std::size_t count = domains.size();
  const double h = g.cell_width();
  const int N = g.resolution;

  // base points of the last quarter must agree to two cells
  const std::size_t quarter = std::max<std::size_t>(1, count / 4);
  for (std::size_t i = count - quarter; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) {
      if (spherical_dist(domains[i].basepoint, domains[j].basepoint) > 2.0 * h)
        throw InputError("caratheodory_limit: base points diverge");
    }
  }

  CaratheodoryLimit out;
  // Hausdorff steps between consecutive complements over the trailing half
  auto complement_bits = [](const RegionMask& m) {
    std::vector<std::uint8_t> c(m.bits.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = m.bits[i] ? 0 : 1;
    return c;
  };
  auto directed = [&](const std::vector<std::uint8_t>& a, const std::vector<double>& sq_b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i]) worst = std::max(worst, sq_b[i]);
    }
    return std::sqrt(worst);
  };
  std::vector<std::uint8_t> prev;
  std::vector<double> prev_sq;
  for (std::size_t i = count / 2; i < count; ++i) {
    std::vector<std::uint8_t> cur = complement_bits(domains[i]);
    std::vector<double> cur_sq = squared_distance_transform(cur, N);
    if (!prev.empty()) {
      const double step = std::max(directed(prev, cur_sq), directed(cur, prev_sq));
      out.oscillation_cells = std::max(out.oscillation_cells, step);
    }
    prev = std::move(cur);
    prev_sq = std::move(cur_sq);
  }
  if (out.oscillation_cells > 2.0) {
    std::ostringstream os;
    os << "not convergent at this resolution (complements oscillate by " << out.oscillation_cells << " cells)";
    throw ResolutionError(os.str());
  }

  const RegionMask& last = domains.back();
  out.point = last.basepoint;
  auto cell = g.cell_of(last.basepoint);
  if (!cell) {
    out.degenerate = true;
    out.domain = RegionMask(g, false);
    return out;
  }
  RegionMask with_base = last;
  with_base.bits[*cell] = 1;
  out.domain = component_containing(with_base, *cell);
  out.domain.basepoint = last.basepoint;
  const auto eroded = erode(out.domain.bits, N, 1);
  out.degenerate = std::none_of(eroded.begin(), eroded.end(), [](std::uint8_t v) { return v != 0; });
  if (!out.degenerate && last.contains_infinity) {
    for (std::size_t i : boundary_cells(out.domain)) {
      const int r = static_cast<int>(i / N), c = static_cast<int>(i % N);
      if (r == 0 || c == 0 || r == N - 1 || c == N - 1) {
        out.domain.contains_infinity = true;
        break;
      }
    }
  }
  return out;
}

double caratheodory_bound_disc(const RegionMask& domain) {
  const GridSpec& g = domain.grid;
  const int N = g.resolution;
  const double h = g.cell_width();
  if (!domain.contains(domain.basepoint)) throw InputError("caratheodory_bound_disc: base point is not in the domain");
  // points of the boundary: midpoints of edges between domain and complement
  std::vector<cplx> edge;
  const bool complement_outside = !domain.contains_infinity;
  for (int r = 0; r < N; ++r) {
    for (int c = 0; c < N; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * N + c;
      if (!domain.bits[i]) continue;
      const cplx z = g.cell_center(r, c);
      const int dr[4] = {-1, 1, 0, 0};
      const int dc[4] = {0, 0, -1, 1};
      for (int k = 0; k < 4; ++k) {
        const int rr = r + dr[k], cc = c + dc[k];
        const bool outside_chart = rr < 0 || cc < 0 || rr >= N || cc >= N;
        const bool in_complement = outside_chart ? complement_outside : !domain.bits[static_cast<std::size_t>(rr) * N + cc];
        // a step of one row moves the centre down by h
        if (in_complement) edge.push_back(z + 0.5 * h * cplx{static_cast<double>(dc[k]), -static_cast<double>(dr[k])});
      }
    }
  }
  if (edge.empty()) {
    if (domain.contains_infinity && domain.count() == g.cell_count())
      throw InputError("caratheodory_bound_disc: the complement is empty (domain is the whole sphere)");
    throw InputError("caratheodory_bound_disc: domain has no boundary on this chart");
  }
  double delta = kInf;
  for (const cplx& p : edge) delta = std::min(delta, spherical_dist(domain.basepoint, p));

  double diam = -1.0;
  for (const cplx& p : edge) {
    const cplx anti = p == cplx{0.0, 0.0} ? kInfinity : -1.0 / std::conj(p);
    if (!domain.contains(anti)) {
      diam = std::numbers::pi / 2.0;
      break;
    }
  }
  if (diam < 0.0) {
    std::vector<cplx> pts = edge;
    if (complement_outside) pts.push_back(kInfinity);
    diam = spherical_diameter(pts);
  }
  return std::abs(std::log(delta * diam));
}

double lipschitz_profile(const Polynomial& p, const RegionMask& domain, double radius, int samples,
                         std::uint64_t seed) {
  if (!(radius > 0.0)) throw InputError("lipschitz_profile needs a positive radius");
  const std::vector<double> q = quasihyperbolic_field(domain, domain.basepoint);
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (2.0 * q[i] <= radius) pool.push_back(i);
  }
  double best = spherical_derivative(p, domain.basepoint);
  if (pool.empty() && samples > 0) throw InputError("lipschitz_profile: no sample points within the radius");
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    const auto k = static_cast<std::size_t>((rng() >> 11) * 0x1.0p-53 * static_cast<double>(pool.size()));
    best = std::max(best, spherical_derivative(p, domain.grid.cell_center(pool[std::min(k, pool.size() - 1)])));
  }
  return best;
}

AnnulusCalibration calibrate_round_annulus(double modulus, int resolution) {
  if (!(modulus > 0.0)) throw InputError("calibrate_round_annulus needs a positive modulus");
  const double r = 1.0;
  const double R = std::exp(2.0 * std::numbers::pi * modulus);
  GridSpec g{0.0, 1.02 * R, resolution};
  g.validate();
  RegionMask ann = annulus_mask(g, 0.0, r, R);
  const double mid = std::sqrt(r * R);
  if (r < 4.0 * g.cell_width() || mid * std::numbers::pi / 16.0 < 4.0 * g.cell_width())
    throw ResolutionError("round annulus of modulus " + std::to_string(modulus) + " not resolved at resolution " +
                          std::to_string(resolution));
  // start at a cell centre on the middle circle so the start leg vanishes
  const cplx z0 = g.cell_center(*g.cell_of(cplx{mid, 0.0}));
  const std::vector<double> q = quasihyperbolic_field(ann, z0);
  AnnulusCalibration out;
  out.modulus = modulus;
  out.lower_constant = kInf;
  out.upper_ratio = 0.0;
  for (int k = 1; k <= 16; ++k) {
    const double ang = std::numbers::pi * k / 16.0;
    const cplx target = std::polar(std::abs(z0), ang);
    const std::size_t cw = *g.cell_of(target);
    const cplx w = g.cell_center(cw);
    const double exact = round_annulus_hyperbolic_dist(r, R, z0, w);
    const double qh = q[cw];
    out.lower_constant = std::min(out.lower_constant, exact / qh);
    out.upper_ratio = std::max(out.upper_ratio, exact / qh);
  }
  out.upper_holds = out.upper_ratio <= 2.0;
  return out;
}

}  // namespace itj
