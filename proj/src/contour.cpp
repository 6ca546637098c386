#include "itjulia/contour.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "itjulia/error.hpp"

namespace itj {

double Curve::length() const {
  double total = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) total += std::abs(points[i] - points[i - 1]);
  if (closed && points.size() > 1) total += std::abs(points.front() - points.back());
  return total;
}

double Curve::max_step() const {
  double worst = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) worst = std::max(worst, std::abs(points[i] - points[i - 1]));
  if (closed && points.size() > 1) worst = std::max(worst, std::abs(points.front() - points.back()));
  return worst;
}

namespace {

enum Side { Top = 0, Right = 1, Bottom = 2, Left = 3 };

}  // namespace

std::vector<Curve> marching_squares(const std::vector<double>& field, const GridSpec& grid, double level,
                                    double outside) {
  const int N = grid.resolution;
  if (field.size() != grid.cell_count()) throw InputError("marching_squares: field size does not match grid");
  const int P = N + 2;
  auto value = [&](int I, int J) -> double {
    const int r = I - 1, c = J - 1;
    if (r < 0 || c < 0 || r >= N || c >= N) return outside;
    return field[static_cast<std::size_t>(r) * N + c];
  };
  auto node = [&](int I, int J) { return grid.cell_center(I - 1, J - 1); };
  const std::size_t PP = static_cast<std::size_t>(P) * P;
  auto h_edge = [&](int I, int J) { return static_cast<std::size_t>(I) * P + J; };
  auto v_edge = [&](int I, int J) { return PP + static_cast<std::size_t>(I) * P + J; };

  std::vector<std::array<std::size_t, 2>> segs;
  std::vector<cplx> edge_point(2 * PP);
  auto crossing = [&](int I0, int J0, int I1, int J1) {
    const double a = value(I0, J0), b = value(I1, J1);
    double t = (level - a) / (b - a);
    t = std::clamp(t, 0.0, 1.0);
    return node(I0, J0) + t * (node(I1, J1) - node(I0, J0));
  };

  for (int I = 0; I + 1 < P; ++I) {
    for (int J = 0; J + 1 < P; ++J) {
      const double a = value(I, J), b = value(I, J + 1), c = value(I + 1, J + 1), d = value(I + 1, J);
      const int code = (a >= level ? 1 : 0) | (b >= level ? 2 : 0) | (c >= level ? 4 : 0) | (d >= level ? 8 : 0);
      if (code == 0 || code == 15) continue;
      const std::size_t e[4] = {h_edge(I, J), v_edge(I, J + 1), h_edge(I + 1, J), v_edge(I, J)};
      auto touch = [&](int side) {
        switch (side) {
          case Top: edge_point[e[Top]] = crossing(I, J, I, J + 1); break;
          case Right: edge_point[e[Right]] = crossing(I, J + 1, I + 1, J + 1); break;
          case Bottom: edge_point[e[Bottom]] = crossing(I + 1, J, I + 1, J + 1); break;
          default: edge_point[e[Left]] = crossing(I, J, I + 1, J); break;
        }
      };
      auto add = [&](int s0, int s1) {
        touch(s0);
        touch(s1);
        segs.push_back({e[s0], e[s1]});
      };
      if (code == 5 || code == 10) {
        const bool centre_up = 0.25 * (a + b + c + d) >= level;
        const bool around_bd = (code == 5) == centre_up;
        if (around_bd) {
          add(Top, Right);
          add(Bottom, Left);
        } else {
          add(Left, Top);
          add(Right, Bottom);
        }
        continue;
      }
      int crossed[2], k = 0;
      if ((a >= level) != (b >= level)) crossed[k++] = Top;
      if ((b >= level) != (c >= level)) crossed[k++] = Right;
      if ((d >= level) != (c >= level)) crossed[k++] = Bottom;
      if ((a >= level) != (d >= level)) crossed[k++] = Left;
      add(crossed[0], crossed[1]);
    }
  }

  // link segments through their shared edges
  std::vector<std::array<long, 2>> at_edge(2 * PP, {-1, -1});
  for (std::size_t s = 0; s < segs.size(); ++s) {
    for (std::size_t e : segs[s]) {
      auto& slot = at_edge[e];
      if (slot[0] < 0) {
        slot[0] = static_cast<long>(s);
      } else {
        slot[1] = static_cast<long>(s);
      }
    }
  }
  std::vector<char> used(segs.size(), 0);
  std::vector<Curve> curves;
  for (std::size_t start = 0; start < segs.size(); ++start) {
    if (used[start]) continue;
    Curve cur;
    const std::size_t first_edge = segs[start][0];
    std::size_t edge = segs[start][1];
    std::size_t seg = start;
    used[seg] = 1;
    cur.points.push_back(edge_point[first_edge]);
    bool closed = false;
    while (true) {
      if (edge == first_edge) {
        closed = true;
        break;
      }
      cur.points.push_back(edge_point[edge]);
      const auto& slot = at_edge[edge];
      const long nxt = slot[0] == static_cast<long>(seg) ? slot[1] : slot[0];
      if (nxt < 0 || used[nxt]) break;
      seg = static_cast<std::size_t>(nxt);
      used[seg] = 1;
      edge = segs[seg][0] == edge ? segs[seg][1] : segs[seg][0];
    }
    cur.closed = closed;
    curves.push_back(std::move(cur));
  }
  return curves;
}

int winding_number(const Curve& curve, cplx z) {
  const auto& p = curve.points;
  if (p.size() < 2) return 0;
  int wn = 0;
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) {
    const cplx a = p[i];
    const cplx b = p[(i + 1) % n];
    const double cross = (b.real() - a.real()) * (z.imag() - a.imag()) - (z.real() - a.real()) * (b.imag() - a.imag());
    if (a.imag() <= z.imag()) {
      if (b.imag() > z.imag() && cross > 0) ++wn;
    } else {
      if (b.imag() <= z.imag() && cross < 0) --wn;
    }
  }
  return wn;
}

bool point_in_polygon(const Curve& curve, cplx z) { return winding_number(curve, z) != 0; }

RegionMask enclosed_region(const Curve& curve, const GridSpec& grid) {
  RegionMask out(grid, false);
  const auto& p = curve.points;
  const int N = grid.resolution;
  if (p.size() < 3) return out;
  std::vector<double> xs;
  for (int r = 0; r < N; ++r) {
    const double y = grid.cell_center(r, 0).imag();
    xs.clear();
    for (std::size_t i = 0; i < p.size(); ++i) {
      const cplx a = p[i];
      const cplx b = p[(i + 1) % p.size()];
      if ((a.imag() <= y && b.imag() > y) || (b.imag() <= y && a.imag() > y)) {
        const double t = (y - a.imag()) / (b.imag() - a.imag());
        xs.push_back(a.real() + t * (b.real() - a.real()));
      }
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
      const double c0 = grid.to_cell_coords(cplx{xs[k], y}).second;
      const double c1 = grid.to_cell_coords(cplx{xs[k + 1], y}).second;
      const int lo = std::max(0, static_cast<int>(std::ceil(c0)));
      const int hi = std::min(N - 1, static_cast<int>(std::floor(c1)));
      for (int c = lo; c <= hi; ++c) out.bits[static_cast<std::size_t>(r) * N + c] = 1;
    }
  }
  return out;
}

}  // namespace itj
