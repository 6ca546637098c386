#include "itjulia/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "itjulia/error.hpp"

namespace itj {

void GridSpec::validate() const {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) throw InputError("grid half_width must be > 0");
  if (resolution < 2) throw InputError("grid resolution must be >= 2");
  if ((resolution & (resolution - 1)) != 0) throw InputError("grid resolution must be a power of two");
}

cplx GridSpec::cell_center(int row, int col) const {
  const double h = cell_width();
  return {center.real() - half_width + (col + 0.5) * h, center.imag() + half_width - (row + 0.5) * h};
}

cplx GridSpec::cell_center(std::size_t index) const {
  return cell_center(static_cast<int>(index / resolution), static_cast<int>(index % resolution));
}

std::pair<double, double> GridSpec::to_cell_coords(cplx z) const {
  const double h = cell_width();
  const double col = (z.real() - (center.real() - half_width)) / h - 0.5;
  const double row = ((center.imag() + half_width) - z.imag()) / h - 0.5;
  return {row, col};
}

std::optional<std::size_t> GridSpec::cell_of(cplx z) const {
  if (is_infinite(z) || !std::isfinite(z.real()) || !std::isfinite(z.imag())) return std::nullopt;
  const double h = cell_width();
  const double fc = std::floor((z.real() - (center.real() - half_width)) / h);
  const double fr = std::floor(((center.imag() + half_width) - z.imag()) / h);
  if (fc < 0 || fr < 0 || fc >= resolution || fr >= resolution) return std::nullopt;
  return static_cast<std::size_t>(fr) * resolution + static_cast<std::size_t>(fc);
}

bool GridSpec::contains_disc(cplx c, double radius) const {
  return c.real() - radius >= center.real() - half_width && c.real() + radius <= center.real() + half_width &&
         c.imag() - radius >= center.imag() - half_width && c.imag() + radius <= center.imag() + half_width;
}

GridSpec chart_for_radius(double radius, int resolution) {
  GridSpec g{cplx{0.0, 0.0}, radius + 1.0, resolution};
  g.validate();
  return g;
}

void require_escape_disc(const GridSpec& grid, double escape_r) {
  const double need = std::max(std::abs(grid.center.real()), std::abs(grid.center.imag())) + escape_r + 1.0;
  if (!grid.contains_disc(0.0, escape_r + 1.0)) {
    std::ostringstream os;
    os << "grid does not cover the escape disc of radius " << escape_r + 1.0
       << "; required half_width >= " << need;
    throw GridTooSmall(os.str(), need);
  }
}

RegionMask::RegionMask(const GridSpec& g, bool infinity)
    : grid(g), bits(g.cell_count(), 0), contains_infinity(infinity) {}

bool RegionMask::test(int row, int col) const {
  if (row < 0 || col < 0 || row >= grid.resolution || col >= grid.resolution) return contains_infinity;
  return bits[static_cast<std::size_t>(row) * grid.resolution + col] != 0;
}

bool RegionMask::contains(cplx z) const {
  auto c = grid.cell_of(z);
  if (!c) return contains_infinity;
  return bits[*c] != 0;
}

std::size_t RegionMask::count() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

double RegionMask::area() const {
  const double h = grid.cell_width();
  return static_cast<double>(count()) * h * h;
}

RegionMask RegionMask::complement() const {
  RegionMask c(grid, !contains_infinity);
  for (std::size_t i = 0; i < bits.size(); ++i) c.bits[i] = bits[i] ? 0 : 1;
  c.basepoint = basepoint;
  return c;
}

RegionMask disc_mask(const GridSpec& grid, cplx center, double radius) {
  RegionMask m = mask_from(grid, [&](cplx z) { return std::abs(z - center) < radius; });
  m.basepoint = center;
  return m;
}

RegionMask annulus_mask(const GridSpec& grid, cplx center, double r, double R) {
  RegionMask m = mask_from(grid, [&](cplx z) {
    const double a = std::abs(z - center);
    return a > r && a < R;
  });
  m.basepoint = center + std::sqrt(r * R);
  return m;
}

Labeling label_cells(const std::vector<std::uint8_t>& bits, int resolution, bool want, int connectivity) {
  const int n = resolution;
  Labeling out;
  out.labels.assign(bits.size(), -1);
  std::vector<std::size_t> stack;
  static const int d4[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
  static const int d8[8][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}, {-1, -1}, {-1, 1}, {1, -1}, {1, 1}};
  const int (*dirs)[2] = connectivity == 8 ? d8 : d4;
  const int ndirs = connectivity == 8 ? 8 : 4;
  const std::uint8_t target = want ? 1 : 0;
  for (std::size_t seed = 0; seed < bits.size(); ++seed) {
    if ((bits[seed] != 0) != (target != 0) || out.labels[seed] >= 0) continue;
    const int id = out.count++;
    std::size_t size = 0;
    out.labels[seed] = id;
    stack.push_back(seed);
    while (!stack.empty()) {
      const std::size_t cur = stack.back();
      stack.pop_back();
      ++size;
      const int r = static_cast<int>(cur / n);
      const int c = static_cast<int>(cur % n);
      for (int k = 0; k < ndirs; ++k) {
        const int rr = r + dirs[k][0];
        const int cc = c + dirs[k][1];
        if (rr < 0 || cc < 0 || rr >= n || cc >= n) continue;
        const std::size_t nb = static_cast<std::size_t>(rr) * n + cc;
        if ((bits[nb] != 0) != (target != 0) || out.labels[nb] >= 0) continue;
        out.labels[nb] = id;
        stack.push_back(nb);
      }
    }
    out.sizes.push_back(size);
  }
  return out;
}

ComplementComponents complement_components(const RegionMask& mask) {
  const int n = mask.grid.resolution;
  ComplementComponents cc;
  cc.cells = label_cells(mask.bits, n, false, 4);
  if (mask.contains_infinity) return cc;
  std::vector<char> touches(static_cast<std::size_t>(cc.cells.count), 0);
  for (int k = 0; k < n; ++k) {
    for (std::size_t idx : {static_cast<std::size_t>(k), static_cast<std::size_t>(n - 1) * n + k,
                            static_cast<std::size_t>(k) * n, static_cast<std::size_t>(k) * n + n - 1}) {
      const int l = cc.cells.labels[idx];
      if (l >= 0) touches[l] = 1;
    }
  }
  // merge every border-touching label into one outer component
  std::vector<int> remap(static_cast<std::size_t>(cc.cells.count), -1);
  int next = 0;
  int outer = -1;
  std::vector<std::size_t> sizes;
  for (int l = 0; l < cc.cells.count; ++l) {
    if (touches[l]) {
      if (outer < 0) {
        outer = next++;
        sizes.push_back(0);
      }
      remap[l] = outer;
      sizes[outer] += cc.cells.sizes[l];
    } else {
      remap[l] = next++;
      sizes.push_back(cc.cells.sizes[l]);
    }
  }
  for (int& l : cc.cells.labels) {
    if (l >= 0) l = remap[l];
  }
  cc.cells.count = next;
  cc.cells.sizes = std::move(sizes);
  if (outer >= 0) {
    cc.outer = outer;
  } else {
    cc.outer = next;
    cc.outer_is_virtual = true;
  }
  return cc;
}

std::vector<std::size_t> boundary_cells(const RegionMask& mask) {
  const int n = mask.grid.resolution;
  std::vector<std::size_t> out;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * n + c;
      if (!mask.bits[i]) continue;
      if (!mask.test(r - 1, c) || !mask.test(r + 1, c) || !mask.test(r, c - 1) || !mask.test(r, c + 1))
        out.push_back(i);
    }
  }
  return out;
}

namespace {

// One-dimensional lower envelope of parabolas (Felzenszwalb and Huttenlocher).
void edt_1d(const double* f, int n, double* d, std::vector<int>& v, std::vector<double>& z) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] == inf) continue;
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -inf;
      z[1] = inf;
      continue;
    }
    double s;
    while (true) {
      const int p = v[k];
      s = ((f[q] + static_cast<double>(q) * q) - (f[p] + static_cast<double>(p) * p)) / (2.0 * (q - p));
      if (s <= z[k]) {
        --k;
        if (k < 0) break;
      } else {
        break;
      }
    }
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -inf;
      z[1] = inf;
    } else {
      ++k;
      v[k] = q;
      z[k] = s;
      z[k + 1] = inf;
    }
  }
  if (k < 0) {
    for (int q = 0; q < n; ++q) d[q] = inf;
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    const double t = q - v[j];
    d[q] = t * t + f[v[j]];
  }
}

}  // namespace

std::vector<double> squared_distance_transform(const std::vector<std::uint8_t>& feature, int resolution) {
  const int n = resolution;
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> grid(feature.size());
  for (std::size_t i = 0; i < feature.size(); ++i) grid[i] = feature[i] ? 0.0 : inf;
  std::vector<double> f(n), d(n), zs(n + 1);
  std::vector<int> v(n);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) f[r] = grid[static_cast<std::size_t>(r) * n + c];
    edt_1d(f.data(), n, d.data(), v, zs);
    for (int r = 0; r < n; ++r) grid[static_cast<std::size_t>(r) * n + c] = d[r];
  }
  for (int r = 0; r < n; ++r) {
    double* row = grid.data() + static_cast<std::size_t>(r) * n;
    std::copy(row, row + n, f.begin());
    edt_1d(f.data(), n, row, v, zs);
  }
  return grid;
}

std::vector<int> chessboard_distance(const std::vector<std::uint8_t>& feature, int resolution) {
  const int n = resolution;
  const int big = std::numeric_limits<int>::max() / 2;
  std::vector<int> d(feature.size());
  for (std::size_t i = 0; i < feature.size(); ++i) d[i] = feature[i] ? 0 : big;
  auto at = [&](int r, int c) -> int& { return d[static_cast<std::size_t>(r) * n + c]; };
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      int v = at(r, c);
      if (r > 0) {
        v = std::min(v, at(r - 1, c) + 1);
        if (c > 0) v = std::min(v, at(r - 1, c - 1) + 1);
        if (c + 1 < n) v = std::min(v, at(r - 1, c + 1) + 1);
      }
      if (c > 0) v = std::min(v, at(r, c - 1) + 1);
      at(r, c) = v;
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    for (int c = n - 1; c >= 0; --c) {
      int v = at(r, c);
      if (r + 1 < n) {
        v = std::min(v, at(r + 1, c) + 1);
        if (c > 0) v = std::min(v, at(r + 1, c - 1) + 1);
        if (c + 1 < n) v = std::min(v, at(r + 1, c + 1) + 1);
      }
      if (c + 1 < n) v = std::min(v, at(r, c + 1) + 1);
      at(r, c) = v;
    }
  }
  return d;
}

std::vector<double> boundary_distance(const RegionMask& mask) {
  const int n = mask.grid.resolution;
  std::vector<std::uint8_t> feature(mask.bits.size());
  for (std::size_t i = 0; i < feature.size(); ++i) feature[i] = mask.bits[i] ? 0 : 1;
  std::vector<double> sq = squared_distance_transform(feature, n);
  const double h = mask.grid.cell_width();
  std::vector<double> out(sq.size(), 0.0);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * n + c;
      if (!mask.bits[i]) continue;
      double dist = std::sqrt(sq[i]);
      if (!mask.contains_infinity) {
        const int edge = std::min({r + 1, c + 1, n - r, n - c});
        dist = std::min(dist, static_cast<double>(edge));
      }
      out[i] = (dist - 0.5) * h;
    }
  }
  return out;
}

std::vector<std::uint8_t> dilate(const std::vector<std::uint8_t>& bits, int resolution, int radius) {
  if (radius <= 0) return bits;
  std::vector<int> d = chessboard_distance(bits, resolution);
  std::vector<std::uint8_t> out(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) out[i] = d[i] <= radius ? 1 : 0;
  return out;
}

std::vector<std::uint8_t> erode(const std::vector<std::uint8_t>& bits, int resolution, int radius) {
  if (radius <= 0) return bits;
  const int n = resolution;
  std::vector<std::uint8_t> inv(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) inv[i] = bits[i] ? 0 : 1;
  std::vector<int> d = chessboard_distance(inv, n);
  std::vector<std::uint8_t> out(bits.size(), 0);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * n + c;
      const int edge = std::min({r + 1, c + 1, n - r, n - c});
      out[i] = (bits[i] && d[i] > radius && edge > radius) ? 1 : 0;
    }
  }
  return out;
}

RegionMask component_containing(const RegionMask& mask, std::size_t cell) {
  RegionMask out(mask.grid, false);
  out.basepoint = mask.basepoint;
  if (cell >= mask.bits.size() || !mask.bits[cell]) return out;
  const int n = mask.grid.resolution;
  std::vector<std::size_t> stack{cell};
  out.bits[cell] = 1;
  while (!stack.empty()) {
    const std::size_t cur = stack.back();
    stack.pop_back();
    const int r = static_cast<int>(cur / n);
    const int c = static_cast<int>(cur % n);
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        const int rr = r + dr;
        const int cc = c + dc;
        if (rr < 0 || cc < 0 || rr >= n || cc >= n) continue;
        const std::size_t nb = static_cast<std::size_t>(rr) * n + cc;
        if (!mask.bits[nb] || out.bits[nb]) continue;
        out.bits[nb] = 1;
        stack.push_back(nb);
      }
    }
  }
  return out;
}

RegionMask fill_holes(const RegionMask& mask) {
  const int n = mask.grid.resolution;
  Labeling lab = label_cells(mask.bits, n, false, 4);
  std::vector<char> outer(static_cast<std::size_t>(lab.count), 0);
  for (int k = 0; k < n; ++k) {
    for (std::size_t idx : {static_cast<std::size_t>(k), static_cast<std::size_t>(n - 1) * n + k,
                            static_cast<std::size_t>(k) * n, static_cast<std::size_t>(k) * n + n - 1}) {
      if (lab.labels[idx] >= 0) outer[lab.labels[idx]] = 1;
    }
  }
  RegionMask out = mask;
  for (std::size_t i = 0; i < out.bits.size(); ++i) {
    if (!out.bits[i] && !outer[lab.labels[i]]) out.bits[i] = 1;
  }
  return out;
}

}  // namespace itj
