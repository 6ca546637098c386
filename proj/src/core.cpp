#include "itjulia/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "itjulia/error.hpp"

namespace itj {

Polynomial::Polynomial(std::vector<cplx> ascending) : coeffs_(std::move(ascending)) {
  for (const cplx& c : coeffs_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw InputError("polynomial coefficient is not finite");
  }
  while (coeffs_.size() > 1 && coeffs_.back() == cplx{0.0, 0.0}) coeffs_.pop_back();
  if (coeffs_.empty()) coeffs_.push_back(0.0);
}

Polynomial Polynomial::monomial(int degree, cplx leading) {
  if (degree < 0) throw InputError("negative degree");
  std::vector<cplx> c(static_cast<size_t>(degree) + 1, 0.0);
  c.back() = leading;
  return Polynomial(std::move(c));
}

Polynomial Polynomial::quadratic(cplx a, cplx b, cplx c) { return Polynomial({c, b, a}); }

Polynomial Polynomial::shifted_square(cplx center) {
  return Polynomial({center * center, -2.0 * center, 1.0});
}

cplx Polynomial::operator()(cplx z) const {
  cplx acc = coeffs_.back();
  for (size_t k = coeffs_.size() - 1; k-- > 0;) acc = acc * z + coeffs_[k];
  return acc;
}

std::pair<cplx, cplx> Polynomial::eval_with_derivative(cplx z) const {
  cplx val = coeffs_.back();
  cplx der = 0.0;
  for (size_t k = coeffs_.size() - 1; k-- > 0;) {
    der = der * z + val;
    val = val * z + coeffs_[k];
  }
  return {val, der};
}

cplx Polynomial::derivative_at(cplx z) const { return eval_with_derivative(z).second; }

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() == 1) return Polynomial();
  std::vector<cplx> d(coeffs_.size() - 1);
  for (size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * static_cast<double>(k);
  return Polynomial(std::move(d));
}

Polynomial Polynomial::minus_constant(cplx w) const {
  std::vector<cplx> c = coeffs_;
  c[0] -= w;
  return Polynomial(std::move(c));
}

std::string Polynomial::to_string() const {
  std::ostringstream os;
  os.precision(6);
  bool first = true;
  for (size_t k = coeffs_.size(); k-- > 0;) {
    const cplx c = coeffs_[k];
    if (c == cplx{0.0, 0.0} && coeffs_.size() > 1) continue;
    if (!first) os << " + ";
    first = false;
    os << '(' << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
    if (k >= 1) os << "z";
    if (k >= 2) os << '^' << k;
  }
  return os.str();
}

cplx eval_poly(const Polynomial& p, cplx z) { return p(z); }
cplx eval_poly_derivative(const Polynomial& p, cplx z) { return p.derivative_at(z); }

void Bounds::validate() const {
  if (d < 2) throw InputError("bounds: d must be >= 2");
  if (!(K >= 1.0) || !std::isfinite(K)) throw InputError("bounds: K must be >= 1");
  if (!(M >= 0.0) || !std::isfinite(M)) throw InputError("bounds: M must be >= 0");
}

bool Bounds::admits(const Polynomial& p) const {
  const int deg = p.degree();
  if (deg < 2 || deg > d) return false;
  const double lead = std::abs(p.leading());
  // small slack so that coefficients read back from JSON still qualify
  constexpr double tol = 1e-12;
  if (lead < 1.0 / K - tol || lead > K + tol) return false;
  for (int k = 0; k < deg; ++k) {
    if (std::abs(p.coeffs()[k]) > M + tol) return false;
  }
  return true;
}

double escape_radius(const Bounds& b) {
  b.validate();
  return std::max(1.0, b.K * (b.d * b.M + 2.0));
}

long cycle_time(int j) { return static_cast<long>(j + 1) * (j + 2) / 2 - 1; }

int cycle_index(long m) {
  if (m < 2) return 0;
  // (j+1)(j+2) = 2(m+1)
  const double disc = 1.0 + 8.0 * static_cast<double>(m + 1);
  int j = static_cast<int>(std::lround((std::sqrt(disc) - 3.0) / 2.0));
  for (int cand = std::max(1, j - 1); cand <= j + 1; ++cand) {
    if (cycle_time(cand) == m) return cand;
  }
  return 0;
}

namespace {

const Polynomial& square_map() {
  static const Polynomial p = Polynomial::monomial(2);
  return p;
}

const Polynomial& shifted_square_map() {
  static const Polynomial p = Polynomial::shifted_square(3.0);
  return p;
}

}  // namespace

SequenceSpec SequenceSpec::periodic(std::vector<Polynomial> prefix, std::vector<Polynomial> tail,
                                    Bounds bounds) {
  if (tail.empty()) throw InputError("sequence tail must be nonempty");
  SequenceSpec s;
  s.kind_ = SequenceKind::PeriodicTail;
  s.prefix_ = std::move(prefix);
  s.tail_ = std::move(tail);
  s.bounds_ = bounds;
  s.validate();
  return s;
}

SequenceSpec SequenceSpec::constant(const Polynomial& p, Bounds bounds) {
  return periodic({}, {p}, bounds);
}

SequenceSpec SequenceSpec::counterexample(int n) {
  if (n < 1) throw InputError("counterexample needs n >= 1");
  SequenceSpec s;
  s.kind_ = SequenceKind::Counterexample;
  s.cycles_ = n;
  s.bounds_ = Bounds{2, 1.0, 9.0};
  return s;
}

SequenceSpec SequenceSpec::counterexample_limit() {
  SequenceSpec s;
  s.kind_ = SequenceKind::CounterexampleLimit;
  s.bounds_ = Bounds{2, 1.0, 9.0};
  return s;
}

const Polynomial& SequenceSpec::term(long m) const {
  if (m < 1) throw InputError("sequence terms are indexed from 1");
  switch (kind_) {
    case SequenceKind::PeriodicTail: {
      if (m <= static_cast<long>(prefix_.size())) return prefix_[static_cast<size_t>(m - 1)];
      const long k = (m - 1 - static_cast<long>(prefix_.size())) % static_cast<long>(tail_.size());
      return tail_[static_cast<size_t>(k)];
    }
    case SequenceKind::Counterexample: {
      const int j = cycle_index(m);
      return (j >= 1 && j <= cycles_) ? shifted_square_map() : square_map();
    }
    case SequenceKind::CounterexampleLimit:
      return cycle_index(m) >= 1 ? shifted_square_map() : square_map();
  }
  return square_map();
}

std::vector<Polynomial> SequenceSpec::terms(long first, long last) const {
  std::vector<Polynomial> out;
  for (long m = first; m <= last; ++m) out.push_back(term(m));
  return out;
}

void SequenceSpec::validate() const {
  bounds_.validate();
  auto check = [&](const Polynomial& p, const char* where, size_t idx) {
    if (!bounds_.admits(p)) {
      std::ostringstream os;
      os << where << "[" << idx << "] = " << p.to_string() << " violates bounds (d=" << bounds_.d
         << ", K=" << bounds_.K << ", M=" << bounds_.M << ")";
      throw InputError(os.str());
    }
  };
  for (size_t i = 0; i < prefix_.size(); ++i) check(prefix_[i], "prefix", i);
  for (size_t i = 0; i < tail_.size(); ++i) check(tail_[i], "tail", i);
}

OrbitValue compose_eval(const SequenceSpec& seq, long m, long n, cplx z) {
  if (m < 0 || n < m) throw InputError("compose_eval needs 0 <= m <= n");
  if (is_infinite(z)) return {kInfinity, true};
  for (long i = m + 1; i <= n; ++i) {
    z = seq.term(i)(z);
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return {kInfinity, true};
  }
  return {z, false};
}

std::uint64_t composition_degree(const SequenceSpec& seq, long m, long n) {
  if (m < 0 || n < m) throw InputError("composition_degree needs 0 <= m <= n");
  std::uint64_t deg = 1;
  for (long i = m + 1; i <= n; ++i) deg *= static_cast<std::uint64_t>(seq.term(i).degree());
  return deg;
}

namespace {

// Aberth–Ehrlich simultaneous iteration on a monic-normalized polynomial.
std::vector<cplx> aberth(const Polynomial& p) {
  const int n = p.degree();
  const auto& a = p.coeffs();
  // Cauchy bound for the initial circle
  double radius = 0.0;
  for (int k = 0; k < n; ++k) radius = std::max(radius, std::abs(a[k] / a[n]));
  radius = 1.0 + radius;
  std::vector<cplx> z(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double ang = 2.0 * std::numbers::pi * k / n + 0.4;
    z[k] = std::polar(radius * 0.5, ang);
  }
  for (int iter = 0; iter < 500; ++iter) {
    double worst = 0.0;
    for (int k = 0; k < n; ++k) {
      auto [v, dv] = p.eval_with_derivative(z[k]);
      if (v == cplx{0.0, 0.0}) continue;
      const cplx ratio = v / dv;
      cplx sum = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j != k) sum += 1.0 / (z[k] - z[j]);
      }
      const cplx step = ratio / (1.0 - ratio * sum);
      if (std::isfinite(step.real()) && std::isfinite(step.imag())) {
        z[k] -= step;
        worst = std::max(worst, std::abs(step) / std::max(1.0, std::abs(z[k])));
      }
    }
    if (worst < 1e-15) break;
  }
  return z;
}

void sort_lex(std::vector<cplx>& roots) {
  std::sort(roots.begin(), roots.end(), [](cplx x, cplx y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
}

}  // namespace

std::vector<cplx> polynomial_roots(const Polynomial& p) {
  const int n = p.degree();
  if (n < 1) throw RootFindError("constant polynomial " + p.to_string() + " has no roots");
  const auto& a = p.coeffs();
  std::vector<cplx> roots;
  if (n == 1) {
    roots.push_back(-a[0] / a[1]);
  } else if (n == 2) {
    const cplx disc = std::sqrt(a[1] * a[1] - 4.0 * a[2] * a[0]);
    // cancellation-free quadratic formula
    const cplx q = -0.5 * (a[1] + (std::real(std::conj(a[1]) * disc) >= 0 ? disc : -disc));
    if (q == cplx{0.0, 0.0}) {
      roots = {0.0, 0.0};
    } else {
      roots = {q / a[2], a[0] / q};
    }
  } else {
    roots = aberth(p);
    for (cplx& r : roots) {
      for (int it = 0; it < 8; ++it) {
        auto [v, dv] = p.eval_with_derivative(r);
        if (dv == cplx{0.0, 0.0}) break;
        const cplx step = v / dv;
        if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
        r -= step;
        if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(r))) break;
      }
    }
    double scale = 0.0;
    for (const cplx& c : a) scale = std::max(scale, std::abs(c));
    for (const cplx& r : roots) {
      const double mag = std::max(1.0, std::abs(r));
      const double resid = std::abs(p(r)) / (scale * std::pow(mag, n));
      if (!(resid <= 1e-8)) {
        throw RootFindError("root finder did not converge for " + p.to_string());
      }
    }
  }
  sort_lex(roots);
  return roots;
}

std::vector<cplx> preimages(const Polynomial& p, cplx w) { return polynomial_roots(p.minus_constant(w)); }

std::vector<cplx> critical_points(const Polynomial& p) {
  if (p.degree() < 2) throw InputError("critical_points needs degree >= 2");
  return polynomial_roots(p.derivative());
}

namespace {

struct SpherePoint {
  double x, y, z;
};

SpherePoint to_sphere(cplx w) {
  if (is_infinite(w)) return {0.0, 0.0, 1.0};
  const double r2 = std::norm(w);
  const double s = 1.0 + r2;
  return {2.0 * w.real() / s, 2.0 * w.imag() / s, (r2 - 1.0) / s};
}

}  // namespace

double spherical_dist(cplx z, cplx w) {
  const bool zi = is_infinite(z);
  const bool wi = is_infinite(w);
  if (zi && wi) return 0.0;
  double chord;
  if (zi || wi) {
    const cplx f = zi ? w : z;
    chord = 1.0 / std::sqrt(1.0 + std::norm(f));
  } else {
    chord = std::abs(z - w) / std::sqrt((1.0 + std::norm(z)) * (1.0 + std::norm(w)));
  }
  if (chord < 0.5) return std::asin(chord);
  // near-antipodal pairs: the arcsine loses accuracy close to 1
  const SpherePoint a = to_sphere(z);
  const SpherePoint b = to_sphere(w);
  const double cx = a.y * b.z - a.z * b.y;
  const double cy = a.z * b.x - a.x * b.z;
  const double cz = a.x * b.y - a.y * b.x;
  const double cross = std::sqrt(cx * cx + cy * cy + cz * cz);
  const double dot = a.x * b.x + a.y * b.y + a.z * b.z;
  return 0.5 * std::atan2(cross, dot);
}

double spherical_derivative(const Polynomial& p, cplx z) {
  auto [v, dv] = p.eval_with_derivative(z);
  const double denom = 1.0 + std::norm(v);
  if (!std::isfinite(denom)) return 0.0;
  return std::abs(dv) / denom;
}

namespace {

// 53-bit uniform double in [0, 1); fixed so results do not depend on the
// standard library's distribution implementation.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Polynomial random_term(const Bounds& b, std::mt19937_64& rng, double lower_scale) {
  const int deg = 2 + static_cast<int>(uniform01(rng) * (b.d - 1));
  const double log_k = std::log(b.K);
  const double lead_mod = std::exp(-log_k + 2.0 * log_k * uniform01(rng));
  const double lead_arg = 2.0 * std::numbers::pi * uniform01(rng);
  std::vector<cplx> c(static_cast<size_t>(deg) + 1);
  const double radius = std::clamp(lower_scale, 0.0, 1.0) * b.M;
  for (int k = 0; k < deg; ++k) {
    const double r = radius * std::sqrt(uniform01(rng));
    const double t = 2.0 * std::numbers::pi * uniform01(rng);
    c[k] = std::polar(r, t);
  }
  c[deg] = std::polar(std::clamp(lead_mod, 1.0 / b.K, b.K), lead_arg);
  return Polynomial(std::move(c));
}

}  // namespace

SequenceSpec random_bounded_sequence(const Bounds& bounds, int length, std::uint64_t seed,
                                     double lower_scale) {
  bounds.validate();
  if (length < 0) throw InputError("random sequence length must be >= 0");
  std::mt19937_64 rng(seed);
  std::vector<Polynomial> prefix;
  for (int i = 0; i < length; ++i) prefix.push_back(random_term(bounds, rng, lower_scale));
  std::vector<Polynomial> tail{random_term(bounds, rng, lower_scale)};
  return SequenceSpec::periodic(std::move(prefix), std::move(tail), bounds);
}

}  // namespace itj
