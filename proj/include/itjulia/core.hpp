#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace itj {

using cplx = std::complex<double>;

/// The point at infinity of the Riemann sphere. Any complex value with an
/// infinite component is treated as this point.
inline const cplx kInfinity{std::numeric_limits<double>::infinity(), 0.0};

inline bool is_infinite(cplx z) { return std::isinf(z.real()) || std::isinf(z.imag()); }

/// A complex polynomial a_0 + a_1 z + ... + a_d z^d with a_d != 0.
/// Trailing zero coefficients are trimmed on construction; the zero
/// polynomial is represented by the single coefficient 0.
class Polynomial {
 public:
  Polynomial() : coeffs_{cplx{0.0, 0.0}} {}
  explicit Polynomial(std::vector<cplx> ascending);

  static Polynomial monomial(int degree, cplx leading = 1.0);
  /// a z^2 + b z + c
  static Polynomial quadratic(cplx a, cplx b, cplx c);
  /// (z - center)^2
  static Polynomial shifted_square(cplx center);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<cplx>& coeffs() const { return coeffs_; }
  cplx leading() const { return coeffs_.back(); }

  cplx operator()(cplx z) const;
  cplx derivative_at(cplx z) const;
  /// Value and first derivative in one Horner pass.
  std::pair<cplx, cplx> eval_with_derivative(cplx z) const;
  Polynomial derivative() const;
  /// The polynomial p - w (used for preimage computations).
  Polynomial minus_constant(cplx w) const;

  std::string to_string() const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::vector<cplx> coeffs_;
};

/// Horner evaluation; equivalent to p(z).
cplx eval_poly(const Polynomial& p, cplx z);
cplx eval_poly_derivative(const Polynomial& p, cplx z);

/// Bounds (d, K, M) of a bounded sequence: degrees in [2, d], leading
/// coefficient modulus in [1/K, K], lower coefficient moduli <= M.
struct Bounds {
  int d = 2;
  double K = 1.0;
  double M = 0.0;

  void validate() const;
  /// Whether p satisfies the coefficient and degree bounds.
  bool admits(const Polynomial& p) const;

  friend bool operator==(const Bounds&, const Bounds&) = default;
};

/// R = max(1, K (d M + 2)). Every polynomial within the bounds satisfies
/// |P(z)| >= 2 |z| whenever |z| >= R.
double escape_radius(const Bounds& b);

enum class SequenceKind { PeriodicTail, Counterexample, CounterexampleLimit };

/// An infinite polynomial sequence P_1, P_2, ... given by a finite rule.
///
/// PeriodicTail: P_m = prefix[m-1] for m <= |prefix|, afterwards the tail
/// repeats periodically. Counterexample(n): P_m = (z-3)^2 when
/// m = (j+1)(j+2)/2 - 1 for some 1 <= j <= n, z^2 otherwise.
/// CounterexampleLimit: the same rule for every j >= 1.
class SequenceSpec {
 public:
  static SequenceSpec periodic(std::vector<Polynomial> prefix, std::vector<Polynomial> tail,
                               Bounds bounds);
  static SequenceSpec constant(const Polynomial& p, Bounds bounds);
  static SequenceSpec counterexample(int n);
  static SequenceSpec counterexample_limit();

  SequenceKind kind() const { return kind_; }
  const std::vector<Polynomial>& prefix() const { return prefix_; }
  const std::vector<Polynomial>& tail() const { return tail_; }
  const Bounds& bounds() const { return bounds_; }
  /// Number of (z-3)^2 cycles for Counterexample; 0 otherwise.
  int cycles() const { return cycles_; }

  /// P_m for m >= 1.
  const Polynomial& term(long m) const;
  /// P_{first}, ..., P_{last} (inclusive); empty when last < first.
  std::vector<Polynomial> terms(long first, long last) const;

  /// Checks every distinct term against the bounds; throws InputError.
  void validate() const;

 private:
  SequenceKind kind_ = SequenceKind::PeriodicTail;
  std::vector<Polynomial> prefix_;
  std::vector<Polynomial> tail_;
  Bounds bounds_;
  int cycles_ = 0;
};

/// Times m = (j+1)(j+2)/2 - 1 at which the counterexample uses (z-3)^2.
long cycle_time(int j);
/// The j >= 1 with cycle_time(j) == m, or 0 when m is not such a time.
int cycle_index(long m);

/// Q_{m,n}(z) together with an overflow flag.
struct OrbitValue {
  cplx value;
  bool escaped = false;
};

/// Q_{m,n}(z) = P_n o ... o P_{m+1}(z). Overflow is reported through
/// `escaped`, never as a fault.
OrbitValue compose_eval(const SequenceSpec& seq, long m, long n, cplx z);
/// D_{m,n} = prod_{i=m+1}^{n} deg P_i.
std::uint64_t composition_degree(const SequenceSpec& seq, long m, long n);

/// All roots of p (with multiplicity), polished by Newton's method and sorted
/// lexicographically. Throws RootFindError if the residual stays large.
std::vector<cplx> polynomial_roots(const Polynomial& p);
/// Solutions of p(z) = w.
std::vector<cplx> preimages(const Polynomial& p, cplx w);
/// Roots of p' (degree >= 2 required).
std::vector<cplx> critical_points(const Polynomial& p);

/// Spherical distance for the density |dz|/(1+|z|^2); the sphere has
/// diameter pi/2. Either argument may be kInfinity.
double spherical_dist(cplx z, cplx w);
/// |p'(z)| / (1 + |p(z)|^2).
double spherical_derivative(const Polynomial& p, cplx z);

/// Seeded bounded sequence: degree uniform in [2, d], leading modulus
/// log-uniform in [1/K, K], lower coefficients uniform in the disc of radius
/// lower_scale * M. The first `length` terms form the prefix and one more
/// random term forms the tail.
SequenceSpec random_bounded_sequence(const Bounds& bounds, int length, std::uint64_t seed,
                                     double lower_scale = 1.0);

}  // namespace itj
