#pragma once

// Ambient linear algebra for Q(x) = x_1^2 + ... + x_{n+1}^2 - x_{n+2}^2 on
// R^{n+2}, its lightcone L and the integer cone points L ∩ Z^{n+2}.

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace sphere {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr double kFormTolerance = 1e-9;
inline constexpr double kUnitTolerance = 1e-12;
// Chart W = {alpha : alpha_1 > -kChartThreshold}.
inline constexpr double kChartThreshold = 0.05;

class QuadraticSpace {
 public:
  explicit QuadraticSpace(int n);

  int n() const { return n_; }
  // n + 2
  std::size_t ambient_dim() const { return static_cast<std::size_t>(n_) + 2; }
  // n + 1
  std::size_t sphere_dim() const { return static_cast<std::size_t>(n_) + 1; }

  // Diagonal entry of J = diag(1, ..., 1, -1).
  double sign(std::size_t i) const { return i + 1 == ambient_dim() ? -1.0 : 1.0; }

 private:
  int n_;
};

using RealVector = std::vector<double>;
using IntVector = std::vector<BigInt>;

// A vector in R^{n+2}, either floating or exact. Never converted implicitly.
class AmbientVector {
 public:
  explicit AmbientVector(RealVector v) : coords_(std::move(v)) {}
  explicit AmbientVector(IntVector v) : coords_(std::move(v)) {}

  bool is_exact() const { return std::holds_alternative<IntVector>(coords_); }
  std::size_t size() const;

  const RealVector& real() const;
  const IntVector& exact() const;

  // Exact -> floating (may round). Floating vectors are returned unchanged.
  AmbientVector to_real() const;

 private:
  std::variant<RealVector, IntVector> coords_;
};

// Named constants of R^{n+2}.
RealVector basis_vector(const QuadraticSpace& space, std::size_t i);  // u_{i+1}
RealVector e_plus(const QuadraticSpace& space);                       // e_1 = u_1 + u_{n+2}
RealVector e_minus(const QuadraticSpace& space);                      // e_- = -u_1 + u_{n+2}

// Integer point (p, q) of the lightcone: |p|^2 = q^2.
class ConeVector {
 public:
  // Throws ContractError if |p|^2 != q^2 (checked in exact arithmetic).
  ConeVector(std::vector<std::int64_t> p, std::int64_t q);

  const std::vector<std::int64_t>& p() const { return p_; }
  std::int64_t q() const { return q_; }
  int n() const { return static_cast<int>(p_.size()) - 1; }

  bool is_primitive() const;
  IntVector lift() const;  // (p_1, ..., p_{n+1}, q)
  AmbientVector ambient() const { return AmbientVector(lift()); }

  friend bool operator==(const ConeVector&, const ConeVector&) = default;
  friend auto operator<=>(const ConeVector& a, const ConeVector& b) {
    if (auto c = a.q_ <=> b.q_; c != 0) return c;
    return a.p_ <=> b.p_;
  }

 private:
  std::vector<std::int64_t> p_;
  std::int64_t q_;
};

// A unit vector alpha in R^{n+1}.
class SpherePoint {
 public:
  // Requires | |alpha|_e - 1 | <= 1e-12.
  explicit SpherePoint(std::vector<double> alpha);
  // Normalises an arbitrary nonzero vector.
  static SpherePoint normalized(std::vector<double> v);

  const std::vector<double>& alpha() const { return alpha_; }
  int n() const { return static_cast<int>(alpha_.size()) - 1; }
  double operator[](std::size_t i) const { return alpha_[i]; }

  // alpha_1 > -eps0: the point lies in the working chart W.
  bool hemisphere(double eps0 = kChartThreshold) const { return alpha_[0] > -eps0; }
  // First-coordinate reflection alpha_1 -> -alpha_1.
  SpherePoint reflected() const;

 private:
  std::vector<double> alpha_;
};

ConeVector reflected(const ConeVector& w);

// Q(v). Exact for the integer variant.
double eval_form(const QuadraticSpace& space, const RealVector& v);
BigInt eval_form(const QuadraticSpace& space, const IntVector& v);
double eval_form(const QuadraticSpace& space, const AmbientVector& v);

struct NormPair {
  double sup = 0.0;
  double euclid = 0.0;
};

double sup_norm(std::span<const double> v);
double euclid_norm(std::span<const double> v);
NormPair norms(std::span<const double> v);

// Fast path on L: (|v_{n+2}|, sqrt(2) |v_{n+2}|). Throws PreconditionError when
// |Q(v)| > 1e-9 |v|_e^2 (floating) or Q(v) != 0 (exact).
NormPair cone_norms(const QuadraticSpace& space, const AmbientVector& v);

struct Embedding {
  RealVector embedded;  // (alpha, 1)
  double dist_sup = 0.0;
  double dist_e = 0.0;
};

// (alpha, 1) and the distances |alpha - p/q| in sup and Euclidean norm.
Embedding embed_and_distance(const SpherePoint& alpha, const ConeVector& w);

// |alpha - p/q|_e^2 computed from the coordinate differences; stays accurate
// when p/q is very close to alpha.
double squared_distance(std::span<const double> alpha, std::span<const std::int64_t> p,
                        std::int64_t q);

BigInt gcd_all(std::span<const BigInt> values);

}  // namespace sphere
