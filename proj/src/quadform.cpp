#include "sphere/quadform.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sphere/errors.hpp"

namespace sphere {

QuadraticSpace::QuadraticSpace(int n) : n_(n) {
  if (n < 1) throw ContractError("sphere dimension n must be >= 1, got " + std::to_string(n));
}

std::size_t AmbientVector::size() const {
  return std::visit([](const auto& v) { return v.size(); }, coords_);
}

const RealVector& AmbientVector::real() const {
  if (is_exact()) throw ContractError("requested floating coordinates of an exact vector");
  return std::get<RealVector>(coords_);
}

const IntVector& AmbientVector::exact() const {
  if (!is_exact()) throw ContractError("requested exact coordinates of a floating vector");
  return std::get<IntVector>(coords_);
}

AmbientVector AmbientVector::to_real() const {
  if (!is_exact()) return *this;
  const auto& v = std::get<IntVector>(coords_);
  RealVector out(v.size());
  std::transform(v.begin(), v.end(), out.begin(),
                 [](const BigInt& x) { return x.convert_to<double>(); });
  return AmbientVector(std::move(out));
}

RealVector basis_vector(const QuadraticSpace& space, std::size_t i) {
  if (i >= space.ambient_dim()) throw ContractError("basis index out of range");
  RealVector v(space.ambient_dim(), 0.0);
  v[i] = 1.0;
  return v;
}

RealVector e_plus(const QuadraticSpace& space) {
  RealVector v(space.ambient_dim(), 0.0);
  v.front() = 1.0;
  v.back() = 1.0;
  return v;
}

RealVector e_minus(const QuadraticSpace& space) {
  RealVector v(space.ambient_dim(), 0.0);
  v.front() = -1.0;
  v.back() = 1.0;
  return v;
}

ConeVector::ConeVector(std::vector<std::int64_t> p, std::int64_t q) : p_(std::move(p)), q_(q) {
  if (p_.empty()) throw ContractError("cone vector needs at least one spatial coordinate");
  BigInt sum = 0;
  for (auto x : p_) sum += BigInt(x) * x;
  if (sum != BigInt(q_) * q_) throw ContractError("(p, q) is not on the lightcone");
}

bool ConeVector::is_primitive() const {
  std::int64_t g = q_ < 0 ? -q_ : q_;
  for (auto x : p_) g = std::gcd(g, x < 0 ? -x : x);
  return g == 1;
}

IntVector ConeVector::lift() const {
  IntVector v;
  v.reserve(p_.size() + 1);
  for (auto x : p_) v.emplace_back(x);
  v.emplace_back(q_);
  return v;
}

SpherePoint::SpherePoint(std::vector<double> alpha) : alpha_(std::move(alpha)) {
  if (alpha_.size() < 2) throw ContractError("sphere point needs n + 1 >= 2 coordinates");
  if (std::abs(euclid_norm(alpha_) - 1.0) > kUnitTolerance)
    throw ContractError("sphere point is not a unit vector");
}

SpherePoint SpherePoint::normalized(std::vector<double> v) {
  const double r = euclid_norm(v);
  if (!(r > 0.0) || !std::isfinite(r)) throw ContractError("cannot normalise a zero vector");
  for (auto& x : v) x /= r;
  return SpherePoint(std::move(v));
}

SpherePoint SpherePoint::reflected() const {
  auto a = alpha_;
  a[0] = -a[0];
  return SpherePoint(std::move(a));
}

ConeVector reflected(const ConeVector& w) {
  auto p = w.p();
  p[0] = -p[0];
  return ConeVector(std::move(p), w.q());
}

namespace {

void check_dim(const QuadraticSpace& space, std::size_t size) {
  if (size != space.ambient_dim())
    throw ContractError("vector has length " + std::to_string(size) + ", expected " +
                        std::to_string(space.ambient_dim()));
}

}  // namespace

double eval_form(const QuadraticSpace& space, const RealVector& v) {
  check_dim(space, v.size());
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) s += v[i] * v[i];
  return s - v.back() * v.back();
}

BigInt eval_form(const QuadraticSpace& space, const IntVector& v) {
  check_dim(space, v.size());
  BigInt s = 0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) s += v[i] * v[i];
  return s - v.back() * v.back();
}

double eval_form(const QuadraticSpace& space, const AmbientVector& v) {
  if (v.is_exact()) return eval_form(space, v.exact()).convert_to<double>();
  return eval_form(space, v.real());
}

double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double euclid_norm(std::span<const double> v) {
  // Scaled accumulation avoids overflow for large cone vectors.
  const double m = sup_norm(v);
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (double x : v) s += (x / m) * (x / m);
  return m * std::sqrt(s);
}

NormPair norms(std::span<const double> v) { return {sup_norm(v), euclid_norm(v)}; }

NormPair cone_norms(const QuadraticSpace& space, const AmbientVector& v) {
  if (v.is_exact()) {
    if (eval_form(space, v.exact()) != 0) throw PreconditionError("vector is not on the lightcone");
    const double h = abs(v.exact().back()).convert_to<double>();
    return {h, std::sqrt(2.0) * h};
  }
  const auto& r = v.real();
  const double e = euclid_norm(r);
  if (std::abs(eval_form(space, r)) > kFormTolerance * e * e)
    throw PreconditionError("vector is measurably off the lightcone");
  const double h = std::abs(r.back());
  return {h, std::sqrt(2.0) * h};
}

double squared_distance(std::span<const double> alpha, std::span<const std::int64_t> p,
                        std::int64_t q) {
  const double qd = static_cast<double>(q);
  double s = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const double d = alpha[i] - static_cast<double>(p[i]) / qd;
    s += d * d;
  }
  return s;
}

Embedding embed_and_distance(const SpherePoint& alpha, const ConeVector& w) {
  if (w.q() < 1) throw ContractError("embed_and_distance requires q >= 1");
  if (w.p().size() != alpha.alpha().size()) throw ContractError("dimension mismatch");
  Embedding out;
  out.embedded = alpha.alpha();
  out.embedded.push_back(1.0);
  std::vector<double> diff(alpha.alpha().size());
  const double q = static_cast<double>(w.q());
  for (std::size_t i = 0; i < diff.size(); ++i)
    diff[i] = alpha[i] - static_cast<double>(w.p()[i]) / q;
  out.dist_sup = sup_norm(diff);
  out.dist_e = euclid_norm(diff);
  return out;
}

BigInt gcd_all(std::span<const BigInt> values) {
  BigInt g = 0;
  for (const auto& v : values) g = boost::multiprecision::gcd(g, abs(v));
  return g;
}

}  // namespace sphere
