#include "sphere/group.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sphere/errors.hpp"
#include "sphere/rational_points.hpp"

namespace sphere {

namespace {

Matrix form_matrix(Eigen::Index dim) {
  Matrix J = Matrix::Identity(dim, dim);
  J(dim - 1, dim - 1) = -1.0;
  return J;
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double scaled_tolerance(const Matrix& g) { return kShapeTolerance * std::max(1.0, max_abs(g)); }

Matrix null_change(Eigen::Index dim) {
  Matrix P = Matrix::Identity(dim, dim);
  const double r = std::sqrt(0.5);
  const Eigen::Index l = dim - 1;
  P(0, 0) = r;
  P(0, l) = r;
  P(l, 0) = -r;
  P(l, l) = r;
  return P;
}

bool orthogonal_block(const Matrix& m, double tol) {
  const Eigen::Index k = m.rows();
  if (k == 0) return true;
  return max_abs(m.transpose() * m - Matrix::Identity(k, k)) <= tol && m.determinant() > 0.0;
}

// In the null basis: lower triangular (lower = true) or upper triangular with
// ones on the diagonal and identity middle block.
bool unitriangular_shape(const Matrix& g, bool lower) {
  const Matrix N = to_null_basis(g);
  const double tol = scaled_tolerance(N);
  const Eigen::Index d = N.rows(), l = d - 1;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const bool middle = i > 0 && i < l && j > 0 && j < l;
      double expected;
      if (i == j) expected = 1.0;
      else if (middle) expected = 0.0;
      else if (lower ? j > i : j < i) expected = 0.0;
      else continue;
      if (std::abs(N(i, j) - expected) > tol) return false;
    }
  }
  return true;
}

}  // namespace

const char* subgroup_name(Subgroup tag) {
  switch (tag) {
    case Subgroup::Flow: return "A";
    case Subgroup::Rotation: return "K";
    case Subgroup::Expanding: return "H";
    case Subgroup::Contracting: return "U";
    case Subgroup::General: return "G";
  }
  return "?";
}

double form_defect(const Matrix& g) {
  const Matrix J = form_matrix(g.rows());
  return max_abs(g.transpose() * J * g - J);
}

Matrix to_null_basis(const Matrix& g) {
  const Matrix P = null_change(g.rows());
  return P * g * P.transpose();
}

Matrix from_null_basis(const Matrix& g) {
  const Matrix P = null_change(g.rows());
  return P.transpose() * g * P;
}

bool is_flow_shape(const Matrix& g) {
  const Matrix N = to_null_basis(g);
  const double tol = scaled_tolerance(N);
  const Eigen::Index d = N.rows(), l = d - 1;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      if (i == j && (i == 0 || i == l)) continue;
      if (std::abs(N(i, j) - (i == j ? 1.0 : 0.0)) > tol) return false;
    }
  return N(0, 0) > 0.0 && std::abs(N(0, 0) * N(l, l) - 1.0) <= tol;
}

bool is_rotation_shape(const Matrix& g) {
  const Eigen::Index d = g.rows(), l = d - 1;
  for (Eigen::Index i = 0; i < l; ++i)
    if (std::abs(g(i, l)) > kShapeTolerance || std::abs(g(l, i)) > kShapeTolerance) return false;
  if (std::abs(g(l, l) - 1.0) > kShapeTolerance) return false;
  return orthogonal_block(g.topLeftCorner(l, l), kShapeTolerance);
}

bool is_expanding_shape(const Matrix& g) { return unitriangular_shape(g, true); }

bool is_contracting_shape(const Matrix& g) { return unitriangular_shape(g, false); }

bool is_parabolic_shape(const Matrix& g) {
  const Matrix N = to_null_basis(g);
  const double tol = scaled_tolerance(N);
  const Eigen::Index d = N.rows(), l = d - 1;
  for (Eigen::Index i = 1; i < d; ++i)
    if (std::abs(N(i, 0)) > tol) return false;
  for (Eigen::Index j = 1; j < l; ++j)
    if (std::abs(N(l, j)) > tol) return false;
  if (!(N(0, 0) > 0.0) || std::abs(N(0, 0) * N(l, l) - 1.0) > tol) return false;
  return orthogonal_block(N.block(1, 1, d - 2, d - 2), tol);
}

GroupElement::GroupElement(Matrix m, Subgroup tag) : m_(std::move(m)), tag_(tag) {
  if (m_.rows() != m_.cols() || m_.rows() < 3) throw ContractError("group element must be square, n >= 1");
  const double scale = std::max(1.0, max_abs(m_) * max_abs(m_));
  if (sphere::form_defect(m_) > kShapeTolerance * scale)
    throw ContractError("matrix does not preserve the quadratic form");
  bool ok = true;
  switch (tag_) {
    case Subgroup::Flow: ok = is_flow_shape(m_); break;
    case Subgroup::Rotation: ok = is_rotation_shape(m_); break;
    case Subgroup::Expanding: ok = is_expanding_shape(m_); break;
    case Subgroup::Contracting: ok = is_contracting_shape(m_); break;
    case Subgroup::General: break;
  }
  if (!ok) throw ContractError(std::string("matrix fails the shape test for subgroup ") + subgroup_name(tag_));
}

GroupElement GroupElement::identity(const QuadraticSpace& space) {
  const auto d = static_cast<Eigen::Index>(space.ambient_dim());
  return GroupElement(Matrix::Identity(d, d), Subgroup::General, Unchecked{});
}

GroupElement GroupElement::inverse() const {
  const Matrix J = form_matrix(m_.rows());
  return GroupElement(J * m_.transpose() * J, tag_, Unchecked{});
}

RealVector GroupElement::apply(const RealVector& v) const {
  if (static_cast<Eigen::Index>(v.size()) != m_.cols()) throw ContractError("dimension mismatch");
  const Eigen::VectorXd r = m_ * Eigen::Map<const Eigen::VectorXd>(v.data(), m_.cols());
  return RealVector(r.data(), r.data() + r.size());
}

GroupElement operator*(const GroupElement& a, const GroupElement& b) {
  if (a.m_.rows() != b.m_.rows()) throw ContractError("dimension mismatch");
  const Subgroup tag = a.tag_ == b.tag_ ? a.tag_ : Subgroup::General;
  return GroupElement(a.m_ * b.m_, tag, GroupElement::Unchecked{});
}

GroupElement flow_matrix(const QuadraticSpace& space, double t) {
  if (!(std::abs(t) <= kFlowTimeLimit)) throw DomainError("flow time outside [-50, 50]");
  const auto d = static_cast<Eigen::Index>(space.ambient_dim());
  Matrix g = Matrix::Identity(d, d);
  g(0, 0) = g(d - 1, d - 1) = std::cosh(t);
  g(0, d - 1) = g(d - 1, 0) = -std::sinh(t);
  return GroupElement(std::move(g), Subgroup::Flow);
}

Matrix algebra_matrix(const HorosphericalParam& param) {
  const auto n = static_cast<Eigen::Index>(param.x.size());
  if (n < 1) throw ContractError("horospherical parameter needs n >= 1");
  const Eigen::Index d = n + 2, l = d - 1;
  const double sign = param.algebra == HorosphericalParam::Algebra::Expanding ? 1.0 : -1.0;
  Matrix M = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = param.x[static_cast<std::size_t>(i)];
    M(0, i + 1) = -sign * x;
    M(i + 1, 0) = sign * x;
    M(i + 1, l) = x;
    M(l, i + 1) = x;
  }
  return M;
}

GroupElement exp_horospherical(const HorosphericalParam& param) {
  const Matrix M = algebra_matrix(param);
  const Matrix M2 = M * M;
  const double m = max_abs(M);
  const double eps = std::numeric_limits<double>::epsilon();
  if (max_abs(M2 * M) > 64.0 * eps * static_cast<double>(M.rows() * M.rows()) * m * m * m + 1e-300)
    throw std::logic_error("horospherical generator is not nilpotent of order 3");
  const auto tag = param.algebra == HorosphericalParam::Algebra::Expanding ? Subgroup::Expanding
                                                                          : Subgroup::Contracting;
  return GroupElement(Matrix::Identity(M.rows(), M.cols()) + M + 0.5 * M2, tag);
}

GroupElement rotation_to_pole(const SpherePoint& alpha) {
  if (!(alpha[0] > -1.0 + 1e-9)) throw DomainError("rotation_to_pole needs alpha_1 > -1");
  const auto k = static_cast<Eigen::Index>(alpha.alpha().size());
  Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(alpha.alpha().data(), k);
  w(0) += 1.0;
  const Matrix I = Matrix::Identity(k, k);
  const Matrix Sw = I - (2.0 / w.squaredNorm()) * w * w.transpose();
  Matrix Su = I;
  Su(0, 0) = -1.0;
  Matrix g = Matrix::Identity(k + 1, k + 1);
  g.topLeftCorner(k, k) = Su * Sw;
  return GroupElement(std::move(g), Subgroup::Rotation);
}

IwasawaFactors iwasawa_decompose(const GroupElement& h) {
  if (!is_expanding_shape(h.matrix()) || form_defect(h.matrix()) > kShapeTolerance)
    throw ContractError("iwasawa_decompose expects an element of H");
  const QuadraticSpace space(h.n());
  const Eigen::Index d = h.matrix().rows(), l = d - 1, n = d - 2;

  // h^{-1} e_1 = e^s (alpha, 1).
  const Matrix hinv = h.inverse().matrix();
  const Eigen::VectorXd v = hinv.col(0) + hinv.col(l);
  const double s = std::log(v(l));
  std::vector<double> a(static_cast<std::size_t>(l));
  for (Eigen::Index i = 0; i < l; ++i) a[static_cast<std::size_t>(i)] = v(i);
  const GroupElement k0 = rotation_to_pole(SpherePoint::normalized(std::move(a)));

  const Matrix B = h.matrix() * k0.inverse().matrix() * flow_matrix(space, -s).matrix();
  const Matrix mid = B.block(1, 1, n, n);
  if (max_abs(mid.transpose() * mid - Matrix::Identity(n, n)) > 1e-6)
    throw DecompositionError("neutral block is not orthogonal");
  Eigen::JacobiSVD<Matrix> svd(mid, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix polar = svd.matrixU() * svd.matrixV().transpose();
  if (!(polar.determinant() > 0.0)) throw DecompositionError("neutral block is not a rotation");

  Matrix m = Matrix::Identity(d, d);
  m.block(1, 1, n, n) = polar;
  GroupElement k(m * k0.matrix(), Subgroup::Rotation);
  const Matrix u = h.matrix() * k.inverse().matrix() * flow_matrix(space, -s).matrix();
  if (!is_contracting_shape(u)) throw DecompositionError("recovered factor is not in U");
  return IwasawaFactors{GroupElement(u, Subgroup::Contracting), s, std::move(k)};
}

SectionPair section_maps(const SpherePoint& alpha) {
  if (!alpha.hemisphere()) throw DomainError("section_maps needs alpha in the chart W");
  RealVector x = sphere_to_stereo(alpha);
  RealVector minus_x = x;
  for (auto& c : minus_x) c = -c;
  GroupElement h = exp_horospherical({minus_x, HorosphericalParam::Algebra::Expanding});
  auto f = iwasawa_decompose(h);
  return SectionPair{std::move(h), std::move(f.k), f.s, std::move(x)};
}

}  // namespace sphere
