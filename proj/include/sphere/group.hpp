#pragma once

// Elements of the group preserving Q, the flow g_t, horospherical
// exponentials and the sections h_alpha, r_alpha.
//
// Null basis: coordinates (y+, x_2, ..., x_{n+1}, y-) with
// y+- = (x_{n+2} +- x_1) / sqrt(2). There g_t = diag(e^{-t}, I, e^t), U is
// upper unitriangular with identity middle block, H is lower unitriangular
// with identity middle block, and U H^0 is block upper triangular with
// diagonal (lambda, m, 1/lambda), m orthogonal.

#include <Eigen/Dense>

#include "sphere/quadform.hpp"

namespace sphere {

using Matrix = Eigen::MatrixXd;

enum class Subgroup { Flow, Rotation, Expanding, Contracting, General };

const char* subgroup_name(Subgroup tag);

inline constexpr double kShapeTolerance = 1e-9;
inline constexpr double kFlowTimeLimit = 50.0;

// max |g^T J g - J|.
double form_defect(const Matrix& g);

// Shape predicates (tolerance 1e-9 on entries, relative to the largest entry
// for the flow).
bool is_flow_shape(const Matrix& g);
// Last row and column (0, ..., 0, 1), upper-left block in SO(n+1).
bool is_rotation_shape(const Matrix& g);
// Null-basis lower unitriangular, identity middle block.
bool is_expanding_shape(const Matrix& g);
// Null-basis upper unitriangular, identity middle block.
bool is_contracting_shape(const Matrix& g);
// Null-basis block upper triangular with diagonal (lambda, m, 1/lambda).
bool is_parabolic_shape(const Matrix& g);

// P g P^T with P the orthogonal change to the null basis.
Matrix to_null_basis(const Matrix& g);
Matrix from_null_basis(const Matrix& g);

class GroupElement {
 public:
  // Checks form preservation (1e-9, relative to max|g|^2 when that exceeds 1)
  // and the shape predicate of the tag. Throws ContractError otherwise.
  GroupElement(Matrix m, Subgroup tag);

  static GroupElement identity(const QuadraticSpace& space);

  const Matrix& matrix() const { return m_; }
  Subgroup tag() const { return tag_; }
  int n() const { return static_cast<int>(m_.rows()) - 2; }

  // J g^T J.
  GroupElement inverse() const;
  RealVector apply(const RealVector& v) const;
  double form_defect() const { return sphere::form_defect(m_); }

  // Products keep the tag when both factors share it, otherwise General.
  friend GroupElement operator*(const GroupElement& a, const GroupElement& b);

 private:
  struct Unchecked {};
  GroupElement(Matrix m, Subgroup tag, Unchecked) : m_(std::move(m)), tag_(tag) {}

  Matrix m_;
  Subgroup tag_;
};

// g_t. Throws DomainError for |t| > 50.
GroupElement flow_matrix(const QuadraticSpace& space, double t);

struct HorosphericalParam {
  enum class Algebra { Expanding, Contracting };
  RealVector x;
  Algebra algebra = Algebra::Expanding;
};

// M_x = [[0, -x^T, 0], [x, 0, x], [0, x^T, 0]] (expanding) or
// N_x = [[0, x^T, 0], [-x, 0, x], [0, x^T, 0]] (contracting).
Matrix algebra_matrix(const HorosphericalParam& param);

// I + M + M^2/2, asserting M^3 = 0 numerically.
GroupElement exp_horospherical(const HorosphericalParam& param);

// The rotation in K taking (alpha, 1) to e_1, built as the reflection in
// (alpha + u_1)^perp followed by the reflection in u_1^perp. Requires
// alpha_1 > -1 + 1e-9.
GroupElement rotation_to_pole(const SpherePoint& alpha);

struct IwasawaFactors {
  GroupElement u;  // Contracting
  double s;
  GroupElement k;  // Rotation
};

// h = u g_s k for h in H. Throws ContractError if h fails the H shape test and
// DecompositionError if the neutral block is not orthogonal to 1e-6.
IwasawaFactors iwasawa_decompose(const GroupElement& h);

struct SectionPair {
  GroupElement h_alpha;  // exp(M_x)^{-1}, h_alpha^{-1} e_1 = v_x
  GroupElement r_alpha;  // sigma(h_alpha), r_alpha (alpha, 1) = e_1
  double s;              // ln(1 + |x|^2)
  RealVector x;          // stereographic coordinate of alpha
};

// Requires alpha in the chart W; throws DomainError otherwise.
SectionPair section_maps(const SpherePoint& alpha);

}  // namespace sphere
