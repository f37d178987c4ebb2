#pragma once

// Classical-side measurements against a PointTable: best approximants,
// Dirichlet scores, phi-witnesses and badly-approximable scores. All errors are
// sup-norm; Euclidean values ride along for diagnostics.

#include <cstdint>
#include <span>
#include <vector>

#include "sphere/phi.hpp"
#include "sphere/quadform.hpp"
#include "sphere/rational_points.hpp"

namespace sphere {

struct ApproxWitness {
  RationalSpherePoint point;
  SpherePoint target;
  double err_sup;
  double err_euclid;
};

struct DirichletParams {
  DirichletParams(double C, double a, double b);
  double C, a, b;
};

struct QRange {
  std::int64_t lo;
  std::int64_t hi;
};

// Argmin of err_sup over q <= N; ties go to the smaller q, then the
// lexicographically smaller p.
ApproxWitness best_approx(const SpherePoint& alpha, const PointTable& table, std::int64_t N);

// min over q <= N of |alpha - p/q| sqrt(q N). Requires N > 1.
double dirichlet_score(const SpherePoint& alpha, const PointTable& table, std::int64_t N);

// max of dirichlet_score over N_list.
double uniform_dirichlet_constant(const SpherePoint& alpha, const PointTable& table,
                                  std::span<const std::int64_t> N_list);

// Whether |alpha - p/q| < C / (q^a N^b) has a solution with q <= N.
bool is_dirichlet_at(const SpherePoint& alpha, const PointTable& table, const DirichletParams& params,
                     std::int64_t N);

// All points with q in range and err_sup < phi(q), sorted by (q, p).
std::vector<ApproxWitness> phi_witnesses(const SpherePoint& alpha, const PointTable& table,
                                         const PhiFunction& phi, QRange range);

// Whether some q in range has err_sup < phi(q). Cheaper than listing them.
bool has_phi_witness(const SpherePoint& alpha, const PointTable& table, const PhiFunction& phi,
                     QRange range);

inline constexpr double kCoincidence = 1e-12;

// min over q <= N of q |alpha - p/q|. Returns 0 when alpha lies within 1e-12
// of a table point with q <= N (alpha is then treated as that rational).
double ba_score(const SpherePoint& alpha, const PointTable& table, std::int64_t N);

}  // namespace sphere
