#pragma once

// Flowed lightcone vectors g_t r_alpha (p, q) and the truncated shortest-vector
// function omega along the orbit.
//
// For any rotation r in K with r (alpha, 1) = e_1, the first coordinate of
// r (p, q) is <alpha, p>, so the flowed sup-norm
//   |(g_t r (p, q))_{n+2}| = (e^t D + e^{-t} (2q - D)) / 2,  D = q - <alpha, p>,
// does not depend on the choice of r. D is evaluated as q |alpha - p/q|_e^2 / 2.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sphere/quadform.hpp"
#include "sphere/rational_points.hpp"
#include "sphere/rho.hpp"

namespace sphere {

// q - <alpha, p>, from the coordinate differences.
double cone_gap(std::span<const double> alpha, std::span<const std::int64_t> p, std::int64_t q);

// (e^t D + e^{-t} (2q - D)) / 2 with e^t D evaluated as exp(t + ln D).
double flowed_height(double t, std::int64_t q, double gap);

struct TStar {
  double t;         // +inf when alpha = p/q, -inf when alpha = -p/q
  double min_norm;  // sqrt(q^2 - w_1^2) = sqrt(D (2q - D))
};

TStar t_star(const SpherePoint& alpha, const ConeVector& w);

struct OmegaSample {
  double t = 0.0;
  std::uint64_t alpha_id = 0;
  double omega = 0.0;
  std::optional<ConeVector> vector;  // empty when the cap binds
  double cap = 0.0;
};

// Largest denominator that can give a flowed norm below cap at time t.
std::int64_t omega_depth(double t, double cap);

// min(cap, min over table points of the flowed sup-norm at time t). Requires
// t >= 0, cap > 0 and a table of depth omega_depth(t, cap); throws
// CoverageError otherwise. Ties go to the smaller q, then smaller p.
OmegaSample omega_capped(const SpherePoint& alpha, double t, double cap, const PointTable& table,
                         std::uint64_t alpha_id = 0);

inline constexpr double kLemmaSlack = 1e-9;

struct LemmaOutcome {
  bool premise = false;
  bool holds = true;  // conclusion (vacuously true without the premise)
  double value = 0.0;
  double bound = 0.0;
};

// Premise: N >= q and |alpha - p/q| < eps / sqrt(q N). Conclusion: the flowed
// norm at max(t_*, 0) is below eps sqrt(n+1) sqrt(q / N).
LemmaOutcome small_vector_check(const SpherePoint& alpha, const ConeVector& w, double eps, double N);

// Premise: t > 0 and the flowed norm at t is below delta. Conclusion, with
// N = e^t delta: q < N and |alpha - p/q| < 2 delta / sqrt(q N).
LemmaOutcome close_vector_check(const SpherePoint& alpha, const ConeVector& w, double t, double delta);

struct DictionaryReport {
  std::uint64_t forward_checked = 0, forward_violations = 0;
  std::uint64_t backward_checked = 0, backward_violations = 0;
  std::uint64_t small_checked = 0, small_violations = 0;
  std::uint64_t close_checked = 0, close_violations = 0;
  // Largest observed value / bound ratios (below 1 when nothing is violated).
  double forward_worst = 0.0, backward_worst = 0.0;
  std::vector<OmegaSample> samples;

  std::uint64_t violations() const {
    return forward_violations + backward_violations + small_violations + close_violations;
  }
  void merge(const DictionaryReport& other);
};

// Times t_lo < t_1 < ... < t_points = t_{N_max} with t_lo = max(t0, 0), spaced
// evenly; t_{N_max} is the time at which the depth e^t rho(t) reaches N_max.
std::vector<double> dictionary_grid(const RhoFunction& rho, std::int64_t n_max, std::size_t points);

// (a) every phi-witness in the table is short at t_q: below 2 rho(t_q);
// (b) at every grid time where omega < rho(t), the achieving p/q satisfies
//     |alpha - p/q| < sqrt(n+1) phi(q);
// (c)/(d) the small- and close-vector lemmas on the same instances.
// Requires k -> k phi(k) non-increasing (ContractError otherwise).
DictionaryReport dictionary_check(const SpherePoint& alpha, const PhiFunction& phi, const PointTable& table,
                                  std::span<const double> t_grid, std::uint64_t alpha_id = 0);

}  // namespace sphere
