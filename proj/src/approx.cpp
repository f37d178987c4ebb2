#include "sphere/approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sphere/errors.hpp"
#include "table_scan.hpp"

namespace sphere {

namespace {

using detail::visit_window;

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_dims(const SpherePoint& alpha, const PointTable& table) {
  if (alpha.n() != table.n()) throw ContractError("point and table dimensions differ");
}

void check_depth(const PointTable& table, std::int64_t N) {
  if (N < 1) throw ContractError("N must be >= 1");
  if (N > table.n_max()) throw CoverageError("N exceeds the table depth");
}

ApproxWitness make_witness(const SpherePoint& alpha, const PointTable& table, std::size_t i) {
  const auto pt = table.point(i);
  const auto emb = embed_and_distance(alpha, pt.point());
  return ApproxWitness{pt, alpha, emb.dist_sup, emb.dist_e};
}

}  // namespace

DirichletParams::DirichletParams(double C_, double a_, double b_) : C(C_), a(a_), b(b_) {
  if (!(C > 0.0) || !(a >= 0.0) || !(b >= 0.0))
    throw ContractError("Dirichlet parameters need C > 0 and a, b >= 0");
}

ApproxWitness best_approx(const SpherePoint& alpha, const PointTable& table, std::int64_t N) {
  check_dims(alpha, table);
  check_depth(table, N);
  const auto a = std::span<const double>(alpha.alpha());
  double best = kInf;
  std::size_t best_i = 0;
  for (std::int64_t q = 1; q <= N; ++q) {
    visit_window(table, a, q, best, [&](std::size_t i, double err) {
      if (err < best) {
        best = err;
        best_i = i;
      }
    });
    if (best == 0.0) break;
  }
  return make_witness(alpha, table, best_i);
}

double dirichlet_score(const SpherePoint& alpha, const PointTable& table, std::int64_t N) {
  check_dims(alpha, table);
  check_depth(table, N);
  if (N < 2) throw ContractError("dirichlet_score requires N > 1");
  const auto a = std::span<const double>(alpha.alpha());
  const double Nd = static_cast<double>(N);
  double score = kInf;
  for (std::int64_t q = 1; q <= N; ++q) {
    const double scale = std::sqrt(static_cast<double>(q) * Nd);
    visit_window(table, a, q, score / scale, [&](std::size_t, double err) {
      score = std::min(score, err * scale);
    });
    if (score == 0.0) break;
  }
  return score;
}

double uniform_dirichlet_constant(const SpherePoint& alpha, const PointTable& table,
                                  std::span<const std::int64_t> N_list) {
  if (N_list.empty()) throw ContractError("N_list is empty");
  double c = 0.0;
  for (auto N : N_list) c = std::max(c, dirichlet_score(alpha, table, N));
  return c;
}

bool is_dirichlet_at(const SpherePoint& alpha, const PointTable& table, const DirichletParams& params,
                     std::int64_t N) {
  check_dims(alpha, table);
  check_depth(table, N);
  const auto a = std::span<const double>(alpha.alpha());
  const double Nb = std::pow(static_cast<double>(N), params.b);
  bool found = false;
  for (std::int64_t q = 1; q <= N && !found; ++q) {
    const double bound = params.C / (std::pow(static_cast<double>(q), params.a) * Nb);
    visit_window(table, a, q, bound, [&](std::size_t, double err) { found = found || err < bound; });
  }
  return found;
}

namespace {

// Clamps the range to phi's domain and checks the table covers it.
QRange usable_range(const PointTable& table, const PhiFunction& phi, QRange range) {
  if (range.lo < 1 || range.hi < range.lo) throw ContractError("invalid q range");
  if (range.hi > table.n_max()) throw CoverageError("q range exceeds the table depth");
  const double x_hi = phi.x_max();
  QRange out{std::max<std::int64_t>(range.lo, static_cast<std::int64_t>(std::ceil(phi.x0()))),
             range.hi};
  if (std::isfinite(x_hi)) out.hi = std::min<std::int64_t>(out.hi, static_cast<std::int64_t>(x_hi));
  return out;
}

}  // namespace

std::vector<ApproxWitness> phi_witnesses(const SpherePoint& alpha, const PointTable& table,
                                         const PhiFunction& phi, QRange range) {
  check_dims(alpha, table);
  const auto r = usable_range(table, phi, range);
  const auto a = std::span<const double>(alpha.alpha());
  std::vector<ApproxWitness> out;
  for (std::int64_t q = r.lo; q <= r.hi; ++q) {
    const double bound = phi(static_cast<double>(q));
    visit_window(table, a, q, bound, [&](std::size_t i, double err) {
      if (err < bound) out.push_back(make_witness(alpha, table, i));
    });
  }
  return out;
}

bool has_phi_witness(const SpherePoint& alpha, const PointTable& table, const PhiFunction& phi,
                     QRange range) {
  check_dims(alpha, table);
  const auto r = usable_range(table, phi, range);
  const auto a = std::span<const double>(alpha.alpha());
  bool found = false;
  for (std::int64_t q = r.lo; q <= r.hi && !found; ++q) {
    const double bound = phi(static_cast<double>(q));
    visit_window(table, a, q, bound, [&](std::size_t, double err) { found = found || err < bound; });
  }
  return found;
}

double ba_score(const SpherePoint& alpha, const PointTable& table, std::int64_t N) {
  check_dims(alpha, table);
  check_depth(table, N);
  const auto a = std::span<const double>(alpha.alpha());
  double score = kInf;
  bool coincident = false;
  for (std::int64_t q = 1; q <= N && !coincident; ++q) {
    const double qd = static_cast<double>(q);
    visit_window(table, a, q, std::max(score / qd, kCoincidence), [&](std::size_t, double err) {
      if (err <= kCoincidence) coincident = true;
      else score = std::min(score, qd * err);
    });
  }
  return coincident ? 0.0 : score;
}

}  // namespace sphere
