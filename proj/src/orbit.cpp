#include "sphere/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sphere/approx.hpp"
#include "sphere/errors.hpp"
#include "sphere/group.hpp"
#include "table_scan.hpp"

namespace sphere {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double at_most(double bound) { return bound * (1.0 + kLemmaSlack); }

}  // namespace

double cone_gap(std::span<const double> alpha, std::span<const std::int64_t> p, std::int64_t q) {
  return 0.5 * static_cast<double>(q) * squared_distance(alpha, p, q);
}

double flowed_height(double t, std::int64_t q, double gap) {
  const double qd = static_cast<double>(q);
  const double grow = gap > 0.0 ? std::exp(t + std::log(gap)) : 0.0;
  return 0.5 * (grow + std::exp(-t) * (2.0 * qd - gap));
}

TStar t_star(const SpherePoint& alpha, const ConeVector& w) {
  if (w.q() < 1) throw ContractError("t_star requires q >= 1");
  if (w.p().size() != alpha.alpha().size()) throw ContractError("dimension mismatch");
  const double D = cone_gap(alpha.alpha(), w.p(), w.q());
  const double other = 2.0 * static_cast<double>(w.q()) - D;
  if (D <= 0.0) return {kInf, 0.0};
  if (other <= 0.0) return {-kInf, 0.0};
  return {0.5 * std::log(other / D), std::sqrt(D * other)};
}

std::int64_t omega_depth(double t, double cap) {
  const double bound = std::exp(t) * cap * (1.0 + 1e-12);
  if (!(bound < 9.0e15)) throw CoverageError("omega depth exceeds the representable range");
  return static_cast<std::int64_t>(std::ceil(bound)) - 1;
}

OmegaSample omega_capped(const SpherePoint& alpha, double t, double cap, const PointTable& table,
                         std::uint64_t alpha_id) {
  if (alpha.n() != table.n()) throw ContractError("point and table dimensions differ");
  if (!(t >= 0.0) || t > kFlowTimeLimit) throw DomainError("omega_capped needs 0 <= t <= 50");
  if (!(cap > 0.0) || !std::isfinite(cap)) throw ContractError("omega cap must be positive and finite");
  const std::int64_t depth = omega_depth(t, cap);
  if (depth > table.n_max()) throw CoverageError("point table too shallow for this time and cap");

  OmegaSample out;
  out.t = t;
  out.alpha_id = alpha_id;
  out.cap = cap;
  out.omega = cap;
  const auto a = std::span<const double>(alpha.alpha());
  const double emt = std::exp(-t);
  std::size_t best_i = 0;
  bool found = false;
  for (std::int64_t q = 1; q <= depth; ++q) {
    const double qd = static_cast<double>(q);
    // Every flowed height is at least q e^{-t}.
    if (qd * emt >= out.omega) break;
    // e^t D < 2 omega bounds |alpha - p/q|_e.
    const double r = 2.0 * std::sqrt(out.omega * emt / qd) * (1.0 + 1e-9);
    detail::visit_window(table, a, q, r, [&](std::size_t i, double) {
      const double h = flowed_height(t, q, cone_gap(a, table.p(i), q));
      if (h < out.omega) {
        out.omega = h;
        best_i = i;
        found = true;
      }
    });
  }
  if (found) out.vector = table.point(best_i).point();
  return out;
}

LemmaOutcome small_vector_check(const SpherePoint& alpha, const ConeVector& w, double eps, double N) {
  LemmaOutcome out;
  const double q = static_cast<double>(w.q());
  const auto emb = embed_and_distance(alpha, w);
  out.premise = N >= q && eps > 0.0 && emb.dist_sup < eps / std::sqrt(q * N);
  if (!out.premise) return out;
  const auto ts = t_star(alpha, w);
  const double D = cone_gap(alpha.alpha(), w.p(), w.q());
  if (ts.t == kInf) out.value = 0.0;
  else out.value = flowed_height(std::max(ts.t, 0.0), w.q(), D);
  out.bound = eps * std::sqrt(alpha.n() + 1.0) * std::sqrt(q / N);
  out.holds = out.value < at_most(out.bound);
  return out;
}

LemmaOutcome close_vector_check(const SpherePoint& alpha, const ConeVector& w, double t, double delta) {
  LemmaOutcome out;
  const double D = cone_gap(alpha.alpha(), w.p(), w.q());
  const double h = flowed_height(t, w.q(), D);
  out.premise = t > 0.0 && h < delta;
  if (!out.premise) return out;
  const double q = static_cast<double>(w.q());
  const double N = std::exp(t) * delta;
  out.value = embed_and_distance(alpha, w).dist_sup;
  out.bound = 2.0 * delta / std::sqrt(q * N);
  out.holds = q < at_most(N) && out.value < at_most(out.bound);
  return out;
}

void DictionaryReport::merge(const DictionaryReport& o) {
  forward_checked += o.forward_checked;
  forward_violations += o.forward_violations;
  backward_checked += o.backward_checked;
  backward_violations += o.backward_violations;
  small_checked += o.small_checked;
  small_violations += o.small_violations;
  close_checked += o.close_checked;
  close_violations += o.close_violations;
  forward_worst = std::max(forward_worst, o.forward_worst);
  backward_worst = std::max(backward_worst, o.backward_worst);
  samples.insert(samples.end(), o.samples.begin(), o.samples.end());
}

std::vector<double> dictionary_grid(const RhoFunction& rho, std::int64_t n_max, std::size_t points) {
  if (points < 1) throw ContractError("time grid needs at least one point");
  const double lo = std::max(rho.t0(), 0.0);
  const double hi = std::min(rho.t_of(static_cast<double>(n_max)), kFlowTimeLimit);
  if (!(hi > lo)) throw CoverageError("point table too shallow for any positive flow time");
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i)
    grid[i] = i + 1 == points ? hi : lo + (hi - lo) * static_cast<double>(i + 1) / static_cast<double>(points);
  return grid;
}

DictionaryReport dictionary_check(const SpherePoint& alpha, const PhiFunction& phi, const PointTable& table,
                                  std::span<const double> t_grid, std::uint64_t alpha_id) {
  if (!phi.regularity().x_phi_nonincreasing)
    throw ContractError("dictionary_check needs k -> k phi(k) non-increasing");
  const RhoFunction rho(phi, alpha.n());
  const double root = std::sqrt(alpha.n() + 1.0);
  DictionaryReport rep;

  // Forward direction, with the small-vector lemma on the same witnesses.
  const auto witnesses = phi_witnesses(alpha, table, phi, QRange{1, table.n_max()});
  for (const auto& w : witnesses) {
    const auto& v = w.point.point();
    const double tq = rho.t_of(static_cast<double>(v.q()));
    const double bound = 2.0 * rho(tq);
    const double value = flowed_height(tq, v.q(), cone_gap(alpha.alpha(), v.p(), v.q()));
    ++rep.forward_checked;
    rep.forward_worst = std::max(rep.forward_worst, value / bound);
    if (!(value < at_most(bound))) ++rep.forward_violations;

    const double q = static_cast<double>(v.q());
    for (double N : {q, static_cast<double>(table.n_max())}) {
      const double eps = w.err_sup * std::sqrt(q * N) * (1.0 + 1e-9) + 1e-300;
      const auto s = small_vector_check(alpha, v, eps, N);
      if (!s.premise) continue;
      ++rep.small_checked;
      if (!s.holds) ++rep.small_violations;
    }
  }

  // Backward direction, with the close-vector lemma at delta = rho(t).
  for (double t : t_grid) {
    if (!(t > 0.0) || t < rho.t0()) continue;
    const double cap = rho(t);
    auto sample = omega_capped(alpha, t, cap, table, alpha_id);
    if (sample.vector) {
      const auto& v = *sample.vector;
      const double q = static_cast<double>(v.q());
      if (phi.in_domain(q)) {
        const double err = embed_and_distance(alpha, v).dist_sup;
        const double bound = root * phi(q);
        ++rep.backward_checked;
        rep.backward_worst = std::max(rep.backward_worst, err / bound);
        if (!(err < at_most(bound))) ++rep.backward_violations;
      }
      const auto c = close_vector_check(alpha, v, t, cap);
      if (c.premise) {
        ++rep.close_checked;
        if (!c.holds) ++rep.close_violations;
      }
    }
    rep.samples.push_back(std::move(sample));
  }
  return rep;
}

}  // namespace sphere
