#include "sphere/khintchine.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sphere/approx.hpp"
#include "sphere/errors.hpp"
#include "sphere/parallel.hpp"
#include "sphere/sampling.hpp"

namespace sphere {

namespace {

// Neumaier-compensated running sum.
class Accumulator {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) comp_ += (sum_ - t) + x;
    else comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0, comp_ = 0.0;
};

std::int64_t first_index(const PhiFunction& phi) {
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(phi.x0())));
}

void check_index_range(const PhiFunction& phi, std::int64_t K) {
  if (K < first_index(phi)) throw ContractError("series cut-off below the domain of phi");
  if (static_cast<double>(K) > phi.x_max()) throw CoverageError("series cut-off past the tabulated phi");
}

struct Integral {
  double value;
  double error;
};

Integral rho_power_integral(const RhoFunction& rho, int n, double a, double b) {
  if (!(b > a)) return {0.0, 0.0};
  auto f = [&](double t) { return std::pow(rho(std::max(t, rho.t0())), n); };
  double err = 0.0, l1 = 0.0;
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, 1e-11, &err, &l1);
  if (!std::isfinite(v) || err > 1e-8 * std::max(std::abs(v), 1e-300))
    throw QuadratureError("rho integral quadrature did not converge");
  return {v, err};
}

}  // namespace

SeriesPartials series_partials(const PhiFunction& phi, const DimensionFunction* f, int n, std::int64_t K,
                               double T) {
  if (n < 1) throw ContractError("n must be >= 1");
  check_index_range(phi, K);
  const RhoFunction rho(phi, n);
  if (!(T >= rho.t0())) throw DomainError("integration end below t0");
  Accumulator kh, hd;
  for (std::int64_t k = first_index(phi); k <= K; ++k) {
    const double kd = static_cast<double>(k);
    const double weight = std::pow(kd, n - 1);
    const double p = phi(kd);
    kh.add(weight * std::pow(p, n));
    if (f) hd.add(weight * (*f)(p));
  }
  SeriesPartials out;
  out.khintchine = kh.value();
  if (f) out.hausdorff = hd.value();
  const auto I = rho_power_integral(rho, n, rho.t0(), T);
  out.rho_integral = I.value;
  out.rho_integral_error = I.error;
  return out;
}

const char* trend_name(Trend t) { return t == Trend::Divergent ? "divergent" : "convergent"; }

TrendReport classify_partials(std::vector<double> partials, double threshold) {
  if (partials.size() < 3) throw ContractError("classification needs at least three partials");
  TrendReport r;
  r.partials = std::move(partials);
  const auto& p = r.partials;
  bool divergent = true;
  for (std::size_t i = 2; i < p.size(); ++i) {
    const double prev = p[i - 1] - p[i - 2], cur = p[i] - p[i - 1];
    const double ratio = prev > 0.0 ? cur / prev : 0.0;
    r.ratios.push_back(ratio);
    if (!(ratio > threshold)) divergent = false;
  }
  const double last = p.back() - p[p.size() - 2];
  r.stabilized = std::abs(last) < 1e-6 * std::abs(p.back());
  r.trend = divergent ? Trend::Divergent : Trend::Convergent;
  return r;
}

TandemReport tandem_classification(const PhiFunction& phi, int n, std::int64_t K, double threshold) {
  if (n < 1) throw ContractError("n must be >= 1");
  const std::int64_t last = K * 8;
  check_index_range(phi, K);
  check_index_range(phi, last);
  const RhoFunction rho(phi, n);
  TandemReport rep;
  std::vector<double> sums, integrals;
  Accumulator acc;
  std::int64_t k = first_index(phi);
  double integral = 0.0, t_prev = rho.t0();
  for (std::int64_t cut = K; cut <= last; cut *= 2) {
    for (; k <= cut; ++k) {
      const double kd = static_cast<double>(k);
      acc.add(std::pow(kd, n - 1) * std::pow(phi(kd), n));
    }
    sums.push_back(acc.value());
    const double T = rho.t_of(static_cast<double>(cut));
    integral += rho_power_integral(rho, n, t_prev, T).value;
    t_prev = T;
    rep.times.push_back(T);
    integrals.push_back(integral);
  }
  rep.sum = classify_partials(std::move(sums), threshold);
  rep.integral = classify_partials(std::move(integrals), threshold);
  return rep;
}

Proportion wilson_interval(std::uint64_t hits, std::uint64_t samples) {
  if (samples == 0) throw ContractError("no samples");
  if (hits > samples) throw ContractError("more hits than samples");
  constexpr double z = 1.959963984540054;
  const double nn = static_cast<double>(samples);
  const double p = static_cast<double>(hits) / nn;
  const double denom = 1.0 + z * z / nn;
  const double center = (p + z * z / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / denom;
  // The exact interval contains p; rounding at p = 0 or 1 must not push it out.
  return Proportion{hits, samples, p, std::min(p, std::max(0.0, center - half)), std::max(p, std::min(1.0, center + half))};
}

Proportion mc_measure_estimate(const MCConfig& config, const PointTable& table) {
  if (config.n != table.n()) throw ContractError("config and table dimensions differ");
  if (config.q_lo < 1 || config.q_hi < config.q_lo) throw ContractError("invalid q window");
  if (config.q_hi > table.n_max()) throw CoverageError("q window exceeds the table depth");
  const unsigned workers = std::max(1u, config.threads);
  std::vector<std::uint64_t> hits(workers, 0);
  parallel_for(config.samples, workers, [&](std::size_t begin, std::size_t end, unsigned w) {
    std::uint64_t h = 0;
    for (std::size_t i = begin; i < end; ++i) {
      const auto alpha = sample_sphere(config.n, config.seed, i);
      if (has_phi_witness(alpha, table, config.phi, QRange{config.q_lo, config.q_hi})) ++h;
    }
    hits[w] = h;
  });
  std::uint64_t total = 0;
  for (auto h : hits) total += h;
  return wilson_interval(total, config.samples);
}

std::vector<Ball> ball_transform(const std::vector<Ball>& balls, const DimensionFunction& f, int n) {
  if (n < 1) throw ContractError("n must be >= 1");
  std::vector<Ball> out;
  out.reserve(balls.size());
  for (const auto& b : balls) {
    if (!(b.radius > 0.0)) throw ContractError("ball radius must be positive");
    out.push_back(Ball{b.center, std::pow(f(b.radius), 1.0 / n)});
  }
  return out;
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sup_dist(double theta, double c1, double c2) {
  return std::max(std::abs(std::cos(theta) - c1), std::abs(std::sin(theta) - c2));
}

// Largest delta in [0, pi/2] with sup_dist(theta + sign * delta) < r; the
// distance is increasing in delta there.
double arc_extent(double theta, double sign, double c1, double c2, double r) {
  double lo = 0.0, hi = std::numbers::pi / 2;
  if (sup_dist(theta + sign * hi, c1, c2) < r) return hi;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (sup_dist(theta + sign * mid, c1, c2) < r) lo = mid; else hi = mid;
  }
  return lo;
}

void fit_levels(BoxCountResult& res) {
  const std::size_t m = res.levels.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = res.levels[i], y = std::log2(static_cast<double>(std::max<std::uint64_t>(res.counts[i], 1)));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double md = static_cast<double>(m);
  res.slope = (md * sxy - sx * sy) / (md * sxx - sx * sx);
  res.intercept = (sy - res.slope * sx) / md;
  double ss = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double y = std::log2(static_cast<double>(std::max<std::uint64_t>(res.counts[i], 1)));
    const double e = y - (res.intercept + res.slope * res.levels[i]);
    ss += e * e;
  }
  res.residual = std::sqrt(ss / md);
}

}  // namespace

std::pair<double, double> sup_ball_arc(double c1, double c2, double r) {
  if (!(r > 0.0) || r > 1.0) throw ContractError("arc extents are computed for 0 < r <= 1");
  double theta = std::atan2(c2, c1);
  if (theta < 0.0) theta += kTwoPi;
  const double right = arc_extent(theta, 1.0, c1, c2, r);
  const double left = arc_extent(theta, -1.0, c1, c2, r);
  return {(theta - left) / kTwoPi, (theta + right) / kTwoPi};
}

BoxCountResult boxcount_balls(const std::vector<Ball>& balls, int k_lo, int k_hi) {
  if (k_hi - k_lo + 1 < 4) throw ContractError("box counting needs at least four ladder levels");
  if (k_lo < 1 || k_hi > 26) throw ContractError("ladder levels must lie in [1, 26]");
  const std::uint64_t M = std::uint64_t{1} << k_hi;
  std::vector<std::uint8_t> marks(M, 0);
  for (const auto& b : balls) {
    if (b.center.size() != 2) throw ContractError("box counting is implemented on the circle only");
    if (b.radius > 1.0) {
      for (std::uint64_t i = 0; i < M; ++i) {
        const double theta = kTwoPi * (static_cast<double>(i) + 0.5) / static_cast<double>(M);
        if (sup_dist(theta, b.center[0], b.center[1]) < b.radius) marks[i] = 1;
      }
      continue;
    }
    const auto [lo, hi] = sup_ball_arc(b.center[0], b.center[1], b.radius);
    const auto i_lo = static_cast<std::int64_t>(std::floor(lo * static_cast<double>(M)));
    const auto i_hi = static_cast<std::int64_t>(std::floor(hi * static_cast<double>(M)));
    const auto Mi = static_cast<std::int64_t>(M);
    for (std::int64_t i = i_lo; i <= i_hi; ++i) marks[static_cast<std::size_t>(((i % Mi) + Mi) % Mi)] = 1;
  }
  BoxCountResult res;
  res.balls = balls.size();
  std::vector<std::uint8_t> level = std::move(marks);
  for (int k = k_hi; k >= k_lo; --k) {
    std::uint64_t count = 0;
    for (auto v : level) count += v;
    res.levels.insert(res.levels.begin(), k);
    res.counts.insert(res.counts.begin(), count);
    std::vector<std::uint8_t> coarser(level.size() / 2);
    for (std::size_t i = 0; i < coarser.size(); ++i) coarser[i] = level[2 * i] | level[2 * i + 1];
    level = std::move(coarser);
  }
  fit_levels(res);
  return res;
}

BoxCountResult boxcount_dimension(const PhiFunction& phi, const PointTable& table, std::int64_t q_lo,
                                  std::int64_t q_hi, int k_lo, int k_hi) {
  if (table.n() != 1) throw ContractError("box counting is implemented for n = 1 only");
  if (q_lo < 1 || q_hi < q_lo) throw ContractError("invalid q window");
  if (q_hi > table.n_max()) throw CoverageError("q window exceeds the table depth");
  std::vector<Ball> balls;
  for (std::int64_t q = q_lo; q <= q_hi; ++q) {
    const double qd = static_cast<double>(q);
    if (!phi.in_domain(qd)) continue;
    const double r = phi(qd);
    for (std::size_t i = table.bucket_begin(q); i < table.bucket_end(q); ++i) {
      const auto p = table.p(i);
      balls.push_back(Ball{{static_cast<double>(p[0]) / qd, static_cast<double>(p[1]) / qd}, r});
    }
  }
  return boxcount_balls(balls, k_lo, k_hi);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_int(const std::string& v, const std::string& key) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size() || x < 0) throw std::invalid_argument(v);
    return static_cast<T>(x);
  } catch (const std::exception&) {
    throw ContractError("bad integer for " + key + ": '" + v + "'");
  }
}

std::pair<std::int64_t, std::int64_t> parse_pair(const std::string& v, const std::string& key) {
  const auto comma = v.find(',');
  if (comma == std::string::npos) throw ContractError(key + " needs two comma-separated integers");
  return {parse_int<std::int64_t>(trim(v.substr(0, comma)), key),
          parse_int<std::int64_t>(trim(v.substr(comma + 1)), key)};
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text) {
  ExperimentConfig c;
  std::string kind = "power", params = "1";
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ContractError("config line without '=': " + line);
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key == "n") c.n = parse_int<int>(value, key);
    else if (key == "phi.kind") kind = value;
    else if (key == "phi.params") params = value;
    else if (key == "window") std::tie(c.q_lo, c.q_hi) = parse_pair(value, key);
    else if (key == "samples") c.samples = parse_int<std::uint64_t>(value, key);
    else if (key == "seed") c.seed = parse_int<std::uint64_t>(value, key);
    else if (key == "ladder") {
      const auto [a, b] = parse_pair(value, key);
      c.k_lo = static_cast<int>(a);
      c.k_hi = static_cast<int>(b);
    } else {
      throw ContractError("unknown config key '" + key + "'");
    }
  }
  c.phi = params.empty() ? kind : kind + ":" + params;
  PhiFunction::parse(c.phi);
  if (c.n < 1) throw ContractError("n must be >= 1");
  return c;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(ss.str());
}

}  // namespace sphere
