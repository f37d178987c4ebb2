#pragma once

// Zero-full law experiments: Khintchine and Hausdorff series, the rho
// integral, Monte Carlo measure of the phi-approximable set, ball transforms
// and box-counting dimension on the circle.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sphere/phi.hpp"
#include "sphere/rational_points.hpp"
#include "sphere/rho.hpp"

namespace sphere {

struct SeriesPartials {
  double khintchine = 0.0;                // sum_{x0 <= k <= K} k^{n-1} phi(k)^n
  std::optional<double> hausdorff;        // sum_{x0 <= k <= K} k^{n-1} f(phi(k))
  double rho_integral = 0.0;              // int_{t0}^{T} rho(t)^n dt
  double rho_integral_error = 0.0;        // quadrature error estimate
};

// Throws QuadratureError when the adaptive quadrature misses its tolerance.
SeriesPartials series_partials(const PhiFunction& phi, const DimensionFunction* f, int n, std::int64_t K,
                               double T);

enum class Trend { Convergent, Divergent };

const char* trend_name(Trend t);

// Default ratio threshold of the increment test, 2^{-1/20}.
inline constexpr double kDivergenceRatio = 0.96593632892485743;

struct TrendReport {
  std::vector<double> partials;  // at K, 2K, 4K, 8K (or the matching times)
  std::vector<double> ratios;    // successive increment ratios
  bool stabilized = false;       // last relative increment below 1e-6
  Trend trend = Trend::Convergent;
};

// Divergent when every ratio of successive increments exceeds the threshold.
TrendReport classify_partials(std::vector<double> partials, double threshold = kDivergenceRatio);

struct TandemReport {
  TrendReport sum;
  TrendReport integral;
  std::vector<double> times;  // T_j = t_{K 2^j}
  bool agree() const { return sum.trend == integral.trend; }
};

// Sum partials at K, 2K, 4K, 8K against rho-integral partials at the times
// t_{K 2^j}, where the depth e^t rho(t) reaches K 2^j.
TandemReport tandem_classification(const PhiFunction& phi, int n, std::int64_t K,
                                   double threshold = kDivergenceRatio);

struct MCConfig {
  int n = 1;
  std::uint64_t seed = 0;
  std::uint64_t samples = 1000;
  std::int64_t q_lo = 1;
  std::int64_t q_hi = 1000;
  PhiFunction phi = PhiFunction::power(1.0);
  unsigned threads = 1;
};

struct Proportion {
  std::uint64_t hits = 0;
  std::uint64_t samples = 0;
  double fraction = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

// Wilson score interval at 95%.
Proportion wilson_interval(std::uint64_t hits, std::uint64_t samples);

// Fraction of seeded uniform samples of S^n with a phi-witness in [q_lo, q_hi].
// Throws CoverageError when q_hi exceeds the table depth.
Proportion mc_measure_estimate(const MCConfig& config, const PointTable& table);

struct Ball {
  std::vector<double> center;
  double radius = 0.0;
};

// r -> f(r)^{1/n}.
std::vector<Ball> ball_transform(const std::vector<Ball>& balls, const DimensionFunction& f, int n);

struct BoxCountResult {
  std::vector<int> levels;                 // k: boxes of angular size 2^{-k} of a full turn
  std::vector<std::uint64_t> counts;
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;                   // RMS of the log2 fit
  std::uint64_t balls = 0;
};

// The arc (in normalised angle s in [0, 1)) of points within sup-distance r of
// the circle point c, as [lo, hi] with lo possibly negative (wrapping).
std::pair<double, double> sup_ball_arc(double c1, double c2, double r);

// Box-counting slope for the union over q in [q_lo, q_hi] of sup-norm balls of
// radius phi(q) around circle points, fitted over levels k_lo..k_hi. n = 1 only.
BoxCountResult boxcount_dimension(const PhiFunction& phi, const PointTable& table, std::int64_t q_lo,
                                  std::int64_t q_hi, int k_lo, int k_hi);

// Same, for an explicit list of balls centred on the circle.
BoxCountResult boxcount_balls(const std::vector<Ball>& balls, int k_lo, int k_hi);

// key = value experiment description.
struct ExperimentConfig {
  int n = 1;
  std::string phi = "power:1";
  std::int64_t q_lo = 1, q_hi = 1000;
  std::uint64_t samples = 1000;
  std::uint64_t seed = 0;
  int k_lo = 8, k_hi = 18;
};

// Keys: n, phi.kind, phi.params (colon separated), window (lo,hi), samples,
// seed, ladder (k_lo,k_hi). '#' starts a comment. Unknown keys are errors.
ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig load_experiment_config(const std::string& path);

}  // namespace sphere
