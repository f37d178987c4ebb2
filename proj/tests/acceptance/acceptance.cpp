// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "sphere/approx.hpp"
#include "sphere/cli.hpp"
#include "sphere/khintchine.hpp"
#include "sphere/orbit.hpp"
#include "sphere/parallel.hpp"
#include "sphere/point_cache.hpp"
#include "sphere/rational_points.hpp"
#include "sphere/rho.hpp"
#include "sphere/sampling.hpp"
#include "sphere/targets.hpp"

using namespace sphere;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

const unsigned kThreads = std::max(1u, std::thread::hardware_concurrency());

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome enumeration_oracle() {
  std::size_t compared = 0;
  for (int n = 1; n <= 3; ++n)
    for (std::int64_t N = 1; N <= 60; ++N) {
      if (!(enumerate_points(n, N) == brute_force_points(n, N)))
        return {false, fmt("mismatch at n=%d N=%lld", n, static_cast<long long>(N))};
      ++compared;
    }
  return {true, fmt("%zu (n, N) pairs identical", compared)};
}

Outcome counting_growth() {
  std::string detail;
  bool pass = true;
  for (auto [n, Ns] : {std::pair<int, std::vector<std::int64_t>>{1, {100, 1000, 10000}}, {2, {100, 1000}}}) {
    double lo = INFINITY, hi = 0.0;
    detail += fmt("n=%d:", n);
    for (auto N : Ns) {
      const auto c = count_points(n, N);
      lo = std::min(lo, c.normalized);
      hi = std::max(hi, c.normalized);
      detail += fmt(" %.4f", c.normalized);
    }
    detail += fmt(" (band ratio %.3f <= 2) ", hi / lo);
    pass = pass && hi / lo <= 2.0;
  }
  return {pass, detail};
}

Outcome dirichlet_circle() {
  const std::vector<std::int64_t> Ns{10, 100, 1000, 10000};
  const auto table = enumerate_points(1, 10000);
  const std::size_t samples = 1000;
  std::vector<double> worst(samples);
  parallel_for(samples, kThreads, [&](std::size_t b, std::size_t e, unsigned) {
    for (std::size_t i = b; i < e; ++i) worst[i] = uniform_dirichlet_constant(sample_sphere(1, 1, i), table, Ns);
  });
  const double m = *std::max_element(worst.begin(), worst.end());
  const double bound = 2.0 * std::numbers::sqrt2 + 0.01;
  return {m <= bound, fmt("max score %.6f over %zu targets, bound %.6f", m, samples, bound)};
}

Outcome dirichlet_s2() {
  const std::vector<std::int64_t> Ns{10, 100, 1000};
  const auto table = enumerate_points(2, 1000);
  const std::size_t samples = 200;
  std::vector<std::vector<double>> s(samples, std::vector<double>(Ns.size()));
  parallel_for(samples, kThreads, [&](std::size_t b, std::size_t e, unsigned) {
    for (std::size_t i = b; i < e; ++i)
      for (std::size_t j = 0; j < Ns.size(); ++j) s[i][j] = dirichlet_score(sample_sphere(2, 2, i), table, Ns[j]);
  });
  // running maximum over targets and N' <= N
  std::vector<double> run(Ns.size(), 0.0);
  for (std::size_t j = 0; j < Ns.size(); ++j) {
    run[j] = j ? run[j - 1] : 0.0;
    for (const auto& r : s) run[j] = std::max(run[j], r[j]);
  }
  const double change = std::abs(run[2] - run[1]) / run[1];
  return {std::isfinite(run[2]) && change < 0.10,
          fmt("running max %.4f %.4f %.4f, last-decade change %.2f%% < 10%%", run[0], run[1], run[2], 100 * change)};
}

Outcome dictionary() {
  bool pass = true;
  std::string detail;
  for (int n = 1; n <= 2; ++n) {
    const std::int64_t depth = n == 1 ? 3000 : 1000;
    const auto table = enumerate_points(n, depth);
    for (const char* spec : {"power:1", "power:1:0.3", "power:1.2"}) {
      const auto phi = PhiFunction::parse(spec);
      const auto grid = dictionary_grid(RhoFunction(phi, n), depth, 200);
      std::vector<DictionaryReport> reps(100);
      parallel_for(reps.size(), kThreads, [&](std::size_t b, std::size_t e, unsigned) {
        for (std::size_t i = b; i < e; ++i) reps[i] = dictionary_check(sample_sphere(n, 5, i), phi, table, grid, i);
      });
      DictionaryReport total;
      for (const auto& r : reps) total.merge(r);
      pass = pass && total.violations() == 0;
      detail += fmt("n=%d %s: %llu/%llu fwd/bwd checks, %llu violations; ", n, spec,
                    static_cast<unsigned long long>(total.forward_checked),
                    static_cast<unsigned long long>(total.backward_checked),
                    static_cast<unsigned long long>(total.violations()));
    }
  }
  return {pass, detail};
}

Outcome lemmas() {
  const auto table = enumerate_points(2, 2000);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uint64_t small = 0, close = 0, bad = 0;
  for (int k = 0; k < 10000; ++k) {
    const auto i = rng() % table.size();
    const auto w = table.point(i).point();
    const double q = static_cast<double>(w.q());
    std::vector<double> v;
    const double spread = std::pow(10.0, -1.0 - 6.0 * u(rng));
    for (auto c : w.p()) v.push_back(static_cast<double>(c) / q + spread * (u(rng) - 0.5));
    const auto a = SpherePoint::normalized(v);
    double err = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) err = std::max(err, std::abs(a[j] - static_cast<double>(w.p()[j]) / q));

    // premise: N >= q and err < eps / sqrt(qN)
    const double N = q * (1.0 + 1000.0 * u(rng));
    const double eps = err * std::sqrt(q * N) * (1.0 + 1e-6 + u(rng));
    const auto sv = small_vector_check(a, w, eps, N);
    small += sv.premise;
    bad += sv.premise && !sv.holds;

    // premise: t > 0 and flowed norm below delta
    const double t = 1e-3 + 12.0 * u(rng);
    const double h = flowed_height(t, w.q(), cone_gap(a.alpha(), w.p(), w.q()));
    const double delta = h * (1.0 + 1e-6 + u(rng));
    const auto cv = close_vector_check(a, w, t, delta);
    close += cv.premise;
    bad += cv.premise && !cv.holds;
  }
  return {bad == 0 && small == 10000 && close == 10000,
          fmt("%llu small-vector and %llu close-vector instances, %llu violations",
              static_cast<unsigned long long>(small), static_cast<unsigned long long>(close),
              static_cast<unsigned long long>(bad))};
}

Outcome rho_identities() {
  double worst = 0.0;
  bool monotone = true, tandem = true;
  std::string detail;
  for (int n = 1; n <= 3; ++n)
    for (double tau : {1.0, 1.1, 1.5, 2.0}) {
      const auto phi = PhiFunction::power(tau);
      const RhoFunction rho(phi, n);
      for (int q = 1; q <= 10000; ++q) {
        const double want = std::sqrt(n + 1.0) * q * phi(q) / 2.0;
        worst = std::max(worst, std::abs(rho(rho.t_of(q)) - want) / want);
      }
      std::vector<double> grid;
      for (int i = 0; i < 1000; ++i) grid.push_back(rho.t0() + 30.0 * i / 999.0);
      monotone = monotone && rho.non_increasing_on(grid);
      const auto r = tandem_classification(phi, n, 1000);
      tandem = tandem && r.agree();
      if (n == 1) detail += fmt("tau=%.1f %s; ", tau, trend_name(r.sum.trend));
    }
  return {worst <= 1e-9 && monotone && tandem,
          fmt("max rel err %.2e <= 1e-9, monotone %s, tandem agree %s (%s)", worst, monotone ? "yes" : "no",
              tandem ? "yes" : "no", detail.c_str())};
}

Outcome khintchine_direction() {
  const auto table = enumerate_points(1, 10000);
  MCConfig c;
  c.n = 1;
  c.seed = 8;
  c.samples = 10000;
  c.threads = kThreads;

  c.phi = PhiFunction::scaled_power(10.0, 1.0);
  std::vector<double> div;
  for (std::int64_t Q1 : {100, 300, 1000}) {
    c.q_lo = 1;
    c.q_hi = Q1;
    div.push_back(mc_measure_estimate(c, table).fraction);
  }
  c.phi = PhiFunction::power(1.5);
  std::vector<double> conv;
  for (std::int64_t Q0 : {100, 300, 1000, 3000}) {
    c.q_lo = Q0;
    c.q_hi = 10000;
    conv.push_back(mc_measure_estimate(c, table).fraction);
  }
  const bool up = std::is_sorted(div.begin(), div.end());
  const bool down = std::is_sorted(conv.rbegin(), conv.rend());
  return {div.back() >= 0.95 && up && conv.front() <= 0.2 && down,
          fmt("10/q on [1,Q1], Q1=100,300,1000: %.4f %.4f %.4f (>= 0.95, nondecreasing); "
              "q^-1.5 on [Q0,1e4], Q0=100,300,1000,3000: %.4f %.4f %.4f %.4f (<= 0.2, nonincreasing)",
              div[0], div[1], div[2], conv[0], conv[1], conv[2], conv[3])};
}

Outcome box_counting() {
  const auto table = enumerate_points(1, 100000);
  const auto b2 = boxcount_dimension(PhiFunction::power(2.0), table, 100, 100000, 8, 18);
  const auto b1 = boxcount_dimension(PhiFunction::power(1.0), table, 100, 100000, 8, 18);
  const bool pass = b2.slope >= 0.35 && b2.slope <= 0.65 && b1.slope >= 0.9 && b1.slope <= 1.0;
  return {pass, fmt("tau=2 slope %.4f in [0.35,0.65] (residual %.4f); tau=1 slope %.4f in [0.9,1.0] (residual %.4f); "
                    "window [100,1e5], levels 8..18",
                    b2.slope, b2.residual, b1.slope, b1.residual)};
}

Outcome ba_behaviour() {
  const auto table = enumerate_points(1, 10000);
  std::vector<double> g, l;
  for (std::int64_t N : {100, 1000, 10000}) {
    g.push_back(ba_score(golden_point(), table, N));
    l.push_back(ba_score(liouville_point(), table, N));
  }
  const double ratio = *std::min_element(g.begin(), g.end()) / *std::max_element(g.begin(), g.end());
  const double drop = l.front() / l.back();
  return {ratio >= 0.5 && drop >= 10.0,
          fmt("golden %.4f %.4f %.4f (min/max %.3f >= 0.5); liouville %.4g %.4g %.4g (drop %.1fx >= 10x)", g[0], g[1],
              g[2], ratio, l[0], l[1], l[2], drop)};
}

std::string slurp(const std::string& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "sphere-acceptance-determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string cache = (dir / "cache").string();
  const std::vector<std::vector<std::string>> cmds{
      {"points", "--n", "2", "--N", "300"},
      {"approx", "--n", "2", "--N", "500", "--samples", "100"},
      {"dirichlet", "--n", "1", "--samples", "200", "--Nmax", "10000"},
      {"witnesses", "--n", "1", "--samples", "50", "--phi", "power:1.2", "--qmax", "3000"},
      {"orbit", "--n", "2", "--samples", "20", "--tmax", "5", "--steps", "40"},
      {"dictionary", "--n", "1", "--samples", "30", "--phi", "power:1.2", "--tmax", "6", "--steps", "60"},
      {"khintchine", "--n", "1", "--phi", "power:1.5", "--window", "100,3000", "--samples", "2000", "--ladder", "8,14"},
      {"dimension", "--phi", "power:2", "--window", "100,3000", "--ladder", "8,14"},
      {"ba-scan", "--alpha", "random", "--samples", "20", "--Nlist", "100,1000"},
  };
  std::ostringstream sink;
  int replays = 0;
  for (const auto& base : cmds) {
    std::string bytes[2];
    for (int k = 0; k < 2; ++k) {
      auto args = base;
      const std::string out = (dir / (base[0] + "-t" + std::to_string(k))).string();
      args.insert(args.end(), {"--seed", "11", "--cache-dir", cache, "--threads", k ? "8" : "1", "--out", out});
      if (run_cli(args, sink, sink) != 0) return {false, base[0] + " failed"};
      bytes[k] = slurp(out);
      if (run_cli({"replay", "--manifest-file", out + ".manifest.json"}, sink, sink) != 0 || slurp(out) != bytes[k])
        return {false, base[0] + " replay differs"};
      ++replays;
    }
    if (bytes[0] != bytes[1]) return {false, base[0] + " differs between --threads 1 and 8"};
  }
  fs::remove_all(dir);
  return {true, fmt("%zu subcommands identical across threads, %d manifest replays byte-identical", cmds.size(),
                    replays)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "enumeration oracle equivalence", 60, enumeration_oracle},
      {2, "counting growth band", 600, counting_growth},
      {3, "Dirichlet on S^1, C = 2 sqrt 2", 600, dirichlet_circle},
      {4, "Dirichlet on S^2, empirical boundedness", 1200, dirichlet_s2},
      {5, "dictionary instance checks", 900, dictionary},
      {6, "small/close vector lemmas", 120, lemmas},
      {7, "rho-transform identities", 60, rho_identities},
      {8, "Khintchine direction", 900, khintchine_direction},
      {9, "box-counting dimension", 900, box_counting},
      {10, "badly approximable scores", 300, ba_behaviour},
      {11, "determinism", 300, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.pass && secs < c.budget_s;
    failed += !pass;
    std::printf("%s %2d %s: %s [%.1fs of %.0fs]\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                c.budget_s);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
