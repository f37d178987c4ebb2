#include "sphere/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "sphere/approx.hpp"
#include "sphere/errors.hpp"
#include "sphere/json_format.hpp"
#include "sphere/khintchine.hpp"
#include "sphere/orbit.hpp"
#include "sphere/parallel.hpp"
#include "sphere/point_cache.hpp"
#include "sphere/sampling.hpp"
#include "sphere/targets.hpp"

namespace sphere {

namespace {

namespace fs = std::filesystem;

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::vector<std::int64_t> parse_int_list(const std::string& s) {
  std::vector<std::int64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ContractError("bad integer list '" + s + "'");
    }
  }
  if (out.empty()) throw ContractError("empty integer list");
  return out;
}

std::pair<std::int64_t, std::int64_t> parse_window(const std::string& s) {
  const auto v = parse_int_list(s);
  if (v.size() != 2) throw ContractError("expected lo,hi but got '" + s + "'");
  return {v[0], v[1]};
}

// Options shared by every subcommand.
struct Common {
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string cache_dir;
  bool no_cache = false;
  std::string manifest;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "Seed for sampled targets")->capture_default_str();
  app->add_option("--threads", c.threads, "Worker threads (never changes results)")
      ->check(CLI::Range(1u, 1024u))
      ->capture_default_str();
  app->add_option("--cache-dir", c.cache_dir, "Point table cache (default $SPHERE_CACHE or ./.sphere-cache)");
  app->add_flag("--no-cache", c.no_cache, "Do not read or write the point table cache");
  app->add_option("--manifest", c.manifest, "Manifest path (default <first output>.manifest.json)");
}

// Collects everything the manifest records about one run.
class Run {
 public:
  Run(std::string command, std::vector<std::string> argv, const Common& common)
      : command_(std::move(command)), argv_(std::move(argv)), common_(common),
        start_(std::chrono::steady_clock::now()) {}

  Json& config() { return config_; }
  const Common& common() const { return common_; }

  PointTable table(int n, std::int64_t N) {
    const PointCache cache(common_.no_cache ? fs::path() : PointCache::default_dir(common_.cache_dir));
    EnumerationOptions opts;
    opts.threads = common_.threads;
    auto c = cache.get(n, N, opts);
    cache_keys_.push_back(c.key);
    return std::move(c.table);
  }

  void write(const std::string& path, const std::string& content) {
    if (path.empty()) return;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ContractError("cannot write " + path);
    f << content;
    if (!f) throw ContractError("short write to " + path);
    outputs_.push_back(Json{{"path", path}, {"bytes", content.size()}, {"fnv1a64", hex64(fnv1a64(content))}});
  }

  void finish() {
    std::string path = common_.manifest;
    if (path.empty() && !outputs_.empty()) path = outputs_.front()["path"].get<std::string>() + ".manifest.json";
    if (path.empty()) return;
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    Json m;
    m["command"] = command_;
    m["argv"] = argv_;
    m["config"] = config_;
    m["seed"] = common_.seed;
    m["threads"] = common_.threads;
    m["version"] = kVersion;
    m["generator_version"] = kGeneratorVersion;
    m["cache_keys"] = cache_keys_;
    m["outputs"] = outputs_;
    m["wall_time_s"] = wall;
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw ContractError("cannot write manifest " + path);
    f << dump_json(m) << '\n';
  }

 private:
  std::string command_;
  std::vector<std::string> argv_;
  Common common_;
  std::chrono::steady_clock::time_point start_;
  Json config_ = Json::object();
  Json outputs_ = Json::array();
  std::vector<std::string> cache_keys_;
};

std::vector<SpherePoint> select_alphas(const std::string& spec, int n, std::uint64_t samples,
                                       std::uint64_t seed) {
  std::vector<SpherePoint> out;
  if (spec == "random") {
    for (std::uint64_t i = 0; i < samples; ++i) out.push_back(sample_sphere(n, seed, i));
    return out;
  }
  if (spec == "golden" || spec == "liouville") {
    if (n != 1) throw ContractError("named targets '" + spec + "' exist for n = 1 only");
    out.push_back(spec == "golden" ? golden_point() : liouville_point());
    return out;
  }
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ';')) {
    std::vector<double> v;
    std::stringstream cs(item);
    std::string c;
    while (std::getline(cs, c, ',')) {
      try {
        v.push_back(std::stod(c));
      } catch (const std::exception&) {
        throw ContractError("bad coordinate '" + c + "' in --alpha");
      }
    }
    if (static_cast<int>(v.size()) != n + 1) throw ContractError("--alpha points need n + 1 coordinates");
    out.push_back(SpherePoint::normalized(std::move(v)));
  }
  if (out.empty()) throw ContractError("no target points given");
  return out;
}

Json point_json(const ConeVector& w) { return Json{{"q", w.q()}, {"p", w.p()}}; }

void csv_point(std::string& s, std::int64_t q, std::span<const std::int64_t> p) {
  s += std::to_string(q);
  for (auto c : p) s += "," + std::to_string(c);
}

std::string csv_header(const std::string& prefix, int n, const std::string& suffix) {
  std::string h = prefix + ",q";
  for (int j = 1; j <= n + 1; ++j) h += ",p" + std::to_string(j);
  return h + suffix + "\n";
}

void append_trace(std::string& csv, const OmegaSample& s, int n) {
  csv += std::to_string(s.alpha_id) + "," + format_double(s.t) + "," + format_double(s.omega) + "," +
         format_double(s.cap) + ",";
  if (s.vector) csv_point(csv, s.vector->q(), s.vector->p());
  else csv += std::string(static_cast<std::size_t>(n) + 1, ',');
  csv += "\n";
}

Json phi_tags(const PhiFunction& phi) {
  const auto r = phi.regularity();
  return Json{{"decreasing", r.decreasing}, {"x_phi_nonincreasing", r.x_phi_nonincreasing}};
}

// --- subcommands ---------------------------------------------------------

struct PointsArgs {
  int n = 1;
  std::int64_t N = 1;
  std::string out;
};

Json cmd_points(Run& run, const PointsArgs& a) {
  run.config() = {{"n", a.n}, {"N", a.N}};
  const auto table = run.table(a.n, a.N);
  if (!a.out.empty()) {
    std::ostringstream os;
    write_table_csv(table, os);
    run.write(a.out, os.str());
  }
  return Json{{"n", a.n},
              {"N", a.N},
              {"count", table.size()},
              {"normalized", static_cast<double>(table.size()) / std::pow(static_cast<double>(a.N), a.n)},
              {"cache_key", PointCache::key(a.n, a.N)},
              {"oracle_verified", table.provenance().oracle_verified}};
}

struct ApproxArgs {
  int n = 1;
  std::int64_t N = 100;
  std::string alpha = "random";
  std::uint64_t samples = 1;
  std::string out;
};

Json cmd_approx(Run& run, const ApproxArgs& a) {
  run.config() = {{"n", a.n}, {"N", a.N}, {"alpha", a.alpha}, {"samples", a.samples}};
  const auto table = run.table(a.n, a.N);
  const auto alphas = select_alphas(a.alpha, a.n, a.samples, run.common().seed);
  std::vector<std::optional<ApproxWitness>> res(alphas.size());
  parallel_for(alphas.size(), run.common().threads, [&](std::size_t b, std::size_t e, unsigned) {
    for (std::size_t i = b; i < e; ++i) res[i].emplace(best_approx(alphas[i], table, a.N));
  });
  std::string csv = csv_header("alpha_id", a.n, ",err_sup");
  Json rows = Json::array();
  for (std::size_t i = 0; i < res.size(); ++i) {
    const auto& w = *res[i];
    csv += std::to_string(i) + ",";
    csv_point(csv, w.point.q(), w.point.p());
    csv += "," + format_double(w.err_sup) + "\n";
    if (rows.size() < 20) {
      Json r = point_json(w.point.point());
      r["alpha_id"] = i;
      r["err_sup"] = w.err_sup;
      r["err_euclid"] = w.err_euclid;
      rows.push_back(r);
    }
  }
  run.write(a.out, csv);
  return Json{{"n", a.n}, {"N", a.N}, {"targets", alphas.size()}, {"best", rows}};
}

struct DirichletArgs {
  int n = 1;
  std::uint64_t samples = 1000;
  std::int64_t Nmax = 10000;
  std::string Nlist;
  std::string alpha = "random";
  std::string out;
};

Json cmd_dirichlet(Run& run, const DirichletArgs& a) {
  std::vector<std::int64_t> Ns;
  if (!a.Nlist.empty()) {
    Ns = parse_int_list(a.Nlist);
  } else {
    for (std::int64_t N = 10; N <= a.Nmax; N *= 10) Ns.push_back(N);
    if (Ns.empty() || Ns.back() != a.Nmax) Ns.push_back(a.Nmax);
  }
  const std::int64_t depth = *std::max_element(Ns.begin(), Ns.end());
  run.config() = {{"n", a.n}, {"samples", a.samples}, {"N_list", Ns}, {"alpha", a.alpha}};
  const auto table = run.table(a.n, depth);
  const auto alphas = select_alphas(a.alpha, a.n, a.samples, run.common().seed);
  std::vector<std::vector<double>> scores(alphas.size(), std::vector<double>(Ns.size()));
  parallel_for(alphas.size(), run.common().threads, [&](std::size_t b, std::size_t e, unsigned) {
    for (std::size_t i = b; i < e; ++i)
      for (std::size_t j = 0; j < Ns.size(); ++j) scores[i][j] = dirichlet_score(alphas[i], table, Ns[j]);
  });
  std::string csv = "alpha_id,N,score\n";
  std::vector<double> max_by_N(Ns.size(), 0.0);
  for (std::size_t i = 0; i < alphas.size(); ++i)
    for (std::size_t j = 0; j < Ns.size(); ++j) {
      csv += std::to_string(i) + "," + std::to_string(Ns[j]) + "," + format_double(scores[i][j]) + "\n";
      max_by_N[j] = std::max(max_by_N[j], scores[i][j]);
    }
  run.write(a.out, csv);
  const double constant = *std::max_element(max_by_N.begin(), max_by_N.end());
  Json s{{"n", a.n}, {"targets", alphas.size()}, {"N_list", Ns}, {"max_score_by_N", max_by_N},
         {"constant", constant}};
  if (a.n == 1) {
    s["reference"] = 2.0 * std::numbers::sqrt2;
    s["within_reference"] = constant <= 2.0 * std::numbers::sqrt2;
  }
  return s;
}

struct WitnessArgs {
  int n = 1;
  std::string alpha = "random";
  std::uint64_t samples = 1;
  std::string phi = "power:1";
  std::int64_t qmin = 1, qmax = 1000;
  std::string out;
};

Json cmd_witnesses(Run& run, const WitnessArgs& a) {
  run.config() = {{"n", a.n}, {"alpha", a.alpha}, {"samples", a.samples}, {"phi", a.phi},
                  {"qmin", a.qmin}, {"qmax", a.qmax}};
  const auto phi = PhiFunction::parse(a.phi);
  const auto table = run.table(a.n, a.qmax);
  const auto alphas = select_alphas(a.alpha, a.n, a.samples, run.common().seed);
  std::vector<std::vector<ApproxWitness>> res(alphas.size());
  parallel_for(alphas.size(), run.common().threads, [&](std::size_t b, std::size_t e, unsigned) {
    for (std::size_t i = b; i < e; ++i) res[i] = phi_witnesses(alphas[i], table, phi, QRange{a.qmin, a.qmax});
  });
  std::string csv = csv_header("alpha_id", a.n, ",err_sup");
  Json counts = Json::array();
  for (std::size_t i = 0; i < res.size(); ++i) {
    for (const auto& w : res[i]) {
      csv += std::to_string(i) + ",";
      csv_point(csv, w.point.q(), w.point.p());
      csv += "," + format_double(w.err_sup) + "\n";
    }
    counts.push_back(res[i].size());
  }
  run.write(a.out, csv);
  return Json{{"n", a.n}, {"phi", phi.describe()}, {"tags", phi_tags(phi)}, {"witness_counts", counts}};
}

struct OrbitArgs {
  int n = 1;
  std::string alpha = "random";
  std::uint64_t samples = 1;
  double tmax = 5.0;
  std::size_t steps = 100;
  double cap = 0.0;
  std::string phi = "power:1";
  std::string out;
};

Json cmd_orbit(Run& run, const OrbitArgs& a) {
  run.config() = {{"n", a.n}, {"alpha", a.alpha}, {"samples", a.samples}, {"tmax", a.tmax},
                  {"steps", a.steps}, {"cap", a.cap}, {"phi", a.cap > 0.0 ? "" : a.phi}};
  if (!(a.tmax >= 0.0)) throw DomainError("--tmax must be >= 0");
  if (a.steps < 1) throw ContractError("--steps must be >= 1");
  std::optional<RhoFunction> rho;
  if (!(a.cap > 0.0)) rho.emplace(PhiFunction::parse(a.phi), a.n);
  std::vector<double> times, caps;
  std::int64_t depth = 1;
  for (std::size_t i = 0; i <= a.steps; ++i) {
    const double t = a.tmax * static_cast<double>(i) / static_cast<double>(a.steps);
    if (rho && t < rho->t0()) continue;
    const double cap = rho ? (*rho)(t) : a.cap;
    times.push_back(t);
    caps.push_back(cap);
    depth = std::max(depth, omega_depth(t, cap));
  }
  const auto table = run.table(a.n, depth);
  const auto alphas = select_alphas(a.alpha, a.n, a.samples, run.common().seed);
  std::vector<std::vector<OmegaSample>> res(alphas.size());
  parallel_for(alphas.size(), run.common().threads, [&](std::size_t b, std::size_t e, unsigned) {
    for (std::size_t i = b; i < e; ++i)
      for (std::size_t j = 0; j < times.size(); ++j)
        res[i].push_back(omega_capped(alphas[i], times[j], caps[j], table, i));
  });
  std::string csv = "alpha_id,t,omega,cap,q";
  for (int j = 1; j <= a.n + 1; ++j) csv += ",p" + std::to_string(j);
  csv += "\n";
  Json mins = Json::array();
  for (const auto& row : res) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& s : row) {
      append_trace(csv, s, a.n);
      m = std::min(m, s.omega);
    }
    mins.push_back(m);
  }
  run.write(a.out, csv);
  return Json{{"n", a.n}, {"table_depth", depth}, {"times", times.size()}, {"min_omega", mins}};
}

struct DictionaryArgs {
  int n = 1;
  std::string alpha = "random";
  std::uint64_t samples = 10;
  std::string phi = "power:1";
  double tmax = 6.0;
  std::size_t steps = 100;
  std::string out;
};

Json cmd_dictionary(Run& run, const DictionaryArgs& a) {
  run.config() = {{"n", a.n}, {"alpha", a.alpha}, {"samples", a.samples}, {"phi", a.phi},
                  {"tmax", a.tmax}, {"steps", a.steps}};
  const auto phi = PhiFunction::parse(a.phi);
  const RhoFunction rho(phi, a.n);
  const double lo = std::max(rho.t0(), 0.0);
  if (!(a.tmax > lo)) throw DomainError("--tmax must exceed max(t0, 0)");
  if (a.steps < 1) throw ContractError("--steps must be >= 1");
  std::vector<double> grid(a.steps);
  for (std::size_t i = 0; i < a.steps; ++i)
    grid[i] = lo + (a.tmax - lo) * static_cast<double>(i + 1) / static_cast<double>(a.steps);
  const std::int64_t depth = std::max<std::int64_t>(1, omega_depth(a.tmax, rho(a.tmax)));
  const auto table = run.table(a.n, depth);
  const auto alphas = select_alphas(a.alpha, a.n, a.samples, run.common().seed);
  std::vector<DictionaryReport> reps(alphas.size());
  parallel_for(alphas.size(), run.common().threads, [&](std::size_t b, std::size_t e, unsigned) {
    for (std::size_t i = b; i < e; ++i) reps[i] = dictionary_check(alphas[i], phi, table, grid, i);
  });
  DictionaryReport total;
  for (const auto& r : reps) total.merge(r);
  std::string csv = "alpha_id,t,omega,cap,q";
  for (int j = 1; j <= a.n + 1; ++j) csv += ",p" + std::to_string(j);
  csv += "\n";
  for (const auto& s : total.samples) append_trace(csv, s, a.n);
  run.write(a.out, csv);
  return Json{{"n", a.n},
              {"phi", phi.describe()},
              {"tags", phi_tags(phi)},
              {"targets", alphas.size()},
              {"table_depth", depth},
              {"forward", {{"checked", total.forward_checked}, {"violations", total.forward_violations},
                           {"worst_ratio", total.forward_worst}}},
              {"backward", {{"checked", total.backward_checked}, {"violations", total.backward_violations},
                            {"worst_ratio", total.backward_worst}}},
              {"small_vector", {{"checked", total.small_checked}, {"violations", total.small_violations}}},
              {"close_vector", {{"checked", total.close_checked}, {"violations", total.close_violations}}},
              {"violations", total.violations()}};
}

struct KhintchineArgs {
  std::string config;
  int n = 1;
  std::string phi = "power:1";
  std::string window = "1,1000";
  std::uint64_t samples = 1000;
  std::string ladder = "8,18";
  std::int64_t K = 1000;
  std::string f;
  std::string out;
};

Json cmd_khintchine(Run& run, KhintchineArgs a, bool seed_given) {
  ExperimentConfig cfg;
  if (!a.config.empty()) {
    cfg = load_experiment_config(a.config);
    if (seed_given) cfg.seed = run.common().seed;
  } else {
    cfg.n = a.n;
    cfg.phi = a.phi;
    std::tie(cfg.q_lo, cfg.q_hi) = parse_window(a.window);
    cfg.samples = a.samples;
    cfg.seed = run.common().seed;
    const auto l = parse_window(a.ladder);
    cfg.k_lo = static_cast<int>(l.first);
    cfg.k_hi = static_cast<int>(l.second);
  }
  const auto phi = PhiFunction::parse(cfg.phi);
  std::optional<DimensionFunction> f;
  if (!a.f.empty()) f = DimensionFunction::parse(a.f);
  run.config() = {{"config_file", a.config}, {"n", cfg.n}, {"phi", phi.describe()},
                  {"window", {cfg.q_lo, cfg.q_hi}}, {"samples", cfg.samples}, {"seed", cfg.seed},
                  {"ladder", {cfg.k_lo, cfg.k_hi}}, {"K", a.K}, {"f", a.f}};

  const auto table = run.table(cfg.n, cfg.q_hi);
  MCConfig mc;
  mc.n = cfg.n;
  mc.seed = cfg.seed;
  mc.samples = cfg.samples;
  mc.q_lo = cfg.q_lo;
  mc.q_hi = cfg.q_hi;
  mc.phi = phi;
  mc.threads = run.common().threads;
  const auto prop = mc_measure_estimate(mc, table);

  const auto tandem = tandem_classification(phi, cfg.n, a.K);
  Json partials = Json::array();
  const RhoFunction rho(phi, cfg.n);
  for (std::size_t j = 0; j < tandem.times.size(); ++j) {
    const std::int64_t K = a.K << j;
    const auto sp = series_partials(phi, f ? &*f : nullptr, cfg.n, K, tandem.times[j]);
    Json row{{"K", K}, {"khintchine", sp.khintchine}, {"T", tandem.times[j]}, {"rho_integral", sp.rho_integral}};
    if (sp.hausdorff) row["hausdorff"] = *sp.hausdorff;
    partials.push_back(row);
  }

  Json res;
  res["config"] = run.config();
  res["fraction"] = prop.fraction;
  res["ci_low"] = prop.ci_low;
  res["ci_high"] = prop.ci_high;
  res["hits"] = prop.hits;
  res["partial_sums"] = partials;
  res["trend_sum"] = trend_name(tandem.sum.trend);
  res["trend_rho_integral"] = trend_name(tandem.integral.trend);
  res["tandem_agree"] = tandem.agree();
  res["tags"] = phi_tags(phi);
  if (cfg.n == 1) {
    const auto box = boxcount_dimension(phi, table, cfg.q_lo, cfg.q_hi, cfg.k_lo, cfg.k_hi);
    res["slope"] = box.slope;
    res["residual"] = box.residual;
  } else {
    res["slope"] = nullptr;
    res["residual"] = nullptr;
  }
  run.write(a.out, dump_json(res) + "\n");
  return res;
}

struct DimensionArgs {
  std::string phi = "power:2";
  std::string window = "100,100000";
  std::string ladder = "8,18";
  std::string f;
  std::string out;
};

Json cmd_dimension(Run& run, const DimensionArgs& a) {
  run.config() = {{"phi", a.phi}, {"window", a.window}, {"ladder", a.ladder}, {"f", a.f}};
  const auto phi = PhiFunction::parse(a.phi);
  const auto [q_lo, q_hi] = parse_window(a.window);
  const auto [k_lo, k_hi] = parse_window(a.ladder);
  const auto table = run.table(1, q_hi);
  BoxCountResult box;
  if (a.f.empty()) {
    box = boxcount_dimension(phi, table, q_lo, q_hi, static_cast<int>(k_lo), static_cast<int>(k_hi));
  } else {
    std::vector<Ball> balls;
    for (std::int64_t q = q_lo; q <= q_hi; ++q) {
      const double qd = static_cast<double>(q);
      if (!phi.in_domain(qd)) continue;
      for (std::size_t i = table.bucket_begin(q); i < table.bucket_end(q); ++i) {
        const auto p = table.p(i);
        balls.push_back(Ball{{static_cast<double>(p[0]) / qd, static_cast<double>(p[1]) / qd}, phi(qd)});
      }
    }
    box = boxcount_balls(ball_transform(balls, DimensionFunction::parse(a.f), 1), static_cast<int>(k_lo),
                         static_cast<int>(k_hi));
  }
  Json res{{"config", run.config()}, {"levels", box.levels}, {"counts", box.counts}, {"balls", box.balls},
           {"slope", box.slope}, {"intercept", box.intercept}, {"residual", box.residual}};
  run.write(a.out, dump_json(res) + "\n");
  return res;
}

struct BaArgs {
  int n = 1;
  std::string alpha = "golden";
  std::uint64_t samples = 1;
  std::string Nlist = "100,1000,10000";
  std::string out;
};

Json cmd_ba(Run& run, const BaArgs& a) {
  const auto Ns = parse_int_list(a.Nlist);
  run.config() = {{"n", a.n}, {"alpha", a.alpha}, {"samples", a.samples}, {"N_list", Ns}};
  const auto table = run.table(a.n, *std::max_element(Ns.begin(), Ns.end()));
  const auto alphas = select_alphas(a.alpha, a.n, a.samples, run.common().seed);
  std::vector<std::vector<double>> scores(alphas.size(), std::vector<double>(Ns.size()));
  parallel_for(alphas.size(), run.common().threads, [&](std::size_t b, std::size_t e, unsigned) {
    for (std::size_t i = b; i < e; ++i)
      for (std::size_t j = 0; j < Ns.size(); ++j) scores[i][j] = ba_score(alphas[i], table, Ns[j]);
  });
  std::string csv = "alpha_id,N,score\n";
  Json per = Json::array();
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    for (std::size_t j = 0; j < Ns.size(); ++j)
      csv += std::to_string(i) + "," + std::to_string(Ns[j]) + "," + format_double(scores[i][j]) + "\n";
    const double lo = *std::min_element(scores[i].begin(), scores[i].end());
    const double hi = *std::max_element(scores[i].begin(), scores[i].end());
    if (per.size() < 20)
      per.push_back(Json{{"alpha_id", i}, {"scores", scores[i]}, {"min_over_max", hi > 0.0 ? lo / hi : 0.0}});
  }
  run.write(a.out, csv);
  return Json{{"n", a.n}, {"N_list", Ns}, {"targets", per}};
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, int depth);

int cmd_replay(const std::string& manifest_path, std::ostream& out, std::ostream& err, int depth) {
  if (depth > 0) throw ContractError("a replay manifest cannot itself describe a replay");
  std::ifstream f(manifest_path);
  if (!f) throw ContractError("cannot open manifest " + manifest_path);
  const Json m = Json::parse(f);
  const auto argv = m.at("argv").get<std::vector<std::string>>();
  std::ostringstream sink;
  const int code = dispatch(argv, sink, err, depth + 1);
  if (code != 0) return code;
  bool identical = true;
  Json outputs = Json::array();
  for (const auto& o : m.at("outputs")) {
    const auto path = o.at("path").get<std::string>();
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    const bool same = hex64(fnv1a64(ss.str())) == o.at("fnv1a64").get<std::string>();
    identical = identical && same;
    outputs.push_back(Json{{"path", path}, {"identical", same}});
  }
  out << dump_json(Json{{"replayed", m.at("command")}, {"identical", identical}, {"outputs", outputs}}) << '\n';
  return identical ? 0 : 4;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, int depth) {
  CLI::App app{"Intrinsic Diophantine approximation on spheres: tables, scores, orbits, experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Common common;
  std::function<Json(Run&)> action;
  std::string replay_manifest;
  std::string command;

  const auto sub = [&](const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    add_common(s, common);
    return s;
  };

  PointsArgs pa;
  {
    auto* s = sub("points", "Enumerate primitive rational points with q <= N");
    s->add_option("--n", pa.n, "Sphere dimension")->required()->check(CLI::PositiveNumber);
    s->add_option("--N", pa.N, "Largest denominator")->required()->check(CLI::PositiveNumber);
    s->add_option("--out", pa.out, "CSV output q,p1,...");
    s->callback([&] { action = [&](Run& r) { return cmd_points(r, pa); }; });
  }
  ApproxArgs aa;
  {
    auto* s = sub("approx", "Best sup-norm approximant with q <= N");
    s->add_option("--n", aa.n)->required()->check(CLI::PositiveNumber);
    s->add_option("--N", aa.N)->required()->check(CLI::PositiveNumber);
    s->add_option("--alpha", aa.alpha, "random | golden | liouville | x1,x2,...[;...]")->capture_default_str();
    s->add_option("--samples", aa.samples, "Targets when --alpha random")->capture_default_str();
    s->add_option("--out", aa.out, "CSV output alpha_id,q,p...,err_sup");
    s->callback([&] { action = [&](Run& r) { return cmd_approx(r, aa); }; });
  }
  DirichletArgs da;
  {
    auto* s = sub("dirichlet", "Dirichlet scores min_q |alpha - p/q| sqrt(qN)");
    s->add_option("--n", da.n)->required()->check(CLI::PositiveNumber);
    s->add_option("--samples", da.samples)->capture_default_str();
    s->add_option("--Nmax", da.Nmax, "Decades 10, 100, ... up to Nmax")->capture_default_str();
    s->add_option("--Nlist", da.Nlist, "Explicit comma-separated N values");
    s->add_option("--alpha", da.alpha)->capture_default_str();
    s->add_option("--out", da.out, "CSV output alpha_id,N,score");
    s->callback([&] { action = [&](Run& r) { return cmd_dirichlet(r, da); }; });
  }
  WitnessArgs wa;
  {
    auto* s = sub("witnesses", "All p/q with q in range and |alpha - p/q| < phi(q)");
    s->add_option("--n", wa.n)->required()->check(CLI::PositiveNumber);
    s->add_option("--alpha", wa.alpha)->capture_default_str();
    s->add_option("--samples", wa.samples)->capture_default_str();
    s->add_option("--phi", wa.phi, "power:<tau>[:scale] | logpow:<s> | table:<path>")->capture_default_str();
    s->add_option("--qmin", wa.qmin)->capture_default_str();
    s->add_option("--qmax", wa.qmax)->capture_default_str();
    s->add_option("--out", wa.out, "CSV output alpha_id,q,p...,err_sup");
    s->callback([&] { action = [&](Run& r) { return cmd_witnesses(r, wa); }; });
  }
  OrbitArgs oa;
  {
    auto* s = sub("orbit", "Capped omega along the flowed orbit");
    s->add_option("--n", oa.n)->required()->check(CLI::PositiveNumber);
    s->add_option("--alpha", oa.alpha)->capture_default_str();
    s->add_option("--samples", oa.samples)->capture_default_str();
    s->add_option("--tmax", oa.tmax)->capture_default_str();
    s->add_option("--steps", oa.steps)->capture_default_str();
    s->add_option("--cap", oa.cap, "Constant cap (default: rho(t) from --phi)");
    s->add_option("--phi", oa.phi)->capture_default_str();
    s->add_option("--out", oa.out, "CSV trace alpha_id,t,omega,cap,q,p...");
    s->callback([&] { action = [&](Run& r) { return cmd_orbit(r, oa); }; });
  }
  DictionaryArgs dia;
  {
    auto* s = sub("dictionary", "Instance checks of the approximation / short vector correspondence");
    s->add_option("--n", dia.n)->required()->check(CLI::PositiveNumber);
    s->add_option("--alpha", dia.alpha)->capture_default_str();
    s->add_option("--samples", dia.samples)->capture_default_str();
    s->add_option("--phi", dia.phi)->capture_default_str();
    s->add_option("--tmax", dia.tmax)->capture_default_str();
    s->add_option("--steps", dia.steps)->capture_default_str();
    s->add_option("--out", dia.out, "CSV trace of the backward samples");
    s->callback([&] { action = [&](Run& r) { return cmd_dictionary(r, dia); }; });
  }
  KhintchineArgs ka;
  bool seed_given = false;
  {
    auto* s = sub("khintchine", "Monte Carlo measure, series partials and tandem classification");
    s->add_option("--config", ka.config, "key = value experiment file");
    s->add_option("--n", ka.n)->capture_default_str();
    s->add_option("--phi", ka.phi)->capture_default_str();
    s->add_option("--window", ka.window, "q window lo,hi")->capture_default_str();
    s->add_option("--samples", ka.samples)->capture_default_str();
    s->add_option("--ladder", ka.ladder, "box levels lo,hi (n = 1)")->capture_default_str();
    s->add_option("--K", ka.K, "Series cut-off; partials at K, 2K, 4K, 8K")->capture_default_str();
    s->add_option("--f", ka.f, "Dimension function power:<s> | table:<path>");
    s->add_option("--out", ka.out, "Results JSON");
    s->callback([&, s] {
      seed_given = s->count("--seed") > 0;
      action = [&](Run& r) { return cmd_khintchine(r, ka, seed_given); };
    });
  }
  DimensionArgs dma;
  {
    auto* s = sub("dimension", "Box-counting slope of a finite union of arcs on the circle");
    s->add_option("--phi", dma.phi)->capture_default_str();
    s->add_option("--window", dma.window)->capture_default_str();
    s->add_option("--ladder", dma.ladder)->capture_default_str();
    s->add_option("--f", dma.f, "Transform radii r -> f(r) before counting");
    s->add_option("--out", dma.out, "Results JSON");
    s->callback([&] { action = [&](Run& r) { return cmd_dimension(r, dma); }; });
  }
  BaArgs ba;
  {
    auto* s = sub("ba-scan", "Badly approximable scores min_q q |alpha - p/q|");
    s->add_option("--n", ba.n)->capture_default_str();
    s->add_option("--alpha", ba.alpha)->capture_default_str();
    s->add_option("--samples", ba.samples)->capture_default_str();
    s->add_option("--Nlist", ba.Nlist)->capture_default_str();
    s->add_option("--out", ba.out, "CSV output alpha_id,N,score");
    s->callback([&] { action = [&](Run& r) { return cmd_ba(r, ba); }; });
  }
  {
    auto* s = sub("replay", "Re-run a manifest and compare artifact digests");
    s->add_option("--manifest-file", replay_manifest, "Manifest to replay")->required();
    s->callback([&] { command = "replay"; });
  }

  std::vector<const char*> cargv{"sphere"};
  for (const auto& a : args) cargv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  if (command == "replay") return cmd_replay(replay_manifest, out, err, depth);
  Run run(app.get_subcommands().front()->get_name(), args, common);
  const Json summary = action(run);
  run.finish();
  out << dump_json(summary) << '\n';
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err, 0);
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const BudgetError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace sphere
