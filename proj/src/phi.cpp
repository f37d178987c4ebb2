#include "sphere/phi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "sphere/errors.hpp"

namespace sphere {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double parse_number(const std::string& s, const std::string& context) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ContractError("cannot parse number '" + s + "' in " + context);
  }
}

// Two-column numeric file, whitespace or comma separated, '#' comments.
void read_columns(const std::string& path, std::vector<double>& a, std::vector<double>& b) {
  std::ifstream in(path);
  if (!in) throw ContractError("cannot open table file " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double x, y;
    if (!(ls >> x)) continue;
    if (!(ls >> y)) throw ContractError("table row needs two columns: " + line);
    a.push_back(x);
    b.push_back(y);
  }
}

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  if (it == xs.end()) return ys.back();
  const std::size_t i = static_cast<std::size_t>(it - xs.begin());
  if (i == 0) return ys.front();
  const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return ys[i - 1] + w * (ys[i] - ys[i - 1]);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

PhiFunction PhiFunction::power(double tau) { return scaled_power(1.0, tau); }

PhiFunction PhiFunction::scaled_power(double scale, double tau) {
  if (!(scale > 0.0)) throw ContractError("phi scale must be positive");
  if (!(tau > 0.0)) throw ContractError("phi exponent must be positive");
  PhiFunction f;
  f.kind_ = scale == 1.0 ? Kind::Power : Kind::ScaledPower;
  f.scale_ = scale;
  f.exponent_ = tau;
  f.x0_ = 1.0;
  return f;
}

PhiFunction PhiFunction::log_power(double s) {
  if (!(s >= 0.0)) throw ContractError("log-power exponent must be nonnegative");
  PhiFunction f;
  f.kind_ = Kind::LogPower;
  f.exponent_ = s;
  f.x0_ = 2.0;
  return f;
}

PhiFunction PhiFunction::tabulated(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() < 2 || xs.size() != ys.size())
    throw ContractError("tabulated phi needs at least two (x, y) nodes");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(ys[i] > 0.0)) throw ContractError("tabulated phi must be positive");
    if (i > 0 && !(xs[i] > xs[i - 1])) throw ContractError("tabulated phi nodes must increase");
  }
  PhiFunction f;
  f.kind_ = Kind::Tabulated;
  f.x0_ = xs.front();
  f.xs_ = std::move(xs);
  f.ys_ = std::move(ys);
  return f;
}

PhiFunction PhiFunction::parse(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() >= 2 && parts[0] == "power" && parts.size() <= 3) {
    const double tau = parse_number(parts[1], spec);
    const double scale = parts.size() == 3 ? parse_number(parts[2], spec) : 1.0;
    return scaled_power(scale, tau);
  }
  if (parts.size() == 2 && parts[0] == "logpow") return log_power(parse_number(parts[1], spec));
  if (parts.size() >= 2 && parts[0] == "table") {
    const std::string path = spec.substr(6);
    std::vector<double> xs, ys;
    read_columns(path, xs, ys);
    auto f = tabulated(std::move(xs), std::move(ys));
    f.source_ = path;
    return f;
  }
  throw ContractError("unrecognised phi specification '" + spec + "'");
}

double PhiFunction::x_max() const {
  return kind_ == Kind::Tabulated ? xs_.back() : std::numeric_limits<double>::infinity();
}

double PhiFunction::operator()(double x) const {
  if (!(x >= x0_) || x > x_max())
    throw DomainError("phi evaluated outside its domain at x = " + fmt(x));
  switch (kind_) {
    case Kind::Power:
    case Kind::ScaledPower:
      return scale_ * std::pow(x, -exponent_);
    case Kind::LogPower:
      return 1.0 / (x * std::pow(std::log(x), exponent_));
    case Kind::Tabulated:
      return interpolate(xs_, ys_, x);
  }
  return 0.0;
}

double PhiFunction::inverse(double y) const {
  if (!(y > 0.0)) throw DomainError("phi inverse needs a positive argument");
  switch (kind_) {
    case Kind::Power:
    case Kind::ScaledPower: {
      const double x = std::pow(scale_ / y, 1.0 / exponent_);
      if (x < x0_ * (1.0 - 1e-12)) throw DomainError("phi inverse below the domain start");
      return std::max(x, x0_);
    }
    case Kind::LogPower: {
      const double top = (*this)(x0_);
      if (y > top * (1.0 + 1e-12)) throw DomainError("phi inverse below the domain start");
      if (y >= top) return x0_;
      // Bracket in log x, then a bracketing solver on the decreasing function.
      double lo = std::log(x0_), hi = lo + 1.0;
      auto g = [&](double lx) { return -lx - exponent_ * std::log(lx) - std::log(y); };
      while (g(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 700.0) throw DomainError("phi inverse overflows double range");
      }
      std::uintmax_t iters = 200;
      auto r = boost::math::tools::toms748_solve(g, lo, hi, boost::math::tools::eps_tolerance<double>(52),
                                                 iters);
      return std::exp(0.5 * (r.first + r.second));
    }
    case Kind::Tabulated: {
      if (y > *std::max_element(ys_.begin(), ys_.end()))
        throw DomainError("phi inverse: value above the tabulated range");
      if (ys_.back() >= y) throw CoverageError("phi inverse reaches past the tabulated domain");
      std::size_t i = ys_.size() - 1;
      while (ys_[i] < y) --i;
      const double w = (ys_[i] - y) / (ys_[i] - ys_[i + 1]);
      return xs_[i] + w * (xs_[i + 1] - xs_[i]);
    }
  }
  return 0.0;
}

PhiFunction::Regularity PhiFunction::regularity(double x_hi, int samples) const {
  Regularity r{true, true};
  const double hi = std::min(x_hi, x_max());
  const double ratio = std::pow(hi / x0_, 1.0 / samples);
  double prev_x = x0_, prev = (*this)(x0_);
  for (int i = 1; i <= samples; ++i) {
    const double x = i == samples ? hi : x0_ * std::pow(ratio, i);
    const double v = (*this)(x);
    if (!(v < prev)) r.decreasing = false;
    if (x * v > prev_x * prev * (1.0 + 1e-12)) r.x_phi_nonincreasing = false;
    prev_x = x;
    prev = v;
  }
  return r;
}

std::string PhiFunction::describe() const {
  switch (kind_) {
    case Kind::Power:
      return "power:" + fmt(exponent_);
    case Kind::ScaledPower:
      return "power:" + fmt(exponent_) + ":" + fmt(scale_);
    case Kind::LogPower:
      return "logpow:" + fmt(exponent_);
    case Kind::Tabulated:
      return "table:" + (source_.empty() ? std::string("<inline>") : source_);
  }
  return {};
}

DimensionFunction DimensionFunction::power(double s) {
  if (!(s > 0.0)) throw ContractError("dimension exponent must be positive");
  DimensionFunction f;
  f.kind_ = Kind::Power;
  f.exponent_ = s;
  return f;
}

DimensionFunction DimensionFunction::tabulated(std::vector<double> rs, std::vector<double> fs) {
  if (rs.empty() || rs.size() != fs.size())
    throw ContractError("tabulated dimension function needs matching nodes");
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (!(rs[i] > 0.0) || !(fs[i] > 0.0))
      throw ContractError("tabulated dimension function nodes must be positive");
    if (i > 0 && (!(rs[i] > rs[i - 1]) || !(fs[i] > fs[i - 1])))
      throw ContractError("tabulated dimension function must be increasing");
  }
  DimensionFunction f;
  f.kind_ = Kind::Tabulated;
  f.rs_.push_back(0.0);
  f.fs_.push_back(0.0);
  f.rs_.insert(f.rs_.end(), rs.begin(), rs.end());
  f.fs_.insert(f.fs_.end(), fs.begin(), fs.end());
  return f;
}

DimensionFunction DimensionFunction::parse(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() == 2 && parts[0] == "power") return power(parse_number(parts[1], spec));
  if (parts.size() >= 2 && parts[0] == "table") {
    std::vector<double> rs, fs;
    read_columns(spec.substr(6), rs, fs);
    return tabulated(std::move(rs), std::move(fs));
  }
  throw ContractError("unrecognised dimension function '" + spec + "'");
}

double DimensionFunction::operator()(double r) const {
  if (!(r > 0.0)) throw DomainError("dimension function needs r > 0");
  if (kind_ == Kind::Power) return std::pow(r, exponent_);
  if (r > rs_.back()) throw DomainError("dimension function evaluated past its last node");
  return interpolate(rs_, fs_, r);
}

double DimensionFunction::inverse(double y) const {
  if (!(y > 0.0)) throw DomainError("dimension function inverse needs y > 0");
  if (kind_ == Kind::Power) return std::pow(y, 1.0 / exponent_);
  if (y > fs_.back()) throw DomainError("dimension function inverse past its last node");
  return interpolate(fs_, rs_, y);
}

DimensionFunction DimensionFunction::transform_inverse(int n) const {
  if (n < 1) throw ContractError("dimension must be >= 1");
  if (kind_ == Kind::Power) return power(static_cast<double>(n) * n / exponent_);
  std::vector<double> sigma, g;
  for (std::size_t i = 1; i < rs_.size(); ++i) {
    sigma.push_back(std::pow(fs_[i], 1.0 / n));
    g.push_back(std::pow(rs_[i], n));
  }
  return tabulated(std::move(sigma), std::move(g));
}

bool DimensionFunction::check_shape() const {
  const double hi = kind_ == Kind::Power ? 1.0 : rs_.back();
  double prev = 0.0;
  for (int i = 1; i <= 1000; ++i) {
    const double r = hi * std::pow(1e-8, 1.0 - i / 1000.0);
    const double v = (*this)(r);
    if (!(v > prev) || !std::isfinite(v)) return false;
    prev = v;
  }
  return (*this)(hi * 1e-100) < 1e-6 * (*this)(hi);
}

std::string DimensionFunction::describe() const {
  return kind_ == Kind::Power ? "power:" + fmt(exponent_) : std::string("table");
}

}  // namespace sphere
