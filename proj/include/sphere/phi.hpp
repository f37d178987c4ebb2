#pragma once

// Approximation rates phi and Hausdorff dimension functions f.

#include <string>
#include <vector>

namespace sphere {

// phi on [x0, inf):
//   power        x^-tau                 (x0 = 1)
//   scaled power c x^-tau               (x0 = 1)
//   log power    x^-1 (log x)^-s        (x0 = 2)
//   tabulated    piecewise linear through (x_i, y_i), x0 = x_0
class PhiFunction {
 public:
  enum class Kind { Power, ScaledPower, LogPower, Tabulated };

  static PhiFunction power(double tau);
  static PhiFunction scaled_power(double scale, double tau);
  static PhiFunction log_power(double s);
  static PhiFunction tabulated(std::vector<double> xs, std::vector<double> ys);

  // Flag grammar: "power:<tau>[:scale]", "logpow:<s>", "table:<path>".
  static PhiFunction parse(const std::string& spec);

  Kind kind() const { return kind_; }
  double x0() const { return x0_; }
  // Upper end of the domain (infinite unless tabulated).
  double x_max() const;
  double scale() const { return scale_; }
  double exponent() const { return exponent_; }

  double operator()(double x) const;

  // Generalised inverse sup{x >= x0 : phi(x) >= y}. Throws DomainError when
  // the set is empty (y > phi(x0)) and CoverageError when it would reach past
  // the end of a tabulated domain.
  double inverse(double y) const;

  // phi(q) < value for a witness test; phi is only evaluated inside the domain.
  bool in_domain(double x) const { return x >= x0_ && x <= x_max(); }

  struct Regularity {
    bool decreasing = false;            // strictly decreasing on the sample grid
    bool x_phi_nonincreasing = false;   // k -> k phi(k) non-increasing
  };
  // Checked on a geometric sample grid over [x0, x_hi].
  Regularity regularity(double x_hi = 1e6, int samples = 2000) const;

  std::string describe() const;

 private:
  PhiFunction() = default;

  Kind kind_ = Kind::Power;
  double scale_ = 1.0;
  double exponent_ = 1.0;  // tau for power kinds, s for log power
  double x0_ = 1.0;
  std::vector<double> xs_, ys_;
  std::string source_;
};

// f: (0, inf) -> (0, inf), increasing, continuous, f(0+) = 0.
//   power      r^s
//   tabulated  piecewise linear through (0, 0) and (r_i, f_i); power-law
//              extension r^s_last beyond the last node is not attempted.
class DimensionFunction {
 public:
  enum class Kind { Power, Tabulated };

  static DimensionFunction power(double s);
  static DimensionFunction tabulated(std::vector<double> rs, std::vector<double> fs);
  // "power:<s>" or "table:<path>".
  static DimensionFunction parse(const std::string& spec);

  Kind kind() const { return kind_; }
  double exponent() const { return exponent_; }
  double operator()(double r) const;
  double inverse(double y) const;

  // The dimension function g with g(f(r)^{1/n})^{1/n} = r, i.e. the one whose
  // ball transform undoes this one's in dimension n.
  DimensionFunction transform_inverse(int n) const;

  // Increasing, continuous and vanishing at 0 on a sample grid.
  bool check_shape() const;

  std::string describe() const;

 private:
  DimensionFunction() = default;

  Kind kind_ = Kind::Power;
  double exponent_ = 1.0;
  std::vector<double> rs_, fs_;
};

}  // namespace sphere
