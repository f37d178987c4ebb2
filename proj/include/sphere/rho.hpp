#pragma once

// Flow-side radius rho(t) = e^{-t} phi^{-1}(2 / (sqrt(n+1) e^t)) on [t0, inf),
// t0 = ln(2 / (sqrt(n+1) phi(x0))).

#include "sphere/phi.hpp"

namespace sphere {

class RhoFunction {
 public:
  RhoFunction(PhiFunction phi, int n);

  const PhiFunction& phi() const { return phi_; }
  int n() const { return n_; }
  double t0() const { return t0_; }

  // Throws DomainError for t < t0.
  double operator()(double t) const;

  // t_q = ln(2 / (sqrt(n+1) phi(q))); rho(t_q) = sqrt(n+1) q phi(q) / 2.
  double t_of(double q) const;

  // e^t rho(t) = phi^{-1}(2 / (sqrt(n+1) e^t)): the largest denominator that
  // can produce a flowed vector shorter than rho(t).
  double depth(double t) const;

  // Sampled non-increase on an increasing grid.
  bool non_increasing_on(const std::vector<double>& grid) const;

 private:
  PhiFunction phi_;
  int n_;
  double root_;  // sqrt(n + 1)
  double t0_;
};

double rho_from_phi(const PhiFunction& phi, int n, double t);

}  // namespace sphere
