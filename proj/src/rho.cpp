#include "sphere/rho.hpp"

#include <cmath>

#include "sphere/errors.hpp"

namespace sphere {

RhoFunction::RhoFunction(PhiFunction phi, int n)
    : phi_(std::move(phi)), n_(n), root_(std::sqrt(n + 1.0)) {
  if (n < 1) throw ContractError("n must be >= 1");
  t0_ = std::log(2.0 / (root_ * phi_(phi_.x0())));
}

double RhoFunction::depth(double t) const {
  if (!(t >= t0_)) throw DomainError("rho evaluated below t0");
  return phi_.inverse(2.0 / (root_ * std::exp(t)));
}

double RhoFunction::operator()(double t) const { return std::exp(-t) * depth(t); }

double RhoFunction::t_of(double q) const { return std::log(2.0 / (root_ * phi_(q))); }

bool RhoFunction::non_increasing_on(const std::vector<double>& grid) const {
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw ContractError("rho grid must be increasing");
    const double a = (*this)(grid[i - 1]), b = (*this)(grid[i]);
    if (b > a * (1.0 + 1e-12)) return false;
  }
  return true;
}

double rho_from_phi(const PhiFunction& phi, int n, double t) { return RhoFunction(phi, n)(t); }

}  // namespace sphere
