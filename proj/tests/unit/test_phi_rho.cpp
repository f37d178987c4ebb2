#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "sphere/errors.hpp"
#include "sphere/phi.hpp"
#include "sphere/rho.hpp"

using namespace sphere;

TEST_SUITE("phi_rho") {

TEST_CASE("phi families") {
  const auto p = PhiFunction::parse("power:1.5");
  CHECK(p(4.0) == doctest::Approx(0.125));
  CHECK(p.inverse(0.125) == doctest::Approx(4.0));
  const auto s = PhiFunction::parse("power:1:0.3");
  CHECK(s(10.0) == doctest::Approx(0.03));
  CHECK(s.describe() == "power:1:0.29999999999999999");
  const auto l = PhiFunction::parse("logpow:2");
  CHECK(l.x0() == 2.0);
  CHECK(l(std::exp(1.0) * 10) == doctest::Approx(1.0 / (std::exp(1.0) * 10 * std::pow(1.0 + std::log(10.0), 2))));
  for (double x : {2.0, 3.0, 17.5, 1e4, 1e9}) CHECK(l.inverse(l(x)) == doctest::Approx(x).epsilon(1e-10));
  CHECK_THROWS_AS(l.inverse(5.0), DomainError);
  CHECK_THROWS_AS(p(0.5), DomainError);
  CHECK_THROWS_AS(PhiFunction::parse("exp:1"), ContractError);
  CHECK_THROWS_AS(PhiFunction::parse("power:-1"), ContractError);
}

TEST_CASE("tabulated phi uses the generalised inverse") {
  const auto path = std::filesystem::temp_directory_path() / "sphere-phi-table.csv";
  {
    std::ofstream f(path);
    f << "# x, phi\n1, 1\n2, 0.5\n4, 0.5\n8, 0.1\n";
  }
  const auto t = PhiFunction::parse("table:" + path.string());
  CHECK(t(3.0) == doctest::Approx(0.5));
  CHECK(t(6.0) == doctest::Approx(0.3));
  // flat stretch: sup{x : phi(x) >= 0.5} = 4
  CHECK(t.inverse(0.5) == doctest::Approx(4.0));
  CHECK(t.inverse(0.3) == doctest::Approx(6.0));
  CHECK_THROWS_AS(t.inverse(0.05), CoverageError);
  CHECK_THROWS_AS(t.inverse(2.0), DomainError);
  CHECK_FALSE(t.regularity(8.0, 100).decreasing);
  std::filesystem::remove(path);
}

TEST_CASE("regularity tags") {
  CHECK(PhiFunction::power(1.0).regularity().x_phi_nonincreasing);
  CHECK(PhiFunction::power(2.0).regularity().decreasing);
  CHECK_FALSE(PhiFunction::power(0.5).regularity().x_phi_nonincreasing);
  CHECK(PhiFunction::log_power(1.0).regularity().x_phi_nonincreasing);
}

TEST_CASE("rho at the mapped times") {
  for (int n = 1; n <= 4; ++n)
    for (const char* spec : {"power:1", "power:1.2", "power:1:0.3", "power:2", "logpow:1"}) {
      const auto phi = PhiFunction::parse(spec);
      const RhoFunction rho(phi, n);
      double worst = 0.0;
      for (int q = static_cast<int>(std::ceil(phi.x0())); q <= 10000; ++q) {
        const double want = std::sqrt(n + 1.0) * q * phi(q) / 2.0;
        worst = std::max(worst, std::abs(rho(rho.t_of(q)) - want) / want);
      }
      CHECK(worst <= 1e-9);
    }
}

TEST_CASE("rho examples") {
  // (eps / sqrt(n+1)) phi_1 gives a constant eps / 2
  for (int n = 1; n <= 3; ++n) {
    const double eps = 0.37;
    const RhoFunction rho(PhiFunction::scaled_power(eps / std::sqrt(n + 1.0), 1.0), n);
    for (double t = rho.t0(); t < 30.0; t += 0.7) CHECK(rho(t) == doctest::Approx(eps / 2).epsilon(1e-12));
  }
  const RhoFunction rho3(PhiFunction::power(1.0), 3);
  CHECK(rho3(rho3.t_of(10.0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(rho3(rho3.t0() - 0.1), DomainError);
  CHECK(rho_from_phi(PhiFunction::power(1.0), 3, rho3.t_of(10.0)) == doctest::Approx(1.0));
}

TEST_CASE("rho is non-increasing on fine grids") {
  for (int n = 1; n <= 3; ++n)
    for (const char* spec : {"power:1", "power:1.1", "power:1.5", "power:2", "logpow:0.5", "power:1:0.3"}) {
      const RhoFunction rho(PhiFunction::parse(spec), n);
      std::vector<double> grid;
      for (int i = 0; i < 1000; ++i) grid.push_back(rho.t0() + 40.0 * i / 999.0);
      CHECK(rho.non_increasing_on(grid));
      double prev = rho(grid.front());
      for (double t : grid) {
        CHECK(rho(t) <= prev * (1 + 1e-14));
        prev = rho(t);
      }
    }
}

TEST_CASE("depth inverts the mapped times") {
  const RhoFunction rho(PhiFunction::power(1.5), 2);
  for (double q : {1.0, 10.0, 1234.0, 1e6}) CHECK(rho.depth(rho.t_of(q)) == doctest::Approx(q).epsilon(1e-10));
}

TEST_CASE("dimension functions") {
  const auto f = DimensionFunction::parse("power:0.5");
  CHECK(f(0.25) == doctest::Approx(0.5));
  CHECK(f.inverse(0.5) == doctest::Approx(0.25));
  CHECK(f.check_shape());
  const auto g = f.transform_inverse(2);
  // r -> f(r)^{1/2} -> g(.)^{1/2} is the identity
  for (double r : {1e-6, 0.01, 0.3}) CHECK(std::pow(g(std::pow(f(r), 0.5)), 0.5) == doctest::Approx(r).epsilon(1e-12));
  CHECK_THROWS_AS(DimensionFunction::power(-1.0), ContractError);
  CHECK_THROWS_AS(f(0.0), DomainError);
  const auto t = DimensionFunction::tabulated({0.1, 1.0}, {0.2, 1.0});
  CHECK(t(0.05) == doctest::Approx(0.1));
  CHECK(t.inverse(0.6) == doctest::Approx(0.55));
}

}
