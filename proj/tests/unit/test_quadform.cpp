#include <cmath>
#include <random>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "doctest.h"
#include "sphere/errors.hpp"
#include "sphere/quadform.hpp"
#include "sphere/rational_points.hpp"

using namespace sphere;
using Dec = boost::multiprecision::cpp_dec_float_50;

TEST_SUITE("quadform") {

TEST_CASE("cone vectors have exactly zero form") {
  for (int n = 1; n <= 3; ++n) {
    const QuadraticSpace space(n);
    const auto table = enumerate_points(n, 40);
    for (std::size_t i = 0; i < table.size(); ++i) {
      const auto w = table.point(i).point();
      CHECK(eval_form(space, w.lift()) == 0);
      CHECK(w.is_primitive());
    }
  }
}

TEST_CASE("off-cone vectors are rejected") {
  CHECK_THROWS_AS(ConeVector({1, 1}, 1), ContractError);
  CHECK_NOTHROW(ConeVector({3, 4}, 5));
  CHECK_FALSE(ConeVector({6, 8}, 10).is_primitive());
}

TEST_CASE("exact form survives values past double precision") {
  const std::int64_t big = 3'000'000'000LL;
  const ConeVector w({3 * big, 4 * big}, 5 * big);
  CHECK(eval_form(QuadraticSpace(1), w.lift()) == 0);
}

TEST_CASE("cone_norms matches direct norms on scaled cone vectors") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> scale(-1e3, 1e3);
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n) {
    const QuadraticSpace space(n);
    const auto table = enumerate_points(n, 25);
    const int reps = 1'000'000 / 3 + 1;
    for (int r = 0; r < reps; ++r) {
      const auto& p = table.point(static_cast<std::size_t>(r) % table.size());
      const double s = scale(rng);
      RealVector v;
      for (auto c : p.p()) v.push_back(s * static_cast<double>(c));
      v.push_back(s * static_cast<double>(p.q()));
      const auto fast = cone_norms(space, AmbientVector(v));
      const auto direct = norms(v);
      worst = std::max({worst, std::abs(fast.sup - direct.sup) / direct.sup,
                        std::abs(fast.euclid - direct.euclid) / direct.euclid});
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("cone_norms refuses vectors off the cone") {
  const QuadraticSpace space(1);
  CHECK_THROWS_AS(cone_norms(space, AmbientVector(RealVector{1.0, 0.0, 2.0})), PreconditionError);
  CHECK_THROWS_AS(cone_norms(space, AmbientVector(IntVector{1, 1, 1})), PreconditionError);
}

TEST_CASE("norm sandwich") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int n = 1; n <= 5; ++n)
    for (int k = 0; k < 10000; ++k) {
      std::vector<double> d(static_cast<std::size_t>(n) + 1);
      for (auto& c : d) c = g(rng) * std::pow(10.0, g(rng));
      const auto nn = norms(d);
      CHECK(nn.sup <= nn.euclid);
      CHECK(nn.euclid <= std::sqrt(n + 1.0) * nn.sup);
    }
}

TEST_CASE("squared_distance agrees with a 50-digit evaluation") {
  const auto table = enumerate_points(2, 300);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 2000; ++k) {
    const auto i = rng() % table.size();
    const auto p = table.p(i);
    const auto q = table.q(i);
    // alpha a tiny perturbation of p/q, renormalised
    std::vector<double> a;
    for (auto c : p) a.push_back(static_cast<double>(c) / static_cast<double>(q) + 1e-9 * ((rng() % 3) - 1.0));
    const auto alpha = SpherePoint::normalized(a);
    Dec ref = 0;
    for (std::size_t j = 0; j < p.size(); ++j) {
      const Dec d = Dec(alpha[j]) - Dec(p[j]) / Dec(q);
      ref += d * d;
    }
    const double got = squared_distance(alpha.alpha(), p, q);
    const double want = ref.convert_to<double>();
    // each coordinate difference carries one rounding of order 2^-53
    CHECK(std::abs(std::sqrt(got) - std::sqrt(want)) <= std::sqrt(3.0) * 2.5e-16);
  }
}

TEST_CASE("sphere points") {
  CHECK_THROWS_AS(SpherePoint({1.0, 0.1}), ContractError);
  const auto a = SpherePoint::normalized({3.0, 4.0});
  CHECK(a[0] == doctest::Approx(0.6));
  CHECK(a.reflected()[0] == doctest::Approx(-0.6));
  CHECK(a.hemisphere());
  CHECK_FALSE(SpherePoint::normalized({-1.0, 0.1}).hemisphere());
  const auto r = reflected(ConeVector({3, 4}, 5));
  CHECK(r == ConeVector({-3, 4}, 5));
}

TEST_CASE("named constants") {
  const QuadraticSpace space(2);
  CHECK(e_plus(space) == RealVector{1, 0, 0, 1});
  CHECK(e_minus(space) == RealVector{-1, 0, 0, 1});
  CHECK(eval_form(space, e_plus(space)) == 0.0);
  CHECK(eval_form(space, basis_vector(space, 3)) == -1.0);
}

}
