#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "sphere/errors.hpp"
#include "sphere/point_cache.hpp"
#include "sphere/rational_points.hpp"

using namespace sphere;
namespace fs = std::filesystem;

namespace {

// Set of (q, p) by scanning every integer vector with |p_i| <= q.
std::set<std::vector<std::int64_t>> naive_points(int n, std::int64_t N) {
  std::set<std::vector<std::int64_t>> out;
  const std::size_t d = static_cast<std::size_t>(n) + 1;
  for (std::int64_t q = 1; q <= N; ++q) {
    std::vector<std::int64_t> p(d, -q);
    for (;;) {
      std::int64_t s = 0, g = q;
      for (auto c : p) {
        s += c * c;
        g = std::gcd(g, c);
      }
      if (s == q * q && g == 1) {
        std::vector<std::int64_t> key{q};
        key.insert(key.end(), p.begin(), p.end());
        out.insert(key);
      }
      std::size_t j = 0;
      while (j < d && p[j] == q) p[j++] = -q;
      if (j == d) break;
      ++p[j];
    }
  }
  return out;
}

std::set<std::vector<std::int64_t>> as_set(const PointTable& t) {
  std::set<std::vector<std::int64_t>> out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::vector<std::int64_t> key{t.q(i)};
    const auto p = t.p(i);
    key.insert(key.end(), p.begin(), p.end());
    out.insert(key);
  }
  return out;
}

}  // namespace

TEST_SUITE("points") {

TEST_CASE("enumeration equals a naive cube scan") {
  for (int n = 1; n <= 3; ++n) {
    const std::int64_t N = n == 3 ? 14 : 30;
    const auto table = enumerate_points(n, N);
    CHECK(as_set(table) == naive_points(n, N));
    CHECK(table.size() == as_set(table).size());
  }
}

TEST_CASE("brute force oracle equals a naive cube scan") {
  CHECK(as_set(brute_force_points(2, 20)) == naive_points(2, 20));
  CHECK(as_set(brute_force_points(1, 60)) == naive_points(1, 60));
}

TEST_CASE("known small counts") {
  // q = 1: the 2(n+1) signed unit vectors; q = 5 on the circle: (3,4) family
  // and (5,0)-type points are not primitive, so 8 points.
  const auto t = enumerate_points(1, 5);
  CHECK(t.bucket_end(1) - t.bucket_begin(1) == 4);
  CHECK(t.bucket_end(5) - t.bucket_begin(5) == 8);
  CHECK(t.bucket_end(2) == t.bucket_begin(2));
  const auto s = enumerate_points(2, 3);
  CHECK(s.bucket_end(1) - s.bucket_begin(1) == 6);
  // 3^2 = 1 + 4 + 4: permutations of (+-1, +-2, +-2)
  CHECK(s.bucket_end(3) - s.bucket_begin(3) == 24);
}

TEST_CASE("buckets are sorted and counts are monotone") {
  const auto t = enumerate_points(2, 200);
  for (std::size_t i = 1; i < t.size(); ++i) {
    const auto a = t.p(i - 1), b = t.p(i);
    const bool ordered = t.q(i - 1) < t.q(i) ||
                         (t.q(i - 1) == t.q(i) && std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end()));
    REQUIRE(ordered);
  }
  std::uint64_t prev = 0;
  for (std::int64_t N : {1, 2, 5, 10, 50, 100, 200}) {
    const auto c = count_points(2, N);
    CHECK(c.count >= prev);
    CHECK(c.count == t.count_upto(N));
    prev = c.count;
  }
}

TEST_CASE("stereographic round trip") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::int64_t> coord(-1000, 1000), den(1, 1000);
  int done = 0;
  while (done < 10000) {
    const int n = 1 + static_cast<int>(rng() % 3);
    std::vector<std::int64_t> a(static_cast<std::size_t>(n));
    for (auto& c : a) c = coord(rng);
    const std::int64_t c = den(rng);
    std::int64_t g = c;
    for (auto v : a) g = std::gcd(g, v);
    if (g != 1) continue;
    ++done;
    const auto w = stereo_to_sphere(StereoCoord(a, c));
    // exact: x_j = p_{j+1} / (q + p_1)
    const BigInt lead = BigInt(w.q()) + w.p()[0];
    for (int j = 0; j < n; ++j) REQUIRE(BigInt(a[j]) * lead == BigInt(w.p()[j + 1]) * c);
    // floating
    std::vector<double> alpha;
    for (auto v : w.p()) alpha.push_back(static_cast<double>(v) / static_cast<double>(w.q()));
    const auto x = sphere_to_stereo(SpherePoint::normalized(alpha));
    for (int j = 0; j < n; ++j)
      REQUIRE(std::abs(x[j] - static_cast<double>(a[j]) / static_cast<double>(c)) <= 1e-10 * std::max(1.0, std::abs(x[j])));
  }
}

TEST_CASE("stereographic denominators have gcd 1 or 2") {
  const auto w = stereo_to_sphere(StereoCoord({1}, 1));  // raw (0, 2, 2)
  CHECK(w.q() == 1);
  CHECK(w.p() == std::vector<std::int64_t>{0, 1});
  const auto v = stereo_to_sphere(StereoCoord({1}, 2));  // raw (3, 4, 5)
  CHECK(v.q() == 5);
  CHECK(v.p() == std::vector<std::int64_t>{3, 4});
  CHECK_THROWS_AS(StereoCoord({2}, 4), ContractError);
}

TEST_CASE("tables reject malformed records") {
  using R = PointTable::Record;
  CHECK_THROWS_AS(PointTable(1, 5, {R{{3, 4}, 5}, R{{3, 4}, 5}}), ContractError);
  CHECK_THROWS_AS(PointTable(1, 5, {R{{6, 8}, 10}}), ContractError);
  CHECK_THROWS_AS(PointTable(1, 10, {R{{6, 8}, 10}}), ContractError);
  CHECK_THROWS_AS(PointTable(1, 5, {R{{3, 3}, 5}}), ContractError);
  CHECK_NOTHROW(PointTable(1, 5, {R{{3, 4}, 5}, R{{1, 0}, 1}}));
}

TEST_CASE("reflection maps the table onto itself") {
  const auto t = enumerate_points(2, 80);
  CHECK(reflect_table(t) == t);
}

TEST_CASE("binary cache round trip and corruption") {
  const fs::path dir = fs::temp_directory_path() / "sphere-unit-cache";
  fs::remove_all(dir);
  const PointCache cache(dir);
  const auto first = cache.get(2, 70);
  CHECK_FALSE(first.hit);
  CHECK(first.table.provenance().oracle_verified == false);
  const auto again = cache.get(2, 70);
  CHECK(again.hit);
  CHECK(again.table == first.table);
  CHECK(first.key == "n2-N70-g" + std::to_string(kGeneratorVersion));

  const auto small = cache.get(1, 40);
  CHECK(small.table.provenance().oracle_verified);

  // flip one record byte: checksum mismatch on read, silent rebuild through the cache
  const auto path = cache.path_for(2, 70);
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(40);
    char c = 0;
    f.read(&c, 1);
    f.seekp(40);
    c = static_cast<char>(c ^ 0x5a);
    f.write(&c, 1);
  }
  CHECK_THROWS_AS(read_table_binary(path, 2, 70), ContractError);
  const auto rebuilt = cache.get(2, 70);
  CHECK_FALSE(rebuilt.hit);
  CHECK(rebuilt.table == first.table);
  CHECK_THROWS_AS(read_table_binary(path, 2, 50), ContractError);
  fs::remove_all(dir);
}

TEST_CASE("csv export") {
  std::ostringstream os;
  write_table_csv(enumerate_points(1, 1), os);
  CHECK(os.str() == "q,p1,p2\n1,-1,0\n1,0,-1\n1,0,1\n1,1,0\n");
}

TEST_CASE("budget guard") {
  EnumerationOptions opts;
  opts.candidate_budget = 10;
  CHECK_THROWS_AS(enumerate_points(3, 1000, opts), BudgetError);
  CHECK_THROWS_AS(enumerate_points(0, 10), ContractError);
}

}
