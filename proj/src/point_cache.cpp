#include "sphere/point_cache.hpp"

#include <cstdlib>
#include <cmath>
#include <cstring>
#include <fstream>
#include <ostream>
#include <vector>

#include "sphere/errors.hpp"

namespace sphere {

namespace {

constexpr char kMagic[8] = {'S', 'P', 'H', 'R', 'P', 'T', 'S', '\0'};

void put_le(std::vector<unsigned char>& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

std::uint64_t get_le(const unsigned char* p, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

std::int64_t isqrt(std::int64_t v) {
  if (v < 0) return -1;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b) {
    const auto t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

std::uint32_t fnv1a(const unsigned char* data, std::size_t size, std::uint32_t h) {
  for (std::size_t i = 0; i < size; ++i) {
    h ^= data[i];
    h *= 16777619u;
  }
  return h;
}

void write_table_binary(const PointTable& table, const std::filesystem::path& path) {
  const std::size_t stride = table.stride();
  std::vector<unsigned char> body;
  body.reserve(table.size() * (10 + 8 * stride));
  for (std::size_t i = 0; i < table.size(); ++i) {
    put_le(body, static_cast<std::uint64_t>(table.n()), 2);
    put_le(body, static_cast<std::uint64_t>(table.q(i)), 8);
    for (auto c : table.p(i)) put_le(body, static_cast<std::uint64_t>(c), 8);
  }
  std::vector<unsigned char> header(kMagic, kMagic + 8);
  put_le(header, kGeneratorVersion, 4);
  put_le(header, fnv1a(body.data(), body.size()), 4);

  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ContractError("cannot write cache file " + tmp.string());
    out.write(reinterpret_cast<const char*>(header.data()), static_cast<std::streamsize>(header.size()));
    out.write(reinterpret_cast<const char*>(body.data()), static_cast<std::streamsize>(body.size()));
    if (!out) throw ContractError("short write to cache file " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

PointTable read_table_binary(const std::filesystem::path& path, int n, std::int64_t N) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ContractError("cannot open cache file " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, 8) != 0)
    throw ContractError("cache file has a bad header: " + path.string());
  if (get_le(bytes.data() + 8, 4) != kGeneratorVersion)
    throw ContractError("cache file from another generator version: " + path.string());
  const auto checksum = static_cast<std::uint32_t>(get_le(bytes.data() + 12, 4));
  if (fnv1a(bytes.data() + 16, bytes.size() - 16) != checksum)
    throw ContractError("cache file checksum mismatch: " + path.string());

  const std::size_t stride = static_cast<std::size_t>(n) + 1;
  const std::size_t record = 10 + 8 * stride;
  if ((bytes.size() - 16) % record != 0) throw ContractError("cache file has a partial record");
  const std::size_t count = (bytes.size() - 16) / record;
  std::vector<std::int64_t> q(count), coords(count * stride);
  const unsigned char* p = bytes.data() + 16;
  for (std::size_t i = 0; i < count; ++i, p += record) {
    if (get_le(p, 2) != static_cast<std::uint64_t>(n)) throw ContractError("cache record dimension mismatch");
    q[i] = static_cast<std::int64_t>(get_le(p + 2, 8));
    for (std::size_t j = 0; j < stride; ++j)
      coords[i * stride + j] = static_cast<std::int64_t>(get_le(p + 10 + 8 * j, 8));
  }
  return PointTable(n, N, std::move(q), std::move(coords));
}

void write_table_csv(const PointTable& table, std::ostream& out) {
  out << 'q';
  for (std::size_t j = 1; j <= table.stride(); ++j) out << ",p" << j;
  out << '\n';
  for (std::size_t i = 0; i < table.size(); ++i) {
    out << table.q(i);
    for (auto c : table.p(i)) out << ',' << c;
    out << '\n';
  }
}

PointTable brute_force_points(int n, std::int64_t N) {
  if (n < 1 || N < 1) throw ContractError("brute force needs n >= 1 and N >= 1");
  const std::size_t m = static_cast<std::size_t>(n);
  std::vector<std::int64_t> qs, coords;
  std::vector<std::int64_t> p(m + 1);
  for (std::int64_t q = 1; q <= N; ++q) {
    std::fill(p.begin(), p.end() - 1, -q);
    for (;;) {
      std::int64_t s = 0;
      for (std::size_t j = 0; j < m; ++j) s += p[j] * p[j];
      const std::int64_t r = isqrt(q * q - s);
      if (r >= 0 && r * r == q * q - s) {
        std::int64_t g = q;
        for (std::size_t j = 0; j < m; ++j) g = gcd64(g, p[j]);
        g = gcd64(g, r);
        if (g == 1) {
          for (std::int64_t last : {-r, r}) {
            p[m] = last;
            qs.push_back(q);
            coords.insert(coords.end(), p.begin(), p.end());
            if (r == 0) break;
          }
        }
      }
      std::size_t j = m;
      while (j > 0 && p[j - 1] == q) p[--j] = -q;
      if (j == 0) break;
      ++p[j - 1];
    }
  }
  Provenance prov;
  prov.oracle_verified = true;
  return PointTable(n, N, std::move(qs), std::move(coords), prov);
}

std::filesystem::path PointCache::default_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("SPHERE_CACHE"); env && *env) return env;
  return ".sphere-cache";
}

std::string PointCache::key(int n, std::int64_t N) {
  return "n" + std::to_string(n) + "-N" + std::to_string(N) + "-g" + std::to_string(kGeneratorVersion);
}

std::filesystem::path PointCache::path_for(int n, std::int64_t N) const {
  return dir_ / ("points-" + key(n, N) + ".bin");
}

CachedTable PointCache::get(int n, std::int64_t N, const EnumerationOptions& options) const {
  CachedTable out{PointTable{}, key(n, N), false};
  const bool persist = !dir_.empty();
  if (persist && std::filesystem::exists(path_for(n, N))) {
    try {
      out.table = read_table_binary(path_for(n, N), n, N);
      out.hit = true;
    } catch (const ContractError&) {
      out.hit = false;
    }
  }
  if (!out.hit) {
    out.table = enumerate_points(n, N, options);
    if (persist) {
      std::filesystem::create_directories(dir_);
      write_table_binary(out.table, path_for(n, N));
    }
  }
  if (N <= kOracleDepth) {
    if (!(brute_force_points(n, N) == out.table)) throw ContractError("point table disagrees with the oracle");
    out.table.mark_oracle_verified();
  }
  return out;
}

}  // namespace sphere
