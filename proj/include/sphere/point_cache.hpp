#pragma once

// On-disk point tables.
//
// Binary layout: 16-byte header ("SPHRPTS\0", u32 generator version, u32
// FNV-1a checksum of the record bytes) followed by little-endian records
// [n: u16][q: u64][p_1 ... p_{n+1}: i64] sorted by (q, p).

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "sphere/rational_points.hpp"

namespace sphere {

std::uint32_t fnv1a(const unsigned char* data, std::size_t size, std::uint32_t h = 2166136261u);

void write_table_binary(const PointTable& table, const std::filesystem::path& path);

// Throws ContractError on a bad header, checksum mismatch, or records that
// fail the PointTable checks for (n, N). Completeness is the writer's job.
PointTable read_table_binary(const std::filesystem::path& path, int n, std::int64_t N);

// Header `q,p1,...,p{n+1}`, one point per row.
void write_table_csv(const PointTable& table, std::ostream& out);

// Every primitive point with q <= N, by scanning p_1..p_n in [-q, q] and
// solving for p_{n+1}. Independent of the generators.
PointTable brute_force_points(int n, std::int64_t N);

// Tables at or below this depth are checked against brute_force_points when
// built, and flagged oracle-verified.
inline constexpr std::int64_t kOracleDepth = 60;

struct CachedTable {
  PointTable table;
  std::string key;  // "n<n>-N<N>-g<version>"
  bool hit = false;
};

class PointCache {
 public:
  // Empty dir disables persistence.
  explicit PointCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  // Resolution order: explicit flag, SPHERE_CACHE, ./.sphere-cache.
  static std::filesystem::path default_dir(const std::string& flag);

  static std::string key(int n, std::int64_t N);
  std::filesystem::path path_for(int n, std::int64_t N) const;

  // Loads a verified cache entry or enumerates and stores one. Corrupt entries
  // are rebuilt.
  CachedTable get(int n, std::int64_t N, const EnumerationOptions& options = {}) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace sphere
