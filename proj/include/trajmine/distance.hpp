#pragma once
// Pairwise sequence dissimilarities in condensed (upper-triangle) storage,
// summary statistics, and a little-endian binary cache format.

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <span>
#include <vector>

#include "trajmine/events.hpp"
#include "trajmine/lcs.hpp"
#include "trajmine/parallel.hpp"

namespace trajmine {

class CondensedDistanceMatrix {
 public:
  CondensedDistanceMatrix(std::size_t n, std::vector<std::uint32_t> values)
      : n_(n), values_(std::move(values)) {
    if (values_.size() != pair_count(n_))
      throw Error("condensed matrix size mismatch: expected " + std::to_string(pair_count(n_)) +
                  " values for n=" + std::to_string(n_));
  }

  static std::size_t pair_count(std::size_t n) { return n * (n - 1) / 2; }

  // Canonical index of pair (i, j), i < j, in row-major upper-triangle order.
  static std::size_t condensed_index(std::size_t i, std::size_t j, std::size_t n) {
    if (i > j) std::swap(i, j);
    return i * n - i * (i + 1) / 2 + (j - i - 1);
  }

  std::size_t size() const { return n_; }
  std::span<const std::uint32_t> values() const { return values_; }

  std::uint32_t operator()(std::size_t i, std::size_t j) const {
    if (i == j) return 0;
    return values_[condensed_index(i, j, n_)];
  }

 private:
  std::size_t n_;
  std::vector<std::uint32_t> values_;
};

// Full pairwise dissimilarity matrix. The pair range is the parallel kernel:
// workers fill disjoint slices of the condensed output.
inline CondensedDistanceMatrix distance_matrix(const SequenceBank& bank, unsigned threads = 0) {
  const std::size_t n = bank.sequences.size();
  if (n < 2) throw Error("distance matrix requires at least 2 sequences, got " + std::to_string(n));

  const std::size_t total = CondensedDistanceMatrix::pair_count(n);
  std::vector<std::uint32_t> values(total);

  parallel_chunks(total, threads, [&](std::size_t begin, std::size_t end) {
    // Recover (i, j) for the first index of the slice, then walk forward.
    std::size_t i = 0;
    std::size_t row_start = 0;
    while (row_start + (n - i - 1) <= begin) {
      row_start += n - i - 1;
      ++i;
    }
    std::size_t j = i + 1 + (begin - row_start);
    for (std::size_t k = begin; k < end; ++k) {
      values[k] = dissimilarity(bank.sequences[i], bank.sequences[j]);
      if (++j == n) {
        ++i;
        j = i + 1;
      }
    }
  });

  return CondensedDistanceMatrix(n, std::move(values));
}

struct DistanceStats {
  std::uint64_t count = 0;
  std::uint32_t min = 0;
  std::uint32_t max = 0;
  double mean = 0.0;
  double median = 0.0;
  std::map<std::uint32_t, std::uint64_t> histogram; // distance value -> pair count
};

inline DistanceStats distance_stats(const CondensedDistanceMatrix& dm) {
  auto vals = dm.values();
  if (vals.empty()) throw Error("distance_stats requires a non-empty matrix");

  DistanceStats s;
  s.count = vals.size();
  s.min = vals[0];
  s.max = vals[0];
  std::uint64_t sum = 0;
  for (std::uint32_t v : vals) {
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
    sum += v;
    ++s.histogram[v];
  }
  s.mean = static_cast<double>(sum) / static_cast<double>(vals.size());

  // Order statistics straight off the histogram; midpoint rule for even counts.
  const std::uint64_t m = vals.size();
  auto value_at = [&](std::uint64_t rank) { // 0-based
    std::uint64_t seen = 0;
    for (const auto& [v, c] : s.histogram) {
      seen += c;
      if (seen > rank) return v;
    }
    return s.max;
  };
  if (m % 2 == 1)
    s.median = value_at(m / 2);
  else
    s.median = (static_cast<double>(value_at(m / 2 - 1)) + static_cast<double>(value_at(m / 2))) / 2.0;
  return s;
}

namespace detail {
inline void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b), 4);
}
inline void put_u64(std::ostream& os, std::uint64_t v) {
  put_u32(os, static_cast<std::uint32_t>(v));
  put_u32(os, static_cast<std::uint32_t>(v >> 32));
}
inline std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  if (!is) throw Error("truncated distance matrix file");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}
inline std::uint64_t get_u64(std::istream& is) {
  std::uint64_t lo = get_u32(is);
  std::uint64_t hi = get_u32(is);
  return lo | (hi << 32);
}
} // namespace detail

inline constexpr char kMatrixMagic[4] = {'T', 'M', 'D', 'C'};
inline constexpr std::uint32_t kMatrixVersion = 1;

inline void save_distance_matrix(const CondensedDistanceMatrix& dm, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open distance matrix file for writing: " + path.string());
  os.write(kMatrixMagic, 4);
  detail::put_u32(os, kMatrixVersion);
  detail::put_u64(os, dm.size());
  for (std::uint32_t v : dm.values()) detail::put_u32(os, v);
  if (!os) throw Error("failed writing distance matrix file: " + path.string());
}

inline CondensedDistanceMatrix load_distance_matrix(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open distance matrix file: " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMatrixMagic, 4) != 0)
    throw Error("not a distance matrix file: " + path.string());
  const std::uint32_t version = detail::get_u32(is);
  if (version != kMatrixVersion)
    throw Error("unsupported distance matrix version " + std::to_string(version));
  const std::uint64_t n = detail::get_u64(is);
  std::vector<std::uint32_t> values(CondensedDistanceMatrix::pair_count(n));
  for (auto& v : values) v = detail::get_u32(is);
  return CondensedDistanceMatrix(n, std::move(values));
}

} // namespace trajmine
