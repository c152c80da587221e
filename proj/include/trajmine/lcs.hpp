#pragma once
// Longest common subsequence length and the derived indel dissimilarity
// d(a,b) = |a| + |b| - 2*LCS(a,b).

#include <cstdint>
#include <span>
#include <vector>

#include "trajmine/events.hpp"

namespace trajmine {

// Classic O(|a|*|b|) dynamic program with two rolling rows sized by the
// shorter input.
inline std::uint32_t lcs_length(std::span<const CodeIndex> a, std::span<const CodeIndex> b) {
  if (a.size() < b.size()) std::swap(a, b);
  if (b.empty()) return 0;

  std::vector<std::uint32_t> prev(b.size() + 1, 0);
  std::vector<std::uint32_t> curr(b.size() + 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const CodeIndex ai = a[i];
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (ai == b[j])
        curr[j + 1] = prev[j] + 1;
      else
        curr[j + 1] = std::max(prev[j + 1], curr[j]);
    }
    std::swap(prev, curr);
  }
  return prev[b.size()];
}

inline std::uint32_t lcs_length(const Sequence& a, const Sequence& b) {
  return lcs_length(std::span<const CodeIndex>(a.events), std::span<const CodeIndex>(b.events));
}

// Minimum number of single-event insertions/deletions turning a into b.
inline std::uint32_t dissimilarity(std::span<const CodeIndex> a, std::span<const CodeIndex> b) {
  return static_cast<std::uint32_t>(a.size() + b.size()) - 2 * lcs_length(a, b);
}

inline std::uint32_t dissimilarity(const Sequence& a, const Sequence& b) {
  return dissimilarity(std::span<const CodeIndex>(a.events), std::span<const CodeIndex>(b.events));
}

} // namespace trajmine
