#pragma once
// Frequent-subsequence mining with per-patient support values (internal
// cluster validation) and chi-square discriminative subsequences between two
// groups (external validation).

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "trajmine/chi_square.hpp"
#include "trajmine/events.hpp"

namespace trajmine {

using Pattern = std::vector<CodeIndex>;
using EventView = std::span<const CodeIndex>;

struct SupportResult {
  Pattern pattern;
  std::uint32_t count = 0; // patients containing the pattern, each counted once
  double support = 0.0;    // count / group size
};

struct DiscriminationResult {
  Pattern pattern;
  double statistic = 0.0;
  double p_value = 1.0;
  int residual_sign_g1 = 0;
  std::uint32_t count_g1 = 0;
  std::uint32_t count_g2 = 0;
  double support_g1 = 0.0;
  double support_g2 = 0.0;
  bool degenerate = false;
};

// True iff pattern is an order-preserving, not necessarily contiguous,
// subsequence of seq. Greedy earliest-match scan.
inline bool contains(EventView seq, EventView pattern) {
  std::size_t p = 0;
  for (std::size_t i = 0; i < seq.size() && p < pattern.size(); ++i) {
    if (seq[i] == pattern[p]) ++p;
  }
  return p == pattern.size();
}

inline std::vector<EventView> event_views(const SequenceBank& bank) {
  std::vector<EventView> out;
  out.reserve(bank.sequences.size());
  for (const Sequence& s : bank.sequences) out.emplace_back(s.events);
  return out;
}

inline std::vector<EventView> event_views(const SequenceBank& bank,
                                          std::span<const std::uint32_t> members) {
  std::vector<EventView> out;
  out.reserve(members.size());
  for (std::uint32_t m : members) out.emplace_back(bank.sequences.at(m).events);
  return out;
}

namespace detail {

// Prefix-tree search with projected occurrence lists: each supporting
// sequence carries the offset just past the earliest match of the current
// pattern, so extending by one code is a forward scan from that offset.
struct Projection {
  std::uint32_t seq;
  std::uint32_t next; // first unmatched offset
};

inline void mine_recurse(std::span<const EventView> group, std::size_t alphabet_size,
                         double min_support, std::size_t max_len, Pattern& pattern,
                         const std::vector<Projection>& occurrences,
                         std::vector<SupportResult>& out) {
  const double n = static_cast<double>(group.size());
  for (CodeIndex c = 0; c < alphabet_size; ++c) {
    std::vector<Projection> extended;
    for (const Projection& occ : occurrences) {
      const EventView seq = group[occ.seq];
      for (std::uint32_t i = occ.next; i < seq.size(); ++i) {
        if (seq[i] == c) {
          extended.push_back({occ.seq, i + 1});
          break;
        }
      }
    }
    const double support = static_cast<double>(extended.size()) / n;
    if (support < min_support || extended.empty()) continue; // anti-monotone prune

    pattern.push_back(c);
    out.push_back({pattern, static_cast<std::uint32_t>(extended.size()), support});
    if (pattern.size() < max_len)
      mine_recurse(group, alphabet_size, min_support, max_len, pattern, extended, out);
    pattern.pop_back();
  }
}

} // namespace detail

// All patterns of length <= max_len with support >= min_support, descending
// by support; ties broken by shorter pattern, then alphabetical.
inline std::vector<SupportResult> mine_frequent(std::span<const EventView> group, double min_support,
                                                std::size_t max_len, std::size_t alphabet_size) {
  if (group.empty()) throw Error("mine_frequent: group is empty");
  if (!(min_support > 0.0) || min_support > 1.0)
    throw Error("mine_frequent: min_support must be in (0, 1]");
  if (max_len < 1) throw Error("mine_frequent: max_len must be >= 1");

  std::vector<detail::Projection> all;
  all.reserve(group.size());
  for (std::uint32_t i = 0; i < group.size(); ++i) all.push_back({i, 0});

  std::vector<SupportResult> out;
  Pattern pattern;
  detail::mine_recurse(group, alphabet_size, min_support, max_len, pattern, all, out);

  std::sort(out.begin(), out.end(), [](const SupportResult& a, const SupportResult& b) {
    if (a.support != b.support) return a.support > b.support;
    if (a.pattern.size() != b.pattern.size()) return a.pattern.size() < b.pattern.size();
    return a.pattern < b.pattern;
  });
  return out;
}

// Default candidate set for external validation: union of the top_k frequent
// patterns of each group at candidate_min_support.
inline std::vector<Pattern> discrimination_candidates(std::span<const EventView> g1,
                                                      std::span<const EventView> g2,
                                                      std::size_t max_len, std::size_t alphabet_size,
                                                      double candidate_min_support = 0.05,
                                                      std::size_t top_k = 50) {
  std::vector<Pattern> out;
  for (auto* group : {&g1, &g2}) {
    auto mined = mine_frequent(*group, candidate_min_support, max_len, alphabet_size);
    for (std::size_t i = 0; i < mined.size() && i < top_k; ++i)
      out.push_back(std::move(mined[i].pattern));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Chi-square discrimination of each candidate between the two groups, ranked
// by ascending p-value (ties: larger statistic, shorter pattern, alphabetical).
inline std::vector<DiscriminationResult> discriminate(std::span<const EventView> g1,
                                                      std::span<const EventView> g2,
                                                      std::span<const Pattern> candidates) {
  if (g1.empty() || g2.empty()) throw Error("discriminate: both groups must be non-empty");

  std::vector<DiscriminationResult> out;
  out.reserve(candidates.size());
  for (const Pattern& pattern : candidates) {
    std::uint32_t a = 0, c = 0;
    for (EventView s : g1) a += contains(s, pattern) ? 1 : 0;
    for (EventView s : g2) c += contains(s, pattern) ? 1 : 0;
    const std::uint32_t b = static_cast<std::uint32_t>(g1.size()) - a;
    const std::uint32_t d = static_cast<std::uint32_t>(g2.size()) - c;

    const Chi2x2 test = chi_square_2x2(a, b, c, d);
    DiscriminationResult r;
    r.pattern = pattern;
    r.statistic = test.statistic;
    r.p_value = test.p_value;
    r.residual_sign_g1 = test.residual_sign_g1;
    r.count_g1 = a;
    r.count_g2 = c;
    r.support_g1 = static_cast<double>(a) / static_cast<double>(g1.size());
    r.support_g2 = static_cast<double>(c) / static_cast<double>(g2.size());
    r.degenerate = test.degenerate;
    out.push_back(std::move(r));
  }

  std::sort(out.begin(), out.end(), [](const DiscriminationResult& a, const DiscriminationResult& b) {
    if (a.p_value != b.p_value) return a.p_value < b.p_value;
    if (a.statistic != b.statistic) return a.statistic > b.statistic;
    if (a.pattern.size() != b.pattern.size()) return a.pattern.size() < b.pattern.size();
    return a.pattern < b.pattern;
  });
  return out;
}

} // namespace trajmine
