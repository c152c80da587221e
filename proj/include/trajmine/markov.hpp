#pragma once
// Position-indexed first-order Markov model of event transitions: state
// (code, ordinal position) so a first bleed and a fifth bleed are distinct,
// transition counts/probabilities between consecutive positions, explicit
// end mass, and the thresholded chain graph.

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "trajmine/events.hpp"
#include "trajmine/subseq.hpp"

namespace trajmine {

struct PositionedState {
  std::uint32_t position = 0; // 1-based ordinal within the sequence
  CodeIndex code = 0;

  friend bool operator==(const PositionedState&, const PositionedState&) = default;
  friend bool operator<(const PositionedState& a, const PositionedState& b) {
    if (a.position != b.position) return a.position < b.position;
    return a.code < b.code;
  }
};

struct StateStat {
  std::uint32_t occurrences = 0; // sequences whose p-th event is this code
  std::uint32_t ends = 0;        // sequences terminating at this state
};

struct TransitionModel {
  std::uint32_t n_sequences = 0;
  std::map<PositionedState, StateStat> states;
  std::map<std::pair<PositionedState, CodeIndex>, std::uint32_t> transitions; // to position+1

  std::uint32_t occurrences(const PositionedState& s) const {
    auto it = states.find(s);
    return it == states.end() ? 0 : it->second.occurrences;
  }

  std::uint32_t transition_count(const PositionedState& from, CodeIndex to) const {
    auto it = transitions.find({from, to});
    return it == transitions.end() ? 0 : it->second;
  }

  double probability(const PositionedState& from, CodeIndex to) const {
    const std::uint32_t occ = occurrences(from);
    if (occ == 0) return 0.0;
    return static_cast<double>(transition_count(from, to)) / static_cast<double>(occ);
  }

  // Probability that a sequence ends at this state instead of transitioning.
  double end_mass(const PositionedState& s) const {
    auto it = states.find(s);
    if (it == states.end() || it->second.occurrences == 0) return 0.0;
    return static_cast<double>(it->second.ends) / static_cast<double>(it->second.occurrences);
  }
};

inline TransitionModel fit_transitions(std::span<const EventView> group) {
  if (group.empty()) throw Error("fit_transitions: group is empty");

  TransitionModel model;
  model.n_sequences = static_cast<std::uint32_t>(group.size());
  for (EventView seq : group) {
    for (std::uint32_t p = 0; p < seq.size(); ++p) {
      const PositionedState state{p + 1, seq[p]};
      StateStat& stat = model.states[state];
      ++stat.occurrences;
      if (p + 1 < seq.size())
        ++model.transitions[{state, seq[p + 1]}];
      else
        ++stat.ends;
    }
  }
  return model;
}

struct ChainNode {
  PositionedState state;
  std::uint32_t occurrences = 0;
};

struct ChainEdge {
  PositionedState from;
  CodeIndex to = 0; // at position from.position + 1
  std::uint32_t count = 0;
  double probability = 0.0;
};

struct ChainGraph {
  double prob_threshold = 0.0;
  std::uint32_t freq_threshold = 0;
  std::vector<ChainNode> nodes; // sorted by (position, code)
  std::vector<ChainEdge> edges; // sorted by (from, to)
};

// Keep transitions with probability >= prob_threshold and count >=
// freq_threshold; keep states incident to a kept transition. Chains are the
// transitively connected paths of the remaining subgraph.
inline ChainGraph extract_chains(const TransitionModel& model, double prob_threshold = 0.1,
                                 std::uint32_t freq_threshold = 30) {
  if (!(prob_threshold > 0.0) || freq_threshold == 0)
    throw Error("extract_chains: thresholds must be positive");

  ChainGraph graph;
  graph.prob_threshold = prob_threshold;
  graph.freq_threshold = freq_threshold;

  std::map<PositionedState, std::uint32_t> retained;
  for (const auto& [key, count] : model.transitions) {
    const auto& [from, to] = key;
    const double prob = model.probability(from, to);
    if (count < freq_threshold || prob < prob_threshold) continue;
    const PositionedState target{from.position + 1, to};
    graph.edges.push_back({from, to, count, prob});
    retained.emplace(from, model.occurrences(from));
    retained.emplace(target, model.occurrences(target));
  }
  for (const auto& [state, occ] : retained) graph.nodes.push_back({state, occ});
  return graph; // map iteration already yields (position, code) order
}

struct PositionHistogram {
  std::size_t alphabet_size = 0;
  std::vector<std::uint32_t> sequences_at;          // index p-1: sequences with length >= p
  std::vector<std::vector<std::uint32_t>> counts;   // [p-1][code]

  std::size_t positions() const { return sequences_at.size(); }
  double proportion(std::size_t position, CodeIndex code) const {
    const std::uint32_t n = sequences_at.at(position - 1);
    if (n == 0) return 0.0;
    return static_cast<double>(counts.at(position - 1).at(code)) / static_cast<double>(n);
  }
};

// Cell (p, c): fraction of sequences of length >= p whose p-th event is c.
// Every populated column sums to 1.
inline PositionHistogram position_histogram(std::span<const EventView> group,
                                            std::size_t alphabet_size) {
  if (group.empty()) throw Error("position_histogram: group is empty");

  std::size_t max_len = 0;
  for (EventView s : group) max_len = std::max(max_len, s.size());

  PositionHistogram h;
  h.alphabet_size = alphabet_size;
  h.sequences_at.assign(max_len, 0);
  h.counts.assign(max_len, std::vector<std::uint32_t>(alphabet_size, 0));
  for (EventView s : group) {
    for (std::size_t p = 0; p < s.size(); ++p) {
      ++h.sequences_at[p];
      ++h.counts[p][s[p]];
    }
  }
  return h;
}

} // namespace trajmine
