#pragma once
// Graphviz DOT rendering of chain graphs: node area tracks state frequency,
// pen width tracks transition count, edge labels carry the probability.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "trajmine/events.hpp"
#include "trajmine/markov.hpp"

namespace trajmine {

namespace detail {
inline std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}
} // namespace detail

inline std::string state_name(const PositionedState& s, const EventAlphabet& alphabet) {
  return alphabet.code(s.code) + "@" + std::to_string(s.position);
}

inline std::string to_dot(const ChainGraph& graph, const EventAlphabet& alphabet) {
  std::string out;
  out += "digraph chains {\n";
  out += "  rankdir=LR;\n";
  out += "  node [shape=circle style=filled fixedsize=true fontname=\"Helvetica\"];\n";

  std::uint32_t max_occ = 0;
  for (const ChainNode& n : graph.nodes) max_occ = std::max(max_occ, n.occurrences);
  std::uint32_t max_count = 0;
  for (const ChainEdge& e : graph.edges) max_count = std::max(max_count, e.count);

  // width ~ sqrt(occurrences) so that node area is proportional to frequency
  for (const ChainNode& n : graph.nodes) {
    const double rel = max_occ == 0 ? 0.0 : static_cast<double>(n.occurrences) / max_occ;
    const double width = 0.35 + 1.15 * std::sqrt(rel);
    const std::string name = state_name(n.state, alphabet);
    out += "  \"" + name + "\" [label=\"" + name + "\" fillcolor=\"" +
           alphabet.type(n.state.code).color + "\" width=" + detail::fixed2(width) + "];\n";
  }
  for (const ChainEdge& e : graph.edges) {
    const double rel = max_count == 0 ? 0.0 : static_cast<double>(e.count) / max_count;
    const double penwidth = 0.5 + 5.5 * rel;
    out += "  \"" + state_name(e.from, alphabet) + "\" -> \"" +
           state_name({e.from.position + 1, e.to}, alphabet) + "\" [label=\"" +
           detail::fixed2(e.probability) + "\" penwidth=" + detail::fixed2(penwidth) + "];\n";
  }
  out += "}\n";
  return out;
}

} // namespace trajmine
