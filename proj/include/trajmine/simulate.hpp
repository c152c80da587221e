#pragma once
// Seeded synthetic trajectory generator: mixture of groups, each a
// position-aware chain over event codes with explicit termination mass.
// Reproducible bit-for-bit from the seed on any platform (mt19937_64 plus an
// explicit bits-to-double conversion; no distribution objects).

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "trajmine/events.hpp"

namespace trajmine {

struct TransitionRule {
  CodeIndex from = 0;
  std::optional<std::uint32_t> position; // rule applies at this position only; nullopt = default
  std::vector<std::pair<CodeIndex, double>> to;
  double end_prob = 0.0; // to-probabilities + end_prob sum to 1
};

struct GroupSpec {
  std::string name;
  double weight = 0.0;
  std::vector<std::pair<CodeIndex, double>> initial; // sums to 1
  std::vector<TransitionRule> rules;
};

struct GeneratorSpec {
  std::uint64_t seed = 0;
  std::uint32_t patients = 0;
  std::uint32_t max_len = 50; // hard cap on walk length
  std::vector<GroupSpec> groups;
};

struct SimulationResult {
  SequenceBank bank;
  std::vector<std::string> group_of; // parallel to bank.sequences
};

namespace detail {

inline constexpr double kRowSumTolerance = 1e-9;

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline void check_row(double sum, const std::string& what) {
  if (std::fabs(sum - 1.0) > kRowSumTolerance)
    throw Error("generator spec: " + what + " sums to " + std::to_string(sum) + ", expected 1");
}

inline CodeIndex pick(const std::vector<std::pair<CodeIndex, double>>& dist, double u) {
  double acc = 0.0;
  for (const auto& [code, p] : dist) {
    acc += p;
    if (u < acc) return code;
  }
  return dist.back().first; // u landed in rounding slack at the top
}

// Position-specific rules take precedence over the code's default rule; no
// rule at all means the walk ends.
inline const TransitionRule* find_rule(const GroupSpec& g, CodeIndex code, std::uint32_t position) {
  const TransitionRule* fallback = nullptr;
  for (const TransitionRule& r : g.rules) {
    if (r.from != code) continue;
    if (r.position && *r.position == position) return &r;
    if (!r.position) fallback = &r;
  }
  return fallback;
}

} // namespace detail

inline void validate_spec(const GeneratorSpec& spec, const EventAlphabet& alphabet) {
  if (spec.patients == 0) throw Error("generator spec: patient count must be positive");
  if (spec.groups.empty()) throw Error("generator spec: at least one group required");
  double wsum = 0.0;
  for (const GroupSpec& g : spec.groups) {
    wsum += g.weight;
    if (g.initial.empty()) throw Error("generator spec: group '" + g.name + "' has no initial distribution");
    double isum = 0.0;
    for (const auto& [code, p] : g.initial) {
      (void)alphabet.type(code);
      isum += p;
    }
    detail::check_row(isum, "initial distribution of group '" + g.name + "'");
    for (const TransitionRule& r : g.rules) {
      double rsum = r.end_prob;
      for (const auto& [code, p] : r.to) rsum += p;
      detail::check_row(rsum, "transition row '" + alphabet.code(r.from) + "' of group '" + g.name + "'");
    }
  }
  detail::check_row(wsum, "group weights");
}

inline SimulationResult simulate(const GeneratorSpec& spec, const EventAlphabet& alphabet) {
  validate_spec(spec, alphabet);
  std::mt19937_64 rng(spec.seed);

  int id_width = 1;
  for (std::uint32_t p = spec.patients; p >= 10; p /= 10) ++id_width;

  SimulationResult result{SequenceBank{alphabet, {}}, {}};
  result.bank.sequences.reserve(spec.patients);
  result.group_of.reserve(spec.patients);

  for (std::uint32_t p = 0; p < spec.patients; ++p) {
    const double gu = detail::uniform01(rng);
    std::size_t gi = 0;
    double acc = 0.0;
    for (; gi + 1 < spec.groups.size(); ++gi) {
      acc += spec.groups[gi].weight;
      if (gu < acc) break;
    }
    const GroupSpec& group = spec.groups[gi];

    Sequence seq;
    std::string num = std::to_string(p + 1);
    seq.patient_id = "P" + std::string(id_width - static_cast<int>(num.size()), '0') + num;

    CodeIndex current = detail::pick(group.initial, detail::uniform01(rng));
    std::uint32_t position = 1;
    seq.events.push_back(current);
    seq.times.push_back(0.0);
    while (!alphabet.is_terminal(current) && position < spec.max_len) {
      const TransitionRule* rule = detail::find_rule(group, current, position);
      if (rule == nullptr) break;
      const double u = detail::uniform01(rng);
      if (u < rule->end_prob) break;
      // rescale the remaining mass over the to-row
      double acc2 = rule->end_prob;
      CodeIndex next = rule->to.empty() ? current : rule->to.back().first;
      for (const auto& [code, prob] : rule->to) {
        acc2 += prob;
        if (u < acc2) {
          next = code;
          break;
        }
      }
      if (rule->to.empty()) break;
      current = next;
      ++position;
      seq.events.push_back(current);
      seq.times.push_back(static_cast<double>(position - 1)); // strictly increasing months
    }

    result.bank.sequences.push_back(std::move(seq));
    result.group_of.push_back(group.name);
  }
  return result;
}

} // namespace trajmine
