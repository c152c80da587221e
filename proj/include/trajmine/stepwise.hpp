#pragma once
// Step-wise cluster evaluation: starting from the two-cluster solution, one
// unqualified group at a time is bisected along the dendrogram. A split must
// pass external validation (some candidate subsequence separates the two
// halves at p <= p_threshold); a group qualifies internally when its most
// common subsequence of length >= min_subseq_len reaches the support
// threshold. The loop stops when every group qualifies, nothing is left to
// split, or the group cap is reached.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trajmine/events.hpp"
#include "trajmine/subseq.hpp"
#include "trajmine/ward.hpp"

namespace trajmine {

struct ClusterParams {
  double p_threshold = 0.01;
  double internal_support_threshold = 0.5;
  std::size_t min_subseq_len = 2;
  std::size_t max_groups = 16;
  std::size_t min_group_size = 30;

  // evidence / candidate mining
  double candidate_min_support = 0.05;
  std::size_t candidate_top_k = 50;
  std::size_t evidence_max_len = 5;
  std::size_t evidence_top = 5;
};

struct GroupNode {
  std::uint32_t id = 0; // creation order; 0 is the root
  std::int32_t parent = -1;
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::uint32_t dendro_node = 0;
  std::vector<std::uint32_t> members; // indices into bank.sequences
  bool qualified = false;
  std::string status; // split | qualified | unqualified_external | unqualified_too_small |
                      // unqualified_singleton | unqualified_max_groups
  std::string label;  // mnemonic slot; leaves get GRP1.. by formation order
  std::vector<SupportResult> top_patterns;          // internal evidence
  std::vector<DiscriminationResult> split_evidence; // external evidence of the attempted split
  bool split_attempted = false;
  bool split_passed = false;

  bool is_leaf() const { return left < 0; }
};

struct GroupTree {
  std::vector<GroupNode> nodes;
  std::vector<std::uint32_t> leaves; // node ids, formation order
};

namespace detail {

struct InternalCheck {
  bool qualified = false;
  std::vector<SupportResult> top_patterns;
};

inline InternalCheck internal_validation(std::span<const EventView> group,
                                         const ClusterParams& params, std::size_t alphabet_size) {
  InternalCheck out;
  // A length->=L pattern at support s implies its length-L prefix at support
  // >= s, so probing at exactly min_subseq_len is enough.
  auto qualifying = mine_frequent(group, params.internal_support_threshold,
                                  params.min_subseq_len, alphabet_size);
  for (const SupportResult& r : qualifying) {
    if (r.pattern.size() >= params.min_subseq_len) {
      out.qualified = true;
      break;
    }
  }
  auto evidence =
      mine_frequent(group, params.candidate_min_support, params.evidence_max_len, alphabet_size);
  if (evidence.size() > params.evidence_top) evidence.resize(params.evidence_top);
  out.top_patterns = std::move(evidence);
  return out;
}

} // namespace detail

inline GroupTree stepwise_cluster(const SequenceBank& bank, const CondensedDistanceMatrix& dm,
                                  const ClusterParams& params) {
  if (bank.sequences.size() != dm.size())
    throw Error("stepwise_cluster: bank and distance matrix disagree on sequence count");
  if (!(params.p_threshold > 0.0) || params.max_groups < 1 || params.min_subseq_len < 1)
    throw Error("stepwise_cluster: invalid parameters");

  const Dendrogram dendro = ward_linkage(dm);
  const std::size_t alphabet_size = bank.alphabet.size();

  GroupTree tree;
  auto make_node = [&](std::uint32_t dendro_node, std::int32_t parent) -> std::uint32_t {
    GroupNode node;
    node.id = static_cast<std::uint32_t>(tree.nodes.size());
    node.parent = parent;
    node.dendro_node = dendro_node;
    node.members = dendro.leaves_under(dendro_node);
    auto views = event_views(bank, node.members);
    auto check = detail::internal_validation(views, params, alphabet_size);
    node.qualified = check.qualified;
    node.top_patterns = std::move(check.top_patterns);
    tree.nodes.push_back(std::move(node));
    return tree.nodes.back().id;
  };

  make_node(dendro.root(), -1);

  std::size_t leaf_count = 1;
  bool first_step = true; // the two-cluster solution is always attempted
  for (;;) {
    if (leaf_count >= params.max_groups) break;

    // pick the largest splittable unqualified leaf (ties: earliest created)
    std::int32_t pick = -1;
    for (const GroupNode& n : tree.nodes) {
      if (!n.is_leaf() || !n.status.empty()) continue;
      if (n.qualified && !(first_step && n.id == 0)) continue;
      if (dendro.is_leaf(n.dendro_node)) continue;
      if (n.members.size() < params.min_group_size) continue;
      if (pick < 0 || n.members.size() > tree.nodes[pick].members.size()) pick = static_cast<std::int32_t>(n.id);
    }
    if (pick < 0) break;
    first_step = false;

    GroupNode& parent = tree.nodes[pick];
    const Merge& m = dendro.merge_of(parent.dendro_node);
    auto left_members = dendro.leaves_under(m.left);
    auto right_members = dendro.leaves_under(m.right);
    auto g1 = event_views(bank, left_members);
    auto g2 = event_views(bank, right_members);

    auto candidates = discrimination_candidates(g1, g2, params.evidence_max_len, alphabet_size,
                                                params.candidate_min_support, params.candidate_top_k);
    auto results = discriminate(g1, g2, candidates);
    const bool passed =
        !results.empty() && !results.front().degenerate && results.front().p_value <= params.p_threshold;

    parent.split_attempted = true;
    parent.split_passed = passed;
    parent.split_evidence = results;
    if (parent.split_evidence.size() > 2 * params.evidence_top)
      parent.split_evidence.resize(2 * params.evidence_top);

    if (!passed) {
      // forced split failed external validation: keep the group whole
      tree.nodes[pick].status = tree.nodes[pick].qualified ? "qualified" : "unqualified_external";
      continue;
    }

    const std::uint32_t left_id = make_node(m.left, pick);
    const std::uint32_t right_id = make_node(m.right, pick);
    tree.nodes[pick].left = static_cast<std::int32_t>(left_id);
    tree.nodes[pick].right = static_cast<std::int32_t>(right_id);
    tree.nodes[pick].status = "split";
    ++leaf_count;
  }

  // finalize leaf statuses and labels
  std::uint32_t next_label = 1;
  for (GroupNode& n : tree.nodes) {
    if (!n.is_leaf()) continue;
    if (n.status.empty()) {
      if (n.qualified)
        n.status = "qualified";
      else if (dendro.is_leaf(n.dendro_node))
        n.status = "unqualified_singleton";
      else if (n.members.size() < params.min_group_size)
        n.status = "unqualified_too_small";
      else // splittable but untouched: the loop stopped at the group cap
        n.status = "unqualified_max_groups";
    }
    n.label = "GRP" + std::to_string(next_label++);
    tree.leaves.push_back(n.id);
  }
  return tree;
}

struct GroupStats {
  std::uint32_t n_patients = 0;
  double pct_patients = 0.0;
  std::uint64_t n_events = 0;
  double pct_events = 0.0;
  std::uint32_t min_events = 0;
  std::uint32_t max_events = 0;
  double mean_events = 0.0;
  double median_events = 0.0;
  bool has_times = false;
  double mean_event_time = 0.0;
  double median_event_time = 0.0;
  double mean_span = 0.0;
  double median_span = 0.0;
};

namespace detail {

inline double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

} // namespace detail

// Per-group summary: patient/event counts and shares of the bank, events per
// patient, event timing and per-patient time span (all in months).
inline GroupStats group_stats(const SequenceBank& bank, std::span<const std::uint32_t> members) {
  if (members.empty()) throw Error("group_stats: group is empty");

  std::uint64_t bank_events = 0;
  for (const Sequence& s : bank.sequences) bank_events += s.size();

  GroupStats g;
  g.n_patients = static_cast<std::uint32_t>(members.size());
  g.pct_patients = 100.0 * static_cast<double>(members.size()) / static_cast<double>(bank.sequences.size());

  std::vector<double> lengths, event_times, spans;
  g.has_times = true;
  for (std::uint32_t idx : members) {
    const Sequence& s = bank.sequences.at(idx);
    g.n_events += s.size();
    lengths.push_back(static_cast<double>(s.size()));
    if (!s.has_times()) {
      g.has_times = false;
      continue;
    }
    for (double t : s.times) event_times.push_back(t);
    spans.push_back(s.times.back() - s.times.front());
  }
  g.pct_events = bank_events == 0 ? 0.0 : 100.0 * static_cast<double>(g.n_events) / static_cast<double>(bank_events);

  auto [mn, mx] = std::minmax_element(lengths.begin(), lengths.end());
  g.min_events = static_cast<std::uint32_t>(*mn);
  g.max_events = static_cast<std::uint32_t>(*mx);
  double lsum = 0.0;
  for (double v : lengths) lsum += v;
  g.mean_events = lsum / static_cast<double>(lengths.size());
  g.median_events = detail::median_of(lengths);

  if (g.has_times) {
    double tsum = 0.0, ssum = 0.0;
    for (double v : event_times) tsum += v;
    for (double v : spans) ssum += v;
    g.mean_event_time = tsum / static_cast<double>(event_times.size());
    g.median_event_time = detail::median_of(event_times);
    g.mean_span = ssum / static_cast<double>(spans.size());
    g.median_span = detail::median_of(spans);
  }
  return g;
}

} // namespace trajmine
