#pragma once
// Agglomerative Ward clustering over a precomputed dissimilarity matrix via
// the Lance-Williams recurrence, plus dendrogram cutting and bisection.
//
// Merge selection is exact greedy: at every step the pair of clusters at
// minimal current distance is merged, ties broken by the lexicographically
// smallest (i, j) cluster-id pair. Cluster ids follow the usual convention:
// leaves are 0..n-1, the t-th merge creates id n+t.

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "trajmine/distance.hpp"
#include "trajmine/events.hpp"

namespace trajmine {

struct Merge {
  std::uint32_t left;  // smaller cluster id
  std::uint32_t right; // larger cluster id
  double height;       // inter-cluster distance at merge time
  std::uint32_t size;  // members of the merged cluster
};

struct Dendrogram {
  std::uint32_t n_leaves = 0;
  std::vector<Merge> merges; // n_leaves - 1 entries, in merge order

  std::uint32_t root() const { return n_leaves + static_cast<std::uint32_t>(merges.size()) - 1; }
  bool is_leaf(std::uint32_t node) const { return node < n_leaves; }

  const Merge& merge_of(std::uint32_t node) const {
    if (is_leaf(node)) throw Error("dendrogram node " + std::to_string(node) + " is a leaf");
    return merges.at(node - n_leaves);
  }

  std::uint32_t size_of(std::uint32_t node) const {
    return is_leaf(node) ? 1 : merge_of(node).size;
  }

  std::vector<std::uint32_t> leaves_under(std::uint32_t node) const {
    std::vector<std::uint32_t> out;
    std::vector<std::uint32_t> stack{node};
    while (!stack.empty()) {
      std::uint32_t v = stack.back();
      stack.pop_back();
      if (is_leaf(v)) {
        out.push_back(v);
      } else {
        const Merge& m = merge_of(v);
        stack.push_back(m.right);
        stack.push_back(m.left);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }
};

namespace detail {

// Working state indexed by slot (0..n-1). A merge reuses the lower slot of
// the pair and deactivates the other; cluster ids grow past n as merges
// happen. Each active slot caches its nearest active neighbour under the
// (distance, id-pair) order, which stays exact because only distances
// involving the merged clusters ever change.
class WardState {
 public:
  explicit WardState(const CondensedDistanceMatrix& dm)
      : n_(dm.size()),
        dist_(dm.values().begin(), dm.values().end()),
        active_(n_, true),
        id_(n_),
        size_(n_, 1),
        cand_dist_(n_, 0.0),
        cand_slot_(n_, 0) {
    for (std::size_t s = 0; s < n_; ++s) id_[s] = static_cast<std::uint32_t>(s);
    for (std::size_t s = 0; s < n_; ++s) recompute_candidate(s);
  }

  Dendrogram run() {
    Dendrogram out;
    out.n_leaves = static_cast<std::uint32_t>(n_);
    out.merges.reserve(n_ - 1);
    std::uint32_t next_id = static_cast<std::uint32_t>(n_);
    std::size_t remaining = n_;

    while (remaining > 1) {
      const std::size_t s = best_slot();
      const std::size_t t = cand_slot_[s];
      const double d_ij = cand_dist_[s];
      const std::uint32_t lo = std::min(id_[s], id_[t]);
      const std::uint32_t hi = std::max(id_[s], id_[t]);
      const std::uint32_t merged_size = size_[s] + size_[t];

      merge_slots(std::min(s, t), std::max(s, t), d_ij, next_id);
      out.merges.push_back({lo, hi, d_ij, merged_size});
      ++next_id;
      --remaining;
    }
    return out;
  }

 private:
  double& d(std::size_t a, std::size_t b) {
    return dist_[CondensedDistanceMatrix::condensed_index(a, b, n_)];
  }

  // (distance, min id, max id) lexicographic order between candidate pairs.
  bool pair_less(double da, std::uint32_t a1, std::uint32_t a2, double db, std::uint32_t b1,
                 std::uint32_t b2) const {
    if (da != db) return da < db;
    const std::uint32_t alo = std::min(a1, a2), ahi = std::max(a1, a2);
    const std::uint32_t blo = std::min(b1, b2), bhi = std::max(b1, b2);
    if (alo != blo) return alo < blo;
    return ahi < bhi;
  }

  void recompute_candidate(std::size_t s) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_t = s;
    for (std::size_t t = 0; t < n_; ++t) {
      if (t == s || !active_[t]) continue;
      const double dt = d(s, t);
      if (best_t == s || pair_less(dt, id_[s], id_[t], best, id_[s], id_[best_t])) {
        best = dt;
        best_t = t;
      }
    }
    cand_dist_[s] = best;
    cand_slot_[s] = best_t;
  }

  std::size_t best_slot() const {
    std::size_t best = n_;
    for (std::size_t s = 0; s < n_; ++s) {
      if (!active_[s] || cand_slot_[s] == s) continue;
      if (best == n_ ||
          pair_less(cand_dist_[s], id_[s], id_[cand_slot_[s]], cand_dist_[best], id_[best],
                    id_[cand_slot_[best]])) {
        best = s;
      }
    }
    if (best == n_) throw Error("ward_linkage internal error: no candidate pair");
    return best;
  }

  void merge_slots(std::size_t keep, std::size_t drop, double d_ij, std::uint32_t new_id) {
    const double si = size_[keep], sj = size_[drop];
    active_[drop] = false;

    // Lance-Williams update with Ward coefficients:
    //   D(ij,k) = (|i|+|k|)/T * D(ik) + (|j|+|k|)/T * D(jk) - |k|/T * D(ij),
    // T = |i|+|j|+|k|; gamma = 0.
    for (std::size_t k = 0; k < n_; ++k) {
      if (!active_[k] || k == keep) continue;
      const double sk = size_[k];
      const double total = si + sj + sk;
      const double updated =
          ((si + sk) / total) * d(keep, k) + ((sj + sk) / total) * d(drop, k) - (sk / total) * d_ij;
      d(keep, k) = updated;
    }

    id_[keep] = new_id;
    size_[keep] = static_cast<std::uint32_t>(si + sj);

    for (std::size_t k = 0; k < n_; ++k) {
      if (!active_[k] || k == keep) continue;
      if (cand_slot_[k] == keep || cand_slot_[k] == drop) {
        recompute_candidate(k);
      } else {
        const double dk = d(keep, k);
        if (pair_less(dk, id_[k], new_id, cand_dist_[k], id_[k], id_[cand_slot_[k]])) {
          cand_dist_[k] = dk;
          cand_slot_[k] = keep;
        }
      }
    }
    recompute_candidate(keep);
  }

  std::size_t n_;
  std::vector<double> dist_; // condensed, slot-indexed
  std::vector<char> active_;
  std::vector<std::uint32_t> id_;
  std::vector<std::uint32_t> size_;
  std::vector<double> cand_dist_;
  std::vector<std::size_t> cand_slot_;
};

} // namespace detail

inline Dendrogram ward_linkage(const CondensedDistanceMatrix& dm) {
  if (dm.size() < 2) throw Error("ward_linkage requires at least 2 sequences");
  detail::WardState state(dm);
  return state.run();
}

// Undo the last k-1 merges; each remaining subtree is one group. Groups are
// ordered by smallest member leaf.
inline std::vector<std::vector<std::uint32_t>> cut(const Dendrogram& dendro, std::uint32_t k) {
  if (k < 1 || k > dendro.n_leaves)
    throw Error("cut: group count " + std::to_string(k) + " out of range [1, " +
                std::to_string(dendro.n_leaves) + "]");

  const std::uint32_t n_merges = static_cast<std::uint32_t>(dendro.merges.size());
  const std::uint32_t kept = n_merges - (k - 1);
  std::vector<std::uint32_t> roots;
  if (k == 1) {
    roots.push_back(dendro.root());
  } else {
    auto is_removed = [&](std::uint32_t node) {
      return !dendro.is_leaf(node) && node - dendro.n_leaves >= kept;
    };
    for (std::uint32_t mi = kept; mi < n_merges; ++mi) {
      const Merge& m = dendro.merges[mi];
      if (!is_removed(m.left)) roots.push_back(m.left);
      if (!is_removed(m.right)) roots.push_back(m.right);
    }
  }

  std::vector<std::vector<std::uint32_t>> groups;
  groups.reserve(roots.size());
  for (std::uint32_t r : roots) groups.push_back(dendro.leaves_under(r));
  std::sort(groups.begin(), groups.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return groups;
}

// Split a group (identified by its dendrogram node) at its topmost merge.
inline std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> bisect_group(
    const Dendrogram& dendro, std::uint32_t node) {
  if (dendro.is_leaf(node)) throw Error("bisect_group: cannot split a singleton group");
  const Merge& m = dendro.merge_of(node);
  return {dendro.leaves_under(m.left), dendro.leaves_under(m.right)};
}

} // namespace trajmine
