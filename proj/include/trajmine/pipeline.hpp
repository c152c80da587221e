#pragma once
// End-to-end orchestration: resolved run configuration, the per-stage artifact
// writers (shared with the CLI subcommands so `pipeline` and a manual chain of
// subcommands produce byte-identical files), and the full pipeline driver.

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "trajmine/distance.hpp"
#include "trajmine/dot.hpp"
#include "trajmine/events.hpp"
#include "trajmine/ingest.hpp"
#include "trajmine/markov.hpp"
#include "trajmine/serialize.hpp"
#include "trajmine/stepwise.hpp"
#include "trajmine/subseq.hpp"

namespace trajmine {

struct MiningParams {
  double min_support = 0.1;
  std::size_t max_len = 5;
};

struct MarkovParams {
  double prob_threshold = 0.1;
  std::uint32_t freq_threshold = 30;
};

struct PipelineConfig {
  std::string input;         // event CSV
  std::string alphabet_path; // empty = built-in default alphabet
  std::string out;           // output directory
  std::uint64_t seed = 0;    // recorded for provenance; the pipeline itself is deterministic
  ClusterParams clustering;
  MiningParams mining;
  MarkovParams markov;
};

inline Json config_to_json(const PipelineConfig& c) {
  Json doc;
  doc["input"] = c.input;
  doc["alphabet"] = c.alphabet_path;
  doc["out"] = c.out;
  doc["seed"] = c.seed;
  doc["clustering"] = {{"p_threshold", c.clustering.p_threshold},
                       {"internal_support_threshold", c.clustering.internal_support_threshold},
                       {"min_subseq_len", c.clustering.min_subseq_len},
                       {"max_groups", c.clustering.max_groups},
                       {"min_group_size", c.clustering.min_group_size}};
  doc["mining"] = {{"min_support", c.mining.min_support}, {"max_len", c.mining.max_len}};
  doc["markov"] = {{"prob_threshold", c.markov.prob_threshold},
                   {"freq_threshold", c.markov.freq_threshold}};
  return doc;
}

inline PipelineConfig config_from_json(const Json& doc) {
  PipelineConfig c;
  c.input = doc.value("input", "");
  c.alphabet_path = doc.value("alphabet", "");
  c.out = doc.value("out", "");
  c.seed = doc.value("seed", std::uint64_t{0});
  if (doc.contains("clustering")) {
    const Json& j = doc.at("clustering");
    c.clustering.p_threshold = j.value("p_threshold", c.clustering.p_threshold);
    c.clustering.internal_support_threshold =
        j.value("internal_support_threshold", c.clustering.internal_support_threshold);
    c.clustering.min_subseq_len = j.value("min_subseq_len", c.clustering.min_subseq_len);
    c.clustering.max_groups = j.value("max_groups", c.clustering.max_groups);
    c.clustering.min_group_size = j.value("min_group_size", c.clustering.min_group_size);
  }
  if (doc.contains("mining")) {
    const Json& j = doc.at("mining");
    c.mining.min_support = j.value("min_support", c.mining.min_support);
    c.mining.max_len = j.value("max_len", c.mining.max_len);
  }
  if (doc.contains("markov")) {
    const Json& j = doc.at("markov");
    c.markov.prob_threshold = j.value("prob_threshold", c.markov.prob_threshold);
    c.markov.freq_threshold = j.value("freq_threshold", c.markov.freq_threshold);
  }
  return c;
}

inline PipelineConfig load_config(const std::filesystem::path& path) {
  return config_from_json(detail::read_json_file(path));
}

inline EventAlphabet resolve_alphabet(const std::string& alphabet_path) {
  if (alphabet_path.empty()) return default_alphabet();
  return load_alphabet(alphabet_path);
}

// ---- stage artifact writers (file names are the pipeline contract) ----

inline std::vector<std::string> write_ingest_artifacts(const std::filesystem::path& out_dir,
                                                       const SequenceBank& bank) {
  detail::write_text_file(out_dir / "sequences.csv", sequences_csv(bank));
  detail::write_text_file(out_dir / "event_frequencies.csv", event_frequencies_csv(bank));
  return {"sequences.csv", "event_frequencies.csv"};
}

inline std::vector<std::string> write_distance_artifacts(const std::filesystem::path& out_dir,
                                                         const CondensedDistanceMatrix& dm) {
  save_distance_matrix(dm, out_dir / "distance_matrix.bin");
  detail::write_json_file(out_dir / "distance_stats.json", distance_stats_to_json(distance_stats(dm)));
  return {"distance_matrix.bin", "distance_stats.json"};
}

inline std::vector<std::string> write_cluster_artifacts(const std::filesystem::path& out_dir,
                                                        const SequenceBank& bank, const GroupTree& tree,
                                                        const ClusterParams& params) {
  detail::write_json_file(out_dir / "group_tree.json", group_tree_to_json(tree, bank, params));
  detail::write_text_file(out_dir / "membership.csv", membership_csv(bank, tree));
  return {"group_tree.json", "membership.csv"};
}

// Frequent patterns + position histogram for one named group of sequences.
inline std::vector<std::string> write_mining_artifacts(const std::filesystem::path& out_dir,
                                                       const SequenceBank& bank,
                                                       const std::string& label,
                                                       std::span<const std::uint32_t> members,
                                                       const MiningParams& mining) {
  auto views = event_views(bank, members);
  auto patterns = mine_frequent(views, mining.min_support, mining.max_len, bank.alphabet.size());
  detail::write_text_file(out_dir / ("patterns_" + label + ".csv"), patterns_csv(patterns, bank.alphabet));
  detail::write_json_file(out_dir / ("patterns_" + label + ".json"),
                          patterns_to_json(patterns, bank.alphabet));
  auto hist = position_histogram(views, bank.alphabet.size());
  detail::write_text_file(out_dir / ("histogram_" + label + ".csv"), histogram_csv(hist, bank.alphabet));
  return {"patterns_" + label + ".csv", "patterns_" + label + ".json", "histogram_" + label + ".csv"};
}

// Transition model, thresholded chain graph, and its DOT rendering.
inline std::vector<std::string> write_markov_artifacts(const std::filesystem::path& out_dir,
                                                       const SequenceBank& bank,
                                                       const std::string& label,
                                                       std::span<const std::uint32_t> members,
                                                       const MarkovParams& markov) {
  auto views = event_views(bank, members);
  auto model = fit_transitions(views);
  detail::write_json_file(out_dir / ("markov_" + label + ".json"), model_to_json(model, bank.alphabet));
  auto chains = extract_chains(model, markov.prob_threshold, markov.freq_threshold);
  detail::write_json_file(out_dir / ("chains_" + label + ".json"), chains_to_json(chains, bank.alphabet));
  detail::write_text_file(out_dir / ("chains_" + label + ".dot"), to_dot(chains, bank.alphabet));
  return {"markov_" + label + ".json", "chains_" + label + ".json", "chains_" + label + ".dot"};
}

inline std::vector<std::string> write_group_artifacts(const std::filesystem::path& out_dir,
                                                      const SequenceBank& bank, const std::string& label,
                                                      std::span<const std::uint32_t> members,
                                                      const MiningParams& mining,
                                                      const MarkovParams& markov) {
  auto files = write_mining_artifacts(out_dir, bank, label, members, mining);
  for (std::string& f : write_markov_artifacts(out_dir, bank, label, members, markov))
    files.push_back(std::move(f));
  return files;
}

inline std::vector<std::string> write_stats_artifacts(
    const std::filesystem::path& out_dir, const SequenceBank& bank,
    const std::vector<std::pair<std::string, std::vector<std::uint32_t>>>& groups) {
  std::vector<std::pair<std::string, GroupStats>> rows;
  for (const auto& [label, members] : groups) rows.emplace_back(label, group_stats(bank, members));
  detail::write_text_file(out_dir / "group_stats.csv", group_stats_csv(rows));
  return {"group_stats.csv"};
}

// ---- full pipeline ----

struct PipelineResult {
  std::size_t n_sequences = 0;
  std::size_t n_groups = 0;
  std::vector<std::string> files; // everything listed in the manifest
};

inline PipelineResult run_pipeline(const PipelineConfig& config, unsigned threads = 0) {
  if (config.input.empty()) throw Error("pipeline: no input file configured");
  if (config.out.empty()) throw Error("pipeline: no output directory configured");

  const std::filesystem::path out_dir(config.out);
  std::filesystem::create_directories(out_dir);

  std::vector<std::string> files;
  auto add = [&](std::vector<std::string> names) {
    for (std::string& n : names) files.push_back(std::move(n));
  };
  std::string stage = "configure";
  try {
    detail::write_json_file(out_dir / "config.json", config_to_json(config));
    files.push_back("config.json");

    const EventAlphabet alphabet = resolve_alphabet(config.alphabet_path);
    detail::write_json_file(out_dir / "alphabet.json", alphabet_to_json(alphabet));
    files.push_back("alphabet.json");

    stage = "ingest";
    const SequenceBank bank = ingest(config.input, alphabet);
    add(write_ingest_artifacts(out_dir, bank));

    stage = "distances";
    const CondensedDistanceMatrix dm = distance_matrix(bank, threads);
    add(write_distance_artifacts(out_dir, dm));

    stage = "cluster";
    const GroupTree tree = stepwise_cluster(bank, dm, config.clustering);
    add(write_cluster_artifacts(out_dir, bank, tree, config.clustering));

    stage = "groups";
    std::vector<std::pair<std::string, std::vector<std::uint32_t>>> groups;
    for (std::uint32_t leaf : tree.leaves)
      groups.emplace_back(tree.nodes[leaf].label, tree.nodes[leaf].members);
    for (const auto& [label, members] : groups)
      add(write_group_artifacts(out_dir, bank, label, members, config.mining, config.markov));
    add(write_stats_artifacts(out_dir, bank, groups));

    write_manifest(out_dir, files, "ok");

    PipelineResult result;
    result.n_sequences = bank.sequences.size();
    result.n_groups = tree.leaves.size();
    result.files = std::move(files);
    result.files.push_back("manifest.json");
    return result;
  } catch (...) {
    // Leave a manifest describing how far the run got, then re-throw for the
    // caller to report.
    try {
      write_manifest(out_dir, files, "failed", stage);
    } catch (...) {
    }
    throw;
  }
}

} // namespace trajmine
