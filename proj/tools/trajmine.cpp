// trajmine — mine recurring patterns from categorical event sequences:
// LCS-based distances, Ward clustering with step-wise split validation,
// frequent/discriminative subsequences, and position-indexed transition
// graphs, emitted as CSV/JSON/DOT artifacts.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "trajmine/pipeline.hpp"
#include "trajmine/serialize.hpp"
#include "trajmine/simulate.hpp"
#include "trajmine/ward.hpp"

namespace {

using namespace trajmine;
namespace fs = std::filesystem;

// Option values plus the CLI11 handles needed to tell "set by the user" from
// "left at default" (flags must win over the config file).
struct Opts {
  std::string config, input, alphabet, out, matrix, membership, graph, g1, g2;
  std::uint64_t seed = 0;
  double p_threshold = 0.01;
  double internal_support = 0.5;
  double min_support = 0.1;
  double prob_threshold = 0.1;
  std::uint64_t max_len = 5;
  std::uint64_t max_groups = 16;
  std::uint64_t min_group_size = 30;
  std::uint32_t freq_threshold = 30;
  std::uint32_t groups = 0;

  CLI::Option* op_config = nullptr;
  CLI::Option* op_input = nullptr;
  CLI::Option* op_alphabet = nullptr;
  CLI::Option* op_out = nullptr;
  CLI::Option* op_seed = nullptr;
  CLI::Option* op_p = nullptr;
  CLI::Option* op_internal = nullptr;
  CLI::Option* op_min_support = nullptr;
  CLI::Option* op_prob = nullptr;
  CLI::Option* op_max_len = nullptr;
  CLI::Option* op_max_groups = nullptr;
  CLI::Option* op_min_group_size = nullptr;
  CLI::Option* op_freq = nullptr;
};

bool set_by_user(const CLI::Option* opt) { return opt != nullptr && opt->count() > 0; }

// Start from defaults, overlay the config file, then overlay explicit flags.
PipelineConfig resolve_config(const Opts& o) {
  PipelineConfig c;
  if (set_by_user(o.op_config)) c = load_config(o.config);
  if (set_by_user(o.op_input)) c.input = o.input;
  if (set_by_user(o.op_alphabet)) c.alphabet_path = o.alphabet;
  if (set_by_user(o.op_out)) c.out = o.out;
  if (set_by_user(o.op_seed)) c.seed = o.seed;
  if (set_by_user(o.op_p)) c.clustering.p_threshold = o.p_threshold;
  if (set_by_user(o.op_internal)) c.clustering.internal_support_threshold = o.internal_support;
  if (set_by_user(o.op_max_groups)) c.clustering.max_groups = o.max_groups;
  if (set_by_user(o.op_min_group_size)) c.clustering.min_group_size = o.min_group_size;
  if (set_by_user(o.op_min_support)) c.mining.min_support = o.min_support;
  if (set_by_user(o.op_max_len)) c.mining.max_len = o.max_len;
  if (set_by_user(o.op_prob)) c.markov.prob_threshold = o.prob_threshold;
  if (set_by_user(o.op_freq)) c.markov.freq_threshold = o.freq_threshold;
  return c;
}

fs::path require_out(const PipelineConfig& c) {
  if (c.out.empty()) throw Error("no output directory (--out or config)");
  fs::path out(c.out);
  fs::create_directories(out);
  return out;
}

SequenceBank load_bank(const PipelineConfig& c) {
  if (c.input.empty()) throw Error("no input file (--input or config)");
  return ingest(c.input, resolve_alphabet(c.alphabet_path));
}

// Sort group labels with numeric suffixes in natural order (GRP2 < GRP10).
bool label_less(const std::string& a, const std::string& b) {
  auto split = [](const std::string& s) -> std::pair<std::string_view, long long> {
    std::size_t i = s.size();
    while (i > 0 && std::isdigit(static_cast<unsigned char>(s[i - 1]))) --i;
    long long num = -1;
    if (i < s.size()) num = std::stoll(s.substr(i));
    return {std::string_view(s).substr(0, i), num};
  };
  auto [pa, na] = split(a);
  auto [pb, nb] = split(b);
  if (pa != pb) return pa < pb;
  if (na != nb) return na < nb;
  return a < b;
}

// Group list for per-group commands: the membership file's groups, or the
// whole bank as a single "ALL" group when no membership is given.
std::vector<std::pair<std::string, std::vector<std::uint32_t>>> resolve_groups(
    const SequenceBank& bank, const std::string& membership_path) {
  std::vector<std::pair<std::string, std::vector<std::uint32_t>>> groups;
  if (membership_path.empty()) {
    std::vector<std::uint32_t> all(bank.sequences.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<std::uint32_t>(i);
    groups.emplace_back("ALL", std::move(all));
    return groups;
  }
  const Membership members = read_membership(membership_path);
  std::map<std::string, std::vector<std::uint32_t>> by_label;
  for (std::size_t i = 0; i < bank.sequences.size(); ++i) {
    auto it = members.find(bank.sequences[i].patient_id);
    if (it == members.end())
      throw Error("patient '" + bank.sequences[i].patient_id + "' missing from " + membership_path);
    by_label[it->second].push_back(static_cast<std::uint32_t>(i));
  }
  for (auto& [label, idx] : by_label) groups.emplace_back(label, std::move(idx));
  std::sort(groups.begin(), groups.end(),
            [](const auto& a, const auto& b) { return label_less(a.first, b.first); });
  return groups;
}

void attach_common(CLI::App* sub, Opts& o) {
  o.op_config = sub->add_option("--config", o.config, "JSON config file");
  o.op_input = sub->add_option("--input", o.input, "event CSV file");
  o.op_alphabet = sub->add_option("--alphabet", o.alphabet, "alphabet JSON file (default: built-in)");
  o.op_out = sub->add_option("--out", o.out, "output directory");
}

void attach_cluster_params(CLI::App* sub, Opts& o) {
  o.op_p = sub->add_option("--p-threshold", o.p_threshold, "split validation p-value threshold");
  o.op_internal =
      sub->add_option("--internal-support", o.internal_support, "internal qualification support");
  o.op_max_groups = sub->add_option("--max-groups", o.max_groups, "stop after this many groups");
  o.op_min_group_size =
      sub->add_option("--min-group-size", o.min_group_size, "smallest group worth splitting");
}

int cmd_ingest(const Opts& o) {
  PipelineConfig c = resolve_config(o);
  const fs::path out = require_out(c);
  const SequenceBank bank = load_bank(c);
  auto files = write_ingest_artifacts(out, bank);
  write_manifest(out, files, "ok");
  std::uint64_t events = 0;
  for (const Sequence& s : bank.sequences) events += s.size();
  std::cout << "ingest: " << bank.sequences.size() << " sequences, " << events << " events -> "
            << out.string() << "\n";
  return 0;
}

int cmd_distances(const Opts& o) {
  PipelineConfig c = resolve_config(o);
  const fs::path out = require_out(c);
  const SequenceBank bank = load_bank(c);
  const CondensedDistanceMatrix dm = distance_matrix(bank);
  auto files = write_distance_artifacts(out, dm);
  write_manifest(out, files, "ok");
  const DistanceStats s = distance_stats(dm);
  std::cout << "distances: " << s.count << " pairs, range [" << s.min << ", " << s.max
            << "], mean " << s.mean << " -> " << out.string() << "\n";
  return 0;
}

int cmd_cluster(const Opts& o) {
  PipelineConfig c = resolve_config(o);
  const fs::path out = require_out(c);
  const SequenceBank bank = load_bank(c);
  const CondensedDistanceMatrix dm =
      o.matrix.empty() ? distance_matrix(bank) : load_distance_matrix(o.matrix);
  if (dm.size() != bank.sequences.size())
    throw Error("distance matrix is for " + std::to_string(dm.size()) + " sequences, bank has " +
                std::to_string(bank.sequences.size()));

  if (o.groups > 0) { // plain cut, no validation loop
    const Dendrogram dendro = ward_linkage(dm);
    auto groups = cut(dendro, o.groups);
    std::vector<std::string> label_of(bank.sequences.size());
    for (std::size_t g = 0; g < groups.size(); ++g)
      for (std::uint32_t m : groups[g]) label_of[m] = "GRP" + std::to_string(g + 1);
    std::string csv = "patient_id,group_id\n";
    for (std::size_t i = 0; i < bank.sequences.size(); ++i)
      csv += bank.sequences[i].patient_id + "," + label_of[i] + "\n";
    detail::write_text_file(out / "membership.csv", csv);
    write_manifest(out, {"membership.csv"}, "ok");
    std::cout << "cluster: cut into " << groups.size() << " groups -> " << out.string() << "\n";
    return 0;
  }

  const GroupTree tree = stepwise_cluster(bank, dm, c.clustering);
  auto files = write_cluster_artifacts(out, bank, tree, c.clustering);
  write_manifest(out, files, "ok");
  std::cout << "cluster: " << tree.leaves.size() << " groups:";
  for (std::uint32_t leaf : tree.leaves) {
    const GroupNode& n = tree.nodes[leaf];
    std::cout << " " << n.label << "(" << n.members.size() << "," << n.status << ")";
  }
  std::cout << " -> " << out.string() << "\n";
  return 0;
}

int cmd_mine(const Opts& o) {
  PipelineConfig c = resolve_config(o);
  const fs::path out = require_out(c);
  const SequenceBank bank = load_bank(c);
  auto groups = resolve_groups(bank, o.membership);
  std::vector<std::string> files;
  for (const auto& [label, members] : groups)
    for (std::string& f : write_mining_artifacts(out, bank, label, members, c.mining))
      files.push_back(std::move(f));
  write_manifest(out, files, "ok");
  std::cout << "mine: " << groups.size() << " group(s) at support >= " << c.mining.min_support
            << " -> " << out.string() << "\n";
  return 0;
}

int cmd_discriminate(const Opts& o) {
  PipelineConfig c = resolve_config(o);
  const fs::path out = require_out(c);
  if (o.membership.empty()) throw Error("discriminate requires --membership");
  if (o.g1.empty() || o.g2.empty()) throw Error("discriminate requires --g1 and --g2");
  const SequenceBank bank = load_bank(c);
  const Membership members = read_membership(o.membership);
  auto m1 = group_members(bank, members, o.g1);
  auto m2 = group_members(bank, members, o.g2);
  if (m1.empty()) throw Error("group '" + o.g1 + "' has no members");
  if (m2.empty()) throw Error("group '" + o.g2 + "' has no members");
  auto v1 = event_views(bank, m1);
  auto v2 = event_views(bank, m2);
  auto candidates = discrimination_candidates(v1, v2, c.mining.max_len, bank.alphabet.size(),
                                              c.clustering.candidate_min_support,
                                              c.clustering.candidate_top_k);
  auto results = discriminate(v1, v2, candidates);
  const std::string stem = "discrimination_" + o.g1 + "_vs_" + o.g2;
  detail::write_text_file(out / (stem + ".csv"), discrimination_csv(results, bank.alphabet));
  detail::write_json_file(out / (stem + ".json"), discrimination_to_json(results, bank.alphabet));
  write_manifest(out, {stem + ".csv", stem + ".json"}, "ok");
  std::cout << "discriminate: " << results.size() << " candidate(s)";
  if (!results.empty())
    std::cout << ", best " << pattern_string(results.front().pattern, bank.alphabet) << " p="
              << results.front().p_value;
  std::cout << " -> " << out.string() << "\n";
  return 0;
}

int cmd_markov(const Opts& o) {
  PipelineConfig c = resolve_config(o);
  const fs::path out = require_out(c);
  const SequenceBank bank = load_bank(c);
  auto groups = resolve_groups(bank, o.membership);
  std::vector<std::string> files;
  for (const auto& [label, members] : groups)
    for (std::string& f : write_markov_artifacts(out, bank, label, members, c.markov))
      files.push_back(std::move(f));
  write_manifest(out, files, "ok");
  std::cout << "markov: " << groups.size() << " group(s), prob >= " << c.markov.prob_threshold
            << ", count >= " << c.markov.freq_threshold << " -> " << out.string() << "\n";
  return 0;
}

int cmd_render(const Opts& o) {
  PipelineConfig c = resolve_config(o);
  const fs::path out = require_out(c);
  if (o.graph.empty()) throw Error("render requires --graph (chain JSON)");
  const EventAlphabet alphabet = resolve_alphabet(c.alphabet_path);
  const ChainGraph graph = chains_from_json(detail::read_json_file(o.graph), alphabet);
  const std::string name = fs::path(o.graph).stem().string() + ".dot";
  detail::write_text_file(out / name, to_dot(graph, alphabet));
  write_manifest(out, {name}, "ok");
  std::cout << "render: " << graph.nodes.size() << " nodes, " << graph.edges.size() << " edges -> "
            << (out / name).string() << "\n";
  return 0;
}

int cmd_stats(const Opts& o) {
  PipelineConfig c = resolve_config(o);
  const fs::path out = require_out(c);
  const SequenceBank bank = load_bank(c);
  auto groups = resolve_groups(bank, o.membership);
  detail::write_text_file(out / "event_frequencies.csv", event_frequencies_csv(bank));
  std::vector<std::string> files{"event_frequencies.csv"};
  for (std::string& f : write_stats_artifacts(out, bank, groups)) files.push_back(std::move(f));
  write_manifest(out, files, "ok");
  std::cout << "stats: " << bank.sequences.size() << " sequences, " << groups.size()
            << " group(s) -> " << out.string() << "\n";
  return 0;
}

int cmd_simulate(const Opts& o) {
  // --config holds the generator spec here, not a pipeline config
  if (!set_by_user(o.op_config)) throw Error("simulate requires --config (generator spec JSON)");
  if (o.out.empty()) throw Error("no output directory (--out)");
  const fs::path out(o.out);
  fs::create_directories(out);
  const EventAlphabet alphabet = resolve_alphabet(o.alphabet);
  GeneratorSpec spec = generator_spec_from_json(detail::read_json_file(o.config), alphabet);
  if (set_by_user(o.op_seed)) spec.seed = o.seed;
  const SimulationResult sim = simulate(spec, alphabet);

  detail::write_text_file(out / "events.csv", event_csv(sim.bank));
  std::string truth = "patient_id,group\n";
  for (std::size_t i = 0; i < sim.bank.sequences.size(); ++i)
    truth += sim.bank.sequences[i].patient_id + "," + sim.group_of[i] + "\n";
  detail::write_text_file(out / "groups_truth.csv", truth);
  detail::write_json_file(out / "generator_spec.json", generator_spec_to_json(spec, alphabet));
  write_manifest(out, {"events.csv", "groups_truth.csv", "generator_spec.json"}, "ok");
  std::cout << "simulate: " << sim.bank.sequences.size() << " patients, seed " << spec.seed
            << " -> " << out.string() << "\n";
  return 0;
}

int cmd_pipeline(const Opts& o) {
  PipelineConfig c = resolve_config(o);
  const PipelineResult r = run_pipeline(c);
  std::cout << "pipeline: " << r.n_sequences << " sequences -> " << r.n_groups << " groups, "
            << r.files.size() << " artifacts in " << c.out << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"mine recurring patterns from categorical event sequences"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "trajmine 0.1.0");

  Opts ing, dis, clu, mne, dsc, mar, ren, sta, sim, pip;
  int rc = 0;
  auto run = [&rc](auto fn, Opts& o) {
    return [&rc, fn, &o]() { rc = fn(o); };
  };

  CLI::App* s = app.add_subcommand("ingest", "normalize an event CSV into sequences");
  attach_common(s, ing);
  s->callback(run(cmd_ingest, ing));

  s = app.add_subcommand("distances", "pairwise LCS distance matrix and stats");
  attach_common(s, dis);
  s->callback(run(cmd_distances, dis));

  s = app.add_subcommand("cluster", "Ward clustering with step-wise split validation");
  attach_common(s, clu);
  attach_cluster_params(s, clu);
  s->add_option("--matrix", clu.matrix, "reuse a saved distance_matrix.bin");
  s->add_option("--groups", clu.groups, "plain dendrogram cut into N groups (skips validation)");
  s->callback(run(cmd_cluster, clu));

  s = app.add_subcommand("mine", "frequent subsequences and position histograms per group");
  attach_common(s, mne);
  mne.op_min_support = s->add_option("--min-support", mne.min_support, "minimum support");
  mne.op_max_len = s->add_option("--max-len", mne.max_len, "longest pattern mined");
  s->add_option("--membership", mne.membership, "membership CSV (default: whole bank as ALL)");
  s->callback(run(cmd_mine, mne));

  s = app.add_subcommand("discriminate", "chi-square discriminative subsequences between two groups");
  attach_common(s, dsc);
  dsc.op_max_len = s->add_option("--max-len", dsc.max_len, "longest candidate pattern");
  s->add_option("--membership", dsc.membership, "membership CSV")->required();
  s->add_option("--g1", dsc.g1, "first group label")->required();
  s->add_option("--g2", dsc.g2, "second group label")->required();
  s->callback(run(cmd_discriminate, dsc));

  s = app.add_subcommand("markov", "position-indexed transition model and chain graph per group");
  attach_common(s, mar);
  mar.op_prob = s->add_option("--prob-threshold", mar.prob_threshold, "minimum edge probability");
  mar.op_freq = s->add_option("--freq-threshold", mar.freq_threshold, "minimum edge count");
  s->add_option("--membership", mar.membership, "membership CSV (default: whole bank as ALL)");
  s->callback(run(cmd_markov, mar));

  s = app.add_subcommand("render", "render a chain graph JSON as Graphviz DOT");
  attach_common(s, ren);
  s->add_option("--graph", ren.graph, "chain graph JSON file")->required();
  s->callback(run(cmd_render, ren));

  s = app.add_subcommand("stats", "event-frequency and per-group summary tables");
  attach_common(s, sta);
  s->add_option("--membership", sta.membership, "membership CSV (default: whole bank as ALL)");
  s->callback(run(cmd_stats, sta));

  s = app.add_subcommand("simulate", "generate a synthetic event CSV from a generator spec");
  attach_common(s, sim);
  sim.op_seed = s->add_option("--seed", sim.seed, "override the spec's RNG seed");
  s->callback(run(cmd_simulate, sim));

  s = app.add_subcommand("pipeline", "run ingest through rendering in one pass");
  attach_common(s, pip);
  attach_cluster_params(s, pip);
  pip.op_seed = s->add_option("--seed", pip.seed, "RNG seed recorded in the run config");
  pip.op_min_support = s->add_option("--min-support", pip.min_support, "mining minimum support");
  pip.op_max_len = s->add_option("--max-len", pip.max_len, "mining maximum pattern length");
  pip.op_prob = s->add_option("--prob-threshold", pip.prob_threshold, "chain edge probability cutoff");
  pip.op_freq = s->add_option("--freq-threshold", pip.freq_threshold, "chain edge count cutoff");
  s->callback(run(cmd_pipeline, pip));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
