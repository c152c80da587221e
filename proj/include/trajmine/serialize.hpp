#pragma once
// Artifact serialization: alphabet / generator-spec / chain-graph JSON,
// CSV reports (sequences, frequencies, membership, patterns, discrimination,
// histograms, group stats), and the hashed output manifest. All writers are
// deterministic: fixed field order, sorted rows, shortest round-trip doubles.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "trajmine/distance.hpp"
#include "trajmine/events.hpp"
#include "trajmine/ingest.hpp"
#include "trajmine/markov.hpp"
#include "trajmine/simulate.hpp"
#include "trajmine/stepwise.hpp"
#include "trajmine/subseq.hpp"

namespace trajmine {

using Json = nlohmann::ordered_json;

namespace detail {

// Shortest decimal string that round-trips the double (to_chars default).
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw Error("cannot format double");
  return std::string(buf, ptr);
}

inline void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("write failed: " + path.string());
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open: " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return data;
}

inline void write_json_file(const std::filesystem::path& path, const Json& doc) {
  write_text_file(path, doc.dump(2) + "\n");
}

inline Json read_json_file(const std::filesystem::path& path) {
  Json doc = Json::parse(read_text_file(path), nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) throw Error("invalid JSON: " + path.string());
  return doc;
}

} // namespace detail

// ---- alphabet ----

inline Json alphabet_to_json(const EventAlphabet& alphabet) {
  Json arr = Json::array();
  for (const EventType& t : alphabet.types())
    arr.push_back({{"code", t.code}, {"label", t.label}, {"terminal", t.terminal}, {"color", t.color}});
  return arr;
}

inline EventAlphabet alphabet_from_json(const Json& doc) {
  if (!doc.is_array()) throw Error("alphabet JSON must be an array");
  std::vector<EventType> types;
  for (const Json& e : doc) {
    EventType t;
    t.code = e.at("code").get<std::string>();
    t.label = e.value("label", t.code);
    t.terminal = e.value("terminal", false);
    t.color = e.value("color", "#808080");
    types.push_back(std::move(t));
  }
  return EventAlphabet(std::move(types));
}

inline EventAlphabet load_alphabet(const std::filesystem::path& path) {
  return alphabet_from_json(detail::read_json_file(path));
}

// ---- patterns ----

inline std::string pattern_string(const Pattern& pattern, const EventAlphabet& alphabet) {
  std::string out;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (i) out += '-';
    out += alphabet.code(pattern[i]);
  }
  return out;
}

inline std::string patterns_csv(const std::vector<SupportResult>& rows, const EventAlphabet& alphabet) {
  std::string out = "pattern,length,count,support\n";
  for (const SupportResult& r : rows) {
    out += pattern_string(r.pattern, alphabet);
    out += ',';
    out += std::to_string(r.pattern.size());
    out += ',';
    out += std::to_string(r.count);
    out += ',';
    out += detail::format_double(r.support);
    out += '\n';
  }
  return out;
}

inline Json patterns_to_json(const std::vector<SupportResult>& rows, const EventAlphabet& alphabet) {
  Json arr = Json::array();
  for (const SupportResult& r : rows)
    arr.push_back({{"pattern", pattern_string(r.pattern, alphabet)},
                   {"length", r.pattern.size()},
                   {"count", r.count},
                   {"support", r.support}});
  return arr;
}

inline std::string discrimination_csv(const std::vector<DiscriminationResult>& rows,
                                      const EventAlphabet& alphabet) {
  std::string out =
      "pattern,statistic,p_value,residual_sign_g1,count_g1,count_g2,support_g1,support_g2,degenerate\n";
  for (const DiscriminationResult& r : rows) {
    out += pattern_string(r.pattern, alphabet);
    out += ',';
    out += detail::format_double(r.statistic);
    out += ',';
    out += detail::format_double(r.p_value);
    out += ',';
    out += std::to_string(r.residual_sign_g1);
    out += ',';
    out += std::to_string(r.count_g1);
    out += ',';
    out += std::to_string(r.count_g2);
    out += ',';
    out += detail::format_double(r.support_g1);
    out += ',';
    out += detail::format_double(r.support_g2);
    out += ',';
    out += r.degenerate ? "true" : "false";
    out += '\n';
  }
  return out;
}

inline Json discrimination_to_json(const std::vector<DiscriminationResult>& rows,
                                   const EventAlphabet& alphabet) {
  Json arr = Json::array();
  for (const DiscriminationResult& r : rows)
    arr.push_back({{"pattern", pattern_string(r.pattern, alphabet)},
                   {"statistic", r.statistic},
                   {"p_value", r.p_value},
                   {"residual_sign_g1", r.residual_sign_g1},
                   {"count_g1", r.count_g1},
                   {"count_g2", r.count_g2},
                   {"support_g1", r.support_g1},
                   {"support_g2", r.support_g2},
                   {"degenerate", r.degenerate}});
  return arr;
}

// ---- sequences & frequencies ----

inline std::string sequences_csv(const SequenceBank& bank) {
  std::string out = "patient_id,position,code,time_months\n";
  for (const Sequence& s : bank.sequences) {
    for (std::size_t i = 0; i < s.events.size(); ++i) {
      out += s.patient_id;
      out += ',';
      out += std::to_string(i + 1);
      out += ',';
      out += bank.alphabet.code(s.events[i]);
      out += ',';
      if (s.has_times()) out += detail::format_double(s.times[i]);
      out += '\n';
    }
  }
  return out;
}

// Input-schema CSV (round-trips through ingest); requires times.
inline std::string event_csv(const SequenceBank& bank) {
  std::string out = "patient_id,code,time_months\n";
  for (const Sequence& s : bank.sequences) {
    if (!s.has_times()) throw Error("event_csv: sequence without times: " + s.patient_id);
    for (std::size_t i = 0; i < s.events.size(); ++i) {
      out += s.patient_id;
      out += ',';
      out += bank.alphabet.code(s.events[i]);
      out += ',';
      out += detail::format_double(s.times[i]);
      out += '\n';
    }
  }
  return out;
}

inline std::string event_frequencies_csv(const SequenceBank& bank) {
  auto rows = event_frequencies(bank);
  const double n = static_cast<double>(bank.sequences.size());
  std::string out = "code,label,terminal,n_events,n_patients,pct_patients\n";
  for (const EventFrequency& r : rows) {
    const EventType& t = bank.alphabet.type(r.code);
    out += t.code;
    out += ',';
    out += t.label;
    out += ',';
    out += t.terminal ? "true" : "false";
    out += ',';
    out += std::to_string(r.n_events);
    out += ',';
    out += std::to_string(r.n_patients);
    out += ',';
    out += detail::format_double(n == 0.0 ? 0.0 : 100.0 * static_cast<double>(r.n_patients) / n);
    out += '\n';
  }
  return out;
}

inline Json distance_stats_to_json(const DistanceStats& s) {
  Json doc;
  doc["count"] = s.count;
  doc["min"] = s.min;
  doc["max"] = s.max;
  doc["mean"] = s.mean;
  doc["median"] = s.median;
  Json hist = Json::object();
  for (const auto& [value, pairs] : s.histogram) hist[std::to_string(value)] = pairs;
  doc["histogram"] = std::move(hist);
  return doc;
}

// ---- membership & group tree ----

inline std::string membership_csv(const SequenceBank& bank, const GroupTree& tree) {
  std::vector<std::string> label_of(bank.sequences.size());
  for (std::uint32_t leaf : tree.leaves)
    for (std::uint32_t m : tree.nodes[leaf].members) label_of.at(m) = tree.nodes[leaf].label;
  std::string out = "patient_id,group_id\n";
  for (std::size_t i = 0; i < bank.sequences.size(); ++i) {
    if (label_of[i].empty()) throw Error("membership_csv: sequence not covered by any leaf");
    out += bank.sequences[i].patient_id;
    out += ',';
    out += label_of[i];
    out += '\n';
  }
  return out;
}

using Membership = std::map<std::string, std::string>; // patient_id -> group label

inline Membership read_membership(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open membership file: " + path.string());
  Membership members;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "patient_id,group_id")
        throw Error(path.string() + ":1: bad header (expected patient_id,group_id)");
      continue;
    }
    auto comma = line.find(',');
    if (comma == std::string::npos || comma == 0 || comma + 1 >= line.size())
      throw Error(path.string() + ":" + std::to_string(line_no) + ": expected patient_id,group_id");
    members[line.substr(0, comma)] = line.substr(comma + 1);
  }
  return members;
}

// Bank indices of the patients a membership file maps to `label`.
inline std::vector<std::uint32_t> group_members(const SequenceBank& bank, const Membership& members,
                                                const std::string& label) {
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < bank.sequences.size(); ++i) {
    auto it = members.find(bank.sequences[i].patient_id);
    if (it != members.end() && it->second == label) out.push_back(static_cast<std::uint32_t>(i));
  }
  return out;
}

inline Json group_tree_to_json(const GroupTree& tree, const SequenceBank& bank,
                               const ClusterParams& params) {
  Json doc;
  doc["n_sequences"] = bank.sequences.size();
  doc["params"] = {{"p_threshold", params.p_threshold},
                   {"internal_support_threshold", params.internal_support_threshold},
                   {"min_subseq_len", params.min_subseq_len},
                   {"max_groups", params.max_groups},
                   {"min_group_size", params.min_group_size}};
  Json nodes = Json::array();
  for (const GroupNode& n : tree.nodes) {
    Json jn;
    jn["id"] = n.id;
    jn["parent"] = n.parent;
    jn["left"] = n.left;
    jn["right"] = n.right;
    jn["label"] = n.label;
    jn["status"] = n.status;
    jn["qualified"] = n.qualified;
    jn["split_attempted"] = n.split_attempted;
    jn["split_passed"] = n.split_passed;
    jn["n_members"] = n.members.size();
    jn["members"] = n.members;
    jn["top_patterns"] = patterns_to_json(n.top_patterns, bank.alphabet);
    jn["split_evidence"] = discrimination_to_json(n.split_evidence, bank.alphabet);
    nodes.push_back(std::move(jn));
  }
  doc["nodes"] = std::move(nodes);
  Json leaves = Json::array();
  for (std::uint32_t leaf : tree.leaves) leaves.push_back(tree.nodes[leaf].label);
  doc["leaves"] = std::move(leaves);
  return doc;
}

inline std::string group_stats_csv(const std::vector<std::pair<std::string, GroupStats>>& rows) {
  std::string out =
      "group_id,n_patients,pct_patients,n_events,pct_events,min_events,max_events,mean_events,"
      "median_events,mean_event_time,median_event_time,mean_span,median_span\n";
  for (const auto& [label, g] : rows) {
    out += label;
    out += ',';
    out += std::to_string(g.n_patients);
    out += ',';
    out += detail::format_double(g.pct_patients);
    out += ',';
    out += std::to_string(g.n_events);
    out += ',';
    out += detail::format_double(g.pct_events);
    out += ',';
    out += std::to_string(g.min_events);
    out += ',';
    out += std::to_string(g.max_events);
    out += ',';
    out += detail::format_double(g.mean_events);
    out += ',';
    out += detail::format_double(g.median_events);
    out += ',';
    if (g.has_times) {
      out += detail::format_double(g.mean_event_time);
      out += ',';
      out += detail::format_double(g.median_event_time);
      out += ',';
      out += detail::format_double(g.mean_span);
      out += ',';
      out += detail::format_double(g.median_span);
    } else {
      out += ",,,"; // timing unavailable
    }
    out += '\n';
  }
  return out;
}

// ---- markov & chains ----

inline Json model_to_json(const TransitionModel& model, const EventAlphabet& alphabet) {
  Json doc;
  doc["n_sequences"] = model.n_sequences;
  Json states = Json::array();
  for (const auto& [state, stat] : model.states)
    states.push_back({{"code", alphabet.code(state.code)},
                      {"position", state.position},
                      {"occurrences", stat.occurrences},
                      {"ends", stat.ends},
                      {"end_mass", model.end_mass(state)}});
  doc["states"] = std::move(states);
  Json transitions = Json::array();
  for (const auto& [key, count] : model.transitions) {
    const auto& [from, to_code] = key;
    transitions.push_back({{"from_code", alphabet.code(from.code)},
                           {"from_position", from.position},
                           {"to_code", alphabet.code(to_code)},
                           {"to_position", from.position + 1},
                           {"count", count},
                           {"probability", model.probability(from, to_code)}});
  }
  doc["transitions"] = std::move(transitions);
  return doc;
}

inline Json chains_to_json(const ChainGraph& graph, const EventAlphabet& alphabet) {
  Json doc;
  doc["prob_threshold"] = graph.prob_threshold;
  doc["freq_threshold"] = graph.freq_threshold;
  Json nodes = Json::array();
  for (const ChainNode& n : graph.nodes)
    nodes.push_back({{"code", alphabet.code(n.state.code)},
                     {"position", n.state.position},
                     {"occurrences", n.occurrences}});
  doc["nodes"] = std::move(nodes);
  Json edges = Json::array();
  for (const ChainEdge& e : graph.edges)
    edges.push_back({{"from_code", alphabet.code(e.from.code)},
                     {"from_position", e.from.position},
                     {"to_code", alphabet.code(e.to)},
                     {"to_position", e.from.position + 1},
                     {"count", e.count},
                     {"probability", e.probability}});
  doc["edges"] = std::move(edges);
  return doc;
}

inline ChainGraph chains_from_json(const Json& doc, const EventAlphabet& alphabet) {
  ChainGraph graph;
  graph.prob_threshold = doc.at("prob_threshold").get<double>();
  graph.freq_threshold = doc.at("freq_threshold").get<std::uint32_t>();
  for (const Json& jn : doc.at("nodes")) {
    ChainNode n;
    n.state.code = alphabet.require(jn.at("code").get<std::string>());
    n.state.position = jn.at("position").get<std::uint32_t>();
    n.occurrences = jn.at("occurrences").get<std::uint32_t>();
    graph.nodes.push_back(n);
  }
  for (const Json& je : doc.at("edges")) {
    ChainEdge e;
    e.from.code = alphabet.require(je.at("from_code").get<std::string>());
    e.from.position = je.at("from_position").get<std::uint32_t>();
    e.to = alphabet.require(je.at("to_code").get<std::string>());
    e.count = je.at("count").get<std::uint32_t>();
    e.probability = je.at("probability").get<double>();
    graph.edges.push_back(e);
  }
  return graph;
}

inline std::string histogram_csv(const PositionHistogram& hist, const EventAlphabet& alphabet) {
  std::string out = "position,code,count,n_at_position,proportion\n";
  for (std::size_t p = 0; p < hist.counts.size(); ++p) {
    for (CodeIndex c = 0; c < hist.alphabet_size; ++c) {
      const std::uint32_t count = hist.counts[p][c];
      if (count == 0) continue;
      out += std::to_string(p + 1);
      out += ',';
      out += alphabet.code(c);
      out += ',';
      out += std::to_string(count);
      out += ',';
      out += std::to_string(hist.sequences_at[p]);
      out += ',';
      out += detail::format_double(hist.proportion(static_cast<std::uint32_t>(p + 1), c));
      out += '\n';
    }
  }
  return out;
}

// ---- generator spec ----

inline Json generator_spec_to_json(const GeneratorSpec& spec, const EventAlphabet& alphabet) {
  Json doc;
  doc["seed"] = spec.seed;
  doc["patients"] = spec.patients;
  doc["max_len"] = spec.max_len;
  Json groups = Json::array();
  for (const GroupSpec& g : spec.groups) {
    Json jg;
    jg["name"] = g.name;
    jg["weight"] = g.weight;
    Json init = Json::object();
    for (const auto& [code, p] : g.initial) init[alphabet.code(code)] = p;
    jg["initial"] = std::move(init);
    Json rules = Json::array();
    for (const TransitionRule& r : g.rules) {
      Json jr;
      jr["from"] = alphabet.code(r.from);
      if (r.position) jr["position"] = *r.position;
      Json to = Json::object();
      for (const auto& [code, p] : r.to) to[alphabet.code(code)] = p;
      jr["to"] = std::move(to);
      jr["end"] = r.end_prob;
      rules.push_back(std::move(jr));
    }
    jg["rules"] = std::move(rules);
    groups.push_back(std::move(jg));
  }
  doc["groups"] = std::move(groups);
  return doc;
}

inline GeneratorSpec generator_spec_from_json(const Json& doc, const EventAlphabet& alphabet) {
  GeneratorSpec spec;
  spec.seed = doc.at("seed").get<std::uint64_t>();
  spec.patients = doc.at("patients").get<std::uint32_t>();
  spec.max_len = doc.value("max_len", spec.max_len);
  for (const Json& jg : doc.at("groups")) {
    GroupSpec g;
    g.name = jg.at("name").get<std::string>();
    g.weight = jg.at("weight").get<double>();
    for (const auto& [code, p] : jg.at("initial").items())
      g.initial.emplace_back(alphabet.require(code), p.get<double>());
    for (const Json& jr : jg.value("rules", Json::array())) {
      TransitionRule r;
      r.from = alphabet.require(jr.at("from").get<std::string>());
      if (jr.contains("position")) r.position = jr.at("position").get<std::uint32_t>();
      for (const auto& [code, p] : jr.at("to").items())
        r.to.emplace_back(alphabet.require(code), p.get<double>());
      r.end_prob = jr.value("end", 0.0);
      g.rules.push_back(std::move(r));
    }
    spec.groups.push_back(std::move(g));
  }
  return spec;
}

// ---- manifest ----

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string fnv1a64_hex(std::string_view bytes) {
  char buf[17];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), fnv1a64(bytes), 16);
  std::string hex(buf, ptr);
  return std::string(16 - hex.size(), '0') + hex;
}

// Written last by every command that emits artifacts: one entry per file with
// size and FNV-1a hash, so a run can be compared byte-for-byte.
inline void write_manifest(const std::filesystem::path& out_dir, const std::vector<std::string>& files,
                           const std::string& status, const std::string& failed_stage = "") {
  Json doc;
  doc["tool"] = "trajmine";
  doc["status"] = status;
  if (!failed_stage.empty()) doc["failed_stage"] = failed_stage;
  Json entries = Json::array();
  std::vector<std::string> sorted = files;
  std::sort(sorted.begin(), sorted.end());
  for (const std::string& name : sorted) {
    const std::string bytes = detail::read_text_file(out_dir / name);
    entries.push_back({{"path", name}, {"bytes", bytes.size()}, {"fnv1a64", fnv1a64_hex(bytes)}});
  }
  doc["files"] = std::move(entries);
  detail::write_json_file(out_dir / "manifest.json", doc);
}

} // namespace trajmine
