#pragma once
// Event vocabulary and the per-patient sequence model: a closed alphabet of
// event codes (with terminal outcomes), raw event records, and normalized
// chronological sequences built from them.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace trajmine {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Index of an event code within its alphabet. Alphabets are kept sorted by
// code, so comparing two CodeIndex values is an alphabetical comparison.
using CodeIndex = std::uint16_t;

struct EventType {
  std::string code;      // short unique identifier, e.g. "BLE"
  std::string label;     // human-readable name
  bool terminal = false; // true for final outcomes ending a sequence
  std::string color;     // "#RRGGBB" used for rendering
};

class EventAlphabet {
 public:
  explicit EventAlphabet(std::vector<EventType> types) : types_(std::move(types)) {
    if (types_.empty()) throw Error("alphabet must contain at least one event type");
    std::sort(types_.begin(), types_.end(),
              [](const EventType& a, const EventType& b) { return a.code < b.code; });
    bool any_nonterminal = false;
    for (std::size_t i = 0; i < types_.size(); ++i) {
      const EventType& t = types_[i];
      if (t.code.empty()) throw Error("alphabet contains an empty event code");
      if (!index_.emplace(t.code, static_cast<CodeIndex>(i)).second)
        throw Error("duplicate event code in alphabet: " + t.code);
      if (!t.terminal) any_nonterminal = true;
    }
    if (!any_nonterminal) throw Error("alphabet must contain at least one non-terminal event type");
  }

  std::size_t size() const { return types_.size(); }
  const std::vector<EventType>& types() const { return types_; }
  const EventType& type(CodeIndex i) const { return types_.at(i); }

  std::optional<CodeIndex> find(std::string_view code) const {
    auto it = index_.find(std::string(code));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  CodeIndex require(std::string_view code) const {
    auto idx = find(code);
    if (!idx) throw Error("unknown event code: " + std::string(code));
    return *idx;
  }

  bool is_terminal(CodeIndex i) const { return types_.at(i).terminal; }
  const std::string& code(CodeIndex i) const { return types_.at(i).code; }

 private:
  std::vector<EventType> types_; // sorted by code
  std::unordered_map<std::string, CodeIndex> index_;
};

enum class DeviceRole { none, lvad, rvad };

struct EventRecord {
  std::string patient_id;
  std::string code;
  double time_months = 0.0; // months post-implant, >= 0
  DeviceRole device_role = DeviceRole::none;
};

// A patient's normalized trajectory. Events are chronological; a terminal
// code can only occupy the last position.
struct Sequence {
  std::string patient_id;
  std::vector<CodeIndex> events;
  std::vector<double> times; // parallel to events, or empty when unknown

  std::size_t size() const { return events.size(); }
  bool has_times() const { return !times.empty(); }
};

struct SequenceBank {
  EventAlphabet alphabet;
  std::vector<Sequence> sequences; // sorted by patient_id, ids unique
};

// Recode explants of a right-ventricular assist device to the non-terminal
// REXP code; LVAD explants keep the terminal explant code. No-op for records
// without a device-role tag.
inline std::vector<EventRecord> remap_rvad_explant(std::vector<EventRecord> records,
                                                   std::string_view explant_code = "EXP",
                                                   std::string_view rexp_code = "REXP") {
  for (EventRecord& r : records) {
    if (r.device_role == DeviceRole::rvad && r.code == explant_code)
      r.code = std::string(rexp_code);
  }
  return records;
}

// Normalize one patient's raw records into a Sequence: sort by time, break
// timestamp ties alphabetically with terminal outcomes forced last within the
// tied group, then drop everything after the first terminal event.
inline Sequence build_sequence(std::span<const EventRecord> records, const EventAlphabet& alphabet) {
  if (records.empty()) throw Error("cannot build a sequence from an empty record list");

  struct Entry {
    double time;
    bool terminal;
    CodeIndex code;
  };
  std::vector<Entry> entries;
  entries.reserve(records.size());
  const std::string& pid = records.front().patient_id;
  for (const EventRecord& r : records) {
    if (r.patient_id != pid)
      throw Error("records for multiple patients passed to build_sequence: '" + pid + "' vs '" +
                  r.patient_id + "'");
    if (!(r.time_months >= 0.0))
      throw Error("negative event time for patient '" + pid + "'");
    CodeIndex idx = alphabet.require(r.code);
    entries.push_back({r.time_months, alphabet.is_terminal(idx), idx});
  }

  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.time != b.time) return a.time < b.time;
    if (a.terminal != b.terminal) return !a.terminal; // outcome last within a tied timestamp
    return a.code < b.code;
  });

  Sequence seq;
  seq.patient_id = pid;
  for (const Entry& e : entries) {
    seq.events.push_back(e.code);
    seq.times.push_back(e.time);
    if (e.terminal) break; // records after the first outcome are excluded
  }
  return seq;
}

// The 12 adverse-event types, the REXP recode target, and the 3 terminal
// outcomes, with a fixed documented palette. Any other closed vocabulary can
// be supplied as an alphabet JSON file instead.
inline EventAlphabet default_alphabet() {
  return EventAlphabet({
      {"BLE", "Bleeding", false, "#D62728"},
      {"CAR", "Cardiac Arrhythmia", false, "#FF7F0E"},
      {"DMF", "Device Malfunction", false, "#556B2F"},
      {"DTH", "Death", true, "#FFD700"},
      {"EXP", "Explant", true, "#90EE90"},
      {"HEM", "Hemolysis", false, "#BCBD22"},
      {"HEP", "Hepatic Dysfunction", false, "#17BECF"},
      {"HTN", "Hypertension", false, "#7F7F7F"},
      {"INF", "Infection", false, "#1F77B4"},
      {"NEU", "Neurological Dysfunction", false, "#9467BD"},
      {"REN", "Renal Dysfunction", false, "#8C564B"},
      {"REXP", "RVAD Explant", false, "#98DF8A"},
      {"RHF", "Right Heart Failure", false, "#AEC7E8"},
      {"RSP", "Respiratory Failure", false, "#E377C2"},
      {"TXP", "Explant: Transplant", true, "#006400"},
  });
}

} // namespace trajmine
