#pragma once
// CSV ingestion: event records in, a normalized SequenceBank out. The file
// format is `patient_id,code,time_months[,device_role]` with a mandatory
// header; device_role (LVAD|RVAD) drives the RVAD-explant recode.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "trajmine/events.hpp"

namespace trajmine {

namespace detail {

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      fields.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return fields;
}

inline double parse_time(std::string_view field, const std::string& where) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw Error(where + ": bad time_months value '" + std::string(field) + "'");
  return value;
}

inline DeviceRole parse_role(std::string_view field, const std::string& where) {
  if (field.empty()) return DeviceRole::none;
  if (field == "LVAD") return DeviceRole::lvad;
  if (field == "RVAD") return DeviceRole::rvad;
  throw Error(where + ": bad device_role value '" + std::string(field) + "' (expected LVAD or RVAD)");
}

} // namespace detail

// Parse the event CSV into raw records. Rows keep their duplicates: a patient
// can genuinely experience the same event code twice at the same time stamp.
inline std::vector<EventRecord> read_event_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open event file: " + path);

  auto where = [&](std::size_t line_no) { return path + ":" + std::to_string(line_no); };

  std::string line;
  std::size_t line_no = 0;
  bool has_role = false;
  bool header_seen = false;
  std::vector<EventRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = detail::split_csv(line);
    if (!header_seen) {
      if (fields.size() == 4 && fields[3] == "device_role")
        has_role = true;
      else if (fields.size() != 3)
        throw Error(where(line_no) + ": bad header (expected patient_id,code,time_months[,device_role])");
      if (fields[0] != "patient_id" || fields[1] != "code" || fields[2] != "time_months")
        throw Error(where(line_no) + ": bad header (expected patient_id,code,time_months[,device_role])");
      header_seen = true;
      continue;
    }
    if (fields.size() != (has_role ? 4u : 3u))
      throw Error(where(line_no) + ": expected " + std::to_string(has_role ? 4 : 3) + " fields, got " +
                  std::to_string(fields.size()));
    EventRecord r;
    r.patient_id = std::string(fields[0]);
    r.code = std::string(fields[1]);
    r.time_months = detail::parse_time(fields[2], where(line_no));
    if (has_role) r.device_role = detail::parse_role(fields[3], where(line_no));
    if (r.patient_id.empty()) throw Error(where(line_no) + ": empty patient_id");
    if (r.code.empty()) throw Error(where(line_no) + ": empty code");
    records.push_back(std::move(r));
  }
  if (!header_seen) throw Error(path + ": empty file (header required)");
  return records;
}

// Records -> bank: RVAD-explant recode, then one normalized sequence per
// patient, bank ordered by patient id.
inline SequenceBank build_bank(std::vector<EventRecord> records, const EventAlphabet& alphabet) {
  records = remap_rvad_explant(records);
  std::map<std::string, std::vector<EventRecord>> by_patient;
  for (EventRecord& r : records) by_patient[r.patient_id].push_back(std::move(r));

  SequenceBank bank{alphabet, {}};
  bank.sequences.reserve(by_patient.size());
  for (auto& [pid, recs] : by_patient) bank.sequences.push_back(build_sequence(recs, alphabet));
  return bank;
}

inline SequenceBank ingest(const std::string& path, const EventAlphabet& alphabet) {
  return build_bank(read_event_csv(path), alphabet);
}

// One row per alphabet entry: total event occurrences and number of distinct
// patients with at least one. Ordered with the non-terminal types first
// (alphabetical), then the terminal outcomes.
struct EventFrequency {
  CodeIndex code = 0;
  std::uint64_t n_events = 0;
  std::uint32_t n_patients = 0;
};

inline std::vector<EventFrequency> event_frequencies(const SequenceBank& bank) {
  std::vector<EventFrequency> rows(bank.alphabet.size());
  for (CodeIndex c = 0; c < bank.alphabet.size(); ++c) rows[c].code = c;
  for (const Sequence& s : bank.sequences) {
    std::vector<bool> seen(bank.alphabet.size(), false);
    for (CodeIndex c : s.events) {
      ++rows[c].n_events;
      if (!seen[c]) {
        seen[c] = true;
        ++rows[c].n_patients;
      }
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [&](const EventFrequency& a, const EventFrequency& b) {
    const bool ta = bank.alphabet.is_terminal(a.code);
    const bool tb = bank.alphabet.is_terminal(b.code);
    if (ta != tb) return !ta; // adverse events before outcomes
    return a.code < b.code;   // alphabetical within each block
  });
  return rows;
}

} // namespace trajmine
