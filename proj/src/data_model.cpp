#include "chronomap/data_model.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

#include "chronomap/csv.hpp"
#include "chronomap/rng.hpp"

namespace chronomap {

namespace {

const std::array<std::string, 7> kDayNames = {"Mon", "Tue", "Wed", "Thu",
                                              "Fri", "Sat", "Sun"};

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

}  // namespace

int day_index(const std::string& name) {
  for (int d = 0; d < kDaysPerWeek; ++d) {
    if (kDayNames[d] == name) return d;
  }
  throw std::invalid_argument("unknown day name: \"" + name + "\" (expected Mon..Sun)");
}

const std::string& day_name(int day) {
  if (day < 0 || day >= kDaysPerWeek) {
    throw std::out_of_range("day index out of range: " + std::to_string(day));
  }
  return kDayNames[day];
}

int parse_clock_quarter(const std::string& hhmm) {
  int h = 0, m = 0;
  char extra = 0;
  if (std::sscanf(hhmm.c_str(), "%d:%d%c", &h, &m, &extra) != 2) {
    throw std::invalid_argument("bad clock time: \"" + hhmm + "\" (expected HH:MM)");
  }
  if (h < 0 || h > 24 || m < 0 || m >= 60 || (h == 24 && m != 0)) {
    throw std::invalid_argument("clock time out of range: \"" + hhmm + "\"");
  }
  if (m % 15 != 0) {
    throw std::invalid_argument("clock time not on a quarter hour: \"" + hhmm + "\"");
  }
  return h * 4 + m / 15;
}

std::string clock_of_quarter(int quarter) {
  if (quarter < 0 || quarter > kQuartersPerDay) {
    throw std::out_of_range("quarter out of range: " + std::to_string(quarter));
  }
  char buf[8];
  std::snprintf(buf, sizeof(buf), "%02d:%02d", quarter / 4, (quarter % 4) * 15);
  return buf;
}

QuestionSchema::QuestionSchema(std::vector<Question> questions)
    : questions_(std::move(questions)) {
  std::set<std::string> names;
  for (const Question& q : questions_) {
    if (q.name.empty() || q.name.find(':') != std::string::npos) {
      fail("schema: bad question name \"" + q.name + "\"");
    }
    if (!names.insert(q.name).second) {
      fail("schema: duplicate question name \"" + q.name + "\"");
    }
    if (q.modalities.size() < 2) {
      fail("schema: question \"" + q.name + "\" needs at least 2 modalities");
    }
    std::set<std::string> mods;
    for (const std::string& m : q.modalities) {
      if (m.empty() || m.find('|') != std::string::npos) {
        fail("schema: bad modality \"" + m + "\" in question \"" + q.name + "\"");
      }
      if (!mods.insert(m).second) {
        fail("schema: duplicate modality \"" + m + "\" in question \"" + q.name + "\"");
      }
    }
  }
}

QuestionSchema QuestionSchema::survey_default() {
  return QuestionSchema({
      {"Contract", {"Open-ended", "Fixed-term"}},
      {"Sex", {"Man", "Woman"}},
      {"Age", {"<25", "[25-40[", "[40-50[", ">=50"}},
      {"DaySch", {"Identical", "As-posted", "Variable"}},
      {"DayWk", {"Identical", "Variable"}},
      {"Night", {"Usually", "Sometimes", "Never"}},
      {"Sat", {"Usually", "Sometimes", "Never"}},
      {"Sun", {"Usually", "Sometimes", "Never"}},
      {"Wed", {"Usually", "Sometimes", "Never"}},
      {"Leave", {"Yes", "Yes but", "No"}},
      {"Def", {"Company", "A la carte", "Employee", "Other"}},
      {"Volunt", {"Involuntary", "Voluntary"}},
      {"Next", {"Yes", "No"}},
      {"Carry", {"No point", "Yes", "No"}},
  });
}

int QuestionSchema::question_index(const std::string& name) const {
  for (std::size_t i = 0; i < questions_.size(); ++i) {
    if (questions_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

int QuestionSchema::modality_index(int question, const std::string& value) const {
  const auto& mods = questions_.at(static_cast<std::size_t>(question)).modalities;
  for (std::size_t i = 0; i < mods.size(); ++i) {
    if (mods[i] == value) return static_cast<int>(i);
  }
  return -1;
}

void validate_dataset(const Dataset& dataset) {
  if (dataset.profiles.size() != dataset.records.size()) {
    fail("dataset: profile/record count mismatch");
  }
  std::unordered_set<std::string> ids;
  for (std::size_t i = 0; i < dataset.profiles.size(); ++i) {
    const WeeklyProfile& p = dataset.profiles[i];
    const IndividualRecord& r = dataset.records[i];
    if (p.person_id != r.person_id) {
      fail("dataset: person order mismatch at position " + std::to_string(i));
    }
    if (!ids.insert(p.person_id).second) {
      fail("dataset: duplicate person_id \"" + p.person_id + "\"");
    }
    if (p.slots.size() != static_cast<std::size_t>(kSlotsPerWeek)) {
      fail("dataset: profile \"" + p.person_id + "\" has " +
           std::to_string(p.slots.size()) + " slots, expected " +
           std::to_string(kSlotsPerWeek));
    }
    for (std::uint8_t s : p.slots) {
      if (s > 1) fail("dataset: non-binary slot in profile \"" + p.person_id + "\"");
    }
    if (r.answers.size() != dataset.schema.size()) {
      fail("dataset: record \"" + r.person_id + "\" has wrong answer count");
    }
    for (std::size_t q = 0; q < r.answers.size(); ++q) {
      const int a = r.answers[q];
      const int nmod = static_cast<int>(dataset.schema.questions()[q].modalities.size());
      if (a < 0 || a >= nmod) {
        fail("dataset: record \"" + r.person_id + "\" has out-of-range answer");
      }
    }
  }
}

std::vector<WeeklyProfile> parse_weekly_reports(const std::string& path) {
  const auto rows = csv::read_file(path);
  const std::size_t expected = 1 + static_cast<std::size_t>(kSlotsPerWeek);
  if (rows.empty()) fail(path + ": empty file, expected a header row");
  if (rows[0].size() != expected || rows[0][0] != "person_id") {
    fail(path + ":1: bad header, expected person_id,s0..s" +
         std::to_string(kSlotsPerWeek - 1));
  }
  std::vector<WeeklyProfile> profiles;
  profiles.reserve(rows.size() - 1);
  std::unordered_set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string where = path + ":" + std::to_string(r + 1);
    if (row.size() != expected) {
      fail(where + ": expected " + std::to_string(expected) + " columns, got " +
           std::to_string(row.size()));
    }
    WeeklyProfile p;
    p.person_id = row[0];
    if (p.person_id.empty()) fail(where + ": empty person_id");
    if (!seen.insert(p.person_id).second) {
      fail(where + ": duplicate person_id \"" + p.person_id + "\"");
    }
    p.slots.resize(kSlotsPerWeek);
    for (int c = 0; c < kSlotsPerWeek; ++c) {
      const std::string& cell = row[static_cast<std::size_t>(c) + 1];
      if (cell == "0") {
        p.slots[c] = 0;
      } else if (cell == "1") {
        p.slots[c] = 1;
      } else {
        fail(where + ": column s" + std::to_string(c) + ": expected 0 or 1, got \"" +
             cell + "\"");
      }
    }
    profiles.push_back(std::move(p));
  }
  return profiles;
}

void write_weekly_csv(const std::string& path, const std::vector<WeeklyProfile>& profiles) {
  std::vector<csv::Row> rows;
  rows.reserve(profiles.size() + 1);
  csv::Row header;
  header.reserve(1 + kSlotsPerWeek);
  header.push_back("person_id");
  for (int c = 0; c < kSlotsPerWeek; ++c) header.push_back("s" + std::to_string(c));
  rows.push_back(std::move(header));
  for (const WeeklyProfile& p : profiles) {
    csv::Row row;
    row.reserve(1 + kSlotsPerWeek);
    row.push_back(p.person_id);
    for (std::uint8_t s : p.slots) row.push_back(s ? "1" : "0");
    rows.push_back(std::move(row));
  }
  csv::write_file(path, rows);
}

std::vector<IndividualRecord> parse_individual_records(const std::string& path,
                                                       const QuestionSchema& schema) {
  const auto rows = csv::read_file(path);
  if (rows.empty()) fail(path + ": empty file, expected a header row");
  const auto& header = rows[0];
  if (header.empty() || header[0] != "person_id") {
    fail(path + ":1: first header column must be person_id");
  }
  // Map file columns onto schema questions; require exactly the schema set.
  std::vector<int> question_of_col(header.size(), -1);
  std::vector<int> col_of_question(schema.size(), -1);
  for (std::size_t c = 1; c < header.size(); ++c) {
    const int q = schema.question_index(header[c]);
    if (q < 0) fail(path + ":1: unknown column \"" + header[c] + "\"");
    if (col_of_question[q] >= 0) fail(path + ":1: duplicate column \"" + header[c] + "\"");
    question_of_col[c] = q;
    col_of_question[q] = static_cast<int>(c);
  }
  for (std::size_t q = 0; q < schema.size(); ++q) {
    if (col_of_question[q] < 0) {
      fail(path + ": missing question column \"" + schema.questions()[q].name + "\"");
    }
  }
  std::vector<IndividualRecord> records;
  records.reserve(rows.size() - 1);
  std::unordered_set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string where = path + ":" + std::to_string(r + 1);
    if (row.size() != header.size()) {
      fail(where + ": expected " + std::to_string(header.size()) + " columns, got " +
           std::to_string(row.size()));
    }
    IndividualRecord rec;
    rec.person_id = row[0];
    if (rec.person_id.empty()) fail(where + ": empty person_id");
    if (!seen.insert(rec.person_id).second) {
      fail(where + ": duplicate person_id \"" + rec.person_id + "\"");
    }
    rec.answers.assign(schema.size(), -1);
    for (std::size_t q = 0; q < schema.size(); ++q) {
      const std::string& cell = row[static_cast<std::size_t>(col_of_question[q])];
      const std::string& qname = schema.questions()[q].name;
      if (cell.empty()) {
        fail(where + ": question " + qname + ": empty answer (missing data is rejected)");
      }
      const int m = schema.modality_index(static_cast<int>(q), cell);
      if (m < 0) {
        fail(where + ": question " + qname + ": unknown modality \"" + cell + "\"");
      }
      rec.answers[q] = m;
    }
    records.push_back(std::move(rec));
  }
  return records;
}

void write_individual_csv(const std::string& path, const std::vector<IndividualRecord>& records,
                          const QuestionSchema& schema) {
  std::vector<csv::Row> rows;
  rows.reserve(records.size() + 1);
  csv::Row header;
  header.push_back("person_id");
  for (const Question& q : schema.questions()) header.push_back(q.name);
  rows.push_back(std::move(header));
  for (const IndividualRecord& rec : records) {
    if (rec.answers.size() != schema.size()) {
      fail("record \"" + rec.person_id + "\" does not match schema");
    }
    csv::Row row;
    row.push_back(rec.person_id);
    for (std::size_t q = 0; q < schema.size(); ++q) {
      row.push_back(schema.questions()[q].modalities.at(
          static_cast<std::size_t>(rec.answers[q])));
    }
    rows.push_back(std::move(row));
  }
  csv::write_file(path, rows);
}

QuestionSchema parse_schema_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open file: " + path);
  std::vector<Question> questions;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::size_t colon = t.find(':');
    if (colon == std::string::npos) {
      fail(path + ":" + std::to_string(lineno) + ": expected \"name: m1|m2|...\"");
    }
    Question q;
    q.name = trim(t.substr(0, colon));
    std::stringstream mods(t.substr(colon + 1));
    std::string m;
    while (std::getline(mods, m, '|')) {
      const std::string mt = trim(m);
      if (!mt.empty()) q.modalities.push_back(mt);
    }
    questions.push_back(std::move(q));
  }
  return QuestionSchema(std::move(questions));
}

void write_schema_file(const std::string& path, const QuestionSchema& schema) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot write file: " + path);
  for (const Question& q : schema.questions()) {
    out << q.name << ": ";
    for (std::size_t i = 0; i < q.modalities.size(); ++i) {
      if (i > 0) out << '|';
      out << q.modalities[i];
    }
    out << '\n';
  }
}

JoinResult join_datasets(std::vector<WeeklyProfile> profiles,
                         std::vector<IndividualRecord> records, QuestionSchema schema) {
  std::unordered_map<std::string, std::size_t> record_of;
  record_of.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!record_of.emplace(records[i].person_id, i).second) {
      fail("join: duplicate person_id \"" + records[i].person_id + "\" among records");
    }
  }
  JoinResult out;
  out.dataset.schema = std::move(schema);
  std::unordered_set<std::string> profile_ids;
  std::unordered_set<std::string> matched;
  for (WeeklyProfile& p : profiles) {
    if (!profile_ids.insert(p.person_id).second) {
      fail("join: duplicate person_id \"" + p.person_id + "\" among profiles");
    }
    const auto it = record_of.find(p.person_id);
    if (it == record_of.end()) {
      ++out.report.profiles_dropped;
      continue;
    }
    matched.insert(p.person_id);
    out.dataset.profiles.push_back(std::move(p));
    out.dataset.records.push_back(std::move(records[it->second]));
  }
  out.report.records_dropped = records.size() - matched.size();
  out.report.kept = out.dataset.profiles.size();
  if (out.dataset.profiles.empty()) {
    fail("join: empty intersection of person ids");
  }
  validate_dataset(out.dataset);
  return out;
}

double total_worked_hours(const WeeklyProfile& profile) {
  long count = 0;
  for (std::uint8_t s : profile.slots) count += s;
  return static_cast<double>(count) / 4.0;
}

int activity_at(const WeeklyProfile& profile, int day, int quarter) {
  if (day < 0 || day >= kDaysPerWeek) {
    throw std::out_of_range("activity_at: day " + std::to_string(day) + " out of [0,6]");
  }
  if (quarter < 0 || quarter >= kQuartersPerDay) {
    throw std::out_of_range("activity_at: quarter " + std::to_string(quarter) +
                            " out of [0,95]");
  }
  return profile.slots.at(static_cast<std::size_t>(slot_index(day, quarter)));
}

// --- synthetic data -------------------------------------------------------

namespace {

void validate_synth_spec(const SynthSpec& spec) {
  if (spec.archetypes.empty()) fail("generator spec: no archetypes");
  std::set<std::string> names;
  for (const Archetype& a : spec.archetypes) {
    const std::string ctx = "generator spec: archetype \"" + a.name + "\": ";
    if (a.name.empty()) fail("generator spec: archetype with empty name");
    if (!names.insert(a.name).second) fail(ctx + "duplicate name");
    if (a.count <= 0) fail(ctx + "count must be positive, got " + std::to_string(a.count));
    if (!(a.flip_prob >= 0.0 && a.flip_prob < 0.5)) {
      fail(ctx + "flip probability must be in [0, 0.5)");
    }
    if (a.prototype.size() != static_cast<std::size_t>(kSlotsPerWeek)) {
      fail(ctx + "prototype must have " + std::to_string(kSlotsPerWeek) + " slots");
    }
    for (std::uint8_t s : a.prototype) {
      if (s > 1) fail(ctx + "prototype slots must be 0 or 1");
    }
    if (a.modality_weights.size() != spec.schema.size()) {
      fail(ctx + "needs one weight table per schema question");
    }
    for (std::size_t q = 0; q < spec.schema.size(); ++q) {
      const auto& w = a.modality_weights[q];
      const auto& question = spec.schema.questions()[q];
      if (w.size() != question.modalities.size()) {
        fail(ctx + "weight table for \"" + question.name + "\" has wrong length");
      }
      double total = 0.0;
      for (double x : w) {
        if (x < 0.0) fail(ctx + "negative weight for \"" + question.name + "\"");
        total += x;
      }
      if (total <= 0.0) fail(ctx + "all-zero weights for \"" + question.name + "\"");
    }
  }
}

void set_work(std::vector<std::uint8_t>& slots, int day, const char* from, const char* to) {
  const int a = parse_clock_quarter(from);
  const int b = parse_clock_quarter(to);
  for (int q = a; q < b; ++q) slots[static_cast<std::size_t>(slot_index(day, q))] = 1;
}

}  // namespace

SynthSpec default_synth_spec() {
  SynthSpec spec;
  spec.schema = QuestionSchema::survey_default();

  // The five planted schedules form a gradient from weekday mornings toward
  // evening and weekend work. Answer tables covary with the schedules except
  // Sex, DayWk and Next, which are identical across archetypes. The
  // "sunday_mornings" archetype claims it never works Sundays while its
  // schedule says otherwise, so the coherence screen has something to find.
  struct Def {
    const char* name;
    int count;
    std::vector<std::vector<double>> weights;  // schema question order
  };
  const std::vector<Def> defs = {
      {"weekday_mornings",
       141,
       {{93, 7}, {11, 89}, {4, 40, 33, 23}, {70, 5, 25}, {55, 45}, {1, 7, 92},
        {6, 22, 72}, {2, 15, 83}, {70, 20, 10}, {80, 13, 7}, {50, 12, 35, 3},
        {35, 65}, {80, 20}, {50, 27, 23}}},
      {"sunday_mornings",
       100,
       {{88, 12}, {11, 89}, {6, 35, 34, 25}, {60, 8, 32}, {55, 45}, {2, 6, 92},
        {15, 25, 60}, {8, 15, 77}, {65, 25, 10}, {76, 16, 8}, {62, 8, 22, 8},
        {51, 49}, {80, 20}, {58, 27, 15}}},
      {"saturday_middays",
       108,
       {{80, 20}, {11, 89}, {10, 40, 30, 20}, {50, 10, 40}, {55, 45}, {2, 8, 90},
        {55, 35, 10}, {9, 16, 75}, {60, 28, 12}, {69, 18, 13}, {58, 16, 20, 6},
        {47, 53}, {80, 20}, {53, 28, 19}}},
      {"shifting_afternoons",
       110,
       {{75, 25}, {11, 89}, {15, 42, 27, 16}, {35, 10, 55}, {55, 45}, {10, 15, 75},
        {60, 30, 10}, {55, 35, 10}, {55, 30, 15}, {75, 13, 12}, {66, 12, 14, 8},
        {62, 38}, {80, 20}, {59, 26, 15}}},
      {"evening_weekends",
       107,
       {{65, 35}, {11, 89}, {25, 40, 23, 12}, {25, 10, 65}, {55, 45}, {55, 35, 10},
        {55, 35, 10}, {55, 35, 10}, {60, 25, 15}, {60, 18, 22}, {75, 6, 7, 12},
        {68, 32}, {80, 20}, {53, 26, 21}}},
  };

  for (const Def& d : defs) {
    Archetype a;
    a.name = d.name;
    a.count = d.count;
    a.flip_prob = 0.05;
    a.prototype.assign(kSlotsPerWeek, 0);
    a.modality_weights = d.weights;
    spec.archetypes.push_back(std::move(a));
  }

  auto& p0 = spec.archetypes[0].prototype;  // weekday mornings
  for (int d = 0; d < 5; ++d) set_work(p0, d, "08:00", "13:00");

  auto& p1 = spec.archetypes[1].prototype;  // late mornings plus Sunday
  for (int d = 0; d < 5; ++d) set_work(p1, d, "10:00", "15:00");
  set_work(p1, 6, "09:00", "12:00");

  auto& p2 = spec.archetypes[2].prototype;  // middays plus Saturday
  for (int d = 0; d < 5; ++d) set_work(p2, d, "12:00", "17:00");
  set_work(p2, 5, "09:00", "14:00");

  auto& p3 = spec.archetypes[3].prototype;  // afternoons plus weekend mornings
  for (int d = 0; d < 5; ++d) set_work(p3, d, "14:00", "19:00");
  set_work(p3, 5, "10:00", "15:00");
  set_work(p3, 6, "10:00", "13:00");

  auto& p4 = spec.archetypes[4].prototype;  // evenings plus weekend afternoons
  for (int d = 0; d < 5; ++d) set_work(p4, d, "17:00", "22:00");
  set_work(p4, 5, "14:00", "19:00");
  set_work(p4, 6, "14:00", "18:00");

  validate_synth_spec(spec);
  return spec;
}

SynthSpec parse_synth_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(path + ": bad JSON: " + e.what());
  }

  SynthSpec spec;
  try {
    std::vector<Question> questions;
    for (const auto& jq : j.at("schema")) {
      Question q;
      q.name = jq.at("name").get<std::string>();
      for (const auto& m : jq.at("modalities")) {
        q.modalities.push_back(m.get<std::string>());
      }
      questions.push_back(std::move(q));
    }
    spec.schema = QuestionSchema(std::move(questions));

    for (const auto& ja : j.at("archetypes")) {
      Archetype a;
      a.name = ja.at("name").get<std::string>();
      a.count = ja.at("count").get<int>();
      a.flip_prob = ja.at("flip_prob").get<double>();
      a.prototype.assign(kSlotsPerWeek, 0);
      for (const auto& jw : ja.at("work")) {
        int day;
        if (jw.at("day").is_string()) {
          day = day_index(jw.at("day").get<std::string>());
        } else {
          day = jw.at("day").get<int>();
          if (day < 0 || day >= kDaysPerWeek) fail("work interval: day out of range");
        }
        const int from = parse_clock_quarter(jw.at("from").get<std::string>());
        const int to = parse_clock_quarter(jw.at("to").get<std::string>());
        if (from >= to) fail("work interval: \"from\" must be before \"to\"");
        for (int q = from; q < to; ++q) {
          a.prototype[static_cast<std::size_t>(slot_index(day, q))] = 1;
        }
      }
      const auto& janswers = ja.at("answers");
      a.modality_weights.resize(spec.schema.size());
      for (const auto& [qname, table] : janswers.items()) {
        const int qi = spec.schema.question_index(qname);
        if (qi < 0) fail(path + ": answers reference unknown question \"" + qname + "\"");
        const auto& question = spec.schema.questions()[static_cast<std::size_t>(qi)];
        auto& weights = a.modality_weights[static_cast<std::size_t>(qi)];
        weights.assign(question.modalities.size(), 0.0);
        for (const auto& [mname, w] : table.items()) {
          const int mi = spec.schema.modality_index(qi, mname);
          if (mi < 0) {
            fail(path + ": question \"" + qname + "\": unknown modality \"" + mname + "\"");
          }
          weights[static_cast<std::size_t>(mi)] = w.get<double>();
        }
      }
      for (std::size_t q = 0; q < spec.schema.size(); ++q) {
        if (a.modality_weights[q].empty()) {
          fail(path + ": archetype \"" + a.name + "\": no answer table for \"" +
               spec.schema.questions()[q].name + "\"");
        }
      }
      spec.archetypes.push_back(std::move(a));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(path + ": bad generator spec: " + e.what());
  }
  validate_synth_spec(spec);
  return spec;
}

void write_synth_spec(const std::string& path, const SynthSpec& spec) {
  validate_synth_spec(spec);
  nlohmann::ordered_json j;
  j["schema"] = nlohmann::ordered_json::array();
  for (const Question& q : spec.schema.questions()) {
    nlohmann::ordered_json jq;
    jq["name"] = q.name;
    jq["modalities"] = q.modalities;
    j["schema"].push_back(std::move(jq));
  }
  j["archetypes"] = nlohmann::ordered_json::array();
  for (const Archetype& a : spec.archetypes) {
    nlohmann::ordered_json ja;
    ja["name"] = a.name;
    ja["count"] = a.count;
    ja["flip_prob"] = a.flip_prob;
    ja["work"] = nlohmann::ordered_json::array();
    for (int d = 0; d < kDaysPerWeek; ++d) {
      int q = 0;
      while (q < kQuartersPerDay) {
        if (a.prototype[static_cast<std::size_t>(slot_index(d, q))]) {
          int end = q;
          while (end < kQuartersPerDay &&
                 a.prototype[static_cast<std::size_t>(slot_index(d, end))]) {
            ++end;
          }
          nlohmann::ordered_json jw;
          jw["day"] = day_name(d);
          jw["from"] = clock_of_quarter(q);
          jw["to"] = clock_of_quarter(end);
          ja["work"].push_back(std::move(jw));
          q = end;
        } else {
          ++q;
        }
      }
    }
    ja["answers"] = nlohmann::ordered_json::object();
    for (std::size_t q = 0; q < spec.schema.size(); ++q) {
      const Question& question = spec.schema.questions()[q];
      nlohmann::ordered_json table;
      for (std::size_t m = 0; m < question.modalities.size(); ++m) {
        table[question.modalities[m]] = a.modality_weights[q][m];
      }
      ja["answers"][question.name] = std::move(table);
    }
    j["archetypes"].push_back(std::move(ja));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot write file: " + path);
  out << j.dump(2) << '\n';
}

SynthResult synth_generate(const SynthSpec& spec, std::uint64_t seed) {
  validate_synth_spec(spec);
  long long total = 0;
  for (const Archetype& a : spec.archetypes) total += a.count;

  int width = 1;
  for (long long t = total; t >= 10; t /= 10) ++width;
  width = std::max(width, 4);

  SynthResult result;
  result.dataset.schema = spec.schema;
  result.dataset.profiles.reserve(static_cast<std::size_t>(total));
  result.dataset.records.reserve(static_cast<std::size_t>(total));
  result.labels.reserve(static_cast<std::size_t>(total));

  Rng rng(seed);
  long long person = 0;
  for (const Archetype& a : spec.archetypes) {
    for (int i = 0; i < a.count; ++i) {
      ++person;
      std::string digits = std::to_string(person);
      if (static_cast<int>(digits.size()) < width) {
        digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
      }
      const std::string id = "p" + digits;

      WeeklyProfile p;
      p.person_id = id;
      p.slots = a.prototype;
      for (auto& s : p.slots) {
        if (rng.next_unit() < a.flip_prob) s ^= 1;
      }

      IndividualRecord r;
      r.person_id = id;
      r.answers.reserve(spec.schema.size());
      for (std::size_t q = 0; q < spec.schema.size(); ++q) {
        r.answers.push_back(static_cast<int>(rng.next_weighted(a.modality_weights[q])));
      }

      result.dataset.profiles.push_back(std::move(p));
      result.dataset.records.push_back(std::move(r));
      result.labels.push_back(a.name);
    }
  }
  validate_dataset(result.dataset);
  return result;
}

void write_labels_csv(const std::string& path, const Dataset& dataset,
                      const std::vector<std::string>& labels) {
  if (labels.size() != dataset.size()) fail("labels/person count mismatch");
  std::vector<csv::Row> rows;
  rows.reserve(labels.size() + 1);
  rows.push_back({"person_id", "archetype"});
  for (std::size_t i = 0; i < labels.size(); ++i) {
    rows.push_back({dataset.profiles[i].person_id, labels[i]});
  }
  csv::write_file(path, rows);
}

}  // namespace chronomap
