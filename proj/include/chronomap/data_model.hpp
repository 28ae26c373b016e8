#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace chronomap {

inline constexpr int kQuartersPerDay = 96;
inline constexpr int kDaysPerWeek = 7;
inline constexpr int kSlotsPerWeek = kQuartersPerDay * kDaysPerWeek;  // 672

// Day 0 is Monday; day 6 is Sunday.
int day_index(const std::string& name);          // "Mon".."Sun"
const std::string& day_name(int day);
int parse_clock_quarter(const std::string& hhmm);  // "10:00" -> 40; accepts "24:00" as 96
std::string clock_of_quarter(int quarter);         // 40 -> "10:00"

inline constexpr int slot_index(int day, int quarter) {
  return day * kQuartersPerDay + quarter;
}

// One respondent's week: 672 binary quarter-hour slots, Monday 00:00 first.
struct WeeklyProfile {
  std::string person_id;
  std::vector<std::uint8_t> slots;  // kSlotsPerWeek entries, each 0 or 1

  bool operator==(const WeeklyProfile&) const = default;
};

struct Question {
  std::string name;
  std::vector<std::string> modalities;

  bool operator==(const Question&) const = default;
};

class QuestionSchema {
 public:
  QuestionSchema() = default;
  explicit QuestionSchema(std::vector<Question> questions);

  // The 14-question / 39-modality categorical survey schema used by the
  // bundled generator and the default pipeline.
  static QuestionSchema survey_default();

  const std::vector<Question>& questions() const { return questions_; }
  std::size_t size() const { return questions_.size(); }
  int question_index(const std::string& name) const;              // -1 if absent
  int modality_index(int question, const std::string& value) const;  // -1 if absent

  bool operator==(const QuestionSchema&) const = default;

 private:
  std::vector<Question> questions_;
};

// Answers are stored as modality indices in schema question order, so a
// record is valid against its schema by construction.
struct IndividualRecord {
  std::string person_id;
  std::vector<int> answers;

  bool operator==(const IndividualRecord&) const = default;
};

struct Dataset {
  std::vector<WeeklyProfile> profiles;
  std::vector<IndividualRecord> records;  // same person order as profiles
  QuestionSchema schema;

  std::size_t size() const { return profiles.size(); }
  bool operator==(const Dataset&) const = default;
};

struct JoinReport {
  std::size_t kept = 0;
  std::size_t profiles_dropped = 0;
  std::size_t records_dropped = 0;
};

struct JoinResult {
  Dataset dataset;
  JoinReport report;
};

// Checks the invariant set of a Dataset: aligned unique person ids, binary
// 672-slot profiles, answers in schema range. Throws on violation.
void validate_dataset(const Dataset& dataset);

// weekly.csv: header person_id,s0..s671, cells 0/1.
std::vector<WeeklyProfile> parse_weekly_reports(const std::string& path);
void write_weekly_csv(const std::string& path, const std::vector<WeeklyProfile>& profiles);

// individual.csv: header person_id,<question names>. Every schema question
// must be present; unknown columns and unknown modalities are rejected.
std::vector<IndividualRecord> parse_individual_records(const std::string& path,
                                                       const QuestionSchema& schema);
void write_individual_csv(const std::string& path, const std::vector<IndividualRecord>& records,
                          const QuestionSchema& schema);

// Schema file: one line per question, "name: modality1|modality2|...".
QuestionSchema parse_schema_file(const std::string& path);
void write_schema_file(const std::string& path, const QuestionSchema& schema);

// Inner join on person_id, ordered by profile-file order. Unmatched rows on
// either side are dropped and counted; an empty intersection is an error.
JoinResult join_datasets(std::vector<WeeklyProfile> profiles,
                         std::vector<IndividualRecord> records, QuestionSchema schema);

double total_worked_hours(const WeeklyProfile& profile);
int activity_at(const WeeklyProfile& profile, int day, int quarter);

// --- synthetic data -------------------------------------------------------

struct Archetype {
  std::string name;
  std::vector<std::uint8_t> prototype;  // kSlotsPerWeek binary slots
  int count = 0;
  double flip_prob = 0.0;  // independent per-slot flip probability, [0, 0.5)
  // Per schema question, per modality: sampling weight (normalized on use).
  std::vector<std::vector<double>> modality_weights;
};

struct SynthSpec {
  QuestionSchema schema;
  std::vector<Archetype> archetypes;
};

struct SynthResult {
  Dataset dataset;
  std::vector<std::string> labels;  // planted archetype name per person
};

// Five planted schedule archetypes (counts 141/100/108/110/107, 5% slot
// noise) with survey answer tables that covary with the schedules.
SynthSpec default_synth_spec();

SynthSpec parse_synth_spec(const std::string& path);  // JSON
void write_synth_spec(const std::string& path, const SynthSpec& spec);

// Deterministic for fixed (spec, seed).
SynthResult synth_generate(const SynthSpec& spec, std::uint64_t seed);

// Sidecar mapping person_id -> planted archetype, for evaluation only.
void write_labels_csv(const std::string& path, const Dataset& dataset,
                      const std::vector<std::string>& labels);

}  // namespace chronomap
