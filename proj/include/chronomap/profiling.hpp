#pragma once

#include <string>
#include <vector>

#include "chronomap/superclassing.hpp"

namespace chronomap {

/// Superclass of every person, plus per-class headcounts.
struct PersonClasses {
  int k = 0;
  std::vector<int> class_of;      // aligned with Dataset person order
  std::vector<long> class_sizes;  // per superclass
};

/// Modality-by-superclass counts for one question.
struct ContingencyTable {
  std::string question;
  std::vector<std::string> modalities;
  std::vector<std::string> classes;
  std::vector<std::vector<long>> counts;  // [modality][class]
  long total = 0;

  long row_total(std::size_t m) const;
  long col_total(std::size_t c) const;
};

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  int dropped_rows = 0;  // zero-margin modalities removed before testing
  int dropped_cols = 0;
  bool degenerate = false;  // the table collapsed; set by the question screen
};

struct QuestionScreen {
  std::vector<std::string> kept;  // question names, schema order
  std::vector<ChiSquareResult> results;  // all questions, schema order
  std::vector<bool> keep;                // all questions, schema order
};

/// Hypergeometric standardized deviations of each cell from independence,
/// and whether each is highlighted (value strictly above `threshold`).
/// Percentages are kept unrounded here; writers round for display.
struct TestValueTable {
  std::vector<std::vector<double>> pct;       // [modality][class], 100·count/class size
  std::vector<double> total_pct;              // [modality], 100·row total/population
  std::vector<std::vector<double>> values;    // [modality][class]
  std::vector<std::vector<bool>> highlight;   // [modality][class]
  std::vector<std::vector<bool>> degenerate;  // margin made the cell undefined
};

struct Probe {
  int day = 0;      // 0 = Monday
  int quarter = 0;  // 0..95

  std::string label() const;  // e.g. "Sat_10h"
};

/// People at work per superclass at each probe instant.
struct HeadcountTable {
  std::vector<Probe> probes;
  std::vector<std::string> classes;
  std::vector<std::vector<long>> counts;  // [class][probe]
  std::vector<std::vector<double>> shares;  // same, as fraction of class size
};

/// Mean activity of each superclass across the 672 slots. Superclasses with
/// no members have no mean and are left out; their labels land in `omitted`.
struct ActivityCurve {
  std::vector<std::string> classes;
  std::vector<long> class_sizes;
  std::vector<std::vector<double>> curves;  // [class][slot]
  std::vector<std::string> omitted;
};

/// One tension between declared habits and observed schedules.
struct CoherenceRow {
  std::string superclass;
  std::string question;
  std::string probe;        // worst probe for that question's day
  double observed_pct = 0.0;   // % of the class at work at the probe
  double declared_pct = 0.0;   // 100 - % answering "Never"
  double gap = 0.0;            // observed - declared, positive = tension
  bool flagged = false;
};

/// Regularized upper incomplete gamma Q(a, x); the chi-square survival
/// function is Q(dof/2, stat/2). Exposed for direct verification.
double regularized_gamma_q(double a, double x);

double chi_square_p_value(double statistic, int dof);

PersonClasses person_superclasses(const Assignment& assignment,
                                  const SuperclassPartition& partition);

ContingencyTable contingency_table(const Dataset& dataset, const PersonClasses& classes,
                                   int question, const SuperclassPartition& partition);

/// Pearson independence test. Rows and columns whose margin is zero are
/// dropped first; throws if fewer than two of either survive.
ChiSquareResult chi_square_test(const ContingencyTable& table);

/// Keep the questions whose chi-square p-value is at most `alpha`. A question
/// whose table collapses to a single row or column cannot discriminate; it is
/// recorded with p = 1 and the degenerate flag instead of failing the screen.
QuestionScreen select_discriminant_questions(const Dataset& dataset, const PersonClasses& classes,
                                             const SuperclassPartition& partition, double alpha);

TestValueTable test_values(const ContingencyTable& table, double threshold);

Probe parse_probe(const std::string& text);  // "Sat@10:00"
std::vector<Probe> default_probes();

HeadcountTable headcounts(const Dataset& dataset, const PersonClasses& classes,
                          const SuperclassPartition& partition, const std::vector<Probe>& probes);

ActivityCurve average_activity_profiles(const Dataset& dataset, const PersonClasses& classes,
                                        const SuperclassPartition& partition);

/// Compare what each class answers about a day (Sat/Sun/Wed/Night questions
/// with a Usually/Sometimes/Never scale) against what its diaries show at
/// the probes on that day. Flag when observed activity exceeds the declared
/// level by more than `gap_points` percentage points.
std::vector<CoherenceRow> coherence_report(const Dataset& dataset, const PersonClasses& classes,
                                           const SuperclassPartition& partition,
                                           const std::vector<Probe>& probes, double gap_points);

void write_chi_square_csv(const std::string& path, const QuestionScreen& screen,
                          const Dataset& dataset);
void write_contingency_csv(const std::string& path, const ContingencyTable& table,
                           const TestValueTable& tv);
void write_headcounts_csv(const std::string& path, const HeadcountTable& table);
void write_curves_csv(const std::string& path, const ActivityCurve& curves);
ActivityCurve load_curves_csv(const std::string& path);
void write_coherence_csv(const std::string& path, const std::vector<CoherenceRow>& rows);

}  // namespace chronomap
