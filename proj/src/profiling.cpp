#include "chronomap/profiling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chronomap/csv.hpp"

namespace chronomap {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

constexpr double kEps = 1e-15;

}  // namespace

long ContingencyTable::row_total(std::size_t m) const {
  long t = 0;
  for (long c : counts[m]) t += c;
  return t;
}

long ContingencyTable::col_total(std::size_t c) const {
  long t = 0;
  for (const auto& row : counts) t += row[c];
  return t;
}

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_q: need a > 0 and x >= 0");
  if (x == 0.0) return 1.0;
  const double log_prefix = a * std::log(x) - x - std::lgamma(a);
  if (x < a + 1.0) {
    // Series for P(a, x); Q = 1 - P.
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 1000; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * kEps) break;
    }
    return 1.0 - sum * std::exp(log_prefix);
  }
  // Continued fraction for Q(a, x), modified Lentz.
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return std::exp(log_prefix) * h;
}

double chi_square_p_value(double statistic, int dof) {
  if (dof < 1 || statistic <= 0.0) return 1.0;
  return regularized_gamma_q(static_cast<double>(dof) / 2.0, statistic / 2.0);
}

PersonClasses person_superclasses(const Assignment& assignment,
                                  const SuperclassPartition& partition) {
  PersonClasses out;
  out.k = partition.k;
  out.class_of.reserve(assignment.unit_of.size());
  out.class_sizes.assign(static_cast<std::size_t>(partition.k), 0);
  for (int unit : assignment.unit_of) {
    const int g = partition.group_of_unit.at(static_cast<std::size_t>(unit));
    if (g < 0) fail("person assigned to unit " + std::to_string(unit) +
                    ", which belongs to no superclass");
    out.class_of.push_back(g);
    ++out.class_sizes[static_cast<std::size_t>(g)];
  }
  return out;
}

ContingencyTable contingency_table(const Dataset& dataset, const PersonClasses& classes,
                                   int question, const SuperclassPartition& partition) {
  if (question < 0 || static_cast<std::size_t>(question) >= dataset.schema.size()) {
    throw std::out_of_range("question index out of range");
  }
  const Question& q = dataset.schema.questions()[static_cast<std::size_t>(question)];
  ContingencyTable t;
  t.question = q.name;
  t.modalities = q.modalities;
  t.classes = partition.group_labels;
  t.counts.assign(q.modalities.size(), std::vector<long>(static_cast<std::size_t>(classes.k), 0));
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const int m = dataset.records[i].answers[static_cast<std::size_t>(question)];
    const int c = classes.class_of[i];
    ++t.counts[static_cast<std::size_t>(m)][static_cast<std::size_t>(c)];
    ++t.total;
  }
  return t;
}

ChiSquareResult chi_square_test(const ContingencyTable& table) {
  ChiSquareResult out;
  std::vector<std::size_t> live_rows, live_cols;
  for (std::size_t m = 0; m < table.modalities.size(); ++m) {
    if (table.row_total(m) > 0) {
      live_rows.push_back(m);
    } else {
      ++out.dropped_rows;
    }
  }
  for (std::size_t c = 0; c < table.classes.size(); ++c) {
    if (table.col_total(c) > 0) {
      live_cols.push_back(c);
    } else {
      ++out.dropped_cols;
    }
  }
  if (live_rows.size() < 2 || live_cols.size() < 2) {
    fail("chi-square: table for \"" + table.question +
         "\" collapses to a single row or column");
  }
  const double n = static_cast<double>(table.total);
  for (std::size_t m : live_rows) {
    const double rt = static_cast<double>(table.row_total(m));
    for (std::size_t c : live_cols) {
      const double ct = static_cast<double>(table.col_total(c));
      const double expected = rt * ct / n;
      const double diff = static_cast<double>(table.counts[m][c]) - expected;
      out.statistic += diff * diff / expected;
    }
  }
  out.dof = static_cast<int>((live_rows.size() - 1) * (live_cols.size() - 1));
  out.p_value = chi_square_p_value(out.statistic, out.dof);
  return out;
}

QuestionScreen select_discriminant_questions(const Dataset& dataset, const PersonClasses& classes,
                                             const SuperclassPartition& partition, double alpha) {
  if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("alpha must be in [0, 1]");
  QuestionScreen out;
  for (std::size_t q = 0; q < dataset.schema.size(); ++q) {
    const auto table = contingency_table(dataset, classes, static_cast<int>(q), partition);
    ChiSquareResult result;
    try {
      result = chi_square_test(table);
    } catch (const std::exception&) {
      result.degenerate = true;
      for (std::size_t m = 0; m < table.modalities.size(); ++m) {
        if (table.row_total(m) == 0) ++result.dropped_rows;
      }
      for (std::size_t c = 0; c < table.classes.size(); ++c) {
        if (table.col_total(c) == 0) ++result.dropped_cols;
      }
    }
    const bool keep = alpha > 0.0 && result.p_value <= alpha;
    out.results.push_back(result);
    out.keep.push_back(keep);
    if (keep) out.kept.push_back(dataset.schema.questions()[q].name);
  }
  return out;
}

TestValueTable test_values(const ContingencyTable& table, double threshold) {
  TestValueTable out;
  const std::size_t rows = table.modalities.size();
  const std::size_t cols = table.classes.size();
  out.pct.assign(rows, std::vector<double>(cols, 0.0));
  out.total_pct.assign(rows, 0.0);
  out.values.assign(rows, std::vector<double>(cols, 0.0));
  out.highlight.assign(rows, std::vector<bool>(cols, false));
  out.degenerate.assign(rows, std::vector<bool>(cols, false));
  const long n = table.total;
  for (std::size_t m = 0; m < rows; ++m) {
    const long nm = table.row_total(m);
    if (n > 0) out.total_pct[m] = 100.0 * static_cast<double>(nm) / static_cast<double>(n);
    for (std::size_t c = 0; c < cols; ++c) {
      const long nc = table.col_total(c);
      if (nc > 0) {
        out.pct[m][c] =
            100.0 * static_cast<double>(table.counts[m][c]) / static_cast<double>(nc);
      }
      if (n < 2 || nm == 0 || nm == n || nc == 0 || nc == n) {
        out.degenerate[m][c] = true;
        continue;
      }
      // Mean and variance of the cell count when the class is a simple
      // random sample of size nc drawn without replacement.
      const double dn = static_cast<double>(n);
      const double dm = static_cast<double>(nm);
      const double dc = static_cast<double>(nc);
      const double mean = dc * dm / dn;
      const double variance = dc * (dn - dc) / (dn - 1.0) * (dm / dn) * (1.0 - dm / dn);
      const double v = (static_cast<double>(table.counts[m][c]) - mean) / std::sqrt(variance);
      out.values[m][c] = v;
      out.highlight[m][c] = v > threshold;
    }
  }
  return out;
}

std::string Probe::label() const {
  std::string out = day_name(day) + "_" + std::to_string(quarter / 4) + "h";
  const int minutes = (quarter % 4) * 15;
  if (minutes != 0) out += std::to_string(minutes);
  return out;
}

Probe parse_probe(const std::string& text) {
  const std::size_t at = text.find('@');
  if (at == std::string::npos) {
    throw std::invalid_argument("bad probe \"" + text + "\" (expected Day@HH:MM)");
  }
  Probe p;
  p.day = day_index(text.substr(0, at));
  p.quarter = parse_clock_quarter(text.substr(at + 1));
  if (p.quarter >= kQuartersPerDay) {
    throw std::invalid_argument("probe \"" + text + "\" is past the end of the day");
  }
  return p;
}

std::vector<Probe> default_probes() {
  std::vector<Probe> out;
  for (const char* day : {"Sat", "Sun", "Wed"}) {
    for (const char* clock : {"10:00", "16:00", "21:00"}) {
      out.push_back(parse_probe(std::string(day) + "@" + clock));
    }
  }
  return out;
}

HeadcountTable headcounts(const Dataset& dataset, const PersonClasses& classes,
                          const SuperclassPartition& partition, const std::vector<Probe>& probes) {
  HeadcountTable out;
  out.probes = probes;
  out.classes = partition.group_labels;
  out.counts.assign(static_cast<std::size_t>(classes.k),
                    std::vector<long>(probes.size(), 0));
  out.shares.assign(static_cast<std::size_t>(classes.k),
                    std::vector<double>(probes.size(), 0.0));
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto c = static_cast<std::size_t>(classes.class_of[i]);
    for (std::size_t p = 0; p < probes.size(); ++p) {
      if (activity_at(dataset.profiles[i], probes[p].day, probes[p].quarter)) {
        ++out.counts[c][p];
      }
    }
  }
  for (std::size_t c = 0; c < out.counts.size(); ++c) {
    const long size = classes.class_sizes[c];
    if (size == 0) continue;
    for (std::size_t p = 0; p < probes.size(); ++p) {
      out.shares[c][p] = static_cast<double>(out.counts[c][p]) / static_cast<double>(size);
    }
  }
  return out;
}

ActivityCurve average_activity_profiles(const Dataset& dataset, const PersonClasses& classes,
                                        const SuperclassPartition& partition) {
  std::vector<std::vector<double>> sums(
      static_cast<std::size_t>(classes.k),
      std::vector<double>(static_cast<std::size_t>(kSlotsPerWeek), 0.0));
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto c = static_cast<std::size_t>(classes.class_of[i]);
    const auto& slots = dataset.profiles[i].slots;
    for (int s = 0; s < kSlotsPerWeek; ++s) {
      sums[c][static_cast<std::size_t>(s)] += static_cast<double>(slots[static_cast<std::size_t>(s)]);
    }
  }
  ActivityCurve out;
  for (std::size_t c = 0; c < sums.size(); ++c) {
    const long size = classes.class_sizes[c];
    if (size == 0) {
      out.omitted.push_back(partition.group_labels[c]);
      continue;
    }
    for (double& v : sums[c]) v /= static_cast<double>(size);
    out.classes.push_back(partition.group_labels[c]);
    out.class_sizes.push_back(size);
    out.curves.push_back(std::move(sums[c]));
  }
  return out;
}

std::vector<CoherenceRow> coherence_report(const Dataset& dataset, const PersonClasses& classes,
                                           const SuperclassPartition& partition,
                                           const std::vector<Probe>& probes, double gap_points) {
  // Day-habit questions paired with the probes that can contradict them.
  struct Habit {
    const char* question;
    std::vector<std::size_t> probe_ids;
  };
  std::vector<Habit> habits;
  for (const char* qname : {"Night", "Sat", "Sun", "Wed"}) {
    Habit h;
    h.question = qname;
    for (std::size_t p = 0; p < probes.size(); ++p) {
      const Probe& probe = probes[p];
      bool matches = false;
      if (std::string(qname) == "Night") {
        matches = probe.quarter >= 84 || probe.quarter < 24;  // 21:00..06:00
      } else {
        matches = day_name(probe.day) == qname;
      }
      if (matches) h.probe_ids.push_back(p);
    }
    if (!h.probe_ids.empty()) habits.push_back(std::move(h));
  }

  const auto counts = headcounts(dataset, classes, partition, probes);
  std::vector<CoherenceRow> out;
  for (const Habit& habit : habits) {
    const int q = dataset.schema.question_index(habit.question);
    if (q < 0) continue;
    const int never = dataset.schema.modality_index(q, "Never");
    if (never < 0) continue;

    std::vector<long> never_counts(static_cast<std::size_t>(classes.k), 0);
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      if (dataset.records[i].answers[static_cast<std::size_t>(q)] == never) {
        ++never_counts[static_cast<std::size_t>(classes.class_of[i])];
      }
    }
    for (int c = 0; c < classes.k; ++c) {
      const long size = classes.class_sizes[static_cast<std::size_t>(c)];
      if (size == 0) continue;
      CoherenceRow row;
      row.superclass = partition.group_labels[static_cast<std::size_t>(c)];
      row.question = habit.question;
      std::size_t worst = habit.probe_ids[0];
      for (std::size_t p : habit.probe_ids) {
        if (counts.shares[static_cast<std::size_t>(c)][p] >
            counts.shares[static_cast<std::size_t>(c)][worst]) {
          worst = p;
        }
      }
      row.probe = probes[worst].label();
      row.observed_pct = 100.0 * counts.shares[static_cast<std::size_t>(c)][worst];
      row.declared_pct = 100.0 * (1.0 - static_cast<double>(never_counts[static_cast<std::size_t>(c)]) /
                                            static_cast<double>(size));
      row.gap = row.observed_pct - row.declared_pct;
      row.flagged = row.gap > gap_points;
      out.push_back(std::move(row));
    }
  }
  return out;
}

void write_chi_square_csv(const std::string& path, const QuestionScreen& screen,
                          const Dataset& dataset) {
  std::vector<csv::Row> rows;
  rows.push_back({"question", "statistic", "dof", "p_value", "dropped_rows", "dropped_cols",
                  "degenerate", "kept"});
  for (std::size_t q = 0; q < screen.results.size(); ++q) {
    const ChiSquareResult& r = screen.results[q];
    rows.push_back({dataset.schema.questions()[q].name, csv::format_double(r.statistic),
                    std::to_string(r.dof), csv::format_double(r.p_value),
                    std::to_string(r.dropped_rows), std::to_string(r.dropped_cols),
                    r.degenerate ? "1" : "0", screen.keep[q] ? "1" : "0"});
  }
  csv::write_file(path, rows);
}

// Percentage cells are rounded to whole numbers the way the printed tables
// show them; the test values keep full precision.
void write_contingency_csv(const std::string& path, const ContingencyTable& table,
                           const TestValueTable& tv) {
  std::vector<csv::Row> rows;
  csv::Row header;
  header.push_back("modality");
  for (const std::string& c : table.classes) header.push_back(c);
  header.push_back("Total");
  for (const std::string& c : table.classes) header.push_back("test_" + c);
  for (const std::string& c : table.classes) header.push_back("bold_" + c);
  rows.push_back(std::move(header));
  for (std::size_t m = 0; m < table.modalities.size(); ++m) {
    csv::Row row;
    row.push_back(table.modalities[m]);
    for (std::size_t c = 0; c < table.classes.size(); ++c) {
      row.push_back(std::to_string(std::lround(tv.pct[m][c])));
    }
    row.push_back(std::to_string(std::lround(tv.total_pct[m])));
    for (std::size_t c = 0; c < table.classes.size(); ++c) {
      row.push_back(tv.degenerate[m][c] ? "" : csv::format_double(tv.values[m][c]));
    }
    for (std::size_t c = 0; c < table.classes.size(); ++c) {
      row.push_back(tv.highlight[m][c] ? "1" : "0");
    }
    rows.push_back(std::move(row));
  }
  csv::write_file(path, rows);
}

void write_headcounts_csv(const std::string& path, const HeadcountTable& table) {
  std::vector<csv::Row> rows;
  rows.push_back({"superclass", "probe", "count", "pct"});
  for (std::size_t c = 0; c < table.classes.size(); ++c) {
    for (std::size_t p = 0; p < table.probes.size(); ++p) {
      rows.push_back({table.classes[c], table.probes[p].label(),
                      std::to_string(table.counts[c][p]),
                      csv::format_double(100.0 * table.shares[c][p])});
    }
  }
  csv::write_file(path, rows);
}

void write_curves_csv(const std::string& path, const ActivityCurve& curves) {
  std::vector<csv::Row> rows;
  csv::Row header;
  header.push_back("superclass");
  for (int s = 0; s < kSlotsPerWeek; ++s) header.push_back("s" + std::to_string(s));
  rows.push_back(std::move(header));
  for (std::size_t c = 0; c < curves.classes.size(); ++c) {
    csv::Row row;
    row.push_back(curves.classes[c]);
    for (double v : curves.curves[c]) row.push_back(csv::format_double(v));
    rows.push_back(std::move(row));
  }
  csv::write_file(path, rows);
}

ActivityCurve load_curves_csv(const std::string& path) {
  const auto rows = csv::read_file(path);
  const std::size_t expected = 1 + static_cast<std::size_t>(kSlotsPerWeek);
  if (rows.size() < 2 || rows[0].size() != expected || rows[0][0] != "superclass") {
    fail(path + ": bad curves file, expected superclass,s0..s" +
         std::to_string(kSlotsPerWeek - 1));
  }
  ActivityCurve out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != expected) {
      fail(path + ":" + std::to_string(r + 1) + ": ragged row");
    }
    out.classes.push_back(rows[r][0]);
    std::vector<double> curve;
    curve.reserve(static_cast<std::size_t>(kSlotsPerWeek));
    for (std::size_t c = 1; c < expected; ++c) curve.push_back(std::stod(rows[r][c]));
    out.curves.push_back(std::move(curve));
  }
  return out;
}

void write_coherence_csv(const std::string& path, const std::vector<CoherenceRow>& rows_in) {
  std::vector<csv::Row> rows;
  rows.push_back({"superclass", "question", "probe", "observed_pct", "declared_pct", "gap",
                  "flagged"});
  for (const CoherenceRow& r : rows_in) {
    rows.push_back({r.superclass, r.question, r.probe, csv::format_double(r.observed_pct),
                    csv::format_double(r.declared_pct), csv::format_double(r.gap),
                    r.flagged ? "1" : "0"});
  }
  csv::write_file(path, rows);
}

}  // namespace chronomap
