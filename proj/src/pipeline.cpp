#include "chronomap/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "chronomap/csv.hpp"
#include "chronomap/rng.hpp"

namespace chronomap {

namespace {

template <class Fn>
auto staged(const char* stage, Fn&& fn) {
  try {
    return fn();
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(stage, e.what());
  }
}

void check_config(const RunConfig& config) {
  const bool has_files = !config.weekly_path.empty() || !config.individual_path.empty();
  if (config.synth.has_value() == has_files) {
    throw PipelineError("config",
                        "exactly one data source is required: input files or a generator spec");
  }
  if (has_files && (config.weekly_path.empty() || config.individual_path.empty())) {
    throw PipelineError("config", "file input needs both a weekly and an individual path");
  }
  const bool by_k = config.superclasses > 0;
  const bool by_variance = config.variance_threshold >= 0.0;
  if (by_k == by_variance) {
    throw PipelineError("config",
                        "exactly one cut rule is required: a superclass count or a "
                        "variance threshold");
  }
  if (by_k && config.superclasses > config.som.units) {
    throw PipelineError("config", "asked for " + std::to_string(config.superclasses) +
                                      " superclasses from a " +
                                      std::to_string(config.som.units) + "-unit string");
  }
  if (by_variance && config.variance_threshold > 1.0) {
    throw PipelineError("config", "variance threshold must be in [0, 1]");
  }
}

}  // namespace

RunReport prepare_dataset(const RunConfig& config) {
  RunReport report;
  if (config.synth) {
    staged("generate", [&] {
      SynthResult synth = synth_generate(*config.synth, mix_seed(config.seed, kRunSeedTagSynth));
      report.dataset = std::move(synth.dataset);
      report.planted_labels = std::move(synth.labels);
      report.join.kept = report.dataset.size();
      return 0;
    });
  } else {
    staged("load", [&] {
      auto profiles = parse_weekly_reports(config.weekly_path);
      QuestionSchema schema = config.schema_path.empty()
                                  ? QuestionSchema::survey_default()
                                  : parse_schema_file(config.schema_path);
      auto records = parse_individual_records(config.individual_path, schema);
      JoinResult joined = join_datasets(std::move(profiles), std::move(records), std::move(schema));
      report.dataset = std::move(joined.dataset);
      report.join = joined.report;
      if (report.join.profiles_dropped > 0) {
        report.warnings.push_back(std::to_string(report.join.profiles_dropped) +
                                  " weekly profile(s) had no matching questionnaire");
      }
      if (report.join.records_dropped > 0) {
        report.warnings.push_back(std::to_string(report.join.records_dropped) +
                                  " questionnaire(s) had no matching weekly profile");
      }
      return 0;
    });
  }
  return report;
}

RunReport run_pipeline(const RunConfig& config) {
  check_config(config);
  RunReport report = prepare_dataset(config);

  staged("som", [&] {
    report.model = train_som(report.dataset, config.som, mix_seed(config.seed, kRunSeedTagSom));
    report.assignment = assign_all(report.model, report.dataset);
    report.quantization = quantization_error(report.model, report.dataset);
    int empty_units = 0;
    for (long s : report.assignment.class_sizes) {
      if (s == 0) ++empty_units;
    }
    if (empty_units > 0) {
      report.warnings.push_back(std::to_string(empty_units) +
                                " unit(s) attracted nobody and stay out of the superclasses");
    }
    return 0;
  });

  staged("superclasses", [&] {
    report.dendrogram = ward_cluster_codebook(report.model, report.assignment);
    report.variance_curve = variance_by_k(report.dendrogram);
    if (config.superclasses > 0) {
      if (config.superclasses > report.dendrogram.leaf_count()) {
        throw std::invalid_argument("asked for " + std::to_string(config.superclasses) +
                                    " superclasses but only " +
                                    std::to_string(report.dendrogram.leaf_count()) +
                                    " units are in use");
      }
      report.partition = cut_to_k(report.dendrogram, config.superclasses);
    } else {
      report.partition = cut_to_variance(report.dendrogram, config.variance_threshold);
    }
    report.classes = person_superclasses(report.assignment, report.partition);
    report.ev_individuals =
        explained_variance_individuals(report.dataset, report.assignment, report.partition);
    report.contiguity = contiguity_check(report.partition);
    if (!report.contiguity.contiguous) {
      std::string units;
      for (int u : report.contiguity.break_units) {
        units += (units.empty() ? "" : ", ") + std::to_string(u);
      }
      report.warnings.push_back("superclasses are not contiguous along the string (unit " +
                                units + ")");
    }
    return 0;
  });

  staged("mds", [&] {
    const DistanceMatrix distances = pairwise_distances(report.model.code_vectors);
    report.embedding = classical_mds(distances, std::min(2, distances.n - 1));
    report.crossings = crossing_count(report.embedding.coords);
    report.monotone = ordering_monotone(report.embedding);
    if (!report.embedding.clamped_axes.empty()) {
      report.warnings.push_back("the code-vector distances are not fully planar; " +
                                std::to_string(report.embedding.clamped_axes.size()) +
                                " negative eigenvalue(s) were clamped");
    }
    if (report.crossings > 0) {
      report.warnings.push_back("the embedded string crosses itself " +
                                std::to_string(report.crossings) + " time(s)");
    }
    if (!report.monotone.monotone) {
      report.warnings.push_back("string order is not monotone in the embedding plane");
    }
    return 0;
  });

  staged("profile", [&] {
    report.screen = select_discriminant_questions(report.dataset, report.classes,
                                                  report.partition, config.alpha);
    const std::vector<Probe> probes = config.probes.empty() ? default_probes() : config.probes;
    report.headcount_table = headcounts(report.dataset, report.classes, report.partition, probes);
    report.curves = average_activity_profiles(report.dataset, report.classes, report.partition);
    for (const std::string& label : report.curves.omitted) {
      report.warnings.push_back("superclass " + label + " is empty; no activity curve for it");
    }
    report.coherence = coherence_report(report.dataset, report.classes, report.partition, probes,
                                        config.coherence_gap);
    return 0;
  });

  return report;
}

void write_som_config(const std::string& path, const SomConfig& config, std::uint64_t seed) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << "units = " << config.units << '\n';
  out << "epochs = " << config.epochs << '\n';
  out << "lr = " << csv::format_double(config.lr_start) << ":" << csv::format_double(config.lr_end)
      << '\n';
  out << "radius = " << csv::format_double(config.radius_start) << ":"
      << csv::format_double(config.radius_end) << '\n';
  out << "init = " << (config.init == SomConfig::Init::Sample ? "sample" : "uniform") << '\n';
  out << "seed = " << seed << '\n';
}

void write_report_txt(const std::string& path, const RunConfig& config, const RunReport& report) {
  std::ostringstream out;
  out << "persons = " << report.dataset.size() << '\n';
  out << "questions = " << report.dataset.schema.size() << '\n';
  if (!config.synth) {
    out << "profiles_without_questionnaire = " << report.join.profiles_dropped << '\n';
    out << "questionnaires_without_profile = " << report.join.records_dropped << '\n';
  }
  out << "seed = " << config.seed << '\n';
  out << '\n';
  out << "units = " << report.model.units << '\n';
  out << "quantization_error = " << csv::format_double(report.quantization) << '\n';
  out << "class_sizes =";
  for (long s : report.assignment.class_sizes) out << ' ' << s;
  out << '\n';
  out << '\n';
  out << "superclasses = " << report.partition.k << '\n';
  for (int g = 0; g < report.partition.k; ++g) {
    out << "superclass_" << report.partition.group_labels[static_cast<std::size_t>(g)] << " = units";
    for (std::size_t u = 0; u < report.partition.group_of_unit.size(); ++u) {
      if (report.partition.group_of_unit[u] == g) out << ' ' << u;
    }
    out << " | " << report.classes.class_sizes[static_cast<std::size_t>(g)] << " persons\n";
  }
  out << "explained_variance_codes = " << csv::format_double(report.partition.explained_variance)
      << '\n';
  out << "explained_variance_individuals = " << csv::format_double(report.ev_individuals) << '\n';
  out << "contiguous_along_string = " << (report.contiguity.contiguous ? "yes" : "no") << '\n';
  out << '\n';
  out << "mds_crossings = " << report.crossings << '\n';
  out << "mds_spearman = " << csv::format_double(report.monotone.spearman) << '\n';
  out << "mds_monotone = " << (report.monotone.monotone ? "yes" : "no") << '\n';
  for (std::size_t a = 0; a < report.embedding.eigenvalues.size(); ++a) {
    out << "mds_eigenvalue_" << (a + 1) << " = "
        << csv::format_double(report.embedding.eigenvalues[a]) << '\n';
  }
  out << '\n';
  out << "alpha = " << csv::format_double(config.alpha) << '\n';
  out << "kept_questions =";
  for (const std::string& q : report.screen.kept) out << ' ' << q;
  out << '\n';
  out << "dropped_questions =";
  for (std::size_t q = 0; q < report.screen.keep.size(); ++q) {
    if (!report.screen.keep[q]) out << ' ' << report.dataset.schema.questions()[q].name;
  }
  out << '\n';
  out << '\n';
  int flagged = 0;
  for (const CoherenceRow& row : report.coherence) {
    if (row.flagged) ++flagged;
  }
  out << "coherence_flags = " << flagged << '\n';
  for (const CoherenceRow& row : report.coherence) {
    if (!row.flagged) continue;
    out << "coherence " << row.superclass << " " << row.question << ": declares "
        << csv::format_double(row.declared_pct, 1) << "% at most occasional, diary shows "
        << csv::format_double(row.observed_pct, 1) << "% at " << row.probe << '\n';
  }
  out << '\n';
  out << "warnings = " << report.warnings.size() << '\n';
  for (const std::string& w : report.warnings) out << "warning: " << w << '\n';

  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write file: " + path);
  file << out.str();
}

void write_run_artifacts(const RunConfig& config, const RunReport& report) {
  namespace fs = std::filesystem;
  fs::create_directories(config.out_dir);
  const auto in_dir = [&](const std::string& name) {
    return (fs::path(config.out_dir) / name).string();
  };

  if (config.synth) {
    write_synth_spec(in_dir("synth_spec.json"), *config.synth);
    write_weekly_csv(in_dir("weekly.csv"), report.dataset.profiles);
    write_individual_csv(in_dir("individual.csv"), report.dataset.records, report.dataset.schema);
    write_schema_file(in_dir("schema.txt"), report.dataset.schema);
    write_labels_csv(in_dir("labels.csv"), report.dataset, report.planted_labels);
  }

  write_model_csv(in_dir("som_model.csv"), report.model);
  write_som_config(in_dir("som_config.txt"), config.som, config.seed);
  write_assignment_csv(in_dir("assignment.csv"), report.dataset, report.assignment);

  write_dendrogram_csv(in_dir("dendrogram.csv"), report.dendrogram);
  write_partition_csv(in_dir("partition.csv"), report.partition);
  write_variance_csv(in_dir("variance_by_k.csv"), report.variance_curve);

  write_embedding_csv(in_dir("embedding.csv"), report.embedding);

  write_chi_square_csv(in_dir("chi_square.csv"), report.screen, report.dataset);
  for (std::size_t q = 0; q < report.screen.keep.size(); ++q) {
    if (!report.screen.keep[q]) continue;
    const auto table =
        contingency_table(report.dataset, report.classes, static_cast<int>(q), report.partition);
    const auto tv = test_values(table, config.tv_threshold);
    write_contingency_csv(in_dir("table_" + table.question + ".csv"), table, tv);
  }
  write_headcounts_csv(in_dir("headcounts.csv"), report.headcount_table);
  write_curves_csv(in_dir("curves.csv"), report.curves);
  write_coherence_csv(in_dir("coherence.csv"), report.coherence);

  write_codevector_figure(in_dir("fig1_codevectors.svg"), report.model,
                          report.assignment.class_sizes);
  write_embedding_figure(in_dir("fig2_mds.svg"), report.embedding);
  write_curves_figure(in_dir("fig3_curves.svg"), report.curves);

  write_report_txt(in_dir("report.txt"), config, report);
}

}  // namespace chronomap
