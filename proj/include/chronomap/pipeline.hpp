#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chronomap/data_model.hpp"
#include "chronomap/mds_check.hpp"
#include "chronomap/profiling.hpp"
#include "chronomap/som_string.hpp"
#include "chronomap/superclassing.hpp"
#include "chronomap/svg_figures.hpp"

namespace chronomap {

/// Everything one analysis run needs. Exactly one data source must be set:
/// either the three input paths or a generator spec.
struct RunConfig {
  std::string weekly_path;
  std::string individual_path;
  std::string schema_path;  // optional; empty means the built-in survey
  std::optional<SynthSpec> synth;

  SomConfig som;
  int superclasses = 0;             // > 0 cuts the tree to k groups
  double variance_threshold = -1.0; // in [0,1] cuts at the smallest adequate k
  std::vector<Probe> probes;        // empty means the default probe grid
  double alpha = 0.05;
  double tv_threshold = 1.0;
  double coherence_gap = 20.0;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
};

/// All results of a run, before anything lands on disk.
struct RunReport {
  Dataset dataset;
  JoinReport join;
  std::vector<std::string> planted_labels;  // generator runs only

  SomModel model;
  Assignment assignment;
  double quantization = 0.0;

  Dendrogram dendrogram;
  std::vector<double> variance_curve;
  SuperclassPartition partition;
  double ev_individuals = 0.0;
  ContiguityResult contiguity;

  MdsEmbedding embedding;
  int crossings = 0;
  MonotoneResult monotone;

  PersonClasses classes;
  QuestionScreen screen;
  HeadcountTable headcount_table;
  ActivityCurve curves;
  std::vector<CoherenceRow> coherence;

  std::vector<std::string> warnings;
};

/// A failure attributed to one stage of the run.
class PipelineError : public std::runtime_error {
 public:
  PipelineError(std::string stage, const std::string& message)
      : std::runtime_error(stage + ": " + message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

/// Seed tags for the run's independent random streams.
inline constexpr std::uint64_t kRunSeedTagSynth = 1;
inline constexpr std::uint64_t kRunSeedTagSom = 2;

/// Load or generate the dataset named by the config.
RunReport prepare_dataset(const RunConfig& config);

/// Full analysis: dataset, string, superclasses, planarity check, profiles.
RunReport run_pipeline(const RunConfig& config);

/// Write every artifact of a finished run into config.out_dir.
void write_run_artifacts(const RunConfig& config, const RunReport& report);

void write_som_config(const std::string& path, const SomConfig& config, std::uint64_t seed);
void write_report_txt(const std::string& path, const RunConfig& config, const RunReport& report);

}  // namespace chronomap
