#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "chronomap/csv.hpp"
#include "chronomap/pipeline.hpp"
#include "chronomap/rng.hpp"

namespace {

using namespace chronomap;

std::pair<double, double> parse_schedule(const std::string& text, const std::string& flag) {
  const std::size_t colon = text.find(':');
  if (colon == std::string::npos) {
    throw CLI::ValidationError(flag, "expected START:END, got \"" + text + "\"");
  }
  try {
    return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw CLI::ValidationError(flag, "expected START:END, got \"" + text + "\"");
  }
}

struct CommonDataOpts {
  std::string weekly;
  std::string individual;
  std::string schema;
};

void add_data_options(CLI::App* cmd, CommonDataOpts& opts) {
  cmd->add_option("--weekly", opts.weekly, "Weekly diaries CSV (person_id,s0..s671)");
  cmd->add_option("--individual", opts.individual, "Questionnaire CSV (person_id + one column per question)");
  cmd->add_option("--schema", opts.schema, "Question schema file; omit for the built-in survey");
}

int cmd_synth(const std::string& spec_path, const std::string& emit_path,
              std::uint64_t seed, const std::string& out_dir) {
  if (!emit_path.empty()) {
    write_synth_spec(emit_path, default_synth_spec());
    std::cout << "wrote " << emit_path << "\n";
    return 0;
  }
  const SynthSpec spec = spec_path.empty() ? default_synth_spec() : parse_synth_spec(spec_path);
  const SynthResult result = synth_generate(spec, mix_seed(seed, kRunSeedTagSynth));

  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const auto in_dir = [&](const std::string& name) {
    return (fs::path(out_dir) / name).string();
  };
  write_synth_spec(in_dir("synth_spec.json"), spec);
  write_weekly_csv(in_dir("weekly.csv"), result.dataset.profiles);
  write_individual_csv(in_dir("individual.csv"), result.dataset.records, result.dataset.schema);
  write_schema_file(in_dir("schema.txt"), result.dataset.schema);
  write_labels_csv(in_dir("labels.csv"), result.dataset, result.labels);
  std::cout << "generated " << result.dataset.size() << " persons across "
            << spec.archetypes.size() << " archetypes into " << out_dir << "\n";
  return 0;
}

int cmd_run(const RunConfig& config) {
  const RunReport report = run_pipeline(config);
  write_run_artifacts(config, report);

  std::cout << report.dataset.size() << " persons, " << report.model.units << " units, "
            << report.partition.k << " superclasses\n";
  std::cout << "explained variance (codes) = "
            << csv::format_double(report.partition.explained_variance, 4) << "\n";
  std::cout << "string check: " << report.crossings << " crossings, spearman = "
            << csv::format_double(report.monotone.spearman, 4) << "\n";
  int flagged = 0;
  for (const auto& row : report.coherence) {
    if (row.flagged) ++flagged;
  }
  std::cout << "kept " << report.screen.kept.size() << "/" << report.dataset.schema.size()
            << " questions, " << flagged << " coherence flag(s)\n";
  for (const auto& w : report.warnings) std::cout << "warning: " << w << "\n";
  std::cout << "artifacts in " << config.out_dir << "\n";
  return 0;
}

int cmd_profile(const CommonDataOpts& data, const std::string& assignment_path,
                const std::string& partition_path, const std::vector<std::string>& probe_args,
                double alpha, double tv_threshold, double gap, const std::string& out_dir) {
  auto profiles = parse_weekly_reports(data.weekly);
  QuestionSchema schema = data.schema.empty() ? QuestionSchema::survey_default()
                                              : parse_schema_file(data.schema);
  auto records = parse_individual_records(data.individual, schema);
  const JoinResult joined =
      join_datasets(std::move(profiles), std::move(records), std::move(schema));
  const Dataset& dataset = joined.dataset;

  const SuperclassPartition partition = load_partition_csv(partition_path);
  const Assignment assignment = load_assignment_csv(
      assignment_path, dataset, static_cast<int>(partition.group_of_unit.size()));
  const PersonClasses classes = person_superclasses(assignment, partition);

  std::vector<Probe> probes;
  for (const std::string& text : probe_args) probes.push_back(parse_probe(text));
  if (probes.empty()) probes = default_probes();

  const QuestionScreen screen =
      select_discriminant_questions(dataset, classes, partition, alpha);
  const HeadcountTable counts = headcounts(dataset, classes, partition, probes);
  const ActivityCurve curves = average_activity_profiles(dataset, classes, partition);
  const auto coherence = coherence_report(dataset, classes, partition, probes, gap);

  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const auto in_dir = [&](const std::string& name) {
    return (fs::path(out_dir) / name).string();
  };
  write_chi_square_csv(in_dir("chi_square.csv"), screen, dataset);
  for (std::size_t q = 0; q < screen.keep.size(); ++q) {
    if (!screen.keep[q]) continue;
    const auto table = contingency_table(dataset, classes, static_cast<int>(q), partition);
    const auto tv = test_values(table, tv_threshold);
    write_contingency_csv(in_dir("table_" + table.question + ".csv"), table, tv);
  }
  write_headcounts_csv(in_dir("headcounts.csv"), counts);
  write_curves_csv(in_dir("curves.csv"), curves);
  write_coherence_csv(in_dir("coherence.csv"), coherence);

  int flagged = 0;
  for (const auto& row : coherence) {
    if (row.flagged) ++flagged;
  }
  std::cout << dataset.size() << " persons in " << partition.k << " superclasses; kept "
            << screen.kept.size() << "/" << dataset.schema.size() << " questions, " << flagged
            << " coherence flag(s)\n";
  std::cout << "artifacts in " << out_dir << "\n";
  return 0;
}

int cmd_plot(const std::string& model_path, const std::string& embedding_path,
             const std::string& curves_path, const std::string& out_dir) {
  if (model_path.empty() && embedding_path.empty() && curves_path.empty()) {
    std::cerr << "error: plot needs at least one of --model, --embedding, --curves\n";
    return 2;
  }
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const auto in_dir = [&](const std::string& name) {
    return (fs::path(out_dir) / name).string();
  };
  if (!model_path.empty()) {
    const SomModel model = load_model_csv(model_path);
    write_codevector_figure(in_dir("fig1_codevectors.svg"), model, {});
    std::cout << "wrote " << in_dir("fig1_codevectors.svg") << "\n";
  }
  if (!embedding_path.empty()) {
    const MdsEmbedding embedding = load_embedding_csv(embedding_path);
    write_embedding_figure(in_dir("fig2_mds.svg"), embedding);
    std::cout << "wrote " << in_dir("fig2_mds.svg") << "\n";
  }
  if (!curves_path.empty()) {
    const ActivityCurve curves = load_curves_csv(curves_path);
    write_curves_figure(in_dir("fig3_curves.svg"), curves);
    std::cout << "wrote " << in_dir("fig3_curves.svg") << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chronomap: orders weekly work diaries on a self-organizing string,\n"
               "merges the string into superclasses and profiles them against a\n"
               "categorical questionnaire"};
  app.require_subcommand(1);

  // --- synth ---------------------------------------------------------------
  auto* synth = app.add_subcommand("synth", "Generate a synthetic diary + questionnaire dataset");
  std::string synth_spec_path, synth_emit_path, synth_out = "out";
  std::uint64_t synth_seed = 1;
  synth->add_option("--spec", synth_spec_path, "Generator spec JSON; omit for the built-in one");
  synth->add_option("--seed", synth_seed, "Random seed");
  synth->add_option("--out", synth_out, "Output directory");
  synth->add_option("--emit-default-spec", synth_emit_path,
                    "Write the built-in generator spec to this path and exit");

  // --- run -------------------------------------------------------------------
  auto* run = app.add_subcommand("run", "Full analysis: string, superclasses, check, profiles");
  CommonDataOpts run_data;
  add_data_options(run, run_data);
  std::string run_synth_spec;
  run->add_option("--synth", run_synth_spec,
                  "Generate the dataset instead of reading files: a spec JSON path, or "
                  "\"default\"");
  RunConfig config;
  std::string lr_text, radius_text, init_text = "sample";
  std::vector<std::string> probe_args;
  run->add_option("--units", config.som.units, "String length")->capture_default_str();
  run->add_option("--epochs", config.som.epochs, "Training passes over the data")
      ->capture_default_str();
  run->add_option("--lr", lr_text, "Learning-rate schedule START:END (default 0.5:0.01)");
  run->add_option("--radius", radius_text, "Neighborhood radius schedule START:END (default 5:0.5)");
  run->add_option("--init", init_text, "Codebook init: sample | uniform")->capture_default_str();
  run->add_option("--superclasses", config.superclasses, "Cut the tree to this many groups");
  run->add_option("--variance", config.variance_threshold,
                  "Cut at the smallest k whose explained variance reaches this");
  run->add_option("--alpha", config.alpha, "Keep questions with chi-square p <= alpha")
      ->capture_default_str();
  run->add_option("--tv-threshold", config.tv_threshold, "Highlight cells with test value above this")
      ->capture_default_str();
  run->add_option("--gap", config.coherence_gap,
                  "Coherence flag threshold, percentage points")
      ->capture_default_str();
  run->add_option("--probes", probe_args, "Probe instants, e.g. Sat@10:00,Sun@16:00")
      ->delimiter(',');
  run->add_option("--seed", config.seed, "Random seed")->capture_default_str();
  run->add_option("--out", config.out_dir, "Output directory")->capture_default_str();

  // --- profile ---------------------------------------------------------------
  auto* profile = app.add_subcommand("profile", "Re-profile superclasses from saved intermediates");
  CommonDataOpts profile_data;
  add_data_options(profile, profile_data);
  std::string profile_assignment, profile_partition, profile_out = "out";
  std::vector<std::string> profile_probe_args;
  double profile_alpha = 0.05, profile_tv = 1.0, profile_gap = 20.0;
  profile->add_option("--assignment", profile_assignment, "assignment.csv from a run")->required();
  profile->add_option("--partition", profile_partition, "partition.csv from a run")->required();
  profile->add_option("--probes", profile_probe_args, "Probe instants, e.g. Sat@10:00,Sun@16:00")
      ->delimiter(',');
  profile->add_option("--alpha", profile_alpha, "Keep questions with chi-square p <= alpha")
      ->capture_default_str();
  profile->add_option("--tv-threshold", profile_tv, "Highlight cells with test value above this")
      ->capture_default_str();
  profile->add_option("--gap", profile_gap, "Coherence flag threshold, percentage points")
      ->capture_default_str();
  profile->add_option("--out", profile_out, "Output directory")->capture_default_str();

  // --- plot ------------------------------------------------------------------
  auto* plot = app.add_subcommand("plot", "Redraw figures from saved intermediates");
  std::string plot_model, plot_embedding, plot_curves, plot_out = ".";
  plot->add_option("--model", plot_model, "som_model.csv to draw as code-vector panels");
  plot->add_option("--embedding", plot_embedding, "embedding.csv to draw as the string plane");
  plot->add_option("--curves", plot_curves, "curves.csv to draw as superclass activity");
  plot->add_option("--out", plot_out, "Output directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      return cmd_synth(synth_spec_path, synth_emit_path, synth_seed, synth_out);
    }
    if (run->parsed()) {
      if (!lr_text.empty()) {
        std::tie(config.som.lr_start, config.som.lr_end) = parse_schedule(lr_text, "--lr");
      }
      if (!radius_text.empty()) {
        std::tie(config.som.radius_start, config.som.radius_end) =
            parse_schedule(radius_text, "--radius");
      }
      if (init_text == "sample") {
        config.som.init = SomConfig::Init::Sample;
      } else if (init_text == "uniform") {
        config.som.init = SomConfig::Init::Uniform;
      } else {
        std::cerr << "error: --init must be sample or uniform\n";
        return 2;
      }
      for (const std::string& text : probe_args) config.probes.push_back(parse_probe(text));
      config.weekly_path = run_data.weekly;
      config.individual_path = run_data.individual;
      config.schema_path = run_data.schema;
      if (!run_synth_spec.empty()) {
        config.synth = run_synth_spec == "default" ? default_synth_spec()
                                                   : parse_synth_spec(run_synth_spec);
      }
      return cmd_run(config);
    }
    if (profile->parsed()) {
      return cmd_profile(profile_data, profile_assignment, profile_partition, profile_probe_args,
                         profile_alpha, profile_tv, profile_gap, profile_out);
    }
    if (plot->parsed()) {
      return cmd_plot(plot_model, plot_embedding, plot_curves, plot_out);
    }
  } catch (const chronomap::PipelineError& e) {
    std::string message = e.what();
    const std::string prefix = e.stage() + ": ";
    if (message.rfind(prefix, 0) == 0) message.erase(0, prefix.size());
    std::cerr << "error in stage " << e.stage() << ": " << message << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
