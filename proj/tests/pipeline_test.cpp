#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "chronomap/csv.hpp"
#include "chronomap/pipeline.hpp"

using namespace chronomap;

namespace {

namespace fs = std::filesystem;

std::string temp_path(const std::string& name) {
  return (fs::temp_directory_path() / name).string();
}

/// The bundled generator shrunk to 100 people, and a string small enough to
/// train in milliseconds.
RunConfig small_synth_config() {
  RunConfig config;
  SynthSpec spec = default_synth_spec();
  for (Archetype& a : spec.archetypes) a.count = 20;
  config.synth = std::move(spec);
  config.som.units = 4;
  config.som.epochs = 10;
  config.superclasses = 2;
  config.seed = 5;
  return config;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return content;
}

std::string catch_stage(const RunConfig& config) {
  try {
    run_pipeline(config);
  } catch (const PipelineError& e) {
    return e.stage();
  }
  return "";
}

}  // namespace

TEST_CASE("the config is rejected before any work happens") {
  RunConfig config;
  config.superclasses = 5;
  CHECK_THROWS_WITH(run_pipeline(config), doctest::Contains("exactly one data source"));

  config.synth = default_synth_spec();
  config.weekly_path = "w.csv";
  config.individual_path = "i.csv";
  CHECK_THROWS_WITH(run_pipeline(config), doctest::Contains("exactly one data source"));

  config.synth.reset();
  config.individual_path.clear();
  CHECK_THROWS_WITH(run_pipeline(config),
                    doctest::Contains("needs both a weekly and an individual path"));

  config = RunConfig{};
  config.synth = default_synth_spec();
  CHECK_THROWS_WITH(run_pipeline(config), doctest::Contains("exactly one cut rule"));
  config.superclasses = 5;
  config.variance_threshold = 0.9;
  CHECK_THROWS_WITH(run_pipeline(config), doctest::Contains("exactly one cut rule"));

  config.variance_threshold = -1.0;
  config.superclasses = 11;  // one more than the string has units
  CHECK_THROWS_WITH(run_pipeline(config),
                    doctest::Contains("asked for 11 superclasses from a 10-unit string"));

  config.superclasses = 0;
  config.variance_threshold = 1.5;
  CHECK_THROWS_WITH(run_pipeline(config),
                    doctest::Contains("variance threshold must be in [0, 1]"));

  config.variance_threshold = -1.0;
  config.superclasses = 2;
  try {
    RunConfig bad = config;
    bad.superclasses = 11;
    run_pipeline(bad);
    FAIL("expected a config error");
  } catch (const PipelineError& e) {
    CHECK(e.stage() == "config");
  }
}

TEST_CASE("failures carry the stage they happened in") {
  RunConfig config;
  config.weekly_path = temp_path("nowhere_weekly.csv");
  config.individual_path = temp_path("nowhere_individual.csv");
  config.superclasses = 2;
  CHECK(catch_stage(config) == "load");

  RunConfig generate = small_synth_config();
  generate.synth->archetypes[0].count = -3;
  CHECK(catch_stage(generate) == "generate");

  RunConfig som = small_synth_config();
  som.som.units = 1;
  som.superclasses = 1;
  CHECK(catch_stage(som) == "som");
}

TEST_CASE("a small generator run is consistent and deterministic") {
  const RunConfig config = small_synth_config();
  const RunReport report = run_pipeline(config);

  CHECK(report.dataset.size() == 100);
  CHECK(report.join.kept == 100);
  CHECK(report.planted_labels.size() == 100);
  CHECK(report.dataset.schema.size() == 14);

  CHECK(report.model.units == 4);
  CHECK(report.assignment.unit_of.size() == 100);
  long total = 0;
  for (long s : report.assignment.class_sizes) total += s;
  CHECK(total == 100);
  CHECK(report.quantization >= 0.0);

  CHECK(report.dendrogram.leaf_count() <= 4);
  CHECK(report.variance_curve.size() ==
        static_cast<std::size_t>(report.dendrogram.leaf_count()) + 1);
  CHECK(report.partition.k == 2);
  CHECK(report.classes.class_sizes.size() == 2);
  long classed = 0;
  for (long s : report.classes.class_sizes) classed += s;
  CHECK(classed == 100);
  CHECK(report.partition.explained_variance ==
        report.variance_curve[2]);

  CHECK(report.embedding.coords.size() == 4);
  CHECK(report.crossings >= 0);
  CHECK(report.monotone.spearman >= -1.0);
  CHECK(report.monotone.spearman <= 1.0);

  CHECK(report.screen.results.size() == 14);
  CHECK(report.screen.keep.size() == 14);
  for (std::size_t c = 0; c < report.headcount_table.counts.size(); ++c) {
    for (long v : report.headcount_table.counts[c]) {
      CHECK(v <= report.classes.class_sizes[c]);
      CHECK(v >= 0);
    }
  }
  CHECK(report.curves.classes.size() + report.curves.omitted.size() == 2);

  const RunReport again = run_pipeline(config);
  CHECK(again.model.code_vectors == report.model.code_vectors);
  CHECK(again.partition.group_of_unit == report.partition.group_of_unit);
  CHECK(again.monotone.spearman == report.monotone.spearman);
  CHECK(again.crossings == report.crossings);

  RunConfig other = config;
  other.seed = 6;
  const RunReport different = run_pipeline(other);
  CHECK(different.model.code_vectors != report.model.code_vectors);
}

TEST_CASE("artifacts land in the output directory with the advertised names") {
  RunConfig config = small_synth_config();
  config.out_dir = temp_path("chronomap_pipe_out");
  fs::remove_all(config.out_dir);
  const RunReport report = run_pipeline(config);
  write_run_artifacts(config, report);

  const std::vector<std::string> expected = {
      "synth_spec.json", "weekly.csv",     "individual.csv",  "schema.txt",
      "labels.csv",      "som_model.csv",  "som_config.txt",  "assignment.csv",
      "dendrogram.csv",  "partition.csv",  "variance_by_k.csv", "embedding.csv",
      "chi_square.csv",  "headcounts.csv", "curves.csv",      "coherence.csv",
      "fig1_codevectors.svg", "fig2_mds.svg", "fig3_curves.svg", "report.txt"};
  for (const std::string& name : expected) {
    CAPTURE(name);
    CHECK(fs::exists(fs::path(config.out_dir) / name));
  }

  // One table per kept question, no more.
  std::size_t tables = 0;
  for (const auto& entry : fs::directory_iterator(config.out_dir)) {
    if (entry.path().filename().string().rfind("table_", 0) == 0) ++tables;
  }
  CHECK(tables == report.screen.kept.size());

  const auto headrows = csv::read_file((fs::path(config.out_dir) / "headcounts.csv").string());
  CHECK(headrows.size() == 1 + 2 * 9);  // two superclasses at nine default probes

  const std::string som_txt = read_text((fs::path(config.out_dir) / "som_config.txt").string());
  CHECK(som_txt.find("units = 4") != std::string::npos);
  CHECK(som_txt.find("epochs = 10") != std::string::npos);
  CHECK(som_txt.find("seed = 5") != std::string::npos);

  const std::string report_txt = read_text((fs::path(config.out_dir) / "report.txt").string());
  CHECK(report_txt.find("persons = 100") != std::string::npos);
  CHECK(report_txt.find("superclasses = 2") != std::string::npos);
  CHECK(report_txt.find("mds_crossings = ") != std::string::npos);
  CHECK(report_txt.find("kept_questions =") != std::string::npos);
  CHECK(report_txt.find("warnings = ") != std::string::npos);

  // Every line is either empty, a key = value pair, or a narrative line with
  // a fixed prefix, so the file stays machine-readable.
  std::istringstream lines(report_txt);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    const bool keyed = line.find(" = ") != std::string::npos;
    const bool narrative = line.rfind("coherence ", 0) == 0 || line.rfind("warning: ", 0) == 0;
    CAPTURE(line);
    CHECK((keyed || narrative));
  }

  fs::remove_all(config.out_dir);
}

TEST_CASE("file inputs join on person id and count the leftovers") {
  const QuestionSchema schema({{"Color", {"Red", "Blue"}}});
  const std::string weekly = temp_path("join_weekly.csv");
  const std::string individual = temp_path("join_individual.csv");
  const std::string schema_path = temp_path("join_schema.txt");

  std::vector<WeeklyProfile> profiles;
  for (const char* id : {"a", "b", "c"}) {
    profiles.push_back({id, std::vector<std::uint8_t>(672, 0)});
  }
  write_weekly_csv(weekly, profiles);
  write_individual_csv(individual, {{"b", {0}}, {"c", {1}}, {"d", {0}}}, schema);
  write_schema_file(schema_path, schema);

  RunConfig config;
  config.weekly_path = weekly;
  config.individual_path = individual;
  config.schema_path = schema_path;
  const RunReport report = prepare_dataset(config);
  CHECK(report.join.kept == 2);
  CHECK(report.join.profiles_dropped == 1);
  CHECK(report.join.records_dropped == 1);
  CHECK(report.dataset.profiles[0].person_id == "b");
  CHECK(report.dataset.profiles[1].person_id == "c");
  REQUIRE(report.warnings.size() == 2);
  CHECK(report.warnings[0].find("no matching questionnaire") != std::string::npos);
  CHECK(report.warnings[1].find("no matching weekly profile") != std::string::npos);

  // No overlap at all is an error, attributed to loading.
  write_individual_csv(individual, {{"x", {0}}}, schema);
  try {
    prepare_dataset(config);
    FAIL("expected a load error");
  } catch (const PipelineError& e) {
    CHECK(e.stage() == "load");
  }

  std::remove(weekly.c_str());
  std::remove(individual.c_str());
  std::remove(schema_path.c_str());
}
