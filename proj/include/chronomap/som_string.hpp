#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chronomap/data_model.hpp"

namespace chronomap {

/// Configuration of the one-dimensional self-organizing string.
struct SomConfig {
  enum class Init { Sample, Uniform };

  int units = 10;
  int epochs = 100;          // passes over the dataset
  double lr_start = 0.5;     // learning-rate schedule, linear
  double lr_end = 0.01;
  double radius_start = 5.0; // neighborhood radius schedule, linear
  double radius_end = 0.5;
  Init init = Init::Sample;
};

/// A trained string: `units` code vectors of dimension `dim`, in line order.
struct SomModel {
  int units = 0;
  int dim = 0;
  std::vector<std::vector<double>> code_vectors;
  SomConfig config;
  double final_quantization_error = 0.0;
};

/// Every person mapped to the unit whose code vector is nearest.
struct Assignment {
  std::vector<int> unit_of;      // aligned with Dataset person order
  std::vector<long> class_sizes; // per unit
};

/// Training derives two sub-streams from its seed with these tags: one for
/// codebook initialization, one for the per-epoch visit order.
inline constexpr std::uint64_t kSomInitSeedTag = 1;
inline constexpr std::uint64_t kSomOrderSeedTag = 2;

/// Neighborhood kernel: exp(-d^2 / (2 r^2)) with r floored at a small epsilon,
/// so h(0) == 1 and the kernel keeps shrinking as r drops toward zero.
double neighborhood_weight(int grid_distance, double radius);

/// Linear interpolation across `total_steps` updates; step==0 gives `start`,
/// the last step gives `end` exactly. A single step gives `start`.
double schedule_value(double start, double end, long long step, long long total_steps);

/// Index of the code vector nearest to `x` (squared Euclidean distance,
/// lowest index wins ties).
int best_matching_unit(const SomModel& model, const std::vector<std::uint8_t>& x);
int best_matching_unit(const SomModel& model, const std::vector<double>& x);

/// Initial codebook. `Sample` draws `units` distinct profiles uniformly
/// without replacement and fails when the dataset holds fewer distinct
/// profiles than units; `Uniform` draws every component from [0,1).
SomModel init_codebook(const Dataset& dataset, const SomConfig& config, std::uint64_t seed);

/// On-line training: `epochs` passes, each visiting every person once in a
/// freshly shuffled order, moving every unit toward the sample in proportion
/// to lr * neighborhood(distance to the winner).
SomModel train_som(const Dataset& dataset, const SomConfig& config, std::uint64_t seed);

Assignment assign_all(const SomModel& model, const Dataset& dataset);

/// Mean squared distance between each person and their winning code vector.
double quantization_error(const SomModel& model, const Dataset& dataset);

void write_model_csv(const std::string& path, const SomModel& model);
SomModel load_model_csv(const std::string& path);
void write_assignment_csv(const std::string& path, const Dataset& dataset,
                          const Assignment& assignment);
Assignment load_assignment_csv(const std::string& path, const Dataset& dataset,
                               int units);

}  // namespace chronomap
