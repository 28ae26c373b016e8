#pragma once

#include <string>
#include <vector>

#include "chronomap/som_string.hpp"

namespace chronomap {

/// One agglomeration. `left` and `right` are cluster ids: ids below the leaf
/// count name leaves, id leaf_count + i names the cluster created by step i.
/// `cost` is the within-inertia increase caused by the merge.
struct MergeStep {
  int left = 0;
  int right = 0;
  double cost = 0.0;
};

/// Full merge history over the non-empty units of a string.
struct Dendrogram {
  int total_units = 0;              // units in the model, including empty ones
  std::vector<int> leaf_units;      // model unit per leaf, ascending
  std::vector<double> leaf_weights; // class size per leaf
  std::vector<std::vector<double>> leaf_centroids;
  std::vector<MergeStep> steps;     // leaf_count - 1 entries

  int leaf_count() const { return static_cast<int>(leaf_units.size()); }
};

/// A cut of the dendrogram into k groups, labeled 0..k-1 in string order
/// (by smallest member unit). Units that held no one get group -1.
struct SuperclassPartition {
  int k = 0;
  std::vector<int> group_of_unit;       // per model unit, -1 for empty units
  std::vector<std::string> group_labels; // "A", "B", ... per group
  double explained_variance = 0.0;       // code-vector based, weighted
};

struct ContiguityResult {
  bool contiguous = false;
  std::vector<int> break_units; // units whose left neighbor is in another group
};

/// Ward clustering of the string's code vectors, with class sizes as weights.
/// Merge cost of two clusters is w_i*w_j/(w_i+w_j) * ||c_i - c_j||^2; the
/// cheapest pair merges first, ties broken by the smallest (left, right) id
/// pair. Units with class size zero are excluded from the tree.
Dendrogram ward_cluster_codebook(const SomModel& model, const Assignment& assignment);

/// Explained variance of grouping the leaves into `group_of_leaf` classes:
/// between-group inertia over total inertia of the weighted leaf centroids
/// about their weighted mean. An inertia-free system (total == 0) counts as
/// fully explained.
double explained_variance(const Dendrogram& dendrogram, const std::vector<int>& group_of_leaf);

/// Same ratio, computed over individual profiles instead of code vectors.
double explained_variance_individuals(const Dataset& dataset, const Assignment& assignment,
                                      const SuperclassPartition& partition);

/// Cut the merge history to `k` groups.
SuperclassPartition cut_to_k(const Dendrogram& dendrogram, int k);

/// Smallest k whose explained variance reaches `threshold`.
SuperclassPartition cut_to_variance(const Dendrogram& dendrogram, double threshold);

/// Explained variance for every k from 1 to leaf_count, index-aligned (entry
/// 0 unused and set to 0).
std::vector<double> variance_by_k(const Dendrogram& dendrogram);

/// Whether every group occupies a contiguous run of the string. Empty units
/// are skipped, not breaks.
ContiguityResult contiguity_check(const SuperclassPartition& partition);

void write_dendrogram_csv(const std::string& path, const Dendrogram& dendrogram);
void write_partition_csv(const std::string& path, const SuperclassPartition& partition);
SuperclassPartition load_partition_csv(const std::string& path);
void write_variance_csv(const std::string& path, const std::vector<double>& variance_by_k);

}  // namespace chronomap
