#include "chronomap/superclassing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "chronomap/csv.hpp"

namespace chronomap {

namespace {

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

std::string group_label(int g) {
  std::string label(1, static_cast<char>('A' + g % 26));
  if (g >= 26) label += std::to_string(g / 26 + 1);
  return label;
}

/// Leaf -> group (0..k-1, numbered by smallest leaf) after the first
/// leaf_count - k merges.
std::vector<int> groups_at_k(const Dendrogram& dendrogram, int k) {
  const int leaves = dendrogram.leaf_count();
  if (k < 1 || k > leaves) {
    throw std::invalid_argument("superclass count " + std::to_string(k) +
                                " out of range [1, " + std::to_string(leaves) + "]");
  }
  std::vector<int> parent(static_cast<std::size_t>(leaves + leaves - 1));
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  for (int s = 0; s < leaves - k; ++s) {
    const MergeStep& step = dendrogram.steps[static_cast<std::size_t>(s)];
    parent[static_cast<std::size_t>(step.left)] = leaves + s;
    parent[static_cast<std::size_t>(step.right)] = leaves + s;
  }
  std::vector<int> group_of_leaf(static_cast<std::size_t>(leaves));
  std::unordered_map<int, int> group_of_root;
  for (int leaf = 0; leaf < leaves; ++leaf) {
    int node = leaf;
    while (parent[static_cast<std::size_t>(node)] != node) {
      node = parent[static_cast<std::size_t>(node)];
    }
    const auto it = group_of_root.find(node);
    if (it == group_of_root.end()) {
      const int g = static_cast<int>(group_of_root.size());
      group_of_root.emplace(node, g);
      group_of_leaf[static_cast<std::size_t>(leaf)] = g;
    } else {
      group_of_leaf[static_cast<std::size_t>(leaf)] = it->second;
    }
  }
  return group_of_leaf;
}

SuperclassPartition partition_from_groups(const Dendrogram& dendrogram, int k,
                                          const std::vector<int>& group_of_leaf) {
  SuperclassPartition out;
  out.k = k;
  out.group_of_unit.assign(static_cast<std::size_t>(dendrogram.total_units), -1);
  for (int leaf = 0; leaf < dendrogram.leaf_count(); ++leaf) {
    const int unit = dendrogram.leaf_units[static_cast<std::size_t>(leaf)];
    out.group_of_unit[static_cast<std::size_t>(unit)] =
        group_of_leaf[static_cast<std::size_t>(leaf)];
  }
  out.group_labels.reserve(static_cast<std::size_t>(k));
  for (int g = 0; g < k; ++g) out.group_labels.push_back(group_label(g));
  out.explained_variance = explained_variance(dendrogram, group_of_leaf);
  return out;
}

}  // namespace

Dendrogram ward_cluster_codebook(const SomModel& model, const Assignment& assignment) {
  if (static_cast<int>(assignment.class_sizes.size()) != model.units) {
    throw std::invalid_argument("assignment does not match model unit count");
  }
  Dendrogram out;
  out.total_units = model.units;
  for (int u = 0; u < model.units; ++u) {
    if (assignment.class_sizes[static_cast<std::size_t>(u)] > 0) {
      out.leaf_units.push_back(u);
      out.leaf_weights.push_back(
          static_cast<double>(assignment.class_sizes[static_cast<std::size_t>(u)]));
      out.leaf_centroids.push_back(model.code_vectors[static_cast<std::size_t>(u)]);
    }
  }
  const int leaves = out.leaf_count();
  if (leaves == 0) throw std::invalid_argument("every unit is empty, nothing to cluster");

  // Active clusters by position; id names them across the whole history.
  std::vector<int> id(static_cast<std::size_t>(leaves));
  std::vector<double> weight = out.leaf_weights;
  for (int i = 0; i < leaves; ++i) id[static_cast<std::size_t>(i)] = i;
  std::vector<std::vector<double>> dist(
      static_cast<std::size_t>(leaves), std::vector<double>(static_cast<std::size_t>(leaves), 0.0));
  for (int i = 0; i < leaves; ++i) {
    for (int j = i + 1; j < leaves; ++j) {
      const double wi = weight[static_cast<std::size_t>(i)];
      const double wj = weight[static_cast<std::size_t>(j)];
      const double d = wi * wj / (wi + wj) *
                       squared_distance(out.leaf_centroids[static_cast<std::size_t>(i)],
                                        out.leaf_centroids[static_cast<std::size_t>(j)]);
      dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = d;
      dist[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = d;
    }
  }

  for (int step = 0; step < leaves - 1; ++step) {
    const int n = static_cast<int>(id.size());
    int pi = -1, pj = -1;
    double best = 0.0;
    int best_left = 0, best_right = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double d = dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        const int left = std::min(id[static_cast<std::size_t>(i)], id[static_cast<std::size_t>(j)]);
        const int right = std::max(id[static_cast<std::size_t>(i)], id[static_cast<std::size_t>(j)]);
        const bool better =
            pi < 0 || d < best ||
            (d == best && (left < best_left || (left == best_left && right < best_right)));
        if (better) {
          best = d;
          best_left = left;
          best_right = right;
          pi = i;
          pj = j;
        }
      }
    }
    out.steps.push_back({best_left, best_right, best});

    const double wi = weight[static_cast<std::size_t>(pi)];
    const double wj = weight[static_cast<std::size_t>(pj)];
    const double dij = dist[static_cast<std::size_t>(pi)][static_cast<std::size_t>(pj)];
    for (int kpos = 0; kpos < n; ++kpos) {
      if (kpos == pi || kpos == pj) continue;
      const double wk = weight[static_cast<std::size_t>(kpos)];
      const double dik = dist[static_cast<std::size_t>(pi)][static_cast<std::size_t>(kpos)];
      const double djk = dist[static_cast<std::size_t>(pj)][static_cast<std::size_t>(kpos)];
      const double dmk = ((wi + wk) * dik + (wj + wk) * djk - wk * dij) / (wi + wj + wk);
      dist[static_cast<std::size_t>(pi)][static_cast<std::size_t>(kpos)] = dmk;
      dist[static_cast<std::size_t>(kpos)][static_cast<std::size_t>(pi)] = dmk;
    }
    id[static_cast<std::size_t>(pi)] = leaves + step;
    weight[static_cast<std::size_t>(pi)] = wi + wj;
    id.erase(id.begin() + pj);
    weight.erase(weight.begin() + pj);
    dist.erase(dist.begin() + pj);
    for (auto& row : dist) row.erase(row.begin() + pj);
  }
  return out;
}

double explained_variance(const Dendrogram& dendrogram, const std::vector<int>& group_of_leaf) {
  const int leaves = dendrogram.leaf_count();
  if (static_cast<int>(group_of_leaf.size()) != leaves) {
    throw std::invalid_argument("group assignment does not match leaf count");
  }
  if (leaves == 0) return 1.0;
  const std::size_t dim = dendrogram.leaf_centroids[0].size();

  std::vector<double> gmean(dim, 0.0);
  double total_weight = 0.0;
  for (int l = 0; l < leaves; ++l) {
    const double w = dendrogram.leaf_weights[static_cast<std::size_t>(l)];
    total_weight += w;
    const auto& c = dendrogram.leaf_centroids[static_cast<std::size_t>(l)];
    for (std::size_t i = 0; i < dim; ++i) gmean[i] += w * c[i];
  }
  for (std::size_t i = 0; i < dim; ++i) gmean[i] /= total_weight;

  double total_inertia = 0.0;
  for (int l = 0; l < leaves; ++l) {
    total_inertia += dendrogram.leaf_weights[static_cast<std::size_t>(l)] *
                     squared_distance(dendrogram.leaf_centroids[static_cast<std::size_t>(l)], gmean);
  }
  if (total_inertia == 0.0) return 1.0;

  std::unordered_map<int, std::vector<int>> members;
  for (int l = 0; l < leaves; ++l) members[group_of_leaf[static_cast<std::size_t>(l)]].push_back(l);

  double between = 0.0;
  for (const auto& [g, leaf_list] : members) {
    double gw = 0.0;
    std::vector<double> mean(dim, 0.0);
    if (leaf_list.size() == 1) {
      // A one-leaf group sits exactly on its centroid; copying instead of
      // summing keeps the singleton cut's ratio at 1 to the last bit.
      const int l = leaf_list[0];
      gw = dendrogram.leaf_weights[static_cast<std::size_t>(l)];
      mean = dendrogram.leaf_centroids[static_cast<std::size_t>(l)];
    } else {
      for (int l : leaf_list) {
        const double w = dendrogram.leaf_weights[static_cast<std::size_t>(l)];
        gw += w;
        const auto& c = dendrogram.leaf_centroids[static_cast<std::size_t>(l)];
        for (std::size_t i = 0; i < dim; ++i) mean[i] += w * c[i];
      }
      for (std::size_t i = 0; i < dim; ++i) mean[i] /= gw;
    }
    between += gw * squared_distance(mean, gmean);
  }
  return between / total_inertia;
}

double explained_variance_individuals(const Dataset& dataset, const Assignment& assignment,
                                      const SuperclassPartition& partition) {
  const std::size_t n = dataset.size();
  if (assignment.unit_of.size() != n) {
    throw std::invalid_argument("assignment does not match dataset");
  }
  if (n == 0) return 1.0;
  const std::size_t dim = dataset.profiles[0].slots.size();

  std::vector<double> gmean(dim, 0.0);
  for (const WeeklyProfile& p : dataset.profiles) {
    for (std::size_t i = 0; i < dim; ++i) gmean[i] += static_cast<double>(p.slots[i]);
  }
  for (std::size_t i = 0; i < dim; ++i) gmean[i] /= static_cast<double>(n);

  double total_inertia = 0.0;
  for (const WeeklyProfile& p : dataset.profiles) {
    for (std::size_t i = 0; i < dim; ++i) {
      const double d = static_cast<double>(p.slots[i]) - gmean[i];
      total_inertia += d * d;
    }
  }
  if (total_inertia == 0.0) return 1.0;

  std::vector<double> counts(static_cast<std::size_t>(partition.k), 0.0);
  std::vector<std::vector<double>> means(static_cast<std::size_t>(partition.k),
                                         std::vector<double>(dim, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    const int g = partition.group_of_unit.at(static_cast<std::size_t>(assignment.unit_of[i]));
    if (g < 0) throw std::invalid_argument("person assigned to a unit outside the partition");
    counts[static_cast<std::size_t>(g)] += 1.0;
    const auto& slots = dataset.profiles[i].slots;
    for (std::size_t d = 0; d < dim; ++d) {
      means[static_cast<std::size_t>(g)][d] += static_cast<double>(slots[d]);
    }
  }
  double between = 0.0;
  for (int g = 0; g < partition.k; ++g) {
    if (counts[static_cast<std::size_t>(g)] == 0.0) continue;
    auto& mean = means[static_cast<std::size_t>(g)];
    for (std::size_t d = 0; d < dim; ++d) mean[d] /= counts[static_cast<std::size_t>(g)];
    between += counts[static_cast<std::size_t>(g)] * squared_distance(mean, gmean);
  }
  return between / total_inertia;
}

SuperclassPartition cut_to_k(const Dendrogram& dendrogram, int k) {
  return partition_from_groups(dendrogram, k, groups_at_k(dendrogram, k));
}

SuperclassPartition cut_to_variance(const Dendrogram& dendrogram, double threshold) {
  const int leaves = dendrogram.leaf_count();
  for (int k = 1; k < leaves; ++k) {
    const auto groups = groups_at_k(dendrogram, k);
    if (explained_variance(dendrogram, groups) >= threshold) {
      return partition_from_groups(dendrogram, k, groups);
    }
  }
  return cut_to_k(dendrogram, leaves);
}

std::vector<double> variance_by_k(const Dendrogram& dendrogram) {
  const int leaves = dendrogram.leaf_count();
  std::vector<double> out(static_cast<std::size_t>(leaves) + 1, 0.0);
  for (int k = 1; k <= leaves; ++k) {
    out[static_cast<std::size_t>(k)] = explained_variance(dendrogram, groups_at_k(dendrogram, k));
  }
  return out;
}

ContiguityResult contiguity_check(const SuperclassPartition& partition) {
  ContiguityResult out;
  std::vector<bool> seen;
  int prev = -1;
  bool first = true;
  for (std::size_t u = 0; u < partition.group_of_unit.size(); ++u) {
    const int g = partition.group_of_unit[u];
    if (g < 0) continue;
    if (static_cast<std::size_t>(g) >= seen.size()) seen.resize(static_cast<std::size_t>(g) + 1, false);
    if (first || g != prev) {
      if (seen[static_cast<std::size_t>(g)]) out.break_units.push_back(static_cast<int>(u));
      seen[static_cast<std::size_t>(g)] = true;
    }
    prev = g;
    first = false;
  }
  out.contiguous = out.break_units.empty();
  return out;
}

void write_dendrogram_csv(const std::string& path, const Dendrogram& dendrogram) {
  std::vector<csv::Row> rows;
  rows.push_back({"step", "left", "right", "cost"});
  for (std::size_t s = 0; s < dendrogram.steps.size(); ++s) {
    const MergeStep& step = dendrogram.steps[s];
    rows.push_back({std::to_string(s), std::to_string(step.left), std::to_string(step.right),
                    csv::format_double(step.cost)});
  }
  csv::write_file(path, rows);
}

void write_partition_csv(const std::string& path, const SuperclassPartition& partition) {
  std::vector<csv::Row> rows;
  rows.push_back({"unit", "superclass"});
  for (std::size_t u = 0; u < partition.group_of_unit.size(); ++u) {
    rows.push_back({std::to_string(u), std::to_string(partition.group_of_unit[u])});
  }
  csv::write_file(path, rows);
}

SuperclassPartition load_partition_csv(const std::string& path) {
  const auto rows = csv::read_file(path);
  if (rows.empty() || rows[0] != csv::Row{"unit", "superclass"}) {
    throw std::runtime_error(path + ": bad partition file, expected unit,superclass");
  }
  SuperclassPartition out;
  out.group_of_unit.assign(rows.size() - 1, -1);
  int max_group = -1;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != 2) {
      throw std::runtime_error(path + ":" + std::to_string(r + 1) + ": expected 2 columns");
    }
    const int unit = std::stoi(rows[r][0]);
    const int g = std::stoi(rows[r][1]);
    if (unit != static_cast<int>(r) - 1) {
      throw std::runtime_error(path + ":" + std::to_string(r + 1) + ": units must be 0,1,2,...");
    }
    if (g < -1) throw std::runtime_error(path + ":" + std::to_string(r + 1) + ": bad superclass");
    out.group_of_unit[r - 1] = g;
    max_group = std::max(max_group, g);
  }
  if (max_group < 0) throw std::runtime_error(path + ": no unit belongs to any superclass");
  out.k = max_group + 1;
  for (int g = 0; g < out.k; ++g) out.group_labels.push_back(group_label(g));
  out.explained_variance = 0.0;  // not stored in this file
  return out;
}

void write_variance_csv(const std::string& path, const std::vector<double>& variance_by_k) {
  std::vector<csv::Row> rows;
  rows.push_back({"k", "explained_variance"});
  for (std::size_t k = 1; k < variance_by_k.size(); ++k) {
    rows.push_back({std::to_string(k), csv::format_double(variance_by_k[k])});
  }
  csv::write_file(path, rows);
}

}  // namespace chronomap
