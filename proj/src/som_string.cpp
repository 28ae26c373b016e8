#include "chronomap/som_string.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "chronomap/csv.hpp"
#include "chronomap/rng.hpp"

namespace chronomap {

namespace {

void check_config(const SomConfig& config) {
  if (config.units < 2) throw std::invalid_argument("som: need at least 2 units");
  if (config.epochs < 1) throw std::invalid_argument("som: need at least 1 epoch");
  if (config.lr_start <= 0.0 || config.lr_start > 1.0 || config.lr_end <= 0.0 ||
      config.lr_end > config.lr_start) {
    throw std::invalid_argument("som: learning rate must satisfy 0 < end <= start <= 1");
  }
  if (config.radius_start < config.radius_end || config.radius_end < 0.0) {
    throw std::invalid_argument("som: radius must satisfy start >= end >= 0");
  }
}

template <class Vec>
double squared_distance(const std::vector<double>& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - static_cast<double>(b[i]);
    s += d * d;
  }
  return s;
}

template <class Vec>
int find_bmu(const SomModel& model, const Vec& x) {
  if (model.code_vectors.empty()) throw std::invalid_argument("som: empty model");
  int best = 0;
  double best_d = squared_distance(model.code_vectors[0], x);
  for (int u = 1; u < model.units; ++u) {
    const double d = squared_distance(model.code_vectors[static_cast<std::size_t>(u)], x);
    if (d < best_d) {
      best_d = d;
      best = u;
    }
  }
  return best;
}

}  // namespace

double neighborhood_weight(int grid_distance, double radius) {
  const double r = std::max(radius, 1e-9);
  const double d = static_cast<double>(grid_distance);
  return std::exp(-(d * d) / (2.0 * r * r));
}

double schedule_value(double start, double end, long long step, long long total_steps) {
  if (total_steps <= 1) return start;
  const double t = static_cast<double>(step) / static_cast<double>(total_steps - 1);
  return start + (end - start) * t;
}

int best_matching_unit(const SomModel& model, const std::vector<std::uint8_t>& x) {
  return find_bmu(model, x);
}

int best_matching_unit(const SomModel& model, const std::vector<double>& x) {
  return find_bmu(model, x);
}

SomModel init_codebook(const Dataset& dataset, const SomConfig& config, std::uint64_t seed) {
  check_config(config);
  if (dataset.profiles.empty()) throw std::invalid_argument("som: empty dataset");
  SomModel model;
  model.units = config.units;
  model.dim = static_cast<int>(dataset.profiles[0].slots.size());
  model.config = config;
  model.code_vectors.assign(static_cast<std::size_t>(config.units),
                            std::vector<double>(static_cast<std::size_t>(model.dim), 0.0));
  Rng rng(seed);
  if (config.init == SomConfig::Init::Uniform) {
    for (auto& cv : model.code_vectors) {
      for (double& v : cv) v = rng.next_unit();
    }
    return model;
  }
  // Sample mode: uniform draw over the distinct profiles, no replacement.
  std::vector<std::vector<std::uint8_t>> distinct;
  {
    std::set<std::vector<std::uint8_t>> seen;
    for (const WeeklyProfile& p : dataset.profiles) {
      if (seen.insert(p.slots).second) distinct.push_back(p.slots);
    }
  }
  if (distinct.size() < static_cast<std::size_t>(config.units)) {
    throw std::invalid_argument("som: only " + std::to_string(distinct.size()) +
                                " distinct profiles for " + std::to_string(config.units) +
                                " units");
  }
  for (std::size_t u = 0; u < static_cast<std::size_t>(config.units); ++u) {
    const std::size_t pick = u + rng.next_index(distinct.size() - u);
    std::swap(distinct[u], distinct[pick]);
    for (std::size_t i = 0; i < distinct[u].size(); ++i) {
      model.code_vectors[u][i] = static_cast<double>(distinct[u][i]);
    }
  }
  return model;
}

SomModel train_som(const Dataset& dataset, const SomConfig& config, std::uint64_t seed) {
  check_config(config);
  SomModel model = init_codebook(dataset, config, mix_seed(seed, kSomInitSeedTag));
  Rng order_rng(mix_seed(seed, kSomOrderSeedTag));

  const std::size_t n = dataset.profiles.size();
  const long long total_steps =
      static_cast<long long>(config.epochs) * static_cast<long long>(n);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;

  long long step = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    order_rng.shuffle(order);
    for (std::size_t pos = 0; pos < n; ++pos, ++step) {
      const double lr = schedule_value(config.lr_start, config.lr_end, step, total_steps);
      const double radius =
          schedule_value(config.radius_start, config.radius_end, step, total_steps);
      const auto& x = dataset.profiles[order[pos]].slots;
      const int winner = find_bmu(model, x);
      for (int u = 0; u < model.units; ++u) {
        const double h = neighborhood_weight(std::abs(u - winner), radius);
        const double a = lr * h;
        if (a <= 0.0) continue;
        auto& cv = model.code_vectors[static_cast<std::size_t>(u)];
        for (std::size_t i = 0; i < cv.size(); ++i) {
          cv[i] += a * (static_cast<double>(x[i]) - cv[i]);
        }
      }
    }
  }
  model.final_quantization_error = quantization_error(model, dataset);
  return model;
}

Assignment assign_all(const SomModel& model, const Dataset& dataset) {
  Assignment out;
  out.unit_of.reserve(dataset.profiles.size());
  out.class_sizes.assign(static_cast<std::size_t>(model.units), 0);
  for (const WeeklyProfile& p : dataset.profiles) {
    const int u = find_bmu(model, p.slots);
    out.unit_of.push_back(u);
    ++out.class_sizes[static_cast<std::size_t>(u)];
  }
  return out;
}

double quantization_error(const SomModel& model, const Dataset& dataset) {
  if (dataset.profiles.empty()) return 0.0;
  double total = 0.0;
  for (const WeeklyProfile& p : dataset.profiles) {
    const int u = find_bmu(model, p.slots);
    total += squared_distance(model.code_vectors[static_cast<std::size_t>(u)], p.slots);
  }
  return total / static_cast<double>(dataset.profiles.size());
}

void write_model_csv(const std::string& path, const SomModel& model) {
  std::vector<csv::Row> rows;
  rows.reserve(static_cast<std::size_t>(model.units) + 1);
  csv::Row header;
  header.push_back("unit");
  for (int i = 0; i < model.dim; ++i) header.push_back("c" + std::to_string(i));
  rows.push_back(std::move(header));
  for (int u = 0; u < model.units; ++u) {
    csv::Row row;
    row.push_back(std::to_string(u));
    for (double v : model.code_vectors[static_cast<std::size_t>(u)]) {
      row.push_back(csv::format_double(v));
    }
    rows.push_back(std::move(row));
  }
  csv::write_file(path, rows);
}

SomModel load_model_csv(const std::string& path) {
  const auto rows = csv::read_file(path);
  if (rows.size() < 2 || rows[0].size() < 2 || rows[0][0] != "unit") {
    throw std::runtime_error(path + ": bad model file, expected unit,c0,... header");
  }
  SomModel model;
  model.units = static_cast<int>(rows.size()) - 1;
  model.dim = static_cast<int>(rows[0].size()) - 1;
  model.code_vectors.reserve(static_cast<std::size_t>(model.units));
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != rows[0].size()) {
      throw std::runtime_error(path + ":" + std::to_string(r + 1) + ": ragged row");
    }
    std::vector<double> cv;
    cv.reserve(static_cast<std::size_t>(model.dim));
    for (std::size_t c = 1; c < rows[r].size(); ++c) {
      cv.push_back(std::stod(rows[r][c]));
    }
    model.code_vectors.push_back(std::move(cv));
  }
  return model;
}

void write_assignment_csv(const std::string& path, const Dataset& dataset,
                          const Assignment& assignment) {
  if (assignment.unit_of.size() != dataset.size()) {
    throw std::invalid_argument("assignment/person count mismatch");
  }
  std::vector<csv::Row> rows;
  rows.reserve(dataset.size() + 1);
  rows.push_back({"person_id", "unit"});
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    rows.push_back({dataset.profiles[i].person_id, std::to_string(assignment.unit_of[i])});
  }
  csv::write_file(path, rows);
}

Assignment load_assignment_csv(const std::string& path, const Dataset& dataset, int units) {
  const auto rows = csv::read_file(path);
  if (rows.empty() || rows[0] != csv::Row{"person_id", "unit"}) {
    throw std::runtime_error(path + ": bad assignment file, expected person_id,unit");
  }
  std::unordered_map<std::string, int> unit_of_id;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != 2) {
      throw std::runtime_error(path + ":" + std::to_string(r + 1) + ": expected 2 columns");
    }
    const int u = std::stoi(rows[r][1]);
    if (u < 0 || u >= units) {
      throw std::runtime_error(path + ":" + std::to_string(r + 1) + ": unit " +
                               rows[r][1] + " out of range");
    }
    if (!unit_of_id.emplace(rows[r][0], u).second) {
      throw std::runtime_error(path + ":" + std::to_string(r + 1) +
                               ": duplicate person_id \"" + rows[r][0] + "\"");
    }
  }
  Assignment out;
  out.unit_of.reserve(dataset.size());
  out.class_sizes.assign(static_cast<std::size_t>(units), 0);
  for (const WeeklyProfile& p : dataset.profiles) {
    const auto it = unit_of_id.find(p.person_id);
    if (it == unit_of_id.end()) {
      throw std::runtime_error(path + ": no unit for person \"" + p.person_id + "\"");
    }
    out.unit_of.push_back(it->second);
    ++out.class_sizes[static_cast<std::size_t>(it->second)];
  }
  return out;
}

}  // namespace chronomap
