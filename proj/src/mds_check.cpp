#include "chronomap/mds_check.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "chronomap/csv.hpp"

namespace chronomap {

namespace {

double frobenius_norm(const std::vector<double>& m) {
  double s = 0.0;
  for (double v : m) s += v * v;
  return std::sqrt(s);
}

double off_diagonal_norm(const std::vector<double>& a, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) s += a[static_cast<std::size_t>(i) * n + j] * a[static_cast<std::size_t>(i) * n + j];
    }
  }
  return std::sqrt(s);
}

double orientation(double ax, double ay, double bx, double by, double cx, double cy) {
  return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
}

bool proper_crossing(double ax, double ay, double bx, double by, double cx, double cy,
                     double dx, double dy) {
  const double o1 = orientation(ax, ay, bx, by, cx, cy);
  const double o2 = orientation(ax, ay, bx, by, dx, dy);
  const double o3 = orientation(cx, cy, dx, dy, ax, ay);
  const double o4 = orientation(cx, cy, dx, dy, bx, by);
  return ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0)) &&
         ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0));
}

std::vector<double> average_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

DistanceMatrix pairwise_distances(const std::vector<std::vector<double>>& points) {
  DistanceMatrix out;
  out.n = static_cast<int>(points.size());
  out.d.assign(static_cast<std::size_t>(out.n) * out.n, 0.0);
  for (int i = 0; i < out.n; ++i) {
    for (int j = i + 1; j < out.n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < points[static_cast<std::size_t>(i)].size(); ++k) {
        const double d = points[static_cast<std::size_t>(i)][k] - points[static_cast<std::size_t>(j)][k];
        s += d * d;
      }
      const double dist = std::sqrt(s);
      out.at(i, j) = dist;
      out.at(j, i) = dist;
    }
  }
  return out;
}

void symmetric_eigen(const std::vector<double>& matrix, int n, std::vector<double>& eigenvalues,
                     std::vector<double>& eigenvectors) {
  if (static_cast<std::size_t>(n) * n != matrix.size()) {
    throw std::invalid_argument("matrix size does not match n");
  }
  std::vector<double> a = matrix;
  std::vector<double> v(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i) * n + i] = 1.0;

  const double scale = std::max(frobenius_norm(matrix), 1e-300);
  const double target = 1e-12 * scale;
  for (int sweep = 0; sweep < 100 && off_diagonal_norm(a, n) > target; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a[static_cast<std::size_t>(p) * n + q];
        if (std::abs(apq) <= 1e-300) continue;
        const double app = a[static_cast<std::size_t>(p) * n + p];
        const double aqq = a[static_cast<std::size_t>(q) * n + q];
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0) ? 1.0 / (theta + std::sqrt(theta * theta + 1.0))
                                        : 1.0 / (theta - std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a[static_cast<std::size_t>(k) * n + p];
          const double akq = a[static_cast<std::size_t>(k) * n + q];
          a[static_cast<std::size_t>(k) * n + p] = c * akp - s * akq;
          a[static_cast<std::size_t>(p) * n + k] = a[static_cast<std::size_t>(k) * n + p];
          a[static_cast<std::size_t>(k) * n + q] = s * akp + c * akq;
          a[static_cast<std::size_t>(q) * n + k] = a[static_cast<std::size_t>(k) * n + q];
        }
        a[static_cast<std::size_t>(p) * n + p] = app - t * apq;
        a[static_cast<std::size_t>(q) * n + q] = aqq + t * apq;
        a[static_cast<std::size_t>(p) * n + q] = 0.0;
        a[static_cast<std::size_t>(q) * n + p] = 0.0;
        for (int k = 0; k < n; ++k) {
          const double vkp = v[static_cast<std::size_t>(k) * n + p];
          const double vkq = v[static_cast<std::size_t>(k) * n + q];
          v[static_cast<std::size_t>(k) * n + p] = c * vkp - s * vkq;
          v[static_cast<std::size_t>(k) * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return a[static_cast<std::size_t>(x) * n + x] > a[static_cast<std::size_t>(y) * n + y];
  });

  eigenvalues.assign(static_cast<std::size_t>(n), 0.0);
  eigenvectors.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int j = 0; j < n; ++j) {
    const int src = order[static_cast<std::size_t>(j)];
    eigenvalues[static_cast<std::size_t>(j)] = a[static_cast<std::size_t>(src) * n + src];
    // Fix the sign: the largest-magnitude component comes out positive.
    int big = 0;
    double big_abs = -1.0;
    for (int i = 0; i < n; ++i) {
      const double av = std::abs(v[static_cast<std::size_t>(i) * n + src]);
      if (av > big_abs) {
        big_abs = av;
        big = i;
      }
    }
    const double sign = v[static_cast<std::size_t>(big) * n + src] < 0.0 ? -1.0 : 1.0;
    for (int i = 0; i < n; ++i) {
      eigenvectors[static_cast<std::size_t>(j) * n + i] =
          sign * v[static_cast<std::size_t>(i) * n + src];
    }
  }
}

MdsEmbedding classical_mds(const DistanceMatrix& distances, int dims) {
  const int n = distances.n;
  if (dims < 1 || dims > 2) throw std::invalid_argument("mds: dims must be 1 or 2");
  if (n < dims + 1) {
    throw std::invalid_argument("mds: need at least " + std::to_string(dims + 1) + " points");
  }
  if (static_cast<std::size_t>(n) * n != distances.d.size()) {
    throw std::invalid_argument("mds: matrix size does not match n");
  }
  for (int i = 0; i < n; ++i) {
    if (distances.at(i, i) != 0.0) throw std::invalid_argument("mds: nonzero diagonal");
    for (int j = i + 1; j < n; ++j) {
      if (distances.at(i, j) != distances.at(j, i)) {
        throw std::invalid_argument("mds: distance matrix is not symmetric");
      }
      if (distances.at(i, j) < 0.0) throw std::invalid_argument("mds: negative distance");
    }
  }

  // Double-center the squared distances: b_ij = -1/2 (d2_ij - r_i - r_j + g).
  std::vector<double> d2(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<double> row_mean(static_cast<std::size_t>(n), 0.0);
  double grand = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double d = distances.at(i, j);
      d2[static_cast<std::size_t>(i) * n + j] = d * d;
      row_mean[static_cast<std::size_t>(i)] += d * d;
    }
    row_mean[static_cast<std::size_t>(i)] /= static_cast<double>(n);
    grand += row_mean[static_cast<std::size_t>(i)];
  }
  grand /= static_cast<double>(n);
  std::vector<double> b(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      b[static_cast<std::size_t>(i) * n + j] =
          -0.5 * (d2[static_cast<std::size_t>(i) * n + j] - row_mean[static_cast<std::size_t>(i)] -
                  row_mean[static_cast<std::size_t>(j)] + grand);
    }
  }

  std::vector<double> eigenvalues;
  std::vector<double> eigenvectors;
  symmetric_eigen(b, n, eigenvalues, eigenvectors);

  MdsEmbedding out;
  out.dims = dims;
  out.eigenvalues.assign(eigenvalues.begin(), eigenvalues.begin() + dims);
  out.coords.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(dims), 0.0));
  for (int axis = 0; axis < dims; ++axis) {
    const double lambda = eigenvalues[static_cast<std::size_t>(axis)];
    if (lambda <= 0.0) {
      if (lambda < 0.0) out.clamped_axes.push_back(axis);
      continue;  // coordinates stay zero on this axis
    }
    const double root = std::sqrt(lambda);
    for (int i = 0; i < n; ++i) {
      out.coords[static_cast<std::size_t>(i)][static_cast<std::size_t>(axis)] =
          root * eigenvectors[static_cast<std::size_t>(axis) * n + i];
    }
    // Orient the axis: the first point never exceeds the last.
    if (out.coords[0][static_cast<std::size_t>(axis)] >
        out.coords[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(axis)]) {
      for (int i = 0; i < n; ++i) {
        out.coords[static_cast<std::size_t>(i)][static_cast<std::size_t>(axis)] *= -1.0;
      }
    }
  }
  return out;
}

int crossing_count(const std::vector<std::vector<double>>& coords, const std::vector<int>& order) {
  if (order.size() != coords.size()) throw std::invalid_argument("order/point count mismatch");
  {
    std::vector<bool> seen(coords.size(), false);
    for (int i : order) {
      if (i < 0 || static_cast<std::size_t>(i) >= coords.size() || seen[static_cast<std::size_t>(i)]) {
        throw std::invalid_argument("order is not a permutation of the points");
      }
      seen[static_cast<std::size_t>(i)] = true;
    }
  }
  const int n = static_cast<int>(order.size());
  if (n < 4) return 0;
  auto x = [&](int i) { return coords[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])][0]; };
  auto y = [&](int i) {
    const auto& c = coords[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
    return c.size() > 1 ? c[1] : 0.0;
  };
  int crossings = 0;
  for (int i = 0; i + 1 < n; ++i) {
    for (int j = i + 2; j + 1 < n; ++j) {
      if (proper_crossing(x(i), y(i), x(i + 1), y(i + 1), x(j), y(j), x(j + 1), y(j + 1))) {
        ++crossings;
      }
    }
  }
  return crossings;
}

int crossing_count(const std::vector<std::vector<double>>& coords) {
  std::vector<int> order(coords.size());
  std::iota(order.begin(), order.end(), 0);
  return crossing_count(coords, order);
}

MonotoneResult ordering_monotone(const MdsEmbedding& embedding, const std::vector<int>& order) {
  const std::size_t n = order.size();
  if (n != embedding.coords.size()) throw std::invalid_argument("order/point count mismatch");
  MonotoneResult out;
  if (n < 2) {
    out.spearman = 1.0;
    out.monotone = true;
    return out;
  }
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = embedding.coords[static_cast<std::size_t>(order[i])][0];
  }
  bool increasing = true, decreasing = true;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(xs[i] < xs[i + 1])) increasing = false;
    if (!(xs[i] > xs[i + 1])) decreasing = false;
  }
  const std::vector<double> rx = average_ranks(xs);

  bool ties = false;
  {
    std::vector<double> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (sorted[i] == sorted[i + 1]) ties = true;
    }
  }

  if (!ties) {
    double sum_d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = rx[i] - (static_cast<double>(i) + 1.0);
      sum_d2 += d * d;
    }
    const double nn = static_cast<double>(n);
    out.spearman = 1.0 - 6.0 * sum_d2 / (nn * (nn * nn - 1.0));
  } else {
    // Pearson correlation between the tied ranks and 1..n.
    const double nn = static_cast<double>(n);
    double mean_x = 0.0;
    for (double r : rx) mean_x += r;
    mean_x /= nn;
    const double mean_i = (nn + 1.0) / 2.0;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dx = rx[i] - mean_x;
      const double di = static_cast<double>(i) + 1.0 - mean_i;
      sxy += dx * di;
      sxx += dx * dx;
      syy += di * di;
    }
    out.spearman = (sxx == 0.0) ? 0.0 : sxy / std::sqrt(sxx * syy);
  }
  out.monotone = increasing || decreasing;
  return out;
}

MonotoneResult ordering_monotone(const MdsEmbedding& embedding) {
  std::vector<int> order(embedding.coords.size());
  std::iota(order.begin(), order.end(), 0);
  return ordering_monotone(embedding, order);
}

void write_embedding_csv(const std::string& path, const MdsEmbedding& embedding) {
  std::vector<csv::Row> rows;
  csv::Row header;
  header.push_back("unit");
  const char* names[] = {"x", "y", "z"};
  for (int a = 0; a < embedding.dims; ++a) {
    header.push_back(a < 3 ? names[a] : "c" + std::to_string(a));
  }
  rows.push_back(std::move(header));
  for (std::size_t i = 0; i < embedding.coords.size(); ++i) {
    csv::Row row;
    row.push_back(std::to_string(i));
    for (double c : embedding.coords[i]) row.push_back(csv::format_double(c));
    rows.push_back(std::move(row));
  }
  csv::write_file(path, rows);
}

MdsEmbedding load_embedding_csv(const std::string& path) {
  const auto rows = csv::read_file(path);
  if (rows.size() < 2 || rows[0].size() < 2 || rows[0][0] != "unit") {
    throw std::runtime_error(path + ": bad embedding file");
  }
  MdsEmbedding out;
  out.dims = static_cast<int>(rows[0].size()) - 1;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != rows[0].size()) {
      throw std::runtime_error(path + ":" + std::to_string(r + 1) + ": ragged row");
    }
    std::vector<double> coord;
    for (std::size_t c = 1; c < rows[r].size(); ++c) coord.push_back(std::stod(rows[r][c]));
    out.coords.push_back(std::move(coord));
  }
  return out;
}

}  // namespace chronomap
