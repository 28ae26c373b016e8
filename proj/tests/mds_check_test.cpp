#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"

#include "chronomap/csv.hpp"
#include "chronomap/mds_check.hpp"
#include "chronomap/rng.hpp"

using namespace chronomap;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

DistanceMatrix distances_of(const std::vector<std::vector<double>>& points) {
  return pairwise_distances(points);
}

MdsEmbedding embedding_of(std::vector<std::vector<double>> coords) {
  MdsEmbedding e;
  e.dims = static_cast<int>(coords[0].size());
  e.coords = std::move(coords);
  return e;
}

void check_reconstruction(const DistanceMatrix& distances, const MdsEmbedding& embedding,
                          double rel) {
  const DistanceMatrix rebuilt = pairwise_distances(embedding.coords);
  for (int i = 0; i < distances.n; ++i) {
    for (int j = 0; j < distances.n; ++j) {
      CAPTURE(i);
      CAPTURE(j);
      CHECK(rebuilt.at(i, j) == doctest::Approx(distances.at(i, j)).epsilon(rel));
    }
  }
}

}  // namespace

TEST_CASE("symmetric eigen solves small matrices by hand") {
  std::vector<double> evals;
  std::vector<double> evecs;
  symmetric_eigen({2, 1, 1, 2}, 2, evals, evecs);
  CHECK(evals[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(evals[1] == doctest::Approx(1.0).epsilon(1e-12));
  const double s = 1.0 / std::sqrt(2.0);
  // Column 0 pairs with eigenvalue 3: (1,1)/sqrt(2) up to sign.
  CHECK(std::abs(evecs[0]) == doctest::Approx(s).epsilon(1e-12));
  CHECK(evecs[0] == doctest::Approx(evecs[1]).epsilon(1e-12));

  symmetric_eigen({5, 0, 0, 3}, 2, evals, evecs);
  CHECK(evals == std::vector<double>{5.0, 3.0});
}

TEST_CASE("symmetric eigen reconstructs random matrices with orthonormal columns") {
  Rng rng(55);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + static_cast<int>(rng.next_index(4));
    std::vector<double> m(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        const double v = rng.next_unit() * 2.0 - 1.0;
        m[static_cast<std::size_t>(i) * n + j] = v;
        m[static_cast<std::size_t>(j) * n + i] = v;
      }
    }
    std::vector<double> evals;
    std::vector<double> evecs;
    symmetric_eigen(m, n, evals, evecs);
    for (int k = 1; k < n; ++k) CHECK(evals[static_cast<std::size_t>(k - 1)] >= evals[static_cast<std::size_t>(k)]);
    // V^T V = I.
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        double dot = 0.0;
        for (int i = 0; i < n; ++i) {
          dot += evecs[static_cast<std::size_t>(a) * n + i] * evecs[static_cast<std::size_t>(b) * n + i];
        }
        CHECK(dot == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-10));
      }
    }
    // V diag(evals) V^T = M.
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double v = 0.0;
        for (int k = 0; k < n; ++k) {
          v += evals[static_cast<std::size_t>(k)] * evecs[static_cast<std::size_t>(k) * n + i] *
               evecs[static_cast<std::size_t>(k) * n + j];
        }
        CHECK(v == doctest::Approx(m[static_cast<std::size_t>(i) * n + j]).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("pairwise distances are euclidean") {
  const DistanceMatrix d = distances_of({{0, 0}, {3, 4}});
  CHECK(d.n == 2);
  CHECK(d.at(0, 1) == 5.0);
  CHECK(d.at(1, 0) == 5.0);
  CHECK(d.at(0, 0) == 0.0);
}

TEST_CASE("square corners embed back to their own distances") {
  const DistanceMatrix d = distances_of({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  const MdsEmbedding e = classical_mds(d, 2);
  CHECK(e.dims == 2);
  CHECK(e.eigenvalues.size() == 2);
  CHECK(e.eigenvalues[0] > 0.0);
  CHECK(e.clamped_axes.empty());
  check_reconstruction(d, e, 1e-9);
}

TEST_CASE("random planar point sets are recovered to relative 1e-9") {
  Rng rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 4 + static_cast<int>(rng.next_index(7));
    std::vector<std::vector<double>> points;
    for (int i = 0; i < n; ++i) points.push_back({rng.next_unit() * 10, rng.next_unit() * 10});
    const DistanceMatrix d = distances_of(points);
    const MdsEmbedding e = classical_mds(d, 2);
    check_reconstruction(d, e, 1e-9);
  }
}

TEST_CASE("collinear points leave no second axis") {
  const DistanceMatrix d = distances_of({{0, 0}, {2, 0}, {5, 0}});
  const MdsEmbedding e = classical_mds(d, 2);
  CHECK(std::abs(e.eigenvalues[1]) < 1e-9);
  check_reconstruction(d, e, 1e-9);

  // One dimension is enough for a line, and the spacing comes back.
  const MdsEmbedding line = classical_mds(d, 1);
  CHECK(line.dims == 1);
  CHECK(line.coords[0][0] <= line.coords[2][0]);  // orientation rule
  CHECK(std::abs(line.coords[1][0] - line.coords[0][0]) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(std::abs(line.coords[2][0] - line.coords[1][0]) == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("impossible distances still give a finite embedding") {
  // d(0,2) breaks the triangle inequality, so part of the spread lives in a
  // negative eigenvalue. Descending order keeps the centering zero ahead of
  // it, so the retained second axis is flat; if it lands numerically below
  // zero the clamp zeroes it out instead of taking a square root of it.
  DistanceMatrix d;
  d.n = 3;
  d.d = {0, 1, 10,  //
         1, 0, 1,   //
         10, 1, 0};
  const MdsEmbedding e = classical_mds(d, 2);
  CHECK(e.eigenvalues[0] > 0.0);
  CHECK(std::abs(e.eigenvalues[1]) < 1e-9 * e.eigenvalues[0]);
  for (const auto& c : e.coords) {
    for (double v : c) CHECK(std::isfinite(v));
    CHECK(std::abs(c[1]) < 1e-6);
  }
  if (!e.clamped_axes.empty()) {
    CHECK(e.clamped_axes == std::vector<int>{1});
    for (const auto& c : e.coords) CHECK(c[1] == 0.0);
  }
  // The geometry cannot be honored in the plane: dropping the negative
  // eigenvalue stretches the short pairs (1 apart in the input, ~5 here).
  const DistanceMatrix rebuilt = pairwise_distances(e.coords);
  CHECK(rebuilt.at(0, 1) > 2.0);
  CHECK(rebuilt.at(1, 2) > 2.0);
}

TEST_CASE("mds input validation") {
  const DistanceMatrix good = distances_of({{0, 0}, {1, 0}, {0, 1}});
  CHECK_THROWS_WITH(classical_mds(good, 3), doctest::Contains("dims must be 1 or 2"));
  CHECK_THROWS_WITH(classical_mds(good, 0), doctest::Contains("dims must be 1 or 2"));

  const DistanceMatrix two = distances_of({{0, 0}, {1, 0}});
  CHECK_THROWS_WITH(classical_mds(two, 2), doctest::Contains("need at least 3 points"));

  DistanceMatrix bad = good;
  bad.at(0, 1) = 7.0;
  CHECK_THROWS_WITH(classical_mds(bad, 2), doctest::Contains("not symmetric"));

  bad = good;
  bad.at(1, 1) = 0.5;
  CHECK_THROWS_WITH(classical_mds(bad, 2), doctest::Contains("nonzero diagonal"));

  bad = good;
  bad.at(0, 2) = -1.0;
  bad.at(2, 0) = -1.0;
  CHECK_THROWS_WITH(classical_mds(bad, 2), doctest::Contains("negative distance"));

  bad = good;
  bad.d.pop_back();
  CHECK_THROWS_WITH(classical_mds(bad, 2), doctest::Contains("does not match n"));
}

TEST_CASE("crossing count sees exactly the proper crossings") {
  const std::vector<std::vector<double>> square = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK(crossing_count(square) == 0);  // convex walk
  CHECK(crossing_count(square, {0, 2, 1, 3}) == 1);  // bowtie

  // A zigzag that never returns over itself.
  const std::vector<std::vector<double>> zigzag = {{0, 0}, {1, 1}, {2, 0}, {3, 1}, {4, 0}};
  CHECK(crossing_count(zigzag) == 0);

  // Collinear overlap is not a proper crossing.
  const std::vector<std::vector<double>> line = {{0, 0}, {2, 0}, {1, 0}, {3, 0}};
  CHECK(crossing_count(line) == 0);

  // Touching at an interior point of another segment is not proper either.
  const std::vector<std::vector<double>> touch = {{0, 0}, {2, 0}, {1, 1}, {1, 0}};
  CHECK(crossing_count(touch) == 0);

  CHECK_THROWS_WITH(crossing_count(square, {0, 1, 2}), doctest::Contains("order/point count"));
  CHECK_THROWS_WITH(crossing_count(square, {0, 0, 1, 2}),
                    doctest::Contains("not a permutation"));
}

TEST_CASE("monotone check demands strictness and reports exact spearman") {
  MdsEmbedding inc = embedding_of({{0.1, 0}, {0.5, 0}, {0.7, 0}, {2.0, 0}});
  MonotoneResult r = ordering_monotone(inc);
  CHECK(r.monotone);
  CHECK(r.spearman == 1.0);

  MdsEmbedding dec = embedding_of({{4.0}, {3.0}, {2.0}, {1.0}});
  r = ordering_monotone(dec);
  CHECK(r.monotone);
  CHECK(r.spearman == -1.0);

  // Swap the middle pair: d^2 sums to 2, so rho = 1 - 12/60 = 0.8.
  MdsEmbedding swapped = embedding_of({{1.0}, {3.0}, {2.0}, {4.0}});
  r = ordering_monotone(swapped);
  CHECK_FALSE(r.monotone);
  CHECK(r.spearman == doctest::Approx(0.8).epsilon(1e-12));

  // A tie is not strictly monotone; ranks average to (1, 2.5, 2.5, 4).
  MdsEmbedding tied = embedding_of({{0.0}, {1.0}, {1.0}, {2.0}});
  r = ordering_monotone(tied);
  CHECK_FALSE(r.monotone);
  CHECK(r.spearman == doctest::Approx(std::sqrt(0.9)).epsilon(1e-12));
}

TEST_CASE("monotone check follows the given order") {
  MdsEmbedding e = embedding_of({{3.0}, {1.0}, {2.0}});
  CHECK_FALSE(ordering_monotone(e).monotone);
  const MonotoneResult r = ordering_monotone(e, {1, 2, 0});
  CHECK(r.monotone);
  CHECK(r.spearman == 1.0);
  CHECK_THROWS_WITH(ordering_monotone(e, {0, 1}), doctest::Contains("order/point count"));
}

TEST_CASE("embedding CSV round-trips coordinates exactly") {
  const DistanceMatrix d = distances_of({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 2.0}});
  const MdsEmbedding e = classical_mds(d, 2);
  const std::string path = temp_path("embedding_rt.csv");
  write_embedding_csv(path, e);
  const auto rows = csv::read_file(path);
  CHECK(rows[0] == csv::Row{"unit", "x", "y"});
  CHECK(rows.size() == e.coords.size() + 1);
  const MdsEmbedding back = load_embedding_csv(path);
  CHECK(back.dims == 2);
  CHECK(back.coords == e.coords);
  CHECK(back.eigenvalues.empty());  // the file only stores coordinates
  std::remove(path.c_str());

  const std::string bad = temp_path("embedding_bad.csv");
  csv::write_file(bad, {{"unit", "x", "y"}});
  CHECK_THROWS_WITH(load_embedding_csv(bad), doctest::Contains("bad embedding file"));
  csv::write_file(bad, {{"unit", "x", "y"}, {"0", "1.0", "2.0"}, {"1", "3.0"}});
  CHECK_THROWS_WITH(load_embedding_csv(bad), doctest::Contains("ragged row"));
  std::remove(bad.c_str());
}
