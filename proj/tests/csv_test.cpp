#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "chronomap/csv.hpp"
#include "chronomap/rng.hpp"

using namespace chronomap;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("escape quotes only when needed") {
  CHECK(csv::escape("plain") == "plain");
  CHECK(csv::escape("") == "");
  CHECK(csv::escape("a,b") == "\"a,b\"");
  CHECK(csv::escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv::escape("line\nbreak") == "\"line\nbreak\"");
}

TEST_CASE("write and read round-trip awkward fields") {
  const std::string path = temp_path("csv_roundtrip.csv");
  const std::vector<csv::Row> rows = {
      {"id", "text", "note"},
      {"1", "a,b", "say \"hi\""},
      {"2", "", "line\nbreak"},
      {"3", "  spaced  ", ","},
  };
  csv::write_file(path, rows);
  CHECK(csv::read_file(path) == rows);
  std::remove(path.c_str());
}

TEST_CASE("read accepts CRLF line ends") {
  const std::string path = temp_path("csv_crlf.csv");
  {
    std::ofstream out(path, std::ios::binary);
    out << "a,b\r\n1,2\r\n";
  }
  const auto rows = csv::read_file(path);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == csv::Row{"a", "b"});
  CHECK(rows[1] == csv::Row{"1", "2"});
  std::remove(path.c_str());
}

TEST_CASE("read rejects a missing file") {
  CHECK_THROWS(csv::read_file(temp_path("csv_no_such_file.csv")));
}

TEST_CASE("format_double round-trips exactly") {
  const double cases[] = {0.0,   -0.0, 1.0,        1.0 / 3.0, 0.1,       31.29118022299995,
                          1e300, 1e-9, -2.5e-17, 123456789.0, 0.9993533478429157};
  for (double v : cases) {
    CAPTURE(v);
    CHECK(std::strtod(csv::format_double(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("format_double round-trips random doubles") {
  Rng rng(404);
  for (int i = 0; i < 2000; ++i) {
    const double v = (rng.next_unit() - 0.5) * std::pow(10.0, rng.next_unit() * 20.0 - 10.0);
    CAPTURE(v);
    CHECK(std::strtod(csv::format_double(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("fixed-precision formatting never goes scientific") {
  CHECK(csv::format_double(70.0, 1) == "70.0");
  CHECK(csv::format_double(0.05, 2) == "0.05");
  CHECK(csv::format_double(99.966, 1) == "100.0");
  CHECK(csv::format_double(-3.14159, 3) == "-3.142");
  CHECK(csv::format_double(1234567.0, 0) == "1234567");
}

TEST_CASE("random rows survive a round-trip") {
  const std::string path = temp_path("csv_fuzz.csv");
  Rng rng(77);
  const std::string alphabet = "ab,\"\n x";
  for (int iter = 0; iter < 25; ++iter) {
    std::vector<csv::Row> rows;
    const std::size_t n_rows = 1 + rng.next_index(6);
    // A row of one empty field writes as a blank line, which reads as no row
    // at all; two columns keep every written row visible.
    const std::size_t n_cols = 2 + rng.next_index(4);
    for (std::size_t r = 0; r < n_rows; ++r) {
      csv::Row row;
      for (std::size_t c = 0; c < n_cols; ++c) {
        std::string field;
        const std::size_t len = rng.next_index(8);
        for (std::size_t i = 0; i < len; ++i) field += alphabet[rng.next_index(alphabet.size())];
        row.push_back(std::move(field));
      }
      rows.push_back(std::move(row));
    }
    csv::write_file(path, rows);
    CHECK(csv::read_file(path) == rows);
  }
  std::remove(path.c_str());
}
