#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "aslsl/matrix_io.hpp"
#include "doctest.h"

namespace fs = std::filesystem;
using aslsl::Matrix;

namespace {

fs::path temp_dir() {
  auto dir = fs::temp_directory_path() / "aslsl_io_test";
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

TEST_CASE("csv round trip is bit exact") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-5.0, 5.0);
  Matrix m(7, 5);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = unif(rng);
  }
  m(0, 0) = 1.0 / 3.0;
  m(1, 1) = 1e-300;
  m(2, 2) = 12345678.987654321;
  m(3, 3) = 0.0;
  m(4, 4) = -0.1;

  const auto path = (temp_dir() / "round.csv").string();
  aslsl::write_csv_matrix(path, m);
  const Matrix back = aslsl::read_csv_matrix(path);
  REQUIRE(back.rows() == m.rows());
  REQUIRE(back.cols() == m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      CHECK(back(r, c) == m(r, c));
    }
  }
}

TEST_CASE("format_double survives parsing") {
  for (double v : {1.0 / 3.0, 0.1, 1e-300, 2.5e17, -7.25, 0.0}) {
    const std::string s = aslsl::format_double(v);
    CHECK(std::stod(s) == v);
  }
}

TEST_CASE("ragged rows are rejected with location") {
  const auto path = temp_dir() / "ragged.csv";
  write_text(path, "1,2,3\n4,5\n");
  CHECK_THROWS_WITH_AS(aslsl::read_csv_matrix(path.string()),
                       doctest::Contains("row 2"), std::runtime_error);
}

TEST_CASE("non numeric cells are rejected with location") {
  const auto path = temp_dir() / "alpha.csv";
  write_text(path, "1,2\n3,oops\n");
  CHECK_THROWS_WITH_AS(aslsl::read_csv_matrix(path.string()),
                       doctest::Contains("column 2"), std::runtime_error);
}

TEST_CASE("non finite values are rejected") {
  const auto path = temp_dir() / "inf.csv";
  write_text(path, "1,2\ninf,4\n");
  CHECK_THROWS_AS(aslsl::read_csv_matrix(path.string()), std::runtime_error);
}

TEST_CASE("missing file reports its path") {
  CHECK_THROWS_WITH_AS(aslsl::read_csv_matrix("/nonexistent/nope.csv"),
                       doctest::Contains("nope.csv"), std::runtime_error);
}

TEST_CASE("empty file is rejected") {
  const auto path = temp_dir() / "empty.csv";
  write_text(path, "");
  CHECK_THROWS_AS(aslsl::read_csv_matrix(path.string()), std::runtime_error);
}
