#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "sal/cli.hpp"

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "salcli");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = sal::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("heat on a linear grid") {
  Run r = run({"heat", "--triple", "s1", "--t-grid", "0.1:1:10"});
  REQUIRE(r.code == 0);
  auto rows = csv(r.out);
  REQUIRE(rows.size() == 11);
  CHECK(rows[0][0] == "t");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    double t = std::stod(rows[i][0]);
    CHECK(std::abs(t - (0.1 + 0.1 * (i - 1))) < 1e-15);
    CHECK(std::abs(std::stod(rows[i][1]) - 1 / std::tanh(t / 2)) < 1e-12);
  }
}

TEST_CASE("expand as JSON") {
  Run r = run({"expand", "--triple", "s3sq", "--strips", "2", "--format", "json"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  REQUIRE(j.is_array());
  bool found = false;
  for (const auto& row : j)
    if (std::abs(row["z_re"].get<double>() - 1.5) < 1e-12) {
      found = true;
      CHECK(std::abs(row["coeff_re"].get<double>() - std::sqrt(M_PI) / 2) < 1e-14);
    }
  CHECK(found);
}

TEST_CASE("compare against the torus closed form") {
  Run r = run({"compare", "--triple", "t3", "--cutoff", "gauss", "--lambda-grid", "4:16:3"});
  REQUIRE(r.code == 0);
  auto rows = csv(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[1][7] == "t3_closed_form");
  CHECK(std::stod(rows[3][4]) < 1e-10);
  CHECK(std::stod(rows[1][6]) >= 8.0);
}

TEST_CASE("zeta and action subcommands") {
  Run z = run({"zeta", "--triple", "s2sq", "--s", "3,0"});
  REQUIRE(z.code == 0);
  auto rows = csv(z.out);
  CHECK(rows[1][5] == "direct");
  Run a = run({"action", "--triple", "s1", "--cutoff", "exp:1", "--lambda-grid", "1:100:3"});
  REQUIRE(a.code == 0);
  auto ar = csv(a.out);
  REQUIRE(ar.size() == 4);
  CHECK(std::abs(std::stod(ar[2][0]) - 10.0) < 1e-12);
  CHECK(std::abs(std::stod(ar[2][1]) - 1 / std::tanh(0.05)) < 1e-10);
}

TEST_CASE("radius subcommand") {
  Run r = run({"radius", "--triple", "s1", "--format", "json"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(std::abs(j[0]["T"].get<double>() - 2 * M_PI) < 0.5);
}

TEST_CASE("finite subcommand") {
  std::string path = "salcli_test_triple.json";
  {
    std::ofstream f(path);
    f << R"({"dim": 2, "D": [[0, 3], [3, 0]], "gamma": [[1, 0], [0, -1]], "gens": [[[1, 0], [0, 1]]]})";
  }
  Run r = run({"finite", "--file", path, "--check", "index"});
  std::remove(path.c_str());
  REQUIRE(r.code == 0);
  CHECK(r.out.find("index,index,true,0.0000000000000000e+00") != std::string::npos);
}

TEST_CASE("argument errors exit with 2") {
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"heat", "--triple", "s1"}).code == 2);
  CHECK(run({"heat", "--triple", "s1", "--t-grid", "1:0.5:3"}).code == 2);
  CHECK(run({"heat", "--triple", "nope", "--t-grid", "0.1:1:2"}).code == 2);
  CHECK(run({"expand", "--triple", "s1", "--strips", "0"}).code == 2);
  CHECK(run({"finite", "--file", "/nonexistent.json"}).code == 2);
}

TEST_CASE("output is deterministic") {
  std::vector<std::string> args = {"expand", "--triple", "podless:0.5,1", "--strips", "3"};
  Run a = run(args), b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
}
