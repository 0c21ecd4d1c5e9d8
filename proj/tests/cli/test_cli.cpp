#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace {

int run(const std::string& args) {
  const std::string line = std::string("\"") + CASIMIR_CLI_PATH + "\" " + args + " >cli_stdout.txt 2>cli_stderr.txt";
  const int rc = std::system(line.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::vector<std::vector<std::string>> csv(const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(path));
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("force command") {
  REQUIRE(run("force --mode reflecting --beta 1 --L 1") == 0);
  const auto j = nlohmann::json::parse(slurp("cli_stdout.txt"));
  CHECK(j["value"].get<double>() == doctest::Approx(0.2765781953962737).epsilon(1e-15));
  CHECK(j["method"] == "closed");
  CHECK(j["mode"] == "reflecting");

  REQUIRE(run("force --mode absorbing --beta 1 --L 1") == 0);
  const double closed = nlohmann::json::parse(slurp("cli_stdout.txt"))["value"];
  REQUIRE(run("force --mode absorbing --beta 1 --L 1 --method flux-limit") == 0);
  const double limit = nlohmann::json::parse(slurp("cli_stdout.txt"))["value"];
  CHECK(std::abs(limit / closed - 1.0) < 1e-4);
}

TEST_CASE("exit codes") {
  CHECK(run("force --mode reflecting --beta -1 --L 1") == 2);
  CHECK(run("force --mode reflecting --beta 1 --L 0") == 2);
  CHECK(run("force --mode sideways") == 2);
  CHECK(run("force --mode reflecting --method flux-limit") == 2);
  CHECK(run("sweep --L-min 2 --L-max 1") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("sweep --out /nonexistent-dir/x.csv") == 4);
  CHECK(run("simulate --L 1 --eps 0.05 --max-events 1000") == 3);
  CHECK(run("verify --suite closed-form") == 1);  // the reflecting scaling check is red
  CHECK(run("verify --suite asymptotics") == 0);
}

TEST_CASE("sweep CSV: header, monotone, round-trip") {
  REQUIRE(run("sweep --mode reflecting --beta 1 --L-min 0.1 --L-max 5 --points 40 --out sweep.csv") == 0);
  const std::string raw = slurp("sweep.csv");
  CHECK(raw.find('\r') == std::string::npos);
  const auto rows = csv("sweep.csv");
  REQUIRE(rows.size() == 41);
  CHECK(rows[0] == std::vector<std::string>{"L", "force", "method", "beta"});
  double prev = INFINITY;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double v = std::stod(rows[i][1]);
    CHECK(v < prev);
    prev = v;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    CHECK(rows[i][1] == buf);
  }
  CHECK(std::stod(rows[1][0]) == 0.1);
  CHECK(std::stod(rows.back()[0]) == 5.0);
}

TEST_CASE("density CSV") {
  REQUIRE(run("density --mode absorbing --beta 1 --L 1 --grid 9 --out dens.csv") == 0);
  auto rows = csv("dens.csv");
  CHECK(rows[0] == std::vector<std::string>{"x", "rho", "source"});
  int zeros = 0;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i][2] == "inside" && (std::stod(rows[i][0]) == 0.0 || std::stod(rows[i][0]) == 1.0)) {
      CHECK(std::stod(rows[i][1]) == 0.0);
      ++zeros;
    }
  CHECK(zeros == 2);
  CHECK(std::abs(std::stod(rows[1][1]) - std::sqrt(0.5)) < 1e-3);

  REQUIRE(run("density --mode reflecting --beta 1 --L 2 --grid 9 --out dens.csv") == 0);
  rows = csv("dens.csv");
  std::vector<double> inside;
  for (const auto& r : rows)
    if (r[2] == "inside") inside.push_back(std::stod(r[1]));
  REQUIRE(inside.size() == 9);
  for (std::size_t i = 0; i < inside.size(); ++i) CHECK(inside[i] == inside[inside.size() - 1 - i]);
}

TEST_CASE("simulate output is reproducible and records provenance") {
  const std::string args = "simulate --mode reflecting --beta 1 --L 1 --eps 0.125 --W-out 4 --t-burn 2.5 --t-sample 4 --replicas 4 --seed 9";
  REQUIRE(run(args + " --out a.json --csv a.csv") == 0);
  REQUIRE(run(args + " --out b.json --csv b.csv") == 0);
  CHECK(slurp("a.json") == slurp("b.json"));
  CHECK(slurp("a.csv") == slurp("b.csv"));
  const auto j = nlohmann::json::parse(slurp("a.json"));
  CHECK(j["metadata"]["seed"] == 9);
  CHECK(j["metadata"]["sites_inside"] == 8);
  CHECK(j["metadata"]["events"].get<double>() > 0);
  bool found = false;
  for (const auto& p : j["parity_mean"])
    if (p["a"] == 0.0 && p["b"] == 1.0) {
      CHECK(p["mean"] == 1.0);
      found = true;
    }
  CHECK(found);
}
