// Acceptance driver: `acceptance <1..9|all> [--cli PATH]`. One PASS/FAIL line
// per criterion; failing checks are listed underneath. Exit 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "casimir/verify.hpp"

using namespace casimir;

namespace {

struct Outcome {
  bool pass = true;
  int passed = 0;
  int total = 0;
  std::vector<std::string> failures;
};

const double kBudget[10] = {0, 9 * 1.0, 3 * 30.0, 10.0, 60.0, 5.0, 600.0, 1200.0, 5.0, 600.0};
const char* kTitle[10] = {"",
                          "reflecting force vs ODE oracle",
                          "absorbing force three-way agreement",
                          "flux representations agree",
                          "asymptotic exponents",
                          "special functions",
                          "Monte Carlo, reflecting walls",
                          "Monte Carlo, eps trend and force",
                          "scaling identity",
                          "determinism across runs and thread counts"};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

Outcome from_checks(const std::vector<Check>& checks) {
  Outcome o;
  for (const Check& c : checks) {
    ++o.total;
    if (c.pass) {
      ++o.passed;
    } else {
      o.pass = false;
      std::ostringstream s;
      s.precision(10);
      s << c.id << ": expected " << c.expected << ", observed " << c.observed << ", tolerance " << c.tolerance;
      o.failures.push_back(s.str());
    }
  }
  return o;
}

// Repeats each command under CASIMIR_THREADS=1 and 8; all outputs of one
// command must be byte-identical. The slow simulation suite runs once per count.
Outcome determinism(const std::string& cli) {
  Outcome o;
  if (cli.empty()) {
    o.pass = false;
    o.failures.push_back("no --cli path given");
    return o;
  }
  const std::string dir = "acceptance_c9";
  std::filesystem::create_directories(dir);
  struct Cmd {
    std::string name, args;
    std::vector<std::string> files;
    std::vector<int> threads = {1, 1, 8, 8};
  };
  const std::vector<Cmd> cmds = {
      {"simulate-reflecting",
       "simulate --mode reflecting --beta 1 --L 1 --eps 0.1 --t-sample 10 --replicas 12 --seed 42 --out {}.json --csv {}.csv",
       {".json", ".csv"}},
      {"simulate-absorbing",
       "simulate --mode absorbing --beta 1 --L 1 --eps 0.1 --t-sample 10 --replicas 12 --seed 42 --out {}.json --csv {}.csv",
       {".json", ".csv"}},
      {"verify-simulation", "verify --suite simulation --seed 42 --out {}.json", {".json"}, {1, 8}},
      {"verify-closed-form", "verify --suite closed-form --out {}.json", {".json"}},
  };
  for (const Cmd& c : cmds) {
    std::vector<std::string> outputs;
    for (int threads : c.threads) {
      const std::string stem = dir + "/" + c.name + ".t" + std::to_string(threads) + "." + std::to_string(outputs.size());
      std::string args = c.args;
      for (std::size_t p; (p = args.find("{}")) != std::string::npos;) args.replace(p, 2, stem);
      const std::string line = "CASIMIR_THREADS=" + std::to_string(threads) + " \"" + cli + "\" " + args + " 2>/dev/null";
      const int rc = std::system(line.c_str());
      if (rc == -1 || !WIFEXITED(rc) || WEXITSTATUS(rc) > 1) {
        o.pass = false;
        o.failures.push_back(c.name + ": command failed: " + line);
      }
      std::string all;
      for (const std::string& ext : c.files) {
        const std::string text = slurp(stem + ext);
        if (text.empty()) {
          o.pass = false;
          o.failures.push_back(c.name + ": empty output " + stem + ext);
        }
        all += text;
      }
      outputs.push_back(all);
    }
    ++o.total;
    bool same = true;
    for (const std::string& s : outputs) same = same && s == outputs.front();
    if (same) {
      ++o.passed;
    } else {
      o.pass = false;
      o.failures.push_back(c.name + ": outputs differ between runs");
    }
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::string which = "all", cli;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--cli" && i + 1 < argc) {
      cli = argv[++i];
    } else {
      which = a;
    }
  }
  std::vector<int> ids;
  if (which == "all") {
    for (int i = 1; i <= 9; ++i) ids.push_back(i);
  } else {
    const int n = std::atoi(which.c_str());
    if (n < 1 || n > 9) {
      std::fprintf(stderr, "usage: acceptance <1..9|all> [--cli PATH]\n");
      return 2;
    }
    ids.push_back(n);
  }

  bool all_pass = true;
  for (int id : ids) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = id == 9 ? determinism(cli) : from_checks(criterion_checks(id));
    } catch (const std::exception& e) {
      o.pass = false;
      o.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= kBudget[id];
    if (!in_time) o.failures.push_back("runtime " + std::to_string(secs) + " s over budget");
    const bool pass = o.pass && in_time;
    all_pass = all_pass && pass;
    std::printf("criterion %d: %s  %s  (%d/%d checks, %.2f s, budget %.0f s)\n", id, pass ? "PASS" : "FAIL", kTitle[id],
                o.passed, o.total, secs, kBudget[id]);
    for (const std::string& f : o.failures) std::printf("    %s\n", f.c_str());
    std::fflush(stdout);
  }
  return all_pass ? 0 : 1;
}
