// One line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lrlm/verify.hpp"

namespace fs = std::filesystem;

namespace {

struct Criterion {
  int id;
  std::string title;
  std::string suite;
  double limit_seconds;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path root =
      argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "lrlm-acceptance";
  fs::remove_all(root);
  const std::uint64_t seed = 20240601;

  const std::vector<Criterion> criteria = {
      {1, "exact call count", "termination", 30},
      {2, "cost bound", "cost", 60},
      {3, "131k-token trace reproduction", "appendix_a", 5},
      {4, "optimal partition k=2", "optimal_k", 5},
      {5, "scaling laws", "accuracy", 600},
      {6, "lambda-calculus suite", "lambda", 1},
      {7, "pairwise structure", "pairwise", 30},
      {8, "multi-hop structure", "multihop", 10},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    lrlm::SuiteOptions opt;
    opt.seed = seed;
    opt.trace_dir = (root / "a").string();
    std::string detail;
    bool ok = false;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      auto r = lrlm::run_suite(c.suite, opt);
      ok = r.passed;
      detail = std::to_string(r.checks) + " checks";
      if (!r.failures.empty()) detail += ", first failure: " + r.failures.front();
    } catch (const std::exception& e) {
      detail = std::string("error: ") + e.what();
    }
    const double dt = seconds_since(t0);
    if (dt > c.limit_seconds) {
      ok = false;
      detail += ", over the " + std::to_string(static_cast<int>(c.limit_seconds)) + " s limit";
    }
    std::printf("[%s] %d %s (%.2fs; %s)\n", ok ? "PASS" : "FAIL", c.id, c.title.c_str(), dt,
                detail.c_str());
    std::fflush(stdout);
    failed += ok ? 0 : 1;
  }

  // Criterion 9: every suite again with the same seed, then once more with
  // four threads; all trace files must match byte for byte.
  {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      for (const auto& [dir, jobs] : {std::pair{"b", 1}, std::pair{"c", 4}}) {
        for (const auto& s : lrlm::suite_names()) {
          lrlm::SuiteOptions opt;
          opt.seed = seed;
          opt.jobs = jobs;
          opt.trace_dir = (root / dir).string();
          lrlm::run_suite(s, opt);
          const auto first = slurp(root / "a" / (s + ".json"));
          const auto again = slurp(root / dir / (s + ".json"));
          if (first.empty() || first != again) {
            ok = false;
            detail += " " + s + "(jobs=" + std::to_string(jobs) + ")";
          }
        }
      }
      detail = ok ? "all trace files identical across 3 runs" : "differs:" + detail;
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("error: ") + e.what();
    }
    std::printf("[%s] 9 determinism (%.2fs; %s)\n", ok ? "PASS" : "FAIL", seconds_since(t0),
                detail.c_str());
    failed += ok ? 0 : 1;
  }

  std::printf("%d of 9 criteria passed\n", 9 - failed);
  return failed == 0 ? 0 : 1;
}
