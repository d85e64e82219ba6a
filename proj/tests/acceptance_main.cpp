// Prints one PASS/FAIL line per acceptance criterion; nonzero exit on any failure.
// Usage: acceptance [seed] [id...]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "periodvar/acceptance.hpp"

namespace {

// Wall-clock limits in seconds; 0 means none.
double runtime_limit(const std::string& id) {
  if (id == "lemma_span" || id == "genus1_j") return 10.0;
  if (id == "riemann_invariants" || id == "schiffer_rank1") return 120.0;
  if (id == "fay_degeneration") return 300.0;
  if (id == "schottky") return 600.0;
  return 0.0;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace periodvar::acceptance;
  std::uint64_t seed = default_seed;
  std::vector<std::string> ids;
  if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
  for (int i = 2; i < argc; ++i) ids.emplace_back(argv[i]);
  if (ids.empty()) ids = criterion_ids();

  int failures = 0;
  for (const auto& id : ids) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = run_criterion(id, seed);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double limit = runtime_limit(id);
    const bool in_time = limit == 0.0 || secs < limit;
    const bool pass = r.pass && in_time;
    std::printf("%s %-20s %-28s %8.2fs\n", pass ? "PASS" : "FAIL", r.id.c_str(), r.name.c_str(), secs);
    if (!in_time) std::printf("  runtime %.2fs exceeds the %.0fs limit\n", secs, limit);
    if (!pass) ++failures;
    if (!r.pass) {
      std::printf("%s\n", to_json(r).dump(2).c_str());
    }
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(ids.size()) - failures, ids.size());
  return failures == 0 ? 0 : 1;
}
