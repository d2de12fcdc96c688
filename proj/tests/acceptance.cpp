// End-to-end acceptance gate: one line per criterion, nonzero exit if any
// criterion fails.  Each criterion couples a validation suite to a floor on
// the amount of evidence it produced and a wall-clock budget.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "chit/selftest.hpp"

namespace {

struct Criterion {
  const char* label;
  const char* suite;
  long min_count;   // leading integer of the suite detail; 0 = no floor
  double budget_ms; // 0 = no budget
};

const Criterion kCriteria[] = {
    {"judgmental equation corpus", "equations", 30, 5000},
    {"torus round-trip on every cell", "torus-roundtrip", 0, 1000},
    {"normalization stable under substitution", "substitution-stability", 1000, 60000},
    {"derived composition restriction contract", "comp-contract", 200, 0},
    {"generic and direct transport agree", "transport-agreement", 100, 0},
    {"presheaf semantics agreement", "presheaf-agreement", 1, 60000},
    {"interval decisions match rewriting oracle", "interval-oracle", 10000, 0},
    {"ill-formed inputs rejected by kind", "negative-suite", 10, 0},
};

long leading_count(const std::string& detail) {
  return std::strtol(detail.c_str(), nullptr, 10);
}

}  // namespace

int main() {
  chit::SelftestOptions opts;
  if (const char* seed = std::getenv("KERNEL_SEED"))
    opts.seed = std::strtoull(seed, nullptr, 10);

  auto results = chit::run_selftest(opts);
  bool all = true;
  int n = 0;
  for (const Criterion& c : kCriteria) {
    ++n;
    const chit::SuiteResult* r = nullptr;
    for (const auto& s : results)
      if (s.name == c.suite) { r = &s; break; }
    bool pass = r && r->pass;
    std::string why;
    if (!r) {
      why = "suite missing";
    } else if (!r->pass) {
      why = r->detail;
    } else {
      if (c.min_count > 0 && leading_count(r->detail) < c.min_count) {
        pass = false;
        why = "only " + std::to_string(leading_count(r->detail)) + " of " +
              std::to_string(c.min_count) + " required instances";
      }
      if (pass && c.budget_ms > 0 && r->ms > c.budget_ms) {
        pass = false;
        why = "took " + std::to_string(static_cast<long>(r->ms)) + " ms, budget " +
              std::to_string(static_cast<long>(c.budget_ms)) + " ms";
      }
    }
    std::printf("criterion %d: %-44s %s", n, c.label, pass ? "PASS" : "FAIL");
    if (pass && r)
      std::printf("  (%s, %.0f ms)\n", r->detail.c_str(), r->ms);
    else
      std::printf("  (%s)\n", why.c_str());
    all = all && pass;
  }
  return all ? 0 : 1;
}
