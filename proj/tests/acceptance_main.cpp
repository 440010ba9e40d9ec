// Runs every acceptance criterion once and prints one verdict line each.
// Exit status is the number of failed criteria (0 on full pass).
#include <cstdio>
#include <string>

#include "hypervol/acceptance.hpp"

int main() {
  int failures = 0;
  for (const std::string& id : hypervol::acceptance_ids()) {
    hypervol::CriterionResult r = hypervol::run_criterion(id);
    std::printf("%-6s %s  (%.1fs)\n       %s\n", id.c_str(), r.pass ? "PASS" : "FAIL",
                r.seconds, r.detail.c_str());
    std::fflush(stdout);
    if (!r.pass) ++failures;
  }
  return failures;
}
