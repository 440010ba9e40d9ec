#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hypervol {

struct CriterionResult {
  std::string id;
  bool pass = false;
  std::string detail;  // deterministic; timing is reported separately
  double seconds = 0.0;
};

// Identifiers of the acceptance criteria, in execution order.
const std::vector<std::string>& acceptance_ids();

// Runs one criterion end to end. Every sampled quantity derives from `seed`,
// so a rerun with the same seed reproduces the detail string byte for byte.
// The per-criterion runtime cap is part of the pass verdict.
CriterionResult run_criterion(const std::string& id, std::uint64_t seed = 2026);

}  // namespace hypervol
