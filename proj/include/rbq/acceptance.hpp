#pragma once

// The acceptance battery, shared by `rbq suite` and the acceptance test.

#include <cstdint>
#include <string>
#include <vector>

#include "rbq/group_spec.hpp"
#include "rbq/report.hpp"

namespace rbq {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;     // one line, human readable
  double seconds = 0.0;   // wall time, excluded from `data`
  double time_limit = 0.0;
  ojson data;             // deterministic for a fixed seed
};

inline constexpr int kCriteria = 11;

CriterionResult run_criterion(int id, std::uint64_t seed = kDefaultSeed);
std::vector<CriterionResult> run_acceptance(std::uint64_t seed = kDefaultSeed);

/// Per-group battery for `suite --spec`: symmetry suite, nesting, triple and
/// slab audits, R invariance, p = 2 bound and the region-restricted bounds.
std::vector<CriterionResult> group_battery(const GroupSpec& spec, std::uint64_t seed = kDefaultSeed,
                                           std::uint64_t samples = 20000);

ojson to_json(const CriterionResult& result, bool with_timing);

}  // namespace rbq
