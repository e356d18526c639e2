#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dglab/config.hpp"

namespace dglab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  bool soft = false;  // diagnostic: failure is logged but does not fail the suite
  std::string summary;
  Json metrics;
  double seconds = 0.0;
};

struct ValidationOptions {
  std::vector<int> criteria;  // empty = all
  bool quick = false;         // reduced sample counts and enumeration sizes
  std::uint64_t seed = 1;
  std::function<void(const CriterionResult&)> on_result;
};

inline constexpr int kCriteriaCount = 15;

std::vector<CriterionResult> run_validation(const ValidationOptions& opt);
CriterionResult run_criterion(int id, const ValidationOptions& opt);
bool suite_passed(const std::vector<CriterionResult>& results);
std::string format_line(const CriterionResult& r);
Json results_json(const std::vector<CriterionResult>& results);

}  // namespace dglab
