#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace bosegas {

enum class Comparison { less, less_equal, greater_equal, equal };

struct Check {
  std::string id;
  int criterion = 0;
  double value = 0;
  double threshold = 0;
  Comparison cmp = Comparison::less;
  bool pass = false;
  std::string note;
};

struct Scorecard {
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  nlohmann::json calibrated;  ///< empirical constants with their seeds
  bool all_pass() const;
  /// Checks of one criterion; empty when none were run.
  std::vector<const Check*> criterion(int c) const;
  nlohmann::json to_json(bool with_timestamp = true) const;
};

/// Runs the oracle suite over criteria 1 to 12. Deterministic for a given seed.
Scorecard run_verify(std::uint64_t seed);

/// Scorecard JSON with the timestamp removed, for reproducibility comparisons.
nlohmann::json strip_timestamp(nlohmann::json j);

}  // namespace bosegas
