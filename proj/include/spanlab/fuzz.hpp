#pragma once

// Seeded randomized and exhaustive campaigns over the bounds in bounds.hpp.
// Every campaign is reproducible from (lemma, trials, seed, max_p).

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

namespace spanlab {

struct FuzzConfig {
  std::string lemma;      // "2.1" ... "2.9"
  long trials = 10'000;
  std::uint64_t seed = 1;
  int max_p = 31;         // largest prime (or group order for general-group lemmas)
};

struct SubsuiteReport {
  std::string name;
  long cases = 0;
  long violations = 0;
  /// Counted subsuites test the statement as written; the others probe
  /// variants (other readings, corrected hypotheses) and are informational.
  bool counted = true;
  std::string note;
  std::vector<nlohmann::json> examples;
};

struct FuzzReport {
  std::string lemma;
  long trials = 0;
  std::uint64_t seed = 0;
  int max_p = 0;
  long applicable = 0;    // random trials whose hypothesis held
  long violation_count = 0;
  std::vector<nlohmann::json> violations;  // first kMaxStoredViolations
  std::vector<SubsuiteReport> subsuites;

  bool ok() const { return violation_count == 0; }
  nlohmann::json to_json() const;
};

inline constexpr std::size_t kMaxStoredViolations = 50;

const std::vector<std::string>& fuzz_lemmas();
FuzzReport run_fuzz(const FuzzConfig& cfg);

/// Independent per-trial generator derived from the campaign seed.
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial);

}  // namespace spanlab
