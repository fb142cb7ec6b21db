#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace countlab {

struct FailureRecord {
  std::string parameters;  // e.g. "n=1 a=0"
  std::string expected;
  std::string observed;
  std::string replay;      // CLI invocation that reruns the failing slice
};

struct VerificationReport {
  std::string suite;
  std::string parameter_ranges;
  std::uint64_t checks_run = 0;
  // At most kMaxRecordedFailures are kept; total_failures counts all.
  std::vector<FailureRecord> failures;
  std::uint64_t total_failures = 0;
  double wall_seconds = 0.0;

  bool passed() const { return total_failures == 0; }
};

inline constexpr std::size_t kMaxRecordedFailures = 100;

struct VerifyOptions {
  // Largest size parameter; each suite has its own default when unset.
  std::optional<std::uint32_t> n_max;
  std::uint64_t seed = 0;
  std::size_t corpus_size = 200;
};

// Suite identifiers accepted by run_suite, in display order.
const std::vector<std::string>& suite_ids();

// One-line description per suite id.
std::string suite_description(const std::string& id);

// Throws ConfigurationError for an unknown id.
VerificationReport run_suite(const std::string& id, const VerifyOptions& options = {});

std::string to_text(const VerificationReport& report);
// Wall time is left out unless asked for, so reports compare byte for byte.
nlohmann::json to_json(const VerificationReport& report, bool with_time = false);

}  // namespace countlab
