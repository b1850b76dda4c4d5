#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace vk {

enum class Outcome { Pass, Fail, Vacuous, Skipped };

std::string_view to_string(Outcome outcome);

struct Failure {
  std::string inputs;
  std::string expected;
  std::string got;
};

/// Result of one verification suite. `failures` holds at most
/// `kMaxRecordedFailures` entries; `failure_count` is exact.
struct VerifyReport {
  static constexpr std::size_t kMaxRecordedFailures = 50;

  std::string suite;
  std::string pred;
  std::uint64_t cases = 0;
  std::uint64_t vacuous = 0;
  std::uint64_t failure_count = 0;
  std::vector<Failure> failures;
  std::vector<std::string> notes;
  std::uint64_t seed = 0;
  double elapsed_ms = 0.0;

  bool passed() const { return failure_count == 0; }

  void fail(std::string inputs, std::string expected, std::string got);
  /// Folds another report's counters and failures into this one.
  void absorb(const VerifyReport& other);
};

}  // namespace vk
