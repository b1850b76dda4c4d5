#include "vk/report.hpp"

namespace vk {

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Pass: return "PASS";
    case Outcome::Fail: return "FAIL";
    case Outcome::Vacuous: return "VACUOUS";
    case Outcome::Skipped: return "SKIPPED";
  }
  return "?";
}

void VerifyReport::fail(std::string inputs, std::string expected, std::string got) {
  ++failure_count;
  if (failures.size() < kMaxRecordedFailures)
    failures.push_back({std::move(inputs), std::move(expected), std::move(got)});
}

void VerifyReport::absorb(const VerifyReport& other) {
  cases += other.cases;
  vacuous += other.vacuous;
  failure_count += other.failure_count;
  for (const auto& f : other.failures)
    if (failures.size() < kMaxRecordedFailures) failures.push_back(f);
  for (const auto& n : other.notes) notes.push_back(other.suite + ": " + n);
}

}  // namespace vk
