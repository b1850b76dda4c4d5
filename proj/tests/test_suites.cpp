#include "doctest.h"
#include "vk/suites.hpp"

using namespace vk;

TEST_CASE("appendixA suite over several seeds") {
  for (std::uint64_t seed : {0u, 1u, 2u}) {
    const auto r = suite_appendix_a(seed, 200);
    CHECK(r.passed());
    CHECK(r.cases >= 200);
    CHECK(r.vacuous >= 200);  // every level-0 instance
  }
  CHECK(suite_appendix_a(4, 50).cases == suite_appendix_a(4, 50).cases);
}

TEST_CASE("wtypes suite") {
  const auto r = suite_wtypes(1, 5, 2);
  CHECK(r.passed());
  CHECK(r.cases > 0);
}

TEST_CASE("retains suite reports the nbad control") {
  const auto r = suite_retains(NullarySignature({{"bool", 2}}), 0, 3);
  CHECK(r.passed());
  bool control = false;
  for (const auto& n : r.notes) control = control || n.rfind("nbad control: ", 0) == 0;
  CHECK(control);
  const auto none = suite_retains(NullarySignature({{"one", 1}}), 0, 2);
  CHECK(none.passed());
  CHECK(none.notes.back().find("NO-WITNESS") != std::string::npos);
}
