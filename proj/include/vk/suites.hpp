#pragma once

// Seeded verification suites that are not tied to a code budget: set-level
// pushout lemmas on random spans, encode-decode on random container tables,
// and truncation retention of the former containers.

#include <cstdint>

#include "vk/report.hpp"
#include "vk/universe.hpp"

namespace vk {

/// Random spans B <-f- A -g-> C with sizes <= 6 (biased toward
/// propositions) and f mono: pushout-along-mono, join-of-props and the
/// level -1 / level 0 truncation checks.
VerifyReport suite_appendix_a(std::uint64_t seed, int spans = 500);

/// verify_encode_decode on random tables (<= 3 labels, <= 4 shapes), each
/// under P = never and P = first label.
VerifyReport suite_wtypes(std::uint64_t seed, int tables = 20, int depth = 2);

/// retains_check over sampled prop-valued families on indices {0,1,2} for
/// every single-former container, the nullary one, and all pairwise
/// coproducts; plus the nbad control, which must show a violation.
VerifyReport suite_retains(const NullarySignature& nullary, std::uint64_t seed, int families = 50);

}  // namespace vk
