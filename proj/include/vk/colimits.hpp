#pragma once

// Set-level (0-truncated) pushouts and joins of finite sets, plus the
// mono/pullback diagnostics used to exercise the pushout-along-mono lemmas.

#include <optional>
#include <string>

#include "vk/fincore.hpp"
#include "vk/report.hpp"

namespace vk {

/// B <-f- A -g-> C
struct Span {
  Span(FinSet a, FinSet b, FinSet c, ElemMap f, ElemMap g);

  FinSet A, B, C;
  ElemMap f, g;
};

struct PushoutResult {
  FinSet D;
  ElemMap inl;  // B -> D
  ElemMap inr;  // C -> D
};

/// Quotient of B ⊔ C by the relation generated by inl(f a) ~ inr(g a).
/// Classes are numbered by first occurrence, scanning B then C.
PushoutResult pushout(const Span& span);

/// X <- X×Y -> Y, with X×Y enumerated as x*|Y| + y.
Span product_span(FinSet x, FinSet y);

FinSet join(FinSet x, FinSet y);

bool is_mono(const ElemMap& f);

struct PushoutMonoCheck {
  bool inr_mono = false;
  bool pullback = false;

  bool passed() const { return inr_mono && pullback; }
};

/// Requires span.f mono. Checks that inr is mono and that the square is a
/// pullback: {(b,c) : inl b = inr c} is exactly the image of A under (f,g).
PushoutMonoCheck check_pushout_mono(const Span& span);

struct JoinPropCheck {
  bool hypothesis = false;  // is_prop(X) and is_prop(Y)
  FinSet join;
  bool conclusion = false;  // is_prop(join)
  Outcome outcome = Outcome::Vacuous;
};

JoinPropCheck check_join_prop(FinSet x, FinSet y);

struct MonoTruncCheck {
  int level = 0;
  FinSet D;
  Outcome outcome = Outcome::Vacuous;
  std::string detail;
};

/// level -1: with B, C props and a map h: B×C -> A, D is a prop.
/// level 0: every finite set is a set, reported VACUOUS.
MonoTruncCheck check_pushout_mono_trunc(const Span& span, int level,
                                        const std::optional<ElemMap>& h = std::nullopt);

}  // namespace vk
