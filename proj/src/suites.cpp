#include "vk/suites.hpp"

#include <optional>
#include <random>

#include "vk/colimits.hpp"
#include "vk/error.hpp"

namespace vk {

namespace {

int pick(std::mt19937_64& rng, int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); }

// Sizes 0..6, half of the time a proposition.
int biased_size(std::mt19937_64& rng) { return pick(rng, 2) == 0 ? pick(rng, 2) : pick(rng, 7); }

std::string span_text(const Span& s) {
  return "A=" + std::to_string(s.A.size) + " B=" + std::to_string(s.B.size) + " C=" + std::to_string(s.C.size) +
         " f=" + to_string(s.f) + " g=" + to_string(s.g);
}

}  // namespace

VerifyReport suite_appendix_a(std::uint64_t seed, int spans) {
  VerifyReport report;
  report.suite = "appendixA";
  report.pred = "-";
  report.seed = seed;
  std::mt19937_64 rng(seed);
  for (int n = 0; n < spans; ++n) {
    const int b = biased_size(rng);
    const int a = pick(rng, b + 1);
    int c = biased_size(rng);
    if (a > 0 && c == 0) c = 1;
    std::vector<int> perm(static_cast<std::size_t>(b));
    for (int x = 0; x < b; ++x) perm[static_cast<std::size_t>(x)] = x;
    for (int x = b - 1; x > 0; --x)
      std::swap(perm[static_cast<std::size_t>(x)], perm[static_cast<std::size_t>(pick(rng, x + 1))]);
    std::vector<int> f(perm.begin(), perm.begin() + a);
    std::vector<int> g(static_cast<std::size_t>(a));
    for (int& y : g) y = pick(rng, c);
    const Span span({a}, {b}, {c}, ElemMap({a}, {b}, f), ElemMap({a}, {c}, g));
    const std::string text = span_text(span);

    ++report.cases;
    const PushoutMonoCheck mono = check_pushout_mono(span);
    if (!mono.inr_mono) report.fail(text, "C -> D mono", "not mono");
    if (!mono.pullback) report.fail(text, "pullback square", "not a pullback");

    const JoinPropCheck join = check_join_prop(span.B, span.C);
    if (join.hypothesis) {
      ++report.cases;
      if (join.outcome != Outcome::Pass)
        report.fail(text, "B * C is a prop", std::string(to_string(join.outcome)));
    }

    // Any h : B x C -> A will do: the empty map or a constant one. Without
    // one (A empty, B x C inhabited) the check reports SKIPPED.
    std::optional<ElemMap> h;
    if (b * c == 0 || a > 0) h = ElemMap({b * c}, {a}, std::vector<int>(static_cast<std::size_t>(b * c), 0));
    const auto trunc = check_pushout_mono_trunc(span, -1, h);
    if (trunc.outcome == Outcome::Pass) {
      ++report.cases;
    } else if (trunc.outcome == Outcome::Fail) {
      ++report.cases;
      report.fail(text + " level -1", "D is a prop", trunc.detail);
    } else {
      ++report.vacuous;
    }

    const auto set_level = check_pushout_mono_trunc(span, 0);
    ++report.vacuous;
    if (set_level.outcome != Outcome::Vacuous)
      report.fail(text + " level 0", "VACUOUS", std::string(to_string(set_level.outcome)));
  }
  return report;
}

VerifyReport suite_wtypes(std::uint64_t seed, int tables, int depth) {
  VerifyReport report;
  report.suite = "wtypes";
  report.pred = "none,first-label";
  report.seed = seed;
  std::mt19937_64 rng(seed);
  for (int n = 0; n < tables; ++n) {
    const auto table = std::make_shared<FiniteContainerTable>(random_table(rng));
    const PredOnIndex preds[] = {PredOnIndex::never(), PredOnIndex::only(0, "only " + table->labels()[0])};
    for (const PredOnIndex& pred : preds) {
      VerifyReport one = verify_encode_decode(table, pred, depth);
      for (auto& f : one.failures) f.inputs = "table " + std::to_string(n) + " [" + pred.name + "]: " + f.inputs;
      one.notes.clear();
      report.absorb(one);
    }
  }
  return report;
}

VerifyReport suite_retains(const NullarySignature& nullary, std::uint64_t seed, int families) {
  VerifyReport report;
  report.suite = "retains";
  report.pred = "-";
  report.seed = seed;
  std::mt19937_64 rng(seed);
  const std::vector<Index> indices{0, 1, 2};

  const std::pair<std::string, Former> singles[] = {
      {"unit", Former::Unit}, {"sigma", Former::Sigma}, {"pi", Former::Pi},     {"id", Former::Id},
      {"empty", Former::Empty}, {"sum", Former::Sum},   {"nullary", Former::N}, {"po0", Former::Po0}};
  std::vector<std::pair<std::string, SigPtr>> containers;
  for (const auto& [name, former] : singles)
    containers.emplace_back(name, std::make_shared<VSignature>(nullary, std::set<Former>{former}));
  const std::size_t n_single = containers.size();
  for (std::size_t i = 0; i < n_single; ++i)
    for (std::size_t j = i + 1; j < n_single; ++j)
      containers.emplace_back(containers[i].first + "+" + containers[j].first,
                              coproduct(containers[i].second, containers[j].second));

  for (const auto& [name, sig] : containers)
    for (int k = 0; k < families; ++k) {
      const FamilyAssignment fam = sample_family(*sig, indices, rng);
      const RetainsReport r = retains_check(*sig, fam);
      report.cases += r.cases;
      report.vacuous += r.vacuous;
      for (const auto& v : r.violations)
        report.fail(name + " family " + std::to_string(k) + ": " + to_string(*sig, v.e0) + " ~ " +
                        to_string(*sig, v.e1),
                    "at most 1 witness", std::to_string(v.witnesses) + " witnesses");
    }
  report.notes.push_back(std::to_string(containers.size()) + " containers x " + std::to_string(families) +
                         " families on indices {0,1,2}");

  // Negative control: nbad forgets that the target path must come from the name.
  const auto nbad = std::make_shared<VSignature>(nullary, std::set<Former>{Former::NBad});
  bool has_auto = false;
  for (int m = 0; m < nullary.count(); ++m) has_auto = has_auto || nullary.size(m) >= 2;
  const FamilyAssignment fam = sample_family(*nbad, indices, rng);
  const RetainsReport r = retains_check(*nbad, fam);
  if (!r.violations.empty()) {
    const auto& v = r.violations.front();
    report.notes.push_back("nbad control: " + std::to_string(r.violations.size()) + " violations, e.g. " +
                           to_string(*nbad, v.e0) + " ~ " + to_string(*nbad, v.e1) + " with " +
                           std::to_string(v.witnesses) + " witnesses");
  } else if (has_auto) {
    report.fail("nbad control", "at least one violation", "none");
  } else {
    report.notes.push_back("nbad control: NO-WITNESS (no nullary of size >= 2)");
  }
  return report;
}

}  // namespace vk
