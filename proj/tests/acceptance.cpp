// One line per acceptance criterion; exits nonzero if any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "json.hpp"
#include "vk/error.hpp"
#include "vk/suites.hpp"
#include "vk/universe.hpp"

using namespace vk;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct RunResult {
  int status = -1;
  std::string out;
};

RunResult run(const std::string& command) {
  RunResult r;
  FILE* pipe = popen((command + " 2>/dev/null").c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string cli(const std::string& args) { return std::string(VK_CLI) + " " + args; }
const std::string kSig = std::string(VK_DATA_DIR) + "/sig.vk";

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double s) {
  std::ostringstream o;
  o.precision(1);
  o << std::fixed << s << " s";
  return o.str();
}

void strip_volatile(nlohmann::json& j) {
  if (j.is_object()) {
    j.erase("elapsed_ms");
    j.erase("version");
    for (auto& [k, v] : j.items()) strip_volatile(v);
  } else if (j.is_array()) {
    for (auto& v : j) strip_volatile(v);
  }
}

const Budget kBudget{5, 6};
const std::vector<const char*> kPropPreds{"isprop", "iscontr", "none"};

Verdict truncation(Universe& u) {
  const auto t0 = std::chrono::steady_clock::now();
  std::uint64_t failures = 0, cases = 0;
  for (const char* p : kPropPreds) {
    const auto r = verify_truncated(u, PredicateSpec::parse(p), kBudget);
    failures += r.failure_count;
    cases += r.cases;
  }
  const double t = seconds_since(t0);
  return {failures == 0 && cases > 0 && t < 60.0,
          std::to_string(cases) + " pairs, " + std::to_string(failures) + " failures, " + fmt(t) + " (< 60 s)"};
}

Verdict univalence(Universe& u) {
  const auto r = verify_partial_univalence(u, PredicateSpec::parse("isprop"), kBudget);
  return {r.passed() && r.cases > 0,
          std::to_string(r.cases) + " prop pairs, " + std::to_string(r.failure_count) + " failures"};
}

Verdict negative(Universe& u) {
  const auto size2 = PredicateSpec::parse("size=2");
  const auto count = u.eqv_count(size2, CN("bool"), CN("bool"));
  const auto forced = verify_truncated(u, size2, kBudget, true);
  const auto refused = run(cli("verify " + kSig + " --pred size=2 --suite truncation"));
  const auto cli_forced = run(cli("verify " + kSig + " --pred size=2 --suite truncation --force"));
  const bool pass = count == 2 && forced.failure_count >= 1 && refused.status == 2 && cli_forced.status == 1;
  return {pass, "(n bool) ~ (n bool) has " + std::to_string(count) + " paths (exactly 2 required); forced run " +
                    std::to_string(forced.failure_count) + " failures; CLI exits " + std::to_string(refused.status) +
                    " unforced, " + std::to_string(cli_forced.status) + " forced"};
}

Verdict structural(Universe& u) {
  const auto r = verify_structural(u, kBudget);
  const std::uint64_t n = u.codes(kBudget).size();
  return {r.passed() && r.cases == n * n,
          std::to_string(r.cases) + " of " + std::to_string(n * n) + " pairs, " + std::to_string(r.failure_count) +
              " disagreements"};
}

Verdict encode_decode() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = suite_wtypes(0, 20, 2);
  const double t = seconds_since(t0);
  return {r.passed() && r.cases > 0 && t < 30.0,
          "20 tables x 2 predicates, " + std::to_string(r.cases) + " checks, " + std::to_string(r.failure_count) +
              " failures, " + fmt(t) + " (< 30 s)"};
}

Verdict retains(const Universe& u) {
  const auto r = suite_retains(u.sig().nullary(), 0, 50);
  // The nbad control, with its witness pair recomputed here.
  const auto nbad = std::make_shared<VSignature>(u.sig().nullary(), std::set<Former>{Former::NBad});
  std::mt19937_64 rng(0);
  const std::vector<Index> idx{0, 1, 2};
  const auto v = retains_check(*nbad, sample_family(*nbad, idx, rng));
  std::string pair = "none";
  if (!v.violations.empty())
    pair = to_string(*nbad, v.violations[0].e0) + " ~ " + to_string(*nbad, v.violations[0].e1) + " with " +
           std::to_string(v.violations[0].witnesses) + " witnesses";
  return {r.passed() && r.cases > 0 && !v.violations.empty(),
          "36 containers x 50 families, " + std::to_string(r.failure_count) + " failures; nbad: " + pair};
}

Verdict appendix_a() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = suite_appendix_a(0, 500);
  const double t = seconds_since(t0);
  return {r.passed() && t < 10.0, "500 spans, " + std::to_string(r.cases) + " checks, " +
                                      std::to_string(r.vacuous) + " vacuous, " + std::to_string(r.failure_count) +
                                      " failures, " + fmt(t) + " (< 10 s)"};
}

Verdict coherence(Universe& u) {
  std::uint64_t failures = 0, cases = 0;
  for (const char* p : kPropPreds) {
    const auto r = verify_coherence(u, PredicateSpec::parse(p), kBudget);
    failures += r.failure_count;
    cases += r.cases;
  }
  // encode_refl membership, checked here against the witness sets directly.
  const auto& space = u.codes(kBudget);
  std::uint64_t missing = 0;
  const auto isprop = PredicateSpec::parse("isprop");
  for (const Code& c : space.codes)
    if (!u.eqv_witnesses(isprop, Bij::identity(el(u.sig(), c)), c, c).contains(u.encode_refl(isprop, c))) ++missing;
  return {failures == 0 && missing == 0 && cases > 0,
          std::to_string(cases) + " checks, " + std::to_string(failures) + " failures; encode_refl missing for " +
              std::to_string(missing) + " of " + std::to_string(space.size()) + " codes"};
}

Verdict determinism() {
  const std::string cmd = cli("verify " + kSig + " --suite all --seed 0 --json");
  auto a = run(cmd);
  auto b = run(cmd);
  if (a.status != 0 || b.status != 0)
    return {false, "exit statuses " + std::to_string(a.status) + " and " + std::to_string(b.status)};
  auto ja = nlohmann::json::parse(a.out);
  auto jb = nlohmann::json::parse(b.out);
  strip_volatile(ja);
  strip_volatile(jb);
  return {ja == jb && ja.contains("reports"),
          ja == jb ? "identical up to elapsed_ms and version" : "reports differ"};
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](int n, const char* name, const std::function<Verdict()>& check) {
    Verdict o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << "criterion " << n << " " << (o.pass ? "PASS" : "FAIL") << " " << name << ": " << o.detail
              << std::endl;
  };

  const NullarySignature nullary({{"bool", 2}, {"tri", 3}});
  Universe u(std::make_shared<VSignature>(
      nullary, std::set<Former>{Former::N, Former::Unit, Former::Empty, Former::Sum, Former::Sigma, Former::Pi,
                                Former::Id, Former::Po0}));

  report(1, "truncation", [&] { return truncation(u); });
  report(2, "partial univalence", [&] { return univalence(u); });
  report(3, "negative control", [&] { return negative(u); });
  report(4, "structural degeneration", [&] { return structural(u); });
  report(5, "encode-decode", [] { return encode_decode(); });
  report(6, "retains truncatedness", [&] { return retains(u); });
  report(7, "pushouts along monos", [] { return appendix_a(); });
  report(8, "kernel coherence", [&] { return coherence(u); });
  report(9, "determinism", [] { return determinism(); });
  return failed == 0 ? 0 : 1;
}
