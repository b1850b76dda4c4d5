// Command-line driver: check signatures, decode and compare expressions,
// enumerate codes and run the verification suites.

#include <chrono>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vk/error.hpp"
#include "vk/frontend.hpp"
#include "vk/suites.hpp"
#include "vk/universe.hpp"
#include "vk/version.hpp"

namespace {

using namespace vk;

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

const std::vector<std::string> kSuites = {"univalence", "truncation", "structural", "coherence", "negative",
                                          "retains",    "appendixA",  "wtypes",     "all"};

struct Options {
  std::string sig_path;
  std::string expr, other;
  std::string pred = "isprop";
  std::string suite = "all";
  bool witnesses = false;
  bool json = false;
  bool force = false;
  int depth = 2;
  std::uint64_t seed = 0;
  int max_nodes = 5;
  int max_size = 6;
  int bij_cap = 6;
};

VSigPtr load(const Options& o) { return make_signature(parse_signature(read_file(o.sig_path)), o.bij_cap); }

std::string former_list(const VSignature& sig) {
  std::string out;
  for (Former f : sig.formers()) out += (out.empty() ? "" : " ") + std::string(to_string(f));
  return out;
}

int cmd_check(const Options& o) {
  const VSigPtr sig = load(o);
  std::cout << "ok: " << sig->nullary().count() << " nullary, formers: " << former_list(*sig) << "\n";
  for (const auto& [name, size] : sig->nullary().entries()) std::cout << "nullary " << name << " " << size << "\n";
  return kOk;
}

int cmd_el(const Options& o) {
  const VSigPtr sig = load(o);
  const Code c = parse_expr(o.expr, *sig);
  std::cout << el(*sig, c).size << "\n";
  return kOk;
}

int cmd_eq(const Options& o) {
  const VSigPtr sig = load(o);
  const PredicateSpec pred = PredicateSpec::parse(o.pred);
  const Code c0 = parse_expr(o.expr, *sig);
  const Code c1 = parse_expr(o.other, *sig);
  Universe u(sig);
  const auto paths = u.eqv_total(pred, c0, c1);
  std::cout << (paths.empty() ? "unequal" : "equal") << "\n";
  if (o.witnesses) {
    std::cout << paths.size() << " paths\n";
    for (const auto& [p, w] : paths) std::cout << to_string(p.fwd()) << " " << to_string(w) << "\n";
  }
  return kOk;
}

int cmd_enumerate(const Options& o) {
  const VSigPtr sig = load(o);
  const auto codes = enumerate_codes(*sig, Budget{o.max_nodes, o.max_size});
  for (const Code& c : codes) std::cout << el(*sig, c).size << "\t" << to_string(c) << "\n";
  std::cerr << codes.size() << " codes\n";
  return kOk;
}

VerifyReport timed(const std::function<VerifyReport()>& run, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  VerifyReport r = run();
  r.seed = seed;
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

void print_text(const VerifyReport& r) {
  std::cout << r.suite << " [" << r.pred << "]: " << (r.passed() ? "PASS" : "FAIL") << " cases=" << r.cases
            << " vacuous=" << r.vacuous << " failures=" << r.failure_count << "\n";
  for (const auto& n : r.notes) std::cout << "  note: " << n << "\n";
  for (const auto& f : r.failures)
    std::cout << "  failure: " << f.inputs << " | expected " << f.expected << " | got " << f.got << "\n";
}

int cmd_verify(const Options& o) {
  const VSigPtr sig = load(o);
  const PredicateSpec pred = PredicateSpec::parse(o.pred);
  const Budget budget{o.max_nodes, o.max_size};
  Universe u(sig);

  if (o.suite == "truncation" && !pred.implies_prop() && !o.force)
    throw Error(ErrorCode::PreconditionViolated, "predicate " + pred.name() +
                                                     " does not imply prop, so truncation is not expected; run "
                                                     "--suite negative, or pass --force to check anyway");

  std::vector<std::string> plan;
  if (o.suite == "all")
    plan = {"univalence", pred.implies_prop() ? "truncation" : "negative", "structural", "coherence", "retains",
            "appendixA", "wtypes"};
  else
    plan = {o.suite};

  std::vector<VerifyReport> reports;
  for (const std::string& name : plan) {
    std::function<VerifyReport()> run;
    if (name == "univalence") run = [&] { return verify_partial_univalence(u, pred, budget); };
    if (name == "truncation") run = [&] { return verify_truncated(u, pred, budget, o.force); };
    if (name == "negative") run = [&] { return negative_control(u, pred, budget); };
    if (name == "structural") run = [&] { return verify_structural(u, budget); };
    if (name == "coherence") run = [&] { return verify_coherence(u, pred, budget); };
    if (name == "retains") run = [&] { return suite_retains(sig->nullary(), o.seed); };
    if (name == "appendixA") run = [&] { return suite_appendix_a(o.seed); };
    if (name == "wtypes") run = [&] { return suite_wtypes(o.seed, 20, o.depth); };
    reports.push_back(timed(run, o.seed));
  }

  bool passed = true;
  for (const auto& r : reports) passed = passed && r.passed();

  if (o.json) {
    nlohmann::ordered_json out;
    if (reports.size() == 1) {
      out = to_json(reports.front());
    } else {
      VerifyReport total;
      total.suite = "all";
      total.pred = pred.name();
      total.seed = o.seed;
      for (const auto& r : reports) {
        total.absorb(r);
        total.elapsed_ms += r.elapsed_ms;
      }
      total.notes.clear();
      out = to_json(total);
      out["reports"] = nlohmann::ordered_json::array();
      for (const auto& r : reports) out["reports"].push_back(to_json(r));
    }
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& r : reports) print_text(r);
    if (reports.size() > 1) std::cout << (passed ? "all suites passed" : "some suites failed") << "\n";
  }
  return passed ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decidable equality kernel for a partially univalent universe of finite sets"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  Options o;

  auto* check = app.add_subcommand("check", "Parse a signature file and summarize it");
  check->add_option("sig", o.sig_path, "Signature file")->required();

  auto* el_cmd = app.add_subcommand("el", "Print the decoded size of an expression");
  el_cmd->add_option("sig", o.sig_path, "Signature file")->required();
  el_cmd->add_option("-e,--expr", o.expr, "Expression")->required();

  auto* eq = app.add_subcommand("eq", "Decide equality of two expressions");
  eq->add_option("sig", o.sig_path, "Signature file")->required();
  eq->add_option("-e,--expr", o.expr, "First expression")->required();
  eq->add_option("-f,--other", o.other, "Second expression")->required();
  eq->add_option("--pred", o.pred, "Predicate: none, isprop, iscontr, all, size<=K, size=K");
  eq->add_flag("--witnesses", o.witnesses, "List every path with its witness");
  eq->add_option("--bij-cap", o.bij_cap, "Largest size with enumerated bijections")->check(CLI::Range(0, 10));

  auto* enumerate = app.add_subcommand("enumerate", "List the codes within a budget");
  enumerate->add_option("sig", o.sig_path, "Signature file")->required();
  enumerate->add_option("--max-nodes", o.max_nodes, "Node budget")->check(CLI::Range(1, 64));
  enumerate->add_option("--max-size", o.max_size, "Size bound for every subcode")->check(CLI::Range(0, 1000));

  auto* verify = app.add_subcommand("verify", "Run verification suites");
  verify->add_option("sig", o.sig_path, "Signature file")->required();
  verify->add_option("--pred", o.pred, "Predicate: none, isprop, iscontr, all, size<=K, size=K");
  verify->add_option("--suite", o.suite, "Suite to run")->check(CLI::IsMember(kSuites));
  verify->add_option("--depth", o.depth, "Tree depth for the wtypes suite")->check(CLI::Range(0, 4));
  verify->add_option("--seed", o.seed, "Seed of the randomized suites");
  verify->add_flag("--json", o.json, "Emit JSON reports");
  verify->add_flag("--force", o.force, "Run truncation even when the predicate does not imply prop");
  verify->add_option("--max-nodes", o.max_nodes, "Node budget")->check(CLI::Range(1, 64));
  verify->add_option("--max-size", o.max_size, "Size bound for every subcode")->check(CLI::Range(0, 1000));
  verify->add_option("--bij-cap", o.bij_cap, "Largest size with enumerated bijections")->check(CLI::Range(0, 10));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (check->parsed()) return cmd_check(o);
    if (el_cmd->parsed()) return cmd_el(o);
    if (eq->parsed()) return cmd_eq(o);
    if (enumerate->parsed()) return cmd_enumerate(o);
    return cmd_verify(o);
  } catch (const vk::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
