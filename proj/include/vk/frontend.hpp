#pragma once

// Surface syntax: s-expressions for signature files, query expressions and
// container tables, plus the JSON form of verification reports.

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "vk/container.hpp"
#include "vk/report.hpp"
#include "vk/universe.hpp"

namespace vk {

struct Sexp {
  bool atom = false;
  std::string text;         // atoms
  std::vector<Sexp> items;  // lists
  int line = 1, col = 1;

  bool is_list() const { return !atom; }
  bool head_is(std::string_view name) const;
  std::string where() const;
};

/// Every top-level form. `;` starts a comment running to end of line.
/// Throws ParseError with line and column.
std::vector<Sexp> parse_sexps(std::string_view text);
/// Exactly one top-level form.
Sexp parse_sexp(std::string_view text);

struct SignatureFile {
  std::vector<std::pair<std::string, int>> nullary;
  std::set<Former> formers;  // subset of unit, empty, sum, sigma, pi, id, po0
  bool nbad = false;
};

/// (signature (nullary NAME SIZE)* (formers NAME*)? (flags nbad)?)
/// Throws ParseError, DuplicateName or UnknownFormer.
SignatureFile parse_signature(std::string_view text);
/// N is always enabled; NBad only under the flag.
VSigPtr make_signature(const SignatureFile& file, int bij_cap = 6);

/// One expression of the query grammar, checked against `sig`: ParseError
/// for syntax, unknown names or disabled formers, ArityMismatch for wrong
/// argument or family counts, ElementOutOfRange for bad elements or maps.
Code parse_expr(std::string_view text, const VSignature& sig);

/// (container (labels NAME*) (shape NAME TARGET (POS SOURCE)*)*)
FiniteContainerTable parse_container(std::string_view text);

/// Throws PreconditionViolated when the file cannot be read.
std::string read_file(const std::filesystem::path& path);

/// {suite, pred, cases, vacuous, failure_count, failures, notes, seed,
/// elapsed_ms, version}
nlohmann::ordered_json to_json(const VerifyReport& report);

}  // namespace vk
