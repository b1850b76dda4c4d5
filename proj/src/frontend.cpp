#include "vk/frontend.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "vk/error.hpp"
#include "vk/version.hpp"

namespace vk {

bool Sexp::head_is(std::string_view name) const {
  return !atom && !items.empty() && items[0].atom && items[0].text == name;
}

std::string Sexp::where() const { return std::to_string(line) + ":" + std::to_string(col); }

namespace {

[[noreturn]] void fail_at(ErrorCode code, const Sexp& at, const std::string& what) {
  throw Error(code, at.where() + ": " + what);
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<Sexp> all() {
    std::vector<Sexp> out;
    for (skip(); pos_ < text_.size(); skip()) out.push_back(form());
    return out;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    throw Error(ErrorCode::ParseError, std::to_string(line_) + ":" + std::to_string(col_) + ": " + what);
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        advance();
      } else {
        return;
      }
    }
  }

  Sexp form() {
    Sexp s;
    s.line = line_;
    s.col = col_;
    const char c = text_[pos_];
    if (c == ')') error("unexpected ')'");
    if (c == '(') {
      advance();
      for (skip(); pos_ < text_.size() && text_[pos_] != ')'; skip()) s.items.push_back(form());
      if (pos_ >= text_.size()) {
        throw Error(ErrorCode::ParseError, s.where() + ": unclosed '('");
      }
      advance();
      return s;
    }
    s.atom = true;
    while (pos_ < text_.size()) {
      const char d = text_[pos_];
      if (d == '(' || d == ')' || d == ';' || d == ' ' || d == '\t' || d == '\n' || d == '\r') break;
      s.text += d;
      advance();
    }
    return s;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

const Sexp& atom_at(const Sexp& list, std::size_t k, std::string_view what) {
  if (k >= list.items.size()) fail_at(ErrorCode::ParseError, list, "missing " + std::string(what));
  const Sexp& s = list.items[k];
  if (!s.atom) fail_at(ErrorCode::ParseError, s, "expected " + std::string(what));
  return s;
}

int nat(const Sexp& s) {
  if (!s.atom) fail_at(ErrorCode::ParseError, s, "expected a natural number");
  int value = 0;
  const char* end = s.text.data() + s.text.size();
  const auto [ptr, ec] = std::from_chars(s.text.data(), end, value);
  if (ec != std::errc() || ptr != end || value < 0 || s.text.empty())
    fail_at(ErrorCode::ParseError, s, "expected a natural number, got '" + s.text + "'");
  return value;
}

std::vector<int> nat_list(const Sexp& s) {
  if (s.atom) fail_at(ErrorCode::ParseError, s, "expected a list of naturals");
  std::vector<int> out;
  for (const Sexp& x : s.items) out.push_back(nat(x));
  return out;
}

void expect_length(const Sexp& s, std::size_t n) {
  if (s.items.size() != n)
    fail_at(ErrorCode::ArityMismatch, s,
            "'" + s.items[0].text + "' takes " + std::to_string(n - 1) + " arguments, got " +
                std::to_string(s.items.size() - 1));
}

struct ExprParser {
  const VSignature& sig;

  // Returns the code and its decoded size.
  std::pair<Code, int> expr(const Sexp& s) {
    if (s.atom || s.items.empty() || !s.items[0].atom) fail_at(ErrorCode::ParseError, s, "expected (FORMER ...)");
    const std::string& head = s.items[0].text;
    Former f{};
    try {
      f = parse_former(head);
    } catch (const Error&) {
      fail_at(ErrorCode::ParseError, s.items[0], "unknown former '" + head + "'");
    }
    if (!sig.enabled(f)) fail_at(ErrorCode::ParseError, s.items[0], "former '" + head + "' is not enabled");

    Code c;
    switch (f) {
      case Former::N:
      case Former::NBad: {
        expect_length(s, 2);
        const std::string& name = atom_at(s, 1, "a name").text;
        if (sig.nullary().find(name) < 0) fail_at(ErrorCode::ParseError, s.items[1], "unknown name '" + name + "'");
        c = f == Former::N ? CN(name) : CNBad(name);
        break;
      }
      case Former::Unit:
        expect_length(s, 1);
        c = CUnit();
        break;
      case Former::Empty:
        expect_length(s, 1);
        c = CEmpty();
        break;
      case Former::Sum:
        expect_length(s, 3);
        c = CSum(expr(s.items[1]).first, expr(s.items[2]).first);
        break;
      case Former::Sigma:
      case Former::Pi: {
        expect_length(s, 3);
        auto [a, size] = expr(s.items[1]);
        const Sexp& fam = s.items[2];
        if (fam.atom) fail_at(ErrorCode::ParseError, fam, "expected a family (expr*)");
        if (static_cast<int>(fam.items.size()) != size)
          fail_at(ErrorCode::ArityMismatch, fam,
                  "family has " + std::to_string(fam.items.size()) + " entries, base has " + std::to_string(size) +
                      " elements");
        std::vector<Code> family;
        for (const Sexp& b : fam.items) family.push_back(expr(b).first);
        c = f == Former::Pi ? CPi(std::move(a), std::move(family)) : CSigma(std::move(a), std::move(family));
        break;
      }
      case Former::Id: {
        expect_length(s, 4);
        auto [a, size] = expr(s.items[1]);
        int ends[2];
        for (int k = 0; k < 2; ++k) {
          const Sexp& at = s.items[static_cast<std::size_t>(k + 2)];
          ends[k] = nat(at);
          if (ends[k] >= size)
            fail_at(ErrorCode::ElementOutOfRange, at,
                    "element " + at.text + " of a set of size " + std::to_string(size));
        }
        c = CId(std::move(a), ends[0], ends[1]);
        break;
      }
      case Former::Po0: {
        expect_length(s, 6);
        auto [a0, n0] = expr(s.items[1]);
        auto [a1, n1] = expr(s.items[2]);
        auto [a2, n2] = expr(s.items[3]);
        const std::vector<int> fm = nat_list(s.items[4]);
        const std::vector<int> gm = nat_list(s.items[5]);
        for (const auto& [k, list, cod] : {std::tuple{4, &fm, n1}, std::tuple{5, &gm, n2}}) {
          const Sexp& at = s.items[static_cast<std::size_t>(k)];
          if (static_cast<int>(list->size()) != n0)
            fail_at(ErrorCode::ArityMismatch, at,
                    "map has " + std::to_string(list->size()) + " entries, domain has " + std::to_string(n0));
          for (std::size_t e = 0; e < list->size(); ++e)
            if ((*list)[e] >= cod)
              fail_at(ErrorCode::ElementOutOfRange, at.items[e],
                      "target " + std::to_string((*list)[e]) + " of a set of size " + std::to_string(cod));
        }
        c = CPo0(std::move(a0), std::move(a1), std::move(a2), fm, gm);
        break;
      }
    }
    try {
      const int size = el(sig, c).size;
      return {std::move(c), size};
    } catch (const Error& e) {
      const std::string what = e.what();
      fail_at(e.code(), s, what.substr(to_string(e.code()).size() + 2));
    }
  }
};

}  // namespace

std::vector<Sexp> parse_sexps(std::string_view text) { return Reader(text).all(); }

Sexp parse_sexp(std::string_view text) {
  auto forms = parse_sexps(text);
  if (forms.size() != 1)
    throw Error(ErrorCode::ParseError,
                forms.empty() ? "1:1: empty input" : forms[1].where() + ": trailing input after the first form");
  return std::move(forms[0]);
}

SignatureFile parse_signature(std::string_view text) {
  const Sexp top = parse_sexp(text);
  if (!top.head_is("signature")) fail_at(ErrorCode::ParseError, top, "expected (signature ...)");
  SignatureFile out;
  std::set<std::string> names;
  for (std::size_t k = 1; k < top.items.size(); ++k) {
    const Sexp& d = top.items[k];
    if (d.head_is("nullary")) {
      if (d.items.size() != 3) fail_at(ErrorCode::ParseError, d, "expected (nullary NAME SIZE)");
      const Sexp& name = atom_at(d, 1, "a name");
      if (!names.insert(name.text).second)
        fail_at(ErrorCode::DuplicateName, name, "duplicate nullary '" + name.text + "'");
      out.nullary.emplace_back(name.text, nat(d.items[2]));
    } else if (d.head_is("formers")) {
      for (std::size_t j = 1; j < d.items.size(); ++j) {
        const Sexp& name = atom_at(d, j, "a former");
        Former f = Former::N;
        try {
          f = parse_former(name.text);
        } catch (const Error&) {
          fail_at(ErrorCode::UnknownFormer, name, "unknown former '" + name.text + "'");
        }
        if (f == Former::N || f == Former::NBad)
          fail_at(ErrorCode::UnknownFormer, name, "'" + name.text + "' is not a selectable former");
        out.formers.insert(f);
      }
    } else if (d.head_is("flags")) {
      for (std::size_t j = 1; j < d.items.size(); ++j) {
        const Sexp& flag = atom_at(d, j, "a flag");
        if (flag.text != "nbad") fail_at(ErrorCode::ParseError, flag, "unknown flag '" + flag.text + "'");
        out.nbad = true;
      }
    } else {
      fail_at(ErrorCode::ParseError, d, "expected (nullary ...), (formers ...) or (flags ...)");
    }
  }
  return out;
}

VSigPtr make_signature(const SignatureFile& file, int bij_cap) {
  std::set<Former> enabled = file.formers;
  enabled.insert(Former::N);
  if (file.nbad) enabled.insert(Former::NBad);
  return std::make_shared<VSignature>(NullarySignature(file.nullary), std::move(enabled), bij_cap);
}

Code parse_expr(std::string_view text, const VSignature& sig) { return ExprParser{sig}.expr(parse_sexp(text)).first; }

FiniteContainerTable parse_container(std::string_view text) {
  const Sexp top = parse_sexp(text);
  if (!top.head_is("container")) fail_at(ErrorCode::ParseError, top, "expected (container ...)");
  std::vector<std::string> labels;
  std::vector<FiniteContainerTable::Row> rows;
  for (std::size_t k = 1; k < top.items.size(); ++k) {
    const Sexp& d = top.items[k];
    if (d.head_is("labels")) {
      for (std::size_t j = 1; j < d.items.size(); ++j) labels.push_back(atom_at(d, j, "a label").text);
    } else if (d.head_is("shape")) {
      FiniteContainerTable::Row row{atom_at(d, 1, "a shape name").text, atom_at(d, 2, "a target label").text, {}};
      for (std::size_t j = 3; j < d.items.size(); ++j) {
        const Sexp& p = d.items[j];
        if (p.atom || p.items.size() != 2) fail_at(ErrorCode::ParseError, p, "expected (POS SOURCE)");
        row.positions.emplace_back(atom_at(p, 0, "a position").text, atom_at(p, 1, "a source label").text);
      }
      rows.push_back(std::move(row));
    } else {
      fail_at(ErrorCode::ParseError, d, "expected (labels ...) or (shape ...)");
    }
  }
  return FiniteContainerTable(std::move(labels), std::move(rows));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::PreconditionViolated, "cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

nlohmann::ordered_json to_json(const VerifyReport& report) {
  nlohmann::ordered_json failures = nlohmann::ordered_json::array();
  for (const Failure& f : report.failures)
    failures.push_back({{"inputs", f.inputs}, {"expected", f.expected}, {"got", f.got}});
  nlohmann::ordered_json j;
  j["suite"] = report.suite;
  j["pred"] = report.pred;
  j["cases"] = report.cases;
  j["vacuous"] = report.vacuous;
  j["failure_count"] = report.failure_count;
  j["failures"] = std::move(failures);
  j["notes"] = report.notes;
  j["seed"] = report.seed;
  j["elapsed_ms"] = report.elapsed_ms;
  j["version"] = std::string(kVersion);
  return j;
}

}  // namespace vk
