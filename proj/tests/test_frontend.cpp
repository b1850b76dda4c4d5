#include "doctest.h"
#include "vk/error.hpp"
#include "vk/frontend.hpp"

using namespace vk;

namespace {

ErrorCode error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::PreconditionViolated;
}

VSigPtr sig_from(std::string_view text) { return make_signature(parse_signature(text)); }

const char* kFull =
    "; all formers\n"
    "(signature (nullary bool 2) (nullary tri 3)\n"
    "  (formers unit empty sum sigma pi id po0))\n";

}  // namespace

TEST_CASE("s-expression reader") {
  const auto forms = parse_sexps("(a (b c)) ; comment\n  d");
  REQUIRE(forms.size() == 2);
  CHECK(forms[0].items.size() == 2);
  CHECK(forms[0].items[1].items[1].text == "c");
  CHECK(forms[1].atom);
  CHECK(forms[1].line == 2);
  CHECK(forms[1].col == 3);
  try {
    parse_sexp("(a\n  (b)");
    FAIL("unclosed list accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(std::string(e.what()).find("1:1") != std::string::npos);
  }
  try {
    parse_sexp("(a)\n  )");
    FAIL("stray paren accepted");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("2:3") != std::string::npos);
  }
  CHECK(error_of([] { parse_sexp(""); }) == ErrorCode::ParseError);
  CHECK(error_of([] { parse_sexp("(a) (b)"); }) == ErrorCode::ParseError);
}

TEST_CASE("parse_signature examples") {
  const auto s = parse_signature("(signature (nullary bool 2) (formers unit pi))");
  CHECK(s.nullary.size() == 1);
  CHECK(s.formers.size() == 2);
  CHECK_FALSE(s.nbad);
  const auto empty = parse_signature("(signature)");
  CHECK(empty.nullary.empty());
  CHECK(empty.formers.empty());
  CHECK(error_of([] { parse_signature("(signature (nullary bool 2) (nullary bool 3))"); }) ==
        ErrorCode::DuplicateName);
  CHECK(error_of([] { parse_signature("(signature (formers unit glue))"); }) == ErrorCode::UnknownFormer);
  CHECK(error_of([] { parse_signature("(signature (formers nbad))"); }) == ErrorCode::UnknownFormer);
  CHECK(error_of([] { parse_signature("(signature (nullary bool -2))"); }) == ErrorCode::ParseError);
  CHECK(error_of([] { parse_signature("(signature (colors red))"); }) == ErrorCode::ParseError);
  CHECK(error_of([] { parse_signature("(sig)"); }) == ErrorCode::ParseError);
  CHECK(parse_signature("(signature (flags nbad))").nbad);
}

TEST_CASE("make_signature enables the nullary former") {
  const auto sig = sig_from("(signature (nullary bool 2) (formers unit))");
  CHECK(sig->enabled(Former::N));
  CHECK_FALSE(sig->enabled(Former::NBad));
  CHECK(sig_from("(signature (flags nbad))")->enabled(Former::NBad));
}

TEST_CASE("parse_expr examples") {
  const auto sig = sig_from(kFull);
  const Code pi = parse_expr("(pi (n bool) ((unit) (unit)))", *sig);
  CHECK(pi == CPi(CN("bool"), {CUnit(), CUnit()}));
  CHECK(error_of([&] { parse_expr("(id (n bool) 0 2)", *sig); }) == ErrorCode::ElementOutOfRange);
  const Code po = parse_expr("(po0 (unit) (n bool) (n bool) (0) (0))", *sig);
  CHECK(po == CPo0(CUnit(), CN("bool"), CN("bool"), {0}, {0}));
  CHECK(el(*sig, po).size == 3);
}

TEST_CASE("parse_expr errors") {
  const auto sig = sig_from(kFull);
  const auto bad = [&](const char* text) { return error_of([&] { parse_expr(text, *sig); }); };
  CHECK(bad("(pi (n bool) ((unit)))") == ErrorCode::ArityMismatch);
  CHECK(bad("(sum (unit))") == ErrorCode::ArityMismatch);
  CHECK(bad("(unit (unit))") == ErrorCode::ArityMismatch);
  CHECK(bad("(po0 (unit) (n bool) (n bool) (0 1) (0))") == ErrorCode::ArityMismatch);
  CHECK(bad("(po0 (unit) (n bool) (n bool) (2) (0))") == ErrorCode::ElementOutOfRange);
  CHECK(bad("(n nat)") == ErrorCode::ParseError);
  CHECK(bad("(nbad bool)") == ErrorCode::ParseError);
  CHECK(bad("(glue (unit))") == ErrorCode::ParseError);
  CHECK(bad("(id (n bool) 0 x)") == ErrorCode::ParseError);
  CHECK(bad("unit") == ErrorCode::ParseError);
  const auto small = sig_from("(signature (nullary bool 2) (formers unit))");
  CHECK(error_of([&] { parse_expr("(pi (n bool) ((unit) (unit)))", *small); }) == ErrorCode::ParseError);
  const auto with_bad = sig_from("(signature (nullary bool 2) (flags nbad))");
  CHECK(parse_expr("(nbad bool)", *with_bad) == CNBad("bool"));
}

TEST_CASE("parse after print is the identity") {
  const auto sig = sig_from(kFull);
  for (const Code& c : enumerate_codes(*sig, Budget{4, 6})) CHECK(parse_expr(to_string(c), *sig) == c);
}

TEST_CASE("parse_container") {
  const auto t = parse_container(
      "(container (labels a b)\n"
      "  (shape leaf a)\n"
      "  (shape node b (left a) (right b)))");
  CHECK(t.num_labels() == 2);
  CHECK(t.num_shapes() == 2);
  CHECK(t.target(t.shape(1)) == 1);
  CHECK(t.source(t.shape(1), 0) == 0);
  CHECK(error_of([] { parse_container("(container (labels a a))"); }) == ErrorCode::DuplicateName);
  CHECK(error_of([] { parse_container("(container (labels a) (shape s a (p)))"); }) == ErrorCode::ParseError);
}

TEST_CASE("report JSON schema") {
  VerifyReport r;
  r.suite = "truncation";
  r.pred = "isprop";
  r.cases = 3;
  r.fail("x", "y", "z");
  const auto j = to_json(r);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"suite", "pred", "cases", "vacuous", "failure_count", "failures", "notes",
                                         "seed", "elapsed_ms", "version"});
  CHECK(j["failures"][0]["inputs"] == "x");
  CHECK(j["failures"][0]["expected"] == "y");
  CHECK(j["failures"][0]["got"] == "z");
}

TEST_CASE("read_file reports missing files") {
  CHECK(error_of([] { read_file("/nonexistent/file.vk"); }) == ErrorCode::PreconditionViolated);
}
