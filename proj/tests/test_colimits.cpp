#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "vk/colimits.hpp"
#include "vk/error.hpp"

using namespace vk;

namespace {

Span span_of(int a, int b, int c, std::vector<int> f, std::vector<int> g) {
  return Span({a}, {b}, {c}, ElemMap({a}, {b}, std::move(f)), ElemMap({a}, {c}, std::move(g)));
}

// Every span with all three sizes <= n.
template <class Fn>
void for_each_span(int n, Fn&& fn) {
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b)
      for (int c = 0; c <= n; ++c)
        for (const auto& f : oracle::all_maps(a, b))
          for (const auto& g : oracle::all_maps(a, c)) fn(span_of(a, b, c, f, g));
}

}  // namespace

TEST_CASE("pushout examples") {
  CHECK(pushout(span_of(0, 1, 1, {}, {})).D.size == 2);
  CHECK(pushout(span_of(1, 1, 1, {0}, {0})).D.size == 1);
  CHECK(pushout(span_of(1, 2, 2, {0}, {0})).D.size == 3);
}

TEST_CASE("pushout size agrees with the relaxation oracle") {
  int spans = 0;
  for_each_span(3, [&](const Span& s) {
    ++spans;
    CHECK(pushout(s).D.size == oracle::pushout_size(s));
  });
  CHECK(spans > 1000);
}

TEST_CASE("pushout numbering is by first occurrence, B then C") {
  const auto po = pushout(span_of(1, 2, 2, {1}, {0}));
  CHECK(po.inl(0) == 0);
  CHECK(po.inl(1) == 1);
  CHECK(po.inr(0) == 1);
  CHECK(po.inr(1) == 2);
}

TEST_CASE("pushout is jointly surjective and commutes") {
  for_each_span(2, [&](const Span& s) {
    const auto po = pushout(s);
    std::vector<bool> hit(static_cast<std::size_t>(po.D.size), false);
    for (int b = 0; b < s.B.size; ++b) hit[static_cast<std::size_t>(po.inl(b))] = true;
    for (int c = 0; c < s.C.size; ++c) hit[static_cast<std::size_t>(po.inr(c))] = true;
    for (bool h : hit) CHECK(h);
    for (int a = 0; a < s.A.size; ++a) CHECK(po.inl(s.f(a)) == po.inr(s.g(a)));
  });
}

TEST_CASE("pushout is a coequalizer") {
  for_each_span(2, [&](const Span& s) {
    const auto po = pushout(s);
    for (int z = 0; z <= 4; ++z)
      for (const auto& u : oracle::all_maps(s.B.size, z))
        for (const auto& v : oracle::all_maps(s.C.size, z)) {
          bool commutes = true;
          for (int a = 0; a < s.A.size; ++a)
            commutes = commutes && u[static_cast<std::size_t>(s.f(a))] == v[static_cast<std::size_t>(s.g(a))];
          if (commutes) CHECK(oracle::mediating_maps(po, u, v, z) == 1);
        }
  });
}

TEST_CASE("pushout along a mono has |B| + |C| - |A| elements") {
  for_each_span(3, [&](const Span& s) {
    if (!is_mono(s.f)) return;
    CHECK(pushout(s).D.size == s.B.size + s.C.size - s.A.size);
  });
}

TEST_CASE("join") {
  for (int e = 0; e <= 4; ++e) {
    CHECK(join({0}, {e}).size == e);
    CHECK(join({e}, {0}).size == e);
  }
  // Joining with a contractible type is contractible.
  for (int e = 1; e <= 4; ++e) CHECK(join({1}, {e}).size == 1);
  CHECK(join({2}, {3}).size == 1);
  for (int x = 0; x <= 4; ++x)
    for (int y = 0; y <= 4; ++y) {
      CHECK(join({x}, {y}) == join({y}, {x}));
      CHECK(join({x}, {y}).size == oracle::pushout_size(product_span({x}, {y})));
    }
}

TEST_CASE("is_mono") {
  CHECK(is_mono(ElemMap::identity({3})));
  CHECK_FALSE(is_mono(ElemMap({2}, {1}, {0, 0})));
  CHECK(is_mono(ElemMap({0}, {4}, {})));
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; b <= 3; ++b)
      for (const auto& f : oracle::all_maps(a, b)) CHECK(is_mono(ElemMap({a}, {b}, f)) == oracle::injective(f));
}

TEST_CASE("check_pushout_mono") {
  CHECK(check_pushout_mono(span_of(1, 2, 2, {0}, {0})).passed());
  CHECK(check_pushout_mono(span_of(0, 3, 2, {}, {})).passed());
  CHECK_THROWS_AS(check_pushout_mono(span_of(2, 1, 1, {0, 0}, {0, 0})), Error);
  for_each_span(3, [&](const Span& s) {
    if (is_mono(s.f)) CHECK(check_pushout_mono(s).passed());
  });
}

TEST_CASE("check_pushout_mono on random spans") {
  std::mt19937_64 rng(7);
  for (int n = 0; n < 300; ++n) {
    const int b = static_cast<int>(rng() % 7);
    const int a = static_cast<int>(rng() % static_cast<std::uint64_t>(b + 1));
    const int c = 1 + static_cast<int>(rng() % 6);
    std::vector<int> perm(static_cast<std::size_t>(b));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> g(static_cast<std::size_t>(a));
    for (int& y : g) y = static_cast<int>(rng() % static_cast<std::uint64_t>(c));
    const Span s = span_of(a, b, c, {perm.begin(), perm.begin() + a}, g);
    CHECK(check_pushout_mono(s).passed());
  }
}

TEST_CASE("check_join_prop") {
  const auto j01 = check_join_prop({0}, {1});
  CHECK(j01.join.size == 1);
  CHECK(j01.outcome == Outcome::Pass);
  CHECK(check_join_prop({1}, {1}).join.size == 1);
  CHECK(check_join_prop({1}, {1}).outcome == Outcome::Pass);
  const auto j00 = check_join_prop({0}, {0});
  CHECK(j00.join.size == 0);
  CHECK(j00.outcome == Outcome::Pass);
  const auto j23 = check_join_prop({2}, {3});
  CHECK_FALSE(j23.hypothesis);
  CHECK(j23.outcome == Outcome::Vacuous);
}

TEST_CASE("check_pushout_mono_trunc") {
  const Span one = span_of(1, 1, 1, {0}, {0});
  const auto r = check_pushout_mono_trunc(one, -1, ElemMap({1}, {1}, {0}));
  CHECK(r.outcome == Outcome::Pass);
  CHECK(r.D.size == 1);

  CHECK(check_pushout_mono_trunc(span_of(0, 1, 1, {}, {}), -1).outcome == Outcome::Skipped);
  CHECK_THROWS_AS(check_pushout_mono_trunc(one, -1), Error);
  CHECK_THROWS_AS(check_pushout_mono_trunc(one, -1, ElemMap({2}, {1}, {0, 0})), Error);
  CHECK_THROWS_AS(check_pushout_mono_trunc(one, 1, ElemMap({1}, {1}, {0})), Error);

  for_each_span(3, [&](const Span& s) {
    if (!is_mono(s.f)) return;
    CHECK(check_pushout_mono_trunc(s, 0).outcome == Outcome::Vacuous);
    const int bc = s.B.size * s.C.size;
    if (bc > 0 && s.A.size == 0) return;
    const auto t = check_pushout_mono_trunc(s, -1, ElemMap({bc}, s.A, std::vector<int>(static_cast<std::size_t>(bc), 0)));
    if (is_prop(s.B) && is_prop(s.C))
      CHECK(t.outcome == Outcome::Pass);
    else
      CHECK(t.outcome == Outcome::Vacuous);
  });
}
