#include "doctest.h"
#include "oracles.hpp"
#include "vk/error.hpp"
#include "vk/fincore.hpp"

using namespace vk;

TEST_CASE("enum_maps counts") {
  CHECK(enum_maps({2}, {3}).size() == 9);
  CHECK(enum_maps({0}, {5}).size() == 1);
  CHECK(enum_maps({2}, {0}).empty());
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; b <= 3; ++b) {
      const auto maps = enum_maps({a}, {b});
      const auto ref = oracle::all_maps(a, b);
      REQUIRE(maps.size() == ref.size());
      for (std::size_t k = 0; k < maps.size(); ++k)
        CHECK(std::vector<int>(maps[k].targets().begin(), maps[k].targets().end()) == ref[k]);
    }
}

TEST_CASE("enum_maps respects the cap") {
  CHECK_THROWS_AS(enum_maps({20}, {4}), Error);
}

TEST_CASE("enum_bijs counts and order") {
  CHECK(enum_bijs({2}, {2}).size() == 2);
  CHECK(enum_bijs({1}, {2}).empty());
  CHECK(enum_bijs({3}, {3}).size() == 6);
  CHECK(enum_bijs({0}, {0}).size() == 1);
  for (int n = 0; n <= 5; ++n) {
    const auto bijs = enum_bijs({n}, {n});
    CHECK(bijs.size() == oracle::factorial(n));
    std::size_t injective = 0;
    for (const auto& m : oracle::all_maps(n, n)) injective += oracle::injective(m);
    CHECK(bijs.size() == injective);
    for (std::size_t k = 1; k < bijs.size(); ++k) CHECK(bijs[k - 1] < bijs[k]);
  }
  CHECK_THROWS_AS(enum_bijs({7}, {7}), Error);
}

TEST_CASE("trunc_level") {
  CHECK(trunc_level({1}) == TruncLevel::Contractible);
  CHECK(trunc_level({0}) == TruncLevel::Prop);
  CHECK(trunc_level({2}) == TruncLevel::Set);
  CHECK(is_prop({0}));
  CHECK_FALSE(is_contr({0}));
}

TEST_CASE("bijection laws") {
  const Bij id3 = Bij::identity({3});
  for (const Bij& p : enum_bijs({3}, {3})) {
    CHECK(compose_bij(id3, p) == p);
    CHECK(compose_bij(p, id3) == p);
    CHECK(compose_bij(p, invert_bij(p)).is_identity());
    CHECK(compose_bij(invert_bij(p), p).is_identity());
  }
  const Bij swap = Bij::from_perm({1, 0});
  CHECK(compose_bij(swap, swap) == Bij::identity({2}));
  CHECK_THROWS_AS(Bij::from_perm({0, 0}), Error);
  CHECK_THROWS_AS(compose_bij(Bij::identity({2}), Bij::identity({3})), Error);
}

TEST_CASE("compose applies first then second") {
  const Bij p = Bij::from_perm({1, 2, 0});
  const Bij q = Bij::from_perm({0, 2, 1});
  const Bij pq = compose_bij(p, q);
  for (int x = 0; x < 3; ++x) CHECK(pq(x) == q(p(x)));
}

TEST_CASE("factorial overflow") {
  CHECK(factorial(5) == 120);
  CHECK(factorial(20) == 2432902008176640000ULL);
  CHECK_THROWS_AS(factorial(21), Error);
}
