#include <random>

#include "doctest.h"
#include "vk/error.hpp"
#include "vk/universe.hpp"
#include "vk/wtrees.hpp"

using namespace vk;

namespace {

using Row = FiniteContainerTable::Row;

// Labels a, b. Leaves x, y over a; node n over b with one child over a.
std::shared_ptr<FiniteContainerTable> small_table() {
  return std::make_shared<FiniteContainerTable>(
      std::vector<std::string>{"a", "b"},
      std::vector<Row>{Row{"x", "a", {}}, Row{"y", "a", {}}, Row{"n", "b", {{"c", "a"}}}});
}

WTree leaf(int row) { return WTree{Shape{{row}}, {}}; }

const NullarySignature kBool({{"bool", 2}});

}  // namespace

TEST_CASE("well_formed") {
  const auto t = small_table();
  CHECK(well_formed(*t, leaf(0)));
  CHECK(well_formed(*t, WTree{Shape{{2}}, {leaf(1)}}));
  CHECK_FALSE(well_formed(*t, WTree{Shape{{2}}, {WTree{Shape{{2}}, {leaf(0)}}}}));
  CHECK_FALSE(well_formed(*t, WTree{Shape{{2}}, {}}));
  CHECK_FALSE(well_formed(*t, leaf(7)));

  // Pi over bool with unit fibers: key [pi, 2, 1, 1], children bool, unit, unit.
  const VSignature v(kBool, {Former::N, Former::Unit, Former::Pi});
  const WTree bool_leaf{Shape{{0, 0}}, {}};
  const WTree unit_leaf{Shape{{1}}, {}};
  CHECK(well_formed(v, WTree{Shape{{5, 2, 1, 1}}, {bool_leaf, unit_leaf, unit_leaf}}));
  CHECK_FALSE(well_formed(v, WTree{Shape{{5, 2, 1, 1}}, {unit_leaf, unit_leaf, unit_leaf}}));
}

TEST_CASE("forest hash-consing") {
  Forest f(small_table());
  const TreeId a = f.intern(WTree{Shape{{2}}, {leaf(0)}});
  const TreeId b = f.intern(WTree{Shape{{2}}, {leaf(0)}});
  CHECK(a == b);
  CHECK(f.depth(a) == 2);
  CHECK(f.children(a)[0] < a);
  CHECK(f.tree(a) == WTree{Shape{{2}}, {leaf(0)}});
  CHECK_THROWS_AS(f.node(Shape{{2}}, {a}), Error);
}

TEST_CASE("enumerate_trees") {
  Forest f(small_table());
  const std::vector<Index> idx{0, 1};
  CHECK(enumerate_trees(f, idx, 1).size() == 2);
  CHECK(enumerate_trees(f, idx, 2).size() == 4);
  CHECK_THROWS_AS(enumerate_trees(f, idx, 2, 3), Error);
}

TEST_CASE("eq_witnesses examples") {
  const auto t = small_table();
  const IdxPath refl;
  // P true at the index: exactly the collapsed witness.
  const auto all_a = PredOnIndex::only(0, "a");
  const auto c = eq_witnesses(t, all_a, refl, leaf(0), leaf(1));
  REQUIRE(c.size() == 1);
  CHECK(c.items[0] == Witness::collapsed());
  // P never: a leaf with itself along refl has exactly one witness.
  CHECK(eq_witnesses(t, PredOnIndex::never(), refl, leaf(0), leaf(0)).size() == 1);
  CHECK(eq_witnesses(t, PredOnIndex::never(), refl, leaf(0), leaf(1)).empty());
  // Shapes from different coproduct tags.
  const auto cp = coproduct(t, t);
  const WTree l{Shape{{0, 0}}, {}};
  const WTree r{Shape{{1, 0}}, {}};
  CHECK(eq_witnesses(cp, PredOnIndex::never(), refl, l, r).empty());
  CHECK(eq_witnesses(cp, PredOnIndex::never(), refl, l, l).size() == 1);
}

TEST_CASE("eq_witnesses rejects a non-path") {
  const VSignature v(kBool, {Former::N});
  const auto sig = std::make_shared<VSignature>(v);
  const WTree b{Shape{{0, 0}}, {}};
  CHECK_THROWS_AS(eq_witnesses(sig, PredOnIndex::never(), IdxPath::identity(3), b, b), Error);
}

TEST_CASE("encode_refl") {
  const auto t = small_table();
  const Witness w = encode_refl(t, PredOnIndex::never(), leaf(0));
  CHECK(w.kind == Witness::Kind::Inr);
  CHECK(w.children.empty());
  CHECK(w.ident == t->refl_ident(Shape{{0}}));
  CHECK(encode_refl(t, PredOnIndex::only(0, "a"), leaf(0)) == Witness::collapsed());

  const WTree deep{Shape{{2}}, {leaf(1)}};
  const Witness d = encode_refl(t, PredOnIndex::never(), deep);
  const auto ws = eq_witnesses(t, PredOnIndex::never(), IdxPath{}, deep, deep);
  REQUIRE(ws.size() == 1);
  CHECK(ws.items[0] == d);
}

TEST_CASE("tree_eq_oracle") {
  const auto t = small_table();
  const IdxPath refl;
  const WTree deep{Shape{{2}}, {leaf(1)}};
  CHECK(tree_eq_oracle(t, PredOnIndex::never(), 2, refl, deep, deep));
  CHECK_FALSE(tree_eq_oracle(t, PredOnIndex::never(), 2, refl, leaf(0), leaf(1)));
  CHECK(tree_eq_oracle(t, PredOnIndex::only(0, "a"), 2, refl, leaf(0), leaf(1)));
  // Congruence lifts the collapse at a to the node over b.
  CHECK(tree_eq_oracle(t, PredOnIndex::only(0, "a"), 2, refl, deep, WTree{Shape{{2}}, {leaf(0)}}));
  CHECK_FALSE(tree_eq_oracle(t, PredOnIndex::never(), 2, refl, deep, WTree{Shape{{2}}, {leaf(0)}}));
  CHECK_THROWS_AS(tree_eq_oracle(std::make_shared<VSignature>(kBool, std::set<Former>{Former::N}),
                                 PredOnIndex::never(), 1, refl, WTree{Shape{{0, 0}}, {}}, WTree{Shape{{0, 0}}, {}}),
                  Error);
}

TEST_CASE("verify_encode_decode on fixed tables") {
  const auto t = small_table();
  const auto never = verify_encode_decode(t, PredOnIndex::never(), 2);
  CHECK(never.passed());
  CHECK(never.cases > 0);

  const auto at_a = verify_encode_decode(t, PredOnIndex::only(0, "a"), 2);
  CHECK(at_a.passed());
  Forest f(t);
  const std::vector<Index> idx{0, 1};
  const auto trees = enumerate_trees(f, idx, 2);
  EqEngine engine(f, PredOnIndex::only(0, "a"));
  for (TreeId a : trees)
    for (TreeId b : trees)
      if (f.index(a) == 0 && f.index(b) == 0) CHECK(engine.count(IdxPath{}, a, b) == 1);

  const auto cp = coproduct(t, t);
  CHECK(verify_encode_decode(cp, PredOnIndex::never(), 2).passed());
  Forest g(cp);
  const TreeId l = g.intern(WTree{Shape{{0, 0}}, {}});
  const TreeId r = g.intern(WTree{Shape{{1, 0}}, {}});
  EqEngine e2(g, PredOnIndex::never());
  CHECK(e2.total(l, r) == 0);
  CHECK_FALSE(tree_eq_oracle(cp, PredOnIndex::never(), 2, IdxPath{}, g.tree(l), g.tree(r)));
}

TEST_CASE("verify_encode_decode on random tables") {
  std::mt19937_64 rng(42);
  for (int k = 0; k < 10; ++k) {
    const auto t = std::make_shared<FiniteContainerTable>(random_table(rng));
    CHECK(verify_encode_decode(t, PredOnIndex::never(), 2).passed());
    CHECK(verify_encode_decode(t, PredOnIndex::only(0, "first"), 2).passed());
  }
}

TEST_CASE("engine agrees with saturation over a small universe of codes") {
  const NullarySignature ns({{"bool", 2}, {"tri", 3}});
  const auto sig = std::make_shared<VSignature>(
      ns, std::set<Former>{Former::N, Former::Unit, Former::Empty, Former::Sum, Former::Sigma, Former::Pi, Former::Id,
                           Former::Po0});
  std::vector<TreeId> universe;
  Universe u(sig);
  for (const Code& c : enumerate_codes(*sig, Budget{3, 3})) universe.push_back(u.intern(c));
  std::sort(universe.begin(), universe.end());
  universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
  for (const char* pred : {"none", "isprop", "iscontr"}) {
    const PredicateSpec spec = PredicateSpec::parse(pred);
    const PredOnIndex on = spec.on_index();
    SaturationOracle oracle(u.forest(), on, universe);
    EqEngine& engine = u.engine(spec);
    std::uint64_t related = 0;
    for (TreeId a : universe)
      for (TreeId b : universe) {
        for (const IdxPath& p : sig->idx_paths(u.forest().index(a), u.forest().index(b))) {
          const std::uint64_t n = engine.count(p, a, b);
          CHECK(n <= 1);
          CHECK((n > 0) == oracle.related(p, a, b));
          related += n;
        }
      }
    CHECK(related >= universe.size());
  }
}
