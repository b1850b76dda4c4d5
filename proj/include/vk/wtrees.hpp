#pragma once

// W-trees over a container signature, their equality witness sets (with the
// partial-propositional collapse at indices satisfying P), the reflexivity
// encoder, and an independent oracle that saturates a congruence over an
// enumerated finite set of trees.

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "vk/container.hpp"
#include "vk/report.hpp"

namespace vk {

struct WTree {
  Shape shape;
  std::vector<WTree> children;  // one per position of `shape`

  friend bool operator==(const WTree&, const WTree&) = default;
};

/// True iff every shape is valid, arities match, and every child's index
/// equals the source of its position.
bool well_formed(const ContainerSig& sig, const WTree& t);

/// Renders a tree as nested shape names.
std::string to_string(const ContainerSig& sig, const WTree& t);

using TreeId = std::uint32_t;

/// Hash-consed store of well-formed trees: structurally equal trees get the
/// same id, and children always have smaller ids than their parent.
class Forest {
 public:
  explicit Forest(SigPtr sig);

  const ContainerSig& sig() const { return *sig_; }
  const SigPtr& sig_ptr() const { return sig_; }

  /// Throws PreconditionViolated on an invalid shape, wrong arity or a child
  /// whose index differs from the position's source.
  TreeId node(const Shape& shape, std::vector<TreeId> children);
  TreeId intern(const WTree& t);
  WTree tree(TreeId id) const;

  const Shape& shape(TreeId id) const { return nodes_[id].shape; }
  std::span<const TreeId> children(TreeId id) const { return nodes_[id].children; }
  Index index(TreeId id) const { return nodes_[id].index; }
  int depth(TreeId id) const { return nodes_[id].depth; }
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Shape shape;
    std::vector<TreeId> children;
    Index index;
    int depth;
  };
  struct KeyHash {
    std::size_t operator()(const std::vector<int>& v) const noexcept;
  };

  SigPtr sig_;
  std::vector<Node> nodes_;
  std::unordered_map<std::vector<int>, TreeId, KeyHash> ids_;
};

/// All well-formed trees of depth <= `depth` (a leaf has depth 1) whose
/// shapes come from sig.shapes_over(indices), ordered by depth, then shape,
/// then children. The result is closed under subtrees.
std::vector<TreeId> enumerate_trees(Forest& forest, std::span<const Index> indices, int depth,
                                    std::size_t cap = 2000);

/// A decidable predicate on indices; it must be invariant along index paths.
struct PredOnIndex {
  std::string name;
  std::function<bool(Index)> holds;

  static PredOnIndex never();
  static PredOnIndex only(Index i, std::string name);
};

struct Witness {
  enum class Kind { Collapsed, Inr };

  Kind kind = Kind::Collapsed;
  ShapeIdent ident;               // meaningful for Inr only
  std::vector<Witness> children;  // per position of the first tree's shape

  static Witness collapsed() { return {}; }

  friend bool operator==(const Witness&, const Witness&) = default;
  friend auto operator<=>(const Witness&, const Witness&) = default;
};

std::string to_string(const Witness& w);

struct WitnessSet {
  IdxPath path;
  std::vector<Witness> items;

  std::size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }
  bool contains(const Witness& w) const;
};

/// Number of witnesses per index path, for the paths with a nonzero count,
/// in the order the paths were first produced.
struct PathCounts {
  std::vector<IdxPath> paths;
  std::vector<std::uint64_t> counts;

  std::uint64_t at(const IdxPath& p) const;
  std::uint64_t total() const;
  void add(const IdxPath& p, std::uint64_t n);
};

/// Computes equality witness sets for trees of one forest under one
/// predicate. Child results are memoized per (t0, t1); the top-level
/// entry points `total` and `counts_fresh` do not store their own result.
class EqEngine {
 public:
  EqEngine(const Forest& forest, PredOnIndex pred);

  const Forest& forest() const { return forest_; }
  const PredOnIndex& pred() const { return pred_; }
  bool collapses(Index i) const;

  /// Witness counts over every path index(a) -> index(b), memoized.
  const PathCounts& counts(TreeId a, TreeId b);
  PathCounts counts_fresh(TreeId a, TreeId b);
  std::uint64_t count(const IdxPath& p, TreeId a, TreeId b);
  /// Σ over all paths; same as counts_fresh(a, b).total().
  std::uint64_t total(TreeId a, TreeId b);

  /// The explicit witness set over p. Throws PreconditionViolated if p is
  /// not a path index(a) -> index(b).
  WitnessSet witnesses(const IdxPath& p, TreeId a, TreeId b);
  /// Every (path, witness), paths in idx_paths order.
  std::vector<std::pair<IdxPath, Witness>> all_witnesses(TreeId a, TreeId b);

  Witness encode_refl(TreeId t) const;

  std::size_t memo_size() const { return memo_.size(); }

 private:
  using WitnessTable = std::map<IdxPath, std::vector<Witness>>;

  // Open-addressing map from packed tree pairs to slots of `values`.
  class PairMemo {
   public:
    const PathCounts* find(std::uint64_t key) const;
    const PathCounts& insert(std::uint64_t key, PathCounts value);
    std::size_t size() const { return values_.size(); }

   private:
    static constexpr std::uint64_t kEmpty = ~std::uint64_t{0};
    void grow();

    std::vector<std::uint64_t> keys_;
    std::vector<std::uint32_t> slots_;
    std::deque<PathCounts> values_;
  };

  PathCounts compute(TreeId a, TreeId b);
  const WitnessTable& witness_table(TreeId a, TreeId b);
  static std::uint64_t pair_key(TreeId a, TreeId b) { return (std::uint64_t{a} << 32) | b; }

  const Forest& forest_;
  PredOnIndex pred_;
  mutable std::vector<std::int8_t> pred_cache_;
  PairMemo memo_;
  std::unordered_map<std::uint64_t, WitnessTable> witness_memo_;
};

/// Least relation on (t0, p, t1) over a subtree-closed set of trees that is
/// closed under congruence through every shape identification, relates all
/// pairs over P-indices along every path, and is symmetric and transitive.
/// Computed by fixpoint iteration without consulting EqEngine.
class SaturationOracle {
 public:
  SaturationOracle(const Forest& forest, const PredOnIndex& pred, std::vector<TreeId> universe,
                   std::uint64_t max_facts = 5'000'000);

  bool related(const IdxPath& p, TreeId a, TreeId b) const;
  bool related_any(TreeId a, TreeId b) const;
  std::size_t facts() const { return facts_; }
  int rounds() const { return rounds_; }

 private:
  bool add(TreeId a, const IdxPath& p, TreeId b);

  std::map<std::pair<TreeId, TreeId>, std::set<IdxPath>> rel_;
  std::uint64_t max_facts_;
  std::size_t facts_ = 0;
  int rounds_ = 0;
};

// Value-level entry points. Each builds a private forest and engine.

WitnessSet eq_witnesses(const SigPtr& sig, const PredOnIndex& pred, const IdxPath& p, const WTree& t0,
                        const WTree& t1);
Witness encode_refl(const SigPtr& sig, const PredOnIndex& pred, const WTree& t);
/// Oracle over all trees of depth <= `depth` on every label of a label-indexed
/// signature. Throws PreconditionViolated for other index types.
bool tree_eq_oracle(const SigPtr& sig, const PredOnIndex& pred, int depth, const IdxPath& p, const WTree& t0,
                    const WTree& t1);

/// For every pair of trees up to `depth` and every path: the witness set has
/// at most one element, is nonempty exactly when the oracle relates the pair,
/// contains encode_refl on the diagonal, and (when P never holds) is
/// nonempty exactly when the trees are structurally equal along p.
VerifyReport verify_encode_decode(const SigPtr& sig, const PredOnIndex& pred, int depth,
                                  std::size_t cap = 2000);

}  // namespace vk
