#include "vk/wtrees.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "vk/error.hpp"

namespace vk {

bool well_formed(const ContainerSig& sig, const WTree& t) {
  if (!sig.valid_shape(t.shape)) return false;
  const int n = sig.num_positions(t.shape);
  if (static_cast<int>(t.children.size()) != n) return false;
  for (int p = 0; p < n; ++p) {
    const WTree& c = t.children[static_cast<std::size_t>(p)];
    if (!well_formed(sig, c)) return false;
    if (sig.target(c.shape) != sig.source(t.shape, p)) return false;
  }
  return true;
}

std::string to_string(const ContainerSig& sig, const WTree& t) {
  if (t.children.empty()) return sig.shape_name(t.shape);
  std::string s = "(" + sig.shape_name(t.shape);
  for (const WTree& c : t.children) s += " " + to_string(sig, c);
  return s + ")";
}

// ---------------------------------------------------------------------------
// Forest

std::size_t Forest::KeyHash::operator()(const std::vector<int>& v) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (int x : v) {
    h ^= static_cast<std::uint32_t>(x);
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

Forest::Forest(SigPtr sig) : sig_(std::move(sig)) {}

TreeId Forest::node(const Shape& shape, std::vector<TreeId> children) {
  const ContainerSig& sig = *sig_;
  if (!sig.valid_shape(shape)) throw Error(ErrorCode::PreconditionViolated, "invalid shape");
  const int n = sig.num_positions(shape);
  if (static_cast<int>(children.size()) != n)
    throw Error(ErrorCode::PreconditionViolated, "shape " + sig.shape_name(shape) + " expects " +
                                                     std::to_string(n) + " children");
  int depth = 1;
  for (int p = 0; p < n; ++p) {
    const TreeId c = children[static_cast<std::size_t>(p)];
    if (c >= nodes_.size()) throw Error(ErrorCode::PreconditionViolated, "unknown tree id");
    if (nodes_[c].index != sig.source(shape, p))
      throw Error(ErrorCode::PreconditionViolated, "child " + std::to_string(p) + " of " + sig.shape_name(shape) +
                                                       " has index " + sig.index_name(nodes_[c].index) +
                                                       ", expected " + sig.index_name(sig.source(shape, p)));
    depth = std::max(depth, nodes_[c].depth + 1);
  }
  std::vector<int> key;
  key.reserve(1 + shape.key.size() + children.size());
  key.push_back(static_cast<int>(shape.key.size()));
  key.insert(key.end(), shape.key.begin(), shape.key.end());
  for (TreeId c : children) key.push_back(static_cast<int>(c));
  if (const auto it = ids_.find(key); it != ids_.end()) return it->second;
  const auto id = static_cast<TreeId>(nodes_.size());
  nodes_.push_back({shape, std::move(children), sig.target(shape), depth});
  ids_.emplace(std::move(key), id);
  return id;
}

TreeId Forest::intern(const WTree& t) {
  std::vector<TreeId> kids;
  kids.reserve(t.children.size());
  for (const WTree& c : t.children) kids.push_back(intern(c));
  return node(t.shape, std::move(kids));
}

WTree Forest::tree(TreeId id) const {
  WTree t{nodes_.at(id).shape, {}};
  for (TreeId c : nodes_[id].children) t.children.push_back(tree(c));
  return t;
}

std::vector<TreeId> enumerate_trees(Forest& forest, std::span<const Index> indices, int depth, std::size_t cap) {
  const ContainerSig& sig = forest.sig();
  const std::vector<Shape> shapes = sig.shapes_over(indices);
  std::vector<TreeId> out;
  std::set<TreeId> seen;
  for (int level = 1; level <= depth; ++level) {
    // Trees of depth < level, grouped by index, in enumeration order.
    std::map<Index, std::vector<TreeId>> by_index;
    for (TreeId t : out) by_index[forest.index(t)].push_back(t);
    std::vector<TreeId> fresh;
    for (const Shape& s : shapes) {
      const int n = sig.num_positions(s);
      if ((n == 0) != (level == 1)) continue;
      std::vector<const std::vector<TreeId>*> pools;
      bool empty = false;
      for (int p = 0; p < n; ++p) {
        const auto it = by_index.find(sig.source(s, p));
        if (it == by_index.end()) {
          empty = true;
          break;
        }
        pools.push_back(&it->second);
      }
      if (empty) continue;
      std::vector<std::size_t> digit(static_cast<std::size_t>(n), 0);
      while (true) {
        std::vector<TreeId> kids;
        for (int p = 0; p < n; ++p) kids.push_back((*pools[static_cast<std::size_t>(p)])[digit[static_cast<std::size_t>(p)]]);
        const TreeId id = forest.node(s, std::move(kids));
        if (forest.depth(id) == level && seen.insert(id).second) {
          fresh.push_back(id);
          if (out.size() + fresh.size() > cap)
            throw Error(ErrorCode::EnumerationTooLarge,
                        "more than " + std::to_string(cap) + " trees up to depth " + std::to_string(depth));
        }
        int p = n - 1;
        while (p >= 0 && digit[static_cast<std::size_t>(p)] + 1 == pools[static_cast<std::size_t>(p)]->size())
          digit[static_cast<std::size_t>(p--)] = 0;
        if (p < 0) break;
        ++digit[static_cast<std::size_t>(p)];
      }
    }
    out.insert(out.end(), fresh.begin(), fresh.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Predicates, witnesses

PredOnIndex PredOnIndex::never() {
  return {"none", [](Index) { return false; }};
}

PredOnIndex PredOnIndex::only(Index i, std::string name) {
  return {std::move(name), [i](Index j) { return j == i; }};
}

std::string to_string(const Witness& w) {
  if (w.kind == Witness::Kind::Collapsed) return "collapsed";
  std::string s = "inr(" + w.ident.target_path.to_string();
  for (const Witness& c : w.children) s += " " + to_string(c);
  return s + ")";
}

bool WitnessSet::contains(const Witness& w) const { return std::find(items.begin(), items.end(), w) != items.end(); }

std::uint64_t PathCounts::at(const IdxPath& p) const {
  for (std::size_t k = 0; k < paths.size(); ++k)
    if (paths[k] == p) return counts[k];
  return 0;
}

std::uint64_t PathCounts::total() const { return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}); }

void PathCounts::add(const IdxPath& p, std::uint64_t n) {
  for (std::size_t k = 0; k < paths.size(); ++k)
    if (paths[k] == p) {
      counts[k] += n;
      return;
    }
  paths.push_back(p);
  counts.push_back(n);
}

// ---------------------------------------------------------------------------
// EqEngine

namespace {

std::size_t mix64(std::uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  return static_cast<std::size_t>(x);
}

}  // namespace

const PathCounts* EqEngine::PairMemo::find(std::uint64_t key) const {
  if (keys_.empty()) return nullptr;
  const std::size_t mask = keys_.size() - 1;
  for (std::size_t h = mix64(key) & mask;; h = (h + 1) & mask) {
    if (keys_[h] == key) return &values_[slots_[h]];
    if (keys_[h] == kEmpty) return nullptr;
  }
}

const PathCounts& EqEngine::PairMemo::insert(std::uint64_t key, PathCounts value) {
  if (2 * (values_.size() + 1) > keys_.size()) grow();
  const std::size_t mask = keys_.size() - 1;
  std::size_t h = mix64(key) & mask;
  while (keys_[h] != kEmpty && keys_[h] != key) h = (h + 1) & mask;
  if (keys_[h] == key) return values_[slots_[h]];
  keys_[h] = key;
  slots_[h] = static_cast<std::uint32_t>(values_.size());
  values_.push_back(std::move(value));
  return values_.back();
}

void EqEngine::PairMemo::grow() {
  const std::size_t cap = keys_.empty() ? 1024 : keys_.size() * 2;
  std::vector<std::uint64_t> keys(cap, kEmpty);
  std::vector<std::uint32_t> slots(cap, 0);
  for (std::size_t k = 0; k < keys_.size(); ++k) {
    if (keys_[k] == kEmpty) continue;
    std::size_t h = mix64(keys_[k]) & (cap - 1);
    while (keys[h] != kEmpty) h = (h + 1) & (cap - 1);
    keys[h] = keys_[k];
    slots[h] = slots_[k];
  }
  keys_ = std::move(keys);
  slots_ = std::move(slots);
}

EqEngine::EqEngine(const Forest& forest, PredOnIndex pred) : forest_(forest), pred_(std::move(pred)) {}

bool EqEngine::collapses(Index i) const {
  if (i >= 0 && static_cast<std::size_t>(i) < 64) {
    if (pred_cache_.size() <= static_cast<std::size_t>(i)) pred_cache_.resize(static_cast<std::size_t>(i) + 1, -1);
    auto& slot = pred_cache_[static_cast<std::size_t>(i)];
    if (slot < 0) slot = pred_.holds(i) ? 1 : 0;
    return slot == 1;
  }
  return pred_.holds(i);
}

PathCounts EqEngine::compute(TreeId a, TreeId b) {
  const ContainerSig& sig = forest_.sig();
  const Index ia = forest_.index(a);
  const Index ib = forest_.index(b);
  PathCounts out;
  if (collapses(ia)) {
    // Join with a true proposition: one point over every path.
    const auto paths = sig.idx_paths(ia, ib);
    out.paths.assign(paths.begin(), paths.end());
    out.counts.assign(paths.size(), 1);
    return out;
  }
  const auto ca = forest_.children(a);
  const auto cb = forest_.children(b);
  sig.for_each_ident(
      forest_.shape(a), forest_.shape(b),
      [&](int p0, int p1) -> std::span<const IdxPath> {
        const TreeId x = ca[static_cast<std::size_t>(p0)];
        const TreeId y = cb[static_cast<std::size_t>(p1)];
        if (collapses(forest_.index(x))) return sig.idx_paths(forest_.index(x), forest_.index(y));
        return counts(x, y).paths;
      },
      [&](const ShapeIdent& id) {
        std::uint64_t prod = 1;
        for (std::size_t p = 0; p < ca.size() && prod; ++p)
          prod *= count(id.src_paths[p], ca[p], cb[static_cast<std::size_t>(id.pos_match[p])]);
        if (prod) out.add(id.target_path, prod);
      });
  return out;
}

const PathCounts& EqEngine::counts(TreeId a, TreeId b) {
  const auto key = pair_key(a, b);
  if (const PathCounts* hit = memo_.find(key)) return *hit;
  return memo_.insert(key, compute(a, b));
}

PathCounts EqEngine::counts_fresh(TreeId a, TreeId b) {
  if (const PathCounts* hit = memo_.find(pair_key(a, b))) return *hit;
  return compute(a, b);
}

std::uint64_t EqEngine::count(const IdxPath& p, TreeId a, TreeId b) {
  if (collapses(forest_.index(a))) return 1;
  return counts(a, b).at(p);
}

std::uint64_t EqEngine::total(TreeId a, TreeId b) {
  const ContainerSig& sig = forest_.sig();
  const Index ia = forest_.index(a);
  const Index ib = forest_.index(b);
  if (collapses(ia)) return sig.idx_paths(ia, ib).size();
  const auto ca = forest_.children(a);
  const auto cb = forest_.children(b);
  std::uint64_t sum = 0;
  sig.for_each_ident(
      forest_.shape(a), forest_.shape(b),
      [&](int p0, int p1) -> std::span<const IdxPath> {
        const TreeId x = ca[static_cast<std::size_t>(p0)];
        const TreeId y = cb[static_cast<std::size_t>(p1)];
        if (collapses(forest_.index(x))) return sig.idx_paths(forest_.index(x), forest_.index(y));
        return counts(x, y).paths;
      },
      [&](const ShapeIdent& id) {
        std::uint64_t prod = 1;
        for (std::size_t p = 0; p < ca.size() && prod; ++p)
          prod *= count(id.src_paths[p], ca[p], cb[static_cast<std::size_t>(id.pos_match[p])]);
        sum += prod;
      });
  return sum;
}

const EqEngine::WitnessTable& EqEngine::witness_table(TreeId a, TreeId b) {
  const auto key = pair_key(a, b);
  if (const auto it = witness_memo_.find(key); it != witness_memo_.end()) return it->second;
  const ContainerSig& sig = forest_.sig();
  const Index ia = forest_.index(a);
  const Index ib = forest_.index(b);
  WitnessTable table;
  if (collapses(ia)) {
    for (const IdxPath& p : sig.idx_paths(ia, ib)) table[p] = {Witness::collapsed()};
  } else {
    const auto ca = forest_.children(a);
    const auto cb = forest_.children(b);
    sig.for_each_ident(
        forest_.shape(a), forest_.shape(b),
        [&](int p0, int p1) -> std::span<const IdxPath> {
          const TreeId x = ca[static_cast<std::size_t>(p0)];
          const TreeId y = cb[static_cast<std::size_t>(p1)];
          if (collapses(forest_.index(x))) return sig.idx_paths(forest_.index(x), forest_.index(y));
          return counts(x, y).paths;
        },
        [&](const ShapeIdent& id) {
          std::vector<const std::vector<Witness>*> pools;
          for (std::size_t p = 0; p < ca.size(); ++p) {
            const auto& sub = witness_table(ca[p], cb[static_cast<std::size_t>(id.pos_match[p])]);
            const auto it = sub.find(id.src_paths[p]);
            if (it == sub.end() || it->second.empty()) return;
            pools.push_back(&it->second);
          }
          auto& bucket = table[id.target_path];
          std::vector<std::size_t> digit(pools.size(), 0);
          while (true) {
            Witness w{Witness::Kind::Inr, id, {}};
            for (std::size_t p = 0; p < pools.size(); ++p) w.children.push_back((*pools[p])[digit[p]]);
            if (std::find(bucket.begin(), bucket.end(), w) == bucket.end()) bucket.push_back(std::move(w));
            std::size_t p = pools.size();
            while (p > 0 && digit[p - 1] + 1 == pools[p - 1]->size()) digit[--p] = 0;
            if (p == 0) break;
            ++digit[p - 1];
          }
        });
  }
  return witness_memo_.emplace(key, std::move(table)).first->second;
}

WitnessSet EqEngine::witnesses(const IdxPath& p, TreeId a, TreeId b) {
  const ContainerSig& sig = forest_.sig();
  const auto paths = sig.idx_paths(forest_.index(a), forest_.index(b));
  if (std::find(paths.begin(), paths.end(), p) == paths.end())
    throw Error(ErrorCode::PreconditionViolated, "path " + p.to_string() + " does not connect " +
                                                     sig.index_name(forest_.index(a)) + " to " +
                                                     sig.index_name(forest_.index(b)));
  WitnessSet out{p, {}};
  const auto& table = witness_table(a, b);
  if (const auto it = table.find(p); it != table.end()) out.items = it->second;
  return out;
}

std::vector<std::pair<IdxPath, Witness>> EqEngine::all_witnesses(TreeId a, TreeId b) {
  const ContainerSig& sig = forest_.sig();
  const auto& table = witness_table(a, b);
  std::vector<std::pair<IdxPath, Witness>> out;
  for (const IdxPath& p : sig.idx_paths(forest_.index(a), forest_.index(b)))
    if (const auto it = table.find(p); it != table.end())
      for (const Witness& w : it->second) out.emplace_back(p, w);
  return out;
}

Witness EqEngine::encode_refl(TreeId t) const {
  if (collapses(forest_.index(t))) return Witness::collapsed();
  Witness w{Witness::Kind::Inr, forest_.sig().refl_ident(forest_.shape(t)), {}};
  for (TreeId c : forest_.children(t)) w.children.push_back(encode_refl(c));
  return w;
}

// ---------------------------------------------------------------------------
// SaturationOracle

SaturationOracle::SaturationOracle(const Forest& forest, const PredOnIndex& pred, std::vector<TreeId> universe,
                                   std::uint64_t max_facts)
    : max_facts_(max_facts) {
  const ContainerSig& sig = forest.sig();
  std::sort(universe.begin(), universe.end());
  universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
  for (TreeId t : universe)
    for (TreeId c : forest.children(t))
      if (!std::binary_search(universe.begin(), universe.end(), c))
        throw Error(ErrorCode::PreconditionViolated, "oracle universe is not closed under subtrees");

  struct Rule {
    TreeId a, b;
    ShapeIdent ident;
  };
  std::vector<Rule> rules;
  std::deque<std::tuple<TreeId, IdxPath, TreeId>> work;
  auto push = [&](TreeId a, const IdxPath& p, TreeId b) {
    if (add(a, p, b)) work.emplace_back(a, p, b);
  };

  for (TreeId a : universe)
    for (TreeId b : universe) {
      const Index ia = forest.index(a);
      const Index ib = forest.index(b);
      if (pred.holds(ia))
        for (const IdxPath& p : sig.idx_paths(ia, ib)) push(a, p, b);
      for (ShapeIdent& id : sig.shape_idents(forest.shape(a), forest.shape(b)))
        rules.push_back({a, b, std::move(id)});
    }

  std::map<TreeId, std::vector<std::pair<IdxPath, TreeId>>> out_edges, in_edges;
  bool progress = true;
  while (progress) {
    ++rounds_;
    // Congruence through every identification whose premises hold.
    for (const Rule& r : rules) {
      const auto ca = forest.children(r.a);
      const auto cb = forest.children(r.b);
      bool ok = true;
      for (std::size_t p = 0; p < ca.size() && ok; ++p)
        ok = related(r.ident.src_paths[p], ca[p], cb[static_cast<std::size_t>(r.ident.pos_match[p])]);
      if (ok) push(r.a, r.ident.target_path, r.b);
    }
    progress = !work.empty();
    // Symmetric and transitive closure of everything found so far.
    while (!work.empty()) {
      const auto [a, p, b] = work.front();
      work.pop_front();
      out_edges[a].emplace_back(p, b);
      in_edges[b].emplace_back(p, a);
      push(b, p.inverse(), a);
      for (const auto& [q, c] : std::vector(out_edges[b])) push(a, p.then(q), c);
      for (const auto& [r, z] : std::vector(in_edges[a])) push(z, r.then(p), b);
    }
  }
}

bool SaturationOracle::add(TreeId a, const IdxPath& p, TreeId b) {
  if (!rel_[{a, b}].insert(p).second) return false;
  if (++facts_ > max_facts_)
    throw Error(ErrorCode::EnumerationTooLarge, "saturation exceeded " + std::to_string(max_facts_) + " facts");
  return true;
}

bool SaturationOracle::related(const IdxPath& p, TreeId a, TreeId b) const {
  const auto it = rel_.find({a, b});
  return it != rel_.end() && it->second.count(p) != 0;
}

bool SaturationOracle::related_any(TreeId a, TreeId b) const {
  const auto it = rel_.find({a, b});
  return it != rel_.end() && !it->second.empty();
}

// ---------------------------------------------------------------------------
// Value-level entry points

namespace {

std::vector<Index> all_labels(const ContainerSig& sig) {
  const IndexType type = sig.index_type();
  if (type.kind != IndexType::Kind::Labels)
    throw Error(ErrorCode::PreconditionViolated, "tree enumeration needs a label-indexed signature");
  std::vector<Index> out(type.labels.size());
  std::iota(out.begin(), out.end(), 0);
  return out;
}

}  // namespace

WitnessSet eq_witnesses(const SigPtr& sig, const PredOnIndex& pred, const IdxPath& p, const WTree& t0,
                        const WTree& t1) {
  Forest forest(sig);
  const TreeId a = forest.intern(t0);
  const TreeId b = forest.intern(t1);
  EqEngine engine(forest, pred);
  return engine.witnesses(p, a, b);
}

Witness encode_refl(const SigPtr& sig, const PredOnIndex& pred, const WTree& t) {
  Forest forest(sig);
  const TreeId a = forest.intern(t);
  return EqEngine(forest, pred).encode_refl(a);
}

bool tree_eq_oracle(const SigPtr& sig, const PredOnIndex& pred, int depth, const IdxPath& p, const WTree& t0,
                    const WTree& t1) {
  Forest forest(sig);
  const auto labels = all_labels(*sig);
  const auto trees = enumerate_trees(forest, labels, depth);
  const TreeId a = forest.intern(t0);
  const TreeId b = forest.intern(t1);
  if (forest.depth(a) > depth || forest.depth(b) > depth)
    throw Error(ErrorCode::PreconditionViolated, "tree deeper than the oracle depth");
  return SaturationOracle(forest, pred, trees).related(p, a, b);
}

VerifyReport verify_encode_decode(const SigPtr& sig, const PredOnIndex& pred, int depth, std::size_t cap) {
  VerifyReport report;
  report.suite = "wtypes";
  report.pred = pred.name;
  Forest forest(sig);
  const auto labels = all_labels(*sig);
  const auto trees = enumerate_trees(forest, labels, depth, cap);
  EqEngine engine(forest, pred);
  const SaturationOracle oracle(forest, pred, trees);
  const bool never = std::none_of(labels.begin(), labels.end(), [&](Index i) { return pred.holds(i); });

  for (TreeId a : trees)
    for (TreeId b : trees) {
      const auto paths = sig->idx_paths(forest.index(a), forest.index(b));
      if (paths.empty()) {
        ++report.vacuous;
        continue;
      }
      for (const IdxPath& p : paths) {
        ++report.cases;
        const WitnessSet ws = engine.witnesses(p, a, b);
        auto inputs = [&] {
          return to_string(*sig, forest.tree(a)) + " ~ " + to_string(*sig, forest.tree(b)) + " over " +
                 p.to_string();
        };
        if (ws.size() > 1) report.fail(inputs(), "at most 1 witness", std::to_string(ws.size()) + " witnesses");
        const bool rel = oracle.related(p, a, b);
        if (ws.empty() == rel)
          report.fail(inputs(), rel ? "related (oracle)" : "unrelated (oracle)",
                      std::to_string(ws.size()) + " witnesses");
        if (never) {
          const bool structural = p.is_identity() && forest.tree(a) == forest.tree(b);
          if (ws.empty() == structural)
            report.fail(inputs(), structural ? "structurally equal" : "structurally distinct",
                        std::to_string(ws.size()) + " witnesses");
        }
        if (a == b && p == sig->refl(forest.index(a)) && !ws.contains(engine.encode_refl(a)))
          report.fail(inputs(), "encode_refl is a member", "missing");
      }
    }
  return report;
}

}  // namespace vk
