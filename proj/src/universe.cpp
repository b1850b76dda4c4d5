#include "vk/universe.hpp"

#include <algorithm>
#include <numeric>

#include "vk/error.hpp"

namespace vk {

namespace {

std::uint64_t pair_key(int i, int j) { return (static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint32_t>(j); }

constexpr std::size_t kExamples = VerifyReport::kMaxRecordedFailures;

std::string pair_text(const CodeSpace& cs, int i, int j) {
  return to_string(cs.codes[static_cast<std::size_t>(i)]) + " ~ " + to_string(cs.codes[static_cast<std::size_t>(j)]);
}

// Records up to kExamples explicit failures and counts the rest.
void fail_bulk(VerifyReport& report, std::uint64_t count, const std::vector<std::pair<int, int>>& examples,
               const CodeSpace& cs, const std::string& expected, const std::string& got) {
  std::uint64_t recorded = 0;
  for (const auto& [i, j] : examples) {
    if (recorded == count) break;
    report.fail(pair_text(cs, i, j), expected, got);
    ++recorded;
  }
  report.failure_count += count - recorded;
}

std::uint64_t total_pairs(const CodeSpace& cs) {
  return static_cast<std::uint64_t>(cs.size()) * static_cast<std::uint64_t>(cs.size());
}

}  // namespace

// ---------------------------------------------------------------------------
// PairTable

const PairTable::Entry* PairTable::find(int i, int j) const {
  const auto it = lookup.find(pair_key(i, j));
  return it == lookup.end() ? nullptr : &entries[it->second];
}

bool PairTable::related(const CodeSpace& space, int i, int j) const {
  const int s = space.sizes[static_cast<std::size_t>(i)];
  if (s != space.sizes[static_cast<std::size_t>(j)]) return false;
  if (const auto it = collapsed.find(s); it != collapsed.end()) {
    const auto zero = it->second.examples.find(0);
    if (zero == it->second.examples.end()) return true;
    const auto& z = zero->second;
    return std::find(z.begin(), z.end(), std::pair{i, j}) == z.end();
  }
  return find(i, j) != nullptr;
}

// ---------------------------------------------------------------------------
// Universe

Universe::Universe(VSigPtr sig) : sig_(std::move(sig)), forest_(sig_) {}

TreeId Universe::intern(const Code& c) {
  (void)el(*sig_, c);  // validates the whole code
  std::vector<TreeId> kids;
  for (const Code& a : c.args) kids.push_back(intern(a));
  const int tag = static_cast<int>(c.former);
  std::vector<int> key{tag};
  switch (c.former) {
    case Former::N:
    case Former::NBad: key.push_back(sig_->nullary().find(c.name)); break;
    case Former::Id:
      key.push_back(forest_.index(kids[0]));
      key.insert(key.end(), c.elems.begin(), c.elems.end());
      break;
    case Former::Po0:
      for (TreeId k : kids) key.push_back(forest_.index(k));
      key.insert(key.end(), c.elems.begin(), c.elems.end());
      break;
    default:
      for (TreeId k : kids) key.push_back(forest_.index(k));
      break;
  }
  return forest_.node(Shape{std::move(key)}, std::move(kids));
}

EqEngine& Universe::engine(const PredicateSpec& pred) {
  auto& slot = engines_[pred.name()];
  if (!slot) slot = std::make_unique<EqEngine>(forest_, pred.on_index());
  return *slot;
}

const CodeSpace& Universe::codes(const Budget& budget) {
  auto& slot = spaces_[budget];
  if (slot) return *slot;
  if (budget.max_size > sig_->bij_cap())
    throw Error(ErrorCode::EnumerationTooLarge, "decoding bound " + std::to_string(budget.max_size) +
                                                    " exceeds the bijection cap " + std::to_string(sig_->bij_cap()));
  auto cs = std::make_unique<CodeSpace>();
  cs->budget = budget;
  cs->codes = enumerate_codes(*sig_, budget);
  for (std::size_t i = 0; i < cs->codes.size(); ++i) {
    const TreeId id = intern(cs->codes[i]);
    cs->ids.push_back(id);
    cs->sizes.push_back(forest_.index(id));
    cs->buckets[forest_.index(id)].push_back(static_cast<int>(i));
    cs->position.emplace(id, static_cast<int>(i));
  }
  slot = std::move(cs);
  return *slot;
}

const PairTable& Universe::sweep(const PredicateSpec& pred, const Budget& budget) {
  auto& slot = sweeps_[{pred.name(), budget}];
  if (slot) return *slot;
  const CodeSpace& cs = codes(budget);
  EqEngine& eng = engine(pred);
  auto table = std::make_unique<PairTable>();
  table->pred = pred;
  for (const auto& [size, members] : cs.buckets) {
    if (pred.holds(size)) {
      auto& col = table->collapsed[size];
      for (int i : members)
        for (int j : members) {
          const std::uint64_t tot = eng.total(cs.ids[static_cast<std::size_t>(i)], cs.ids[static_cast<std::size_t>(j)]);
          ++table->evaluated;
          ++col.histogram[tot];
          auto& ex = col.examples[tot];
          if (ex.size() < kExamples || tot == 0) ex.emplace_back(i, j);
        }
      continue;
    }
    // Identifications only exist inside a shape class.
    std::map<std::uint64_t, std::vector<int>> groups;
    for (int i : members) groups[sig_->shape_class(forest_.shape(cs.ids[static_cast<std::size_t>(i)]))].push_back(i);
    std::uint64_t within = 0;
    for (const auto& [cls, group] : groups) {
      within += static_cast<std::uint64_t>(group.size()) * group.size();
      for (int i : group)
        for (int j : group) {
          const TreeId a = cs.ids[static_cast<std::size_t>(i)];
          const TreeId b = cs.ids[static_cast<std::size_t>(j)];
          const std::uint64_t tot = eng.total(a, b);
          ++table->evaluated;
          if (tot) table->entries.push_back({i, j, tot, eng.counts_fresh(a, b)});
        }
    }
    table->skipped_by_class += static_cast<std::uint64_t>(members.size()) * members.size() - within;
  }
  std::sort(table->entries.begin(), table->entries.end(),
            [](const auto& x, const auto& y) { return std::pair{x.i, x.j} < std::pair{y.i, y.j}; });
  for (std::size_t k = 0; k < table->entries.size(); ++k)
    table->lookup.emplace(pair_key(table->entries[k].i, table->entries[k].j), k);
  slot = std::move(table);
  return *slot;
}

WitnessSet Universe::eqv_witnesses(const PredicateSpec& pred, const Bij& p, const Code& c0, const Code& c1) {
  const TreeId a = intern(c0);
  const TreeId b = intern(c1);
  if (p.dom().size != forest_.index(a) || p.cod().size != forest_.index(b))
    throw Error(ErrorCode::PreconditionViolated, "bijection does not connect the decodings of " + to_string(c0) +
                                                     " and " + to_string(c1));
  if (forest_.index(a) > sig_->bij_cap())
    throw Error(ErrorCode::EnumerationTooLarge, "decoding of " + to_string(c0) + " exceeds the bijection cap");
  return engine(pred).witnesses(IdxPath(p), a, b);
}

std::vector<std::pair<Bij, Witness>> Universe::eqv_total(const PredicateSpec& pred, const Code& c0, const Code& c1) {
  const TreeId a = intern(c0);
  const TreeId b = intern(c1);
  std::vector<std::pair<Bij, Witness>> out;
  for (auto& [p, w] : engine(pred).all_witnesses(a, b)) out.emplace_back(p.to_bij(), std::move(w));
  return out;
}

std::uint64_t Universe::eqv_count(const PredicateSpec& pred, const Code& c0, const Code& c1) {
  const TreeId a = intern(c0);
  const TreeId b = intern(c1);
  return engine(pred).total(a, b);
}

bool Universe::is_equal(const PredicateSpec& pred, const Code& c0, const Code& c1) {
  return eqv_count(pred, c0, c1) > 0;
}

Witness Universe::encode_refl(const PredicateSpec& pred, const Code& c) { return engine(pred).encode_refl(intern(c)); }

// ---------------------------------------------------------------------------
// Verifiers

VerifyReport verify_partial_univalence(Universe& u, const PredicateSpec& pred, const Budget& budget) {
  VerifyReport report;
  report.suite = "univalence";
  report.pred = pred.name();
  const CodeSpace& cs = u.codes(budget);
  const PairTable& table = u.sweep(pred, budget);
  std::vector<int> psizes;
  for (const auto& [size, members] : cs.buckets)
    if (pred.holds(size)) psizes.push_back(size);
  EnumLimits limits;
  limits.max_bij_size = u.sig().bij_cap();
  for (int s0 : psizes)
    for (int s1 : psizes) {
      const auto n0 = cs.buckets.at(s0).size();
      const auto n1 = cs.buckets.at(s1).size();
      const std::uint64_t expected = enum_bijs({s0}, {s1}, limits).size();
      report.cases += static_cast<std::uint64_t>(n0) * n1;
      if (s0 != s1) {
        // No bijection between the decodings, so the path set is empty.
        if (expected != 0)
          fail_bulk(report, static_cast<std::uint64_t>(n0) * n1,
                    {{cs.buckets.at(s0)[0], cs.buckets.at(s1)[0]}}, cs, std::to_string(expected), "0");
        continue;
      }
      const auto& col = table.collapsed.at(s0);
      for (const auto& [tot, cnt] : col.histogram)
        if (tot != expected)
          fail_bulk(report, cnt, col.examples.at(tot), cs, std::to_string(expected) + " paths", std::to_string(tot));
    }
  if (psizes.empty()) report.notes.push_back("no code satisfies " + pred.name() + " within the budget");
  return report;
}

VerifyReport verify_truncated(Universe& u, const PredicateSpec& pred, const Budget& budget, bool force) {
  if (!pred.implies_prop() && !force)
    throw Error(ErrorCode::PreconditionViolated,
                "predicate " + pred.name() + " does not imply prop; use the negative-control suite instead");
  VerifyReport report;
  report.suite = "truncation";
  report.pred = pred.name();
  const CodeSpace& cs = u.codes(budget);
  const PairTable& table = u.sweep(pred, budget);
  report.cases = total_pairs(cs);
  for (const auto& [size, col] : table.collapsed)
    for (const auto& [tot, cnt] : col.histogram)
      if (tot > 1) fail_bulk(report, cnt, col.examples.at(tot), cs, "at most 1 path", std::to_string(tot) + " paths");
  for (const auto& e : table.entries)
    if (e.total > 1) report.fail(pair_text(cs, e.i, e.j), "at most 1 path", std::to_string(e.total) + " paths");
  if (force && !pred.implies_prop()) report.notes.push_back("forced: " + pred.name() + " does not imply prop");
  report.notes.push_back(std::to_string(cs.size()) + " codes, " + std::to_string(table.evaluated) +
                         " pairs evaluated, " + std::to_string(table.skipped_by_class) +
                         " same-size pairs in distinct shape classes");
  return report;
}

VerifyReport negative_control(Universe& u, const PredicateSpec& pred, const Budget& budget) {
  if (pred.implies_prop())
    throw Error(ErrorCode::PreconditionViolated,
                "predicate " + pred.name() + " implies prop; use the truncation suite instead");
  VerifyReport report;
  report.suite = "negative";
  report.pred = pred.name();
  const CodeSpace& cs = u.codes(budget);
  const PairTable& table = u.sweep(pred, budget);
  report.cases = total_pairs(cs);
  std::uint64_t multi = 0;
  std::optional<std::tuple<int, int, std::uint64_t>> first;
  auto consider = [&](int i, int j, std::uint64_t tot) {
    if (!first || std::pair{i, j} < std::pair{std::get<0>(*first), std::get<1>(*first)}) first = {i, j, tot};
  };
  for (const auto& [size, col] : table.collapsed)
    for (const auto& [tot, cnt] : col.histogram)
      if (tot >= 2) {
        multi += cnt;
        consider(col.examples.at(tot).front().first, col.examples.at(tot).front().second, tot);
      }
  for (const auto& e : table.entries)
    if (e.total >= 2) {
      ++multi;
      consider(e.i, e.j, e.total);
    }
  if (first) {
    const auto [i, j, tot] = *first;
    report.notes.push_back("witness: " + pair_text(cs, i, j) + " has " + std::to_string(tot) + " paths");
    report.notes.push_back(std::to_string(multi) + " pairs with at least 2 paths");
  } else {
    report.notes.push_back("NO-WITNESS: no pair with at least 2 paths within the budget");
  }
  return report;
}

VerifyReport verify_structural(Universe& u, const Budget& budget) {
  const PredicateSpec none;
  VerifyReport report;
  report.suite = "structural";
  report.pred = none.name();
  const CodeSpace& cs = u.codes(budget);
  const PairTable& table = u.sweep(none, budget);
  report.cases = total_pairs(cs);
  for (const auto& e : table.entries) {
    const bool same = cs.codes[static_cast<std::size_t>(e.i)] == cs.codes[static_cast<std::size_t>(e.j)];
    const bool identity = e.total == 1 && e.counts.paths.size() == 1 && e.counts.paths[0].is_identity();
    if (!same) report.fail(pair_text(cs, e.i, e.j), "unequal (structurally distinct)", "equal");
    else if (!identity)
      report.fail(pair_text(cs, e.i, e.j), "one path, the identity", std::to_string(e.total) + " paths");
  }
  // Structurally equal pairs, found by printed form, must all be equal.
  std::map<std::string, std::vector<int>> by_text;
  for (std::size_t i = 0; i < cs.size(); ++i) by_text[to_string(cs.codes[i])].push_back(static_cast<int>(i));
  for (const auto& [text, group] : by_text)
    for (int i : group)
      for (int j : group)
        if (!table.find(i, j)) report.fail(pair_text(cs, i, j), "equal along the identity", "unequal");
  return report;
}

VerifyReport verify_coherence(Universe& u, const PredicateSpec& pred, const Budget& budget) {
  VerifyReport report;
  report.suite = "coherence";
  report.pred = pred.name();
  const CodeSpace& cs = u.codes(budget);
  const PairTable& table = u.sweep(pred, budget);
  EqEngine& eng = u.engine(pred);
  const Forest& forest = u.forest();
  auto related = [&](int i, int j) { return table.related(cs, i, j); };

  // Reflexivity, with the reflexivity code a member of the witness set at refl.
  for (std::size_t i = 0; i < cs.size(); ++i) {
    ++report.cases;
    const int ii = static_cast<int>(i);
    const TreeId t = cs.ids[i];
    if (!related(ii, ii)) report.fail(pair_text(cs, ii, ii), "reflexive", "unrelated");
    const WitnessSet ws = eng.witnesses(IdxPath::identity(cs.sizes[i]), t, t);
    if (!ws.contains(eng.encode_refl(t))) report.fail(to_string(cs.codes[i]), "encode_refl in Eq(refl)", "missing");
  }

  // Collapsed buckets relate every pair along every path.
  for (const auto& [size, col] : table.collapsed) {
    const auto n = static_cast<std::uint64_t>(cs.buckets.at(size).size());
    report.cases += n * n;
    if (const auto z = col.histogram.find(0); z != col.histogram.end())
      fail_bulk(report, z->second, col.examples.at(0), cs, "related (collapsed size)", "unrelated");
  }

  // Symmetry along inverses and transitivity along composites.
  std::map<int, std::vector<const PairTable::Entry*>> out_edges;
  for (const auto& e : table.entries) out_edges[e.i].push_back(&e);
  for (const auto& e : table.entries) {
    ++report.cases;
    const auto* back = table.find(e.j, e.i);
    bool ok = back && back->counts.paths.size() == e.counts.paths.size();
    for (std::size_t k = 0; ok && k < e.counts.paths.size(); ++k) ok = back->counts.at(e.counts.paths[k].inverse()) > 0;
    if (!ok) report.fail(pair_text(cs, e.i, e.j), "symmetric along inverse paths", "missing reverse");
    for (const auto* f : out_edges[e.j]) {
      ++report.cases;
      const auto* comp = table.find(e.i, f->j);
      bool tok = comp != nullptr;
      for (std::size_t p = 0; tok && p < e.counts.paths.size(); ++p)
        for (std::size_t q = 0; tok && q < f->counts.paths.size(); ++q)
          tok = comp->counts.at(e.counts.paths[p].then(f->counts.paths[q])) > 0;
      if (!tok)
        report.fail(pair_text(cs, e.i, e.j) + " ~ " + to_string(cs.codes[static_cast<std::size_t>(f->j)]),
                    "transitive along composite paths", "missing composite");
    }
  }

  // Union-find over related pairs: within each bucket the relation must be
  // exactly "same class".
  std::vector<int> parent(cs.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  };
  for (const auto& e : table.entries) parent[static_cast<std::size_t>(find(e.i))] = find(e.j);
  for (const auto& [size, members] : cs.buckets) {
    if (table.collapsed.count(size)) continue;
    std::map<int, std::uint64_t> class_size;
    for (int i : members) ++class_size[find(i)];
    std::uint64_t same_class = 0;
    for (const auto& [root, n] : class_size) same_class += n * n;
    std::uint64_t rel = 0;
    for (int i : members) rel += out_edges[i].size();
    if (same_class != rel)
      report.fail("size " + std::to_string(size) + " bucket", std::to_string(same_class) + " related pairs (closure)",
                  std::to_string(rel));
  }

  // Congruence for Pi, Sigma and Sum.
  auto pos_of = [&](TreeId t) { return cs.position.at(t); };
  std::map<std::pair<int, std::uint64_t>, std::vector<int>> groups;
  std::map<int, std::uint64_t> per_former;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const Former f = cs.codes[i].former;
    if (f != Former::Pi && f != Former::Sigma && f != Former::Sum) continue;
    groups[{static_cast<int>(f), u.sig().shape_class(forest.shape(cs.ids[i]))}].push_back(static_cast<int>(i));
    ++per_former[static_cast<int>(f)];
  }
  std::uint64_t within = 0;
  for (const auto& [key, group] : groups) {
    within += static_cast<std::uint64_t>(group.size()) * group.size();
    for (int i : group)
      for (int j : group) {
        const auto k0 = forest.children(cs.ids[static_cast<std::size_t>(i)]);
        const auto k1 = forest.children(cs.ids[static_cast<std::size_t>(j)]);
        bool hyp = false;
        if (key.first == static_cast<int>(Former::Sum)) {
          hyp = related(pos_of(k0[0]), pos_of(k1[0])) && related(pos_of(k0[1]), pos_of(k1[1]));
        } else {
          const Index a = forest.index(k0[0]);
          std::vector<IdxPath> pas;
          if (eng.collapses(a)) {
            const auto all = u.sig().idx_paths(a, forest.index(k1[0]));
            pas.assign(all.begin(), all.end());
          } else {
            pas = eng.counts(k0[0], k1[0]).paths;
          }
          for (const IdxPath& pa : pas) {
            bool fibers = true;
            for (int x = 0; x < a && fibers; ++x)
              fibers = related(pos_of(k0[static_cast<std::size_t>(1 + x)]), pos_of(k1[static_cast<std::size_t>(1 + pa(x))]));
            if (fibers) {
              hyp = true;
              break;
            }
          }
        }
        if (!hyp) {
          ++report.vacuous;
          continue;
        }
        ++report.cases;
        if (!related(i, j)) report.fail(pair_text(cs, i, j), "equal (components equal)", "unequal");
      }
  }
  std::uint64_t all_pairs = 0;
  for (const auto& [f, n] : per_former) all_pairs += n * n;
  report.vacuous += all_pairs - within;
  return report;
}

// ---------------------------------------------------------------------------
// Value-level entry points

WitnessSet eqv_witnesses(const VSigPtr& sig, const PredicateSpec& pred, const Bij& p, const Code& c0,
                         const Code& c1) {
  Universe u(sig);
  return u.eqv_witnesses(pred, p, c0, c1);
}

std::vector<std::pair<Bij, Witness>> eqv_total(const VSigPtr& sig, const PredicateSpec& pred, const Code& c0,
                                               const Code& c1) {
  Universe u(sig);
  return u.eqv_total(pred, c0, c1);
}

bool is_equal(const VSigPtr& sig, const PredicateSpec& pred, const Code& c0, const Code& c1) {
  Universe u(sig);
  return u.is_equal(pred, c0, c1);
}

}  // namespace vk
