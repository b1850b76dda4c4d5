#include "vk/container.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "vk/error.hpp"

namespace vk {

// ---------------------------------------------------------------------------
// IdxPath

IdxPath::IdxPath(std::span<const int> perm) {
  if (perm.size() > static_cast<std::size_t>(kMaxSize))
    throw Error(ErrorCode::EnumerationTooLarge, "index path longer than " + std::to_string(kMaxSize));
  n_ = static_cast<std::uint8_t>(perm.size());
  std::array<bool, kMaxSize> seen{};
  for (std::size_t i = 0; i < perm.size(); ++i) {
    const int y = perm[i];
    if (y < 0 || y >= n_ || seen[static_cast<std::size_t>(y)])
      throw Error(ErrorCode::DomainMismatch, "index path is not a permutation");
    seen[static_cast<std::size_t>(y)] = true;
    p_[i] = static_cast<std::uint8_t>(y);
  }
}

IdxPath::IdxPath(const Bij& bij) : IdxPath(bij.fwd().targets()) {}

IdxPath IdxPath::identity(int n) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  return IdxPath(perm);
}

bool IdxPath::is_identity() const {
  for (int i = 0; i < n_; ++i)
    if (p_[static_cast<std::size_t>(i)] != i) return false;
  return true;
}

IdxPath IdxPath::inverse() const {
  IdxPath r;
  r.n_ = n_;
  for (int i = 0; i < n_; ++i) r.p_[p_[static_cast<std::size_t>(i)]] = static_cast<std::uint8_t>(i);
  return r;
}

IdxPath IdxPath::then(const IdxPath& next) const {
  if (next.n_ != n_) throw Error(ErrorCode::DomainMismatch, "composing index paths of different sizes");
  IdxPath r;
  r.n_ = n_;
  for (int i = 0; i < n_; ++i) r.p_[static_cast<std::size_t>(i)] = next.p_[p_[static_cast<std::size_t>(i)]];
  return r;
}

Bij IdxPath::to_bij() const {
  std::vector<int> perm(p_.begin(), p_.begin() + n_);
  return Bij::from_perm(std::move(perm));
}

std::string IdxPath::to_string() const {
  std::string s = "[";
  for (int i = 0; i < n_; ++i) {
    if (i) s += ' ';
    s += std::to_string(p_[static_cast<std::size_t>(i)]);
  }
  return s + "]";
}

// ---------------------------------------------------------------------------
// ContainerSig helpers

std::vector<ShapeIdent> ContainerSig::shape_idents(const Shape& s0, const Shape& s1) const {
  std::vector<ShapeIdent> out;
  for_each_ident(
      s0, s1, [&](int p0, int p1) { return idx_paths(source(s0, p0), source(s1, p1)); },
      [&](const ShapeIdent& id) { out.push_back(id); });
  return out;
}

ShapeIdent ContainerSig::refl_ident(const Shape& s) const {
  ShapeIdent id;
  id.target_path = refl(target(s));
  const int n = num_positions(s);
  id.pos_match.resize(static_cast<std::size_t>(n));
  std::iota(id.pos_match.begin(), id.pos_match.end(), 0);
  for (int p = 0; p < n; ++p) id.src_paths.push_back(refl(source(s, p)));
  return id;
}

// ---------------------------------------------------------------------------
// Coproducts

namespace {

Shape untag(const Shape& s) { return Shape{std::vector<int>(s.key.begin() + 1, s.key.end())}; }

Shape tag(int side, const Shape& s) {
  Shape r;
  r.key.reserve(s.key.size() + 1);
  r.key.push_back(side);
  r.key.insert(r.key.end(), s.key.begin(), s.key.end());
  return r;
}

class CoproductContainer final : public ContainerSig {
 public:
  CoproductContainer(SigPtr left, SigPtr right) : sides_{std::move(left), std::move(right)} {}

  IndexType index_type() const override { return sides_[0]->index_type(); }
  std::string index_name(Index i) const override { return sides_[0]->index_name(i); }
  std::span<const IdxPath> idx_paths(Index i0, Index i1) const override { return sides_[0]->idx_paths(i0, i1); }
  IdxPath refl(Index i) const override { return sides_[0]->refl(i); }

  bool valid_shape(const Shape& s) const override {
    return !s.key.empty() && (s.key[0] == 0 || s.key[0] == 1) && side(s).valid_shape(untag(s));
  }
  Index target(const Shape& s) const override { return side(s).target(untag(s)); }
  int num_positions(const Shape& s) const override { return side(s).num_positions(untag(s)); }
  Index source(const Shape& s, int pos) const override { return side(s).source(untag(s), pos); }
  std::string shape_name(const Shape& s) const override {
    return (s.key[0] == 0 ? "inl." : "inr.") + side(s).shape_name(untag(s));
  }

  void for_each_ident(const Shape& s0, const Shape& s1, const Candidates& cand,
                      const IdentSink& sink) const override {
    if (s0.key.at(0) != s1.key.at(0)) return;  // different summands: no identifications
    side(s0).for_each_ident(untag(s0), untag(s1), cand, sink);
  }

  std::uint64_t shape_class(const Shape& s) const override {
    return side(s).shape_class(untag(s)) * 2 + static_cast<std::uint64_t>(s.key.at(0));
  }

  std::vector<Shape> shapes_over(std::span<const Index> indices) const override {
    std::vector<Shape> out;
    for (int k = 0; k < 2; ++k)
      for (const Shape& s : sides_[k]->shapes_over(indices)) out.push_back(tag(k, s));
    return out;
  }

 private:
  const ContainerSig& side(const Shape& s) const { return *sides_[static_cast<std::size_t>(s.key.at(0))]; }

  std::array<SigPtr, 2> sides_;
};

class NoShapesContainer final : public ContainerSig {
 public:
  explicit NoShapesContainer(SigPtr like) : like_(std::move(like)) {}

  IndexType index_type() const override { return like_->index_type(); }
  std::string index_name(Index i) const override { return like_->index_name(i); }
  std::span<const IdxPath> idx_paths(Index i0, Index i1) const override { return like_->idx_paths(i0, i1); }
  IdxPath refl(Index i) const override { return like_->refl(i); }
  bool valid_shape(const Shape&) const override { return false; }
  Index target(const Shape&) const override { throw Error(ErrorCode::PreconditionViolated, "no shapes"); }
  int num_positions(const Shape&) const override { throw Error(ErrorCode::PreconditionViolated, "no shapes"); }
  Index source(const Shape&, int) const override { throw Error(ErrorCode::PreconditionViolated, "no shapes"); }
  std::string shape_name(const Shape&) const override { return "?"; }
  void for_each_ident(const Shape&, const Shape&, const Candidates&, const IdentSink&) const override {}
  std::vector<Shape> shapes_over(std::span<const Index>) const override { return {}; }

 private:
  SigPtr like_;
};

}  // namespace

SigPtr coproduct(SigPtr left, SigPtr right) {
  if (!(left->index_type() == right->index_type()))
    throw Error(ErrorCode::IndexTypeMismatch, "coproduct of containers over different index types");
  return std::make_shared<CoproductContainer>(std::move(left), std::move(right));
}

SigPtr no_shapes_like(SigPtr like) { return std::make_shared<NoShapesContainer>(std::move(like)); }

// ---------------------------------------------------------------------------
// FiniteContainerTable

FiniteContainerTable::FiniteContainerTable(std::vector<std::string> labels, std::vector<Row> rows)
    : labels_(std::move(labels)), rows_(std::move(rows)) {
  std::set<std::string> seen;
  for (const auto& l : labels_)
    if (!seen.insert(l).second) throw Error(ErrorCode::DuplicateName, "label '" + l + "' declared twice");
  std::set<std::string> shape_names;
  for (const Row& row : rows_) {
    if (!shape_names.insert(row.name).second)
      throw Error(ErrorCode::DuplicateName, "shape '" + row.name + "' declared twice");
    Compiled c{label_index(row.target), {}};
    std::set<std::string> pos_names;
    for (const auto& [pos, src] : row.positions) {
      if (!pos_names.insert(pos).second)
        throw Error(ErrorCode::DuplicateName, "position '" + pos + "' repeated in shape '" + row.name + "'");
      c.sources.push_back(label_index(src));
    }
    compiled_.push_back(std::move(c));
  }
}

Index FiniteContainerTable::label_index(const std::string& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw Error(ErrorCode::MalformedCode, "unknown label '" + label + "'");
  return static_cast<Index>(it - labels_.begin());
}

IndexType FiniteContainerTable::index_type() const { return {IndexType::Kind::Labels, labels_}; }

std::string FiniteContainerTable::index_name(Index i) const { return labels_.at(static_cast<std::size_t>(i)); }

std::span<const IdxPath> FiniteContainerTable::idx_paths(Index i0, Index i1) const {
  if (i0 == i1) return refl_only_;
  return {};
}

bool FiniteContainerTable::valid_shape(const Shape& s) const {
  return s.key.size() == 1 && s.key[0] >= 0 && s.key[0] < num_shapes();
}

Index FiniteContainerTable::target(const Shape& s) const {
  return compiled_.at(static_cast<std::size_t>(s.key.at(0))).target;
}

int FiniteContainerTable::num_positions(const Shape& s) const {
  return static_cast<int>(compiled_.at(static_cast<std::size_t>(s.key.at(0))).sources.size());
}

Index FiniteContainerTable::source(const Shape& s, int pos) const {
  return compiled_.at(static_cast<std::size_t>(s.key.at(0))).sources.at(static_cast<std::size_t>(pos));
}

std::string FiniteContainerTable::shape_name(const Shape& s) const {
  return rows_.at(static_cast<std::size_t>(s.key.at(0))).name;
}

void FiniteContainerTable::for_each_ident(const Shape& s0, const Shape& s1, const Candidates&,
                                          const IdentSink& sink) const {
  // Discrete shapes: only the reflexivity identification of a shape with itself.
  if (s0 == s1) sink(refl_ident(s0));
}

std::vector<Shape> FiniteContainerTable::shapes_over(std::span<const Index> indices) const {
  std::vector<Shape> out;
  for (int r = 0; r < num_shapes(); ++r) {
    const auto& srcs = compiled_[static_cast<std::size_t>(r)].sources;
    const bool ok = std::all_of(srcs.begin(), srcs.end(), [&](Index i) {
      return std::find(indices.begin(), indices.end(), i) != indices.end();
    });
    if (ok) out.push_back(shape(r));
  }
  return out;
}

FiniteContainerTable random_table(std::mt19937_64& rng, int max_labels, int max_shapes, int max_positions) {
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };
  const int nl = 1 + pick(max_labels);
  const int ns = 1 + pick(max_shapes);
  std::vector<std::string> labels;
  for (int i = 0; i < nl; ++i) labels.push_back("l" + std::to_string(i));
  std::vector<FiniteContainerTable::Row> rows;
  for (int s = 0; s < ns; ++s) {
    FiniteContainerTable::Row row;
    row.name = "s" + std::to_string(s);
    row.target = labels[static_cast<std::size_t>(pick(nl))];
    // The first shape is a leaf so that the W-type is inhabited.
    const int np = s == 0 ? 0 : pick(max_positions + 1);
    for (int p = 0; p < np; ++p)
      row.positions.emplace_back("p" + std::to_string(p), labels[static_cast<std::size_t>(pick(nl))]);
    rows.push_back(std::move(row));
  }
  return FiniteContainerTable(std::move(labels), std::move(rows));
}

// ---------------------------------------------------------------------------
// FamilyAssignment

void FamilyAssignment::set_inhabitants(Index i, int count, bool prop_valued) {
  if (count < 0) throw Error(ErrorCode::PreconditionViolated, "negative inhabitant count");
  inhabitants_[i] = {count, prop_valued};
}

void FamilyAssignment::set_witnesses(Index i0, int x0, Index i1, int x1, const IdxPath& q, std::uint64_t count) {
  counts_[{i0, x0, i1, x1, q}] = count;
}

std::vector<Index> FamilyAssignment::indices() const {
  std::vector<Index> out;
  for (const auto& [i, _] : inhabitants_) out.push_back(i);
  return out;
}

int FamilyAssignment::inhabitants(Index i) const {
  const auto it = inhabitants_.find(i);
  return it == inhabitants_.end() ? 0 : it->second.first;
}

bool FamilyAssignment::prop_valued(Index i) const {
  const auto it = inhabitants_.find(i);
  return it != inhabitants_.end() && it->second.second;
}

std::optional<std::uint64_t> FamilyAssignment::witnesses(Index i0, int x0, Index i1, int x1,
                                                         const IdxPath& q) const {
  const auto it = counts_.find({i0, x0, i1, x1, q});
  if (it == counts_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t FamilyAssignment::total_witnesses(const ContainerSig& sig, Index i0, int x0, Index i1,
                                                int x1) const {
  std::uint64_t total = 0;
  for (const IdxPath& q : sig.idx_paths(i0, i1)) total += witnesses(i0, x0, i1, x1, q).value_or(0);
  return total;
}

void FamilyAssignment::validate(const ContainerSig& sig) const {
  for (const auto& [i0, a] : inhabitants_)
    for (const auto& [i1, b] : inhabitants_)
      for (int x0 = 0; x0 < a.first; ++x0)
        for (int x1 = 0; x1 < b.first; ++x1) {
          for (const IdxPath& q : sig.idx_paths(i0, i1))
            if (!witnesses(i0, x0, i1, x1, q))
              throw Error(ErrorCode::PreconditionViolated,
                          "family table has no witness count for " + sig.index_name(i0) + "#" +
                              std::to_string(x0) + " ~ " + sig.index_name(i1) + "#" + std::to_string(x1) +
                              " over " + q.to_string());
          if (i0 == i1 && a.second && total_witnesses(sig, i0, x0, i1, x1) > 1)
            throw Error(ErrorCode::PreconditionViolated,
                        "prop-valued index " + sig.index_name(i0) + " has a pair with several witnesses");
        }
}

FamilyAssignment sample_family(const ContainerSig& sig, std::span<const Index> indices, std::mt19937_64& rng,
                               int max_inhabitants, double nonprop_rate) {
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  auto coin = [&](double p) { return static_cast<double>(rng() % 1'000'000) < p * 1'000'000.0; };
  FamilyAssignment fam;
  for (Index i : indices)
    fam.set_inhabitants(i, 1 + static_cast<int>(pick(static_cast<std::size_t>(max_inhabitants))),
                        nonprop_rate == 0.0);
  for (Index i0 : indices)
    for (Index i1 : indices) {
      const auto paths = sig.idx_paths(i0, i1);
      if (paths.empty()) continue;
      for (int x0 = 0; x0 < fam.inhabitants(i0); ++x0)
        for (int x1 = 0; x1 < fam.inhabitants(i1); ++x1) {
          for (const IdxPath& q : paths) fam.set_witnesses(i0, x0, i1, x1, q, 0);
          if (i0 == i1 && x0 == x1) {
            fam.set_witnesses(i0, x0, i1, x1, sig.refl(i0), 1);
            continue;
          }
          if (nonprop_rate > 0.0 && coin(nonprop_rate)) {
            fam.set_witnesses(i0, x0, i1, x1, paths[pick(paths.size())], 2);
            continue;
          }
          if (coin(0.5)) fam.set_witnesses(i0, x0, i1, x1, paths[pick(paths.size())], 1);
        }
    }
  return fam;
}

// ---------------------------------------------------------------------------
// Extensions and retention

std::vector<ExtElement> ext_enumerate(const ContainerSig& sig, const FamilyAssignment& family, Index i,
                                      std::uint64_t cap) {
  const auto indices = family.indices();
  std::vector<ExtElement> out;
  for (const Shape& s : sig.shapes_over(indices)) {
    if (sig.target(s) != i) continue;
    const int np = sig.num_positions(s);
    std::vector<int> radix;
    std::uint64_t count = 1;
    for (int p = 0; p < np; ++p) {
      radix.push_back(family.inhabitants(sig.source(s, p)));
      count *= static_cast<std::uint64_t>(radix.back());
    }
    if (out.size() + count > cap) throw Error(ErrorCode::EnumerationTooLarge, "extension enumeration exceeds cap");
    if (count == 0) continue;
    std::vector<int> args(static_cast<std::size_t>(np), 0);
    while (true) {
      out.push_back({s, args});
      int p = np - 1;
      while (p >= 0 && args[static_cast<std::size_t>(p)] == radix[static_cast<std::size_t>(p)] - 1)
        args[static_cast<std::size_t>(p--)] = 0;
      if (p < 0) break;
      ++args[static_cast<std::size_t>(p)];
    }
  }
  return out;
}

RetainsReport retains_check(const ContainerSig& sig, const FamilyAssignment& family, int level) {
  if (level != 0) throw Error(ErrorCode::PreconditionViolated, "retains_check supports level 0 only");
  family.validate(sig);

  const auto indices = family.indices();
  std::set<Index> targets;
  for (const Shape& s : sig.shapes_over(indices)) targets.insert(sig.target(s));
  std::vector<std::pair<Index, ExtElement>> elems;
  for (Index t : targets)
    for (auto& e : ext_enumerate(sig, family, t)) elems.emplace_back(t, std::move(e));

  // Dense table of child pairs: nonzero-witness paths and their counts.
  struct ChildPair {
    std::vector<IdxPath> paths;
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;
  };
  std::map<Index, int> offset;
  int width = 0;
  for (Index i : indices) {
    offset[i] = width;
    width += family.inhabitants(i);
  }
  std::vector<ChildPair> table(static_cast<std::size_t>(width * width));
  for (Index j0 : indices)
    for (Index j1 : indices)
      for (int x0 = 0; x0 < family.inhabitants(j0); ++x0)
        for (int x1 = 0; x1 < family.inhabitants(j1); ++x1) {
          ChildPair& cp = table[static_cast<std::size_t>((offset[j0] + x0) * width + offset[j1] + x1)];
          for (const IdxPath& q : sig.idx_paths(j0, j1)) {
            const std::uint64_t n = family.witnesses(j0, x0, j1, x1, q).value_or(0);
            if (n == 0) continue;
            cp.paths.push_back(q);
            cp.counts.push_back(n);
            cp.total += n;
          }
        }

  // Per element: dense row of each argument, and the shape class.
  std::vector<std::vector<int>> rows(elems.size());
  std::vector<std::uint64_t> classes(elems.size());
  for (std::size_t k = 0; k < elems.size(); ++k) {
    const ExtElement& e = elems[k].second;
    for (int p = 0; p < sig.num_positions(e.shape); ++p)
      rows[k].push_back(offset.at(sig.source(e.shape, p)) + e.args[static_cast<std::size_t>(p)]);
    classes[k] = sig.shape_class(e.shape);
  }

  RetainsReport report;
  std::vector<const ChildPair*> children;
  for (std::size_t k0 = 0; k0 < elems.size(); ++k0)
    for (std::size_t k1 = 0; k1 < elems.size(); ++k1) {
      const auto& [i0, e0] = elems[k0];
      const auto& [i1, e1] = elems[k1];
      const int n0 = static_cast<int>(rows[k0].size());
      const int n1 = static_cast<int>(rows[k1].size());
      children.assign(static_cast<std::size_t>(n0 * n1), nullptr);
      bool premise = true;
      for (int p0 = 0; p0 < n0 && premise; ++p0)
        for (int p1 = 0; p1 < n1 && premise; ++p1) {
          const ChildPair* cp = &table[static_cast<std::size_t>(rows[k0][static_cast<std::size_t>(p0)] * width +
                                                                rows[k1][static_cast<std::size_t>(p1)])];
          children[static_cast<std::size_t>(p0 * n1 + p1)] = cp;
          premise = cp->total <= 1;
        }
      if (!premise) {
        ++report.vacuous;
        continue;
      }
      ++report.cases;
      // No identifications across shape classes, so the total is 0.
      if (classes[k0] != classes[k1]) continue;
      std::uint64_t total = 0;
      sig.for_each_ident(
          e0.shape, e1.shape,
          [&](int p0, int p1) {
            return std::span<const IdxPath>(children[static_cast<std::size_t>(p0 * n1 + p1)]->paths);
          },
          [&](const ShapeIdent& id) {
            std::uint64_t prod = 1;
            for (int p = 0; p < n0 && prod; ++p) {
              const int q = id.pos_match[static_cast<std::size_t>(p)];
              const ChildPair& cp = *children[static_cast<std::size_t>(p * n1 + q)];
              const auto it = std::find(cp.paths.begin(), cp.paths.end(), id.src_paths[static_cast<std::size_t>(p)]);
              prod *= it == cp.paths.end() ? 0 : cp.counts[static_cast<std::size_t>(it - cp.paths.begin())];
            }
            total += prod;
          });
      if (total > 1) report.violations.push_back({e0, e1, i0, i1, total});
    }
  return report;
}

std::string to_string(const ContainerSig& sig, const ExtElement& e) {
  std::string s = "(" + sig.shape_name(e.shape);
  for (int a : e.args) s += " " + std::to_string(a);
  return s + ")";
}

}  // namespace vk
