#pragma once

// Indexed containers in fibered form: shapes with a target index, a finite
// list of positions each with a source index, and the finite set of shape
// identifications between two shapes (target path, position matching, and
// source paths). Indices are integers whose meaning belongs to the signature.

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <tuple>
#include <type_traits>
#include <vector>

#include "vk/fincore.hpp"

namespace vk {

using Index = int;

/// Non-owning reference to a callable; cheap to pass down hot recursive
/// paths where std::function would allocate.
template <class Sig>
class FunctionRef;

template <class R, class... Args>
class FunctionRef<R(Args...)> {
 public:
  template <class F>
    requires(!std::is_same_v<std::remove_cvref_t<F>, FunctionRef> && std::is_invocable_r_v<R, F&, Args...>)
  FunctionRef(F&& f) noexcept  // NOLINT(google-explicit-constructor)
      : obj_(const_cast<void*>(static_cast<const void*>(std::addressof(f)))),
        call_([](void* obj, Args... args) -> R {
          return (*static_cast<std::remove_reference_t<F>*>(obj))(std::forward<Args>(args)...);
        }) {}

  R operator()(Args... args) const { return call_(obj_, std::forward<Args>(args)...); }

 private:
  void* obj_;
  R (*call_)(void*, Args...);
};

/// A path between two indices. For finite-set indices it is a permutation;
/// for discrete label indices the only path is the size-0 reflexivity token.
class IdxPath {
 public:
  static constexpr int kMaxSize = 12;

  IdxPath() = default;
  explicit IdxPath(std::span<const int> perm);
  explicit IdxPath(const Bij& bij);

  static IdxPath identity(int n);

  int size() const { return n_; }
  int operator()(int x) const { return p_[static_cast<std::size_t>(x)]; }
  bool is_identity() const;

  IdxPath inverse() const;
  /// First this, then `next`.
  IdxPath then(const IdxPath& next) const;

  Bij to_bij() const;
  std::string to_string() const;

  friend auto operator<=>(const IdxPath&, const IdxPath&) = default;

 private:
  std::uint8_t n_ = 0;
  std::array<std::uint8_t, kMaxSize> p_{};
};

struct Shape {
  std::vector<int> key;

  friend auto operator<=>(const Shape&, const Shape&) = default;
};

/// An identification of two shapes. `pos_match[p]` is the position of the
/// second shape matched with position `p` of the first; `src_paths[p]` runs
/// from source(s0, p) to source(s1, pos_match[p]).
struct ShapeIdent {
  IdxPath target_path;
  std::vector<int> pos_match;
  std::vector<IdxPath> src_paths;

  friend auto operator<=>(const ShapeIdent&, const ShapeIdent&) = default;
};

struct IndexType {
  enum class Kind { Labels, FiniteSets };
  Kind kind = Kind::Labels;
  std::vector<std::string> labels;

  friend bool operator==(const IndexType&, const IndexType&) = default;
};

class ContainerSig {
 public:
  /// Candidate source paths for the position pair (pos0 of s0, pos1 of s1).
  using Candidates = FunctionRef<std::span<const IdxPath>(int pos0, int pos1)>;
  using IdentSink = FunctionRef<void(const ShapeIdent&)>;

  virtual ~ContainerSig() = default;

  virtual IndexType index_type() const = 0;
  virtual std::string index_name(Index i) const = 0;
  /// All paths i0 -> i1, deterministic order.
  virtual std::span<const IdxPath> idx_paths(Index i0, Index i1) const = 0;
  virtual IdxPath refl(Index i) const = 0;

  virtual bool valid_shape(const Shape& s) const = 0;
  virtual Index target(const Shape& s) const = 0;
  virtual int num_positions(const Shape& s) const = 0;
  virtual Index source(const Shape& s, int pos) const = 0;
  virtual std::string shape_name(const Shape& s) const = 0;

  /// Emits every identification of (s0, s1) whose source paths are all drawn
  /// from `cand`, each exactly once and in the signature's deterministic
  /// order. Identifications using other source paths may also be emitted.
  virtual void for_each_ident(const Shape& s0, const Shape& s1, const Candidates& cand,
                              const IdentSink& sink) const = 0;

  /// Every shape whose sources all lie in `indices`, deterministic order.
  virtual std::vector<Shape> shapes_over(std::span<const Index> indices) const = 0;

  /// A coarse invariant of shapes: for_each_ident never emits anything for
  /// shapes of different classes. Sweeps use it to skip hopeless pairs.
  virtual std::uint64_t shape_class(const Shape&) const { return 0; }

  /// shape_idents(s0, s1): the full, unguided enumeration.
  std::vector<ShapeIdent> shape_idents(const Shape& s0, const Shape& s1) const;
  /// The designated reflexivity identification of s with itself.
  ShapeIdent refl_ident(const Shape& s) const;
};

using SigPtr = std::shared_ptr<const ContainerSig>;

/// Shapes of the result are [side, inner key...]; side 0 is `left`.
/// Throws IndexTypeMismatch if the index types differ.
SigPtr coproduct(SigPtr left, SigPtr right);

/// A container over the same indices as `like` with no shapes at all.
SigPtr no_shapes_like(SigPtr like);

/// A container over a discrete finite set of labels. Each row is a shape
/// with a target label and named positions with source labels.
class FiniteContainerTable final : public ContainerSig {
 public:
  struct Row {
    std::string name;
    std::string target;
    std::vector<std::pair<std::string, std::string>> positions;  // (PosId, source label)
  };

  FiniteContainerTable(std::vector<std::string> labels, std::vector<Row> rows);

  int num_labels() const { return static_cast<int>(labels_.size()); }
  int num_shapes() const { return static_cast<int>(rows_.size()); }
  Shape shape(int row) const { return Shape{{row}}; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<Row>& rows() const { return rows_; }
  Index label_index(const std::string& label) const;

  IndexType index_type() const override;
  std::string index_name(Index i) const override;
  std::span<const IdxPath> idx_paths(Index i0, Index i1) const override;
  IdxPath refl(Index) const override { return {}; }
  bool valid_shape(const Shape& s) const override;
  Index target(const Shape& s) const override;
  int num_positions(const Shape& s) const override;
  Index source(const Shape& s, int pos) const override;
  std::string shape_name(const Shape& s) const override;
  void for_each_ident(const Shape& s0, const Shape& s1, const Candidates& cand,
                      const IdentSink& sink) const override;
  std::vector<Shape> shapes_over(std::span<const Index> indices) const override;
  std::uint64_t shape_class(const Shape& s) const override { return static_cast<std::uint64_t>(s.key.at(0)); }

 private:
  struct Compiled {
    Index target;
    std::vector<Index> sources;
  };

  std::vector<std::string> labels_;
  std::vector<Row> rows_;
  std::vector<Compiled> compiled_;
  std::vector<IdxPath> refl_only_{IdxPath{}};
};

/// Random table: 1..max_labels labels, 1..max_shapes shapes, 0..max_positions
/// positions per shape. Deterministic for a given engine state.
FiniteContainerTable random_table(std::mt19937_64& rng, int max_labels = 3, int max_shapes = 4,
                                  int max_positions = 2);

/// A family over a finite set of indices: inhabitants 0..n-1 at each index,
/// and for each pair of inhabitants and each index path between their
/// indices, the number of dependent-equality witnesses over that path.
class FamilyAssignment {
 public:
  void set_inhabitants(Index i, int count, bool prop_valued = false);
  void set_witnesses(Index i0, int x0, Index i1, int x1, const IdxPath& q, std::uint64_t count);

  std::vector<Index> indices() const;
  bool has_index(Index i) const { return inhabitants_.count(i) != 0; }
  int inhabitants(Index i) const;
  bool prop_valued(Index i) const;
  std::optional<std::uint64_t> witnesses(Index i0, int x0, Index i1, int x1, const IdxPath& q) const;
  /// Σ over idx_paths(i0, i1) of the witness counts.
  std::uint64_t total_witnesses(const ContainerSig& sig, Index i0, int x0, Index i1, int x1) const;

  /// Throws PreconditionViolated when some inhabitant pair lacks a count for
  /// a path, or a prop-valued index has a pair with more than one witness.
  void validate(const ContainerSig& sig) const;

 private:
  std::map<Index, std::pair<int, bool>> inhabitants_;
  std::map<std::tuple<Index, int, Index, int, IdxPath>, std::uint64_t> counts_;
};

/// Samples a family on `indices` with 1..max_inhabitants inhabitants each.
/// Each inhabitant pair gets witnesses on at most one path (a proposition);
/// with probability `nonprop_rate` a pair instead gets two witnesses.
FamilyAssignment sample_family(const ContainerSig& sig, std::span<const Index> indices, std::mt19937_64& rng,
                               int max_inhabitants = 2, double nonprop_rate = 0.0);

struct ExtElement {
  Shape shape;
  std::vector<int> args;  // inhabitant of F(source(shape, p)) for each position p

  friend auto operator<=>(const ExtElement&, const ExtElement&) = default;
};

/// All (s, t) with target(s) = i and t assigning inhabitants to positions.
std::vector<ExtElement> ext_enumerate(const ContainerSig& sig, const FamilyAssignment& family, Index i,
                                      std::uint64_t cap = 1'000'000);

struct RetainsViolation {
  ExtElement e0, e1;
  Index i0 = 0, i1 = 0;
  std::uint64_t witnesses = 0;
};

struct RetainsReport {
  std::uint64_t cases = 0;
  std::uint64_t vacuous = 0;  // pairs whose premise fails
  std::vector<RetainsViolation> violations;

  bool passed() const { return violations.empty(); }
};

/// Checks retention of 0-truncation over the family's indices: whenever all
/// child pairs have propositional witness sets, the equality witness set of
/// the two extension elements (summed over shape identifications) must be a
/// proposition.
RetainsReport retains_check(const ContainerSig& sig, const FamilyAssignment& family, int level = 0);

std::string to_string(const ContainerSig& sig, const ExtElement& e);

}  // namespace vk
