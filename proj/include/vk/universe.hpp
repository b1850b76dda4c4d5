#pragma once

// The universe V of type codes over the finite-set model: codes, their
// decodings with element codecs, the V-signature as an indexed container
// over finite sets, equality witness sets between codes, and the verifiers
// for partial univalence, truncation, structural degeneration, coherence and
// the negative control.

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "vk/colimits.hpp"
#include "vk/container.hpp"
#include "vk/report.hpp"
#include "vk/wtrees.hpp"

namespace vk {

/// Canonical order; the numeric value is the first entry of a shape key.
enum class Former : int { N = 0, Unit, Empty, Sum, Sigma, Pi, Id, Po0, NBad };

std::string_view to_string(Former f);
/// Accepts the surface names unit, empty, sum, sigma, pi, id, po0 (and n,
/// nbad); throws UnknownFormer otherwise.
Former parse_former(std::string_view name);

struct Code {
  Former former = Former::Unit;
  std::string name;        // N, NBad
  std::vector<Code> args;  // Sum: A B; Sigma/Pi: A then the family; Id: A; Po0: A0 A1 A2
  std::vector<int> elems;  // Id: x y; Po0: f's targets then g's targets

  friend bool operator==(const Code&, const Code&) = default;
  friend std::strong_ordering operator<=>(const Code& a, const Code& b);
};

Code CN(std::string name);
Code CNBad(std::string name);
Code CUnit();
Code CEmpty();
Code CSum(Code a, Code b);
Code CSigma(Code a, std::vector<Code> family);
Code CPi(Code a, std::vector<Code> family);
Code CId(Code a, int x, int y);
Code CPo0(Code a0, Code a1, Code a2, std::vector<int> f, std::vector<int> g);

/// S-expression form, accepted back by the expression parser.
std::string to_string(const Code& c);
int node_count(const Code& c);

/// The fixed family of named base sets. Names are distinct.
class NullarySignature {
 public:
  NullarySignature() = default;
  /// Throws DuplicateName, or PreconditionViolated on a negative size.
  explicit NullarySignature(std::vector<std::pair<std::string, int>> entries);

  int count() const { return static_cast<int>(entries_.size()); }
  const std::string& name(int m) const { return entries_.at(static_cast<std::size_t>(m)).first; }
  int size(int m) const { return entries_.at(static_cast<std::size_t>(m)).second; }
  /// -1 when absent.
  int find(std::string_view name) const;
  const std::vector<std::pair<std::string, int>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<std::string, int>> entries_;
};

/// A bijection-invariant predicate on decoded sets, from a closed grammar:
/// none, isprop, iscontr, all, size<=K, size=K.
class PredicateSpec {
 public:
  enum class Kind { None, IsProp, IsContr, All, SizeLe, SizeEq };

  PredicateSpec() = default;
  PredicateSpec(Kind kind, int k = 0);

  /// Throws ParseError on anything outside the grammar.
  static PredicateSpec parse(std::string_view text);

  Kind kind() const { return kind_; }
  int k() const { return k_; }
  std::string name() const;
  /// True iff every set satisfying the predicate has at most one element.
  bool implies_prop() const;
  bool holds(int size) const;
  PredOnIndex on_index() const;

  friend bool operator==(const PredicateSpec&, const PredicateSpec&) = default;

 private:
  Kind kind_ = Kind::None;
  int k_ = 0;
};

// Element codecs of the decodings.
namespace codec {
/// Sigma: (a, b) -> offset(a) + b.
int sigma_encode(std::span<const int> fibers, int a, int b);
std::pair<int, int> sigma_decode(std::span<const int> fibers, int e);
/// Pi: f -> Σ f(a)·stride(a), stride(a) = Π_{a'<a} |B(a')|.
int pi_encode(std::span<const int> fibers, std::span<const int> f);
std::vector<int> pi_decode(std::span<const int> fibers, int e);
std::uint64_t pi_size(std::span<const int> fibers);
}  // namespace codec

/// The indexed container of the enabled formers over finite sets. Indices
/// are decoded sizes and index paths are permutations. Shape keys:
///   N, NBad: [f, m]           Unit, Empty: [f]
///   Sum: [f, a, b]            Sigma, Pi: [f, a, b_0 .. b_{a-1}]
///   Id: [f, a, x, y]          Po0: [f, a0, a1, a2, f..., g...]
class VSignature final : public ContainerSig {
 public:
  /// Paths are precomputed for sizes up to `bij_cap` (at most 10).
  VSignature(NullarySignature nullary, std::set<Former> enabled, int bij_cap = 6);

  const NullarySignature& nullary() const { return nullary_; }
  bool enabled(Former f) const { return enabled_.count(f) != 0; }
  const std::set<Former>& formers() const { return enabled_; }
  int bij_cap() const { return bij_cap_; }

  IndexType index_type() const override;
  std::string index_name(Index i) const override;
  std::span<const IdxPath> idx_paths(Index i0, Index i1) const override;
  IdxPath refl(Index i) const override;
  bool valid_shape(const Shape& s) const override;
  Index target(const Shape& s) const override;
  int num_positions(const Shape& s) const override;
  Index source(const Shape& s, int pos) const override;
  std::string shape_name(const Shape& s) const override;
  void for_each_ident(const Shape& s0, const Shape& s1, const Candidates& cand,
                      const IdentSink& sink) const override;
  std::vector<Shape> shapes_over(std::span<const Index> indices) const override;
  std::uint64_t shape_class(const Shape& s) const override;

 private:
  void pi_sigma_idents(bool pi, const Shape& s0, const Shape& s1, const Candidates& cand,
                       const IdentSink& sink) const;
  void po0_idents(const Shape& s0, const Shape& s1, const Candidates& cand, const IdentSink& sink) const;

  NullarySignature nullary_;
  std::set<Former> enabled_;
  int bij_cap_;
  std::vector<std::vector<IdxPath>> perms_;
};

using VSigPtr = std::shared_ptr<const VSignature>;

/// The span of a Po0 shape key, with maps as given.
Span po0_span(const Shape& s);

/// Decoded size. Throws MalformedCode when a family length, an element or a
/// map is out of range, a name is unknown, or the former is not enabled.
FinSet el(const VSignature& sig, const Code& c);

struct Budget {
  int max_nodes = 5;
  int max_size = 6;

  friend auto operator<=>(const Budget&, const Budget&) = default;
};

/// Every code within the budget (the size bound applies to every subcode),
/// ordered by node count, then former, then arguments in enumeration order.
std::vector<Code> enumerate_codes(const VSignature& sig, const Budget& budget, std::size_t cap = 2'000'000);

/// Codes of one budget, interned in the session forest.
struct CodeSpace {
  Budget budget;
  std::vector<Code> codes;
  std::vector<TreeId> ids;
  std::vector<int> sizes;
  std::map<int, std::vector<int>> buckets;  // size -> code positions
  std::unordered_map<TreeId, int> position;

  std::size_t size() const { return codes.size(); }
};

/// Result of one sweep of the engine over all same-size pairs of a code
/// space under one predicate. Buckets whose size satisfies P are evaluated
/// pair by pair and summarized as a histogram of totals; other buckets
/// are evaluated within shape classes and keep their nonzero pairs.
struct PairTable {
  struct Entry {
    int i = 0, j = 0;
    std::uint64_t total = 0;
    PathCounts counts;
  };
  struct Collapsed {
    std::map<std::uint64_t, std::uint64_t> histogram;  // total -> number of pairs
    std::map<std::uint64_t, std::vector<std::pair<int, int>>> examples;
  };

  PredicateSpec pred;
  std::map<int, Collapsed> collapsed;  // by size
  std::vector<Entry> entries;          // sorted by (i, j)
  std::unordered_map<std::uint64_t, std::size_t> lookup;
  std::uint64_t evaluated = 0;
  std::uint64_t skipped_by_class = 0;

  /// Total path count for a same-size pair of a non-collapsed bucket.
  const Entry* find(int i, int j) const;
  bool related(const CodeSpace& space, int i, int j) const;
};

/// A verification session: one signature, one forest, one engine per
/// predicate, and cached code spaces and sweeps.
class Universe {
 public:
  explicit Universe(VSigPtr sig);

  const VSignature& sig() const { return *sig_; }
  const VSigPtr& sig_ptr() const { return sig_; }
  Forest& forest() { return forest_; }

  TreeId intern(const Code& c);
  EqEngine& engine(const PredicateSpec& pred);

  const CodeSpace& codes(const Budget& budget);
  const PairTable& sweep(const PredicateSpec& pred, const Budget& budget);

  /// Throws PreconditionViolated unless p : el(c0) -> el(c1).
  WitnessSet eqv_witnesses(const PredicateSpec& pred, const Bij& p, const Code& c0, const Code& c1);
  std::vector<std::pair<Bij, Witness>> eqv_total(const PredicateSpec& pred, const Code& c0, const Code& c1);
  std::uint64_t eqv_count(const PredicateSpec& pred, const Code& c0, const Code& c1);
  bool is_equal(const PredicateSpec& pred, const Code& c0, const Code& c1);
  Witness encode_refl(const PredicateSpec& pred, const Code& c);

 private:
  VSigPtr sig_;
  Forest forest_;
  std::map<std::string, std::unique_ptr<EqEngine>> engines_;
  std::map<Budget, std::unique_ptr<CodeSpace>> spaces_;
  std::map<std::pair<std::string, Budget>, std::unique_ptr<PairTable>> sweeps_;
};

// Verifiers. Each report counts ordered pairs of the budget's code space.

/// For every pair of P-codes: |eqv_total| = |enum_bijs(el c0, el c1)|.
VerifyReport verify_partial_univalence(Universe& u, const PredicateSpec& pred, const Budget& budget);
/// For every pair: |eqv_total| <= 1. Throws PreconditionViolated when P
/// does not imply prop unless `force` is set.
VerifyReport verify_truncated(Universe& u, const PredicateSpec& pred, const Budget& budget, bool force = false);
/// Looks for a pair with |eqv_total| >= 2 and reports it in the notes;
/// NO-WITNESS when there is none. Throws PreconditionViolated if P implies prop.
VerifyReport negative_control(Universe& u, const PredicateSpec& pred, const Budget& budget);
/// With P = none: codes are equal exactly when structurally identical, and
/// then only along the identity.
VerifyReport verify_structural(Universe& u, const Budget& budget);
/// Equivalence relation (reflexive with encode_refl membership, symmetric
/// along inverses, transitive along composites) and congruence for
/// Pi, Sigma and Sum.
VerifyReport verify_coherence(Universe& u, const PredicateSpec& pred, const Budget& budget);

// Value-level entry points over a fresh session.

WitnessSet eqv_witnesses(const VSigPtr& sig, const PredicateSpec& pred, const Bij& p, const Code& c0,
                         const Code& c1);
std::vector<std::pair<Bij, Witness>> eqv_total(const VSigPtr& sig, const PredicateSpec& pred, const Code& c0,
                                               const Code& c1);
bool is_equal(const VSigPtr& sig, const PredicateSpec& pred, const Code& c0, const Code& c1);

}  // namespace vk
