#pragma once

// Canonical finite sets {0..n-1}, maps and bijections between them, and the
// truncation levels -2/-1/0. This is the set-level model every other module
// computes in.

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace vk {

struct FinSet {
  int size = 0;

  friend auto operator<=>(const FinSet&, const FinSet&) = default;
};

/// Caps on exhaustive enumeration. Exceeding one raises EnumerationTooLarge.
struct EnumLimits {
  std::uint64_t max_maps = 1'000'000;
  int max_bij_size = 6;
};

class ElemMap {
 public:
  ElemMap() = default;
  ElemMap(FinSet dom, FinSet cod, std::vector<int> targets);

  static ElemMap identity(FinSet set);

  FinSet dom() const { return dom_; }
  FinSet cod() const { return cod_; }
  int operator()(int x) const { return targets_[static_cast<std::size_t>(x)]; }
  std::span<const int> targets() const { return targets_; }

  friend auto operator<=>(const ElemMap&, const ElemMap&) = default;

 private:
  FinSet dom_;
  FinSet cod_;
  std::vector<int> targets_;
};

/// `second ∘ first`; requires first.cod() == second.dom().
ElemMap compose(const ElemMap& first, const ElemMap& second);

/// A path in the model universe: an invertible map with its inverse.
class Bij {
 public:
  Bij() = default;
  Bij(ElemMap fwd, ElemMap inv);

  static Bij identity(FinSet set);
  /// Builds the bijection from its forward table; throws DomainMismatch if
  /// `perm` is not a permutation.
  static Bij from_perm(std::vector<int> perm);

  FinSet dom() const { return fwd_.dom(); }
  FinSet cod() const { return fwd_.cod(); }
  int operator()(int x) const { return fwd_(x); }
  const ElemMap& fwd() const { return fwd_; }
  const ElemMap& inv() const { return inv_; }
  bool is_identity() const;

  friend bool operator==(const Bij& a, const Bij& b) { return a.fwd_ == b.fwd_; }
  friend auto operator<=>(const Bij& a, const Bij& b) { return a.fwd_ <=> b.fwd_; }

 private:
  ElemMap fwd_;
  ElemMap inv_;
};

/// First p, then q. Requires p.cod() == q.dom().
Bij compose_bij(const Bij& p, const Bij& q);
Bij invert_bij(const Bij& p);

enum class TruncLevel : int { Contractible = -2, Prop = -1, Set = 0 };

TruncLevel trunc_level(FinSet set);
inline bool is_prop(FinSet set) { return set.size <= 1; }
inline bool is_contr(FinSet set) { return set.size == 1; }

/// All |b|^|a| maps, lexicographic in their target sequences.
std::vector<ElemMap> enum_maps(FinSet a, FinSet b, const EnumLimits& limits = {});

/// All bijections a -> b in lexicographic order; empty when sizes differ.
std::vector<Bij> enum_bijs(FinSet a, FinSet b, const EnumLimits& limits = {});

/// n! with overflow reported as EnumerationTooLarge.
std::uint64_t factorial(int n);

std::string to_string(const ElemMap& map);

}  // namespace vk
