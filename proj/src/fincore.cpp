#include "vk/fincore.hpp"

#include <algorithm>
#include <numeric>

#include "vk/error.hpp"

namespace vk {

ElemMap::ElemMap(FinSet dom, FinSet cod, std::vector<int> targets)
    : dom_(dom), cod_(cod), targets_(std::move(targets)) {
  if (dom.size < 0 || cod.size < 0) throw Error(ErrorCode::DomainMismatch, "negative set size");
  if (static_cast<int>(targets_.size()) != dom.size)
    throw Error(ErrorCode::DomainMismatch, "map table length differs from domain size");
  for (int t : targets_)
    if (t < 0 || t >= cod.size) throw Error(ErrorCode::DomainMismatch, "map target outside codomain");
}

ElemMap ElemMap::identity(FinSet set) {
  std::vector<int> t(static_cast<std::size_t>(set.size));
  std::iota(t.begin(), t.end(), 0);
  return ElemMap(set, set, std::move(t));
}

ElemMap compose(const ElemMap& first, const ElemMap& second) {
  if (first.cod() != second.dom()) throw Error(ErrorCode::DomainMismatch, "compose: codomain/domain mismatch");
  std::vector<int> t;
  t.reserve(first.targets().size());
  for (int x : first.targets()) t.push_back(second(x));
  return ElemMap(first.dom(), second.cod(), std::move(t));
}

Bij::Bij(ElemMap fwd, ElemMap inv) : fwd_(std::move(fwd)), inv_(std::move(inv)) {
  if (fwd_.dom() != inv_.cod() || fwd_.cod() != inv_.dom())
    throw Error(ErrorCode::DomainMismatch, "bijection halves have mismatched sets");
  for (int x = 0; x < fwd_.dom().size; ++x)
    if (inv_(fwd_(x)) != x) throw Error(ErrorCode::DomainMismatch, "inv is not a left inverse of fwd");
  for (int y = 0; y < fwd_.cod().size; ++y)
    if (fwd_(inv_(y)) != y) throw Error(ErrorCode::DomainMismatch, "inv is not a right inverse of fwd");
}

Bij Bij::identity(FinSet set) { return Bij(ElemMap::identity(set), ElemMap::identity(set)); }

Bij Bij::from_perm(std::vector<int> perm) {
  const int n = static_cast<int>(perm.size());
  std::vector<int> inv(perm.size(), -1);
  for (int x = 0; x < n; ++x) {
    const int y = perm[static_cast<std::size_t>(x)];
    if (y < 0 || y >= n || inv[static_cast<std::size_t>(y)] != -1)
      throw Error(ErrorCode::DomainMismatch, "not a permutation");
    inv[static_cast<std::size_t>(y)] = x;
  }
  return Bij(ElemMap({n}, {n}, std::move(perm)), ElemMap({n}, {n}, std::move(inv)));
}

bool Bij::is_identity() const {
  const auto t = fwd_.targets();
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] != static_cast<int>(i)) return false;
  return true;
}

Bij compose_bij(const Bij& p, const Bij& q) {
  if (p.cod() != q.dom()) throw Error(ErrorCode::DomainMismatch, "compose_bij: cod(p) != dom(q)");
  return Bij(compose(p.fwd(), q.fwd()), compose(q.inv(), p.inv()));
}

Bij invert_bij(const Bij& p) { return Bij(p.inv(), p.fwd()); }

TruncLevel trunc_level(FinSet set) {
  if (set.size == 1) return TruncLevel::Contractible;
  if (set.size == 0) return TruncLevel::Prop;
  return TruncLevel::Set;
}

std::vector<ElemMap> enum_maps(FinSet a, FinSet b, const EnumLimits& limits) {
  std::uint64_t count = 1;
  for (int i = 0; i < a.size; ++i) {
    count *= static_cast<std::uint64_t>(b.size);
    if (count > limits.max_maps)
      throw Error(ErrorCode::EnumerationTooLarge,
                  "enum_maps: " + std::to_string(b.size) + "^" + std::to_string(a.size) + " exceeds cap");
    if (count == 0) break;
  }
  std::vector<ElemMap> out;
  if (count == 0) return out;
  out.reserve(count);
  std::vector<int> t(static_cast<std::size_t>(a.size), 0);
  while (true) {
    out.emplace_back(a, b, t);
    int i = a.size - 1;
    while (i >= 0 && t[static_cast<std::size_t>(i)] == b.size - 1) t[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) break;
    ++t[static_cast<std::size_t>(i)];
  }
  return out;
}

std::vector<Bij> enum_bijs(FinSet a, FinSet b, const EnumLimits& limits) {
  if (a.size != b.size) return {};
  if (a.size > limits.max_bij_size)
    throw Error(ErrorCode::EnumerationTooLarge,
                "enum_bijs: size " + std::to_string(a.size) + " exceeds bijection cap " +
                    std::to_string(limits.max_bij_size));
  std::vector<int> perm(static_cast<std::size_t>(a.size));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Bij> out;
  do {
    out.push_back(Bij::from_perm(perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

std::uint64_t factorial(int n) {
  std::uint64_t r = 1;
  for (int i = 2; i <= n; ++i) {
    if (r > UINT64_MAX / static_cast<std::uint64_t>(i))
      throw Error(ErrorCode::EnumerationTooLarge, "factorial overflow");
    r *= static_cast<std::uint64_t>(i);
  }
  return r;
}

std::string to_string(const ElemMap& map) {
  std::string s = "(";
  for (std::size_t i = 0; i < map.targets().size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(map.targets()[i]);
  }
  return s + ")";
}

}  // namespace vk
