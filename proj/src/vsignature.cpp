#include <algorithm>
#include <numeric>

#include "vk/error.hpp"
#include "vk/universe.hpp"

namespace vk {

namespace {

std::uint64_t hash_ints(std::initializer_list<int> head, std::span<const int> tail = {}) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](int x) {
    h ^= static_cast<std::uint32_t>(x);
    h *= 1099511628211ULL;
  };
  for (int x : head) mix(x);
  for (int x : tail) mix(x);
  return h;
}

Former former_of(const Shape& s) { return static_cast<Former>(s.key.at(0)); }

std::span<const int> fibers_of(const Shape& s) { return std::span<const int>(s.key).subspan(2); }

}  // namespace

Span po0_span(const Shape& s) {
  const auto& k = s.key;
  const int a0 = k.at(1);
  const auto f_begin = k.begin() + 4;
  const auto g_begin = f_begin + a0;
  return Span({a0}, {k.at(2)}, {k.at(3)}, ElemMap({a0}, {k[2]}, {f_begin, g_begin}),
              ElemMap({a0}, {k[3]}, {g_begin, g_begin + a0}));
}

VSignature::VSignature(NullarySignature nullary, std::set<Former> enabled, int bij_cap)
    : nullary_(std::move(nullary)), enabled_(std::move(enabled)), bij_cap_(bij_cap) {
  if (bij_cap < 0 || bij_cap > 10)
    throw Error(ErrorCode::PreconditionViolated, "bijection cap must lie in 0..10");
  perms_.resize(static_cast<std::size_t>(bij_cap) + 1);
  for (int n = 0; n <= bij_cap; ++n) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    auto& out = perms_[static_cast<std::size_t>(n)];
    out.reserve(static_cast<std::size_t>(factorial(n)));
    do out.emplace_back(perm);
    while (std::next_permutation(perm.begin(), perm.end()));
  }
}

IndexType VSignature::index_type() const { return {IndexType::Kind::FiniteSets, {}}; }

std::string VSignature::index_name(Index i) const { return "Fin" + std::to_string(i); }

std::span<const IdxPath> VSignature::idx_paths(Index i0, Index i1) const {
  if (i0 != i1 || i0 < 0) return {};
  if (i0 > bij_cap_)
    throw Error(ErrorCode::EnumerationTooLarge, "bijections of a " + std::to_string(i0) +
                                                    "-element set exceed the cap of " + std::to_string(bij_cap_));
  return perms_[static_cast<std::size_t>(i0)];
}

IdxPath VSignature::refl(Index i) const { return IdxPath::identity(i); }

bool VSignature::valid_shape(const Shape& s) const {
  const auto& k = s.key;
  if (k.empty() || k[0] < 0 || k[0] > static_cast<int>(Former::NBad)) return false;
  const Former f = former_of(s);
  if (!enabled(f)) return false;
  auto nonneg = [&](std::size_t from) {
    return std::all_of(k.begin() + static_cast<std::ptrdiff_t>(from), k.end(), [](int x) { return x >= 0; });
  };
  switch (f) {
    case Former::N:
    case Former::NBad: return k.size() == 2 && k[1] >= 0 && k[1] < nullary_.count();
    case Former::Unit:
    case Former::Empty: return k.size() == 1;
    case Former::Sum: return k.size() == 3 && nonneg(1);
    case Former::Sigma:
    case Former::Pi: return k.size() >= 2 && nonneg(1) && static_cast<int>(k.size()) == 2 + k[1];
    case Former::Id: return k.size() == 4 && nonneg(1) && k[2] < k[1] && k[3] < k[1];
    case Former::Po0: {
      if (k.size() < 4 || !nonneg(1)) return false;
      const int a0 = k[1];
      if (static_cast<int>(k.size()) != 4 + 2 * a0) return false;
      for (int x = 0; x < a0; ++x)
        if (k[static_cast<std::size_t>(4 + x)] >= k[2] || k[static_cast<std::size_t>(4 + a0 + x)] >= k[3]) return false;
      return true;
    }
  }
  return false;
}

Index VSignature::target(const Shape& s) const {
  const auto& k = s.key;
  switch (former_of(s)) {
    case Former::N:
    case Former::NBad: return nullary_.size(k.at(1));
    case Former::Unit: return 1;
    case Former::Empty: return 0;
    case Former::Sum: return k.at(1) + k.at(2);
    case Former::Sigma: {
      const auto fib = fibers_of(s);
      return std::accumulate(fib.begin(), fib.end(), 0);
    }
    case Former::Pi: return static_cast<Index>(codec::pi_size(fibers_of(s)));
    case Former::Id: return k.at(2) == k.at(3) ? 1 : 0;
    case Former::Po0: return pushout(po0_span(s)).D.size;
  }
  throw Error(ErrorCode::MalformedCode, "unknown former in shape");
}

int VSignature::num_positions(const Shape& s) const {
  switch (former_of(s)) {
    case Former::Sum: return 2;
    case Former::Sigma:
    case Former::Pi: return 1 + s.key.at(1);
    case Former::Id: return 1;
    case Former::Po0: return 3;
    default: return 0;
  }
}

Index VSignature::source(const Shape& s, int pos) const {
  const auto& k = s.key;
  switch (former_of(s)) {
    case Former::Sum:
    case Former::Po0: return k.at(static_cast<std::size_t>(1 + pos));
    case Former::Sigma:
    case Former::Pi: return pos == 0 ? k.at(1) : k.at(static_cast<std::size_t>(1 + pos));
    case Former::Id: return k.at(1);
    default: throw Error(ErrorCode::PreconditionViolated, "shape has no positions");
  }
}

std::string VSignature::shape_name(const Shape& s) const {
  const Former f = former_of(s);
  if (f == Former::N || f == Former::NBad) return std::string(to_string(f)) + ":" + nullary_.name(s.key.at(1));
  return std::string(to_string(f));
}

std::uint64_t VSignature::shape_class(const Shape& s) const {
  const auto& k = s.key;
  switch (former_of(s)) {
    case Former::Sigma:
    case Former::Pi: {
      std::vector<int> fib(k.begin() + 2, k.end());
      std::sort(fib.begin(), fib.end());
      return hash_ints({k[0], k[1]}, fib);
    }
    case Former::Id: return hash_ints({k[0], k[1], k[2] == k[3] ? 1 : 0});
    case Former::Po0: return hash_ints({k[0], k[1], k[2], k[3]});
    default: return hash_ints({}, k);
  }
}

void VSignature::for_each_ident(const Shape& s0, const Shape& s1, const Candidates& cand,
                                const IdentSink& sink) const {
  const auto& k0 = s0.key;
  const auto& k1 = s1.key;
  if (k0.at(0) != k1.at(0)) return;  // different formers: no identifications
  switch (former_of(s0)) {
    case Former::N:
      // Discrete names; the only path is the action of N on refl.
      if (k0[1] == k1[1]) sink({IdxPath::identity(nullary_.size(k0[1])), {}, {}});
      return;
    case Former::NBad:
      if (k0[1] == k1[1]) {
        const int n = nullary_.size(k0[1]);
        for (const IdxPath& p : idx_paths(n, n)) sink({p, {}, {}});
      }
      return;
    case Former::Unit: sink({IdxPath::identity(1), {}, {}}); return;
    case Former::Empty: sink({IdxPath::identity(0), {}, {}}); return;
    case Former::Sum: {
      const int a = k0[1];
      const int b = k0[2];
      if (k1[1] != a || k1[2] != b) return;
      const auto pas = cand(0, 0);
      if (pas.empty()) return;
      const auto pbs = cand(1, 1);
      std::vector<int> t(static_cast<std::size_t>(a + b));
      for (const IdxPath& pa : pas)
        for (const IdxPath& pb : pbs) {
          for (int x = 0; x < a; ++x) t[static_cast<std::size_t>(x)] = pa(x);
          for (int y = 0; y < b; ++y) t[static_cast<std::size_t>(a + y)] = a + pb(y);
          sink({IdxPath(t), {0, 1}, {pa, pb}});
        }
      return;
    }
    case Former::Sigma: pi_sigma_idents(false, s0, s1, cand, sink); return;
    case Former::Pi: pi_sigma_idents(true, s0, s1, cand, sink); return;
    case Former::Id: {
      if (k1[1] != k0[1]) return;
      const IdxPath target = IdxPath::identity(k0[2] == k0[3] ? 1 : 0);
      for (const IdxPath& pa : cand(0, 0))
        if (pa(k0[2]) == k1[2] && pa(k0[3]) == k1[3]) sink({target, {0}, {pa}});
      return;
    }
    case Former::Po0: po0_idents(s0, s1, cand, sink); return;
  }
}

void VSignature::pi_sigma_idents(bool pi, const Shape& s0, const Shape& s1, const Candidates& cand,
                                 const IdentSink& sink) const {
  const int a = s0.key[1];
  if (s1.key[1] != a) return;
  const auto fib0 = fibers_of(s0);
  const auto fib1 = fibers_of(s1);
  const auto pas = cand(0, 0);
  if (pas.empty()) return;

  const int total0 = target(s0);
  std::vector<int> offset1(static_cast<std::size_t>(a) + 1, 0);
  for (int i = 0; i < a; ++i) offset1[static_cast<std::size_t>(i) + 1] = offset1[static_cast<std::size_t>(i)] + fib1[static_cast<std::size_t>(i)];
  std::vector<std::vector<int>> pi_args;
  if (pi)
    for (int e = 0; e < total0; ++e) pi_args.push_back(codec::pi_decode(fib0, e));

  std::vector<std::span<const IdxPath>> pools(static_cast<std::size_t>(a));
  std::vector<std::size_t> digit(static_cast<std::size_t>(a));
  std::vector<int> t(static_cast<std::size_t>(total0));
  std::vector<int> g(static_cast<std::size_t>(a));
  for (const IdxPath& pa : pas) {
    bool empty = false;
    for (int i = 0; i < a && !empty; ++i) {
      pools[static_cast<std::size_t>(i)] = cand(1 + i, 1 + pa(i));
      empty = pools[static_cast<std::size_t>(i)].empty();
    }
    if (empty) continue;
    std::fill(digit.begin(), digit.end(), 0);
    while (true) {
      auto pb = [&](int i) -> const IdxPath& { return pools[static_cast<std::size_t>(i)][digit[static_cast<std::size_t>(i)]]; };
      if (pi) {
        // g(pA a) = pB_a(f a)
        for (int e = 0; e < total0; ++e) {
          const auto& f = pi_args[static_cast<std::size_t>(e)];
          for (int i = 0; i < a; ++i) g[static_cast<std::size_t>(pa(i))] = pb(i)(f[static_cast<std::size_t>(i)]);
          t[static_cast<std::size_t>(e)] = codec::pi_encode(fib1, g);
        }
      } else {
        int e = 0;
        for (int i = 0; i < a; ++i)
          for (int b = 0; b < fib0[static_cast<std::size_t>(i)]; ++b)
            t[static_cast<std::size_t>(e++)] = offset1[static_cast<std::size_t>(pa(i))] + pb(i)(b);
      }
      ShapeIdent id{IdxPath(t), {0}, {pa}};
      for (int i = 0; i < a; ++i) {
        id.pos_match.push_back(1 + pa(i));
        id.src_paths.push_back(pb(i));
      }
      sink(id);
      std::size_t i = static_cast<std::size_t>(a);
      while (i > 0 && digit[i - 1] + 1 == pools[i - 1].size()) digit[--i] = 0;
      if (i == 0) break;
      ++digit[i - 1];
    }
  }
}

void VSignature::po0_idents(const Shape& s0, const Shape& s1, const Candidates& cand, const IdentSink& sink) const {
  const auto& k0 = s0.key;
  const auto& k1 = s1.key;
  if (k0[1] != k1[1] || k0[2] != k1[2] || k0[3] != k1[3]) return;
  const int a0 = k0[1];
  const int a1 = k0[2];
  const int a2 = k0[3];
  const auto p0s = cand(0, 0);
  if (p0s.empty()) return;
  const auto p1s = cand(1, 1);
  const auto p2s = cand(2, 2);
  if (p1s.empty() || p2s.empty()) return;
  const Span span0 = po0_span(s0);
  const Span span1 = po0_span(s1);
  const PushoutResult d0 = pushout(span0);
  const PushoutResult d1 = pushout(span1);
  if (d0.D.size != d1.D.size) return;
  std::vector<int> t(static_cast<std::size_t>(d0.D.size));
  for (const IdxPath& p0 : p0s)
    for (const IdxPath& p1 : p1s) {
      bool f_ok = true;
      for (int x = 0; x < a0 && f_ok; ++x) f_ok = p1(span0.f(x)) == span1.f(p0(x));
      if (!f_ok) continue;
      for (const IdxPath& p2 : p2s) {
        bool g_ok = true;
        for (int x = 0; x < a0 && g_ok; ++x) g_ok = p2(span0.g(x)) == span1.g(p0(x));
        if (!g_ok) continue;
        // Induced map on the pushout, well defined because the squares commute.
        for (int b = 0; b < a1; ++b) t[static_cast<std::size_t>(d0.inl(b))] = d1.inl(p1(b));
        for (int c = 0; c < a2; ++c) t[static_cast<std::size_t>(d0.inr(c))] = d1.inr(p2(c));
        sink({IdxPath(t), {0, 1, 2}, {p0, p1, p2}});
      }
    }
}

std::vector<Shape> VSignature::shapes_over(std::span<const Index> indices) const {
  std::vector<Shape> out;
  const auto add = [&](std::vector<int> key) { out.push_back(Shape{std::move(key)}); };
  for (Former former : enabled_) {
    const int tag = static_cast<int>(former);
    switch (former) {
      case Former::N:
      case Former::NBad:
        for (int m = 0; m < nullary_.count(); ++m) add({tag, m});
        break;
      case Former::Unit:
      case Former::Empty: add({tag}); break;
      case Former::Sum:
        for (Index a : indices)
          for (Index b : indices) add({tag, a, b});
        break;
      case Former::Sigma:
      case Former::Pi:
        for (Index a : indices) {
          if (a < 0) continue;
          std::vector<std::size_t> digit(static_cast<std::size_t>(a), 0);
          if (a > 0 && indices.empty()) continue;
          while (true) {
            std::vector<int> key{tag, a};
            for (std::size_t i = 0; i < digit.size(); ++i) key.push_back(indices[digit[i]]);
            add(std::move(key));
            std::size_t i = digit.size();
            while (i > 0 && digit[i - 1] + 1 == indices.size()) digit[--i] = 0;
            if (i == 0) break;
            ++digit[i - 1];
          }
        }
        break;
      case Former::Id:
        for (Index a : indices)
          for (int x = 0; x < a; ++x)
            for (int y = 0; y < a; ++y) add({tag, a, x, y});
        break;
      case Former::Po0:
        for (Index a0 : indices)
          for (Index a1 : indices)
            for (Index a2 : indices)
              for (const ElemMap& fm : enum_maps({a0}, {a1}))
                for (const ElemMap& gm : enum_maps({a0}, {a2})) {
                  std::vector<int> key{tag, a0, a1, a2};
                  key.insert(key.end(), fm.targets().begin(), fm.targets().end());
                  key.insert(key.end(), gm.targets().begin(), gm.targets().end());
                  add(std::move(key));
                }
        break;
    }
  }
  return out;
}

}  // namespace vk
