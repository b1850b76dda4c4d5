#pragma once

// Brute-force reference computations used by the tests. None of them call
// the kernel's own algorithms beyond the plain data types.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "vk/colimits.hpp"
#include "vk/universe.hpp"

namespace oracle {

/// Connected components of B ⊔ C under b ~ c whenever some a has f a = b and
/// g a = c, found by repeated relaxation of a labelling (no union-find).
inline int pushout_size(const vk::Span& s) {
  const int n = s.B.size + s.C.size;
  std::vector<int> label(static_cast<std::size_t>(n));
  std::iota(label.begin(), label.end(), 0);
  for (bool changed = true; changed;) {
    changed = false;
    for (int a = 0; a < s.A.size; ++a) {
      int& x = label[static_cast<std::size_t>(s.f(a))];
      int& y = label[static_cast<std::size_t>(s.B.size + s.g(a))];
      if (x != y) {
        const int m = std::min(x, y);
        for (int& l : label)
          if (l == x || l == y) l = m;
        changed = true;
      }
    }
  }
  std::vector<int> sorted = label;
  std::sort(sorted.begin(), sorted.end());
  return static_cast<int>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

/// All maps dom -> cod as target vectors, by odometer.
inline std::vector<std::vector<int>> all_maps(int dom, int cod) {
  std::vector<std::vector<int>> out;
  if (dom > 0 && cod == 0) return out;
  std::vector<int> cur(static_cast<std::size_t>(dom), 0);
  while (true) {
    out.push_back(cur);
    int k = dom - 1;
    while (k >= 0 && ++cur[static_cast<std::size_t>(k)] == cod) cur[static_cast<std::size_t>(k--)] = 0;
    if (k < 0) return out;
  }
}

inline bool injective(const std::vector<int>& f) {
  std::vector<int> s = f;
  std::sort(s.begin(), s.end());
  return std::adjacent_find(s.begin(), s.end()) == s.end();
}

inline std::uint64_t factorial(int n) { return n <= 1 ? 1 : static_cast<std::uint64_t>(n) * factorial(n - 1); }

/// Number of maps w: D -> Z with w∘inl = u and w∘inr = v.
inline int mediating_maps(const vk::PushoutResult& po, const std::vector<int>& u, const std::vector<int>& v,
                          int z) {
  int count = 0;
  for (const auto& w : all_maps(po.D.size, z)) {
    bool ok = true;
    for (std::size_t b = 0; b < u.size() && ok; ++b) ok = w[static_cast<std::size_t>(po.inl(static_cast<int>(b)))] == u[b];
    for (std::size_t c = 0; c < v.size() && ok; ++c) ok = w[static_cast<std::size_t>(po.inr(static_cast<int>(c)))] == v[c];
    count += ok;
  }
  return count;
}

/// Decoded size by direct recursion over the code tree, counting elements
/// rather than using the element codecs.
inline std::uint64_t decoded_size(const vk::NullarySignature& ns, const vk::Code& c) {
  using vk::Former;
  switch (c.former) {
    case Former::N:
    case Former::NBad: return static_cast<std::uint64_t>(ns.size(ns.find(c.name)));
    case Former::Unit: return 1;
    case Former::Empty: return 0;
    case Former::Sum: return decoded_size(ns, c.args[0]) + decoded_size(ns, c.args[1]);
    case Former::Sigma: {
      std::uint64_t n = 0;
      for (std::size_t i = 1; i < c.args.size(); ++i) n += decoded_size(ns, c.args[i]);
      return n;
    }
    case Former::Pi: {
      std::uint64_t n = 1;
      for (std::size_t i = 1; i < c.args.size(); ++i) n *= decoded_size(ns, c.args[i]);
      return n;
    }
    case Former::Id: return c.elems[0] == c.elems[1] ? 1 : 0;
    case Former::Po0: {
      const int a0 = static_cast<int>(decoded_size(ns, c.args[0]));
      const int a1 = static_cast<int>(decoded_size(ns, c.args[1]));
      const int a2 = static_cast<int>(decoded_size(ns, c.args[2]));
      const std::vector<int> f(c.elems.begin(), c.elems.begin() + a0);
      const std::vector<int> g(c.elems.begin() + a0, c.elems.end());
      return static_cast<std::uint64_t>(pushout_size(vk::Span({a0}, {a1}, {a2}, vk::ElemMap({a0}, {a1}, f),
                                                               vk::ElemMap({a0}, {a2}, g))));
    }
  }
  return 0;
}

}  // namespace oracle
