#include <algorithm>
#include <charconv>
#include <limits>
#include <set>

#include "vk/error.hpp"
#include "vk/universe.hpp"

namespace vk {

// ---------------------------------------------------------------------------
// Formers and codes

namespace {

constexpr std::string_view kFormerNames[] = {"n", "unit", "empty", "sum", "sigma", "pi", "id", "po0", "nbad"};

}  // namespace

std::string_view to_string(Former f) { return kFormerNames[static_cast<int>(f)]; }

Former parse_former(std::string_view name) {
  for (int i = 0; i < static_cast<int>(std::size(kFormerNames)); ++i)
    if (kFormerNames[i] == name) return static_cast<Former>(i);
  throw Error(ErrorCode::UnknownFormer, "unknown former '" + std::string(name) + "'");
}

Code CN(std::string name) { return {Former::N, std::move(name), {}, {}}; }
Code CNBad(std::string name) { return {Former::NBad, std::move(name), {}, {}}; }
Code CUnit() { return {Former::Unit, {}, {}, {}}; }
Code CEmpty() { return {Former::Empty, {}, {}, {}}; }
Code CSum(Code a, Code b) { return {Former::Sum, {}, {std::move(a), std::move(b)}, {}}; }

Code CSigma(Code a, std::vector<Code> family) {
  family.insert(family.begin(), std::move(a));
  return {Former::Sigma, {}, std::move(family), {}};
}

Code CPi(Code a, std::vector<Code> family) {
  family.insert(family.begin(), std::move(a));
  return {Former::Pi, {}, std::move(family), {}};
}

Code CId(Code a, int x, int y) { return {Former::Id, {}, {std::move(a)}, {x, y}}; }

Code CPo0(Code a0, Code a1, Code a2, std::vector<int> f, std::vector<int> g) {
  f.insert(f.end(), g.begin(), g.end());
  return {Former::Po0, {}, {std::move(a0), std::move(a1), std::move(a2)}, std::move(f)};
}

std::strong_ordering operator<=>(const Code& a, const Code& b) {
  if (const auto c = a.former <=> b.former; c != 0) return c;
  if (const auto c = a.name <=> b.name; c != 0) return c;
  if (const auto c = std::lexicographical_compare_three_way(a.args.begin(), a.args.end(), b.args.begin(),
                                                            b.args.end());
      c != 0)
    return c;
  return a.elems <=> b.elems;
}

std::string to_string(const Code& c) {
  std::string s = "(" + std::string(to_string(c.former));
  switch (c.former) {
    case Former::N:
    case Former::NBad:
      return s + " " + c.name + ")";
    case Former::Unit:
    case Former::Empty:
      return s + ")";
    case Former::Sum:
      return s + " " + to_string(c.args[0]) + " " + to_string(c.args[1]) + ")";
    case Former::Sigma:
    case Former::Pi: {
      s += " " + to_string(c.args[0]) + " (";
      for (std::size_t i = 1; i < c.args.size(); ++i) s += (i > 1 ? " " : "") + to_string(c.args[i]);
      return s + "))";
    }
    case Former::Id:
      return s + " " + to_string(c.args[0]) + " " + std::to_string(c.elems[0]) + " " + std::to_string(c.elems[1]) +
             ")";
    case Former::Po0: {
      for (const Code& a : c.args) s += " " + to_string(a);
      const std::size_t half = c.elems.size() / 2;
      for (int part = 0; part < 2; ++part) {
        s += " (";
        for (std::size_t k = 0; k < half; ++k)
          s += (k ? " " : "") + std::to_string(c.elems[part * half + k]);
        s += ")";
      }
      return s + ")";
    }
  }
  return s + ")";
}

int node_count(const Code& c) {
  int n = 1;
  for (const Code& a : c.args) n += node_count(a);
  return n;
}

// ---------------------------------------------------------------------------
// Nullary signatures and predicates

NullarySignature::NullarySignature(std::vector<std::pair<std::string, int>> entries) : entries_(std::move(entries)) {
  std::set<std::string> seen;
  for (const auto& [name, size] : entries_) {
    if (!seen.insert(name).second) throw Error(ErrorCode::DuplicateName, "nullary '" + name + "' declared twice");
    if (size < 0) throw Error(ErrorCode::PreconditionViolated, "nullary '" + name + "' has negative size");
  }
}

int NullarySignature::find(std::string_view name) const {
  for (std::size_t m = 0; m < entries_.size(); ++m)
    if (entries_[m].first == name) return static_cast<int>(m);
  return -1;
}

PredicateSpec::PredicateSpec(Kind kind, int k) : kind_(kind), k_(k) {
  if (k < 0) throw Error(ErrorCode::PreconditionViolated, "predicate bound must be nonnegative");
}

PredicateSpec PredicateSpec::parse(std::string_view text) {
  if (text == "none") return {Kind::None};
  if (text == "isprop") return {Kind::IsProp};
  if (text == "iscontr") return {Kind::IsContr};
  if (text == "all") return {Kind::All};
  auto bound = [&](std::string_view digits, Kind kind) -> PredicateSpec {
    int k = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size() || k < 0)
      throw Error(ErrorCode::ParseError, "bad predicate bound in '" + std::string(text) + "'");
    return {kind, k};
  };
  if (text.starts_with("size<=")) return bound(text.substr(6), Kind::SizeLe);
  if (text.starts_with("size=")) return bound(text.substr(5), Kind::SizeEq);
  throw Error(ErrorCode::ParseError, "unknown predicate '" + std::string(text) +
                                         "' (expected none, isprop, iscontr, all, size<=K or size=K)");
}

std::string PredicateSpec::name() const {
  switch (kind_) {
    case Kind::None: return "none";
    case Kind::IsProp: return "isprop";
    case Kind::IsContr: return "iscontr";
    case Kind::All: return "all";
    case Kind::SizeLe: return "size<=" + std::to_string(k_);
    case Kind::SizeEq: return "size=" + std::to_string(k_);
  }
  return "?";
}

bool PredicateSpec::implies_prop() const {
  switch (kind_) {
    case Kind::None:
    case Kind::IsProp:
    case Kind::IsContr: return true;
    case Kind::All: return false;
    case Kind::SizeLe:
    case Kind::SizeEq: return k_ <= 1;
  }
  return false;
}

bool PredicateSpec::holds(int size) const {
  switch (kind_) {
    case Kind::None: return false;
    case Kind::IsProp: return size <= 1;
    case Kind::IsContr: return size == 1;
    case Kind::All: return true;
    case Kind::SizeLe: return size <= k_;
    case Kind::SizeEq: return size == k_;
  }
  return false;
}

PredOnIndex PredicateSpec::on_index() const {
  return {name(), [spec = *this](Index size) { return spec.holds(size); }};
}

// ---------------------------------------------------------------------------
// Codecs

namespace codec {

int sigma_encode(std::span<const int> fibers, int a, int b) {
  int offset = 0;
  for (int i = 0; i < a; ++i) offset += fibers[static_cast<std::size_t>(i)];
  return offset + b;
}

std::pair<int, int> sigma_decode(std::span<const int> fibers, int e) {
  for (std::size_t a = 0; a < fibers.size(); ++a) {
    if (e < fibers[a]) return {static_cast<int>(a), e};
    e -= fibers[a];
  }
  throw Error(ErrorCode::ElementOutOfRange, "sigma element out of range");
}

int pi_encode(std::span<const int> fibers, std::span<const int> f) {
  int e = 0;
  int stride = 1;
  for (std::size_t a = 0; a < fibers.size(); ++a) {
    e += f[a] * stride;
    stride *= fibers[a];
  }
  return e;
}

std::vector<int> pi_decode(std::span<const int> fibers, int e) {
  std::vector<int> f(fibers.size());
  for (std::size_t a = 0; a < fibers.size(); ++a) {
    f[a] = e % fibers[a];
    e /= fibers[a];
  }
  return f;
}

std::uint64_t pi_size(std::span<const int> fibers) {
  std::uint64_t n = 1;
  for (int b : fibers) {
    if (b == 0) return 0;
    n *= static_cast<std::uint64_t>(b);
    if (n > static_cast<std::uint64_t>(std::numeric_limits<int>::max()))
      throw Error(ErrorCode::EnumerationTooLarge, "function space too large");
  }
  return n;
}

}  // namespace codec

// ---------------------------------------------------------------------------
// Decoding

FinSet el(const VSignature& sig, const Code& c) {
  auto bad = [&](const std::string& why) { return Error(ErrorCode::MalformedCode, why + " in " + to_string(c)); };
  if (!sig.enabled(c.former)) throw bad("former '" + std::string(to_string(c.former)) + "' is not enabled");
  auto expect_args = [&](std::size_t n, std::size_t elems) {
    if (c.args.size() != n || c.elems.size() != elems) throw bad("wrong arity");
  };
  switch (c.former) {
    case Former::N:
    case Former::NBad: {
      expect_args(0, 0);
      const int m = sig.nullary().find(c.name);
      if (m < 0) throw bad("unknown nullary '" + c.name + "'");
      return {sig.nullary().size(m)};
    }
    case Former::Unit: expect_args(0, 0); return {1};
    case Former::Empty: expect_args(0, 0); return {0};
    case Former::Sum:
      expect_args(2, 0);
      return {el(sig, c.args[0]).size + el(sig, c.args[1]).size};
    case Former::Sigma:
    case Former::Pi: {
      if (c.args.empty() || !c.elems.empty()) throw bad("wrong arity");
      const int a = el(sig, c.args[0]).size;
      if (static_cast<int>(c.args.size()) - 1 != a) throw bad("family length differs from the base size");
      std::vector<int> fibers;
      for (std::size_t i = 1; i < c.args.size(); ++i) fibers.push_back(el(sig, c.args[i]).size);
      if (c.former == Former::Pi) return {static_cast<int>(codec::pi_size(fibers))};
      int total = 0;
      for (int b : fibers) total += b;
      return {total};
    }
    case Former::Id: {
      expect_args(1, 2);
      const int a = el(sig, c.args[0]).size;
      for (int x : c.elems)
        if (x < 0 || x >= a) throw Error(ErrorCode::ElementOutOfRange, "identity endpoint out of range in " + to_string(c));
      return {c.elems[0] == c.elems[1] ? 1 : 0};
    }
    case Former::Po0: {
      if (c.args.size() != 3) throw bad("wrong arity");
      const FinSet a0 = el(sig, c.args[0]);
      const FinSet a1 = el(sig, c.args[1]);
      const FinSet a2 = el(sig, c.args[2]);
      if (c.elems.size() != 2 * static_cast<std::size_t>(a0.size)) throw bad("maps must have one entry per element");
      const auto half = c.elems.begin() + a0.size;
      try {
        const Span span(a0, a1, a2, ElemMap(a0, a1, {c.elems.begin(), half}),
                        ElemMap(a0, a2, {half, c.elems.end()}));
        return pushout(span).D;
      } catch (const Error& e) {
        throw Error(ErrorCode::ElementOutOfRange, std::string(e.what()) + " in " + to_string(c));
      }
    }
  }
  throw bad("unknown former");
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

struct Sized {
  Code code;
  int size;
};

class Enumerator {
 public:
  Enumerator(const VSignature& sig, const Budget& budget, std::size_t cap)
      : sig_(sig), budget_(budget), cap_(cap), by_nodes_(static_cast<std::size_t>(std::max(budget.max_nodes, 0)) + 1) {}

  std::vector<Code> run() {
    for (int n = 1; n <= budget_.max_nodes; ++n) {
      if (n == 1)
        leaves();
      else
        inner(n);
    }
    std::vector<Code> out;
    for (auto& level : by_nodes_)
      for (auto& s : level) out.push_back(std::move(s.code));
    return out;
  }

 private:
  void emit(int nodes, Code code, int size) {
    if (size > budget_.max_size) return;
    if (++count_ > cap_) throw Error(ErrorCode::EnumerationTooLarge, "more than " + std::to_string(cap_) + " codes");
    by_nodes_[static_cast<std::size_t>(nodes)].push_back({std::move(code), size});
  }

  void leaves() {
    const auto& nul = sig_.nullary();
    if (sig_.enabled(Former::N))
      for (int m = 0; m < nul.count(); ++m) emit(1, CN(nul.name(m)), nul.size(m));
    if (sig_.enabled(Former::Unit)) emit(1, CUnit(), 1);
    if (sig_.enabled(Former::Empty)) emit(1, CEmpty(), 0);
    if (sig_.enabled(Former::NBad))
      for (int m = 0; m < nul.count(); ++m) emit(1, CNBad(nul.name(m)), nul.size(m));
  }

  const std::vector<Sized>& level(int nodes) const { return by_nodes_[static_cast<std::size_t>(nodes)]; }

  void inner(int n) {
    const int r = n - 1;
    if (sig_.enabled(Former::Sum))
      for (int k = 1; k < r; ++k)
        for (const Sized& a : level(k))
          for (const Sized& b : level(r - k)) emit(n, CSum(a.code, b.code), a.size + b.size);
    if (sig_.enabled(Former::Sigma)) families(n, false);
    if (sig_.enabled(Former::Pi)) families(n, true);
    if (sig_.enabled(Former::Id))
      for (const Sized& a : level(r))
        for (int x = 0; x < a.size; ++x)
          for (int y = 0; y < a.size; ++y) emit(n, CId(a.code, x, y), x == y ? 1 : 0);
    if (sig_.enabled(Former::Po0))
      for (int k0 = 1; k0 < r; ++k0)
        for (int k1 = 1; k0 + k1 < r; ++k1) {
          const int k2 = r - k0 - k1;
          for (const Sized& a0 : level(k0))
            for (const Sized& a1 : level(k1))
              for (const Sized& a2 : level(k2))
                for (const ElemMap& f : enum_maps({a0.size}, {a1.size}))
                  for (const ElemMap& g : enum_maps({a0.size}, {a2.size})) {
                    const int d = pushout(Span({a0.size}, {a1.size}, {a2.size}, f, g)).D.size;
                    emit(n, CPo0(a0.code, a1.code, a2.code, {f.targets().begin(), f.targets().end()},
                                 {g.targets().begin(), g.targets().end()}),
                         d);
                  }
        }
  }

  // Sigma/Pi codes with n nodes: a base with k nodes and a family of
  // |base| codes whose node counts form a composition of n - 1 - k.
  void families(int n, bool pi) {
    const int r = n - 1;
    for (int k = 1; k <= r; ++k)
      for (const Sized& a : level(k)) {
        const int rest = r - k;
        if (a.size == 0) {
          if (rest == 0) emit(n, pi ? CPi(a.code, {}) : CSigma(a.code, {}), pi ? 1 : 0);
          continue;
        }
        if (rest < a.size) continue;
        std::vector<int> parts(static_cast<std::size_t>(a.size), 1);
        parts.back() = rest - (a.size - 1);
        while (true) {
          family_product(n, pi, a, parts);
          if (!next_composition(parts)) break;
        }
      }
  }

  // Next composition in lexicographic order with the same sum and length.
  static bool next_composition(std::vector<int>& parts) {
    const std::size_t len = parts.size();
    if (len < 2) return false;
    // Find the rightmost position (excluding the last) that can grow.
    for (std::size_t i = len - 1; i-- > 0;) {
      int tail = 0;
      for (std::size_t j = i + 1; j < len; ++j) tail += parts[j];
      const int min_tail = static_cast<int>(len - i - 1);
      if (tail > min_tail) {
        ++parts[i];
        for (std::size_t j = i + 1; j + 1 < len; ++j) parts[j] = 1;
        parts[len - 1] = tail - 1 - (static_cast<int>(len - i - 2));
        return true;
      }
    }
    return false;
  }

  void family_product(int n, bool pi, const Sized& a, const std::vector<int>& parts) {
    const std::size_t len = parts.size();
    std::vector<const std::vector<Sized>*> pools;
    for (int p : parts) {
      if (level(p).empty()) return;
      pools.push_back(&level(p));
    }
    std::vector<std::size_t> digit(len, 0);
    while (true) {
      std::vector<Code> family;
      std::vector<int> fibers;
      for (std::size_t i = 0; i < len; ++i) {
        const Sized& s = (*pools[i])[digit[i]];
        family.push_back(s.code);
        fibers.push_back(s.size);
      }
      int size = 0;
      if (pi) {
        const std::uint64_t n_pi = codec::pi_size(fibers);
        size = n_pi > static_cast<std::uint64_t>(budget_.max_size) ? budget_.max_size + 1 : static_cast<int>(n_pi);
      } else {
        for (int b : fibers) size += b;
      }
      emit(n, pi ? CPi(a.code, std::move(family)) : CSigma(a.code, std::move(family)), size);
      std::size_t i = len;
      while (i > 0 && digit[i - 1] + 1 == pools[i - 1]->size()) digit[--i] = 0;
      if (i == 0) break;
      ++digit[i - 1];
    }
  }

  const VSignature& sig_;
  Budget budget_;
  std::size_t cap_;
  std::size_t count_ = 0;
  std::vector<std::vector<Sized>> by_nodes_;
};

}  // namespace

std::vector<Code> enumerate_codes(const VSignature& sig, const Budget& budget, std::size_t cap) {
  return Enumerator(sig, budget, cap).run();
}

}  // namespace vk
