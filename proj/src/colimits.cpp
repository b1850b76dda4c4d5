#include "vk/colimits.hpp"

#include <numeric>
#include <set>
#include <utility>

#include "vk/error.hpp"

namespace vk {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      auto& p = parent_[static_cast<std::size_t>(x)];
      p = parent_[static_cast<std::size_t>(p)];
      x = p;
    }
    return x;
  }

  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }

 private:
  std::vector<int> parent_;
};

}  // namespace

Span::Span(FinSet a, FinSet b, FinSet c, ElemMap f_, ElemMap g_)
    : A(a), B(b), C(c), f(std::move(f_)), g(std::move(g_)) {
  if (f.dom() != A || f.cod() != B) throw Error(ErrorCode::DomainMismatch, "span: f is not A -> B");
  if (g.dom() != A || g.cod() != C) throw Error(ErrorCode::DomainMismatch, "span: g is not A -> C");
}

PushoutResult pushout(const Span& s) {
  const int nb = s.B.size;
  const int total = nb + s.C.size;
  DisjointSets ds(total);
  for (int a = 0; a < s.A.size; ++a) ds.unite(s.f(a), nb + s.g(a));

  std::vector<int> cls(static_cast<std::size_t>(total), -1);
  std::vector<int> label(static_cast<std::size_t>(total), -1);
  int next = 0;
  for (int x = 0; x < total; ++x) {
    const int r = ds.find(x);
    if (label[static_cast<std::size_t>(r)] < 0) label[static_cast<std::size_t>(r)] = next++;
    cls[static_cast<std::size_t>(x)] = label[static_cast<std::size_t>(r)];
  }
  FinSet d{next};
  std::vector<int> inl(cls.begin(), cls.begin() + nb);
  std::vector<int> inr(cls.begin() + nb, cls.end());
  return {d, ElemMap(s.B, d, std::move(inl)), ElemMap(s.C, d, std::move(inr))};
}

Span product_span(FinSet x, FinSet y) {
  FinSet xy{x.size * y.size};
  std::vector<int> fst, snd;
  for (int i = 0; i < x.size; ++i)
    for (int j = 0; j < y.size; ++j) {
      fst.push_back(i);
      snd.push_back(j);
    }
  return Span(xy, x, y, ElemMap(xy, x, std::move(fst)), ElemMap(xy, y, std::move(snd)));
}

FinSet join(FinSet x, FinSet y) { return pushout(product_span(x, y)).D; }

bool is_mono(const ElemMap& f) {
  std::vector<bool> hit(static_cast<std::size_t>(f.cod().size), false);
  for (int t : f.targets()) {
    if (hit[static_cast<std::size_t>(t)]) return false;
    hit[static_cast<std::size_t>(t)] = true;
  }
  return true;
}

PushoutMonoCheck check_pushout_mono(const Span& s) {
  if (!is_mono(s.f)) throw Error(ErrorCode::PreconditionViolated, "check_pushout_mono: f is not mono");
  const PushoutResult po = pushout(s);
  PushoutMonoCheck r;
  r.inr_mono = is_mono(po.inr);

  std::set<std::pair<int, int>> image;
  for (int a = 0; a < s.A.size; ++a) image.emplace(s.f(a), s.g(a));
  std::set<std::pair<int, int>> fibre;
  for (int b = 0; b < s.B.size; ++b)
    for (int c = 0; c < s.C.size; ++c)
      if (po.inl(b) == po.inr(c)) fibre.emplace(b, c);
  // With f mono, (f,g) is injective, so set equality is the pullback condition.
  r.pullback = fibre == image && image.size() == static_cast<std::size_t>(s.A.size);
  return r;
}

JoinPropCheck check_join_prop(FinSet x, FinSet y) {
  JoinPropCheck r;
  r.hypothesis = is_prop(x) && is_prop(y);
  r.join = join(x, y);
  r.conclusion = is_prop(r.join);
  if (!r.hypothesis)
    r.outcome = Outcome::Vacuous;
  else
    r.outcome = r.conclusion ? Outcome::Pass : Outcome::Fail;
  return r;
}

MonoTruncCheck check_pushout_mono_trunc(const Span& s, int level, const std::optional<ElemMap>& h) {
  if (!is_mono(s.f)) throw Error(ErrorCode::PreconditionViolated, "check_pushout_mono_trunc: f is not mono");
  if (level != -1 && level != 0)
    throw Error(ErrorCode::PreconditionViolated, "check_pushout_mono_trunc: level must be -1 or 0");
  MonoTruncCheck r;
  r.level = level;
  r.D = pushout(s).D;
  if (level == 0) {
    r.outcome = Outcome::Vacuous;
    r.detail = "every finite set is a set";
    return r;
  }
  const FinSet bc{s.B.size * s.C.size};
  if (!h) {
    if (s.A.size == 0 && bc.size > 0) {
      r.outcome = Outcome::Skipped;
      r.detail = "no map BxC -> A exists";
      return r;
    }
    throw Error(ErrorCode::PreconditionViolated, "check_pushout_mono_trunc: level -1 needs h: BxC -> A");
  }
  if (h->dom() != bc || h->cod() != s.A)
    throw Error(ErrorCode::DomainMismatch, "check_pushout_mono_trunc: h is not BxC -> A");
  if (!is_prop(s.B) || !is_prop(s.C)) {
    r.outcome = Outcome::Vacuous;
    r.detail = "B or C is not a proposition";
    return r;
  }
  r.outcome = is_prop(r.D) ? Outcome::Pass : Outcome::Fail;
  r.detail = "|D| = " + std::to_string(r.D.size);
  return r;
}

}  // namespace vk
