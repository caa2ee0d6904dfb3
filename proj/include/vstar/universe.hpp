#pragma once

// Exact arithmetic of the model universe: elements are integers k naming
// constants c_k, sets are finite deltas against the base B = {k : k >= 0}.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vstar {

using Elem = std::int64_t;

// Pick order: least magnitude first, nonnegative before negative on ties.
// 0, 1, -1, 2, -2, ...
inline bool pick_less(Elem a, Elem b) {
  const Elem ma = a < 0 ? -a : a;
  const Elem mb = b < 0 ? -b : b;
  if (ma != mb) return ma < mb;
  return (a >= 0) && (b < 0) && a != b;
}

// The fixed one-to-one enumeration w_1, w_2, ... = 0, -1, 1, -2, 2, ...
inline Elem zigzag(std::int64_t n) {  // n >= 1
  if (n % 2 == 1) return (n - 1) / 2;
  return -(n / 2);
}

namespace detail {

inline bool sorted_contains(const std::vector<Elem>& v, Elem k) {
  return std::binary_search(v.begin(), v.end(), k);
}

inline std::vector<Elem> sorted_insert(std::vector<Elem> v, Elem k) {
  auto it = std::lower_bound(v.begin(), v.end(), k);
  if (it == v.end() || *it != k) v.insert(it, k);
  return v;
}

inline std::vector<Elem> sorted_erase(std::vector<Elem> v, Elem k) {
  auto it = std::lower_bound(v.begin(), v.end(), k);
  if (it != v.end() && *it == k) v.erase(it);
  return v;
}

}  // namespace detail

// A member of the set family the model realizes: (B \ removed) ∪ added,
// with removed a finite set of nonnegative indices and added a finite set
// of negative indices. The encoding is canonical, so denotation equality
// is componentwise equality.
class XSet {
 public:
  XSet() = default;
  XSet(std::vector<Elem> removed, std::vector<Elem> added)
      : removed_(std::move(removed)), added_(std::move(added)) {
    std::sort(removed_.begin(), removed_.end());
    std::sort(added_.begin(), added_.end());
    removed_.erase(std::unique(removed_.begin(), removed_.end()), removed_.end());
    added_.erase(std::unique(added_.begin(), added_.end()), added_.end());
    for (Elem k : removed_)
      if (k < 0) throw std::invalid_argument("XSet: removed index < 0");
    for (Elem k : added_)
      if (k >= 0) throw std::invalid_argument("XSet: added index >= 0");
  }

  static XSet base() { return XSet{}; }

  const std::vector<Elem>& removed() const { return removed_; }
  const std::vector<Elem>& added() const { return added_; }

  bool contains(Elem k) const {
    if (k >= 0) return !detail::sorted_contains(removed_, k);
    return detail::sorted_contains(added_, k);
  }

  XSet adjoin(Elem k) const {
    XSet r = *this;
    if (k >= 0)
      r.removed_ = detail::sorted_erase(std::move(r.removed_), k);
    else
      r.added_ = detail::sorted_insert(std::move(r.added_), k);
    return r;
  }

  XSet erase(Elem k) const {
    XSet r = *this;
    if (k >= 0)
      r.removed_ = detail::sorted_insert(std::move(r.removed_), k);
    else
      r.added_ = detail::sorted_erase(std::move(r.added_), k);
    return r;
  }

  friend XSet set_union(const XSet& x, const XSet& y) {
    std::vector<Elem> rem, add;
    std::set_intersection(x.removed_.begin(), x.removed_.end(),
                          y.removed_.begin(), y.removed_.end(),
                          std::back_inserter(rem));
    std::set_union(x.added_.begin(), x.added_.end(), y.added_.begin(),
                   y.added_.end(), std::back_inserter(add));
    XSet r;
    r.removed_ = std::move(rem);
    r.added_ = std::move(add);
    return r;
  }

  friend XSet set_intersect(const XSet& x, const XSet& y) {
    std::vector<Elem> rem, add;
    std::set_union(x.removed_.begin(), x.removed_.end(), y.removed_.begin(),
                   y.removed_.end(), std::back_inserter(rem));
    std::set_intersection(x.added_.begin(), x.added_.end(), y.added_.begin(),
                          y.added_.end(), std::back_inserter(add));
    XSet r;
    r.removed_ = std::move(rem);
    r.added_ = std::move(add);
    return r;
  }

  bool operator==(const XSet& o) const = default;

  size_t hash() const {
    size_t h = 0x9e3779b97f4a7c15ULL;
    auto mix = [&h](Elem k) {
      h ^= std::hash<Elem>{}(k) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    };
    for (Elem k : removed_) mix(k);
    mix(-0x7fffffff);
    for (Elem k : added_) mix(k);
    return h;
  }

  std::string str() const {
    std::string s = "(B";
    for (Elem k : removed_) s += " \\ " + std::to_string(k);
    for (Elem k : added_) s += " + " + std::to_string(k);
    s += ")";
    return s;
  }

 private:
  std::vector<Elem> removed_;  // sorted, all >= 0
  std::vector<Elem> added_;    // sorted, all < 0
};

struct XSetHash {
  size_t operator()(const XSet& x) const { return x.hash(); }
};

// The unique (A, B) with Y = (X \ A) ∪ B, A ⊆ X, B ∩ X = ∅.
struct Delta {
  std::vector<Elem> removed;  // A
  std::vector<Elem> added;    // B
};

inline Delta xset_delta(const XSet& x, const XSet& y) {
  std::vector<Elem> cand;
  for (const auto* v : {&x.removed(), &x.added(), &y.removed(), &y.added()})
    cand.insert(cand.end(), v->begin(), v->end());
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  Delta d;
  for (Elem k : cand) {
    const bool in_x = x.contains(k), in_y = y.contains(k);
    if (in_x && !in_y) d.removed.push_back(k);
    if (!in_x && in_y) d.added.push_back(k);
  }
  return d;
}

inline XSet apply_delta(XSet x, const Delta& d) {
  for (Elem k : d.removed) x = x.erase(k);
  for (Elem k : d.added) x = x.adjoin(k);
  return x;
}

// One side of a Trace: a decidable subset of either the nonnegative or the
// negative integers that is finite or cofinite within that side.
struct HalfTrace {
  bool cofinite = false;
  std::vector<Elem> exceptions;  // sorted; members if finite, holes if cofinite

  bool contains(Elem k) const {
    return detail::sorted_contains(exceptions, k) != cofinite;
  }
};

// Exactly represents any set obtainable from B, co-B, V*, ∅ by finitely
// many element adjunctions/removals and finite unions/intersections.
class Trace {
 public:
  static Trace all() { return Trace{{true, {}}, {true, {}}}; }
  static Trace none() { return Trace{{false, {}}, {false, {}}}; }
  static Trace base() { return Trace{{false, {}}, {true, {}}}; }
  static Trace cobase() { return Trace{{true, {}}, {false, {}}}; }

  static Trace of(const XSet& x) {
    Trace t;
    t.nonneg_ = {true, x.removed()};
    std::vector<Elem> add = x.added();
    std::sort(add.begin(), add.end());
    t.neg_ = {false, std::move(add)};
    return t;
  }

  bool contains(Elem k) const {
    return k >= 0 ? nonneg_.contains(k) : neg_.contains(k);
  }

  Trace complement() const {
    return Trace{{!neg_.cofinite, neg_.exceptions},
                 {!nonneg_.cofinite, nonneg_.exceptions}};
  }

  friend Trace intersect(const Trace& a, const Trace& b) {
    return Trace{half_intersect(a.neg_, b.neg_),
                 half_intersect(a.nonneg_, b.nonneg_)};
  }

  friend Trace unite(const Trace& a, const Trace& b) {
    return intersect(a.complement(), b.complement()).complement();
  }

  Trace erase(Elem k) const {
    Trace t = *this;
    HalfTrace& h = k >= 0 ? t.nonneg_ : t.neg_;
    if (h.cofinite)
      h.exceptions = detail::sorted_insert(std::move(h.exceptions), k);
    else
      h.exceptions = detail::sorted_erase(std::move(h.exceptions), k);
    return t;
  }

  Trace adjoin(Elem k) const {
    Trace t = *this;
    HalfTrace& h = k >= 0 ? t.nonneg_ : t.neg_;
    if (h.cofinite)
      h.exceptions = detail::sorted_erase(std::move(h.exceptions), k);
    else
      h.exceptions = detail::sorted_insert(std::move(h.exceptions), k);
    return t;
  }

  bool infinite() const { return nonneg_.cofinite || neg_.cofinite; }

  bool empty() const {
    return !infinite() && nonneg_.exceptions.empty() && neg_.exceptions.empty();
  }

  // n-th member (0-based) in pick order, or nullopt for finite exhausted
  // traces. Pick order keeps enumeration deterministic.
  std::optional<Elem> nth(std::int64_t n) const {
    std::int64_t seen = 0;
    // magnitude sweep; exceptions are finitely many so this terminates
    // within |n| + |exceptions| + 1 magnitudes when the trace is infinite.
    const std::int64_t lim =
        n + static_cast<std::int64_t>(nonneg_.exceptions.size() +
                                      neg_.exceptions.size()) + 2;
    for (std::int64_t m = 0; m <= lim; ++m) {
      if (m >= 0 && contains(m)) {
        if (seen == n) return m;
        ++seen;
      }
      if (m > 0 && contains(-m)) {
        if (seen == n) return -m;
        ++seen;
      }
    }
    return std::nullopt;
  }

  // Position of k in the pick-order enumeration of this trace.
  // Precondition: contains(k).
  std::int64_t rank(Elem k) const {
    std::int64_t r = 0;
    const Elem mag = k < 0 ? -k : k;
    for (Elem m = 0; m <= mag; ++m) {
      if (m >= 0 && contains(m)) {
        if (m == k) return r;
        ++r;
      }
      if (m > 0 && contains(-m)) {
        if (-m == k) return r;
        ++r;
      }
    }
    throw std::logic_error("Trace::rank: element not in trace");
  }

  const HalfTrace& neg() const { return neg_; }
  const HalfTrace& nonneg() const { return nonneg_; }

 private:
  Trace() = default;
  Trace(HalfTrace neg, HalfTrace nonneg)
      : neg_(std::move(neg)), nonneg_(std::move(nonneg)) {}

  static HalfTrace half_intersect(const HalfTrace& a, const HalfTrace& b) {
    HalfTrace r;
    if (a.cofinite && b.cofinite) {
      r.cofinite = true;
      std::set_union(a.exceptions.begin(), a.exceptions.end(),
                     b.exceptions.begin(), b.exceptions.end(),
                     std::back_inserter(r.exceptions));
    } else if (!a.cofinite && !b.cofinite) {
      std::set_intersection(a.exceptions.begin(), a.exceptions.end(),
                            b.exceptions.begin(), b.exceptions.end(),
                            std::back_inserter(r.exceptions));
    } else {
      const HalfTrace& fin = a.cofinite ? b : a;
      const HalfTrace& cof = a.cofinite ? a : b;
      for (Elem k : fin.exceptions)
        if (cof.contains(k)) r.exceptions.push_back(k);
    }
    return r;
  }

  HalfTrace neg_;
  HalfTrace nonneg_;
};

}  // namespace vstar
