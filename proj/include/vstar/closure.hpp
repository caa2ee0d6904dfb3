#pragma once

// Delta-closures of anchor sets, the induced membership relation, and
// certificates that a matched pair list extends to a partial isomorphism
// between closures (with lazy, deterministic extension machinery).

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "vstar/condition.hpp"
#include "vstar/universe.hpp"

namespace vstar {

// i ∈ σ(j), Undefined when σ(j) is not evaluable at the current budget.
inline std::optional<bool> mem_sigma(Condition& c, Elem i, Elem j) {
  auto v = c.apply(j);
  if (!v) return std::nullopt;
  return v->contains(i);
}

// Single-anchor strata: level 0 is {z}; level k+1 adds every domain element
// whose image is the anchor image minus a subset of the previous level.
inline std::vector<Elem> delta_stratum(const Condition& c, int k, Elem z) {
  if (!c.defined(z)) throw std::logic_error("delta_stratum: anchor not in dom");
  std::set<Elem> cur{z};
  const XSet zv = *c.lookup(z);
  for (int level = 0; level < k; ++level) {
    std::set<Elem> next = cur;
    for (const Entry& e : c.entries()) {
      if (cur.count(e.key)) continue;
      Delta d = xset_delta(zv, e.value);
      if (!d.added.empty()) continue;  // must be a pure removal from σ(z)
      bool within = true;
      for (Elem a : d.removed)
        if (!cur.count(a)) { within = false; break; }
      if (within) next.insert(e.key);
    }
    if (next == cur) break;
    cur = std::move(next);
  }
  std::vector<Elem> out(cur.begin(), cur.end());
  std::sort(out.begin(), out.end(), pick_less);
  return out;
}

// The materialized delta-closure of an anchor set: closed under elementwise
// differences of member images and under preimages of finite modifications
// with all modification elements already inside. Every member's delta
// against w* stays inside the closure, which is what the isomorphism
// machinery needs. Closure is computed over materialized entries only;
// unmaterialized members show up as non-domain leaves.
inline std::vector<Elem> delta_closure(const Condition& c,
                                       const std::vector<Elem>& anchors,
                                       Elem wstar,
                                       const std::set<Elem>* seed = nullptr) {
  std::set<Elem> in;
  std::deque<Elem> work;
  auto add = [&](Elem x) {
    if (in.insert(x).second) work.push_back(x);
  };
  if (seed)
    for (Elem x : *seed) add(x);
  for (Elem a : anchors) add(a);
  if (!c.defined(wstar)) throw std::logic_error("delta_closure: w* not in dom");
  const XSet wv = *c.lookup(wstar);
  auto drain = [&] {
    while (!work.empty()) {
      Elem u = work.front();
      work.pop_front();
      auto uv = c.lookup(u);
      if (!uv) continue;  // leaf: contributes nothing further
      Delta d = xset_delta(wv, *uv);
      for (Elem x : d.removed) add(x);
      for (Elem x : d.added) add(x);
    }
  };
  drain();
  // preimage rule, iterated with the diff rule to a fixpoint
  bool grew = true;
  while (grew) {
    grew = false;
    for (const Entry& e : c.entries()) {
      if (in.count(e.key)) continue;
      Delta d = xset_delta(wv, e.value);
      bool within = true;
      for (const auto* part : {&d.removed, &d.added}) {
        for (Elem x : *part)
          if (x != e.key && !in.count(x)) { within = false; break; }
        if (!within) break;
      }
      if (within) {
        add(e.key);
        grew = true;
      }
    }
    drain();
  }
  std::vector<Elem> out(in.begin(), in.end());
  std::sort(out.begin(), out.end(), pick_less);
  return out;
}

// Closure membership test grounded by what is materialized: anchors and
// closure members are definite; an element in no image and outside the
// domain can never be introduced by any rule; anything else is Undefined
// (a deeper stage could still pull it in).
inline std::optional<bool> delta_member(const Condition& c, Elem v,
                                        const std::vector<Elem>& anchors) {
  for (Elem a : anchors)
    if (a == v) return true;
  if (anchors.empty()) return false;
  Elem wstar = anchors[0];
  for (Elem a : anchors)
    if (pick_less(a, wstar)) wstar = a;
  if (!c.defined(wstar)) return std::nullopt;
  auto w = delta_closure(c, anchors, wstar);
  if (std::find(w.begin(), w.end(), v) != w.end()) return true;
  if (!c.defined(v)) {
    bool in_some = false;
    for (const Entry& e : c.entries())
      if (e.value.contains(v)) in_some = true;
    if (!in_some) return false;
  }
  return std::nullopt;
}

// A certificate that the matched pair list extends to an isomorphism f
// between the delta-closures of its two coordinate sets: f maps each a_i to
// b_i, is injective, and preserves the induced membership relation on every
// materialized pair of fragment elements. Construction either succeeds with
// a concrete f on the materialized fragments (mutating the condition with
// fresh reserve picks and mirror entries) or reports the precise failure.
class Certificate {
 public:
  Certificate(Condition& cond, std::vector<std::pair<Elem, Elem>> pairs)
      : cond_(&cond) {
    if (pairs.empty())
      throw std::logic_error("certificate needs at least one pair");
    std::sort(pairs.begin(), pairs.end(), [](const auto& p, const auto& q) {
      return pick_less(p.first, q.first);
    });
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    pairs_ = std::move(pairs);
    hook();
    build();
  }

  // Matched leaves may acquire entries later through unrelated queries; the
  // registered provider/audit callbacks capture this certificate's address,
  // so it must follow the certificate across moves and never be copied.
  Certificate(const Certificate&) = delete;
  Certificate& operator=(const Certificate&) = delete;

  Certificate(Certificate&& o) noexcept { steal(std::move(o)); }

  Certificate& operator=(Certificate&& o) noexcept {
    if (this != &o) {
      unhook();
      steal(std::move(o));
    }
    return *this;
  }

  ~Certificate() { unhook(); }

  bool valid() const { return valid_; }
  const std::string& failure() const { return failure_; }
  const std::vector<std::pair<Elem, Elem>>& pairs() const { return pairs_; }
  const std::vector<Elem>& fragment() const { return frag_s_; }
  const std::vector<Elem>& target_fragment() const { return frag_t_; }
  Elem source_anchor() const { return wstar_s_; }

  std::optional<Elem> iso(Elem x) const {
    auto it = fwd_.find(x);
    if (it == fwd_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<Elem> iso_inv(Elem y) const {
    auto it = inv_.find(y);
    if (it == inv_.end()) return std::nullopt;
    return it->second;
  }

  // Forth step: pull a into the source fragment and produce its partner.
  Elem extend(Elem a) {
    require_valid();
    if (auto y = iso(a)) return *y;
    cond_->ensure_anchor(a);
    std::set<Elem> seed(frag_s_.begin(), frag_s_.end());
    seed.insert(a);
    auto grown = delta_closure(*cond_, {a}, wstar_s_, &seed);
    std::vector<Elem> fresh;
    for (Elem x : grown)
      if (!fwd_.count(x) ||
          (cond_->defined(x) && !cond_->defined(fwd_.at(x))))
        fresh.push_back(x);  // unmatched, or matched with a lazy partner entry
    frag_s_ = std::move(grown);
    if (!assign(true, fresh))
      throw CertificateInvalid("forth step failed: " + failure_);
    check_incremental(true, fresh);
    pairs_.push_back({a, fwd_.at(a)});
    return fwd_.at(a);
  }

  // Back step: symmetric, pulling b into the target fragment.
  Elem extend_back(Elem b) {
    require_valid();
    if (auto x = iso_inv(b)) return *x;
    cond_->ensure_anchor(b);
    if (frag_t_.empty()) build_target_fragment();
    std::set<Elem> seed(frag_t_.begin(), frag_t_.end());
    seed.insert(b);
    auto grown = delta_closure(*cond_, {b}, wstar_t_, &seed);
    std::vector<Elem> fresh;
    for (Elem y : grown)
      if (!inv_.count(y) ||
          (cond_->defined(y) && !cond_->defined(inv_.at(y))))
        fresh.push_back(y);
    frag_t_ = std::move(grown);
    if (!assign(false, fresh))
      throw CertificateInvalid("back step failed: " + failure_);
    check_incremental(false, fresh);
    pairs_.push_back({inv_.at(b), b});
    return inv_.at(b);
  }

  // Record an element that is already in the isomorphism as an explicit
  // matched pair (the fairness schedule counts it as covered).
  void promote(Elem src) {
    auto it = fwd_.find(src);
    if (it == fwd_.end())
      throw std::logic_error("promote: element not in the isomorphism");
    for (const auto& p : pairs_)
      if (p.first == src) return;
    pairs_.push_back({src, it->second});
  }

  // Re-check the stored fragments and iso values against the current state
  // of the condition. Entries are append-only, so a certificate issued
  // earlier must pass verbatim after any number of chain extensions.
  bool revalidate() const {
    if (!valid_) return false;
    return check_fragment(frag_s_, true).empty() &&
           (frag_t_.empty() || check_fragment(frag_t_, false).empty());
  }

  std::vector<std::tuple<Elem, Elem, bool>> dump_iso() const {
    std::vector<std::tuple<Elem, Elem, bool>> out;
    for (const auto& [x, y] : fwd_)
      out.emplace_back(x, y, cond_->defined(x));
    return out;
  }

 private:
  void require_valid() const {
    if (!valid_) throw CertificateInvalid("certificate invalid: " + failure_);
  }

  void hook() {
    hook_id_ = cond_->add_insert_hook([this](Elem k) { on_insert(k); });
    provider_id_ =
        cond_->add_value_provider([this](Elem k) { return provide(k); });
  }

  void unhook() {
    if (cond_) {
      cond_->remove_insert_hook(hook_id_);
      cond_->remove_value_provider(provider_id_);
    }
    cond_ = nullptr;
  }

  void steal(Certificate&& o) {
    Condition* c = o.cond_;
    if (c) {
      c->remove_insert_hook(o.hook_id_);
      c->remove_value_provider(o.provider_id_);
    }
    o.cond_ = nullptr;
    cond_ = c;
    pairs_ = std::move(o.pairs_);
    wstar_s_ = o.wstar_s_;
    wstar_t_ = o.wstar_t_;
    fwd_ = std::move(o.fwd_);
    inv_ = std::move(o.inv_);
    frag_s_ = std::move(o.frag_s_);
    frag_t_ = std::move(o.frag_t_);
    valid_ = o.valid_;
    failure_ = std::move(o.failure_);
    if (cond_) hook();
  }

  // The condition is about to fabricate an entry for k through a generic
  // recipe. If k is matched and its partner already has an entry, σ(k) is
  // forced: it must be the mirror of the partner's entry, or membership
  // preservation breaks the moment anyone compares the two sides. Matched
  // elements whose partner is also entryless stay unconstrained — whichever
  // side materializes first fixes the other through this same path.
  std::optional<Entry> provide(Elem k) {
    if (!valid_) return std::nullopt;
    auto s = iso_inv(k);
    if (s && cond_->defined(*s)) return make_mirror(true, *s, k);
    auto t = iso(k);
    if (t && cond_->defined(*t)) return make_mirror(false, *t, k);
    return std::nullopt;
  }

  // An entry was inserted (by any recipe or another certificate). If its key
  // is matched here and the partner has an entry, the two must be exact
  // mirrors of each other; entries are immutable, so a mismatch is fatal.
  // Entries routed through provide() satisfy this by construction.
  void on_insert(Elem key) {
    if (!valid_) return;
    try {
      audit(true, key);
      audit(false, key);
    } catch (const std::exception& e) {
      fail(std::string("mirror audit failed: ") + e.what());
    }
  }

  void audit(bool as_source, Elem key) {
    if (!valid_) return;
    const auto& g = as_source ? fwd_ : inv_;
    auto it = g.find(key);
    if (it == g.end() || !cond_->defined(it->second)) return;
    Entry want = make_mirror(!as_source, it->second, key);
    if (want.value != *cond_->lookup(key))
      fail("entry for " + std::to_string(key) +
           " is not the mirror of its partner " + std::to_string(it->second));
  }

  // The image of σ(x) under the map, as an entry for the partner y: the
  // opposite anchor image with every delta element of σ(x) replaced by its
  // partner. Delta elements without a partner get fresh reserve picks in
  // their w*-membership class; their own entries stay lazy.
  Entry make_mirror(bool forward, Elem x, Elem y) {
    const Elem wt = forward ? wstar_t_ : wstar_s_;
    const XSet wsv = *cond_->lookup(forward ? wstar_s_ : wstar_t_);
    Delta d = xset_delta(wsv, *cond_->lookup(x));
    Entry e;
    e.value = *cond_->lookup(wt);
    for (Elem a : d.removed) {
      Elem ga = image_of(forward, a);
      e.value = e.value.erase(ga);
      e.rem_a.push_back(ga);
    }
    for (Elem b : d.added) {
      Elem gb = image_of(forward, b);
      e.value = e.value.adjoin(gb);
      e.add_b.push_back(gb);
    }
    if (!e.value.contains(y)) {
      e.value = e.value.adjoin(y);
      e.add_b.push_back(y);
    }
    e.key = y;
    e.tag = Tag::IsoMirror;
    e.stage = cond_->stage_of(wt);
    e.anchor = wt;
    e.has_anchor = true;
    return e;
  }

  // Partner of a on the given side, assigning a fresh reserve pick when a is
  // not matched yet.
  Elem image_of(bool forward, Elem a) {
    auto& g = forward ? fwd_ : inv_;
    auto it = g.find(a);
    if (it != g.end()) return it->second;
    const XSet wsv = *cond_->lookup(forward ? wstar_s_ : wstar_t_);
    Elem p = fresh_pick(wsv.contains(a));
    g[a] = p;
    (forward ? inv_ : fwd_)[p] = a;
    return p;
  }

  // Reserve picks must avoid elements this certificate already matched
  // (leaf sources are not consumed in the condition), or the bijection
  // would be silently overwritten.
  Elem fresh_pick(bool inner) {
    for (std::int64_t n = 0;; ++n) {
      auto e = cond_->reserve_nth(inner, n);
      if (!e)
        throw std::logic_error(inner ? "inner reserve exhausted"
                                     : "outer reserve exhausted");
      if (fwd_.count(*e) || inv_.count(*e)) continue;
      cond_->mark_consumed(*e);
      return *e;
    }
  }

  bool fail(const std::string& why) {
    valid_ = false;
    failure_ = why;
    return false;
  }

  void match(Elem x, Elem y) {
    fwd_[x] = y;
    inv_[y] = x;
  }

  void build() {
    // coordinate injectivity
    std::set<Elem> ss, ts;
    for (const auto& [a, b] : pairs_) {
      if (!ss.insert(a).second || !ts.insert(b).second) {
        fail("pair list is not the graph of an injective map");
        return;
      }
    }
    for (const auto& [a, b] : pairs_) {
      cond_->ensure_anchor(a);
      cond_->ensure_anchor(b);
    }
    wstar_s_ = pairs_[0].first;  // least source in pick order
    wstar_t_ = pairs_[0].second;
    for (const auto& [a, b] : pairs_) match(a, b);
    // anchor-level membership consistency
    for (const auto& [a1, b1] : pairs_)
      for (const auto& [a2, b2] : pairs_)
        if (cond_->lookup(a2)->contains(a1) !=
            cond_->lookup(b2)->contains(b1)) {
          fail("anchor membership mismatch at (" + std::to_string(a1) + "," +
               std::to_string(a2) + ")");
          return;
        }
    std::vector<Elem> srcs, tgts;
    for (const auto& [a, b] : pairs_) {
      srcs.push_back(a);
      tgts.push_back(b);
    }
    frag_s_ = delta_closure(*cond_, srcs, wstar_s_);
    frag_t_ = delta_closure(*cond_, tgts, wstar_t_);
    if (!propagate_constraints()) return;
    std::vector<Elem> todo_s, todo_t;
    for (Elem x : frag_s_)
      if (!fwd_.count(x)) todo_s.push_back(x);
    if (!assign(true, todo_s)) return;
    for (Elem y : frag_t_)
      if (!inv_.count(y)) todo_t.push_back(y);
    if (!assign(false, todo_t)) return;
    auto bad = check_fragment(frag_s_, true);
    if (bad.empty()) bad = check_fragment(frag_t_, false);
    if (!bad.empty()) fail(bad);
  }

  void build_target_fragment() {
    std::vector<Elem> tgts;
    for (const auto& [a, b] : pairs_) tgts.push_back(b);
    frag_t_ = delta_closure(*cond_, tgts, wstar_t_);
    std::vector<Elem> todo;
    for (Elem y : frag_t_)
      if (!inv_.count(y) ||
          (cond_->defined(y) && !cond_->defined(inv_.at(y))))
        todo.push_back(y);
    if (!assign(false, todo))
      throw CertificateInvalid("certificate invalid: " + failure_);
  }

  // When two matched elements both have entries, their deltas against the
  // respective w* must correspond elementwise under f; unmatched delta
  // elements are paired by membership signature in deterministic order,
  // and every new match is propagated in turn.
  bool propagate_constraints() {
    std::deque<std::pair<Elem, Elem>> work(pairs_.begin(), pairs_.end());
    const XSet wvs = *cond_->lookup(wstar_s_);
    const XSet wvt = *cond_->lookup(wstar_t_);
    while (!work.empty()) {
      auto [u, v] = work.front();
      work.pop_front();
      auto uv = cond_->lookup(u);
      auto vv = cond_->lookup(v);
      if (!uv || !vv) {
        if (static_cast<bool>(uv) != static_cast<bool>(vv))
          return fail("matched pair with one-sided entry: " +
                      std::to_string(u) + " ~ " + std::to_string(v));
        continue;
      }
      Delta ds = xset_delta(wvs, *uv);
      Delta dt = xset_delta(wvt, *vv);
      if (!match_sets(ds.removed, dt.removed, work) ||
          !match_sets(ds.added, dt.added, work))
        return false;
    }
    return true;
  }

  bool match_sets(const std::vector<Elem>& s, const std::vector<Elem>& t,
                  std::deque<std::pair<Elem, Elem>>& work) {
    if (s.size() != t.size())
      return fail("delta size mismatch between matched entries");
    std::vector<Elem> us, ut;
    std::set<Elem> tset(t.begin(), t.end());
    for (Elem x : s) {
      auto it = fwd_.find(x);
      if (it != fwd_.end()) {
        if (!tset.count(it->second))
          return fail("delta correspondence broken at " + std::to_string(x));
        tset.erase(it->second);
      } else {
        us.push_back(x);
      }
    }
    for (Elem y : tset) {
      if (inv_.count(y))
        return fail("delta correspondence broken at target " +
                    std::to_string(y));
      ut.push_back(y);
    }
    if (us.size() != ut.size())
      return fail("delta matching count mismatch");
    auto key_s = [&](Elem x) { return std::make_pair(signature(x, true), x); };
    auto key_t = [&](Elem y) { return std::make_pair(signature(y, false), y); };
    auto by_sig = [](const auto& p, const auto& q) {
      if (p.first != q.first) return p.first < q.first;
      return pick_less(p.second, q.second);
    };
    std::vector<std::pair<std::vector<int>, Elem>> ks, kt;
    for (Elem x : us) ks.push_back(key_s(x));
    for (Elem y : ut) kt.push_back(key_t(y));
    std::sort(ks.begin(), ks.end(), by_sig);
    std::sort(kt.begin(), kt.end(), by_sig);
    for (size_t i = 0; i < ks.size(); ++i) {
      if (ks[i].first != kt[i].first)
        return fail("delta element signature mismatch");
      match(ks[i].second, kt[i].second);
      work.push_back({ks[i].second, kt[i].second});
    }
    return true;
  }

  // Membership pattern of an element across the anchor images of its side,
  // plus whether it has an entry of its own.
  std::vector<int> signature(Elem x, bool source) const {
    std::vector<int> sig{cond_->defined(x) ? 1 : 0};
    for (const auto& [a, b] : pairs_)
      sig.push_back(cond_->lookup(source ? a : b)->contains(x) ? 1 : 0);
    return sig;
  }

  // Assign partners to fresh fragment members on one side. Elements without
  // entries get reserve picks matching their w*-membership class; elements
  // with entries additionally get a mirror entry for their partner, built
  // from the partner images of their delta, reusing an existing entry when
  // the mirror value is already in the image (which is how identity-like
  // certificates stay inside the existing domain).
  bool assign(bool forward, const std::vector<Elem>& todo) {
    auto& g = forward ? fwd_ : inv_;
    auto& gi = forward ? inv_ : fwd_;
    const Elem ws = forward ? wstar_s_ : wstar_t_;
    const Elem wt = forward ? wstar_t_ : wstar_s_;
    const XSet wsv = *cond_->lookup(ws);
    const XSet wtv = *cond_->lookup(wt);
    auto record = [&](Elem x, Elem y) {
      g[x] = y;
      gi[y] = x;
    };
    struct Deferred {
      Elem x;
      std::vector<Elem> a, b;
      bool committed = false;
    };
    std::vector<Deferred> pending;
    for (Elem x : todo) {
      const bool have = g.count(x) != 0;
      if (have && (!cond_->defined(x) || cond_->defined(g.at(x)))) continue;
      if (!cond_->defined(x)) {
        record(x, fresh_pick(wsv.contains(x)));
        continue;
      }
      Delta d = xset_delta(wsv, *cond_->lookup(x));
      Deferred def{x, d.removed, d.added};
      if (have) {
        // a former leaf that acquired an entry: its partner pick is already
        // committed, only the mirror entry is missing
        def.committed = true;
      } else if (!wsv.contains(x)) {
        // x sits in its own mirror's added part; commit the pick now
        record(x, fresh_pick(false));
        def.committed = true;
      }
      pending.push_back(std::move(def));
    }
    // resolve mirrors once all delta partners are known; break dependency
    // cycles by committing an inner pick for the least blocked element
    while (!pending.empty()) {
      bool progress = false;
      for (auto it = pending.begin(); it != pending.end();) {
        bool ready = true;
        for (const auto* part : {&it->a, &it->b})
          for (Elem e : *part)
            if (e != it->x && !g.count(e)) ready = false;
        if (!ready) {
          ++it;
          continue;
        }
        XSet mirror = wtv;
        for (Elem e : it->a) mirror = mirror.erase(g.at(e));
        std::vector<Elem> gb;
        for (Elem e : it->b) gb.push_back(g.at(e));
        for (Elem y : gb) mirror = mirror.adjoin(y);
        if (it->committed) {
          if (cond_->lookup_value(mirror))
            return fail("mirror collision after cycle break at " +
                        std::to_string(it->x));
          insert_mirror(g.at(it->x), mirror, wt, it->a, gb, forward);
        } else if (auto q = cond_->lookup_value(mirror)) {
          if (gi.count(*q))
            return fail("mirror reuse conflict at " + std::to_string(it->x));
          if (!wtv.contains(*q))
            return fail("reused partner outside anchor image at " +
                        std::to_string(it->x));
          record(it->x, *q);
        } else {
          Elem p = fresh_pick(true);
          mirror = mirror.adjoin(p);
          record(it->x, p);
          insert_mirror(p, mirror, wt, it->a, gb, forward);
        }
        it = pending.erase(it);
        progress = true;
      }
      if (!progress) {
        // dependency cycle: pre-commit a pick for the least blocked element
        auto least = pending.begin();
        for (auto it = pending.begin(); it != pending.end(); ++it)
          if (!it->committed && (least->committed ||
                                 pick_less(it->x, least->x)))
            least = it;
        if (least->committed)
          return fail("unresolvable mirror dependency cycle");
        record(least->x, fresh_pick(true));
        least->committed = true;
      }
    }
    return true;
  }

  void insert_mirror(Elem key, XSet value, Elem anchor,
                     const std::vector<Elem>& a, const std::vector<Elem>& gb,
                     bool forward) {
    Entry e;
    e.key = key;
    e.value = std::move(value);
    e.tag = Tag::IsoMirror;
    e.stage = cond_->stage_of(anchor);
    e.anchor = anchor;
    e.has_anchor = true;
    auto& g = forward ? fwd_ : inv_;
    for (Elem x : a) e.rem_a.push_back(g.at(x));
    e.add_b = gb;
    if (!e.value.contains(key)) e.add_b.push_back(key);
    cond_->insert(std::move(e));
  }

  // Exhaustive membership preservation over a fragment: for every element x
  // and every entry-bearing member t, x ∈ σ(t) iff f(x) ∈ σ(f(t)).
  std::string check_fragment(const std::vector<Elem>& frag,
                             bool forward) const {
    const auto& g = forward ? fwd_ : inv_;
    for (Elem t : frag) {
      auto tv = cond_->lookup(t);
      if (!tv) continue;
      auto it = g.find(t);
      if (it == g.end()) continue;
      auto tv2 = cond_->lookup(it->second);
      // a lazy partner (no entry yet) is consistent: its eventual entry is
      // forced to the mirror value through the provider path
      if (!tv2) continue;
      for (Elem x : frag) {
        auto ix = g.find(x);
        if (ix == g.end()) continue;
        if (tv->contains(x) != tv2->contains(ix->second))
          return "membership not preserved at (" + std::to_string(x) + ", " +
                 std::to_string(t) + ")";
      }
    }
    return "";
  }

  void check_incremental(bool forward, const std::vector<Elem>& fresh) {
    const auto& frag = forward ? frag_s_ : frag_t_;
    const auto& g = forward ? fwd_ : inv_;
    std::set<Elem> fs(fresh.begin(), fresh.end());
    for (Elem t : frag) {
      auto tv = cond_->lookup(t);
      if (!tv || !g.count(t)) continue;
      auto tv2o = cond_->lookup(g.at(t));
      if (!tv2o) continue;  // lazy partner; forced on materialization
      const XSet& tv2 = *tv2o;
      for (Elem x : frag) {
        if (!fs.count(x) && !fs.count(t)) continue;
        auto ix = g.find(x);
        if (ix == g.end()) continue;
        if (tv->contains(x) != tv2.contains(ix->second))
          throw CertificateInvalid(
              "extension broke membership preservation at (" +
              std::to_string(x) + ", " + std::to_string(t) + ")");
      }
    }
  }

  Condition* cond_ = nullptr;
  std::vector<std::pair<Elem, Elem>> pairs_;
  Elem wstar_s_ = 0, wstar_t_ = 0;
  std::map<Elem, Elem> fwd_, inv_;
  std::vector<Elem> frag_s_, frag_t_;
  bool valid_ = true;
  std::string failure_;
  std::uint64_t hook_id_ = 0;
  std::uint64_t provider_id_ = 0;
};

// The single-pair certificate of the isomorphism recursion: any two domain
// elements of a saturated condition are matchable.
inline Certificate good2_single(Condition& c, Elem x0, Elem y0) {
  if (!c.saturated())
    throw std::logic_error("good2_single requires a saturated condition");
  Certificate cert(c, {{x0, y0}});
  if (!cert.valid())
    throw CertificateInvalid("single-pair certificate failed: " +
                             cert.failure());
  return cert;
}

}  // namespace vstar
