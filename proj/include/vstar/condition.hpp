#pragma once

// Members of the forcing poset: finite injective partial maps from elements
// to near-base sets, extensible in place, with optional saturation state
// that materializes the infinite closure stages on demand.

#include <cassert>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "vstar/universe.hpp"

namespace vstar {

struct BudgetExhausted : std::runtime_error {
  explicit BudgetExhausted(const std::string& what) : std::runtime_error(what) {}
};

struct CertificateInvalid : std::runtime_error {
  explicit CertificateInvalid(const std::string& what)
      : std::runtime_error(what) {}
};

enum class Tag {
  Base,           // seeded entry of a finite condition
  Total,          // totality recipe: k -> B ∪ {w, k}
  Surjective,     // surjectivity recipe: x -> X with x in X
  AnchorAdjoin,   // adjoin y -> value(w*) ∪ {z, y}
  DiffWitness,    // stage recipe for a difference element
  SubsetWitness,  // stage recipe for a (value(u) \ A) ∪ B target
  IsoMirror,      // image-side entry created while extending an isomorphism
};

inline const char* tag_name(Tag t) {
  switch (t) {
    case Tag::Base: return "base";
    case Tag::Total: return "total";
    case Tag::Surjective: return "surjective";
    case Tag::AnchorAdjoin: return "anchor";
    case Tag::DiffWitness: return "diff";
    case Tag::SubsetWitness: return "subset";
    case Tag::IsoMirror: return "mirror";
  }
  return "?";
}

struct Entry {
  Elem key = 0;
  XSet value;
  Tag tag = Tag::Base;
  int stage = 0;
  Elem anchor = 0;            // the u / w* the recipe starts from
  Elem pick = 0;              // fresh element consumed by the recipe
  std::vector<Elem> rem_a;    // A of a (value(u) \ A) ∪ B recipe
  std::vector<Elem> add_b;    // B of the same
  bool has_anchor = false;
  bool has_pick = false;
};

struct CheckReport {
  std::vector<std::string> violations;
  int probes_run = 0;
  bool ok() const { return violations.empty(); }
};

struct SatConfig {
  int stage_budget = 8;
  int subset_cap = 2;
  int stage_quota = 4;
};

class Condition {
 public:
  Condition() : inner_(Trace::all()), outer_(Trace::cobase()) {}

  size_t size() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }
  const Entry& entry(size_t i) const { return entries_[i]; }
  bool saturated() const { return saturated_; }
  const SatConfig& sat_config() const { return cfg_; }
  int stages_built() const { return stages_built_; }

  // Number of entries present when stage s began to be built. The clause-(6)
  // guarantee — differences of stage-(s-1) images are in the domain by stage
  // s — covers exactly that prefix of the entry log; entries appended later
  // get their differences materialized by later stages or on demand.
  size_t stage_log_size(int s) const {
    if (s <= 0 || s > stages_built_) return 0;  // stage not built: no guarantee
    return stage_marks_[s - 1];
  }

  std::optional<size_t> entry_index(Elem x) const {
    auto it = by_key_.find(x);
    if (it == by_key_.end()) return std::nullopt;
    return it->second;
  }

  bool defined(Elem x) const { return by_key_.count(x) != 0; }

  std::optional<XSet> lookup(Elem x) const {
    auto it = by_key_.find(x);
    if (it == by_key_.end()) return std::nullopt;
    return entries_[it->second].value;
  }

  std::optional<Elem> lookup_value(const XSet& v) const {
    auto it = by_value_.find(v);
    if (it == by_value_.end()) return std::nullopt;
    return entries_[it->second].key;
  }

  int stage_of(Elem x) const {
    auto it = by_key_.find(x);
    return it == by_key_.end() ? -1 : entries_[it->second].stage;
  }

  // Least element of the domain in pick order; the anchor w* used by every
  // stage recipe.
  Elem least_dom() const {
    if (entries_.empty()) throw std::logic_error("least_dom on empty condition");
    return least_dom_;
  }

  // ---- evaluation -------------------------------------------------------

  // σ(x). Saturated conditions materialize difference-element entries whose
  // birth stage fits the budget; everything else is Undefined.
  std::optional<XSet> apply(Elem x) {
    if (auto v = lookup(x)) return v;
    if (!saturated_) return std::nullopt;
    auto birth = diff_birth_stage(x);
    if (!birth || *birth > cfg_.stage_budget) return std::nullopt;
    return entries_[force_diff_witness(x, *birth)].value;
  }

  struct PreimageResult {
    std::optional<Elem> elem;
    bool budget_limited = false;  // schedulable, but beyond the stage cap
  };

  // σ^{-1}(X), forcing a stage entry if X decomposes over a materialized
  // entry with all delta elements already in the domain.
  PreimageResult preimage_ex(const XSet& x) {
    if (auto k = lookup_value(x)) return {k, false};
    if (!saturated_) return {std::nullopt, false};
    // find the earliest-schedulable decomposition
    std::optional<std::pair<int, size_t>> best;  // (stage, entry index)
    std::vector<Elem> best_a, best_b;
    for (size_t i = 0; i < entries_.size(); ++i) {
      const Entry& e = entries_[i];
      Delta d = xset_delta(e.value, x);
      int stage = e.stage;
      bool ok = true;
      for (const auto* part : {&d.removed, &d.added}) {
        for (Elem k : *part) {
          int s = stage_of(k);
          if (s < 0) { ok = false; break; }
          stage = std::max(stage, s);
        }
        if (!ok) break;
      }
      if (!ok) continue;
      if (!best || stage < best->first) {
        best = {stage, i};
        best_a = d.removed;
        best_b = d.added;
      }
    }
    if (!best) return {std::nullopt, false};
    const int stage = best->first + 1;
    if (stage > cfg_.stage_budget) return {std::nullopt, true};
    Elem w = c_stream_pick(std::min(stage, 62));
    Entry e;
    e.key = w;
    e.value = x;
    e.tag = Tag::SubsetWitness;
    e.stage = stage;
    e.anchor = entries_[best->second].key;
    e.has_anchor = true;
    e.pick = w;
    e.has_pick = true;
    e.rem_a = best_a;
    e.add_b = best_b;
    insert(std::move(e));
    return {w, false};
  }

  std::optional<Elem> preimage(const XSet& x) { return preimage_ex(x).elem; }

  // ---- reserves ---------------------------------------------------------

  // ∩σ[dom σ] \ dom σ and V* \ (∪σ[dom σ] ∪ B), maintained exactly.
  const Trace& inner_trace() const { return inner_; }
  const Trace& outer_trace() const { return outer_; }

  bool in_inner_reserve(Elem k) const {
    if (consumed_.count(k) || !inner_.contains(k)) return false;
    if (!saturated_) return true;
    return inner_orig_.contains(k) && inner_orig_.rank(k) % 2 == 1;
  }

  bool in_outer_reserve(Elem k) const {
    if (consumed_.count(k) || !outer_.contains(k)) return false;
    if (!saturated_) return true;
    return outer_orig_.contains(k) && outer_orig_.rank(k) % 2 == 1;
  }

  // n-th currently eligible reserve element (not consumed), in pick order.
  std::optional<Elem> reserve_nth(bool inner, std::int64_t n) const {
    const Trace& t = inner ? (saturated_ ? inner_orig_ : inner_)
                           : (saturated_ ? outer_orig_ : outer_);
    std::int64_t seen = 0;
    for (std::int64_t p = 0;; ++p) {
      auto e = t.nth(saturated_ ? 2 * p + 1 : p);
      if (!e) return std::nullopt;
      if (consumed_.count(*e)) continue;
      if (inner && !inner_.contains(*e)) continue;
      if (!inner && !outer_.contains(*e)) continue;
      if (seen == n) return e;
      ++seen;
    }
  }

  Elem pick_inner() {
    auto e = reserve_nth(true, 0);
    if (!e) throw std::logic_error("inner reserve exhausted");
    consumed_.insert(*e);
    return *e;
  }

  Elem pick_outer() {
    auto e = reserve_nth(false, 0);
    if (!e) throw std::logic_error("outer reserve exhausted");
    consumed_.insert(*e);
    return *e;
  }

  // Least consumable element of X ∩ inner reserve (surjectivity recipe).
  Elem pick_inner_within(const XSet& x) {
    for (std::int64_t n = 0;; ++n) {
      auto e = reserve_nth(true, n);
      if (!e) throw std::logic_error("inner reserve exhausted within set");
      if (x.contains(*e)) {
        consumed_.insert(*e);
        return *e;
      }
    }
  }

  bool consumed(Elem k) const { return consumed_.count(k) != 0; }
  void mark_consumed(Elem k) { consumed_.insert(k); }

  // ---- construction -----------------------------------------------------

  void insert(Entry e) {
    if (by_key_.count(e.key))
      throw std::logic_error("condition: domain element already defined");
    if (by_value_.count(e.value))
      throw CertificateInvalid("condition: image collision, map not injective");
    if (!e.value.contains(e.key))
      throw std::logic_error("condition: self-membership (1a) violated");
    const size_t idx = entries_.size();
    const Elem key = e.key;
    inner_ = intersect(inner_, Trace::of(e.value)).erase(e.key);
    outer_ = intersect(outer_, Trace::of(e.value).complement()).erase(e.key);
    consumed_.insert(e.key);
    if (entries_.empty() || pick_less(e.key, least_dom_)) least_dom_ = e.key;
    by_key_.emplace(e.key, idx);
    by_value_.emplace(e.value, idx);
    entries_.push_back(std::move(e));
    // notify observers last, with the entry fully in place; observers may
    // insert further entries re-entrantly (the vector is append-only)
    for (size_t i = 0; i < hooks_.items.size(); ++i) hooks_.items[i].second(key);
  }

  // Observers called after every successful insert with the new domain
  // element. Certificates use this to audit that an entry created for an
  // already-matched element agrees with its partner's entry.
  std::uint64_t add_insert_hook(std::function<void(Elem)> f) {
    hooks_.items.emplace_back(++hooks_.seq, std::move(f));
    return hooks_.seq;
  }

  void remove_insert_hook(std::uint64_t id) { hooks_.remove(id); }

  // Value providers are consulted before a generic recipe (anchor adjunction,
  // difference witness) fabricates an entry for y. A certificate whose
  // isomorphism already determines σ(y) — because y is matched and its
  // partner has an entry — returns the forced entry; the recipe then inserts
  // that instead of an arbitrary value, keeping the isomorphism intact.
  std::uint64_t add_value_provider(std::function<std::optional<Entry>(Elem)> f) {
    providers_.items.emplace_back(++providers_.seq, std::move(f));
    return providers_.seq;
  }

  void remove_value_provider(std::uint64_t id) { providers_.remove(id); }

  static Condition finite(const std::vector<std::pair<Elem, XSet>>& entries) {
    Condition c;
    for (const auto& [k, v] : entries) {
      Entry e;
      e.key = k;
      e.value = v;
      e.tag = Tag::Base;
      c.insert(std::move(e));
    }
    return c;
  }

  // ---- saturation -------------------------------------------------------

  // Fix the fresh-index streams and adjoin y; afterwards every stage recipe
  // draws from the carved streams and the reserves certify clause (1b).
  void saturate(Elem y, const SatConfig& cfg) {
    if (saturated_) {
      ensure_anchor(y);
      return;
    }
    cfg_ = cfg;
    if (entries_.empty()) {
      // bootstrap with the totality recipe so an anchor exists
      Elem w = pick_outer();
      Entry e;
      e.key = y;
      e.value = XSet::base().adjoin(w).adjoin(y);
      e.tag = Tag::Total;
      e.pick = w;
      e.has_pick = true;
      insert(std::move(e));
      saturated_ = true;
      inner_orig_ = inner_;
      outer_orig_ = outer_;
      return;
    }
    saturated_ = true;
    inner_orig_ = inner_;
    outer_orig_ = outer_;
    ensure_anchor(y);
  }

  // y -> value(w*) ∪ {z, y} with a fresh z; the stage-0 adjunction recipe,
  // reused whenever a later query needs a new domain element.
  Elem ensure_anchor(Elem y) {
    if (defined(y)) return y;
    if (!saturated_) throw std::logic_error("ensure_anchor on finite condition");
    if (insert_provided(y)) return y;
    Elem w_star = least_dom();
    Elem z = entries_.empty() ? 0 : d_stream_pick(0);
    Entry e;
    e.key = y;
    e.value = lookup(w_star)->adjoin(z).adjoin(y);
    e.tag = Tag::AnchorAdjoin;
    e.stage = 0;
    e.anchor = w_star;
    e.has_anchor = true;
    e.pick = z;
    e.has_pick = true;
    insert(std::move(e));
    return y;
  }

  // Build all stages up to n: every difference element of earlier stages
  // gets a DiffWitness, and the fairness queue contributes SubsetWitness
  // targets up to the per-stage quota.
  void ensure_stage(int n) {
    if (!saturated_) throw std::logic_error("ensure_stage on finite condition");
    if (n > cfg_.stage_budget)
      throw BudgetExhausted("stage " + std::to_string(n) + " beyond budget " +
                            std::to_string(cfg_.stage_budget));
    while (stages_built_ < n) {
      const int s = stages_built_ + 1;
      stage_marks_.push_back(entries_.size());
      // clause (6): materialize all difference elements of stages < s
      std::vector<Elem> cand = diff_candidates(stages_built_);
      for (Elem x : cand)
        if (!defined(x)) force_diff_witness(x, s);
      // clause (7): pop the fairness queue
      int popped = 0;
      while (popped < cfg_.stage_quota) {
        auto t = fairness_pop(stages_built_);
        if (!t) break;
        ++popped;
        const auto& [ui, a, b] = *t;
        XSet x = entries_[ui].value;
        for (Elem k : a) x = x.erase(k);
        for (Elem k : b) x = x.adjoin(k);
        if (by_value_.count(x)) continue;
        if (!x.contains(entries_[ui].key) && a.empty() && b.empty()) continue;
        Elem w = c_stream_pick(s);
        if (!x.contains(w)) continue;  // target erased an inner element
        Entry e;
        e.key = w;
        e.value = x;
        e.tag = Tag::SubsetWitness;
        e.stage = s;
        e.anchor = entries_[ui].key;
        e.has_anchor = true;
        e.pick = w;
        e.has_pick = true;
        e.rem_a = a;
        e.add_b = b;
        insert(std::move(e));
      }
      stages_built_ = s;
    }
  }

  // Difference elements x ∈ value(u) \ value(v) over entries of stage <= s,
  // excluding the domain, in pick order.
  std::vector<Elem> diff_candidates(int max_stage) const {
    std::set<Elem> cand;
    for (const Entry& e : entries_) {
      if (e.stage > max_stage) continue;
      for (Elem k : e.value.removed()) cand.insert(k);
      for (Elem k : e.value.added()) cand.insert(k);
    }
    std::vector<Elem> out;
    for (Elem x : cand) {
      if (defined(x)) continue;
      bool in_some = false, out_some = false;
      for (const Entry& e : entries_) {
        if (e.stage > max_stage) continue;
        (e.value.contains(x) ? in_some : out_some) = true;
      }
      if (in_some && out_some) out.push_back(x);
    }
    std::sort(out.begin(), out.end(), pick_less);
    return out;
  }

  // ---- verification -----------------------------------------------------

  CheckReport check(int probe_bound) const {
    CheckReport r;
    std::unordered_map<XSet, Elem, XSetHash> seen;
    for (const Entry& e : entries_) {
      if (!e.value.contains(e.key))
        r.violations.push_back("clause (1a): " + std::to_string(e.key) +
                               " not in its own image " + e.value.str());
      auto [it, fresh] = seen.emplace(e.value, e.key);
      if (!fresh)
        r.violations.push_back("injectivity: " + std::to_string(e.key) +
                               " and " + std::to_string(it->second) +
                               " share image " + e.value.str());
    }
    if (!inner_.infinite())
      r.violations.push_back("clause (1b): intersection reserve finite");
    if (!outer_.infinite())
      r.violations.push_back("clause (1b): complement reserve finite");
    for (int side = 0; side < 2; ++side) {
      const bool inner = side == 0;
      for (int n = 0; n < probe_bound; ++n) {
        auto e = reserve_nth(inner, n);
        if (!e) {
          r.violations.push_back("reserve exhausted after " +
                                 std::to_string(n) + " probes");
          break;
        }
        ++r.probes_run;
        if (defined(*e))
          r.violations.push_back("reserve element " + std::to_string(*e) +
                                 " already in domain");
        for (const Entry& en : entries_) {
          const bool member = en.value.contains(*e);
          if (inner && !member)
            r.violations.push_back("inner reserve " + std::to_string(*e) +
                                   " missing from image of " +
                                   std::to_string(en.key));
          if (!inner && member)
            r.violations.push_back("outer reserve " + std::to_string(*e) +
                                   " present in image of " +
                                   std::to_string(en.key));
        }
      }
    }
    return r;
  }

  // Recompute an entry's value from its provenance record.
  std::optional<XSet> replay_provenance(const Entry& e) const {
    switch (e.tag) {
      case Tag::Base:
      case Tag::Surjective:
        return e.value;
      case Tag::Total: {
        return XSet::base().adjoin(e.pick).adjoin(e.key);
      }
      case Tag::AnchorAdjoin:
      case Tag::DiffWitness: {
        auto v = lookup(e.anchor);
        if (!v) return std::nullopt;
        return v->adjoin(e.pick).adjoin(e.key);
      }
      case Tag::SubsetWitness:
      case Tag::IsoMirror: {
        auto v = lookup(e.anchor);
        if (!v) return std::nullopt;
        XSet x = *v;
        for (Elem k : e.rem_a) x = x.erase(k);
        for (Elem k : e.add_b) x = x.adjoin(k);
        return x;
      }
    }
    return std::nullopt;
  }

 private:
  std::optional<int> diff_birth_stage(Elem x) const {
    if (x >= 0 ? true : false) {
      // candidates must appear as an exception somewhere; cheap pre-filter
    }
    std::optional<int> in_stage, out_stage;
    bool is_exception = false;
    for (const Entry& e : entries_) {
      const bool member = e.value.contains(x);
      if (member && (!in_stage || e.stage < *in_stage)) in_stage = e.stage;
      if (!member && (!out_stage || e.stage < *out_stage)) out_stage = e.stage;
      if (detail::sorted_contains(e.value.removed(), x) ||
          detail::sorted_contains(e.value.added(), x))
        is_exception = true;
    }
    if (!in_stage || !out_stage || !is_exception) return std::nullopt;
    return std::max(*in_stage, *out_stage) + 1;
  }

  size_t force_diff_witness(Elem x, int stage) {
    if (insert_provided(x)) return by_key_.at(x);
    Elem w_star = least_dom();
    Elem z = d_stream_pick(std::min(stage, 62));
    Entry e;
    e.key = x;
    e.value = lookup(w_star)->adjoin(z).adjoin(x);
    e.tag = Tag::DiffWitness;
    e.stage = stage;
    e.anchor = w_star;
    e.has_anchor = true;
    e.pick = z;
    e.has_pick = true;
    insert(std::move(e));
    return entries_.size() - 1;
  }

  // Sub-stream carving: even positions of the fixed enumeration form the
  // witness streams, odd positions stay behind as the certified reserve.
  // Stream i owns witness positions q with q = 2^i (2j+1) - 1.
  Elem stream_pick(bool inner, int i, std::map<int, std::int64_t>& cursors) {
    const Trace& orig = inner ? inner_orig_ : outer_orig_;
    const Trace& live = inner ? inner_ : outer_;
    for (;;) {
      const std::int64_t j = cursors[i]++;
      const std::int64_t q = ((std::int64_t{1} << i) * (2 * j + 1)) - 1;
      auto e = orig.nth(2 * q);
      if (!e) throw std::logic_error("witness stream exhausted");
      if (consumed_.count(*e) || !live.contains(*e)) continue;
      consumed_.insert(*e);
      return *e;
    }
  }

  Elem c_stream_pick(int i) { return stream_pick(true, i, c_cursor_); }
  Elem d_stream_pick(int i) { return stream_pick(false, i, d_cursor_); }

  using Triple = std::tuple<size_t, std::vector<Elem>, std::vector<Elem>>;

  // Deterministic diagonal enumeration of (entry, A, B) triples with
  // |A|, |B| <= subset_cap over the domain as it stood at max_stage.
  std::optional<Triple> fairness_pop(int max_stage) {
    std::vector<size_t> eligible;
    std::vector<Elem> dom;
    for (size_t i = 0; i < entries_.size(); ++i) {
      if (entries_[i].stage > max_stage) continue;
      if (entries_[i].tag == Tag::IsoMirror) continue;
      eligible.push_back(i);
      dom.push_back(entries_[i].key);
    }
    for (;;) {
      if (fair_bound_ > eligible.size()) return std::nullopt;
      if (fair_block_bound_ != fair_bound_) {
        fair_block_ = build_block(eligible, dom, fair_bound_);
        fair_block_bound_ = fair_bound_;
      }
      if (fair_idx_ < fair_block_.size()) return fair_block_[fair_idx_++];
      ++fair_bound_;
      fair_idx_ = 0;
      fair_block_bound_ = 0;
    }
  }

  std::vector<Triple> build_block(const std::vector<size_t>& eligible,
                                  const std::vector<Elem>& dom,
                                  size_t bound) const {
    // all triples whose largest referenced position is bound-1
    std::vector<Triple> out;
    if (bound == 0 || bound > eligible.size()) return out;
    const size_t top = bound - 1;
    auto subsets = [&](size_t lim) {
      std::vector<std::vector<Elem>> subs{{}};
      if (cfg_.subset_cap >= 1)
        for (size_t a = 0; a < lim; ++a) subs.push_back({dom[a]});
      if (cfg_.subset_cap >= 2)
        for (size_t a = 0; a < lim; ++a)
          for (size_t b = a + 1; b < lim; ++b) subs.push_back({dom[a], dom[b]});
      return subs;
    };
    auto all_subs = subsets(bound);
    auto touches_top = [&](const std::vector<Elem>& s) {
      return std::find(s.begin(), s.end(), dom[top]) != s.end();
    };
    for (size_t u = 0; u < bound; ++u) {
      for (const auto& a : all_subs) {
        for (const auto& b : all_subs) {
          if (u != top && !touches_top(a) && !touches_top(b)) continue;
          bool overlap = false;
          for (Elem k : a)
            if (std::find(b.begin(), b.end(), k) != b.end()) overlap = true;
          if (overlap) continue;
          out.emplace_back(eligible[u], a, b);
        }
      }
    }
    return out;
  }

  // Ask the registered providers for a forced value of y; the first forced
  // entry is inserted verbatim (key filled in here).
  bool insert_provided(Elem y) {
    for (size_t i = 0; i < providers_.items.size(); ++i) {
      auto e = providers_.items[i].second(y);
      if (!e) continue;
      e->key = y;
      insert(std::move(*e));
      return true;
    }
    return false;
  }

  // Hooks hold back-pointers into their observers, so copies of a condition
  // must start with none; moves keep them (observers track the new address
  // by re-registering on their own moves, and conditions are not relocated
  // while observed in practice).
  template <class F>
  struct HookList {
    HookList() = default;
    HookList(const HookList&) {}
    HookList& operator=(const HookList&) { return *this; }
    HookList(HookList&&) = default;
    HookList& operator=(HookList&&) = default;
    void remove(std::uint64_t id) {
      for (auto it = items.begin(); it != items.end(); ++it)
        if (it->first == id) {
          items.erase(it);
          return;
        }
    }
    std::vector<std::pair<std::uint64_t, F>> items;
    std::uint64_t seq = 0;
  };

  std::vector<Entry> entries_;
  std::unordered_map<Elem, size_t> by_key_;
  std::unordered_map<XSet, size_t, XSetHash> by_value_;
  Trace inner_;  // ∩ images \ dom, exact
  Trace outer_;  // V* \ (∪ images ∪ B), exact
  std::set<Elem> consumed_;
  Elem least_dom_ = 0;

  bool saturated_ = false;
  SatConfig cfg_;
  Trace inner_orig_ = Trace::all();
  Trace outer_orig_ = Trace::cobase();
  int stages_built_ = 0;
  std::vector<size_t> stage_marks_;  // entry-log size when each stage began
  std::map<int, std::int64_t> c_cursor_, d_cursor_;
  size_t fair_bound_ = 1;
  size_t fair_idx_ = 0;
  size_t fair_block_bound_ = 0;
  std::vector<Triple> fair_block_;
  HookList<std::function<void(Elem)>> hooks_;
  HookList<std::function<std::optional<Entry>(Elem)>> providers_;
};

}  // namespace vstar
