#pragma once

// The monotone chain of conditions standing in for the generic ideal: a
// single append-only condition extended on demand by the density recipes,
// with memoized star/inverse answers and an event transcript for replay.

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "vstar/density.hpp"

namespace vstar {

struct RunConfig {
  std::uint64_t seed = 0;
  int stage_budget = 8;
  int subset_cap = 2;
  int fairness_bound = 8;
  int stage_quota = 4;
  bool machine = false;
};

struct TranscriptEvent {
  std::string op;
  std::vector<std::string> args;
  std::string result;
  bool operator==(const TranscriptEvent&) const = default;
};

class Chain {
 public:
  explicit Chain(RunConfig cfg) : cfg_(cfg) {
    // fairness sweep: meet totality for every |k| <= fairness_bound, in the
    // fixed zigzag order, so small indices have stable images up front
    for (std::int64_t n = 1; n <= 2 * cfg_.fairness_bound + 1; ++n)
      star(zigzag(n));
  }

  const RunConfig& config() const { return cfg_; }
  Condition& condition() { return cond_; }
  const Condition& condition() const { return cond_; }
  const std::vector<TranscriptEvent>& transcript() const { return events_; }

  void record(std::string op, std::vector<std::string> args,
              std::string result) {
    events_.push_back({std::move(op), std::move(args), std::move(result)});
  }

  XSet star(Elem k) {
    auto it = star_memo_.find(k);
    if (it != star_memo_.end()) return it->second;
    auto r = meet_total(cond_, k);
    XSet v = *cond_.lookup(k);
    star_memo_.emplace(k, v);
    inv_memo_.emplace(v, k);
    std::string picks;
    for (Elem p : r.picks) picks += (picks.empty() ? "" : " ") + std::to_string(p);
    record("star", {std::to_string(k), picks}, v.str());
    return v;
  }

  bool member(Elem i, Elem j) { return star(j).contains(i); }

  Elem star_inverse(const XSet& x) {
    auto it = inv_memo_.find(x);
    if (it != inv_memo_.end()) return it->second;
    auto r = meet_surjective(cond_, x);
    Elem z = *r.witness;
    inv_memo_.emplace(x, z);
    if (!star_memo_.count(z)) star_memo_.emplace(z, x);
    record("inverse", {x.str()}, std::to_string(z));
    return z;
  }

  // Axiom witnesses: the element whose star is the prescribed modification
  // of star(i) (and star(j) for the binary operations). Exact by encoding
  // canonicality, so the axioms' biconditionals hold for every element.
  Elem witness_w(Elem i, Elem j) { return star_inverse(star(i).adjoin(j)); }
  Elem witness_d(Elem i, Elem j) { return star_inverse(star(i).erase(j)); }
  Elem witness_bu(Elem i, Elem j) {
    return star_inverse(set_union(star(i), star(j)));
  }
  Elem witness_bi(Elem i, Elem j) {
    return star_inverse(set_intersect(star(i), star(j)));
  }

  // Saturate lazily, first time the isomorphism machinery needs it.
  void ensure_saturated(Elem y) {
    SatConfig sc{cfg_.stage_budget, cfg_.subset_cap, cfg_.stage_quota};
    if (!cond_.saturated()) record("saturate", {std::to_string(y)}, "");
    saturate(cond_, y, sc);
  }

  // Test-only fault injection: corrupt a memoized star answer.
  void inject_star(Elem k, XSet v) { star_memo_[k] = std::move(v); }

 private:
  RunConfig cfg_;
  Condition cond_;
  std::map<Elem, XSet> star_memo_;
  std::unordered_map<XSet, Elem, XSetHash> inv_memo_;
  std::vector<TranscriptEvent> events_;
};

}  // namespace vstar
