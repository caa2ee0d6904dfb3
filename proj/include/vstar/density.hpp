#pragma once

// The constructive dense-set recipes: totality (give c_k an image),
// surjectivity (give an XSet a preimage), saturation, and the forth/back
// step extending a matched pair list. Each mutates the chain's condition in
// place (conditions are append-only, so the result extends the input) and
// returns an audit record of the picks consumed.

#include <optional>
#include <string>
#include <vector>

#include "vstar/closure.hpp"
#include "vstar/condition.hpp"
#include "vstar/universe.hpp"

namespace vstar {

struct ExtensionResult {
  bool extended = false;                // false: request already satisfied
  std::optional<Elem> witness;          // the element answering the request
  std::vector<Elem> picks;              // fresh reserve elements consumed
  std::string recipe;                   // which recipe ran
};

// Give c_k an image: k ↦ B ∪ {w, k} with w fresh outside every image.
inline ExtensionResult meet_total(Condition& c, Elem k) {
  if (c.defined(k)) return {false, k, {}, "total"};
  if (c.saturated()) {
    c.ensure_anchor(k);
    const Entry& e = c.entries().back();
    std::vector<Elem> picks;
    if (e.has_pick) picks.push_back(e.pick);
    return {true, k, std::move(picks), "total"};
  }
  Elem w = c.pick_outer();
  Entry e;
  e.key = k;
  e.value = XSet::base().adjoin(w).adjoin(k);
  e.tag = Tag::Total;
  e.pick = w;
  e.has_pick = true;
  c.insert(std::move(e));
  return {true, k, {w}, "total"};
}

// Give X a preimage: x ↦ X with x drawn from X ∩ (inner reserve), so that
// self-membership is automatic and injectivity is preserved.
inline ExtensionResult meet_surjective(Condition& c, const XSet& x) {
  if (auto u = c.lookup_value(x)) return {false, u, {}, "surjective"};
  Elem w = c.pick_inner_within(x);
  Entry e;
  e.key = w;
  e.value = x;
  e.tag = Tag::Surjective;
  e.pick = w;
  e.has_pick = true;
  c.insert(std::move(e));
  return {true, w, {w}, "surjective"};
}

// Saturate the condition with y adjoined to the domain and build the
// requested number of stages eagerly.
inline ExtensionResult saturate(Condition& c, Elem y, const SatConfig& cfg,
                                int eager_stages = 0) {
  const bool was = c.saturated() && c.defined(y);
  c.saturate(y, cfg);
  if (eager_stages > 0) c.ensure_stage(eager_stages);
  return {!was, y, {}, "saturate"};
}

// Forth step: extend a certified pair list by a new source anchor, returning
// the new partner. The pair list must already be certified against c.
inline ExtensionResult meet_good2(Condition& c, Certificate& cert,
                                  Elem a_next) {
  if (!cert.valid())
    throw CertificateInvalid("meet_good2: input certificate invalid: " +
                             cert.failure());
  if (auto b = cert.iso(a_next)) return {false, b, {}, "good2"};
  const size_t before = c.size();
  Elem b = cert.extend(a_next);
  std::vector<Elem> picks;
  for (size_t i = before; i < c.size(); ++i)
    if (c.entry(i).has_pick) picks.push_back(c.entry(i).pick);
  return {true, b, picks, "good2"};
}

}  // namespace vstar
