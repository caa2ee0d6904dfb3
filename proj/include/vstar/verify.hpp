#pragma once

// Runtime verification suites: self-membership, exact axiom witnesses with
// extensionality, automorphism preservation by sampling, and saturation
// clause probes against brute-force enumeration of the stage log.

#include <chrono>
#include <random>
#include <string>
#include <vector>

#include "vstar/automorphism.hpp"
#include "vstar/generic.hpp"

namespace vstar {

struct SuiteResult {
  std::string name;
  bool pass = true;
  std::vector<std::string> counterexamples;
  int probes = 0;
  double millis = 0.0;
};

struct VerificationReport {
  std::vector<SuiteResult> suites;
  bool ok() const {
    for (const auto& s : suites)
      if (!s.pass) return false;
    return true;
  }
};

namespace detail {

class SuiteTimer {
 public:
  explicit SuiteTimer(SuiteResult& s)
      : s_(s), t0_(std::chrono::steady_clock::now()) {}
  ~SuiteTimer() {
    s_.millis = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0_)
                    .count();
    s_.pass = s_.counterexamples.empty();
  }

 private:
  SuiteResult& s_;
  std::chrono::steady_clock::time_point t0_;
};

}  // namespace detail

inline VerificationReport verify_self_membership(Chain& chain, Elem bound) {
  VerificationReport r;
  auto& s = r.suites.emplace_back();
  s.name = "self-membership";
  detail::SuiteTimer t(s);
  for (Elem k = -bound; k <= bound; ++k) {
    ++s.probes;
    if (!chain.member(k, k))
      s.counterexamples.push_back("member(" + std::to_string(k) + "," +
                                  std::to_string(k) + ") = false");
  }
  return r;
}

inline VerificationReport verify_axioms(Chain& chain, Elem bound) {
  VerificationReport r;
  auto& s = r.suites.emplace_back();
  s.name = "axioms";
  detail::SuiteTimer t(s);
  auto expect = [&](const std::string& what, Elem z, const XSet& want) {
    ++s.probes;
    XSet got = chain.star(z);
    if (!(got == want))
      s.counterexamples.push_back(what + ": star(" + std::to_string(z) +
                                  ") = " + got.str() + ", want " + want.str());
  };
  for (Elem i = -bound; i <= bound; ++i)
    for (Elem j = -bound; j <= bound; ++j) {
      const XSet si = chain.star(i), sj = chain.star(j);
      expect("adjoin(" + std::to_string(i) + "," + std::to_string(j) + ")",
             chain.witness_w(i, j), si.adjoin(j));
      expect("remove(" + std::to_string(i) + "," + std::to_string(j) + ")",
             chain.witness_d(i, j), si.erase(j));
      expect("union(" + std::to_string(i) + "," + std::to_string(j) + ")",
             chain.witness_bu(i, j), set_union(si, sj));
      expect("intersect(" + std::to_string(i) + "," + std::to_string(j) + ")",
             chain.witness_bi(i, j), set_intersect(si, sj));
    }
  for (Elem i = -bound; i <= bound; ++i)
    for (Elem j = i + 1; j <= bound; ++j) {
      ++s.probes;
      if (chain.star(i) == chain.star(j))
        s.counterexamples.push_back("extensionality: star(" +
                                    std::to_string(i) + ") = star(" +
                                    std::to_string(j) + ")");
    }
  return r;
}

inline VerificationReport verify_automorphism(Chain& chain,
                                              AutomorphismHandle& h,
                                              Elem bound, int samples,
                                              std::uint64_t seed) {
  VerificationReport r;
  auto& s = r.suites.emplace_back();
  s.name = "automorphism " + std::to_string(h.source()) + "->" +
           std::to_string(h.target());
  detail::SuiteTimer t(s);
  ++s.probes;
  if (h.image(h.source()) != h.target())
    s.counterexamples.push_back("F(c_k) != c_l");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Elem> dist(-bound, bound);
  for (int n = 0; n < samples; ++n) {
    const Elem i = dist(rng), j = dist(rng);
    ++s.probes;
    const Elem fi = h.image(i), fj = h.image(j);
    if (chain.member(i, j) != chain.member(fi, fj))
      s.counterexamples.push_back(
          "membership not preserved at (" + std::to_string(i) + "," +
          std::to_string(j) + ") -> (" + std::to_string(fi) + "," +
          std::to_string(fj) + ")");
    if (h.preimage(fi) != i)
      s.counterexamples.push_back("inverse round trip failed at " +
                                  std::to_string(i));
  }
  return r;
}

inline VerificationReport verify_saturation(Condition& c, int probes,
                                            std::uint64_t seed) {
  VerificationReport r;
  auto& s = r.suites.emplace_back();
  s.name = "saturation";
  detail::SuiteTimer t(s);
  if (!c.saturated()) {
    s.counterexamples.push_back("condition not saturated");
    return r;
  }
  std::mt19937_64 rng(seed);
  const int built = c.stages_built();
  // the entry log as it stood when stage+1 was built: clause (6) covers
  // exactly those entries; later on-demand insertions are staged afresh
  auto dom_at = [&](int stage) {
    std::vector<size_t> idx;
    const size_t lim = std::min(c.size(), c.stage_log_size(stage + 1));
    for (size_t i = 0; i < lim; ++i)
      if (c.entry(i).stage <= stage) idx.push_back(i);
    return idx;
  };
  for (int n = 0; n < probes; ++n) {
    const int stage = built > 0 ? static_cast<int>(rng() % built) : 0;
    auto dom = dom_at(stage);
    if (dom.size() < 2) continue;
    ++s.probes;
    if (n % 2 == 0) {
      // clause (6): differences of stage-n images live in dom by stage n+1
      const Entry& u = c.entry(dom[rng() % dom.size()]);
      const Entry& v = c.entry(dom[rng() % dom.size()]);
      Delta d = xset_delta(v.value, u.value);
      for (Elem x : d.added) {
        const int sx = c.stage_of(x);
        // in the domain by stage+1: born at most then, or already present in
        // the log before that stage finished (birth stage is never revised)
        const bool ok_stage =
            sx >= 0 && (sx <= stage + 1 ||
                        *c.entry_index(x) < c.stage_log_size(stage + 1));
        if (!ok_stage)
          s.counterexamples.push_back(
              "diff element " + std::to_string(x) + " of (" +
              std::to_string(u.key) + "," + std::to_string(v.key) +
              ") not in dom by stage " + std::to_string(stage + 1));
      }
    } else {
      // clause (7): (σ(u) \ A) ∪ B has a preimage within the policy
      const Entry& u = c.entry(dom[rng() % dom.size()]);
      XSet x = u.value;
      std::vector<Elem> a, b;
      const int na = static_cast<int>(rng() % (c.sat_config().subset_cap + 1));
      const int nb = static_cast<int>(rng() % (c.sat_config().subset_cap + 1));
      for (int q = 0; q < na; ++q) a.push_back(c.entry(dom[rng() % dom.size()]).key);
      for (int q = 0; q < nb; ++q) b.push_back(c.entry(dom[rng() % dom.size()]).key);
      for (Elem k : a) x = x.erase(k);
      for (Elem k : b) x = x.adjoin(k);
      if (!x.contains(u.key) && a.empty() && b.empty()) continue;
      auto pre = c.preimage_ex(x);
      if (!pre.elem && !pre.budget_limited)
        s.counterexamples.push_back("no preimage for modification of " +
                                    std::to_string(u.key));
      if (pre.elem && !(*c.apply(*pre.elem) == x))
        s.counterexamples.push_back("preimage value mismatch at " +
                                    std::to_string(*pre.elem));
    }
  }
  // reserve certificates: first elements genuinely inside/outside all images
  auto chk = c.check(32);
  s.probes += chk.probes_run;
  for (const auto& v : chk.violations) s.counterexamples.push_back(v);
  return r;
}

}  // namespace vstar
