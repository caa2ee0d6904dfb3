// Acceptance gate: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Each criterion is exact (zero numeric tolerance); the
// wall-clock limits below are the pinned per-criterion budgets.

#include <chrono>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "vstar/serialize.hpp"
#include "vstar/verify.hpp"

using namespace vstar;

namespace {

int failures = 0;

using Clock = std::chrono::steady_clock;

// Runs one criterion body, enforces its time budget (0 = untimed), prints
// the verdict line.
template <class F>
void criterion(int n, const std::string& name, double limit_ms, F body) {
  std::string why;
  const auto t0 = Clock::now();
  bool ok;
  try {
    ok = body(why);
  } catch (const std::exception& e) {
    ok = false;
    why = e.what();
  }
  const double ms =
      std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  if (ok && limit_ms > 0 && ms > limit_ms) {
    ok = false;
    why = "time budget exceeded";
  }
  if (!ok) ++failures;
  std::printf("criterion %d (%s): %s (%.0f ms%s)%s%s\n", n, name.c_str(),
              ok ? "pass" : "FAIL", ms,
              limit_ms > 0 ? (" / " + std::to_string((int)limit_ms)).c_str()
                           : "",
              why.empty() ? "" : " -- ", why.c_str());
}

Chain make_chain(std::uint64_t seed) {
  RunConfig cfg;
  cfg.seed = seed;
  return Chain(cfg);
}

std::string first_failure(const VerificationReport& r) {
  for (const auto& s : r.suites)
    if (!s.pass)
      return s.name + ": " +
             (s.counterexamples.empty() ? "?" : s.counterexamples[0]);
  return "";
}

}  // namespace

int main() {
  criterion(1, "self-membership |k| <= 32", 1000, [](std::string& why) {
    Chain chain = make_chain(1);
    auto r = verify_self_membership(chain, 32);
    why = first_failure(r);
    return r.ok();
  });

  criterion(2, "axiom witnesses exact, |i|,|j| <= 8", 2000,
            [](std::string& why) {
    Chain chain = make_chain(2);
    auto r = verify_axioms(chain, 8);
    if (!r.ok()) {
      why = first_failure(r);
      return false;
    }
    std::set<XSet, bool (*)(const XSet&, const XSet&)> distinct(
        [](const XSet& a, const XSet& b) { return a.str() < b.str(); });
    for (Elem k = -8; k <= 8; ++k) distinct.insert(chain.star(k));
    if (distinct.size() != 17) {
      why = "expected 17 pairwise distinct stars, got " +
            std::to_string(distinct.size());
      return false;
    }
    return true;
  });

  criterion(3, "100 surjectivity round trips", 2000, [](std::string& why) {
    Chain chain = make_chain(3);
    std::mt19937_64 rng(3);
    std::map<std::string, Elem> seen;  // denotation -> witness
    for (int n = 0; n < 100; ++n) {
      std::vector<Elem> rem, add;
      const int total = static_cast<int>(rng() % 5);
      for (int q = 0; q < total; ++q) {
        if (rng() % 2)
          rem.push_back(static_cast<Elem>(rng() % 12));
        else
          add.push_back(-1 - static_cast<Elem>(rng() % 12));
      }
      XSet x(rem, add);
      Elem z = chain.star_inverse(x);
      if (!(chain.star(z) == x)) {
        why = "star(star_inverse(" + x.str() + ")) = " + chain.star(z).str();
        return false;
      }
      auto [it, fresh] = seen.emplace(x.str(), z);
      if (!fresh && it->second != z) {
        why = "star_inverse not injective on denotation at " + x.str();
        return false;
      }
    }
    return true;
  });

  criterion(4, "homogeneity over four (k,l) pairs", 10000,
            [](std::string& why) {
    const std::vector<std::pair<Elem, Elem>> kl = {
        {0, 0}, {0, 1}, {2, -3}, {5, 5}};
    for (auto [k, l] : kl) {
      Chain chain = make_chain(4);
      AutomorphismHandle h(chain, k, l);
      if (h.image(k) != l) {
        why = "F(c_" + std::to_string(k) + ") != c_" + std::to_string(l);
        return false;
      }
      auto r = verify_automorphism(chain, h, 16, 200, 40 + k + l);
      if (!r.ok()) {
        why = first_failure(r);
        return false;
      }
    }
    return true;
  });

  criterion(5, "saturation contract probes", 5000, [](std::string& why) {
    Condition c = Condition::finite(
        {{0, XSet({}, {-1})}, {2, XSet({5}, {-2})}, {3, XSet({}, {-3, -1})}});
    saturate(c, 0, SatConfig{3, 2, 4}, 3);
    auto r = verify_saturation(c, 64, 5);  // includes 32 reserve probes
    why = first_failure(r);
    return r.ok();
  });

  criterion(6, "certificate monotonicity under 10 extensions", 3000,
            [](std::string& why) {
    Chain chain = make_chain(6);
    chain.ensure_saturated(0);
    Certificate ca = good2_single(chain.condition(), 0, 2);
    Certificate cb = good2_single(chain.condition(), 1, -2);
    auto pairs_a = ca.pairs();
    auto frag_a = ca.fragment();
    auto iso_a = ca.iso(0);
    // ten arbitrary chain extensions
    for (Elem k : {9, -9, 10, -10, 11})
      chain.star(k);
    chain.witness_w(3, -4);
    chain.witness_bu(1, 2);
    chain.star_inverse(XSet({0, 3}, {-8}));
    chain.witness_d(2, 5);
    chain.witness_bi(0, 1);
    if (!ca.revalidate() || !cb.revalidate()) {
      why = "certificate failed to re-validate: " +
            (ca.valid() ? cb.failure() : ca.failure());
      return false;
    }
    if (ca.pairs() != pairs_a || ca.fragment() != frag_a ||
        ca.iso(0) != iso_a) {
      why = "certificate state changed under pure chain extension";
      return false;
    }
    return true;
  });

  criterion(7, "permutation and swap invariance", 0, [](std::string& why) {
    std::mt19937_64 rng(7);
    for (int n = 0; n < 20; ++n) {
      const int len = 1 + static_cast<int>(rng() % 3);
      std::vector<std::pair<Elem, Elem>> list;
      std::set<Elem> used_a, used_b;
      for (int q = 0; q < len; ++q) {
        Elem a = static_cast<Elem>(rng() % 13) - 6;
        Elem b = static_cast<Elem>(rng() % 13) - 6;
        if (!used_a.insert(a).second || !used_b.insert(b).second) continue;
        list.push_back({a, b});
      }
      if (list.empty()) continue;
      auto outcome = [&](std::vector<std::pair<Elem, Elem>> pl) {
        Condition c = Condition::finite({{0, XSet({}, {-1})}});
        saturate(c, 0, SatConfig{4, 2, 4}, 1);
        Certificate cert(c, std::move(pl));
        return std::make_pair(cert.valid(), cert.valid() ? cert.pairs()
                                                         : decltype(cert.pairs()){});
      };
      auto base = outcome(list);
      auto perm = list;
      std::reverse(perm.begin(), perm.end());
      if (outcome(perm) != base) {
        why = "outcome changed under permutation (round " +
              std::to_string(n) + ")";
        return false;
      }
      std::vector<std::pair<Elem, Elem>> swapped;
      for (auto [a, b] : list) swapped.push_back({b, a});
      auto sw = outcome(swapped);
      if (sw.first != base.first) {
        why = "outcome changed under coordinate swap (round " +
              std::to_string(n) + ")";
        return false;
      }
      if (base.first) {
        // the swapped certificate carries the inverted iso on the pair list
        std::map<Elem, Elem> inv(base.second.begin(), base.second.end());
        for (auto [b, a] : sw.second) {
          if (!inv.count(a) || inv.at(a) != b) {
            why = "swapped certificate is not the inverted iso (round " +
                  std::to_string(n) + ")";
            return false;
          }
        }
      }
    }
    return true;
  });

  criterion(8, "bit-exact deterministic replay", 2000, [](std::string& why) {
    RunConfig cfg;
    cfg.seed = 8;
    auto drive = [&](Chain& chain) {
      chain.star(4);
      chain.member(-3, 2);
      chain.witness_w(1, -2);
      chain.star_inverse(XSet({1}, {-4}));
      AutomorphismHandle h(chain, 0, 1);
      h.image(5);
      h.preimage(-2);
      h.advance(4);
    };
    Chain one(cfg), two(cfg);
    drive(one);
    drive(two);
    if (!(one.transcript() == two.transcript())) {
      why = "two same-seed runs produced different transcripts";
      return false;
    }
    nlohmann::json ja = transcript_to_json(cfg, {"drive"}, one.transcript(), {});
    Chain three(cfg);
    drive(three);
    nlohmann::json jb =
        transcript_to_json(cfg, {"drive"}, three.transcript(), {});
    if (ja.dump() != jb.dump()) {
      why = "replayed transcript serialization differs";
      return false;
    }
    return true;
  });

  return failures == 0 ? 0 : 1;
}
