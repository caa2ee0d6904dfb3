#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "vstar/verify.hpp"

using namespace vstar;

namespace {

Chain make_chain(std::uint64_t seed = 1) {
  RunConfig cfg;
  cfg.seed = seed;
  return Chain(cfg);
}

}  // namespace

TEST_CASE("self-membership suite passes at desk bound") {
  Chain chain = make_chain();
  auto r = verify_self_membership(chain, 16);
  REQUIRE(r.ok());
  REQUIRE(r.suites.size() == 1);
  REQUIRE(r.suites[0].probes == 33);  // all |k| <= 16
}

TEST_CASE("self-membership reports an injected counterexample") {
  Chain chain = make_chain();
  chain.inject_star(5, chain.star(5).erase(5));
  auto r = verify_self_membership(chain, 8);
  REQUIRE_FALSE(r.ok());
  REQUIRE(r.suites[0].counterexamples.size() == 1);
  REQUIRE(r.suites[0].counterexamples[0].find("member(5,5)") !=
          std::string::npos);
}

TEST_CASE("axiom suite is exact at a small bound") {
  Chain chain = make_chain();
  auto r = verify_axioms(chain, 3);
  REQUIRE(r.ok());
  // 7x7 pairs, four witness checks each, plus 21 extensionality pairs
  REQUIRE(r.suites[0].probes == 49 * 4 + 21);
}

TEST_CASE("axiom suite catches an extensionality collision") {
  Chain chain = make_chain();
  chain.inject_star(2, chain.star(3));
  auto r = verify_axioms(chain, 3);
  REQUIRE_FALSE(r.ok());
  bool found = false;
  for (const auto& c : r.suites[0].counterexamples)
    if (c.find("extensionality") != std::string::npos) found = true;
  REQUIRE(found);
}

TEST_CASE("automorphism suite: preservation and inverse round trips") {
  Chain chain = make_chain(3);
  AutomorphismHandle h(chain, 0, 1);
  auto r = verify_automorphism(chain, h, 8, 40, 11);
  REQUIRE(r.ok());
  REQUIRE(r.suites[0].probes == 41);
}

TEST_CASE("automorphism suite on the identity handle") {
  Chain chain = make_chain(4);
  AutomorphismHandle h(chain, 4, 4);
  auto r = verify_automorphism(chain, h, 6, 25, 12);
  REQUIRE(r.ok());
}

TEST_CASE("saturation suite passes on an eagerly staged condition") {
  Condition c = Condition::finite(
      {{0, XSet({}, {-1})}, {2, XSet({5}, {-2})}, {3, XSet({}, {-3, -1})}});
  saturate(c, 0, SatConfig{3, 2, 4}, 3);
  auto r = verify_saturation(c, 64, 7);
  REQUIRE(r.ok());
  REQUIRE(r.suites[0].probes > 64);  // clause probes plus reserve probes
}

TEST_CASE("clause probes agree with brute-force stage-log enumeration") {
  Condition c = Condition::finite(
      {{0, XSet({}, {-1})}, {2, XSet({5}, {-2})}, {3, XSet({}, {-3, -1})}});
  saturate(c, 0, SatConfig{3, 2, 4}, 3);
  // clause (6), brute force: every element on which two images of stage <= s
  // disagree while being an explicit exception is in the domain by stage s+1
  for (int s = 0; s < c.stages_built(); ++s) {
    std::set<Elem> cand;
    for (const Entry& e : c.entries())
      if (e.stage <= s) {
        for (Elem k : e.value.removed()) cand.insert(k);
        for (Elem k : e.value.added()) cand.insert(k);
      }
    for (Elem x : cand) {
      bool in_some = false, out_some = false;
      for (const Entry& e : c.entries())
        if (e.stage <= s) (e.value.contains(x) ? in_some : out_some) = true;
      if (!(in_some && out_some)) continue;
      INFO("diff element " << x << " at stage " << s);
      REQUIRE(c.defined(x));
      REQUIRE(c.stage_of(x) <= s + 1);
    }
  }
  // clause (7), a hand-picked modification: σ(0) ∪ {c_-2} has a preimage
  // whose image is exactly the requested set
  XSet want = c.lookup(0)->adjoin(-2);
  auto pre = c.preimage_ex(want);
  REQUIRE((pre.elem.has_value() || pre.budget_limited));
  if (pre.elem) REQUIRE(*c.apply(*pre.elem) == want);
}

TEST_CASE("saturation suite rejects an unsaturated condition") {
  Condition c = Condition::finite({{0, XSet({}, {-1})}});
  auto r = verify_saturation(c, 8, 1);
  REQUIRE_FALSE(r.ok());
  REQUIRE(r.suites[0].counterexamples[0] == "condition not saturated");
}
