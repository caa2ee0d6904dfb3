#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "vstar/generic.hpp"

using namespace vstar;

TEST_CASE("star is stable and pinned on a fresh chain") {
  Chain chain(RunConfig{});
  REQUIRE(chain.star(0) == XSet({}, {-1}));  // first fairness pick is -1
  REQUIRE(chain.star(0) == chain.star(0));
  XSet v = chain.star(123);
  REQUIRE(chain.star(123) == v);
}

TEST_CASE("self-membership everywhere") {
  Chain chain(RunConfig{});
  for (Elem k = -40; k <= 40; ++k) REQUIRE(chain.member(k, k));
}

TEST_CASE("member agrees with direct star recomputation") {
  Chain chain(RunConfig{});
  std::mt19937_64 rng(3);
  for (int n = 0; n < 500; ++n) {
    Elem i = static_cast<Elem>(rng() % 61) - 30;
    Elem j = static_cast<Elem>(rng() % 61) - 30;
    REQUIRE(chain.member(i, j) == chain.star(j).contains(i));
  }
}

TEST_CASE("star inverse round trips") {
  Chain chain(RunConfig{});
  for (Elem k : {0, -3, 17}) REQUIRE(chain.star_inverse(chain.star(k)) == k);
  std::mt19937_64 rng(5);
  std::set<Elem> witnesses;
  std::set<size_t> hashes;
  for (int n = 0; n < 60; ++n) {
    std::vector<Elem> rem, add;
    for (int i = 0; i < 2; ++i) {
      if (rng() % 2) rem.push_back(static_cast<Elem>(rng() % 20));
      if (rng() % 2) add.push_back(-1 - static_cast<Elem>(rng() % 20));
    }
    XSet x(rem, add);
    Elem z = chain.star_inverse(x);
    REQUIRE(chain.star(z) == x);
    REQUIRE(chain.star_inverse(x) == z);  // stable
    if (hashes.insert(x.hash()).second)
      REQUIRE(witnesses.insert(z).second == true);  // injective on denotation
  }
}

TEST_CASE("axiom witnesses are exact") {
  Chain chain(RunConfig{});
  std::mt19937_64 rng(9);
  for (int n = 0; n < 80; ++n) {
    Elem i = static_cast<Elem>(rng() % 13) - 6;
    Elem j = static_cast<Elem>(rng() % 13) - 6;
    REQUIRE(chain.star(chain.witness_w(i, j)) == chain.star(i).adjoin(j));
    REQUIRE(chain.star(chain.witness_d(i, j)) == chain.star(i).erase(j));
    REQUIRE(chain.star(chain.witness_bu(i, j)) ==
            set_union(chain.star(i), chain.star(j)));
    REQUIRE(chain.star(chain.witness_bi(i, j)) ==
            set_intersect(chain.star(i), chain.star(j)));
  }
  // adjoining a present element collapses to the original set
  Elem j = -1;
  REQUIRE(chain.member(j, 0));
  REQUIRE(chain.witness_w(0, j) == 0);
  REQUIRE(chain.witness_bi(4, 4) == 4);
}

TEST_CASE("star is injective across all queried indices") {
  Chain chain(RunConfig{});
  std::set<size_t> seen;
  std::vector<XSet> stars;
  for (Elem k = -24; k <= 24; ++k) stars.push_back(chain.star(k));
  for (size_t a = 0; a < stars.size(); ++a)
    for (size_t b = a + 1; b < stars.size(); ++b)
      REQUIRE_FALSE(stars[a] == stars[b]);
}

TEST_CASE("the chain condition stays a valid poset member") {
  Chain chain(RunConfig{});
  std::mt19937_64 rng(13);
  for (int n = 0; n < 30; ++n) {
    chain.star(static_cast<Elem>(rng() % 101) - 50);
    chain.witness_bu(static_cast<Elem>(rng() % 9) - 4,
                     static_cast<Elem>(rng() % 9) - 4);
  }
  auto rep = chain.condition().check(16);
  CAPTURE(rep.violations);
  REQUIRE(rep.ok());
  chain.ensure_saturated(0);
  chain.star(77);
  rep = chain.condition().check(16);
  CAPTURE(rep.violations);
  REQUIRE(rep.ok());
}

TEST_CASE("identical query sequences give identical transcripts") {
  auto run = [] {
    Chain chain(RunConfig{.seed = 42});
    chain.star(9);
    chain.member(3, -2);
    chain.star_inverse(XSet({1, 2}, {-5}));
    chain.witness_d(4, 4);
    chain.ensure_saturated(0);
    chain.star(33);
    return chain.transcript();
  };
  REQUIRE(run() == run());
}

TEST_CASE("fault injection: a corrupted memo is observable") {
  Chain chain(RunConfig{});
  chain.inject_star(6, chain.star(6).erase(6));
  REQUIRE_FALSE(chain.member(6, 6));
}
