#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "efx/violations.hpp"
#include "oracle.hpp"

using namespace efx;

namespace {

const Instance kAllThrees = Instance::from_rows({{3, 3, 3}, {3, 3, 3}});

}  // namespace

TEST_CASE("count_pair") {
  SUBCASE("singleton bundle never violates") {
    // U(i,i) = 5, A_j = {g} with values[i][g] = 9
    auto inst = Instance::from_rows({{5, 9}, {0, 0}});
    Allocation a{{0, 1}};
    auto u = build_utilities(inst, a);
    CHECK(count_pair(inst, u, a, 0, 1) == 0);
  }
  SUBCASE("all-threes, agent 0 empty") {
    Allocation a{{1, 1, 1}};
    auto u = build_utilities(kAllThrees, a);
    CHECK(oracle::naive_pair(kAllThrees, a, 0, 1) == 3);
    CHECK(count_pair(kAllThrees, u, a, 0, 1) == 3);
    CHECK(count_pair(kAllThrees, u, 0, 1, bundles_of(a, 2)[1]) == 3);
  }
  SUBCASE("dominance gives zero") {
    auto inst = Instance::from_rows({{10, 1, 1}, {1, 1, 1}});
    Allocation a{{0, 1, 1}};
    auto u = build_utilities(inst, a);
    CHECK(count_pair(inst, u, a, 0, 1) == 0);
  }
  SUBCASE("i == j is rejected") {
    Allocation a{{0, 1, 1}};
    auto u = build_utilities(kAllThrees, a);
    CHECK_THROWS_AS(count_pair(kAllThrees, u, a, 1, 1), std::invalid_argument);
  }
}

TEST_CASE("count_violations and is_efx") {
  SUBCASE("single agent") {
    auto inst = Instance::from_rows({{1, 2, 3, 4}});
    CHECK(count_violations(inst, {{0, 0, 0, 0}}).total == 0);
    CHECK(is_efx(inst, {{0, 0, 0, 0}}));
  }
  SUBCASE("favorites") {
    auto inst = Instance::from_rows({{5, 1}, {1, 5}});
    CHECK(count_violations(inst, {{0, 1}}).total == 0);
    CHECK(is_efx(inst, {{0, 1}}));
  }
  SUBCASE("all-threes to agent 2") {
    Allocation a{{1, 1, 1}};
    CHECK(oracle::naive_violations(kAllThrees, a) == 3);
    auto vc = count_violations(kAllThrees, a);
    CHECK(vc.total == 3);
    CHECK(vc.at(0, 1) == 3);
    CHECK(vc.at(1, 0) == 0);
    CHECK_FALSE(is_efx(kAllThrees, a));
    auto triples = list_violations(kAllThrees, a);
    CHECK(triples == std::vector<Violation>{{0, 1, 0}, {0, 1, 1}, {0, 1, 2}});
  }
  SUBCASE("ties are not violations") {
    // u_0(A_1 \ {g}) = 3 = u_0(A_0)
    Allocation a{{0, 1, 1}};
    CHECK(count_violations(kAllThrees, a).total == 0);
  }
}

TEST_CASE("delta_violations examples") {
  SUBCASE("all-threes, move good 1 to agent 1") {
    Allocation a{{1, 1, 1}};
    auto u = build_utilities(kAllThrees, a);
    CHECK(delta_violations(kAllThrees, u, a, 0, 0) == -3);
    CHECK(a.owner == std::vector<Agent>{1, 1, 1});  // untouched
  }
  SUBCASE("all-ones, n = 2") {
    auto inst = Instance::from_rows({{1, 1}, {1, 1}});
    Allocation a{{0, 0}};
    CHECK(oracle::naive_violations(inst, a) == 2);
    auto u = build_utilities(inst, a);
    CHECK(delta_violations(inst, u, a, 0, 1) == -2);
  }
  SUBCASE("move then inverse sums to zero") {
    oracle::TestRng rng(3);
    auto inst = rng.instance(4, 12, 50);
    auto a = rng.allocation(4, 12);
    auto u = build_utilities(inst, a);
    const Agent back = a.owner[5];
    const Agent to = (back + 1) % 4;
    const Count d1 = delta_violations(inst, u, a, 5, to);
    apply_transfer(inst, a, u, 5, to);
    const Count d2 = delta_violations(inst, u, a, 5, back);
    CHECK(d1 + d2 == 0);
  }
  SUBCASE("target equal to owner is rejected") {
    Allocation a{{1, 1, 1}};
    auto u = build_utilities(kAllThrees, a);
    CHECK_THROWS_AS(delta_violations(kAllThrees, u, a, 0, 1), std::invalid_argument);
  }
}

TEST_CASE("delta_violations equals full recount difference (property)") {
  oracle::TestRng rng(2024);
  for (int k = 0; k < 1500; ++k) {
    const std::size_t n = 2 + rng.below(5);
    const std::size_t m = 1 + rng.below(12);
    // Small value ranges produce many ties, which is where strictness bites.
    const Value max_value = rng.below(2) ? 4 : 1000;
    auto inst = rng.instance(n, m, max_value);
    auto a = rng.allocation(n, m);
    auto u = build_utilities(inst, a);
    const auto g = static_cast<Good>(rng.below(m));
    auto t = static_cast<Agent>(rng.below(n - 1));
    if (t >= a.owner[g]) ++t;

    const auto before = oracle::naive_violations(inst, a);
    const Count d = delta_violations(inst, u, a, g, t);
    Allocation after = a;
    after.owner[g] = t;
    REQUIRE(d == oracle::naive_violations(inst, after) - before);
  }
}

TEST_CASE("threshold form equals per-good enumeration") {
  oracle::TestRng rng(77);
  for (int k = 0; k < 300; ++k) {
    const std::size_t n = 2 + rng.below(4);
    const std::size_t m = rng.below(10);
    auto inst = rng.instance(n, m, rng.below(2) ? 3 : 100);
    auto a = rng.allocation(n, m);
    auto vc = count_violations(inst, a);
    Count sum = 0;
    for (Agent i = 0; i < n; ++i) {
      CHECK(vc.at(i, i) == 0);
      for (Agent j = 0; j < n; ++j) {
        if (i == j) continue;
        REQUIRE(vc.at(i, j) == oracle::naive_pair(inst, a, i, j));
        REQUIRE(vc.at(i, j) <= std::count(a.owner.begin(), a.owner.end(), j));
        sum += vc.at(i, j);
      }
    }
    CHECK(vc.total == sum);
    CHECK(is_efx(inst, a) == (vc.total == 0));
    CHECK(list_violations(inst, a).size() == static_cast<std::size_t>(vc.total));
  }
}

TEST_CASE("relabeling agents leaves the count unchanged") {
  oracle::TestRng rng(5);
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 2 + rng.below(4);
    const std::size_t m = rng.below(10);
    auto inst = rng.instance(n, m, 20);
    auto a = rng.allocation(n, m);
    std::vector<Agent> perm(n);
    std::iota(perm.begin(), perm.end(), Agent{0});
    std::shuffle(perm.begin(), perm.end(), rng.eng);

    std::vector<Value> values(n * m);
    for (Agent i = 0; i < n; ++i) {
      for (Good g = 0; g < m; ++g) values[perm[i] * m + g] = inst.value(i, g);
    }
    Instance relabeled(n, m, values);
    Allocation b = a;
    for (auto& o : b.owner) o = perm[o];
    CHECK(count_violations(relabeled, b).total == count_violations(inst, a).total);
  }
}

TEST_CASE("scaling one agent's row leaves its per-pair counts unchanged") {
  oracle::TestRng rng(6);
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 2 + rng.below(4);
    const std::size_t m = rng.below(10);
    auto inst = rng.instance(n, m, 20);
    auto a = rng.allocation(n, m);
    const auto who = static_cast<Agent>(rng.below(n));
    const Value factor = 1 + static_cast<Value>(rng.below(50));
    std::vector<Value> values(inst.values().begin(), inst.values().end());
    for (Good g = 0; g < m; ++g) values[who * m + g] *= factor;
    Instance scaled(n, m, values);
    auto before = count_violations(inst, a);
    auto after = count_violations(scaled, a);
    for (Agent j = 0; j < n; ++j) CHECK(before.at(who, j) == after.at(who, j));
  }
}

TEST_CASE("ViolationState tracks f incrementally") {
  oracle::TestRng rng(99);
  for (int round = 0; round < 10; ++round) {
    const std::size_t n = 2 + rng.below(6);
    const std::size_t m = 1 + rng.below(40);
    auto inst = rng.instance(n, m, rng.below(2) ? 5 : 100000);
    ViolationState st(inst, rng.allocation(n, m));
    REQUIRE(st.total() == st.recount());
    for (int k = 0; k < 1000; ++k) {
      const auto g = static_cast<Good>(rng.below(m));
      auto t = static_cast<Agent>(rng.below(n - 1));
      if (t >= st.allocation().owner[g]) ++t;
      const Count before = st.total();
      const Count d = st.delta(g, t);
      if (rng.below(3) != 0) {
        st.commit(g, t);
        REQUIRE(st.total() == before + d);
      }
    }
    CHECK(st.total() == st.recount());
    CHECK(st.utilities() == build_utilities(inst, st.allocation()));
    auto vc = count_violations(inst, st.allocation());
    for (Agent i = 0; i < n; ++i) {
      for (Agent j = 0; j < n; ++j) CHECK(st.pair_count(i, j) == vc.at(i, j));
    }
    auto fresh = bundles_of(st.allocation(), n);
    for (Agent j = 0; j < n; ++j) {
      std::vector<Good> b(st.bundle(j).begin(), st.bundle(j).end());
      std::sort(b.begin(), b.end());
      CHECK(b == fresh[j]);
    }
  }
}

TEST_CASE("commit without a matching delta still applies the move") {
  Allocation a{{1, 1, 1}};
  ViolationState st(kAllThrees, a);
  st.delta(1, 0);
  st.commit(0, 0);
  CHECK(st.total() == st.recount());
  CHECK(st.total() == 0);
}

TEST_CASE("brute_force_efx") {
  SUBCASE("two agents one good") {
    auto r = brute_force_efx(Instance::from_rows({{1}, {1}}));
    REQUIRE(r.allocation);
    CHECK(r.allocation->owner == std::vector<Agent>{0});
    CHECK(r.examined == 1);
  }
  SUBCASE("single agent") {
    auto r = brute_force_efx(Instance::from_rows({{4, 5, 6}}));
    REQUIRE(r.allocation);
    CHECK(r.allocation->owner == std::vector<Agent>{0, 0, 0});
  }
  SUBCASE("cap") {
    auto inst = oracle::TestRng(1).instance(3, 20, 10);
    CHECK_THROWS_AS(brute_force_efx(inst, 1000), SearchCapExceeded);
  }
  SUBCASE("first EFX vector in lexicographic order, cross-checked") {
    oracle::TestRng rng(8);
    for (int k = 0; k < 30; ++k) {
      auto inst = rng.instance(3, 6, 100);
      auto r = brute_force_efx(inst);
      auto all = oracle::all_allocations(3, 6);
      auto first = std::find_if(all.begin(), all.end(), [&](const Allocation& a) {
        return oracle::naive_violations(inst, a) == 0;
      });
      if (first == all.end()) {
        CHECK_FALSE(r.allocation);
      } else {
        REQUIRE(r.allocation);
        CHECK(*r.allocation == *first);
        CHECK(is_efx(inst, *r.allocation));
        CHECK(r.examined == static_cast<std::uint64_t>(first - all.begin()) + 1);
      }
    }
  }
}
