/**
 * Copyright 2026 The Matte Forge Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "forge/balance.hpp"

using namespace forge;

namespace {

ClassPool pool_of(int h, int a, int o) {
  ClassPool p;
  for (int i = 0; i < h; ++i) p.humans.push_back("h" + std::to_string(i));
  for (int i = 0; i < a; ++i) p.animals.push_back("a" + std::to_string(i));
  for (int i = 0; i < o; ++i) p.objects.push_back("o" + std::to_string(i));
  return p;
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::usage_error;
}

}  // namespace

TEST(Balance, FullScaleTrainSplit) {
  const auto plan = balance({9186, 1800, 813}, 2110);
  EXPECT_EQ(plan.after, (ClassCounts{10550, 2110, 2110}));
  EXPECT_EQ(plan.extra, (ClassCounts{1364, 310, 1297}));
}

TEST(Balance, FullScaleTestSplit) {
  EXPECT_EQ(balance({977, 200, 211}, 211).after, (ClassCounts{1055, 211, 211}));
}

TEST(Balance, AutoUnitIsSmallestFeasible) {
  // ceil(9186 / 5) = 1838 dominates 1800 and 813.
  EXPECT_EQ(auto_balance_unit({9186, 1800, 813}), 1838);
  EXPECT_EQ(balance({9186, 1800, 813}).unit, 1838);
  EXPECT_EQ(auto_balance_unit({977, 200, 211}), 211);
  EXPECT_EQ(auto_balance_unit({3, 1, 7}), 7);
}

TEST(Balance, AlreadyBalancedIsIdentity) {
  const auto plan = balance({15, 3, 3}, 3);
  EXPECT_EQ(plan.extra, (ClassCounts{0, 0, 0}));
  EXPECT_EQ(plan.after, plan.before);
}

TEST(Balance, UnitTooSmall) {
  EXPECT_EQ(code_of([] { balance({9186, 1800, 813}, 1837); }), Errc::unit_too_small);
  EXPECT_EQ(code_of([] { balance({0, 0, 0}); }), Errc::unit_too_small);
  EXPECT_EQ(code_of([] { balance({5, 1, 1}, 0); }), Errc::unit_too_small);
}

TEST(Balance, PoolDuplicatesRoundRobin) {
  Rng rng = make_rng({3});
  const auto p = balance_pool(pool_of(7, 2, 1), 4, rng);
  EXPECT_EQ(p.counts(), (ClassCounts{20, 4, 4}));
  // Every original survives and copies are spread evenly.
  std::map<std::string, int> uses;
  for (const auto& id : p.humans) ++uses[id];
  EXPECT_EQ(uses.size(), 7u);
  int lo = 1 << 30, hi = 0;
  for (const auto& [id, n] : uses) {
    lo = std::min(lo, n);
    hi = std::max(hi, n);
  }
  EXPECT_LE(hi - lo, 1);
  std::map<std::string, int> objs;
  for (const auto& id : p.objects) ++objs[id];
  EXPECT_EQ(objs["o0"], 4);
}

TEST(Balance, EmptyClassCannotBeDuplicated) {
  Rng rng = make_rng({3});
  EXPECT_EQ(code_of([&] { balance_pool(pool_of(5, 1, 0), 1, rng); }), Errc::unit_too_small);
}

TEST(Groups, ToyPoolFormsUGroups) {
  Rng rng = make_rng({8});
  const auto groups = make_groups(pool_of(15, 3, 3), rng);
  ASSERT_EQ(groups.size(), 3u);
  std::multiset<std::string> seen;
  for (const auto& g : groups) {
    for (const auto& m : g.members()) seen.insert(m);
    EXPECT_EQ(g.animal[0], 'a');
    EXPECT_EQ(g.object[0], 'o');
    for (const auto& h : g.humans) EXPECT_EQ(h[0], 'h');
  }
  // Disjoint: every entity used exactly once.
  EXPECT_EQ(seen.size(), 21u);
  EXPECT_EQ(std::set<std::string>(seen.begin(), seen.end()).size(), 21u);
}

TEST(Groups, ImbalancedPoolRejected) {
  Rng rng = make_rng({8});
  EXPECT_EQ(code_of([&] { make_groups(pool_of(14, 3, 3), rng); }), Errc::imbalanced_pool);
  EXPECT_EQ(code_of([&] { make_groups(pool_of(0, 0, 0), rng); }), Errc::imbalanced_pool);
}

TEST(Groups, FullScaleGroupCount) {
  Rng rng = make_rng({1});
  auto pool = balance_pool(pool_of(9186, 1800, 813), 2110, rng);
  const auto groups = make_groups(std::move(pool), rng);
  EXPECT_EQ(groups.size(), 2110u);
  EXPECT_EQ(groups.size() * 20, 42200u);
}

TEST(Groups, DuplicatesSpreadAcrossGroups) {
  // 7 humans stretched to 20 slots: no group should repeat a human.
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng = make_rng({seed});
    auto pool = balance_pool(pool_of(7, 2, 1), 4, rng);
    for (const auto& g : make_groups(std::move(pool), rng)) {
      EXPECT_EQ(std::set<std::string>(g.humans.begin(), g.humans.end()).size(), 5u) << seed;
    }
  }
}

TEST(Groups, Deterministic) {
  Rng r1 = make_rng({77});
  Rng r2 = make_rng({77});
  const auto a = make_groups(pool_of(10, 2, 2), r1);
  const auto b = make_groups(pool_of(10, 2, 2), r2);
  for (std::size_t g = 0; g < a.size(); ++g) EXPECT_EQ(a[g].members(), b[g].members());
}
