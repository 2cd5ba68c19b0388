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
#pragma once

// Class balancing by duplication and group formation. Humans, animals and
// objects are brought to a 5:1:1 proportion, then cut into groups of five
// humans, one animal and one object.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "forge/attributes.hpp"
#include "forge/error.hpp"
#include "forge/random.hpp"

namespace forge {

inline constexpr std::int64_t kHumansPerGroup = 5;

struct ClassCounts {
  std::int64_t humans = 0;
  std::int64_t animals = 0;
  std::int64_t objects = 0;
  friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

/// Smallest unit that needs no entity removed.
inline std::int64_t auto_balance_unit(const ClassCounts& c) {
  return std::max({(c.humans + kHumansPerGroup - 1) / kHumansPerGroup, c.animals, c.objects});
}

struct DuplicationPlan {
  std::int64_t unit = 0;
  ClassCounts before;
  ClassCounts after;
  /// Copies to add per class.
  ClassCounts extra;
};

inline DuplicationPlan balance(const ClassCounts& counts, std::optional<std::int64_t> unit = {}) {
  const std::int64_t need = auto_balance_unit(counts);
  const std::int64_t u = unit.value_or(need);
  if (u <= 0 || u < need) {
    throw Error(Errc::unit_too_small, "balance unit " + std::to_string(u) + " below the minimum " +
                                          std::to_string(need));
  }
  DuplicationPlan plan;
  plan.unit = u;
  plan.before = counts;
  plan.after = {kHumansPerGroup * u, u, u};
  plan.extra = {plan.after.humans - counts.humans, plan.after.animals - counts.animals,
                plan.after.objects - counts.objects};
  return plan;
}

/// Entity ids per class; duplicates appear as repeated ids.
struct ClassPool {
  std::vector<std::string> humans;
  std::vector<std::string> animals;
  std::vector<std::string> objects;

  ClassCounts counts() const {
    return {static_cast<std::int64_t>(humans.size()), static_cast<std::int64_t>(animals.size()),
            static_cast<std::int64_t>(objects.size())};
  }
  std::vector<std::string>& of(EntityClass c) {
    return c == EntityClass::human ? humans : c == EntityClass::animal ? animals : objects;
  }
};

namespace detail {

/// Appends `extra` copies cycling through a seeded permutation of `ids`.
inline void duplicate_round_robin(std::vector<std::string>& ids, std::int64_t extra, Rng& rng) {
  if (extra <= 0) return;
  if (ids.empty()) throw Error(Errc::unit_too_small, "cannot duplicate an empty class");
  std::vector<std::string> order = ids;
  shuffle(order, rng);
  for (std::int64_t i = 0; i < extra; ++i) ids.push_back(order[i % order.size()]);
}

}  // namespace detail

/// Pool with every class duplicated up to (5u, u, u).
inline ClassPool balance_pool(ClassPool pool, std::optional<std::int64_t> unit, Rng& rng) {
  const auto plan = balance(pool.counts(), unit);
  detail::duplicate_round_robin(pool.humans, plan.extra.humans, rng);
  detail::duplicate_round_robin(pool.animals, plan.extra.animals, rng);
  detail::duplicate_round_robin(pool.objects, plan.extra.objects, rng);
  return pool;
}

struct Group {
  std::array<std::string, kHumansPerGroup> humans;
  std::string animal;
  std::string object;

  std::vector<std::string> members() const {
    std::vector<std::string> out(humans.begin(), humans.end());
    out.push_back(animal);
    out.push_back(object);
    return out;
  }
};

/// Seeded shuffle into u disjoint (5H, 1A, 1O) groups. Human slots are then
/// repaired by swaps so that no group holds the same id twice whenever the
/// pool allows it.
inline std::vector<Group> make_groups(ClassPool pool, Rng& rng) {
  const auto c = pool.counts();
  if (c.animals <= 0 || c.animals != c.objects || c.humans != kHumansPerGroup * c.animals) {
    throw Error(Errc::imbalanced_pool,
                "pool (" + std::to_string(c.humans) + ", " + std::to_string(c.animals) + ", " +
                    std::to_string(c.objects) + ") is not in 5:1:1 proportion");
  }
  shuffle(pool.humans, rng);
  shuffle(pool.animals, rng);
  shuffle(pool.objects, rng);

  const auto u = static_cast<std::size_t>(c.animals);
  auto& h = pool.humans;
  auto group_has = [&](std::size_t g, const std::string& id, std::size_t skip) {
    for (std::size_t k = 0; k < kHumansPerGroup; ++k) {
      const std::size_t idx = g * kHumansPerGroup + k;
      if (idx != skip && h[idx] == id) return true;
    }
    return false;
  };
  for (std::size_t i = 0; i < h.size(); ++i) {
    const std::size_t g = i / kHumansPerGroup;
    if (!group_has(g, h[i], i)) continue;
    for (std::size_t j = 0; j < h.size(); ++j) {
      const std::size_t g2 = j / kHumansPerGroup;
      if (g2 == g) continue;
      if (!group_has(g, h[j], i) && !group_has(g2, h[i], j)) {
        std::swap(h[i], h[j]);
        break;
      }
    }
  }

  std::vector<Group> groups(u);
  for (std::size_t g = 0; g < u; ++g) {
    for (std::size_t k = 0; k < kHumansPerGroup; ++k) {
      groups[g].humans[k] = h[g * kHumansPerGroup + k];
    }
    groups[g].animal = pool.animals[g];
    groups[g].object = pool.objects[g];
  }
  return groups;
}

}  // namespace forge
