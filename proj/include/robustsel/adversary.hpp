// Copyright 2026 The robustsel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef ROBUSTSEL_ADVERSARY_HPP_
#define ROBUSTSEL_ADVERSARY_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "robustsel/errors.hpp"
#include "robustsel/rng.hpp"
#include "robustsel/set_core.hpp"

namespace robustsel {

// A deletion E of at most tau items from S, and the value f(S \ E).
struct Removal {
  ItemSet removed;
  double residual = 0.0;
};

struct ExactLimits {
  std::size_t max_items = 25;
  std::uint64_t max_subsets = 2'000'000;
};

// C(n, r), saturating at uint64 max.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    acc = acc * (n - r + i) / i;
    if (acc > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(acc);
}

inline bool exact_feasible(std::size_t set_size, std::size_t tau, const ExactLimits& limits = {}) {
  return set_size <= limits.max_items && binomial(set_size, std::min(tau, set_size)) <= limits.max_subsets;
}

namespace detail {

inline Removal finish_removal(const SetFunction& f, const ItemSet& s, ItemSet removed) {
  Removal out;
  out.residual = f(s.without(removed));
  out.removed = std::move(removed);
  return out;
}

// Sampled check that f does not decrease along random chains inside `s`.
inline bool sampled_monotone(const SetFunction& f, const ItemSet& s, std::size_t checks = 64) {
  if (s.empty()) return true;
  const std::vector<ItemIndex> items = s.sorted();
  const double scale = std::max(1.0, std::abs(f(s)));
  CounterRng rng(0x6d6f6e6f746f6e65ULL);
  for (std::size_t c = 0; c < checks; ++c) {
    ItemSet base;
    for (ItemIndex i : items) {
      if (bernoulli_half(rng)) base.insert(i);
    }
    if (base.size() == items.size()) base.erase(items[uniform_index(rng, items.size())]);
    const std::vector<ItemIndex> rest = s.without(base).sorted();
    const ItemIndex extra = rest[uniform_index(rng, rest.size())];
    if (f(base.with(extra)) < f(base) - 1e-12 * scale) return false;
  }
  return true;
}

// Visits every size-r subset of `items` (positions in lexicographic order).
template <typename Visit>
void for_each_combination(const std::vector<ItemIndex>& items, std::size_t r, Visit&& visit) {
  const std::size_t n = items.size();
  if (r > n) return;
  std::vector<std::size_t> pos(r);
  for (std::size_t i = 0; i < r; ++i) pos[i] = i;
  ItemSet chosen;
  while (true) {
    chosen = ItemSet();
    for (std::size_t p : pos) chosen.insert(items[p]);
    visit(chosen);
    std::size_t i = r;
    while (i > 0 && pos[i - 1] == n - r + i - 1) --i;
    if (i == 0) return;
    ++pos[i - 1];
    for (std::size_t j = i; j < r; ++j) pos[j] = pos[j - 1] + 1;
  }
}

}  // namespace detail

// Exact adversary: argmin over E subset of s, |E| <= tau, of f(s \ E); ties go
// to the lexicographically smallest sorted removal set. Only deletions of size
// exactly min(tau, |s|) are enumerated unless the sampled monotonicity check
// fails, in which case every size is enumerated.
inline Removal brute_force_min(const SetFunction& f, const ItemSet& s, std::size_t tau,
                               const ExactLimits& limits = {}) {
  f.check_items(s.items());
  if (tau == 0) return {ItemSet(), f(s)};
  if (tau >= s.size()) return detail::finish_removal(f, s, s);
  if (!exact_feasible(s.size(), tau, limits)) {
    throw InstanceTooLargeError("exact adversary infeasible for |S| = " + std::to_string(s.size()) +
                                ", tau = " + std::to_string(tau) + "; use the heuristic adversaries");
  }
  const std::vector<ItemIndex> items = s.sorted();
  const bool monotone = detail::sampled_monotone(f, s);
  const std::size_t min_size = monotone ? tau : 0;

  std::optional<Removal> best;
  std::vector<ItemIndex> best_key;
  for (std::size_t r = min_size; r <= tau; ++r) {
    detail::for_each_combination(items, r, [&](const ItemSet& removal) {
      const double value = f(s.without(removal));
      if (!best || value < best->residual ||
          (value == best->residual && removal.sorted() < best_key)) {
        best = Removal{removal, value};
        best_key = removal.sorted();
      }
    });
  }
  return detail::finish_removal(f, s, best->removed);
}

// Removes, tau times, the item whose deletion lowers f(S \ E) the most.
inline Removal greedy_min(const SetFunction& f, const ItemSet& s, std::size_t tau) {
  f.check_items(s.items());
  ItemSet removed;
  ItemSet current = s;
  const std::size_t rounds = std::min(tau, s.size());
  for (std::size_t round = 0; round < rounds; ++round) {
    std::optional<ItemIndex> pick;
    double pick_value = 0.0;
    for (ItemIndex e : current.sorted()) {
      const double value = f(current.without(ItemSet{e}));
      if (!pick || value < pick_value) {
        pick = e;
        pick_value = value;
      }
    }
    removed.insert(*pick);
    current.erase(*pick);
  }
  return detail::finish_removal(f, s, std::move(removed));
}

// Builds E by greedily maximizing f(E) over items of S.
inline Removal greedy_max(const SetFunction& f, const ItemSet& s, std::size_t tau) {
  f.check_items(s.items());
  ItemSet removed;
  const std::size_t rounds = std::min(tau, s.size());
  for (std::size_t round = 0; round < rounds; ++round) {
    std::optional<ItemIndex> pick;
    double pick_value = 0.0;
    for (ItemIndex e : s.without(removed).sorted()) {
      const double value = f(removed.with(e));
      if (!pick || value > pick_value) {
        pick = e;
        pick_value = value;
      }
    }
    removed.insert(*pick);
  }
  return detail::finish_removal(f, s, std::move(removed));
}

// Like greedy_min, but each round deletes a uniformly random item among the
// tau deletions that leave the smallest residual.
inline Removal random_greedy_min(const SetFunction& f, const ItemSet& s, std::size_t tau, std::uint64_t seed) {
  f.check_items(s.items());
  CounterRng rng(seed);
  ItemSet removed;
  ItemSet current = s;
  const std::size_t rounds = std::min(tau, s.size());
  for (std::size_t round = 0; round < rounds; ++round) {
    struct Ranked {
      ItemIndex item;
      double residual;
    };
    std::vector<Ranked> ranked;
    for (ItemIndex e : current.sorted()) ranked.push_back({e, f(current.without(ItemSet{e}))});
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const Ranked& a, const Ranked& b) { return a.residual < b.residual; });
    const std::size_t top = std::min(tau, ranked.size());
    const ItemIndex pick = ranked[uniform_index(rng, top)].item;
    removed.insert(pick);
    current.erase(pick);
  }
  return detail::finish_removal(f, s, std::move(removed));
}

// Per-round candidate count ceil((|S|/tau) log(1/epsilon)), at least 1.
inline std::size_t stochastic_adversary_sample(std::size_t set_size, std::size_t tau, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("epsilon must lie in (0, 1)");
  if (tau == 0) return 1;
  const double raw =
      std::ceil(static_cast<double>(set_size) / static_cast<double>(tau) * std::log(1.0 / epsilon));
  return std::max<std::size_t>(1, static_cast<std::size_t>(raw));
}

// Each round evaluates a random subsample of the surviving items and deletes
// the best one among them.
inline Removal stochastic_greedy_min(const SetFunction& f, const ItemSet& s, std::size_t tau, double epsilon,
                                     std::uint64_t seed) {
  f.check_items(s.items());
  const std::size_t sample = stochastic_adversary_sample(s.size(), tau, epsilon);
  CounterRng rng(seed);
  ItemSet removed;
  ItemSet current = s;
  const std::size_t rounds = std::min(tau, s.size());
  for (std::size_t round = 0; round < rounds; ++round) {
    const std::vector<ItemIndex> pool = current.sorted();
    std::vector<ItemIndex> draw =
        sample >= pool.size() ? pool : sample_without_replacement<ItemIndex>(rng, pool, sample);
    std::sort(draw.begin(), draw.end());
    std::optional<ItemIndex> pick;
    double pick_value = 0.0;
    for (ItemIndex e : draw) {
      const double value = f(current.without(ItemSet{e}));
      if (!pick || value < pick_value) {
        pick = e;
        pick_value = value;
      }
    }
    removed.insert(*pick);
    current.erase(*pick);
  }
  return detail::finish_removal(f, s, std::move(removed));
}

struct AdversaryConfig {
  bool use_greedy_min = true;
  bool use_greedy_max = true;
  std::size_t random_seeds = 3;
  std::size_t stochastic_seeds = 3;
  double epsilon = 0.01;
  bool use_exact = true;
  ExactLimits exact_limits{};
  std::uint64_t seed = 0;
};

struct AdversaryOutcome {
  std::string name;
  std::optional<Removal> result;  // empty when skipped
  std::string skip_reason;
};

struct AdversaryReport {
  std::vector<AdversaryOutcome> per_adversary;
  double ensemble_min = 0.0;
  std::string ensemble_witness;
  ItemSet witness_removed;
};

// Runs the adversary ensemble against s and reports the smallest residual.
inline AdversaryReport evaluate_robust(const SetFunction& f, const ItemSet& s, std::size_t tau,
                                       const AdversaryConfig& config = {}) {
  AdversaryReport report;
  auto add = [&](std::string name, Removal r) {
    report.per_adversary.push_back({std::move(name), std::move(r), {}});
  };
  if (config.use_exact) {
    if (tau == 0 || tau >= s.size() || exact_feasible(s.size(), tau, config.exact_limits)) {
      add("exact", brute_force_min(f, s, tau, config.exact_limits));
    } else {
      report.per_adversary.push_back(
          {"exact", std::nullopt, "instance too large (|S| = " + std::to_string(s.size()) + ")"});
    }
  } else {
    report.per_adversary.push_back({"exact", std::nullopt, "disabled"});
  }
  if (config.use_greedy_min) add("greedy_min", greedy_min(f, s, tau));
  if (config.use_greedy_max) add("greedy_max", greedy_max(f, s, tau));
  for (std::size_t j = 0; j < config.random_seeds; ++j) {
    add("random_greedy_min#" + std::to_string(j), random_greedy_min(f, s, tau, derive_seed(config.seed, j)));
  }
  for (std::size_t j = 0; j < config.stochastic_seeds; ++j) {
    add("stochastic_greedy_min#" + std::to_string(j),
        stochastic_greedy_min(f, s, tau, config.epsilon, derive_seed(config.seed, 1000 + j)));
  }

  bool any = false;
  for (const AdversaryOutcome& outcome : report.per_adversary) {
    if (!outcome.result) continue;
    if (!any || outcome.result->residual < report.ensemble_min) {
      report.ensemble_min = outcome.result->residual;
      report.ensemble_witness = outcome.name;
      report.witness_removed = outcome.result->removed;
      any = true;
    }
  }
  if (!any) {
    // Every adversary disabled: nothing removed.
    report.ensemble_min = f(s);
    report.ensemble_witness = "none";
  }
  return report;
}

}  // namespace robustsel

#endif  // ROBUSTSEL_ADVERSARY_HPP_
