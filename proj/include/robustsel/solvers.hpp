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


#ifndef ROBUSTSEL_SOLVERS_HPP_
#define ROBUSTSEL_SOLVERS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "robustsel/errors.hpp"
#include "robustsel/rng.hpp"
#include "robustsel/set_core.hpp"

namespace robustsel {

struct Solution {
  ItemSet selected;
  ItemSet oblivious_part;  // S0, empty for non-robust solvers
  ItemSet greedy_part;     // S1
  // Score maximized at each selection step: singleton value for oblivious
  // picks, marginal gain for greedy-type picks.
  std::vector<double> gains;
  std::uint64_t evals = 0;
};

struct SolverParams {
  std::size_t k = 0;
  std::size_t tau = 0;
  double beta = 1.0;
  double epsilon = 0.01;
  std::uint64_t seed = 0;
};

// |S0| = ceil(beta * tau). Products within 1e-9 (relative) of an integer are
// snapped to it, so beta = 1.1, tau = 10 yields 11 rather than 12.
inline std::size_t oblivious_size(double beta, std::size_t tau) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ParameterError("beta must be a positive finite real");
  const double product = beta * static_cast<double>(tau);
  const double nearest = std::round(product);
  if (std::abs(product - nearest) <= 1e-9 * std::max(1.0, std::abs(product))) {
    return static_cast<std::size_t>(nearest);
  }
  return static_cast<std::size_t>(std::ceil(product));
}

namespace detail {

inline void check_budget(const SetFunction& f, std::size_t k) {
  if (k > f.ground_size()) {
    throw BudgetError("budget k = " + std::to_string(k) + " exceeds ground set size " +
                      std::to_string(f.ground_size()));
  }
}

inline std::vector<ItemIndex> all_items(std::size_t n) {
  std::vector<ItemIndex> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i;
  return out;
}

inline std::vector<ItemIndex> remaining_items(std::size_t n, const ItemSet& taken) {
  std::vector<ItemIndex> out;
  out.reserve(n - taken.size());
  for (ItemIndex i = 0; i < n; ++i) {
    if (!taken.contains(i)) out.push_back(i);
  }
  return out;
}

struct Candidate {
  ItemIndex item;
  double score;
  double value = 0.0;  // f(base + item)
};

// Highest score first, lowest index on ties.
inline bool better(const Candidate& a, const Candidate& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.item < b.item;
}

// Marginal gains of every candidate on top of `base` (whose value is `base_value`).
inline std::vector<Candidate> score_candidates(const SetFunction& f, const ItemSet& base, double base_value,
                                               std::span<const ItemIndex> candidates, EvalCounter& counter) {
  std::vector<Candidate> out;
  out.reserve(candidates.size());
  for (ItemIndex i : candidates) {
    const double value = eval_counted(f, base.with(i), counter);
    out.push_back({i, value - base_value, value});
  }
  return out;
}

inline Candidate best_of(const std::vector<Candidate>& scored) {
  Candidate best = scored.front();
  for (const Candidate& c : scored) {
    if (better(c, best)) best = c;
  }
  return best;
}

// Greedy from the empty set over `pool` for `steps` steps.
inline std::pair<ItemSet, std::vector<double>> greedy_over(const SetFunction& f, std::vector<ItemIndex> pool,
                                                           std::size_t steps, EvalCounter& counter) {
  ItemSet chosen;
  std::vector<double> gains;
  double value = 0.0;
  for (std::size_t step = 0; step < steps && !pool.empty(); ++step) {
    const Candidate best = best_of(score_candidates(f, chosen, value, pool, counter));
    chosen.insert(best.item);
    gains.push_back(best.score);
    value = best.value;
    pool.erase(std::find(pool.begin(), pool.end(), best.item));
  }
  return {std::move(chosen), std::move(gains)};
}

}  // namespace detail

// Plain greedy: k steps of maximum marginal gain, lowest index on ties.
inline Solution greedy(const SetFunction& f, std::size_t k) {
  detail::check_budget(f, k);
  EvalCounter counter;
  auto [chosen, gains] = detail::greedy_over(f, detail::all_items(f.ground_size()), k, counter);
  Solution sol;
  sol.selected = chosen;
  sol.greedy_part = std::move(chosen);
  sol.gains = std::move(gains);
  sol.evals = counter.count();
  return sol;
}

// The k items with the largest singleton values, in descending order.
inline Solution oblivious(const SetFunction& f, std::size_t k) {
  detail::check_budget(f, k);
  EvalCounter counter;
  std::vector<detail::Candidate> singles;
  singles.reserve(f.ground_size());
  for (ItemIndex i = 0; i < f.ground_size(); ++i) {
    const double value = eval_counted(f, ItemSet{i}, counter);
    singles.push_back({i, value, value});
  }
  std::stable_sort(singles.begin(), singles.end(), detail::better);
  Solution sol;
  for (std::size_t j = 0; j < k; ++j) {
    sol.selected.insert(singles[j].item);
    sol.gains.push_back(singles[j].score);
  }
  sol.oblivious_part = sol.selected;
  sol.evals = counter.count();
  return sol;
}

// Oblivious-Greedy: S0 holds the ceil(beta*tau) items of largest singleton
// value, S1 is greedy for the remaining k - |S0| slots run on V \ S0 alone
// (it maximizes f(S1), not f(S0 + S1)).
inline Solution oblivious_greedy(const SetFunction& f, const SolverParams& params) {
  detail::check_budget(f, params.k);
  const std::size_t s0_size = params.tau == 0 ? 0 : oblivious_size(params.beta, params.tau);
  if (s0_size > params.k) {
    throw ParameterError("oblivious phase size ceil(beta*tau) = " + std::to_string(s0_size) +
                         " exceeds budget k = " + std::to_string(params.k));
  }
  Solution sol = oblivious(f, s0_size);
  EvalCounter counter;
  auto [s1, gains] =
      detail::greedy_over(f, detail::remaining_items(f.ground_size(), sol.oblivious_part), params.k - s0_size, counter);
  for (ItemIndex i : s1) sol.selected.insert(i);
  sol.greedy_part = std::move(s1);
  sol.gains.insert(sol.gains.end(), gains.begin(), gains.end());
  sol.evals += counter.count();
  return sol;
}

// Per-step sample size ceil((n/k) log(1/epsilon)), at least 1.
inline std::size_t stochastic_sample_size(std::size_t n, std::size_t k, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("epsilon must lie in (0, 1)");
  if (k == 0) return 1;
  const double raw = std::ceil(static_cast<double>(n) / static_cast<double>(k) * std::log(1.0 / epsilon));
  return std::max<std::size_t>(1, static_cast<std::size_t>(raw));
}

inline Solution stochastic_greedy(const SetFunction& f, std::size_t k, double epsilon, std::uint64_t seed) {
  detail::check_budget(f, k);
  const std::size_t sample = stochastic_sample_size(f.ground_size(), k, epsilon);
  CounterRng rng(seed);
  EvalCounter counter;
  Solution sol;
  std::vector<ItemIndex> pool = detail::all_items(f.ground_size());
  double value = 0.0;
  for (std::size_t step = 0; step < k; ++step) {
    std::vector<ItemIndex> draw =
        sample >= pool.size() ? pool : sample_without_replacement<ItemIndex>(rng, pool, sample);
    std::sort(draw.begin(), draw.end());
    const detail::Candidate best =
        detail::best_of(detail::score_candidates(f, sol.selected, value, draw, counter));
    sol.selected.insert(best.item);
    sol.gains.push_back(best.score);
    value = best.value;
    pool.erase(std::find(pool.begin(), pool.end(), best.item));
  }
  sol.greedy_part = sol.selected;
  sol.evals = counter.count();
  return sol;
}

// Each step picks uniformly among the k remaining items of largest marginal gain.
inline Solution random_greedy(const SetFunction& f, std::size_t k, std::uint64_t seed) {
  detail::check_budget(f, k);
  CounterRng rng(seed);
  EvalCounter counter;
  Solution sol;
  std::vector<ItemIndex> pool = detail::all_items(f.ground_size());
  double value = 0.0;
  for (std::size_t step = 0; step < k; ++step) {
    auto scored = detail::score_candidates(f, sol.selected, value, pool, counter);
    std::stable_sort(scored.begin(), scored.end(), detail::better);
    const std::size_t top = std::min(k, scored.size());
    const detail::Candidate pick = scored[uniform_index(rng, top)];
    sol.selected.insert(pick.item);
    sol.gains.push_back(pick.score);
    value = pick.value;
    pool.erase(std::find(pool.begin(), pool.end(), pick.item));
  }
  sol.greedy_part = sol.selected;
  sol.evals = counter.count();
  return sol;
}

// Orthogonal matching pursuit: add the coordinate of largest |gradient| of the
// utility at the current restricted maximizer.
inline Solution omp(const SetFunction& f, std::size_t k) {
  const auto* diff = dynamic_cast<const DifferentiableSetFunction*>(&f);
  if (diff == nullptr) throw UnsupportedOracleError("omp requires an oracle with gradient access");
  detail::check_budget(f, k);
  EvalCounter counter;
  Solution sol;
  double value = 0.0;
  for (std::size_t step = 0; step < k; ++step) {
    const std::vector<double> grad = diff->gradient_at(sol.selected);
    std::optional<detail::Candidate> best;
    for (ItemIndex i = 0; i < f.ground_size(); ++i) {
      if (sol.selected.contains(i)) continue;
      const detail::Candidate c{i, std::abs(grad[i])};
      if (!best || detail::better(c, *best)) best = c;
    }
    sol.selected.insert(best->item);
    const double next = eval_counted(f, sol.selected, counter);
    sol.gains.push_back(next - value);
    value = next;
  }
  sol.greedy_part = sol.selected;
  sol.evals = counter.count();
  return sol;
}

enum class SolverKind { kGreedy, kOblivious, kObliviousGreedy, kStochasticGreedy, kRandomGreedy, kOmp };

inline std::string_view solver_name(SolverKind kind) {
  switch (kind) {
    case SolverKind::kGreedy: return "greedy";
    case SolverKind::kOblivious: return "oblivious";
    case SolverKind::kObliviousGreedy: return "oblivious_greedy";
    case SolverKind::kStochasticGreedy: return "stochastic_greedy";
    case SolverKind::kRandomGreedy: return "random_greedy";
    case SolverKind::kOmp: return "omp";
  }
  return "unknown";
}

inline std::optional<SolverKind> parse_solver(std::string_view name) {
  for (SolverKind kind : {SolverKind::kGreedy, SolverKind::kOblivious, SolverKind::kObliviousGreedy,
                          SolverKind::kStochasticGreedy, SolverKind::kRandomGreedy, SolverKind::kOmp}) {
    if (solver_name(kind) == name) return kind;
  }
  return std::nullopt;
}

inline Solution run_solver(SolverKind kind, const SetFunction& f, const SolverParams& params) {
  switch (kind) {
    case SolverKind::kGreedy: return greedy(f, params.k);
    case SolverKind::kOblivious: return oblivious(f, params.k);
    case SolverKind::kObliviousGreedy: return oblivious_greedy(f, params);
    case SolverKind::kStochasticGreedy: return stochastic_greedy(f, params.k, params.epsilon, params.seed);
    case SolverKind::kRandomGreedy: return random_greedy(f, params.k, params.seed);
    case SolverKind::kOmp: return omp(f, params.k);
  }
  throw ParameterError("unknown solver");
}

}  // namespace robustsel

#endif  // ROBUSTSEL_SOLVERS_HPP_
