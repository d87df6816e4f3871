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


#ifndef ROBUSTSEL_RATIOS_HPP_
#define ROBUSTSEL_RATIOS_HPP_

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "robustsel/adversary.hpp"
#include "robustsel/errors.hpp"
#include "robustsel/set_core.hpp"
#include "robustsel/solvers.hpp"

namespace robustsel {

inline constexpr std::size_t kMaxRatioItems = 12;

// An argument tuple attaining a ratio's extremum.
struct RatioWitness {
  ItemSet s;
  ItemSet omega;                    // Omega, B \ A, or the bipartition half A
  std::optional<ItemIndex> item;    // curvature witnesses only
  double ratio = 1.0;
};

struct RatioEstimates {
  double gamma = 1.0;        // submodularity ratio
  double gamma_check = 1.0;  // supermodularity ratio
  double alpha = 0.0;        // generalized curvature
  double alpha_check = 0.0;  // inverse generalized curvature
  double nu = 1.0;           // subadditivity ratio
  double nu_check = 1.0;     // superadditivity ratio
  double theta = 1.0;        // bipartite subadditivity ratio

  RatioWitness gamma_witness, gamma_check_witness, alpha_witness, alpha_check_witness, nu_witness,
      nu_check_witness, theta_witness;
  std::uint64_t n_pairs_checked = 0;

  // nu >= gamma >= 1 - alpha_check and nu_check >= gamma_check >= 1 - alpha.
  bool satisfies_ordering(double tol = 1e-9) const {
    return nu >= gamma - tol && gamma >= 1.0 - alpha_check - tol && nu_check >= gamma_check - tol &&
           gamma_check >= 1.0 - alpha - tol;
  }
  // theta >= nu_check * nu.
  bool satisfies_bipartite(double tol = 1e-9) const { return theta >= nu_check * nu - tol; }
};

struct RatioOptions {
  // Constraints whose denominator is at most this fraction of max f are
  // treated as vacuous (denominator zero).
  double zero_tolerance = 1e-10;
};

namespace detail {

// Running extremum of a "largest scalar such that ratio >= scalar" quantity.
struct MinTracker {
  std::optional<double> value;
  RatioWitness witness;

  void offer(double ratio, std::uint64_t s, std::uint64_t omega, std::optional<ItemIndex> item) {
    if (!value || ratio < *value) {
      value = ratio;
      witness.s = items_from_mask(s);
      witness.omega = items_from_mask(omega);
      witness.item = item;
      witness.ratio = ratio;
    }
  }
};

inline double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

inline std::uint64_t highest_bit(std::uint64_t mask) { return std::uint64_t{1} << (std::bit_width(mask) - 1); }

}  // namespace detail

// f evaluated on every subset, indexed by bitmask.
inline std::vector<double> value_table(const SetFunction& f) {
  const std::size_t n = f.ground_size();
  if (n > kMaxRatioItems) {
    throw InstanceTooLargeError("exhaustive enumeration supports at most " + std::to_string(kMaxRatioItems) +
                                " items, got " + std::to_string(n));
  }
  const std::uint64_t full = std::uint64_t{1} << n;
  std::vector<double> values(full);
  std::vector<ItemIndex> items;
  for (std::uint64_t mask = 0; mask < full; ++mask) {
    items.clear();
    for (ItemIndex i = 0; i < n; ++i) {
      if (mask & (std::uint64_t{1} << i)) items.push_back(i);
    }
    values[mask] = f.evaluate(items);
  }
  if (values[0] != 0.0) throw ContractError("set function is not normalized: f(empty) != 0");
  return values;
}

// Exhaustive submodularity, supermodularity, curvature, inverse curvature,
// sub/superadditivity and bipartite subadditivity ratios. A constraint whose
// denominator is (numerically) zero holds vacuously; a ratio with no
// non-vacuous constraint takes its extreme admissible value (1 for the
// largest-scalar ratios, 0 for the curvatures).
inline RatioEstimates estimate_ratios(const SetFunction& f, const RatioOptions& options = {}) {
  const std::vector<double> v = value_table(f);
  const std::size_t n = f.ground_size();
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  const double zero = options.zero_tolerance * scale;

  detail::MinTracker gamma, gamma_check, one_minus_alpha, one_minus_alpha_check, nu, nu_check, theta;
  RatioEstimates out;

  // gamma, gamma_check over disjoint (S, Omega), Omega non-empty.
  std::vector<double> gain(n);
  std::vector<double> gain_sum(full + 1);
  for (std::uint64_t s = 0; s <= full; ++s) {
    const std::uint64_t comp = full & ~s;
    for (ItemIndex i = 0; i < n; ++i) {
      const std::uint64_t bit = std::uint64_t{1} << i;
      gain[i] = (comp & bit) ? v[s | bit] - v[s] : 0.0;
    }
    gain_sum[0] = 0.0;
    // Increasing submask order; each sum extends a smaller submask by its top
    // item so items are added in ascending index order.
    for (std::uint64_t omega = (0 - comp) & comp; omega != 0; omega = (omega - comp) & comp) {
      const std::uint64_t top = detail::highest_bit(omega);
      gain_sum[omega] = gain_sum[omega ^ top] + gain[static_cast<std::size_t>(std::countr_zero(top))];
      const double joint = v[s | omega] - v[s];
      const double separate = gain_sum[omega];
      ++out.n_pairs_checked;
      if (joint > zero) gamma.offer(separate / joint, s, omega, std::nullopt);
      if (separate > zero) gamma_check.offer(joint / separate, s, omega, std::nullopt);
    }
  }

  // alpha, alpha_check over i not in B, A subset of B.
  for (ItemIndex i = 0; i < n; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    const std::uint64_t rest = full & ~bit;
    for (std::uint64_t b = 0;; b = (b - rest) & rest) {
      const double gain_b = v[b | bit] - v[b];
      for (std::uint64_t a = 0;; a = (a - b) & b) {
        const double gain_a = v[a | bit] - v[a];
        ++out.n_pairs_checked;
        if (gain_a > zero) one_minus_alpha.offer(gain_b / gain_a, a | bit, b & ~a, i);
        if (gain_b > zero) one_minus_alpha_check.offer(gain_a / gain_b, a | bit, b & ~a, i);
        if (a == b) break;
      }
      if (b == rest) break;
    }
  }

  // nu, nu_check, theta over non-empty S.
  for (std::uint64_t s = 1; s <= full; ++s) {
    double singles = 0.0;
    for (ItemIndex i = 0; i < n; ++i) {
      if (s & (std::uint64_t{1} << i)) singles += v[std::uint64_t{1} << i];
    }
    ++out.n_pairs_checked;
    if (v[s] > zero) nu.offer(singles / v[s], s, 0, std::nullopt);
    if (singles > zero) nu_check.offer(v[s] / singles, s, 0, std::nullopt);
    if (v[s] > zero) {
      for (std::uint64_t a = 0;; a = (a - s) & s) {
        ++out.n_pairs_checked;
        theta.offer((v[a] + v[s & ~a]) / v[s], s, a, std::nullopt);
        if (a == s) break;
      }
    }
  }

  auto largest = [](const detail::MinTracker& t, double& value, RatioWitness& w) {
    value = t.value ? detail::clamp01(*t.value) : 1.0;
    w = t.witness;
  };
  auto smallest = [](const detail::MinTracker& t, double& value, RatioWitness& w) {
    value = t.value ? detail::clamp01(1.0 - *t.value) : 0.0;
    w = t.witness;
  };
  largest(gamma, out.gamma, out.gamma_witness);
  largest(gamma_check, out.gamma_check, out.gamma_check_witness);
  smallest(one_minus_alpha, out.alpha, out.alpha_witness);
  smallest(one_minus_alpha_check, out.alpha_check, out.alpha_check_witness);
  largest(nu, out.nu, out.nu_witness);
  largest(nu_check, out.nu_check, out.nu_check_witness);
  largest(theta, out.theta, out.theta_witness);
  return out;
}

// Best set of at most `size` items drawn from `pool` (exhaustive). Ties go to
// the lexicographically smallest sorted set.
struct BestSubset {
  ItemSet set;
  double value = 0.0;
};

inline BestSubset brute_force_opt(const SetFunction& f, const std::vector<ItemIndex>& pool, std::size_t size,
                                  std::uint64_t max_subsets = 2'000'000) {
  std::vector<ItemIndex> items = pool;
  std::sort(items.begin(), items.end());
  size = std::min(size, items.size());
  std::uint64_t total = 0;
  for (std::size_t r = 0; r <= size; ++r) total += binomial(items.size(), r);
  if (total > max_subsets) throw InstanceTooLargeError("brute-force optimum enumeration too large");
  BestSubset best;
  best.value = f(ItemSet());
  std::vector<ItemIndex> best_key;
  for (std::size_t r = 1; r <= size; ++r) {
    detail::for_each_combination(items, r, [&](const ItemSet& candidate) {
      const double value = f(candidate);
      if (value > best.value || (value == best.value && candidate.sorted() < best_key)) {
        best.set = candidate;
        best.value = value;
        best_key = candidate.sorted();
      }
    });
  }
  return best;
}

enum class BoundVariant {
  kFiniteK,
  kSuperadditiveFiniteK,
  kLinearRegime,
  kAsymptotic,
  kSuperadditiveAsymptotic,
};

inline std::string_view bound_variant_name(BoundVariant v) {
  switch (v) {
    case BoundVariant::kFiniteK: return "finite_k";
    case BoundVariant::kSuperadditiveFiniteK: return "superadditive_finite_k";
    case BoundVariant::kLinearRegime: return "linear_regime";
    case BoundVariant::kAsymptotic: return "asymptotic";
    case BoundVariant::kSuperadditiveAsymptotic: return "superadditive_asymptotic";
  }
  return "unknown";
}

struct BoundInputs {
  std::size_t k = 1;
  std::size_t tau = 0;
  double beta = 1.0;
  double gamma = 1.0;
  double theta = 1.0;
  double nu_check = 1.0;
  double alpha_check = 0.0;
  double nu = 1.0;
  BoundVariant variant = BoundVariant::kFiniteK;

  double c() const { return static_cast<double>(tau) / static_cast<double>(k); }
};

struct BoundFactor {
  double factor = 0.0;        // multiplies the optimum value
  double p = 0.0;             // balance term P
  double greedy_term = 0.0;   // 1 - exp(-gamma * ...)
  bool clamped = false;       // P <= 0 (beta <= 1) forced the bound to zero
};

// Guarantee factor for the robust value of Oblivious-Greedy relative to
// f(OPT_{(k - tau, V \ E*)}).
//
// Finite-k forms keep the exponent gamma (k - ceil(beta tau)) / (k - tau):
//   curvature: theta P E / (1 + P E),       P = (b-1) nc (1-ac) / (1 + (b-1) nc (1-ac))
//   superadditive: theta^2 P E / (1 + theta P E), P = (b-1) nc nu / (1 + (b-1) nc nu)
// The linear-regime form uses gamma (1 - beta c)/(1 - c) with c = tau / k; the
// asymptotic forms are theta (1-e^-g)/(2-e^-g) and
// theta^2 (1-e^-g)/(1 + theta (1-e^-g)).
inline BoundFactor bound_factor(const BoundInputs& in) {
  for (double r : {in.gamma, in.theta, in.nu_check, in.alpha_check, in.nu}) {
    if (!(r >= 0.0 && r <= 1.0)) throw ParameterError("ratio inputs must lie in [0, 1]");
  }
  BoundFactor out;
  const double g = in.gamma;
  if (in.variant == BoundVariant::kAsymptotic) {
    out.p = 1.0;
    out.greedy_term = 1.0 - std::exp(-g);
    out.factor = in.theta * out.greedy_term / (2.0 - std::exp(-g));
    return out;
  }
  if (in.variant == BoundVariant::kSuperadditiveAsymptotic) {
    out.p = 1.0;
    out.greedy_term = 1.0 - std::exp(-g);
    out.factor = in.theta * in.theta * out.greedy_term / (1.0 + in.theta * out.greedy_term);
    return out;
  }

  if (in.k == 0 || in.tau >= in.k) throw ParameterError("bound requires 0 <= tau < k");
  const std::size_t s0 = in.tau == 0 ? 0 : oblivious_size(in.beta, in.tau);
  if (s0 > in.k) throw ParameterError("bound requires ceil(beta * tau) <= k");

  const bool superadditive = in.variant == BoundVariant::kSuperadditiveFiniteK;
  const double strength = superadditive ? in.nu_check * in.nu : in.nu_check * (1.0 - in.alpha_check);
  const double scaled = (in.beta - 1.0) * strength;
  out.p = scaled / (1.0 + scaled);
  if (!(out.p > 0.0)) {
    out.p = 0.0;
    out.clamped = true;
    return out;
  }

  double exponent = 0.0;
  if (in.variant == BoundVariant::kLinearRegime) {
    const double c = in.c();
    exponent = g * (1.0 - in.beta * c) / (1.0 - c);
  } else {
    exponent = g * static_cast<double>(in.k - s0) / static_cast<double>(in.k - in.tau);
  }
  out.greedy_term = 1.0 - std::exp(-exponent);
  const double pe = out.p * out.greedy_term;
  out.factor = superadditive ? in.theta * in.theta * pe / (1.0 + in.theta * pe) : in.theta * pe / (1.0 + pe);
  out.factor = std::max(0.0, out.factor);
  return out;
}

inline double robust_bound(const BoundInputs& inputs, double opt_value) {
  return bound_factor(inputs).factor * opt_value;
}

// Greedy after l steps keeps at least (1 - exp(-gamma l / k)) of the best k-set.
inline double greedy_guarantee(double gamma, std::size_t l, std::size_t k) {
  if (k == 0) throw ParameterError("greedy guarantee needs k >= 1");
  return 1.0 - std::exp(-gamma * static_cast<double>(l) / static_cast<double>(k));
}

// max{a x, b y - x} >= a/(1+a) * b y for a > 0: the balancing step that
// combines an increasing and a decreasing lower bound.
inline double balance_lower_bound(double a, double b, double y) { return a / (1.0 + a) * b * y; }

struct SurfaceRow {
  double gamma = 0.0;
  double theta = 0.0;
  double factor = 0.0;
};

// Asymptotic guarantee theta (1 - e^-gamma) / (2 - e^-gamma) over a grid.
inline std::vector<SurfaceRow> guarantee_surface(const std::vector<double>& gammas, const std::vector<double>& thetas) {
  std::vector<SurfaceRow> rows;
  rows.reserve(gammas.size() * thetas.size());
  for (double g : gammas) {
    for (double t : thetas) {
      BoundInputs in;
      in.gamma = g;
      in.theta = t;
      in.variant = BoundVariant::kAsymptotic;
      rows.push_back({g, t, bound_factor(in).factor});
    }
  }
  return rows;
}

// Evenly spaced grid on [0, 1] with `steps` intervals.
inline std::vector<double> unit_grid(std::size_t steps) {
  if (steps == 0) throw ParameterError("grid needs at least one interval");
  std::vector<double> out(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) out[i] = static_cast<double>(i) / static_cast<double>(steps);
  return out;
}

inline void write_surface_csv(std::ostream& os, const std::vector<SurfaceRow>& rows) {
  os << "gamma,theta,factor\n";
  for (const SurfaceRow& r : rows) os << fmt::format("{:.12g},{:.12g},{:.12g}\n", r.gamma, r.theta, r.factor);
}

}  // namespace robustsel

#endif  // ROBUSTSEL_RATIOS_HPP_
