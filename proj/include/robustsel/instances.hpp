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


#ifndef ROBUSTSEL_INSTANCES_HPP_
#define ROBUSTSEL_INSTANCES_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "robustsel/errors.hpp"
#include "robustsel/rng.hpp"
#include "robustsel/set_core.hpp"

// Seeded families of small normalized monotone set functions, tabulated over
// all 2^n subsets. Used by the bound certifier and the test suites.
namespace robustsel {

enum class OracleFamily {
  kModular,
  kCoverage,          // weighted coverage: submodular
  kConcaveModular,    // (w . 1_S)^p, p < 1: submodular
  kConvexModular,     // (w . 1_S)^p, p > 1: supermodular
  kCoveragePlusPair,  // coverage plus pairwise complementarities
  kRandomTable,       // arbitrary monotone table
};

inline constexpr std::array<OracleFamily, 6> kAllOracleFamilies = {
    OracleFamily::kModular,      OracleFamily::kCoverage,         OracleFamily::kConcaveModular,
    OracleFamily::kConvexModular, OracleFamily::kCoveragePlusPair, OracleFamily::kRandomTable};

inline std::string_view family_name(OracleFamily family) {
  switch (family) {
    case OracleFamily::kModular: return "modular";
    case OracleFamily::kCoverage: return "coverage";
    case OracleFamily::kConcaveModular: return "concave_modular";
    case OracleFamily::kConvexModular: return "convex_modular";
    case OracleFamily::kCoveragePlusPair: return "coverage_plus_pair";
    case OracleFamily::kRandomTable: return "random_table";
  }
  return "unknown";
}

inline std::optional<OracleFamily> parse_family(std::string_view name) {
  for (OracleFamily f : kAllOracleFamilies) {
    if (family_name(f) == name) return f;
  }
  return std::nullopt;
}

inline TableOracle random_monotone_oracle(OracleFamily family, std::size_t n, std::uint64_t seed) {
  if (n == 0 || n > 16) throw ParameterError("random oracle families support 1..16 items");
  CounterRng rng(seed);
  const std::uint64_t count = std::uint64_t{1} << n;
  std::vector<double> table(count, 0.0);

  std::vector<double> w(n);
  for (double& x : w) x = uniform_real(rng, 0.05, 1.0);
  auto modular = [&](std::uint64_t mask) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::uint64_t{1} << i)) s += w[i];
    }
    return s;
  };

  // Each item covers a random subset of a small weighted universe.
  const std::size_t universe = 2 * n;
  std::vector<double> element_weight(universe);
  std::vector<std::uint64_t> covers(n, 0);
  for (double& x : element_weight) x = uniform_real(rng, 0.1, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    while (covers[i] == 0) {
      for (std::size_t e = 0; e < universe; ++e) {
        if (uniform01(rng) < 0.3) covers[i] |= std::uint64_t{1} << e;
      }
    }
  }
  auto coverage = [&](std::uint64_t mask) {
    std::uint64_t covered = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::uint64_t{1} << i)) covered |= covers[i];
    }
    double s = 0.0;
    for (std::size_t e = 0; e < universe; ++e) {
      if (covered & (std::uint64_t{1} << e)) s += element_weight[e];
    }
    return s;
  };

  switch (family) {
    case OracleFamily::kModular:
      for (std::uint64_t m = 0; m < count; ++m) table[m] = modular(m);
      break;
    case OracleFamily::kCoverage:
      for (std::uint64_t m = 0; m < count; ++m) table[m] = coverage(m);
      break;
    case OracleFamily::kConcaveModular: {
      const double p = uniform_real(rng, 0.3, 0.9);
      for (std::uint64_t m = 1; m < count; ++m) table[m] = std::pow(modular(m), p);
      break;
    }
    case OracleFamily::kConvexModular: {
      const double p = uniform_real(rng, 1.1, 2.5);
      for (std::uint64_t m = 1; m < count; ++m) table[m] = std::pow(modular(m), p);
      break;
    }
    case OracleFamily::kCoveragePlusPair: {
      std::vector<double> pair(n * n, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          if (uniform01(rng) < 0.4) pair[i * n + j] = uniform_real(rng, 0.0, 0.8);
        }
      }
      for (std::uint64_t m = 1; m < count; ++m) {
        double s = coverage(m);
        for (std::size_t i = 0; i < n; ++i) {
          if (!(m & (std::uint64_t{1} << i))) continue;
          for (std::size_t j = i + 1; j < n; ++j) {
            if (m & (std::uint64_t{1} << j)) s += pair[i * n + j];
          }
        }
        table[m] = s;
      }
      break;
    }
    case OracleFamily::kRandomTable:
      // Every set exceeds its largest proper subset by a random increment.
      for (std::uint64_t m = 1; m < count; ++m) {
        double floor = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const std::uint64_t bit = std::uint64_t{1} << i;
          if (m & bit) floor = std::max(floor, table[m ^ bit]);
        }
        table[m] = floor + uniform01(rng);
      }
      break;
  }
  return TableOracle(n, std::move(table));
}

}  // namespace robustsel

#endif  // ROBUSTSEL_INSTANCES_HPP_
