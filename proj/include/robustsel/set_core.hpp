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


#ifndef ROBUSTSEL_SET_CORE_HPP_
#define ROBUSTSEL_SET_CORE_HPP_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "robustsel/errors.hpp"

namespace robustsel {

// Items are dense indices 0..n-1 into a ground set.
using ItemIndex = std::size_t;

struct GroundSet {
  std::size_t n = 1;

  explicit GroundSet(std::size_t size) : n(size) {
    if (n == 0) throw ParameterError("ground set must contain at least one item");
  }
  bool contains(ItemIndex i) const noexcept { return i < n; }
};

// Insertion-ordered set of distinct items.
class ItemSet {
 public:
  ItemSet() = default;
  ItemSet(std::initializer_list<ItemIndex> items) {
    for (ItemIndex i : items) {
      if (!insert(i)) throw ParameterError("duplicate item " + std::to_string(i) + " in ItemSet");
    }
  }
  explicit ItemSet(std::span<const ItemIndex> items) {
    for (ItemIndex i : items) {
      if (!insert(i)) throw ParameterError("duplicate item " + std::to_string(i) + " in ItemSet");
    }
  }

  // Returns false (and leaves the set unchanged) if `i` is already present.
  bool insert(ItemIndex i) {
    if (contains(i)) return false;
    items_.push_back(i);
    return true;
  }
  bool erase(ItemIndex i) {
    auto it = std::find(items_.begin(), items_.end(), i);
    if (it == items_.end()) return false;
    items_.erase(it);
    return true;
  }
  bool contains(ItemIndex i) const { return std::find(items_.begin(), items_.end(), i) != items_.end(); }

  std::size_t size() const noexcept { return items_.size(); }
  bool empty() const noexcept { return items_.empty(); }
  ItemIndex operator[](std::size_t pos) const { return items_[pos]; }
  auto begin() const noexcept { return items_.begin(); }
  auto end() const noexcept { return items_.end(); }
  std::span<const ItemIndex> items() const noexcept { return items_; }

  std::vector<ItemIndex> sorted() const {
    std::vector<ItemIndex> out = items_;
    std::sort(out.begin(), out.end());
    return out;
  }

  // Set difference, preserving this set's order.
  ItemSet without(const ItemSet& other) const {
    ItemSet out;
    for (ItemIndex i : items_) {
      if (!other.contains(i)) out.items_.push_back(i);
    }
    return out;
  }
  ItemSet with(ItemIndex i) const {
    ItemSet out = *this;
    out.insert(i);
    return out;
  }

  // Order-insensitive equality.
  bool same_members(const ItemSet& other) const { return sorted() == other.sorted(); }
  friend bool operator==(const ItemSet&, const ItemSet&) = default;

 private:
  std::vector<ItemIndex> items_;
};

inline ItemSet items_from_mask(std::uint64_t mask) {
  ItemSet out;
  for (ItemIndex i = 0; mask != 0; ++i, mask >>= 1) {
    if (mask & 1u) out.insert(i);
  }
  return out;
}

inline std::uint64_t mask_of(const ItemSet& s) {
  std::uint64_t mask = 0;
  for (ItemIndex i : s) {
    if (i >= 64) throw InvalidIndexError("item index too large for a 64-bit mask");
    mask |= std::uint64_t{1} << i;
  }
  return mask;
}

// A deterministic set function f: 2^V -> R_+ over a fixed ground set.
//
// Implementations receive distinct, in-range indices in arbitrary order and
// must return the same bits for the same members regardless of order.
// Monotonicity is a caller obligation and is not checked per call.
class SetFunction {
 public:
  virtual ~SetFunction() = default;

  virtual std::size_t ground_size() const = 0;
  virtual double evaluate(std::span<const ItemIndex> items) const = 0;

  GroundSet ground() const { return GroundSet(ground_size()); }

  double operator()(const ItemSet& s) const {
    check_items(s.items());
    return evaluate(s.items());
  }

  void check_item(ItemIndex i) const {
    if (i >= ground_size()) {
      throw InvalidIndexError("item " + std::to_string(i) + " outside ground set of size " +
                              std::to_string(ground_size()));
    }
  }
  void check_items(std::span<const ItemIndex> items) const {
    for (ItemIndex i : items) check_item(i);
  }
};

// Throws ContractError unless f(empty) == 0 exactly.
inline void check_normalized(const SetFunction& f) {
  const double empty_value = f.evaluate({});
  if (empty_value != 0.0) {
    throw ContractError("set function is not normalized: f(empty) = " + std::to_string(empty_value));
  }
}

// Adapts a callable `double(std::span<const ItemIndex>)`.
class FunctionOracle final : public SetFunction {
 public:
  using Fn = std::function<double(std::span<const ItemIndex>)>;

  FunctionOracle(std::size_t n, Fn fn) : n_(GroundSet(n).n), fn_(std::move(fn)) { check_normalized(*this); }

  std::size_t ground_size() const override { return n_; }
  double evaluate(std::span<const ItemIndex> items) const override { return fn_(items); }

 private:
  std::size_t n_;
  Fn fn_;
};

// A set function given by its full value table, indexed by bitmask.
class TableOracle final : public SetFunction {
 public:
  TableOracle(std::size_t n, std::vector<double> values) : n_(GroundSet(n).n), values_(std::move(values)) {
    if (n_ > 24) throw InstanceTooLargeError("table oracle supports at most 24 items");
    if (values_.size() != (std::size_t{1} << n_)) throw ParameterError("table size must be 2^n");
    check_normalized(*this);
  }

  std::size_t ground_size() const override { return n_; }
  double evaluate(std::span<const ItemIndex> items) const override {
    std::uint64_t mask = 0;
    for (ItemIndex i : items) mask |= std::uint64_t{1} << i;
    return values_[mask];
  }
  std::span<const double> table() const noexcept { return values_; }

 private:
  std::size_t n_;
  std::vector<double> values_;
};

// A set function induced by maximizing a differentiable concave utility over
// supports; exposes the utility's gradient at the restricted maximizer.
class DifferentiableSetFunction : public SetFunction {
 public:
  // Length ground_size().
  virtual std::vector<double> gradient_at(const ItemSet& support) const = 0;
};

class EvalCounter {
 public:
  EvalCounter() = default;
  EvalCounter(const EvalCounter&) = delete;
  EvalCounter& operator=(const EvalCounter&) = delete;

  std::uint64_t count() const noexcept { return count_.load(std::memory_order_relaxed); }
  void increment(std::uint64_t by = 1) noexcept { count_.fetch_add(by, std::memory_order_relaxed); }

 private:
  std::atomic<std::uint64_t> count_{0};
};

inline double eval_counted(const SetFunction& f, const ItemSet& s, EvalCounter& counter) {
  const double value = f(s);
  counter.increment();
  return value;
}

// f({item} | base) = f(base + item) - f(base); zero when item is already in base.
inline double marginal_gain(const SetFunction& f, ItemIndex item, const ItemSet& base) {
  f.check_item(item);
  if (base.contains(item)) return 0.0;
  return f(base.with(item)) - f(base);
}

// Opt-in cache keyed by the sorted member list. Safe for concurrent use.
class MemoizedOracle final : public SetFunction {
 public:
  explicit MemoizedOracle(const SetFunction& inner) : inner_(inner) {}

  std::size_t ground_size() const override { return inner_.ground_size(); }
  double evaluate(std::span<const ItemIndex> items) const override {
    std::vector<ItemIndex> key(items.begin(), items.end());
    std::sort(key.begin(), key.end());
    {
      std::lock_guard<std::mutex> lock(mutex_);
      if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    // Evaluate on the canonical order so cached and cold values agree bitwise.
    const double value = inner_.evaluate(key);
    std::lock_guard<std::mutex> lock(mutex_);
    cache_.emplace(std::move(key), value);
    ++misses_;
    return value;
  }

  std::size_t misses() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return misses_;
  }

 private:
  const SetFunction& inner_;
  mutable std::mutex mutex_;
  mutable std::map<std::vector<ItemIndex>, double> cache_;
  mutable std::size_t misses_ = 0;
};

}  // namespace robustsel

#endif  // ROBUSTSEL_SET_CORE_HPP_
