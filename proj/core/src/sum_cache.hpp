#pragma once

#include <cstdint>
#include <vector>

#include "coxfine/parallel.hpp"
#include "coxfine/value_table.hpp"

namespace coxfine::detail {

// Direct-mapped memo of verified sums value(a) + value(b) = value(c).
class SumCache {
 public:
  SumCache() : keys_(kSize, ~std::uint64_t{0}), sums_(kSize, kNoValue) {}

  bool check(const ValueTable& values, ValueId a, ValueId b, ValueId c) {
    if (a > b) std::swap(a, b);
    const std::uint64_t key = pack_pair(a, b);
    const std::size_t slot = (key * 0x9E3779B97F4A7C15ULL) >> (64 - kBits);
    if (keys_[slot] == key) return sums_[slot] == c;
    scratch_ = values.value(a).mpq() + values.value(b).mpq();
    if (scratch_ != values.value(c).mpq()) return false;
    keys_[slot] = key;
    sums_[slot] = c;
    return true;
  }

 private:
  static constexpr int kBits = 20;
  static constexpr std::size_t kSize = std::size_t{1} << kBits;
  std::vector<std::uint64_t> keys_;
  std::vector<ValueId> sums_;
  mpq_class scratch_;
};

// Direct-mapped memo of value(a) · value(b) as a value id, or kNoValue when
// the product is not a table value.
class ProductCache {
 public:
  ProductCache() : keys_(kSize, ~std::uint64_t{0}), products_(kSize, kNoValue) {}

  bool check(const ValueTable& values, ValueId a, ValueId b, ValueId c) {
    if (a > b) std::swap(a, b);
    const std::uint64_t key = pack_pair(a, b);
    const std::size_t slot = (key * 0x9E3779B97F4A7C15ULL) >> (64 - kBits);
    if (keys_[slot] != key) {
      scratch_ = values.value(a).mpq() * values.value(b).mpq();
      const auto id = values.find(Rational(scratch_));
      keys_[slot] = key;
      products_[slot] = id ? *id : kNoValue;
    }
    return products_[slot] == c;
  }

 private:
  static constexpr int kBits = 20;
  static constexpr std::size_t kSize = std::size_t{1} << kBits;
  std::vector<std::uint64_t> keys_;
  std::vector<ValueId> products_;
  mpq_class scratch_;
};

}  // namespace coxfine::detail
