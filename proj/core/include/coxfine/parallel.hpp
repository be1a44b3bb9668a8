#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace coxfine {

// Thread count from COXFINE_THREADS, else hardware concurrency (at least 1).
int default_thread_count();

// Splits [begin, end) into `parts` contiguous ranges and runs fn(part, lo, hi)
// for each, one thread per part. Parts are numbered in range order so callers
// can merge partial results deterministically.
void run_partitioned(std::uint64_t begin, std::uint64_t end, int parts,
                     const std::function<void(int, std::uint64_t, std::uint64_t)>& fn);

// Open-addressing hash map from 64-bit keys to 32-bit payloads. The all-ones
// key is reserved as the empty marker.
class FlatIndex {
 public:
  static constexpr std::uint64_t kEmpty = ~std::uint64_t{0};
  static constexpr std::uint32_t kAbsent = ~std::uint32_t{0};

  explicit FlatIndex(std::size_t expected = 1024) { rehash(capacity_for(expected)); }

  std::size_t size() const { return size_; }

  std::uint32_t find(std::uint64_t key) const {
    std::size_t i = slot(key);
    while (true) {
      const std::uint64_t k = keys_[i];
      if (k == key) return vals_[i];
      if (k == kEmpty) return kAbsent;
      i = (i + 1) & mask_;
    }
  }

  // Inserts key -> value unless present; returns the stored value.
  std::uint32_t insert(std::uint64_t key, std::uint32_t value) {
    if ((size_ + 1) * 2 > keys_.size()) rehash(keys_.size() * 2);
    std::size_t i = slot(key);
    while (true) {
      const std::uint64_t k = keys_[i];
      if (k == key) return vals_[i];
      if (k == kEmpty) {
        keys_[i] = key;
        vals_[i] = value;
        ++size_;
        return value;
      }
      i = (i + 1) & mask_;
    }
  }

  void clear() {
    std::fill(keys_.begin(), keys_.end(), kEmpty);
    size_ = 0;
  }

 private:
  static std::size_t capacity_for(std::size_t n) {
    std::size_t c = 16;
    while (c < n * 2) c <<= 1;
    return c;
  }
  static std::uint64_t mix(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
  }
  std::size_t slot(std::uint64_t key) const { return mix(key) & mask_; }

  void rehash(std::size_t capacity) {
    std::vector<std::uint64_t> old_keys(capacity, kEmpty);
    std::vector<std::uint32_t> old_vals(capacity);
    old_keys.swap(keys_);
    old_vals.swap(vals_);
    mask_ = capacity - 1;
    size_ = 0;
    for (std::size_t i = 0; i < old_keys.size(); ++i) {
      if (old_keys[i] != kEmpty) insert(old_keys[i], old_vals[i]);
    }
  }

  std::vector<std::uint64_t> keys_;
  std::vector<std::uint32_t> vals_;
  std::size_t mask_ = 0;
  std::size_t size_ = 0;
};

inline std::uint64_t pack_pair(std::uint32_t a, std::uint32_t b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace coxfine
