#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>

namespace coxfine {

inline constexpr int kMaxWorlds = 64;

// A subset of worlds 0..n-1 as a single machine word.
class EventSet {
 public:
  constexpr EventSet() = default;
  constexpr explicit EventSet(std::uint64_t bits) : bits_(bits) {}

  static constexpr EventSet full(int n) {
    return EventSet(n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
  }
  static constexpr EventSet single(int world) { return EventSet(std::uint64_t{1} << world); }
  static constexpr EventSet of(std::initializer_list<int> worlds) {
    std::uint64_t b = 0;
    for (int w : worlds) b |= std::uint64_t{1} << w;
    return EventSet(b);
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool contains(int world) const { return (bits_ >> world) & 1U; }
  constexpr int count() const { return std::popcount(bits_); }
  constexpr bool subset_of(EventSet other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool strict_subset_of(EventSet other) const {
    return subset_of(other) && bits_ != other.bits_;
  }
  constexpr EventSet complement(int n) const { return EventSet(~bits_ & full(n).bits_); }
  constexpr EventSet without(EventSet other) const { return EventSet(bits_ & ~other.bits_); }

  constexpr EventSet operator&(EventSet o) const { return EventSet(bits_ & o.bits_); }
  constexpr EventSet operator|(EventSet o) const { return EventSet(bits_ | o.bits_); }
  constexpr EventSet operator^(EventSet o) const { return EventSet(bits_ ^ o.bits_); }

  constexpr auto operator<=>(const EventSet&) const = default;

  // Lower-case hex of the bitmask, no prefix.
  std::string hex() const;

 private:
  std::uint64_t bits_ = 0;
};

// Calls fn(sub) for every submask of `mask` in increasing numeric order,
// including the empty set and `mask` itself.
template <typename Fn>
inline void for_each_submask(std::uint64_t mask, Fn&& fn) {
  std::uint64_t sub = 0;
  while (true) {
    fn(sub);
    if (sub == mask) break;
    sub = (sub - mask) & mask;
  }
}

}  // namespace coxfine
