#pragma once

#include <bit>
#include <cassert>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "ordkit/error.hpp"

namespace ordkit {

/// Elements of a finite poset are identified by their index.
using Elem = std::size_t;

/// Hard cap on the number of elements of any poset handled by the library.
inline constexpr std::size_t kMaxElements = 64;

/// A subset of {0, ..., size-1}, stored as a 64-bit mask.
class Subset {
 public:
  Subset() = default;
  explicit Subset(std::size_t size) : size_(size) {
    if (size > kMaxElements) {
      throw SizeCapExceeded("posets are limited to " + std::to_string(kMaxElements) + " elements");
    }
  }
  Subset(std::size_t size, std::initializer_list<Elem> elems) : Subset(size) {
    for (Elem e : elems) insert(e);
  }

  static Subset full(std::size_t size) {
    Subset s(size);
    s.bits_ = s.universe_mask();
    return s;
  }
  static Subset singleton(std::size_t size, Elem x) {
    Subset s(size);
    s.insert(x);
    return s;
  }
  static Subset from_bits(std::size_t size, std::uint64_t bits) {
    Subset s(size);
    s.bits_ = bits & s.universe_mask();
    return s;
  }

  std::size_t size() const noexcept { return size_; }
  std::uint64_t bits() const noexcept { return bits_; }
  std::size_t count() const noexcept { return static_cast<std::size_t>(std::popcount(bits_)); }
  bool empty() const noexcept { return bits_ == 0; }

  bool contains(Elem x) const noexcept {
    assert(x < size_);
    return (bits_ >> x) & 1U;
  }
  void insert(Elem x) noexcept {
    assert(x < size_);
    bits_ |= std::uint64_t{1} << x;
  }
  void erase(Elem x) noexcept {
    assert(x < size_);
    bits_ &= ~(std::uint64_t{1} << x);
  }
  Subset with(Elem x) const noexcept {
    Subset s = *this;
    s.insert(x);
    return s;
  }

  bool is_subset_of(const Subset& other) const noexcept { return (bits_ & ~other.bits_) == 0; }

  Subset& operator&=(const Subset& o) noexcept {
    bits_ &= o.bits_;
    return *this;
  }
  Subset& operator|=(const Subset& o) noexcept {
    bits_ |= o.bits_;
    return *this;
  }
  friend Subset operator&(Subset a, const Subset& b) noexcept { return a &= b; }
  friend Subset operator|(Subset a, const Subset& b) noexcept { return a |= b; }
  Subset complement() const noexcept { return from_bits(size_, ~bits_); }

  friend bool operator==(const Subset&, const Subset&) = default;
  friend auto operator<=>(const Subset& a, const Subset& b) {
    if (auto c = a.size_ <=> b.size_; c != 0) return c;
    return a.bits_ <=> b.bits_;
  }

  /// Members in increasing order.
  std::vector<Elem> elements() const {
    std::vector<Elem> out;
    out.reserve(count());
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) {
      out.push_back(static_cast<Elem>(std::countr_zero(b)));
    }
    return out;
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) {
      f(static_cast<Elem>(std::countr_zero(b)));
    }
  }

 private:
  std::uint64_t universe_mask() const noexcept {
    return size_ == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << size_) - 1);
  }

  std::size_t size_ = 0;
  std::uint64_t bits_ = 0;
};

}  // namespace ordkit
