#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ieml {

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

inline constexpr std::size_t words_for(std::size_t n) { return (n + kWordBits - 1) / kWordBits; }

namespace detail {

inline bool words_subset(std::span<const Word> a, std::span<const Word> b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] & ~b[i]) return false;
  return true;
}

inline bool words_intersect(std::span<const Word> a, std::span<const Word> b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] & b[i]) return true;
  return false;
}

// Four independent multiply-xor lanes, folded at the end.
inline std::size_t words_hash(std::span<const Word> w) {
  constexpr std::uint64_t k = 0x9e3779b97f4a7c15ULL;
  std::uint64_t h[4] = {0xcbf29ce484222325ULL, 0x84222325cbf29ce4ULL, 0x243f6a8885a308d3ULL, 0x13198a2e03707344ULL};
  std::size_t i = 0;
  for (; i + 4 <= w.size(); i += 4)
    for (int j = 0; j < 4; ++j) h[j] = (h[j] ^ w[i + j]) * k;
  for (; i < w.size(); ++i) h[0] = (h[0] ^ w[i]) * k;
  std::uint64_t r = w.size();
  for (auto x : h) r = (r ^ (x >> 29) ^ x) * k;
  return static_cast<std::size_t>(r ^ (r >> 32));
}

template <class F>
void for_each_bit(std::span<const Word> w, F&& f) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    Word x = w[i];
    while (x) {
      int b = std::countr_zero(x);
      f(i * kWordBits + static_cast<std::size_t>(b));
      x &= x - 1;
    }
  }
}

}  // namespace detail

/// Fixed-universe set of states {0..n-1}, one bit per state.
class StateSet {
 public:
  StateSet() = default;
  explicit StateSet(std::size_t n) : n_(n), w_(words_for(n), 0) {}

  static StateSet full(std::size_t n) {
    StateSet s(n);
    for (auto& x : s.w_) x = ~Word{0};
    s.trim();
    return s;
  }

  static StateSet singleton(std::size_t n, std::size_t i) {
    StateSet s(n);
    s.set(i);
    return s;
  }

  /// Low 64 states taken from `mask`; bits at or above n are dropped.
  static StateSet from_mask(std::size_t n, std::uint64_t mask) {
    StateSet s(n);
    if (!s.w_.empty()) s.w_[0] = mask;
    s.trim();
    return s;
  }

  static StateSet from_list(std::size_t n, const std::vector<std::size_t>& items) {
    StateSet s(n);
    for (auto i : items) s.set(i);
    return s;
  }

  std::size_t size() const { return n_; }
  std::span<const Word> words() const { return w_; }
  std::span<Word> words() { return w_; }

  bool test(std::size_t i) const { return (w_[i / kWordBits] >> (i % kWordBits)) & 1U; }

  void set(std::size_t i, bool v = true) {
    check_index(i);
    Word m = Word{1} << (i % kWordBits);
    if (v)
      w_[i / kWordBits] |= m;
    else
      w_[i / kWordBits] &= ~m;
  }
  void reset(std::size_t i) { set(i, false); }

  bool any() const {
    for (Word x : w_)
      if (x) return true;
    return false;
  }
  bool none() const { return !any(); }
  bool all() const { return count() == n_; }

  std::size_t count() const {
    std::size_t c = 0;
    for (Word x : w_) c += static_cast<std::size_t>(std::popcount(x));
    return c;
  }

  /// Low 64 bits; only meaningful for small carriers.
  std::uint64_t to_mask() const { return w_.empty() ? 0 : w_[0]; }

  StateSet& operator&=(const StateSet& o) {
    same_size(o);
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }
  StateSet& operator|=(const StateSet& o) {
    same_size(o);
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }
  StateSet& operator^=(const StateSet& o) {
    same_size(o);
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
    return *this;
  }
  StateSet& subtract(const StateSet& o) {
    same_size(o);
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
    return *this;
  }

  friend StateSet operator&(StateSet a, const StateSet& b) { return a &= b; }
  friend StateSet operator|(StateSet a, const StateSet& b) { return a |= b; }
  friend StateSet operator^(StateSet a, const StateSet& b) { return a ^= b; }

  StateSet complement() const {
    StateSet r(*this);
    for (auto& x : r.w_) x = ~x;
    r.trim();
    return r;
  }

  bool is_subset_of(const StateSet& o) const {
    same_size(o);
    return detail::words_subset(w_, o.w_);
  }
  bool intersects(const StateSet& o) const {
    same_size(o);
    return detail::words_intersect(w_, o.w_);
  }

  template <class F>
  void for_each(F&& f) const {
    detail::for_each_bit(w_, std::forward<F>(f));
  }

  std::vector<std::size_t> to_vector() const {
    std::vector<std::size_t> out;
    for_each([&](std::size_t i) { out.push_back(i); });
    return out;
  }

  std::size_t hash() const { return detail::words_hash(w_) ^ n_; }

  friend bool operator==(const StateSet& a, const StateSet& b) { return a.n_ == b.n_ && a.w_ == b.w_; }

  /// Numeric order of the characteristic bit vector (highest state most significant).
  friend std::strong_ordering operator<=>(const StateSet& a, const StateSet& b) {
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    for (std::size_t i = a.w_.size(); i-- > 0;)
      if (auto c = a.w_[i] <=> b.w_[i]; c != 0) return c;
    return std::strong_ordering::equal;
  }

  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for_each([&](std::size_t i) {
      if (!first) s += ",";
      s += std::to_string(i);
      first = false;
    });
    return s + "}";
  }

 private:
  void trim() {
    if (n_ % kWordBits && !w_.empty()) w_.back() &= (Word{1} << (n_ % kWordBits)) - 1;
  }
  void same_size(const StateSet& o) const {
    if (o.n_ != n_) throw std::invalid_argument("StateSet size mismatch");
  }
  void check_index(std::size_t i) const {
    if (i >= n_) throw std::out_of_range("state index " + std::to_string(i) + " out of range");
  }

  std::size_t n_ = 0;
  std::vector<Word> w_;
};

struct StateSetHash {
  std::size_t operator()(const StateSet& s) const { return s.hash(); }
};

}  // namespace ieml
