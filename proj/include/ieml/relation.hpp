#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ieml/bitset.hpp"

namespace ieml {

/// Binary relation on {0..n-1}, stored as one bit row per source state.
class Rel {
 public:
  Rel() = default;
  explicit Rel(std::size_t n) : n_(n), wpr_(words_for(n)), bits_(n * words_for(n), 0) {}

  static Rel identity(std::size_t n) {
    Rel r(n);
    for (std::size_t i = 0; i < n; ++i) r.add(i, i);
    return r;
  }

  static Rel full(std::size_t n) {
    Rel r(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) r.add(i, j);
    return r;
  }

  static Rel from_pairs(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    Rel r(n);
    for (auto [s, t] : pairs) r.add(s, t);
    return r;
  }

  /// Pair (i, j) is present iff bit i*n + j of `mask` is set; n*n must be at most 64.
  static Rel from_mask(std::size_t n, std::uint64_t mask) {
    Rel r(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if ((mask >> (i * n + j)) & 1U) r.add(i, j);
    return r;
  }

  std::size_t size() const { return n_; }

  bool contains(std::size_t s, std::size_t t) const {
    return (bits_[s * wpr_ + t / kWordBits] >> (t % kWordBits)) & 1U;
  }

  void add(std::size_t s, std::size_t t) {
    check(s, t);
    bits_[s * wpr_ + t / kWordBits] |= Word{1} << (t % kWordBits);
  }

  void remove(std::size_t s, std::size_t t) {
    check(s, t);
    bits_[s * wpr_ + t / kWordBits] &= ~(Word{1} << (t % kWordBits));
  }

  std::span<const Word> row_words(std::size_t s) const { return {bits_.data() + s * wpr_, wpr_}; }
  std::span<Word> row_words(std::size_t s) { return {bits_.data() + s * wpr_, wpr_}; }

  StateSet row(std::size_t s) const {
    StateSet out(n_);
    auto src = row_words(s);
    std::copy(src.begin(), src.end(), out.words().begin());
    return out;
  }

  void set_row(std::size_t s, const StateSet& x) {
    auto dst = row_words(s);
    std::copy(x.words().begin(), x.words().end(), dst.begin());
  }

  void or_row(std::size_t s, std::span<const Word> x) {
    auto dst = row_words(s);
    for (std::size_t i = 0; i < wpr_; ++i) dst[i] |= x[i];
  }

  template <class F>
  void for_each_successor(std::size_t s, F&& f) const {
    detail::for_each_bit(row_words(s), std::forward<F>(f));
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (Word x : bits_) c += static_cast<std::size_t>(std::popcount(x));
    return c;
  }

  /// Whether there are at least k pairs; stops counting once k is reached.
  bool count_at_least(std::size_t k) const {
    std::size_t c = 0;
    for (Word x : bits_) {
      if (c >= k) return true;
      c += static_cast<std::size_t>(std::popcount(x));
    }
    return c >= k;
  }

  bool empty() const { return count() == 0; }

  std::vector<std::pair<std::size_t, std::size_t>> pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t s = 0; s < n_; ++s) for_each_successor(s, [&](std::size_t t) { out.emplace_back(s, t); });
    return out;
  }

  Rel converse() const;

  Rel& operator&=(const Rel& o) {
    same(o);
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= o.bits_[i];
    return *this;
  }
  Rel& operator|=(const Rel& o) {
    same(o);
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= o.bits_[i];
    return *this;
  }
  friend Rel operator&(Rel a, const Rel& b) { return a &= b; }
  friend Rel operator|(Rel a, const Rel& b) { return a |= b; }

  bool is_subset_of(const Rel& o) const {
    same(o);
    return detail::words_subset(bits_, o.bits_);
  }

  bool is_reflexive() const {
    for (std::size_t i = 0; i < n_; ++i)
      if (!contains(i, i)) return false;
    return true;
  }

  bool is_symmetric() const;
  bool is_transitive() const;

  /// Bit i*n + j set iff (i, j) present; n*n must be at most 64.
  std::uint64_t to_mask() const {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        if (contains(i, j)) m |= std::uint64_t{1} << (i * n_ + j);
    return m;
  }

  std::size_t hash() const { return detail::words_hash(bits_) ^ n_; }

  friend bool operator==(const Rel& a, const Rel& b) { return a.n_ == b.n_ && a.bits_ == b.bits_; }

  friend std::strong_ordering operator<=>(const Rel& a, const Rel& b) {
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    return a.bits_ <=> b.bits_;
  }

 private:
  void check(std::size_t s, std::size_t t) const {
    if (s >= n_ || t >= n_) throw std::out_of_range("relation index out of range");
  }
  void same(const Rel& o) const {
    if (o.n_ != n_) throw std::invalid_argument("relation carrier mismatch");
  }

  std::size_t n_ = 0;
  std::size_t wpr_ = 0;
  std::vector<Word> bits_;
};

/// Partition of a relation's rows into classes of identical rows.
class RowClasses {
 public:
  explicit RowClasses(const Rel& r) : class_of_(r.size()) {
    std::unordered_map<std::size_t, std::vector<std::size_t>> buckets;
    for (std::size_t s = 0; s < r.size(); ++s) {
      auto w = r.row_words(s);
      auto h = detail::words_hash(w);
      auto& bucket = buckets[h];
      std::size_t found = SIZE_MAX;
      for (auto c : bucket) {
        auto rep = r.row_words(reps_[c]);
        if (std::equal(w.begin(), w.end(), rep.begin())) {
          found = c;
          break;
        }
      }
      if (found == SIZE_MAX) {
        found = reps_.size();
        reps_.push_back(s);
        bucket.push_back(found);
      }
      class_of_[s] = found;
    }
  }

  std::size_t count() const { return reps_.size(); }
  std::size_t class_of(std::size_t s) const { return class_of_[s]; }
  std::size_t representative(std::size_t c) const { return reps_[c]; }

 private:
  std::vector<std::size_t> class_of_;
  std::vector<std::size_t> reps_;
};

/// Left-to-right composition: s (p;q) u iff some t has s p t and t q u. Row classes of
/// either side may be passed in when the caller already has them.
inline Rel compose(const Rel& p, const Rel& q, const RowClasses* pcls = nullptr, const RowClasses* qcls = nullptr) {
  if (p.size() != q.size()) throw std::invalid_argument("compose: carrier mismatch");
  const std::size_t n = p.size();
  Rel out(n);
  std::optional<RowClasses> own_p, own_q;
  const RowClasses& pc = pcls ? *pcls : own_p.emplace(p);
  const RowClasses& qc = qcls ? *qcls : own_q.emplace(q);
  std::vector<char> hit(qc.count());
  std::vector<StateSet> acc(pc.count(), StateSet(n));
  for (std::size_t c = 0; c < pc.count(); ++c) {
    std::fill(hit.begin(), hit.end(), 0);
    p.for_each_successor(pc.representative(c), [&](std::size_t t) { hit[qc.class_of(t)] = 1; });
    auto dst = acc[c].words();
    for (std::size_t k = 0; k < hit.size(); ++k) {
      if (!hit[k]) continue;
      auto src = q.row_words(qc.representative(k));
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] |= src[i];
    }
  }
  for (std::size_t s = 0; s < n; ++s) out.set_row(s, acc[pc.class_of(s)]);
  return out;
}

inline Rel Rel::converse() const {
  Rel r(n_);
  RowClasses rc(*this);
  if (n_ && count_at_least(rc.count() * wpr_ * n_)) {
    // Few distinct rows: the converse row of t is the union of the classes whose row holds t.
    std::vector<StateSet> members(rc.count(), StateSet(n_));
    for (std::size_t s = 0; s < n_; ++s) members[rc.class_of(s)].set(s);
    for (std::size_t c = 0; c < rc.count(); ++c)
      for_each_successor(rc.representative(c), [&](std::size_t t) { r.or_row(t, members[c].words()); });
    return r;
  }
  for (std::size_t s = 0; s < n_; ++s) for_each_successor(s, [&](std::size_t t) { r.add(t, s); });
  return r;
}

inline bool Rel::is_symmetric() const {
  RowClasses rc(*this);
  if (rc.count() * wpr_ < n_) {
    // Every member of a class must lie in the row of each successor the class shares.
    std::vector<StateSet> members(rc.count(), StateSet(n_));
    for (std::size_t s = 0; s < n_; ++s) members[rc.class_of(s)].set(s);
    for (std::size_t c = 0; c < rc.count(); ++c) {
      bool ok = true;
      for_each_successor(rc.representative(c), [&](std::size_t t) {
        ok = ok && detail::words_subset(members[c].words(), row_words(t));
      });
      if (!ok) return false;
    }
    return true;
  }
  for (std::size_t s = 0; s < n_; ++s) {
    bool ok = true;
    for_each_successor(s, [&](std::size_t t) { ok = ok && contains(t, s); });
    if (!ok) return false;
  }
  return true;
}

inline bool Rel::is_transitive() const { return compose(*this, *this).is_subset_of(*this); }

inline Rel reflexive_transitive_closure(const Rel& r) {
  Rel c = r | Rel::identity(r.size());
  // Warshall over bit rows.
  for (std::size_t k = 0; k < c.size(); ++k) {
    auto rowk = c.row(k);
    for (std::size_t i = 0; i < c.size(); ++i)
      if (c.contains(i, k)) c.or_row(i, rowk.words());
  }
  return c;
}

/// {s : r(s) ⊆ x}
inline StateSet box_pre(const Rel& r, const StateSet& x) {
  StateSet out(r.size());
  for (std::size_t s = 0; s < r.size(); ++s)
    if (detail::words_subset(r.row_words(s), x.words())) out.set(s);
  return out;
}

/// {s : r(s) ∩ x ≠ ∅}
inline StateSet dia_pre(const Rel& r, const StateSet& x) {
  StateSet out(r.size());
  for (std::size_t s = 0; s < r.size(); ++s)
    if (detail::words_intersect(r.row_words(s), x.words())) out.set(s);
  return out;
}

/// Relation prepared for repeated pre-image queries. Uses row classes when rows repeat
/// and adjacency lists when the relation is sparse.
class IndexedRel {
 public:
  IndexedRel() = default;
  explicit IndexedRel(const Rel& r) : n_(r.size()) {
    RowClasses rc(r);
    sparse_ = !r.count_at_least(rc.count() * words_for(n_));
    if (!sparse_) {
      class_of_.resize(n_);
      for (std::size_t s = 0; s < n_; ++s) class_of_[s] = rc.class_of(s);
      reps_.reserve(rc.count());
      for (std::size_t c = 0; c < rc.count(); ++c) reps_.push_back(r.row(rc.representative(c)));
    } else {
      offsets_.reserve(n_ + 1);
      offsets_.push_back(0);
      for (std::size_t s = 0; s < n_; ++s) {
        r.for_each_successor(s, [&](std::size_t t) { targets_.push_back(static_cast<std::uint32_t>(t)); });
        offsets_.push_back(targets_.size());
      }
    }
  }

  std::size_t size() const { return n_; }

  StateSet box_pre(const StateSet& x) const { return pre(x, true); }
  StateSet dia_pre(const StateSet& x) const { return pre(x, false); }

 private:
  StateSet pre(const StateSet& x, bool universal) const {
    StateSet out(n_);
    if (sparse_) {
      for (std::size_t s = 0; s < n_; ++s) {
        bool ok = universal;
        for (std::size_t e = offsets_[s]; e < offsets_[s + 1]; ++e) {
          if (x.test(targets_[e]) != universal) {
            ok = !universal;
            break;
          }
        }
        if (ok) out.set(s);
      }
      return out;
    }
    std::vector<char> pass(reps_.size());
    for (std::size_t c = 0; c < reps_.size(); ++c)
      pass[c] = universal ? reps_[c].is_subset_of(x) : reps_[c].intersects(x);
    for (std::size_t s = 0; s < n_; ++s)
      if (pass[class_of_[s]]) out.set(s);
    return out;
  }

  std::size_t n_ = 0;
  std::vector<std::size_t> class_of_;
  std::vector<StateSet> reps_;
  bool sparse_ = false;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> targets_;
};

}  // namespace ieml
