#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gcbm/errors.hpp"
#include "gcbm/rng.hpp"

namespace gcbm {

/// Packed binary label vector: one bit per node, 64 nodes per word.
/// XOR, complement and Hamming distance run over words, O(n/64).
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  static BitVector zeros(std::size_t n) { return BitVector(n); }

  static BitVector ones(std::size_t n) {
    BitVector v(n);
    for (auto& w : v.words_) w = ~0ULL;
    v.clear_tail();
    return v;
  }

  static BitVector from_string(std::string_view bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i] == '1') {
        v.set(i, true);
      } else if (bits[i] != '0') {
        throw DomainError("BitVector::from_string: character is not 0/1");
      }
    }
    return v;
  }

  /// Uniform over {0,1}^n.
  static BitVector random(Rng& rng, std::size_t n) {
    BitVector v(n);
    for (auto& w : v.words_) w = rng.next_u64();
    v.clear_tail();
    return v;
  }

  /// Exactly floor(n/2) ones at uniformly random positions.
  static BitVector random_balanced(Rng& rng, std::size_t n) {
    std::vector<std::uint32_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = n; i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
      std::swap(perm[i - 1], perm[j]);
    }
    BitVector v(n);
    for (std::size_t i = 0; i < n / 2; ++i) v.set(perm[i], true);
    return v;
  }

  std::size_t size() const { return n_; }
  bool empty() const { return n_ == 0; }

  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

  void set(std::size_t i, bool value) {
    const std::uint64_t bit = 1ULL << (i & 63);
    if (value) {
      words_[i >> 6] |= bit;
    } else {
      words_[i >> 6] &= ~bit;
    }
  }

  void flip(std::size_t i) { words_[i >> 6] ^= 1ULL << (i & 63); }

  void complement_in_place() {
    for (auto& w : words_) w = ~w;
    clear_tail();
  }

  BitVector complemented() const {
    BitVector v = *this;
    v.complement_in_place();
    return v;
  }

  void xor_in_place(const BitVector& other) {
    if (other.n_ != n_) throw DomainError("BitVector xor: length mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  }

  std::size_t count_ones() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  std::size_t hamming_distance(const BitVector& other) const {
    if (other.n_ != n_) throw DomainError("BitVector distance: length mismatch");
    std::size_t c = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      c += static_cast<std::size_t>(std::popcount(words_[i] ^ other.words_[i]));
    }
    return c;
  }

  bool operator==(const BitVector& other) const = default;

  bool is_complement_of(const BitVector& other) const {
    return n_ == other.n_ && hamming_distance(other) == n_;
  }

  /// Lexicographic order on the label sequence, index 0 most significant.
  bool lex_less(const BitVector& other) const {
    if (other.n_ != n_) throw DomainError("BitVector lex_less: length mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i) {
      const std::uint64_t diff = words_[i] ^ other.words_[i];
      if (diff != 0) {
        const int bit = std::countr_zero(diff);
        return ((words_[i] >> bit) & 1) == 0;
      }
    }
    return false;
  }

  std::string to_string() const {
    std::string s(n_, '0');
    for (std::size_t i = 0; i < n_; ++i) {
      if (get(i)) s[i] = '1';
    }
    return s;
  }

  std::span<const std::uint64_t> words() const { return words_; }

 private:
  void clear_tail() {
    const std::size_t tail = n_ & 63;
    if (tail != 0 && !words_.empty()) words_.back() &= (1ULL << tail) - 1;
  }

  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

inline BitVector xor_of(const BitVector& a, const BitVector& b) {
  BitVector r = a;
  r.xor_in_place(b);
  return r;
}

}  // namespace gcbm
