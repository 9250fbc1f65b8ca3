#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace heiscut {

// Fixed-length bit vector used for cuts over point sets and voxel grids.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t n, bool value = false)
      : n_(n), words_((n + 63) / 64, value ? ~0ULL : 0ULL) {
    trim();
  }

  std::size_t size() const { return n_; }

  bool get(std::size_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1ULL;
  }
  void set(std::size_t i, bool v) {
    std::uint64_t mask = 1ULL << (i & 63);
    if (v)
      words_[i >> 6] |= mask;
    else
      words_[i >> 6] &= ~mask;
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (std::uint64_t w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  BitVec complement() const {
    BitVec out = *this;
    for (auto& w : out.words_) w = ~w;
    out.trim();
    return out;
  }

  bool operator==(const BitVec& o) const {
    return n_ == o.n_ && words_ == o.words_;
  }
  bool operator!=(const BitVec& o) const { return !(*this == o); }

  // total order used for canonical forms and deterministic containers
  bool operator<(const BitVec& o) const {
    if (n_ != o.n_) return n_ < o.n_;
    return words_ < o.words_;
  }

  const std::vector<std::uint64_t>& words() const { return words_; }

  std::size_t hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ n_;
    for (std::uint64_t w : words_) {
      h ^= w;
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
  }

 private:
  void trim() {
    if (n_ & 63) words_.back() &= (~0ULL) >> (64 - (n_ & 63));
  }

  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace heiscut
