#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace bfree {

// Fixed-length bit array packed into 64-bit words, bit i in word i/64 at
// position i%64. Bits past size() are kept zero.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size, bool value = false)
      : size_(size), words_((size + 63) / 64, value ? ~std::uint64_t{0} : 0) {
    trim();
  }

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  void assign(std::size_t i, bool v) { v ? set(i) : reset(i); }

  std::size_t count() const {
    std::size_t c = 0;
    for (std::uint64_t w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  // 64 bits starting at bit `start`; bits beyond size() read as zero.
  std::uint64_t window64(std::size_t start) const {
    const std::size_t w = start >> 6;
    const unsigned off = start & 63;
    std::uint64_t lo = w < words_.size() ? words_[w] : 0;
    if (off == 0) return lo;
    std::uint64_t hi = w + 1 < words_.size() ? words_[w + 1] : 0;
    return (lo >> off) | (hi << (64 - off));
  }

  void append(const BitVector& other) {
    const std::size_t base = size_;
    resize(size_ + other.size_);
    for (std::size_t i = 0; i < other.size_; ++i) {
      if (other.test(i)) set(base + i);
    }
  }

  void resize(std::size_t size) {
    size_ = size;
    words_.resize((size + 63) / 64, 0);
    trim();
  }

  std::vector<std::uint64_t>& words() { return words_; }
  const std::vector<std::uint64_t>& words() const { return words_; }

  // Bytes in order, bit i of the vector at bit (i % 8) of byte i / 8.
  std::string to_hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    const std::size_t bytes = (size_ + 7) / 8;
    out.reserve(bytes * 2);
    for (std::size_t b = 0; b < bytes; ++b) {
      const auto v = static_cast<unsigned>((words_[b / 8] >> ((b % 8) * 8)) & 0xff);
      out.push_back(kDigits[v >> 4]);
      out.push_back(kDigits[v & 15]);
    }
    return out;
  }

  friend bool operator==(const BitVector& a, const BitVector& b) {
    return a.size_ == b.size_ && a.words_ == b.words_;
  }

 private:
  void trim() {
    if (size_ % 64 != 0 && !words_.empty()) {
      words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
    }
  }

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace bfree
