#include "bfree/sieve.hpp"

#include <bit>
#include <span>

#include "bfree/error.hpp"
#include "bfree/parallel.hpp"

namespace bfree {

namespace {

constexpr std::size_t kBlockBits = std::size_t{1} << 18;

void check_range(std::uint64_t lo, std::uint64_t hi) {
  if (lo < 1 || hi <= lo) {
    throw Error(ErrorCode::kRangeEmpty,
                "need 1 <= lo < hi, got [" + std::to_string(lo) + ", " +
                    std::to_string(hi) + ")");
  }
  if (hi > kMaxSieveBound) {
    throw Error(ErrorCode::kOverflow, "hi exceeds 2^62");
  }
}

std::uint64_t first_multiple_at_least(std::uint64_t n, std::uint64_t b) {
  return (n + b - 1) / b * b;
}

// Clears eta for every multiple of a modulus inside block [start, end) of the
// segment. Blocks start at multiples of 64 so workers never share a word.
void mark_block(BitVector& eta, std::uint64_t lo, std::size_t start, std::size_t end,
                std::span<const std::uint64_t> moduli) {
  const std::uint64_t first = lo + start;
  const std::uint64_t last = lo + end;  // exclusive
  for (std::uint64_t b : moduli) {
    if (b >= last) break;
    for (std::uint64_t m = first_multiple_at_least(first, b); m < last; m += b) {
      eta.reset(static_cast<std::size_t>(m - lo));
    }
  }
}

void count_block(std::vector<std::uint8_t>& delta, std::uint64_t lo, std::size_t start,
                 std::size_t end, std::span<const std::uint64_t> roots) {
  const std::uint64_t first = lo + start;
  const std::uint64_t last = lo + end;
  for (std::uint64_t a : roots) {
    if (a >= last) break;
    for (std::uint64_t m = first_multiple_at_least(first, a); m < last; m += a) {
      auto& d = delta[static_cast<std::size_t>(m - lo)];
      if (d == 255) {
        throw Error(ErrorCode::kOverflow,
                    "delta saturated at n = " + std::to_string(m));
      }
      ++d;
    }
  }
}

SieveSegment sieve_eta_impl(std::span<const std::uint64_t> moduli, std::uint64_t lo,
                            std::uint64_t hi, unsigned threads) {
  SieveSegment seg;
  seg.lo = lo;
  seg.hi = hi;
  seg.eta = BitVector(static_cast<std::size_t>(hi - lo), true);
  const std::size_t n = seg.size();
  const std::size_t blocks = (n + kBlockBits - 1) / kBlockBits;
  parallel_tasks(blocks, threads, [&](std::size_t blk) {
    const std::size_t start = blk * kBlockBits;
    const std::size_t end = std::min(n, start + kBlockBits);
    mark_block(seg.eta, lo, start, end, moduli);
  });
  return seg;
}

}  // namespace

SieveSegment sieve_eta(const BFamily& family, std::uint64_t lo, std::uint64_t hi,
                       unsigned threads) {
  check_range(lo, hi);
  const auto moduli = family.moduli_up_to(hi - 1);
  return sieve_eta_impl(moduli, lo, hi, threads);
}

SieveSegment sieve_mu(const BFamily& family, std::uint64_t lo, std::uint64_t hi,
                      unsigned threads) {
  if (!family.is_rooted()) {
    throw Error(ErrorCode::kNotRootedFamily, "sieve_mu needs a rooted family");
  }
  check_range(lo, hi);
  const auto roots = family.roots_up_to(hi - 1);
  std::vector<std::uint64_t> moduli;
  for (std::uint64_t a : roots) {
    if (a > UINT32_MAX || a * a >= hi) break;
    moduli.push_back(a * a);
  }
  SieveSegment seg = sieve_eta_impl(moduli, lo, hi, threads);
  const std::size_t n = seg.size();
  seg.delta.assign(n, 0);
  seg.pi.assign(n, 1);
  seg.mu.assign(n, 0);
  const std::size_t blocks = (n + kBlockBits - 1) / kBlockBits;
  parallel_tasks(blocks, threads, [&](std::size_t blk) {
    const std::size_t start = blk * kBlockBits;
    const std::size_t end = std::min(n, start + kBlockBits);
    count_block(seg.delta, lo, start, end, roots);
    for (std::size_t i = start; i < end; ++i) {
      seg.pi[i] = (seg.delta[i] & 1) ? -1 : 1;
      seg.mu[i] = seg.eta.test(i) ? seg.pi[i] : 0;
    }
  });
  return seg;
}

std::uint64_t twin_count(const BFamily& family, std::uint64_t N, std::uint64_t gap,
                         unsigned threads) {
  if (N < 1 || gap < 1) throw Error(ErrorCode::kInvalidArgument, "need N >= 1 and gap >= 1");
  if (N > kMaxSieveBound - gap - 1) throw Error(ErrorCode::kOverflow, "N + gap too large");
  const SieveSegment seg = sieve_eta(family, 1, N + gap + 1, threads);
  const auto& words = seg.eta.words();
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < N; i += 64) {
    std::uint64_t both = words[i / 64] & seg.eta.window64(i + gap);
    if (N - i < 64) both &= (std::uint64_t{1} << (N - i)) - 1;
    count += static_cast<std::uint64_t>(std::popcount(both));
  }
  return count;
}

}  // namespace bfree
