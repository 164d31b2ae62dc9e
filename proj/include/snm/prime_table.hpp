#ifndef SNM_PRIME_TABLE_HPP
#define SNM_PRIME_TABLE_HPP

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <new>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "snm/errors.hpp"
#include "snm/parallel.hpp"

namespace snm {

/// Exact primality up to `limit`, stored as a bitset over the odd numbers
/// (bit i stands for 2i + 1). Immutable once built; all queries are const.
///
/// Binary dump layout (little-endian):
///   bytes 0..5   magic "SNMPT\0"
///   bytes 6..7   format version (u16, currently 1)
///   bytes 8..15  limit (u64)
///   then the bitset as consecutive u64 words.
class PrimeTable {
 public:
  static constexpr std::size_t kDefaultSegment = std::size_t{1} << 22;
  static constexpr std::uint64_t kMaxLimit = std::uint64_t{1} << 40;
  static constexpr std::uint16_t kFormatVersion = 1;
  static constexpr std::array<char, 6> kMagic{'S', 'N', 'M', 'P', 'T', '\0'};

  /// Segmented sieve of Eratosthenes. `segment_size` counts integers per
  /// segment and is rounded up to a multiple of 128.
  explicit PrimeTable(std::uint64_t limit, std::size_t segment_size = kDefaultSegment)
      : limit_(limit) {
    if (limit < 2) throw DomainError("sieve: limit must be >= 2");
    if (limit > kMaxLimit) throw DomainError("sieve: limit exceeds 2^40");
    if (segment_size == 0) throw DomainError("sieve: segment size must be positive");
    try {
      words_.assign(word_count(limit), 0);
    } catch (const std::bad_alloc&) {
      throw ResourceError("sieve: cannot allocate bitset for limit " + std::to_string(limit));
    }
    run_sieve(segment_size);
  }

  std::uint64_t limit() const noexcept { return limit_; }

  bool is_prime(std::uint64_t m) const {
    check_range(m);
    if (m < 2) return false;
    if (m == 2) return true;
    if ((m & 1u) == 0) return false;
    return test_bit((m - 1) / 2);
  }

  /// pi(x): number of primes <= x.
  std::uint64_t count(std::uint64_t x) const {
    check_range(x);
    if (x < 2) return 0;
    const std::uint64_t last = (x - 1) / 2;
    std::uint64_t total = 1;  // the prime 2
    const std::uint64_t full = last / 64;
    for (std::uint64_t w = 0; w < full; ++w) total += std::popcount(words_[w]);
    const unsigned rem = static_cast<unsigned>(last % 64) + 1;
    const std::uint64_t mask = rem == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << rem) - 1);
    total += std::popcount(words_[full] & mask);
    return total;
  }

  /// Calls fn(p) for every prime p in [lo, hi], increasing.
  template <class Fn>
  void for_each_prime(std::uint64_t lo, std::uint64_t hi, Fn&& fn) const {
    hi = std::min(hi, limit_);
    if (hi < 2 || lo > hi) return;
    if (lo <= 2) fn(std::uint64_t{2});
    const std::uint64_t first_odd = std::max<std::uint64_t>(lo, 3) | 1u;
    if (first_odd > hi) return;
    const std::uint64_t i0 = (first_odd - 1) / 2;
    const std::uint64_t i1 = (hi - 1) / 2;
    for (std::uint64_t w = i0 / 64; w <= i1 / 64; ++w) {
      std::uint64_t bits = words_[w];
      if (w == i0 / 64) bits &= ~std::uint64_t{0} << (i0 % 64);
      if (w == i1 / 64 && i1 % 64 != 63) bits &= (std::uint64_t{1} << (i1 % 64 + 1)) - 1;
      while (bits) {
        const int b = std::countr_zero(bits);
        fn(2 * (w * 64 + static_cast<std::uint64_t>(b)) + 1);
        bits &= bits - 1;
      }
    }
  }

  /// Proper prime powers p^k <= x with k >= 2, as (p^k, p), sorted by p^k.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> proper_prime_powers(std::uint64_t x) const {
    x = std::min(x, limit_);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(x)));
    while (root * root > x) --root;
    while ((root + 1) * (root + 1) <= x) ++root;
    for_each_prime(2, root, [&](std::uint64_t p) {
      for (std::uint64_t q = p * p;; q *= p) {
        out.emplace_back(q, p);
        if (q > x / p) break;
      }
    });
    std::sort(out.begin(), out.end());
    while (!out.empty() && out.back().first > x) out.pop_back();
    return out;
  }

  /// Calls fn(m, p) for every prime power m = p^k in [lo, hi], increasing in m.
  template <class Fn>
  void for_each_prime_power(std::uint64_t lo, std::uint64_t hi, Fn&& fn) const {
    hi = std::min(hi, limit_);
    if (hi < 2 || lo > hi) return;
    const auto powers = proper_prime_powers(hi);
    auto it = std::lower_bound(powers.begin(), powers.end(), std::make_pair(lo, std::uint64_t{0}));
    for_each_prime(lo, hi, [&](std::uint64_t p) {
      while (it != powers.end() && it->first < p) {
        fn(it->first, it->second);
        ++it;
      }
      fn(p, p);
    });
    for (; it != powers.end() && it->first <= hi; ++it) fn(it->first, it->second);
  }

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  std::string to_bytes() const {
    std::string out;
    out.reserve(16 + words_.size() * 8);
    out.append(kMagic.data(), kMagic.size());
    put_le(out, kFormatVersion, 2);
    put_le(out, limit_, 8);
    for (std::uint64_t w : words_) put_le(out, w, 8);
    return out;
  }

  static PrimeTable from_bytes(std::string_view bytes) {
    if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
      throw IoError("prime table dump: bad magic");
    }
    const auto version = static_cast<std::uint16_t>(get_le(bytes.substr(6), 2));
    if (version != kFormatVersion) {
      throw IoError("prime table dump: unsupported version " + std::to_string(version));
    }
    const std::uint64_t limit = get_le(bytes.substr(8), 8);
    if (limit < 2 || limit > kMaxLimit) throw IoError("prime table dump: bad limit");
    const std::size_t n = word_count(limit);
    if (bytes.size() != 16 + n * 8) throw IoError("prime table dump: truncated payload");
    std::vector<std::uint64_t> words(n);
    for (std::size_t i = 0; i < n; ++i) words[i] = get_le(bytes.substr(16 + 8 * i), 8);
    return PrimeTable(limit, std::move(words));
  }

  void save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    const std::string bytes = to_bytes();
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("cannot write prime table to " + path.string());
  }

  static PrimeTable load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open prime table " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_bytes(bytes);
  }

  friend bool operator==(const PrimeTable& a, const PrimeTable& b) {
    return a.limit_ == b.limit_ && a.words_ == b.words_;
  }

 private:
  PrimeTable(std::uint64_t limit, std::vector<std::uint64_t> words)
      : limit_(limit), words_(std::move(words)) {}

  static std::size_t word_count(std::uint64_t limit) {
    const std::uint64_t bits = (limit - 1) / 2 + 1;
    return static_cast<std::size_t>((bits + 63) / 64);
  }

  void check_range(std::uint64_t m) const {
    if (m > limit_) {
      throw PreconditionError("prime table limit " + std::to_string(limit_) + " is below " +
                              std::to_string(m));
    }
  }

  bool test_bit(std::uint64_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }

  void run_sieve(std::size_t segment_size) {
    std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit_)));
    while (root * root > limit_) --root;
    while ((root + 1) * (root + 1) <= limit_) ++root;

    std::vector<std::uint32_t> base;
    {
      std::vector<char> composite(root + 1, 0);
      for (std::uint64_t p = 3; p <= root; p += 2) {
        if (composite[p]) continue;
        base.push_back(static_cast<std::uint32_t>(p));
        for (std::uint64_t q = p * p; q <= root; q += 2 * p) composite[q] = 1;
      }
    }

    const std::uint64_t total_bits = (limit_ - 1) / 2 + 1;
    const std::uint64_t seg_bits = std::max<std::uint64_t>(64, (segment_size / 2 + 63) / 64 * 64);
    const std::size_t segments = static_cast<std::size_t>((total_bits + seg_bits - 1) / seg_bits);

    parallel_for(segments, [&](std::size_t s) {
      const std::uint64_t i_begin = s * seg_bits;
      const std::uint64_t i_end = std::min(total_bits, i_begin + seg_bits);
      const std::uint64_t w_begin = i_begin / 64;
      const std::uint64_t w_end = (i_end + 63) / 64;
      for (std::uint64_t w = w_begin; w < w_end; ++w) words_[w] = ~std::uint64_t{0};
      const std::uint64_t n_lo = 2 * i_begin + 1;
      const std::uint64_t n_hi = 2 * (i_end - 1) + 1;
      for (std::uint32_t p32 : base) {
        const std::uint64_t p = p32;
        if (p * p > n_hi) break;
        std::uint64_t start = std::max(p * p, (n_lo + p - 1) / p * p);
        if ((start & 1u) == 0) start += p;
        for (std::uint64_t i = (start - 1) / 2; i < i_end; i += p) {
          words_[i / 64] &= ~(std::uint64_t{1} << (i % 64));
        }
      }
      if (s == 0) words_[0] &= ~std::uint64_t{1};  // 1 is not prime
      if (s + 1 == segments && i_end % 64 != 0) {
        words_[w_end - 1] &= (std::uint64_t{1} << (i_end % 64)) - 1;
      }
    });
  }

  static void put_le(std::string& out, std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
  }

  static std::uint64_t get_le(std::string_view in, int bytes) {
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[static_cast<std::size_t>(i)]))
           << (8 * i);
    }
    return v;
  }

  std::uint64_t limit_;
  std::vector<std::uint64_t> words_;
};

inline PrimeTable sieve(std::uint64_t limit,
                        std::size_t segment_size = PrimeTable::kDefaultSegment) {
  return PrimeTable(limit, segment_size);
}

}  // namespace snm

#endif  // SNM_PRIME_TABLE_HPP
