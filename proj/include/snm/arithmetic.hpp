#ifndef SNM_ARITHMETIC_HPP
#define SNM_ARITHMETIC_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "snm/compensated_sum.hpp"
#include "snm/errors.hpp"
#include "snm/parallel.hpp"
#include "snm/prime_table.hpp"

namespace snm {

/// Integers per reduction block. Fixed so that the summation tree does not
/// depend on how many workers run it.
inline constexpr std::uint64_t kSumBlock = std::uint64_t{1} << 22;

namespace detail {

inline std::uint64_t checked_floor(double x, const PrimeTable& table, const char* what) {
  if (!(x >= 0.0)) throw DomainError(std::string(what) + ": argument must be non-negative");
  const double f = std::floor(x);
  if (f > static_cast<double>(table.limit())) {
    throw PreconditionError(std::string(what) + ": prime table limit " +
                            std::to_string(table.limit()) + " is below x = " + std::to_string(x));
  }
  return static_cast<std::uint64_t>(f);
}

}  // namespace detail

/// Sum of term(m, p, log p) over prime powers m = p^k <= x. Terms are added
/// in increasing m inside fixed blocks of kSumBlock integers with compensated
/// accumulation; block sums are then merged in block order.
template <class Term>
double sum_prime_powers(const PrimeTable& table, double x, Term&& term) {
  const std::uint64_t top = detail::checked_floor(x, table, "prime power sum");
  if (top < 2) return 0.0;
  const auto powers = table.proper_prime_powers(top);
  const std::size_t blocks = static_cast<std::size_t>(top / kSumBlock + 1);
  std::vector<CompensatedSum> partial(blocks);
  parallel_for(blocks, [&](std::size_t b) {
    const std::uint64_t lo = b * kSumBlock;
    const std::uint64_t hi = std::min(top, lo + kSumBlock - 1);
    auto it = std::lower_bound(powers.begin(), powers.end(), std::make_pair(lo, std::uint64_t{0}));
    CompensatedSum acc;
    table.for_each_prime(lo, hi, [&](std::uint64_t p) {
      while (it != powers.end() && it->first < p) {
        acc.add(term(it->first, it->second, std::log(static_cast<double>(it->second))));
        ++it;
      }
      acc.add(term(p, p, std::log(static_cast<double>(p))));
    });
    for (; it != powers.end() && it->first <= hi; ++it) {
      acc.add(term(it->first, it->second, std::log(static_cast<double>(it->second))));
    }
    partial[b] = acc;
  });
  CompensatedSum total;
  for (const auto& s : partial) total.merge(s);
  return total.value();
}

/// Sum of term(p, log p) over primes p <= x; same reduction order contract.
template <class Term>
double sum_primes(const PrimeTable& table, double x, Term&& term) {
  const std::uint64_t top = detail::checked_floor(x, table, "prime sum");
  if (top < 2) return 0.0;
  const std::size_t blocks = static_cast<std::size_t>(top / kSumBlock + 1);
  std::vector<CompensatedSum> partial(blocks);
  parallel_for(blocks, [&](std::size_t b) {
    const std::uint64_t lo = b * kSumBlock;
    const std::uint64_t hi = std::min(top, lo + kSumBlock - 1);
    CompensatedSum acc;
    table.for_each_prime(lo, hi,
                         [&](std::uint64_t p) { acc.add(term(p, std::log(static_cast<double>(p)))); });
    partial[b] = acc;
  });
  CompensatedSum total;
  for (const auto& s : partial) total.merge(s);
  return total.value();
}

/// M(x) = sum_{m <= x} Lambda(m)^2.
inline double big_m(double x, const PrimeTable& table) {
  return sum_prime_powers(table, x, [](std::uint64_t, std::uint64_t, double lp) { return lp * lp; });
}

/// N(x) = sum_{p <= x} (log p)^2.
inline double big_n(double x, const PrimeTable& table) {
  return sum_primes(table, x, [](std::uint64_t, double lp) { return lp * lp; });
}

/// P(y) = sum_{p <= y} (log p)^2 / p.
inline double p_sum(double y, const PrimeTable& table) {
  return sum_primes(table, y, [](std::uint64_t p, double lp) { return lp * lp / static_cast<double>(p); });
}

/// theta(x) = sum_{p <= x} log p.
inline double chebyshev_theta(double x, const PrimeTable& table) {
  return sum_primes(table, x, [](std::uint64_t, double lp) { return lp; });
}

/// c0 = N(600) - theta(600) log 600 + 600, the constant in the explicit
/// estimate for N(x).
inline double c0_constant(const PrimeTable& table) {
  return big_n(600.0, table) - chebyshev_theta(600.0, table) * std::log(600.0) + 600.0;
}

/// Explicit RH band for M(x) valid for x >= 1e5:
/// x log x - x - 0.047 sqrt(x) log^3 x <= M(x) <= x log x - x + 0.057 sqrt(x) log^3 x.
struct MBand {
  double lower;
  double upper;
};

inline MBand m_band(double x) {
  const double l = std::log(x);
  const double main = x * l - x;
  const double scale = std::sqrt(x) * l * l * l;
  return {main - 0.047 * scale, main + 0.057 * scale};
}

}  // namespace snm

#endif  // SNM_ARITHMETIC_HPP
