// Shared fixtures: zero lists and prime tables cached under the build tree.
#ifndef SNM_TESTS_SUPPORT_HPP
#define SNM_TESTS_SUPPORT_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "snm/cache.hpp"
#include "snm/prime_table.hpp"
#include "snm/zeros.hpp"
#include "snm/zeta.hpp"

namespace snm::testing {

inline const Cache& test_cache() {
  static const Cache c(SNM_TEST_CACHE_DIR);
  return c;
}

inline ZeroList cached_zeros(double t_max) {
  const std::string key = "test-zeros:tmax=" + format_double(t_max);
  return parse_zeros(test_cache().get_or_make(key, [&] { return format_zeros(find_zeros(0.0, t_max)); }));
}

inline PrimeTable cached_table(std::uint64_t limit) {
  const std::string key = "test-sieve:limit=" + std::to_string(limit);
  return PrimeTable::from_bytes(test_cache().get_or_make(key, [&] { return sieve(limit).to_bytes(); }));
}

/// Plain sieve of Eratosthenes on a vector<bool>.
inline std::vector<bool> naive_sieve(std::uint64_t limit) {
  std::vector<bool> p(limit + 1, true);
  p[0] = false;
  if (limit >= 1) p[1] = false;
  for (std::uint64_t i = 2; i * i <= limit; ++i) {
    if (p[i]) {
      for (std::uint64_t j = i * i; j <= limit; j += i) p[j] = false;
    }
  }
  return p;
}

/// Lambda(m) by trial division.
inline double von_mangoldt(std::uint64_t m) {
  if (m < 2) return 0.0;
  std::uint64_t p = 0;
  for (std::uint64_t d = 2; d * d <= m; ++d) {
    if (m % d == 0) {
      p = d;
      break;
    }
  }
  if (p == 0) return std::log(static_cast<double>(m));
  while (m % p == 0) m /= p;
  return m == 1 ? std::log(static_cast<double>(p)) : 0.0;
}

/// Dirichlet eta function by the alternating series, accelerated with the
/// Cohen-Rodriguez Villegas-Zagier weights. Valid for moderate |Im s|.
inline std::complex<double> eta(std::complex<double> s, int terms = 60) {
  double d = std::pow(3.0 + std::sqrt(8.0), terms);
  d = 0.5 * (d + 1.0 / d);
  double b = -1.0;
  double c = -d;
  std::complex<double> acc = 0.0;
  for (int k = 0; k < terms; ++k) {
    c = b - c;
    acc += c * std::pow(static_cast<double>(k + 1), -s);
    b = (k + terms) * (k - terms) * b / ((k + 0.5) * (k + 1.0));
  }
  return acc / d;
}

/// zeta(s) = eta(s) / (1 - 2^{1-s}).
inline std::complex<double> eta_zeta(std::complex<double> s, int terms = 60) {
  return eta(s, terms) / (1.0 - std::pow(2.0, 1.0 - s));
}

/// log|zeta(1 + u)| for real u != 0, accurate as u -> 0.
inline double log_abs_zeta_near_one(double u, int terms = 40) {
  const double e = eta({1.0 + u, 0.0}, terms).real();
  return std::log(std::abs(e)) - std::log(std::abs(std::expm1(-u * std::log(2.0))));
}

/// Ordinates from sign changes of Z on a fixed 0.005 grid, bisected to 1e-12.
inline std::vector<double> sign_scan(double a, double b) {
  std::vector<double> out;
  const double h = 0.005;
  double l = a;
  double zl = snm::hardy_z(l);
  for (double r = a + h; r <= b; r += h) {
    const double zr = snm::hardy_z(r);
    if ((zl < 0) != (zr < 0)) {
      double lo = l, hi = r, flo = zl;
      while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double fm = snm::hardy_z(mid);
        if ((fm < 0) == (flo < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      out.push_back(0.5 * (lo + hi));
    }
    l = r;
    zl = zr;
  }
  return out;
}

}  // namespace snm::testing

#endif  // SNM_TESTS_SUPPORT_HPP
