#ifndef SNM_CONSTANTS_HPP
#define SNM_CONSTANTS_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <string>

#include "snm/arithmetic.hpp"
#include "snm/errors.hpp"
#include "snm/prime_table.hpp"
#include "snm/zeta.hpp"

namespace snm {

/// Closed interval with a note on where each endpoint came from.
struct Enclosure {
  double lo = 0.0;
  double hi = 0.0;
  std::string provenance;

  double midpoint() const noexcept { return 0.5 * (lo + hi); }
  double width() const noexcept { return hi - lo; }
  bool contains(double v) const noexcept { return lo <= v && v <= hi; }
  bool intersects(const Enclosure& o) const noexcept { return lo <= o.hi && o.lo <= hi; }
};

/// Relative slack folded into both endpoints of every C_n enclosure to cover
/// floating-point summation error.
inline constexpr double kSummationSlack = 1e-10;

/// Smallest x at which the explicit tail estimate applies.
inline constexpr double kTailMinX = 1e5;

/// Explicit bounds for V_n(x) = sum_{m > x} Lambda(m)^2 / (m (log m)^{2n+2}):
/// main - lower_err <= V_n(x) <= main + upper_err.
struct TailBound {
  int n = 1;
  double x = kTailMinX;
  double main = 0.0;
  double lower_err = 0.0;
  double upper_err = 0.0;
};

inline void check_order(int n) {
  if (n < 1 || n > 64) throw DomainError("C_n: n must be in [1, 64]");
}

inline TailBound tail_bound(int n, double x) {
  check_order(n);
  if (!(x >= kTailMinX)) throw PreconditionError("tail bound needs x >= 1e5");
  const double l = std::log(x);
  TailBound t;
  t.n = n;
  t.x = x;
  t.main = 1.0 / (2.0 * n * std::pow(l, 2 * n));
  const double scale = std::sqrt(x) * std::pow(l, 2 * n - 1);
  t.lower_err = (0.017 * n + 0.167) / scale;
  t.upper_err = (0.020 * n + 0.181) / scale;
  return t;
}

/// sum_{2 <= m <= x} Lambda(m)^2 / (m (log m)^{2n+2}), increasing m, compensated.
inline double cn_partial(int n, double x, const PrimeTable& table) {
  check_order(n);
  const int e = 2 * n + 2;
  return sum_prime_powers(table, x, [e](std::uint64_t m, std::uint64_t, double lp) {
    const double lm = std::log(static_cast<double>(m));
    return lp * lp / (static_cast<double>(m) * std::pow(lm, e));
  });
}

inline Enclosure vn_enclosure(int n, double x) {
  const TailBound t = tail_bound(n, x);
  std::ostringstream p;
  p << "explicit tail at x=" << x << " (main " << t.main << ")";
  return {t.main - t.lower_err, t.main + t.upper_err, p.str()};
}

/// Partial sum up to x plus the explicit tail, widened by kSummationSlack.
inline Enclosure cn_enclosure(int n, double x, const PrimeTable& table) {
  const double partial = cn_partial(n, x, table);
  const Enclosure v = vn_enclosure(n, x);
  std::ostringstream p;
  p << "partial sum to x=" << x << " + " << v.provenance << ", relative slack " << kSummationSlack;
  return {(partial + v.lo) * (1.0 - kSummationSlack), (partial + v.hi) * (1.0 + kSummationSlack), p.str()};
}

/// Default partial-sum cut x_n.
inline double default_x(int n) {
  check_order(n);
  switch (n) {
    case 1: return 1e8;
    case 2: return 1e7;
    case 3: return 5e5;
    default: return 1e5;
  }
}

/// C_n / (2 pi^2) from the enclosure midpoint.
inline double table1(int n, double x, const PrimeTable& table) {
  return cn_enclosure(n, x, table).midpoint() / (2.0 * std::numbers::pi * std::numbers::pi);
}

/// zeta(2k) for any k >= 1: Bernoulli closed form up to k = 20, direct series beyond.
inline double zeta_even_any(int k) {
  if (k < 1) throw DomainError("zeta_even_any: k >= 1");
  if (k <= 20) return zeta_even(k);
  double s = 0.0;
  for (int j = 40; j >= 2; --j) s += std::pow(static_cast<double>(j), -2.0 * k);
  return 1.0 + s;
}

/// [2/3^{2n+3}, (8/3) zeta(2n+2)]: the asymptotic bounds for
/// int_1^inf F(a)/a^{2n+2} da with the epsilon dropped.
inline Enclosure f_integral_bounds(int n) {
  check_order(n);
  return {2.0 / std::pow(3.0, 2 * n + 3), 8.0 / 3.0 * zeta_even_any(n + 1),
          "asymptotic (T large), epsilon omitted"};
}

/// C_n T/(2 pi^2) + T/(2 pi^2 (log T)^{2n}) (f_int - 1/(2n)).
inline double theorem_prediction(int n, double T, double f_int, double cn) {
  check_order(n);
  if (!(T > 1.0)) throw DomainError("prediction needs T > 1");
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return cn * T / (2.0 * pi2) + T / (2.0 * pi2 * std::pow(std::log(T), 2 * n)) * (f_int - 1.0 / (2.0 * n));
}

/// Prediction with f_int = 1/(2n+1):
/// C_n T/(2 pi^2) - T/(4n(2n+1) pi^2 (log T)^{2n}).
inline double spc_prediction(int n, double T, double cn) {
  check_order(n);
  if (!(T > 1.0)) throw DomainError("prediction needs T > 1");
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return cn * T / (2.0 * pi2) - T / (4.0 * n * (2.0 * n + 1.0) * pi2 * std::pow(std::log(T), 2 * n));
}

inline double spc_prediction(int n, double T, const Enclosure& cn) {
  return spc_prediction(n, T, cn.midpoint());
}

/// Leading asymptotic 1/(2 (log 2)^{2n}) of C_n.
inline double cn_leading(int n) { return 0.5 / std::pow(std::numbers::ln2, 2 * n); }

}  // namespace snm

#endif  // SNM_CONSTANTS_HPP
