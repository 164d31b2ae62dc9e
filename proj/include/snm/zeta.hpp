#ifndef SNM_ZETA_HPP
#define SNM_ZETA_HPP

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "snm/compensated_sum.hpp"
#include "snm/errors.hpp"

namespace snm {

using complex = std::complex<double>;

/// B_2, B_4, ..., B_40.
inline constexpr std::array<double, 20> kBernoulliEven{
    0.16666666666666666,  -0.033333333333333333, 0.023809523809523808, -0.033333333333333333,
    0.07575757575757576,  -0.2531135531135531,   1.1666666666666667,   -7.0921568627450977,
    54.971177944862156,   -529.12424242424242,   6192.123188405797,    -86580.253113553117,
    1425517.1666666667,   -27298231.067816094,   601580873.9006424,    -15116315767.092157,
    429614643061.16669,   -13711655205088.332,   488332318973593.19,   -19296579341940068.0,
};

/// B_{2k} for 1 <= k <= 20.
inline double bernoulli_even(int k) {
  if (k < 1 || k > static_cast<int>(kBernoulliEven.size())) {
    throw DomainError("bernoulli_even: index out of tabulated range");
  }
  return kBernoulliEven[static_cast<std::size_t>(k - 1)];
}

/// zeta(2k) = (-1)^{k+1} B_{2k} (2 pi)^{2k} / (2 (2k)!), for 1 <= k <= 20.
inline double zeta_even(int k) {
  const double b = bernoulli_even(k);
  double v = std::abs(b) / 2.0;
  const double two_pi = 2.0 * std::numbers::pi;
  for (int j = 1; j <= 2 * k; ++j) v *= two_pi / j;
  return v;
}

/// Largest |Im s| the Euler-Maclaurin evaluator accepts.
inline constexpr double kZetaHorizon = 1e5;

namespace detail {

inline constexpr int kEmTerms = 15;

/// Coefficients B_{2j} / (2j)! for j = 1..kEmTerms.
inline const std::array<double, kEmTerms>& em_coefficients() {
  static const std::array<double, kEmTerms> c = [] {
    std::array<double, kEmTerms> out{};
    double fact = 1.0;
    for (int j = 1; j <= kEmTerms; ++j) {
      fact *= (2.0 * j - 1.0) * (2.0 * j);
      out[static_cast<std::size_t>(j - 1)] = bernoulli_even(j) / fact;
    }
    return out;
  }();
  return c;
}

inline int em_cutoff(double abs_s) {
  // Ratio |s + 2M| / (2 pi N) <= 0.4 keeps the first omitted correction near 1e-12.
  const double n = (abs_s + 2.0 * kEmTerms) / (2.0 * std::numbers::pi * 0.4);
  return std::max(12, static_cast<int>(std::ceil(n)));
}

struct LogTable {
  std::vector<double> log_k;
  std::vector<double> rsqrt_k;
};

inline const LogTable& log_table() {
  static const LogTable table = [] {
    LogTable t;
    const int n = em_cutoff(kZetaHorizon + 3.0) + 2;
    t.log_k.resize(static_cast<std::size_t>(n));
    t.rsqrt_k.resize(static_cast<std::size_t>(n));
    for (int k = 1; k < n; ++k) {
      t.log_k[static_cast<std::size_t>(k)] = std::log(static_cast<double>(k));
      t.rsqrt_k[static_cast<std::size_t>(k)] = 1.0 / std::sqrt(static_cast<double>(k));
    }
    return t;
  }();
  return table;
}

/// sum_{k < n} k^{-s}, compensated in both components.
inline complex dirichlet_head(complex s, int n) {
  const auto& tab = log_table();
  const double sigma = s.real();
  const double t = s.imag();
  CompensatedSum re;
  CompensatedSum im;
  const bool critical = sigma == 0.5;
  for (int k = 1; k < n; ++k) {
    const double lk = tab.log_k[static_cast<std::size_t>(k)];
    const double mag = critical ? tab.rsqrt_k[static_cast<std::size_t>(k)] : std::exp(-sigma * lk);
    const double ph = t * lk;
    re.add(mag * std::cos(ph));
    im.add(-mag * std::sin(ph));
  }
  return {re.value(), im.value()};
}

/// Euler-Maclaurin corrections N^{-s}/2 + sum_j B_{2j}/(2j)! (s)_{2j-1} N^{1-s-2j}.
inline complex em_tail(complex s, int n) {
  const double ln = std::log(static_cast<double>(n));
  const complex n_pow = std::exp(-s * ln);  // N^{-s}
  complex acc = 0.5 * n_pow;
  complex rising = s;                        // (s)_{2j-1}
  complex power = n_pow / static_cast<double>(n);  // N^{-s-1}
  const auto& c = em_coefficients();
  const double inv_n2 = 1.0 / (static_cast<double>(n) * n);
  for (int j = 1; j <= kEmTerms; ++j) {
    acc += c[static_cast<std::size_t>(j - 1)] * rising * power;
    rising *= (s + (2.0 * j - 1.0)) * (s + 2.0 * j);
    power *= inv_n2;
  }
  return acc;
}

}  // namespace detail

/// zeta(s) for Re s > 0, s != 1, |Im s| <= 1e5, by Euler-Maclaurin summation
/// with 15 Bernoulli corrections.
inline complex zeta_complex(complex s) {
  if (!(s.real() > 0.0)) throw DomainError("zeta_complex: requires Re s > 0");
  if (s == complex(1.0, 0.0)) throw DomainError("zeta_complex: pole at s = 1");
  if (std::abs(s.imag()) > kZetaHorizon) {
    throw PreconditionError("zeta_complex: |Im s| beyond the 1e5 accuracy horizon");
  }
  const int n = detail::em_cutoff(std::abs(s));
  const complex head = detail::dirichlet_head(s, n);
  const complex pole = std::exp((1.0 - s) * std::log(static_cast<double>(n))) / (s - 1.0);
  return head + pole + detail::em_tail(s, n);
}

/// (sigma - 1) zeta(sigma) for real sigma > 0; smooth through sigma = 1 where it equals 1.
inline double zeta_pole_removed(double sigma) {
  if (!(sigma > 0.0)) throw DomainError("zeta_pole_removed: requires sigma > 0");
  const complex s(sigma, 0.0);
  const int n = detail::em_cutoff(sigma);
  const complex body = detail::dirichlet_head(s, n) + detail::em_tail(s, n);
  return (sigma - 1.0) * body.real() + std::exp((1.0 - sigma) * std::log(static_cast<double>(n)));
}

/// Real zeta(sigma), sigma > 0, sigma != 1.
inline double zeta_real(double sigma) {
  if (sigma == 1.0) throw DomainError("zeta_real: pole at 1");
  if (sigma > 1.0 && sigma == std::floor(sigma) && static_cast<int>(sigma) % 2 == 0 && sigma <= 40.0) {
    return zeta_even(static_cast<int>(sigma) / 2);
  }
  return zeta_complex(complex(sigma, 0.0)).real();
}

namespace detail {

/// Shifts z to Re z >= 15 and returns the number of unit shifts.
inline int gamma_shift(complex z) {
  return z.real() >= 15.0 ? 0 : static_cast<int>(std::ceil(15.0 - z.real()));
}

}  // namespace detail

/// Continuous branch of log Gamma(z) for Re z > 0 (Stirling with upward shift).
inline complex log_gamma(complex z) {
  if (!(z.real() > 0.0)) throw DomainError("log_gamma: requires Re z > 0");
  const int m = detail::gamma_shift(z);
  complex correction = 0.0;
  for (int k = 0; k < m; ++k) correction += std::log(z + static_cast<double>(k));
  const complex w = z + static_cast<double>(m);
  complex series = 0.0;
  const complex w2 = 1.0 / (w * w);
  complex wp = 1.0 / w;
  for (int j = 1; j <= 10; ++j) {
    series += bernoulli_even(j) / (2.0 * j * (2.0 * j - 1.0)) * wp;
    wp *= w2;
  }
  const complex stirling =
      (w - 0.5) * std::log(w) - w + 0.5 * std::log(2.0 * std::numbers::pi) + series;
  return stirling - correction;
}

/// psi(z) = Gamma'(z)/Gamma(z) for Re z > 0.
inline complex digamma(complex z) {
  if (!(z.real() > 0.0)) throw DomainError("digamma: requires Re z > 0");
  const int m = detail::gamma_shift(z);
  complex correction = 0.0;
  for (int k = 0; k < m; ++k) correction += 1.0 / (z + static_cast<double>(k));
  const complex w = z + static_cast<double>(m);
  complex series = 0.0;
  const complex w2 = 1.0 / (w * w);
  complex wp = w2;
  for (int j = 1; j <= 10; ++j) {
    series += bernoulli_even(j) / (2.0 * j) * wp;
    wp *= w2;
  }
  return std::log(w) - 0.5 / w - series - correction;
}

/// Riemann-Siegel theta and its derivative at t.
struct ThetaEval {
  double t = 0.0;
  double theta = 0.0;
  double derivative = 0.0;
};

/// theta(t) = Im log Gamma(1/4 + it/2) - (t/2) log pi. Asymptotic series for
/// t >= 10, complex log-Gamma below.
inline ThetaEval rs_theta(double t) {
  if (!(t >= 0.0)) throw DomainError("rs_theta: requires t >= 0");
  constexpr double pi = std::numbers::pi;
  ThetaEval out;
  out.t = t;
  if (t >= 10.0) {
    const double inv = 1.0 / t;
    const double inv2 = inv * inv;
    double theta = 0.5 * t * std::log(t / (2.0 * pi)) - 0.5 * t - pi / 8.0;
    double deriv = 0.5 * std::log(t / (2.0 * pi));
    double p = inv;  // t^{-(2k-1)}
    for (int k = 1; k <= 12; ++k) {
      const double c = (1.0 - std::ldexp(1.0, 1 - 2 * k)) * std::abs(bernoulli_even(k)) /
                       (4.0 * k * (2.0 * k - 1.0));
      theta += c * p;
      deriv -= c * (2.0 * k - 1.0) * p * inv;
      p *= inv2;
    }
    out.theta = theta;
    out.derivative = deriv;
    return out;
  }
  const complex z(0.25, 0.5 * t);
  out.theta = log_gamma(z).imag() - 0.5 * t * std::log(pi);
  out.derivative = 0.5 * digamma(z).real() - 0.5 * std::log(pi);
  return out;
}

/// e^{i theta(t)} zeta(1/2 + it); real up to rounding.
inline complex rotated_zeta(double t) {
  const double at = std::abs(t);
  const double th = rs_theta(at).theta;
  complex z = zeta_complex(complex(0.5, at)) * std::polar(1.0, th);
  return z;
}

/// Hardy's Z(t) = e^{i theta(t)} zeta(1/2 + it), an even real function.
inline double hardy_z(double t) { return rotated_zeta(t).real(); }

/// S(t) = (1/pi) arg zeta(1/2 + it) by continuous variation along
/// 2 -> 2 + it -> 1/2 + it. Requires t > 0 and t not too close to an ordinate.
inline double argument_s(double t) {
  if (!(t > 0.0)) throw DomainError("argument_s: requires t > 0");
  // Re zeta(2 + it) >= 2 - zeta(2) > 0, so the principal argument is the continuous one.
  complex prev = zeta_complex(complex(2.0, t));
  double arg = std::arg(prev);
  double sigma = 2.0;
  double h = 0.05;
  while (sigma > 0.5) {
    const double step = std::min(h, sigma - 0.5);
    const complex next = zeta_complex(complex(sigma - step, t));
    const double d = std::arg(next / prev);
    if (std::abs(d) > 0.4 && step > 1e-7) {
      h = 0.5 * step;
      continue;
    }
    arg += d;
    prev = next;
    sigma -= step;
    if (sigma - 0.5 < 1e-15) sigma = 0.5;
    h = std::min(0.1, 1.5 * step);
  }
  return arg / std::numbers::pi;
}

/// N(t) = theta(t)/pi + 1 + S(t), the exact count of ordinates in (0, t].
inline long zero_count(double t) {
  if (t <= 0.0) return 0;
  const double v = rs_theta(t).theta / std::numbers::pi + 1.0 + argument_s(t);
  return std::lround(v);
}

}  // namespace snm

#endif  // SNM_ZETA_HPP
