#ifndef SNM_MOMENTS_HPP
#define SNM_MOMENTS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "snm/arithmetic.hpp"
#include "snm/compensated_sum.hpp"
#include "snm/constants.hpp"
#include "snm/errors.hpp"
#include "snm/parallel.hpp"
#include "snm/prime_table.hpp"
#include "snm/quadrature.hpp"
#include "snm/special.hpp"
#include "snm/zeros.hpp"
#include "snm/zeta.hpp"

namespace snm {

/// S(t) = #{gamma <= t} - theta(t)/pi - 1, with the mean of the one-sided
/// limits at an ordinate.
inline double s0(double t, const ZeroList& zeros) {
  if (!(t > 0.0)) throw DomainError("s0: requires t > 0");
  zeros.require_complete(t, "s0");
  const double below = static_cast<double>(zeros.count_below(t));
  const double at = static_cast<double>(zeros.count_upto(t)) - below;
  return below + 0.5 * at - rs_theta(t).theta / std::numbers::pi - 1.0;
}

/// Iterated antiderivatives S_1..S_max_n of S, exact up to rounding.
///
/// States S_k(b) are stored at breakpoints b (every ordinate, plus extra
/// points so that no gap exceeds one unit). Between breakpoints S(v) equals
/// c - 1 - theta(v)/pi, and
///   S_k(u) = sum_{j<k} S_{k-j}(a)(u-a)^j/j! + int_a^u (u-v)^{k-1}/(k-1)! S(v) dv
/// with the theta part of the integral done by 15-point Gauss-Legendre.
class SnEvaluator {
 public:
  SnEvaluator(const ZeroList& zeros, int max_n, std::vector<double> deltas)
      : zeros_(zeros), max_n_(max_n), deltas_(std::move(deltas)) {
    if (max_n < 1) throw DomainError("SnEvaluator: max_n >= 1");
    if (deltas_.size() != static_cast<std::size_t>(max_n)) {
      throw DomainError("SnEvaluator: need one delta per order");
    }
    build();
  }

  /// Deltas taken from the special-function module.
  SnEvaluator(const ZeroList& zeros, int max_n) : SnEvaluator(zeros, max_n, default_deltas(max_n)) {}

  static std::vector<double> default_deltas(int max_n) {
    std::vector<double> d;
    for (int k = 1; k <= max_n; ++k) d.push_back(delta(k).value);
    return d;
  }

  const ZeroList& zeros() const noexcept { return zeros_; }
  int max_n() const noexcept { return max_n_; }
  double t_max() const noexcept { return zeros_.t_max; }
  std::span<const double> breakpoints() const noexcept { return points_; }

  /// S_n(t) for 0 <= n <= max_n and 0 <= t <= t_max (t > 0 when n = 0).
  double operator()(int n, double t) const {
    if (n < 0 || n > max_n_) throw DomainError("s_n: order outside [0, max_n]");
    if (n == 0) return s0(t, zeros_);
    if (!(t >= 0.0)) throw DomainError("s_n: requires t >= 0");
    zeros_.require_complete(t, "s_n");
    auto it = std::upper_bound(points_.begin(), points_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - points_.begin()) - 1;
    if (points_[i] == t) return state(i, n);
    std::array<double, 64> out{};
    advance(i, t, n, out.data());
    return out[static_cast<std::size_t>(n - 1)];
  }

 private:
  double state(std::size_t i, int k) const {
    return states_[i * static_cast<std::size_t>(max_n_) + static_cast<std::size_t>(k - 1)];
  }

  /// S_1..S_n at u from breakpoint i (points_[i] <= u <= points_[i+1]).
  void advance(std::size_t i, double u, int n, double* out) const {
    const double a = points_[i];
    const double h = u - a;
    const double c = static_cast<double>(zeros_.count_upto(a));
    const double th_a = rs_theta(a).theta;
    const double base = c - 1.0 - th_a / std::numbers::pi;
    // m[k] = int_a^u (u-v)^k/k! (theta(v) - theta(a)) dv
    std::array<double, 64> m{};
    if (h > 0.0) {
      const auto& r = detail::gauss15();
      for (std::size_t j = 0; j < r.nodes.size(); ++j) {
        const double v = a + 0.5 * h * (1.0 + r.nodes[j]);
        const double w = 0.5 * h * r.weights[j] * (rs_theta(v).theta - th_a);
        double p = 1.0;
        for (int k = 0; k < n; ++k) {
          m[static_cast<std::size_t>(k)] += w * p;
          p *= (u - v) / (k + 1);
        }
      }
    }
    for (int k = 1; k <= n; ++k) {
      double s = 0.0;
      double p = 1.0;
      for (int j = 0; j < k; ++j) {
        s += state(i, k - j) * p;
        p *= h / (j + 1);
      }
      // p is now h^k / k!
      s += base * p - m[static_cast<std::size_t>(k - 1)] / std::numbers::pi;
      out[k - 1] = s;
    }
  }

  void build() {
    if (max_n_ > 64) throw DomainError("SnEvaluator: max_n <= 64");
    const double t_max = zeros_.t_max;
    points_.push_back(0.0);
    auto add_until = [&](double target) {
      while (target - points_.back() > 1.0) {
        const double gap = target - points_.back();
        points_.push_back(points_.back() + gap / std::ceil(gap));
      }
      if (target > points_.back()) points_.push_back(target);
    };
    for (double g : zeros_.ordinates) {
      if (g > t_max) break;
      add_until(g);
    }
    add_until(t_max);
    const std::size_t stride = static_cast<std::size_t>(max_n_);
    states_.assign(points_.size() * stride, 0.0);
    for (int k = 1; k <= max_n_; ++k) states_[static_cast<std::size_t>(k - 1)] = deltas_[static_cast<std::size_t>(k - 1)];
    std::array<double, 64> next{};
    for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
      advance(i, points_[i + 1], max_n_, next.data());
      std::copy_n(next.data(), stride, states_.begin() + static_cast<std::ptrdiff_t>((i + 1) * stride));
    }
  }

  ZeroList zeros_;
  int max_n_;
  std::vector<double> deltas_;
  std::vector<double> points_;
  std::vector<double> states_;
};

inline double s_n(int n, double t, const SnEvaluator& eval) { return eval(n, t); }

/// int_0^T S_n(t)^2 dt, split at every breakpoint of the evaluator.
inline Estimate second_moment(int n, double T, const SnEvaluator& eval, const QuadratureSpec& q = {}) {
  if (!(T >= 0.0)) throw DomainError("second_moment: T >= 0");
  if (T == 0.0) return {0.0, 0.0};
  eval.zeros().require_complete(T, "second_moment");
  std::vector<double> bp;
  for (double b : eval.breakpoints()) {
    if (b >= T) break;
    bp.push_back(b);
  }
  bp.push_back(T);
  QuadratureSpec inner = q;
  inner.max_subdivisions = std::max(q.max_subdivisions, static_cast<int>(4 * bp.size()));
  inner.rel_tol = std::max(q.rel_tol, 1e-11);
  const auto r = integrate(
      [&](double t) {
        const double s = eval(n, t);
        return s * s;
      },
      std::span<const double>(bp), inner);
  require_converged(r, "second_moment");
  return r.estimate();
}

/// Montgomery's weighted pair sum at one alpha.
struct FAlphaEstimate {
  double alpha = 0.0;
  double T = 0.0;
  double value = 0.0;
  std::size_t zero_count = 0;
};

namespace detail {

inline constexpr std::size_t kPairRows = 32;

/// sum over i < j of term(gamma_j - gamma_i), reduced in fixed row blocks.
template <class Term>
double upper_pair_sum(std::span<const double> g, Term&& term) {
  const std::size_t n = g.size();
  const std::size_t blocks = (n + kPairRows - 1) / kPairRows;
  std::vector<CompensatedSum> part(blocks);
  parallel_for(blocks, [&](std::size_t b) {
    CompensatedSum acc;
    const std::size_t end = std::min(n, (b + 1) * kPairRows);
    for (std::size_t i = b * kPairRows; i < end; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) acc.add(term(g[j] - g[i]));
    }
    part[b] = acc;
  });
  CompensatedSum total;
  for (const auto& p : part) total.merge(p);
  return total.value();
}

inline std::span<const double> zeros_upto(const ZeroList& zeros, double T) {
  zeros.require_complete(T, "pair sum");
  return std::span<const double>(zeros.ordinates.data(), zeros.count_upto(T));
}

inline double falpha_norm(double T) { return T / (2.0 * std::numbers::pi) * std::log(T); }

}  // namespace detail

inline double pair_weight(double u) { return 4.0 / (4.0 + u * u); }

/// F(alpha, T) by the direct O(N^2) sum N + 2 sum_{i<j} w(d) cos(alpha log T d).
inline FAlphaEstimate f_alpha(double alpha, double T, const ZeroList& zeros) {
  if (!(T >= 2.0)) throw DomainError("f_alpha: T >= 2");
  const auto g = detail::zeros_upto(zeros, T);
  const double al = alpha * std::log(T);
  const double off = detail::upper_pair_sum(g, [al](double d) { return pair_weight(d) * std::cos(al * d); });
  const double total = static_cast<double>(g.size()) + 2.0 * off;
  return {alpha, T, total / detail::falpha_norm(T), g.size()};
}

/// F(alpha, T) through sum w(d) e^{i alpha L d} = int e^{-2|w - alpha L|} |E(w)|^2 dw,
/// E(w) = sum_gamma e^{i w gamma}, by composite Gauss-Legendre in w. Used as an
/// independent check of the direct sum.
inline FAlphaEstimate f_alpha_spectral(double alpha, double T, const ZeroList& zeros) {
  if (!(T >= 2.0)) throw DomainError("f_alpha: T >= 2");
  const auto g = detail::zeros_upto(zeros, T);
  const double n = static_cast<double>(g.size());
  const double center = alpha * std::log(T);
  // Mass outside |w - center| <= W is at most N^2 e^{-2W}.
  const double W = 0.5 * (2.0 * std::log(std::max(n, 2.0)) + 40.0);
  const double span_g = g.empty() ? 1.0 : g.back() - g.front();
  const double panel = std::min(1.0, 6.0 / std::max(span_g, 1.0));
  const auto& rule = detail::gauss15();
  const double shift = g.empty() ? 0.0 : 0.5 * (g.front() + g.back());
  auto mass = [&](double w) {
    // |E(w)|^2 is unchanged by a common phase, so centre the ordinates.
    double re = 0.0;
    double im = 0.0;
    for (double x : g) {
      re += std::cos(w * (x - shift));
      im += std::sin(w * (x - shift));
    }
    return re * re + im * im;
  };
  auto side = [&](double lo, double hi) {
    const std::size_t panels = static_cast<std::size_t>(std::ceil((hi - lo) / panel));
    const double h = (hi - lo) / static_cast<double>(panels);
    std::vector<CompensatedSum> part(panels);
    parallel_for(panels, [&](std::size_t p) {
      const double c = lo + (static_cast<double>(p) + 0.5) * h;
      CompensatedSum acc;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double w = c + 0.5 * h * rule.nodes[i];
        acc.add(0.5 * h * rule.weights[i] * std::exp(-2.0 * std::abs(w - center)) * mass(w));
      }
      part[p] = acc;
    });
    CompensatedSum total;
    for (const auto& s : part) total.merge(s);
    return total.value();
  };
  const double value = side(center - W, center) + side(center, center + W);
  return {alpha, T, value / detail::falpha_norm(T), g.size()};
}

namespace detail {

/// int_1^A cos(a y) a^{-m} da, m >= 2.
inline double cos_power_integral(int m, double y, double A) {
  y = std::abs(y);
  const double scale = std::pow(A, 1.0 - m);
  if (y == 0.0) return (1.0 - scale) / (m - 1.0);
  if (y < 200.0) {
    return expint_e(m, complex(0.0, -y)).real() - scale * expint_e(m, complex(0.0, -y * A)).real();
  }
  // Integration by parts: Re sum_k (m)_k [a^{-m-k} e^{iay}]_1^A / (i y)^{k+1}... with alternating sign.
  const complex iy(0.0, y);
  const complex e1(std::cos(y), std::sin(y));
  const complex eA(std::cos(y * A), std::sin(y * A));
  complex acc = 0.0;
  complex pw = 1.0 / iy;
  double rising = 1.0;
  for (int k = 0; k < 24; ++k) {
    const double a1 = rising;
    const double aA = rising * std::pow(A, -m - k);
    acc += (eA * aA - e1 * a1) * pw;
    rising *= (m + k);
    pw /= iy;
  }
  return acc.real();
}

}  // namespace detail

struct FIntegralResult {
  double value = 0.0;
  /// Bound on int_{alpha_max}^inf F/alpha^{2n+2}.
  double tail_bound = 0.0;
  double alpha_max = 0.0;
};

/// int_1^{alpha_max} F(alpha)/alpha^{2n+2} d alpha, integrated exactly pair by
/// pair. Since |F(alpha)| <= F(0), the remainder beyond alpha_max is at most
/// F(0) alpha_max^{-(2n+1)}/(2n+1).
inline FIntegralResult f_integral(int n, double T, double alpha_max, const ZeroList& zeros) {
  if (n < 1) throw DomainError("f_integral: n >= 1");
  if (!(alpha_max > 1.0)) throw DomainError("f_integral: alpha_max > 1");
  const auto g = detail::zeros_upto(zeros, T);
  const int m = 2 * n + 2;
  const double L = std::log(T);
  const double diag = static_cast<double>(g.size()) * detail::cos_power_integral(m, 0.0, alpha_max);
  const double off = detail::upper_pair_sum(
      g, [&](double d) { return pair_weight(d) * detail::cos_power_integral(m, L * d, alpha_max); });
  const double norm = detail::falpha_norm(T);
  const double f0 = f_alpha(0.0, T, zeros).value;
  return {(diag + 2.0 * off) / norm, f0 * std::pow(alpha_max, 1.0 - m) / (m - 1.0), alpha_max};
}

struct PairSumResult {
  double value = 0.0;
  /// Bound on the omitted pairs plus evaluation error of k_hat.
  double truncation_bound = 0.0;
  /// Diagonal part N k_hat(0)/(log x)^{2n+1}.
  double diagonal = 0.0;
  /// Pairs with |gamma - gamma'| log x > y_cut were omitted.
  double y_cut = 0.0;
};

/// (log x)^{-(2n+1)} sum_{0 < gamma, gamma' <= T} k_hat_n((gamma - gamma') log x).
/// Pairs beyond y_cut are dropped once B sum 1/y^2 over them, with B the
/// verified decay constant of k_hat, is below 1e-3 of the diagonal.
inline PairSumResult rn_pair_sum(int n, double x, double T, const ZeroList& zeros, const KHat& kh) {
  if (kh.n() != n) throw DomainError("rn_pair_sum: kernel order mismatch");
  if (!(x >= 4.0)) throw DomainError("rn_pair_sum: x >= 4");
  const auto g = detail::zeros_upto(zeros, T);
  const double lx = std::log(x);
  const double scale = std::pow(lx, -(2.0 * n + 1.0));
  const double diag = static_cast<double>(g.size()) * kh(0.0);
  // Tail mass per doubling bin above KHat::kAsymptotic.
  constexpr int kBins = 40;
  const std::size_t n_g = g.size();
  std::vector<std::array<double, kBins>> bins((n_g + detail::kPairRows - 1) / detail::kPairRows);
  parallel_for(bins.size(), [&](std::size_t b) {
    auto& row = bins[b];
    row.fill(0.0);
    const std::size_t end = std::min(n_g, (b + 1) * detail::kPairRows);
    for (std::size_t i = b * detail::kPairRows; i < end; ++i) {
      for (std::size_t j = i + 1; j < n_g; ++j) {
        const double y = (g[j] - g[i]) * lx;
        if (y <= KHat::kAsymptotic) continue;
        const int k = std::min(kBins - 1, static_cast<int>(std::log2(y / KHat::kAsymptotic)));
        row[static_cast<std::size_t>(k)] += 2.0 / (y * y);
      }
    }
  });
  std::array<double, kBins> mass{};
  for (const auto& row : bins) {
    for (int k = 0; k < kBins; ++k) mass[static_cast<std::size_t>(k)] += row[static_cast<std::size_t>(k)];
  }
  // Smallest cut Y = 128 * 2^c whose omitted mass is small enough.
  double omitted = 0.0;
  int cut_bin = kBins;
  for (int c = kBins - 1; c >= 0; --c) {
    const double next = omitted + kh.decay_constant() * mass[static_cast<std::size_t>(c)];
    if (next > 1e-3 * std::abs(diag)) break;
    omitted = next;
    cut_bin = c;
  }
  const double y_cut = KHat::kAsymptotic * std::ldexp(1.0, cut_bin);
  const double off = detail::upper_pair_sum(g, [&](double d) {
    const double y = d * lx;
    return y > y_cut ? 0.0 : kh(y);
  });
  const double pairs = static_cast<double>(n_g) * static_cast<double>(n_g);
  PairSumResult r;
  r.value = scale * (diag + 2.0 * off);
  r.truncation_bound = scale * (omitted + pairs * kh.error());
  r.diagonal = scale * diag;
  r.y_cut = y_cut;
  return r;
}

/// Main terms of the pair-sum asymptotic at x = T^beta:
/// T/(2 pi^2 (log T)^{2n}) [(A_n + 1/(2n))/beta^{2n} + (f_int - 1/(2n)) + 2 mu_n^2/beta^{2n+2}].
inline double rn_prediction(int n, double beta, double T, double a_n, double f_int) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double mu_n = mu(n);
  return T / (2.0 * pi2 * std::pow(std::log(T), 2 * n)) *
         ((a_n + 0.5 / n) / std::pow(beta, 2 * n) + (f_int - 0.5 / n) +
          2.0 * mu_n * mu_n / std::pow(beta, 2 * n + 2));
}

/// int_0^inf y^{n+1}/(y^2 + u^2) 2/(e^y + (-1)^{n+1} e^{-y}) dy.
inline double zero_kernel(int n, double u, const QuadratureSpec& q = {}) {
  const double s = n % 2 == 1 ? 1.0 : -1.0;
  const double u2 = u * u;
  auto f = [&](double y) {
    if (y <= 0.0) return 0.0;
    const double den = s > 0 ? std::cosh(y) : std::sinh(y);
    const double d = y > 30.0 ? 2.0 * std::exp(-y) / (1.0 + s * std::exp(-2.0 * y)) : 1.0 / den;
    return std::pow(y, n + 1) / (y * y + u2) * d;
  };
  // Integrand <= 2.5 y^{n-1} e^{-y} for y >= 1.
  auto tail = [&](double y) { return 2.5 * std::exp(std::lgamma(static_cast<double>(n))) * detail::gamma_tail(n - 1, 1.0, y); };
  const double cut = truncation_point(tail, 1.0, q.abs_tol / q.truncation_margin);
  std::vector<double> bp{0.0};
  if (std::abs(u) < 1.0 && std::abs(u) > 0.0) bp.push_back(std::abs(u));
  bp.push_back(1.0);
  for (double y = 2.0; y < cut; y *= 2.0) bp.push_back(y);
  bp.push_back(cut);
  const auto r = integrate(f, std::span<const double>(bp), q);
  require_converged(r, "zero kernel");
  return r.value + tail(cut);
}

/// Terms of the representation of S_n(t) and their comparison.
struct RepresentationResult {
  double s_n = 0.0;
  double zero_sum = 0.0;    // I_2 over ordinates in the window
  double prime_sum = 0.0;   // I_3
  double mu_term = 0.0;     // I_4
  double residual = 0.0;    // |S_n - (I_2 + I_3 + I_4)|
  /// Signed sum of the I_2 terms from known ordinates outside the window.
  double window_tail = 0.0;
  /// Bound for the ordinates above the horizon (and their mirror images).
  double horizon_allowance = 0.0;
  /// sum |term| outside the window plus the horizon allowance.
  double truncation_allowance = 0.0;
  /// sqrt(x)/(t (log x)^{n+2}), the scale of the unquantified error.
  double error_scale = 0.0;
  std::size_t window_zeros = 0;
};

/// Upper bound for N(t): t/2pi log(t/2pi) - t/2pi + 7/8 + 0.137 log t + 0.443 log log t + 4.35.
inline double zero_count_upper(double t) {
  const double a = t / (2.0 * std::numbers::pi);
  return a * std::log(a) - a + 0.875 + 0.137 * std::log(t) + 0.443 * std::log(std::log(t)) + 4.35;
}

/// Compares S_n(t) with its representation by a windowed zero sum
/// (ordinates gamma and -gamma with |gamma - t| <= W), the prime sum over
/// m <= x and the mu_n term.
inline RepresentationResult representation_residual(int n, double t, double x, double W,
                                                    const SnEvaluator& eval, const PrimeTable& table,
                                                    const QuadratureSpec& q = {}) {
  if (n < 1 || n > eval.max_n()) throw DomainError("representation: n outside [1, max_n]");
  if (!(t >= 1.0)) throw DomainError("representation: t >= 1");
  if (!(x >= 4.0)) throw DomainError("representation: x >= 4");
  if (!(W > 0.0)) throw DomainError("representation: W > 0");
  const ZeroList& zeros = eval.zeros();
  zeros.require_complete(t + W, "representation window");
  const double lx = std::log(x);
  const double pi = std::numbers::pi;
  const double pref = 1.0 / (pi * std::exp(std::lgamma(n + 1.0)) * std::pow(lx, n));
  const double phase0 = (n + 2) * pi / 2.0;

  RepresentationResult r;
  r.s_n = eval(n, t);

  // Each ordinate enters with its mirror image -gamma.
  CompensatedSum inside;
  CompensatedSum outside;
  CompensatedSum outside_abs;
  const auto& g = zeros.ordinates;
  std::vector<double> terms(2 * g.size());
  std::vector<char> in_window(2 * g.size());
  parallel_for(2 * g.size(), [&](std::size_t k) {
    const double gamma = k % 2 == 0 ? g[k / 2] : -g[k / 2];
    const double u = (gamma - t) * lx;
    terms[k] = pref * std::sin(phase0 + u) * zero_kernel(n, u, q);
    in_window[k] = std::abs(gamma - t) <= W;
  });
  for (std::size_t k = 0; k < terms.size(); ++k) {
    if (in_window[k]) {
      inside.add(terms[k]);
      ++r.window_zeros;
    } else {
      outside.add(terms[k]);
      outside_abs.add(std::abs(terms[k]));
    }
  }
  r.zero_sum = inside.value();
  r.window_tail = outside.value();

  // Beyond the horizon: K(u) <= c/u^2 with c = int y^{n+1} 2/(e^y +- e^{-y}) dy,
  // and sum_{gamma > H} 1/(gamma - t)^2 <= 2 int_H^inf N+(v)/(v - t)^3 dv.
  const double c_kernel = zero_kernel(n, 0.0, q);
  const double H = zeros.t_max;
  auto density_tail = [&](double shift) {
    // int_H^inf N+(v)/(v + shift)^3 dv with v = H / s, s in (0, 1].
    const auto res = integrate(
        [&](double s) {
          if (s <= 0.0) return 0.0;
          const double v = H / s;
          return zero_count_upper(v) / std::pow(v + shift, 3) * H / (s * s);
        },
        0.0, 1.0, q);
    return 2.0 * (res.value + res.error);
  };
  r.horizon_allowance = pref * c_kernel / (lx * lx) * (density_tail(-t) + density_tail(t));
  r.truncation_allowance = outside_abs.value() + r.horizon_allowance;

  // I_3
  CompensatedSum primes;
  const double nphase = n * pi / 2.0;
  const std::uint64_t top = static_cast<std::uint64_t>(std::floor(x));
  if (top > table.limit()) throw PreconditionError("representation: prime table below x");
  table.for_each_prime_power(2, top, [&](std::uint64_t m, std::uint64_t p) {
    const double lm = std::log(static_cast<double>(m));
    const double lp = std::log(static_cast<double>(p));
    const double ratio = lm / lx;
    const double f = ratio >= 1.0 ? 0.0 : eval_f(n, ratio, q).value;
    primes.add(std::sin(nphase - t * lm) * lp * f / (std::sqrt(static_cast<double>(m)) * std::pow(lm, n + 1)));
  });
  r.prime_sum = primes.value() / pi;

  r.mu_term = mu(n) * std::sin(nphase) * std::log(t / (2.0 * pi)) / (pi * std::pow(lx, n + 1));
  r.residual = std::abs(r.s_n - (r.zero_sum + r.prime_sum + r.mu_term));
  r.error_scale = std::sqrt(x) / (t * std::pow(lx, n + 2));
  return r;
}

/// Coefficients a_m = Lambda(m) f_n(log m/log x)/(sqrt(m)(log m)^{n+1}) over prime powers m <= x.
struct DirichletTerm {
  std::uint64_t m = 0;
  double log_m = 0.0;
  double lambda = 0.0;
  double f = 0.0;
  double coefficient = 0.0;
};

inline std::vector<DirichletTerm> dirichlet_terms(int n, double x, const PrimeTable& table,
                                                  const QuadratureSpec& q = {}) {
  std::vector<DirichletTerm> out;
  if (x < 2.0) return out;
  const std::uint64_t top = static_cast<std::uint64_t>(std::floor(x));
  if (top > table.limit()) throw PreconditionError("prime table below x");
  const double lx = std::log(x);
  table.for_each_prime_power(2, top, [&](std::uint64_t m, std::uint64_t p) {
    DirichletTerm d;
    d.m = m;
    d.log_m = std::log(static_cast<double>(m));
    d.lambda = std::log(static_cast<double>(p));
    const double ratio = d.log_m / lx;
    d.f = ratio >= 1.0 ? 0.0 : eval_f(n, ratio, q).value;
    d.coefficient = d.lambda * d.f / (std::sqrt(static_cast<double>(m)) * std::pow(d.log_m, n + 1));
    out.push_back(d);
  });
  return out;
}

struct CheckPair {
  double numeric = 0.0;
  double formula = 0.0;
};

/// (T/2 pi^2) sum Lambda^2 f^2 / (m (log m)^{2n+2}) for the given terms.
inline double gn_formula(int n, double T, const std::vector<DirichletTerm>& terms) {
  CompensatedSum s;
  for (const auto& d : terms) {
    s.add(d.lambda * d.lambda * d.f * d.f / (static_cast<double>(d.m) * std::pow(d.log_m, 2 * n + 2)));
  }
  return T / (2.0 * std::numbers::pi * std::numbers::pi) * s.value();
}

/// (1/pi^2) int_1^T |sum_m Im{i^n m^{-it}} a_m|^2 dt by quadrature, and the
/// diagonal formula.
inline CheckPair gn_check(int n, double x, double T, const PrimeTable& table, const QuadratureSpec& q = {}) {
  if (!(T >= 1.0)) throw DomainError("gn_check: T >= 1");
  const auto terms = dirichlet_terms(n, x, table, q);
  CheckPair c;
  c.formula = gn_formula(n, T, terms);
  if (terms.empty() || T == 1.0) return c;
  const double nphase = n * std::numbers::pi / 2.0;
  auto d2 = [&](double t) {
    double s = 0.0;
    for (const auto& d : terms) s += std::sin(nphase - t * d.log_m) * d.coefficient;
    return s * s;
  };
  std::vector<double> bp;
  for (double t = 1.0; t < T; t += 1.0) bp.push_back(t);
  bp.push_back(T);
  QuadratureSpec inner = q;
  inner.max_subdivisions = std::max(q.max_subdivisions, static_cast<int>(4 * bp.size()));
  const auto r = integrate(d2, std::span<const double>(bp), inner);
  require_converged(r, "gn_check");
  c.numeric = r.value / (std::numbers::pi * std::numbers::pi);
  return c;
}

/// (T/pi^2) sum Lambda^2 f / (m (log m)^{2n+2}).
inline double hn_formula(int n, double T, const std::vector<DirichletTerm>& terms) {
  CompensatedSum s;
  for (const auto& d : terms) {
    s.add(d.lambda * d.lambda * d.f / (static_cast<double>(d.m) * std::pow(d.log_m, 2 * n + 2)));
  }
  return T / (std::numbers::pi * std::numbers::pi) * s.value();
}

/// H_n = (2/pi) sum_m (int_1^T S_n(t) Im{i^n m^{-it}} dt) a_m, and its main term.
inline CheckPair hn_check(int n, double x, double T, const SnEvaluator& eval, const PrimeTable& table,
                          const QuadratureSpec& q = {}) {
  if (!(T >= 1.0)) throw DomainError("hn_check: T >= 1");
  if (n < 1 || n > eval.max_n()) throw DomainError("hn_check: n outside [1, max_n]");
  const auto terms = dirichlet_terms(n, x, table, q);
  CheckPair c;
  c.formula = hn_formula(n, T, terms);
  if (terms.empty() || T == 1.0) return c;
  eval.zeros().require_complete(T, "hn_check");
  const double nphase = n * std::numbers::pi / 2.0;
  // S_n has kinks at the ordinates, which are all breakpoints of the evaluator.
  std::vector<double> bp{1.0};
  for (double b : eval.breakpoints()) {
    if (b > 1.0 && b < T) bp.push_back(b);
  }
  bp.push_back(T);
  QuadratureSpec inner = q;
  inner.max_subdivisions = std::max(q.max_subdivisions, static_cast<int>(4 * bp.size()));
  // S_n(t) carries rounding noise near 1e-13 from c - theta(t)/pi.
  inner.abs_tol = std::max(q.abs_tol, 1e-10);
  inner.rel_tol = std::max(q.rel_tol, 1e-9);
  std::vector<double> integrals(terms.size());
  parallel_for(terms.size(), [&](std::size_t k) {
    const double lm = terms[k].log_m;
    const auto r = integrate([&](double t) { return eval(n, t) * std::sin(nphase - t * lm); },
                             std::span<const double>(bp), inner);
    require_converged(r, "hn_check");
    integrals[k] = r.value;
  });
  CompensatedSum s;
  for (std::size_t k = 0; k < terms.size(); ++k) s.add(integrals[k] * terms[k].coefficient);
  c.numeric = 2.0 / std::numbers::pi * s.value();
  return c;
}

/// Both sides of H - G = (T/2 pi^2) sum w (2f - f^2), with w = Lambda^2/(m (log m)^{2n+2}).
struct SquareIdentity {
  double h_minus_g = 0.0;
  double combined = 0.0;
};

inline SquareIdentity completing_square(double T, std::span<const double> weights, std::span<const double> f) {
  if (weights.size() != f.size()) throw DomainError("completing_square: size mismatch");
  const double c = T / (2.0 * std::numbers::pi * std::numbers::pi);
  CompensatedSum h;
  CompensatedSum g;
  CompensatedSum both;
  for (std::size_t i = 0; i < f.size(); ++i) {
    h.add(2.0 * c * weights[i] * f[i]);
    g.add(c * weights[i] * f[i] * f[i]);
    both.add(c * weights[i] * (2.0 * f[i] - f[i] * f[i]));
  }
  return {h.value() - g.value(), both.value()};
}

/// Both sides of (T/2pi^2) sum Lambda^2 (1-f)^2/(m (log m)^{2n+2})
/// = T/(2 pi^2 (log x)^{2n+2}) sum Lambda^2 g^2(log m/log x)/m,
/// with f = 1 - u^{n+1} g(u), u = log m/log x.
inline std::array<double, 2> square_cancellation(int n, double x, double T, const std::vector<DirichletTerm>& terms,
                                                 std::span<const double> g_values) {
  if (g_values.size() != terms.size()) throw DomainError("square_cancellation: size mismatch");
  const double c = T / (2.0 * std::numbers::pi * std::numbers::pi);
  const double lx = std::log(x);
  CompensatedSum left;
  CompensatedSum right;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& d = terms[i];
    const double u = d.log_m / lx;
    const double one_minus_f = std::pow(u, n + 1) * g_values[i];
    left.add(d.lambda * d.lambda * one_minus_f * one_minus_f / (static_cast<double>(d.m) * std::pow(d.log_m, 2 * n + 2)));
    right.add(d.lambda * d.lambda * g_values[i] * g_values[i] / static_cast<double>(d.m));
  }
  return {c * left.value(), c * right.value() / std::pow(lx, 2 * n + 2)};
}

/// sum_{p <= x} (log p)^2 g_n(log p/log x)^2 / p, which grows like A_n (log x)^2.
inline double g2_prime_sum(double x, const PrimeTable& table, const GnChebyshev& g) {
  const double lx = std::log(x);
  return sum_primes(table, x, [&](std::uint64_t p, double lp) {
    const double v = g(std::min(1.0, lp / lx));
    return lp * lp * v * v / static_cast<double>(p);
  });
}

/// Empirical second moment against the predictions.
struct MomentReport {
  int n = 1;
  double T = 0.0;
  double empirical = 0.0;
  double prediction_main = 0.0;
  double prediction_full = 0.0;
  double f_int_measured = 0.0;
  /// |empirical - prediction_main| / prediction_main
  double relative_gap = 0.0;
};

inline MomentReport moment_report(int n, double T, const SnEvaluator& eval, double cn, double alpha_max = 8.0) {
  MomentReport r;
  r.n = n;
  r.T = T;
  r.empirical = second_moment(n, T, eval).value;
  r.prediction_main = cn * T / (2.0 * std::numbers::pi * std::numbers::pi);
  r.f_int_measured = f_integral(n, T, alpha_max, eval.zeros()).value;
  r.prediction_full = theorem_prediction(n, T, r.f_int_measured, cn);
  r.relative_gap = std::abs(r.empirical - r.prediction_main) / r.prediction_main;
  return r;
}

}  // namespace snm

#endif  // SNM_MOMENTS_HPP
