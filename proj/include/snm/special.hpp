#ifndef SNM_SPECIAL_HPP
#define SNM_SPECIAL_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "snm/errors.hpp"
#include "snm/quadrature.hpp"
#include "snm/zeta.hpp"

namespace snm {

/// Order n >= 1 of S_n and of the f_n / g_n / k_n family.
struct SpecialIndex {
  int n = 1;

  SpecialIndex(int order) : n(order) {  // NOLINT: implicit on purpose
    if (order < 1) throw DomainError("special functions need n >= 1");
    if (order > 64) throw DomainError("special functions support n <= 64");
  }
  bool odd() const noexcept { return n % 2 == 1; }
  /// (-1)^{n+1}
  double sign() const noexcept { return odd() ? 1.0 : -1.0; }
  operator int() const noexcept { return n; }  // NOLINT
};

namespace detail {

/// int_Y^inf v^p/p! e^{-cv} dv = e^{-cY}/c^{p+1} sum_{i<=p} (cY)^i/i!.
inline double gamma_tail(int p, double c, double y) {
  double term = 1.0;
  double sum = 1.0;
  for (int i = 1; i <= p; ++i) {
    term *= c * y / i;
    sum += term;
  }
  return std::exp(-c * y - (p + 1) * std::log(c)) * sum;
}

inline double log_factorial(int n) { return std::lgamma(n + 1.0); }

/// y^p / n! * e^{-y} (e^{xy} + a e^{-xy}) / (e^y + b e^{-y}), a, b in {+1, -1}.
/// With p = n + k and a = b (-1)^k this is the integrand of g_n^{(k)}(x).
inline double g_integrand(double y, int p, int n, double x, double a, double b) {
  if (y <= 0.0) {
    if (p > 0 || (a > 0 && b < 0)) return 0.0;
    return a > 0 ? 1.0 / std::exp(log_factorial(n)) : 0.0;
  }
  const double lead = p * std::log(y) - log_factorial(n);
  if (y <= 1.0) {
    const double num = a > 0 ? std::cosh(x * y) : std::sinh(x * y);
    const double den = b > 0 ? std::cosh(y) : std::sinh(y);
    return std::exp(lead - y) * num / den;
  }
  const double ax = std::abs(x);
  const double num = std::exp((x - ax) * y) + a * std::exp((-x - ax) * y);
  const double den = 1.0 + b * std::exp(-2.0 * y);
  return std::exp(lead + (ax - 2.0) * y) * num / den;
}

/// Integral over [0, inf) of g_integrand with certified truncation.
inline Estimate g_family_integral(int p, int n, double x, double a, double b,
                                  const QuadratureSpec& q) {
  const double c = 2.0 - std::abs(x);
  // |integrand| <= 2.5 y^p e^{-cy} / n! for y >= 1.
  const double scale = std::exp(log_factorial(p) - log_factorial(n));
  auto tail = [&](double y) { return 2.5 * scale * gamma_tail(p, c, y); };
  const double target = q.abs_tol / q.truncation_margin;
  const double cut = truncation_point(tail, 1.0, target, 1e9);
  std::vector<double> bp{0.0, 1.0};
  for (double y = 2.0; y < cut; y *= 2.0) bp.push_back(y);
  bp.push_back(cut);
  const auto r = integrate([&](double y) { return g_integrand(y, p, n, x, a, b); },
                           std::span<const double>(bp), q);
  require_converged(r, "g_n integral");
  return {r.value, r.error + tail(cut)};
}

}  // namespace detail

/// g_n(x) for |x| < 2 from its integral representation.
inline Estimate eval_g(SpecialIndex n, double x, const QuadratureSpec& q = {}) {
  q.validate();
  if (!(std::abs(x) < 2.0)) throw DomainError("eval_g: requires |x| < 2");
  const double s = n.sign();
  return detail::g_family_integral(n.n, n.n, x, s, s, q);
}

/// k-th derivative of g_n at x, |x| < 2.
inline Estimate eval_g_derivative(SpecialIndex n, int k, double x, const QuadratureSpec& q = {}) {
  q.validate();
  if (k < 0) throw DomainError("eval_g_derivative: order must be >= 0");
  if (!(std::abs(x) < 2.0)) throw DomainError("eval_g_derivative: requires |x| < 2");
  const double s = n.sign();
  return detail::g_family_integral(n.n + k, n.n, x, (k % 2 == 0 ? s : -s), s, q);
}

/// f_n(x) on (0, 2) by its defining integral
/// x^{n+1}/n! int y^n 2 sinh(y(1-x)) / (e^y + (-1)^{n+1} e^{-y}) dy.
inline Estimate eval_f_direct(SpecialIndex n, double x, const QuadratureSpec& q = {}) {
  q.validate();
  if (!(x > 0.0 && x < 2.0)) throw DomainError("eval_f: requires 0 < x < 2");
  const double b = n.sign();
  const double lnf = detail::log_factorial(n.n);
  auto integrand = [&](double y) {
    if (y <= 0.0) return 0.0;
    const double lead = n.n * std::log(y) - lnf;
    if (y <= 1.0) {
      const double den = b > 0 ? std::cosh(y) : std::sinh(y);
      return std::exp(lead) * std::sinh(y * (1.0 - x)) / den;
    }
    // (e^{-xy} - e^{(x-2)y}) / (1 + b e^{-2y})
    return (std::exp(lead - x * y) - std::exp(lead + (x - 2.0) * y)) / (1.0 + b * std::exp(-2.0 * y));
  };
  const double c = std::min(x, 2.0 - x);
  auto tail = [&](double y) { return 2.5 * detail::gamma_tail(n.n, c, y); };
  const double xp = std::pow(x, n.n + 1);
  const double target = q.abs_tol / q.truncation_margin / std::max(1.0, xp);
  const double cut = truncation_point(tail, 1.0, target, 1e9);
  std::vector<double> bp{0.0, 1.0};
  for (double y = 2.0; y < cut; y *= 2.0) bp.push_back(y);
  bp.push_back(cut);
  QuadratureSpec inner = q;
  inner.abs_tol = std::max(1e-14, q.abs_tol / std::max(1.0, xp));
  const auto r = integrate(integrand, std::span<const double>(bp), inner);
  require_converged(r, "f_n integral");
  return {xp * r.value, xp * (r.error + tail(cut))};
}

/// f_n(x) = 1 - x^{n+1} g_n(x). With `verify` the defining integral is also
/// evaluated and a disagreement beyond 10 abs_tol (relative to the size of
/// x^{n+1} g_n) raises QuadratureError.
inline Estimate eval_f(SpecialIndex n, double x, const QuadratureSpec& q = {}, bool verify = false) {
  if (!(x > 0.0 && x < 2.0)) throw DomainError("eval_f: requires 0 < x < 2");
  const Estimate g = eval_g(n, x, q);
  const double xp = std::pow(x, n.n + 1);
  const Estimate f{1.0 - xp * g.value, xp * g.error};
  if (verify) {
    const Estimate d = eval_f_direct(n, x, q);
    const double allowed = 10.0 * q.abs_tol * std::max(1.0, std::abs(xp * g.value)) + f.error + d.error;
    if (std::abs(d.value - f.value) > allowed) {
      throw QuadratureError("eval_f: identity and direct integral disagree", d.value,
                            std::abs(d.value - f.value));
    }
  }
  return f;
}

/// k_n(xi): g_n(2 pi xi)^2 for |xi| <= 1/(2 pi), (2 pi xi)^{-(2n+2)} beyond.
inline Estimate eval_k(SpecialIndex n, double xi, const QuadratureSpec& q = {}) {
  const double u = std::abs(2.0 * std::numbers::pi * xi);
  if (u <= 1.0) {
    const Estimate g = eval_g(n, u, q);
    return {g.value * g.value, 2.0 * std::abs(g.value) * g.error + g.error * g.error};
  }
  return {std::pow(u, -(2.0 * n.n + 2.0)), 0.0};
}

/// Generalized exponential integral E_m(z) = int_1^inf e^{-zt} t^{-m} dt,
/// m >= 1, z != 0 off the negative real axis. Series for |z| <= 1, Lentz
/// continued fraction otherwise.
inline complex expint_e(int m, complex z) {
  if (m < 1) throw DomainError("expint_e: m must be >= 1");
  if (z == complex(0.0, 0.0)) {
    if (m == 1) throw DomainError("expint_e: E_1(0) diverges");
    return 1.0 / (m - 1.0);
  }
  constexpr double eps = 1e-16;
  constexpr double euler = 0.57721566490153286061;
  const int nm1 = m - 1;
  if (std::abs(z) <= 1.0) {
    complex ans = nm1 != 0 ? complex(1.0 / nm1) : -std::log(z) - euler;
    complex fact = 1.0;
    for (int i = 1; i <= 400; ++i) {
      fact *= -z / static_cast<double>(i);
      complex del;
      if (i != nm1) {
        del = -fact / static_cast<double>(i - nm1);
      } else {
        double psi = -euler;
        for (int k = 1; k <= nm1; ++k) psi += 1.0 / k;
        del = fact * (-std::log(z) + psi);
      }
      ans += del;
      if (std::abs(del) < std::abs(ans) * eps) break;
    }
    return ans;
  }
  constexpr double tiny = 1e-300;
  complex b = z + static_cast<double>(m);
  complex c = 1.0 / tiny;
  complex d = 1.0 / b;
  complex h = d;
  for (int i = 1; i <= 100000; ++i) {
    const double an = -static_cast<double>(i) * (nm1 + i);
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const complex del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < eps) break;
  }
  return h * std::exp(-z);
}

/// Chebyshev interpolant of g_n on [0, 1]; used where many evaluations are needed.
class GnChebyshev {
 public:
  static constexpr int kNodes = 36;

  explicit GnChebyshev(SpecialIndex n, const QuadratureSpec& q = {}) : n_(n.n) {
    std::array<double, kNodes> values{};
    double node_error = 0.0;
    for (int j = 0; j < kNodes; ++j) {
      const double th = std::numbers::pi * (j + 0.5) / kNodes;
      const Estimate e = eval_g(n, 0.5 + 0.5 * std::cos(th), q);
      values[static_cast<std::size_t>(j)] = e.value;
      node_error = std::max(node_error, e.error);
    }
    for (int k = 0; k < kNodes; ++k) {
      double s = 0.0;
      for (int j = 0; j < kNodes; ++j) {
        s += values[static_cast<std::size_t>(j)] * std::cos(std::numbers::pi * k * (j + 0.5) / kNodes);
      }
      coef_[static_cast<std::size_t>(k)] = 2.0 * s / kNodes;
    }
    coef_[0] *= 0.5;
    // Interpolation error estimated from off-node checks.
    double worst = 0.0;
    for (double x : {0.0, 0.137, 0.5003, 0.861, 1.0}) {
      worst = std::max(worst, std::abs((*this)(x) - eval_g(n, x, q).value));
    }
    error_ = worst + node_error * 2.0;
  }

  int n() const noexcept { return n_; }

  double operator()(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("GnChebyshev: x must be in [0, 1]");
    const double t = 2.0 * x - 1.0;
    double b1 = 0.0;
    double b2 = 0.0;
    for (int k = kNodes - 1; k >= 1; --k) {
      const double b0 = 2.0 * t * b1 - b2 + coef_[static_cast<std::size_t>(k)];
      b2 = b1;
      b1 = b0;
    }
    return t * b1 - b2 + coef_[0];
  }

  /// Bound on |interpolant - g_n| on [0, 1].
  double error() const noexcept { return error_; }

 private:
  int n_;
  std::array<double, kNodes> coef_{};
  double error_ = 0.0;
};

/// Fourier transform of k_n, k_hat(y) = (1/pi)[int_0^1 g_n(u)^2 cos(uy) du
/// + Re E_{2n+2}(-iy)]. Below kAsymptotic the first integral uses a fixed
/// composite Gauss-Legendre rule; above it, the integration-by-parts
/// expansion with exact derivatives of g_n^2 at 0 and 1.
class KHat {
 public:
  static constexpr double kAsymptotic = 128.0;
  static constexpr int kPanels = 32;
  static constexpr int kTerms = 40;

  explicit KHat(SpecialIndex n, const QuadratureSpec& q = {}) : n_(n.n), m_(2 * n.n + 2) {
    const auto& rule = detail::gauss15();
    const double h = 1.0 / kPanels;
    double g_err = 0.0;
    for (int p = 0; p < kPanels; ++p) {
      const double c = (p + 0.5) * h;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double u = c + 0.5 * h * rule.nodes[i];
        const Estimate g = eval_g(n, u, q);
        g_err = std::max(g_err, g.error);
        nodes_.push_back(u);
        weights_.push_back(0.5 * h * rule.weights[i] * g.value * g.value);
      }
    }
    // Derivatives of h = g^2 at 0 and 1 by Leibniz from exact g^{(k)}.
    std::vector<double> d0(kTerms + 1);
    std::vector<double> d1(kTerms + 1);
    for (int k = 0; k <= kTerms; ++k) {
      d0[static_cast<std::size_t>(k)] = eval_g_derivative(n, k, 0.0, q).value;
      d1[static_cast<std::size_t>(k)] = eval_g_derivative(n, k, 1.0, q).value;
    }
    h0_.assign(kTerms + 1, 0.0);
    h1_.assign(kTerms + 1, 0.0);
    for (int k = 0; k <= kTerms; ++k) {
      double binom = 1.0;
      for (int i = 0; i <= k; ++i) {
        h0_[static_cast<std::size_t>(k)] += binom * d0[static_cast<std::size_t>(i)] * d0[static_cast<std::size_t>(k - i)];
        h1_[static_cast<std::size_t>(k)] += binom * d1[static_cast<std::size_t>(i)] * d1[static_cast<std::size_t>(k - i)];
        binom = binom * (k - i) / (i + 1);
      }
    }
    double g_max = 0.0;
    for (double w : weights_) g_max = std::max(g_max, w);
    // Rule error measured against a doubled rule at the top of its range.
    const double coarse = quadrature_part(kAsymptotic);
    const double fine = refined_part(n, kAsymptotic, q);
    error_ = (std::abs(coarse - fine) + 4.0 * g_err) / std::numbers::pi + 1e-15;
    // Leading 1/y^2 coefficient of the expansion, with a factor 2 margin.
    decay_ = 2.0 * (std::abs(h1_[1] + m_) + std::abs(h0_[1])) / std::numbers::pi;
  }

  int n() const noexcept { return n_; }

  double operator()(double y) const {
    y = std::abs(y);
    const double q = y == 0.0 ? 1.0 / (m_ - 1.0) : expint_e(m_, complex(0.0, -y)).real();
    const double p = y < kAsymptotic ? quadrature_part(y) : asymptotic_part(y);
    return (p + q) / std::numbers::pi;
  }

  /// Absolute error bound of operator().
  double error() const noexcept { return error_; }

  /// B with |k_hat(y)| <= B / y^2 for y >= kAsymptotic.
  double decay_constant() const noexcept { return decay_; }

 private:
  double quadrature_part(double y) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * std::cos(nodes_[i] * y);
    return s;
  }

  static double refined_part(SpecialIndex n, double y, const QuadratureSpec& q) {
    const auto& rule = detail::gauss15();
    const int panels = 2 * kPanels;
    const double h = 1.0 / panels;
    double s = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double c = (p + 0.5) * h;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double u = c + 0.5 * h * rule.nodes[i];
        const double g = eval_g(n, u, q).value;
        s += 0.5 * h * rule.weights[i] * g * g * std::cos(u * y);
      }
    }
    return s;
  }

  /// Re sum_k (-1)^k [e^{iy} h^{(k)}(1) - h^{(k)}(0)] / (iy)^{k+1}.
  double asymptotic_part(double y) const {
    const complex e(std::cos(y), std::sin(y));
    const complex iy(0.0, y);
    complex pw = 1.0 / iy;
    complex acc = 0.0;
    double sgn = 1.0;
    for (int k = 0; k <= kTerms; ++k) {
      acc += sgn * (e * h1_[static_cast<std::size_t>(k)] - h0_[static_cast<std::size_t>(k)]) * pw;
      pw /= iy;
      sgn = -sgn;
    }
    return acc.real();
  }

  int n_;
  int m_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> h0_;
  std::vector<double> h1_;
  double error_ = 0.0;
  double decay_ = 0.0;
};

/// k_hat_n(y) with an error bound.
inline Estimate eval_k_hat(SpecialIndex n, double y, const QuadratureSpec& q = {}) {
  if (!std::isfinite(y)) throw DomainError("eval_k_hat: y must be finite");
  const KHat kh(n, q);
  return {kh(y), kh.error()};
}

/// mu_n = 2^{-n-1}(1 - 2^{-n}) zeta(n+1) for odd n, 0 for even n.
inline double mu(SpecialIndex n) {
  if (!n.odd()) return 0.0;
  const double z = (n.n + 1) / 2 <= 20 ? zeta_even((n.n + 1) / 2) : zeta_real(n.n + 1.0);
  return std::ldexp(1.0, -n.n - 1) * (1.0 - std::ldexp(1.0, -n.n)) * z;
}

/// delta_n. Even n = 2k in closed form; odd n = 2k - 1 as
/// (-1)^{k-1}/pi int_{1/2}^inf log|zeta(s)| (s - 1/2)^{2k-2}/(2k-2)! ds.
inline Estimate delta(SpecialIndex n, const QuadratureSpec& q = {}) {
  q.validate();
  if (!n.odd()) {
    const int k = n.n / 2;
    double v = 1.0;
    for (int j = 1; j <= 2 * k; ++j) v /= j * 2.0;
    return {k % 2 == 1 ? v : -v, 0.0};
  }
  const int k = (n.n + 1) / 2;
  const int j = 2 * k - 2;
  const double lnj = detail::log_factorial(j);
  auto weight = [&](double s) { return j == 0 ? 1.0 : std::exp(j * std::log(s - 0.5) - lnj); };

  // [1/2, 2]: log((s-1) zeta(s)) is smooth; the log|s-1| part is exact.
  const std::array<double, 3> near{0.5, 1.0, 2.0};
  const auto smooth = integrate(
      [&](double s) { return weight(s) * std::log(zeta_pole_removed(s)); }, std::span<const double>(near), q);
  if (!smooth.converged) {
    throw QuadratureError("delta: quadrature failed on [1/2, 2] around s = 1", smooth.value, smooth.error);
  }
  // int_{-1/2}^{1} (v + 1/2)^j log|v| dv / j!
  auto ilog = [](double a, int i) {
    return std::pow(a, i + 1) * (std::log(a) / (i + 1) - 1.0 / ((i + 1.0) * (i + 1.0)));
  };
  double singular = 0.0;
  double binom = 1.0;
  for (int i = 0; i <= j; ++i) {
    const double part = ilog(1.0, i) + (i % 2 == 0 ? 1.0 : -1.0) * ilog(0.5, i);
    singular += binom * std::pow(0.5, j - i) * part;
    binom = binom * (j - i) / (i + 1);
  }
  singular /= std::exp(lnj);

  // [2, inf): log zeta(s) <= zeta(s) - 1 <= 2^{1-s} for s >= 3 (and 2^{1-s}(1/2 + 1/(s-1)) in general).
  auto tail = [&](double y) {
    // int_y^inf (s - 1/2)^j/j! 2^{1-s} ds
    const double c = std::numbers::ln2;
    return 2.0 * std::exp(-0.5 * c) * detail::gamma_tail(j, c, y - 0.5);
  };
  const double cut = truncation_point(tail, 3.0, q.abs_tol / q.truncation_margin, 1e6);
  std::vector<double> bp{2.0};
  for (double s = 4.0; s < cut; s *= 2.0) bp.push_back(s);
  bp.push_back(cut);
  const auto far = integrate(
      [&](double s) {
        const double z1 = zeta_complex(complex(s, 0.0)).real() - 1.0;
        return weight(s) * std::log1p(z1);
      },
      std::span<const double>(bp), q);
  require_converged(far, "delta: tail integral");

  const double total = smooth.value - singular + far.value;
  const double sign = (k - 1) % 2 == 0 ? 1.0 : -1.0;
  return {sign * total / std::numbers::pi,
          (smooth.error + far.error + tail(cut) + 1e-15 * std::abs(singular)) / std::numbers::pi};
}

/// A_n = int_0^1 a g_n(a)^2 da.
inline Estimate a_constant(SpecialIndex n, const QuadratureSpec& q = {}) {
  q.validate();
  double g_err = 0.0;
  QuadratureSpec inner = q;
  inner.abs_tol = std::max(1e-14, 0.1 * q.abs_tol);
  const auto r = integrate(
      [&](double a) {
        const Estimate g = eval_g(n, a, inner);
        g_err = std::max(g_err, g.error);
        return a * g.value * g.value;
      },
      0.0, 1.0, q);
  require_converged(r, "A_n");
  return {r.value, r.error + 2.0 * g_err};
}

/// max |f_n| over an even grid of `points` in (0, 1].
inline double sup_abs_f(SpecialIndex n, int points = 200, const QuadratureSpec& q = {}) {
  double best = 0.0;
  for (int i = 1; i <= points; ++i) {
    best = std::max(best, std::abs(eval_f(n, static_cast<double>(i) / points, q).value));
  }
  return best;
}

}  // namespace snm

#endif  // SNM_SPECIAL_HPP
