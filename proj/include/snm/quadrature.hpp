#ifndef SNM_QUADRATURE_HPP
#define SNM_QUADRATURE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "snm/compensated_sum.hpp"
#include "snm/errors.hpp"

namespace snm {

/// Tolerances and truncation policy shared by every quadrature in the library.
struct QuadratureSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_subdivisions = 4000;
  /// Semi-infinite ranges are cut where the analytic tail bound drops below
  /// abs_tol / truncation_margin.
  double truncation_margin = 10.0;

  void validate() const {
    if (!(abs_tol >= 1e-14) || !(rel_tol >= 1e-14)) {
      throw DomainError("quadrature tolerances must be >= 1e-14");
    }
    if (max_subdivisions <= 0) throw DomainError("max_subdivisions must be positive");
    if (!(truncation_margin > 0.0)) throw DomainError("truncation_margin must be positive");
  }
};

/// A value with an absolute error bound.
struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
  bool converged = true;

  Estimate estimate() const { return {value, error}; }
};

namespace detail {

struct GaussRule {
  std::array<double, 15> nodes{};
  std::array<double, 15> weights{};
};

/// 15-point Gauss-Legendre on [-1, 1], nodes found by Newton iteration on P_15.
inline const GaussRule& gauss15() {
  static const GaussRule rule = [] {
    GaussRule r;
    constexpr int n = 15;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      r.nodes[static_cast<std::size_t>(i)] = x;
      r.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
  }();
  return rule;
}

template <class F>
double gauss_panel(F& f, double a, double b) {
  const auto& r = gauss15();
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(c + h * r.nodes[i]);
  return s * h;
}

struct Panel {
  double a;
  double b;
  double left;   // rule on [a, mid]
  double right;  // rule on [mid, b]
  double error;  // |rule on [a, b] - (left + right)|
  std::size_t order;
};

struct WorstFirst {
  bool operator()(const Panel& x, const Panel& y) const {
    if (x.error != y.error) return x.error < y.error;
    return x.order > y.order;
  }
};

}  // namespace detail

/// Adaptive bisection with a 15-point Gauss-Legendre panel; the error of a
/// panel is estimated by comparing it with its two halves. `breakpoints`
/// must be increasing and holds at least two entries (the end points).
template <class F>
QuadResult integrate(F&& f, std::span<const double> breakpoints, const QuadratureSpec& q) {
  q.validate();
  if (breakpoints.size() < 2) throw DomainError("integrate: need at least two breakpoints");
  std::priority_queue<detail::Panel, std::vector<detail::Panel>, detail::WorstFirst> heap;
  std::size_t order = 0;
  auto make = [&](double a, double b, double whole) {
    const double m = 0.5 * (a + b);
    const double l = detail::gauss_panel(f, a, m);
    const double r = detail::gauss_panel(f, m, b);
    return detail::Panel{a, b, l, r, std::abs(whole - (l + r)), order++};
  };
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double a = breakpoints[i];
    const double b = breakpoints[i + 1];
    if (!(b > a)) {
      if (b == a) continue;
      throw DomainError("integrate: breakpoints must be increasing");
    }
    heap.push(make(a, b, detail::gauss_panel(f, a, b)));
  }
  auto totals = [&] {
    std::vector<detail::Panel> all;
    auto copy = heap;
    while (!copy.empty()) {
      all.push_back(copy.top());
      copy.pop();
    }
    std::sort(all.begin(), all.end(),
              [](const detail::Panel& x, const detail::Panel& y) { return x.a < y.a; });
    CompensatedSum v;
    CompensatedSum e;
    for (const auto& p : all) {
      v.add(p.left);
      v.add(p.right);
      e.add(p.error);
    }
    return std::array<double, 2>{v.value(), e.value()};
  };

  auto initial = totals();
  double value = initial[0];
  double error = initial[1];
  int subdivisions = 0;
  double running_error = error;
  while (!heap.empty()) {
    const double tol = std::max(q.abs_tol, q.rel_tol * std::abs(value));
    if (running_error <= tol) {
      auto t = totals();
      value = t[0];
      error = t[1];
      if (error <= tol) break;
      running_error = error;
    }
    if (subdivisions >= q.max_subdivisions) break;
    detail::Panel worst = heap.top();
    const double m = 0.5 * (worst.a + worst.b);
    if (!(m > worst.a && m < worst.b) || worst.error == 0.0) break;
    heap.pop();
    const detail::Panel lp = make(worst.a, m, worst.left);
    const detail::Panel rp = make(m, worst.b, worst.right);
    running_error += lp.error + rp.error - worst.error;
    value += (lp.left + lp.right + rp.left + rp.right) - (worst.left + worst.right);
    heap.push(lp);
    heap.push(rp);
    ++subdivisions;
  }
  const auto t = totals();
  QuadResult res;
  res.value = t[0];
  res.error = t[1];
  res.subdivisions = subdivisions;
  res.converged = res.error <= std::max(q.abs_tol, q.rel_tol * std::abs(res.value));
  return res;
}

template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadratureSpec& q) {
  const std::array<double, 2> ends{a, b};
  return integrate(f, std::span<const double>(ends), q);
}

/// Throws QuadratureError unless `r` met its tolerance.
inline const QuadResult& require_converged(const QuadResult& r, const std::string& what) {
  if (!r.converged) throw QuadratureError(what + ": quadrature did not converge", r.value, r.error);
  return r;
}

/// Smallest cut Y = start + 2^k (k >= 0) at which tail_bound(Y) <= target.
template <class Bound>
double truncation_point(Bound&& tail_bound, double start, double target, double max_cut = 1e7) {
  double step = 1.0;
  double y = start + step;
  while (tail_bound(y) > target) {
    step *= 2.0;
    y = start + step;
    if (y > max_cut) throw DomainError("truncation point beyond " + std::to_string(max_cut));
  }
  return y;
}

}  // namespace snm

#endif  // SNM_QUADRATURE_HPP
