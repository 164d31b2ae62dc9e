#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "snm/moments.hpp"
#include "support.hpp"

namespace {

constexpr double pi = std::numbers::pi;
using boost::math::quadrature::gauss_kronrod;

const snm::ZeroList& zeros1000() {
  static const auto z = snm::testing::cached_zeros(1000.0);
  return z;
}

const snm::SnEvaluator& eval3() {
  static const snm::SnEvaluator e(zeros1000(), 3);
  return e;
}

/// int_0^t (t - v)^k/k! (theta(v)/pi + 1) dv by Gauss-Kronrod on unit pieces.
double smooth_part(double t, int k) {
  double s = 0.0;
  for (double a = 0.0; a < t; a += 1.0) {
    const double b = std::min(t, a + 1.0);
    s += gauss_kronrod<double, 31>::integrate(
        [&](double v) { return std::pow(t - v, k) / std::tgamma(k + 1.0) * (snm::rs_theta(v).theta / pi + 1.0); },
        a, b, 5, 1e-14);
  }
  return s;
}

TEST(Sn, OrderZeroMatchesArgument) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(20.0, 990.0);
  for (int i = 0; i < 20; ++i) {
    const double t = u(rng);
    EXPECT_NEAR(snm::s_n(0, t, eval3()), snm::argument_s(t), 1e-8) << t;
  }
}

TEST(Sn, StartsAtDelta) {
  EXPECT_DOUBLE_EQ(snm::s_n(1, 0.0, eval3()), snm::delta(1).value);
  EXPECT_DOUBLE_EQ(snm::s_n(2, 0.0, eval3()), 0.125);
}

TEST(Sn, FirstAndSecondAgainstZeroSums) {
  // S_1(t) = delta_1 + sum (t - gamma) - int_0^t (theta/pi + 1)
  // S_2(t) = delta_2 + delta_1 t + sum (t - gamma)^2/2 - int_0^t (t - v)(theta/pi + 1)
  const double d1 = snm::delta(1).value;
  for (double t : {10.0, 57.3, 300.0, 812.25}) {
    double s1 = 0.0, s2 = 0.0;
    for (double g : zeros1000().ordinates) {
      if (g > t) break;
      s1 += t - g;
      s2 += 0.5 * (t - g) * (t - g);
    }
    EXPECT_NEAR(snm::s_n(1, t, eval3()), d1 + s1 - smooth_part(t, 0), 1e-9 * std::max(1.0, t)) << t;
    EXPECT_NEAR(snm::s_n(2, t, eval3()), 0.125 + d1 * t + s2 - smooth_part(t, 1), 1e-9 * t * t) << t;
  }
}

TEST(Sn, DerivativeIsPreviousOrder) {
  for (double t : {50.0, 222.2, 700.7}) {
    const double h = 1e-4;
    for (int n = 1; n <= 3; ++n) {
      const double fd = (snm::s_n(n, t + h, eval3()) - snm::s_n(n, t - h, eval3())) / (2 * h);
      EXPECT_NEAR(fd, snm::s_n(n - 1, t, eval3()), 1e-6) << n << " " << t;
    }
  }
}

TEST(Sn, ContinuousAcrossOrdinates) {
  const double g = zeros1000().ordinates[100];
  EXPECT_NEAR(snm::s_n(1, g - 1e-9, eval3()), snm::s_n(1, g + 1e-9, eval3()), 1e-8);
  EXPECT_NEAR(snm::s_n(0, g + 1e-9, eval3()) - snm::s_n(0, g - 1e-9, eval3()), 1.0, 1e-6);
}

TEST(Sn, RejectsOutsideHorizon) {
  EXPECT_THROW(snm::s_n(1, 1001.0, eval3()), snm::PreconditionError);
  EXPECT_THROW(snm::s_n(4, 10.0, eval3()), snm::DomainError);
}

TEST(SecondMoment, AgainstPlainQuadrature) {
  const double T = 300.0;
  double ref = 0.0;
  const auto& bp = eval3().breakpoints();
  for (std::size_t i = 0; i + 1 < bp.size() && bp[i] < T; ++i) {
    const double b = std::min(T, bp[i + 1]);
    ref += gauss_kronrod<double, 31>::integrate(
        [&](double t) {
          const double s = snm::s_n(1, t, eval3());
          return s * s;
        },
        bp[i], b, 3, 1e-13);
  }
  const auto e = snm::second_moment(1, T, eval3());
  EXPECT_NEAR(e.value, ref, 1e-9 * ref);
}

TEST(PairCorrelation, SpectralMatchesDirect) {
  const double T = 560.0;  // about 300 ordinates
  for (double a : {0.0, 0.3, 0.9, 1.7}) {
    const auto d = snm::f_alpha(a, T, zeros1000());
    const auto s = snm::f_alpha_spectral(a, T, zeros1000());
    EXPECT_GT(d.zero_count, 280u);
    EXPECT_NEAR(d.value, s.value, 1e-9 * std::max(1.0, d.value)) << a;
  }
}

TEST(PairCorrelation, EvenAndNonNegative) {
  for (double a = 0.0; a <= 3.0; a += 0.25) {
    const double v = snm::f_alpha(a, 1000.0, zeros1000()).value;
    EXPECT_GE(v, -1e-12);
    EXPECT_NEAR(v, snm::f_alpha(-a, 1000.0, zeros1000()).value, 1e-12);
  }
}

TEST(PairCorrelation, WeightFunction) {
  EXPECT_EQ(snm::pair_weight(0.0), 1.0);
  EXPECT_DOUBLE_EQ(snm::pair_weight(2.0), 0.5);
}

TEST(PairCorrelation, CosPowerIntegral) {
  for (int m : {4, 6}) {
    for (double y : {0.0, 3.0, 150.0, 250.0, 4000.0}) {
      const double A = 8.0;
      double ref = 0.0;
      const int pieces = 64 + static_cast<int>(y * A / 2.0);
      const double h = (A - 1.0) / pieces;
      for (int k = 0; k < pieces; ++k) {
        ref += gauss_kronrod<double, 21>::integrate(
            [&](double a) { return std::cos(a * y) * std::pow(a, -m); }, 1.0 + k * h, 1.0 + (k + 1) * h, 0);
      }
      EXPECT_NEAR(snm::detail::cos_power_integral(m, y, A), ref, 1e-12) << m << " " << y;
    }
  }
}

TEST(PairCorrelation, FIntegralAgainstQuadratureOfF) {
  const double T = 300.0;
  const double ref = gauss_kronrod<double, 61>::integrate(
      [&](double a) { return snm::f_alpha(a, T, zeros1000()).value * std::pow(a, -4); }, 1.0, 8.0, 12, 1e-12);
  const auto r = snm::f_integral(1, T, 8.0, zeros1000());
  EXPECT_NEAR(r.value, ref, 1e-8);
  EXPECT_NEAR(r.tail_bound, snm::f_alpha(0.0, T, zeros1000()).value / (3.0 * 512.0), 1e-15);
}

TEST(PairSum, SmallCaseByBruteForce) {
  const snm::KHat kh(1);
  const double T = 100.0, x = 50.0;
  const auto& g = zeros1000().ordinates;
  const double lx = std::log(x);
  double brute = 0.0;
  for (double a : g) {
    if (a > T) break;
    for (double b : g) {
      if (b > T) break;
      brute += kh((a - b) * lx);
    }
  }
  brute /= std::pow(lx, 3);
  const auto r = snm::rn_pair_sum(1, x, T, zeros1000(), kh);
  EXPECT_NEAR(r.value, brute, r.truncation_bound + 1e-12);
  EXPECT_NEAR(r.diagonal, 29.0 * kh(0.0) / std::pow(lx, 3), 1e-14);
}

/// (1/pi^2) int_1^T (sum a_m sin(phi - t l_m))^2 dt in closed form.
double exact_dirichlet_square(int n, double T, const std::vector<snm::DirichletTerm>& terms) {
  const double phi = n * pi / 2.0;
  long double s = 0;
  for (const auto& p : terms) {
    for (const auto& q : terms) {
      const double d = q.log_m - p.log_m;
      const double sum = p.log_m + q.log_m;
      // sin A sin B = (cos(A - B) - cos(A + B))/2, A - B = t d, A + B = 2 phi - t sum
      const double c1 = d == 0.0 ? T - 1.0 : (std::sin(d * T) - std::sin(d)) / d;
      const double c2 = -(std::sin(2 * phi - sum * T) - std::sin(2 * phi - sum)) / sum;
      s += 0.5L * p.coefficient * q.coefficient * (c1 - c2);
    }
  }
  return static_cast<double>(s) / (pi * pi);
}

TEST(Dirichlet, GnQuadratureMatchesClosedForm) {
  const auto table = snm::sieve(1000);
  for (int n : {1, 2}) {
    const auto c = snm::gn_check(n, 60.0, 150.0, table);
    const double exact = exact_dirichlet_square(n, 150.0, snm::dirichlet_terms(n, 60.0, table));
    EXPECT_NEAR(c.numeric, exact, 1e-9 * exact) << n;
    // The diagonal dominates for T much larger than the spacing of log m.
    const auto big = snm::gn_check(n, 30.0, 3000.0, table);
    EXPECT_NEAR(big.numeric / big.formula, 1.0, 0.05) << n;
  }
}

TEST(Dirichlet, HnMainTerm) {
  const auto table = snm::sieve(1000);
  const auto c = snm::hn_check(1, 30.0, 1000.0, eval3(), table);
  EXPECT_GT(c.formula, 0.0);
  EXPECT_NEAR(c.numeric / c.formula, 1.0, 0.25);
}

TEST(Cancellation, CompletingSquareForArbitraryInputs) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> w(0.0, 5.0), f(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> ws(500), fs(500);
    for (int i = 0; i < 500; ++i) {
      ws[i] = w(rng);
      fs[i] = f(rng);
    }
    const auto id = snm::completing_square(1234.5, ws, fs);
    EXPECT_NEAR(id.h_minus_g, id.combined, 1e-13 * std::max(1.0, std::abs(id.combined)));
  }
}

TEST(Cancellation, SquareOfOneMinusF) {
  const auto table = snm::sieve(20000);
  for (int n : {1, 2}) {
    const auto terms = snm::dirichlet_terms(n, 20000.0, table);
    std::vector<double> g;
    const double lx = std::log(20000.0);
    for (const auto& d : terms) g.push_back(snm::eval_g(n, d.log_m / lx).value);
    const auto both = snm::square_cancellation(n, 20000.0, 500.0, terms, g);
    EXPECT_NEAR(both[0], both[1], 1e-13 * both[1]) << n;
  }
}

TEST(Cancellation, GSquaredPrimeSumTracksA) {
  const auto table = snm::testing::cached_table(1'000'000);
  for (int n : {1, 2}) {
    const snm::GnChebyshev g(n);
    const double ratio = snm::g2_prime_sum(1e6, table, g) / std::pow(std::log(1e6), 2);
    EXPECT_NEAR(ratio / snm::a_constant(n).value, 1.0, 0.15) << n;
  }
}

TEST(Representation, ResidualWithinAllowance) {
  const auto table = snm::sieve(1000);
  const auto r = snm::representation_residual(1, 100.0, 1000.0, 50.0, eval3(), table);
  EXPECT_GT(r.window_zeros, 20u);
  EXPECT_LT(r.residual, r.truncation_allowance + 0.02 * r.error_scale);
  EXPECT_NEAR(r.mu_term, snm::mu(1) * std::log(100.0 / (2 * pi)) / (pi * std::pow(std::log(1000.0), 2)), 1e-15);
}

TEST(Report, FieldsAreConsistent) {
  const snm::SnEvaluator e(zeros1000(), 1);
  const auto r = snm::moment_report(1, 1000.0, e, 1.5651249, 8.0);
  EXPECT_NEAR(r.prediction_main, 1.5651249 * 1000.0 / (2 * pi * pi), 1e-9);
  EXPECT_NEAR(r.relative_gap, std::abs(r.empirical - r.prediction_main) / r.prediction_main, 1e-15);
  EXPECT_NEAR(r.prediction_full, snm::theorem_prediction(1, 1000.0, r.f_int_measured, 1.5651249), 1e-9);
}

}  // namespace
