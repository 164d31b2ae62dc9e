#ifndef SNM_COMPENSATED_SUM_HPP
#define SNM_COMPENSATED_SUM_HPP

#include <cmath>

namespace snm {

/// Neumaier's variant of Kahan summation. The result depends only on the
/// order in which values are added, never on anything else.
class CompensatedSum {
 public:
  constexpr CompensatedSum() = default;
  constexpr explicit CompensatedSum(double initial) : sum_(initial) {}

  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      compensation_ += (sum_ - t) + v;
    } else {
      compensation_ += (v - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(double v) noexcept {
    add(v);
    return *this;
  }

  /// Folds another partial sum in (sum first, then its compensation).
  void merge(const CompensatedSum& other) noexcept {
    add(other.sum_);
    add(other.compensation_);
  }

  constexpr double value() const noexcept { return sum_ + compensation_; }
  constexpr double accumulator() const noexcept { return sum_; }
  constexpr double compensation() const noexcept { return compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace snm

#endif  // SNM_COMPENSATED_SUM_HPP
