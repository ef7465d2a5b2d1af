#pragma once

namespace windbool {

/// Running sum with a second-order error term (Neumaier's variant of Kahan
/// summation, built on the TwoSum error-free transformation). The result is a
/// deterministic function of the order of `add` calls.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    // TwoSum: exact rounding error of sum_ + x, independent of magnitudes.
    const double bp = t - sum_;
    const double err = (sum_ - (t - bp)) + (x - bp);
    sum_ = t;
    compensation_ += err;
  }

  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace windbool
