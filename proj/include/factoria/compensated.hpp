#pragma once

namespace factoria {

// Double-double accumulator (error-free TwoSum), ~32 significant digits.
class CompensatedSum {
 public:
  void add(double x) {
    double s = hi_ + x;
    double bp = s - hi_;
    double err = (hi_ - (s - bp)) + (x - bp);
    hi_ = s;
    lo_ += err;
  }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return hi_ + lo_; }
  long double value_ld() const { return static_cast<long double>(hi_) + lo_; }

 private:
  double hi_ = 0.0;
  double lo_ = 0.0;
};

}  // namespace factoria
