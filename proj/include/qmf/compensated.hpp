#pragma once

#include <complex>

namespace qmf {

// Neumaier summation: sum_ + comp_ carries the exact running total up to O(eps^2).
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    // TwoSum error term without branching on magnitudes.
    const double bp = t - sum_;
    comp_ += (sum_ - (t - bp)) + (x - bp);
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  void merge(const CompensatedSum& o) {
    add(o.sum_);
    add(o.comp_);
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class CompensatedComplexSum {
 public:
  void add(std::complex<double> z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  CompensatedComplexSum& operator+=(std::complex<double> z) {
    add(z);
    return *this;
  }
  void merge(const CompensatedComplexSum& o) {
    re_.merge(o.re_);
    im_.merge(o.im_);
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

}  // namespace qmf
