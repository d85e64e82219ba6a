#pragma once

#include <cmath>
#include <complex>

namespace periodvar {

/// Neumaier-compensated sum of complex terms.
class CompensatedSum {
 public:
  void add(std::complex<double> z) {
    add_part(re_, cre_, z.real());
    add_part(im_, cim_, z.imag());
  }
  CompensatedSum& operator+=(std::complex<double> z) {
    add(z);
    return *this;
  }
  std::complex<double> value() const { return {re_ + cre_, im_ + cim_}; }

 private:
  static void add_part(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double re_ = 0.0, im_ = 0.0, cre_ = 0.0, cim_ = 0.0;
};

}  // namespace periodvar
