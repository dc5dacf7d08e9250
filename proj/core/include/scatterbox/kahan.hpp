#pragma once

namespace scatterbox {

/// Compensated (Kahan) accumulator; drop-in for a plain double sum.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double value) {
    const double y = value - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }

  double value() const { return sum; }
};

}  // namespace scatterbox
