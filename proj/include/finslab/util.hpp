#pragma once

namespace finslab {

// Kahan compensated summation; reduction order is the caller's contract.
class KahanSum {
 public:
  void add(double value) {
    double y = value - compensation_;
    double t = total_ + y;
    compensation_ = (t - total_) - y;
    total_ = t;
  }

  double total() const { return total_; }

 private:
  double total_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace finslab
