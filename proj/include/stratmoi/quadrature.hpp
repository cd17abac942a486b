#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>

namespace stratmoi {

// Neumaier-compensated accumulator. Keeps long quadrature sums at O(eps)
// error regardless of term count; the branch sweep differentiates nearly
// cancelling functional values, so the extra digits matter.
class CompensatedSum {
 public:
  void add(double term) {
    const double t = sum_ + term;
    if (std::abs(sum_) >= std::abs(term))
      comp_ += (sum_ - t) + term;
    else
      comp_ += (term - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Composite Simpson weights for n >= 2 uniform samples with spacing h.
// Even interval counts use plain Simpson; odd counts close with a 3/8 block.
Eigen::ArrayXd simpson_weights(int n, double h);

// Simpson integral of uniformly spaced samples.
double integrate_samples(const Eigen::ArrayXd& f, double h);

// Adaptive Gauss-Kronrod (G7, K15) quadrature; handles a > b by sign flip.
double adaptive_gauss_kronrod(const std::function<double(double)>& f, double a,
                              double b, double rel_tol, double abs_tol,
                              int max_depth = 28);

// Ordinary least squares y = slope * x + intercept.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LineFit fit_line(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y);

}  // namespace stratmoi
