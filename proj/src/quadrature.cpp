#include "stratmoi/quadrature.hpp"

#include <array>
#include <stdexcept>

namespace stratmoi {

Eigen::ArrayXd simpson_weights(int n, double h) {
  if (n < 2) throw std::invalid_argument("simpson_weights: need n >= 2 samples");
  Eigen::ArrayXd w = Eigen::ArrayXd::Zero(n);
  if (n == 2) {  // trapezoid fallback, one interval
    w[0] = w[1] = 0.5 * h;
    return w;
  }
  const int intervals = n - 1;
  int simpson_end = n;  // nodes 0 .. simpson_end-1 carry plain Simpson
  if (intervals % 2 != 0) {
    if (n == 4) {
      // pure 3/8 rule
      w[0] = w[3] = 3.0 * h / 8.0;
      w[1] = w[2] = 9.0 * h / 8.0;
      return w;
    }
    simpson_end = n - 3;  // leave the last three intervals for the 3/8 block
  }
  w[0] += h / 3.0;
  w[simpson_end - 1] += h / 3.0;
  for (int i = 1; i < simpson_end - 1; ++i)
    w[i] += (i % 2 == 1 ? 4.0 : 2.0) * h / 3.0;
  if (simpson_end < n) {
    w[n - 4] += 3.0 * h / 8.0;
    w[n - 3] += 9.0 * h / 8.0;
    w[n - 2] += 9.0 * h / 8.0;
    w[n - 1] += 3.0 * h / 8.0;
  }
  return w;
}

double integrate_samples(const Eigen::ArrayXd& f, double h) {
  const Eigen::ArrayXd w = simpson_weights(static_cast<int>(f.size()), h);
  CompensatedSum s;
  for (Eigen::Index i = 0; i < f.size(); ++i) s.add(w[i] * f[i]);
  return s.value();
}

namespace {

// Kronrod-15 abscissae/weights on [-1, 1]; Gauss-7 nodes sit at the odd
// Kronrod indices.
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct PanelResult {
  double kronrod;
  double error;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double fk = 0.0, fg = 0.0;
  for (int i = 0; i < 8; ++i) {
    double contrib;
    if (i == 7) {
      contrib = f(mid);
    } else {
      contrib = f(mid - half * kKronrodNodes[i]) + f(mid + half * kKronrodNodes[i]);
    }
    fk += kKronrodWeights[i] * contrib;
    // odd Kronrod indices (and the centre) form the embedded Gauss-7 set
    if (i % 2 == 1 || i == 7) fg += kGaussWeights[i / 2] * contrib;
  }
  const double kronrod = fk * half;
  const double gauss = fg * half;
  return {kronrod, std::abs(kronrod - gauss)};
}

double adaptive_panel(const std::function<double(double)>& f, double a, double b,
                      double rel_tol, double abs_tol, int depth) {
  const PanelResult p = gk15(f, a, b);
  if (depth <= 0 || p.error <= std::max(abs_tol, rel_tol * std::abs(p.kronrod)))
    return p.kronrod;
  const double mid = 0.5 * (a + b);
  return adaptive_panel(f, a, mid, rel_tol, 0.5 * abs_tol, depth - 1) +
         adaptive_panel(f, mid, b, rel_tol, 0.5 * abs_tol, depth - 1);
}

}  // namespace

double adaptive_gauss_kronrod(const std::function<double(double)>& f, double a,
                              double b, double rel_tol, double abs_tol,
                              int max_depth) {
  if (a == b) return 0.0;
  if (a > b) return -adaptive_gauss_kronrod(f, b, a, rel_tol, abs_tol, max_depth);
  return adaptive_panel(f, a, b, rel_tol, abs_tol, max_depth);
}

LineFit fit_line(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need >= 2 matching samples");
  const double mx = x.mean();
  const double my = y.mean();
  const double sxx = ((x - mx) * (x - mx)).sum();
  if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
  const double sxy = ((x - mx) * (y - my)).sum();
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

}  // namespace stratmoi
