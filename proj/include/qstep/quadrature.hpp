#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace qstep {

// Nodes and weights of a quadrature rule over some interval.
struct QuadratureRule {
  std::vector<double> x;
  std::vector<double> w;
};

// Gauss-Legendre rule on [-1, 1], nodes by Newton iteration on P_n.
// Exact for polynomials of degree 2n-1; nodes are symmetric about 0.
inline QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  QuadratureRule rule;
  rule.x.assign(n, 0.0);
  rule.w.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi-style initial guess, then Newton on P_n(x) = 0.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.x[i] = -x;  // ascending order: negative nodes first
    rule.w[i] = w;
    rule.x[n - 1 - i] = x;
    rule.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.x[half - 1] = 0.0;
  return rule;
}

// Composite rule over [lo, hi]: equal-width panels of `panel_order` points
// each, at least `min_nodes` nodes in total. Node order is ascending, so
// accumulation order is reproducible.
inline QuadratureRule panelled_rule(double lo, double hi, int min_nodes,
                                    int panel_order = 16) {
  if (!(hi > lo)) throw std::invalid_argument("panelled_rule: empty interval");
  if (min_nodes < 1) min_nodes = 1;
  const int panels = (min_nodes + panel_order - 1) / panel_order;
  const QuadratureRule base = gauss_legendre(panel_order);
  QuadratureRule rule;
  rule.x.reserve(static_cast<std::size_t>(panels) * panel_order);
  rule.w.reserve(static_cast<std::size_t>(panels) * panel_order);
  const double h = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double a = lo + p * h;
    const double mid = a + 0.5 * h;
    for (int k = 0; k < panel_order; ++k) {
      rule.x.push_back(mid + 0.5 * h * base.x[k]);
      rule.w.push_back(0.5 * h * base.w[k]);
    }
  }
  return rule;
}

// Least-squares line y = slope*x + intercept; returns RMS residual too.
struct LineFit {
  double slope;
  double intercept;
  double rms_residual;
};

inline LineFit fit_line(const std::vector<double>& x,
                        const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need >= 2 matching samples");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    ss += r * r;
  }
  f.rms_residual = std::sqrt(ss / n);
  return f;
}

}  // namespace qstep
