#include <cmath>
#include <numbers>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "qstep/quadrature.hpp"

using qstep::fit_line;
using qstep::gauss_legendre;
using qstep::panelled_rule;
using qstep::QuadratureRule;

namespace {

double integrate(const QuadratureRule& r, double (*f)(double)) {
  double s = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(r.x[i]);
  return s;
}

}  // namespace

TEST_CASE("gauss-legendre nodes match tabulated low orders", "[quadrature]") {
  const auto r2 = gauss_legendre(2);
  REQUIRE(r2.x.size() == 2);
  CHECK(r2.x[0] == Catch::Approx(-1.0 / std::sqrt(3.0)).margin(1e-15));
  CHECK(r2.x[1] == Catch::Approx(1.0 / std::sqrt(3.0)).margin(1e-15));
  CHECK(r2.w[0] == Catch::Approx(1.0).margin(1e-15));
  CHECK(r2.w[1] == Catch::Approx(1.0).margin(1e-15));

  const auto r3 = gauss_legendre(3);
  CHECK(r3.x[0] == Catch::Approx(-std::sqrt(0.6)).margin(1e-15));
  CHECK(r3.x[1] == 0.0);
  CHECK(r3.x[2] == Catch::Approx(std::sqrt(0.6)).margin(1e-15));
  CHECK(r3.w[0] == Catch::Approx(5.0 / 9.0).margin(1e-15));
  CHECK(r3.w[1] == Catch::Approx(8.0 / 9.0).margin(1e-15));

  CHECK_THROWS_AS(gauss_legendre(0), std::invalid_argument);
}

TEST_CASE("gauss-legendre structure: symmetry, order, weight sum",
          "[quadrature]") {
  for (int n : {2, 4, 8, 16, 32, 17}) {
    const auto r = gauss_legendre(n);
    REQUIRE(r.x.size() == static_cast<std::size_t>(n));
    double wsum = 0.0;
    for (int i = 0; i < n; ++i) {
      wsum += r.w[i];
      CHECK(r.x[i] == Catch::Approx(-r.x[n - 1 - i]).margin(1e-15));
      CHECK(r.w[i] == Catch::Approx(r.w[n - 1 - i]).margin(1e-15));
      if (i > 0) CHECK(r.x[i] > r.x[i - 1]);
      CHECK(r.w[i] > 0.0);
    }
    CHECK(wsum == Catch::Approx(2.0).margin(1e-13));
  }
}

TEST_CASE("16-point rule is exact through degree 31", "[quadrature]") {
  const auto r = gauss_legendre(16);
  for (int k = 0; k <= 31; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < r.x.size(); ++i)
      s += r.w[i] * std::pow(r.x[i], k);
    const double exact = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
    REQUIRE(std::abs(s - exact) < 1e-13);
  }
  const double e = integrate(r, [](double x) { return std::exp(x); });
  CHECK(e == Catch::Approx(std::exp(1.0) - std::exp(-1.0)).margin(1e-14));
}

TEST_CASE("panelled rule integrates a shifted gaussian to machine accuracy",
          "[quadrature]") {
  const double mu = 5.0, lo = 2.0, hi = 9.0;
  const auto rule = panelled_rule(lo, hi, 64);
  REQUIRE(rule.x.size() == 64);  // ceil(64/16) = 4 panels of 16

  double wsum = 0.0, integral = 0.0;
  for (std::size_t i = 0; i < rule.x.size(); ++i) {
    REQUIRE(rule.x[i] > lo);
    REQUIRE(rule.x[i] < hi);
    if (i > 0) REQUIRE(rule.x[i] > rule.x[i - 1]);
    wsum += rule.w[i];
    const double d = rule.x[i] - mu;
    integral +=
        rule.w[i] * std::exp(-d * d / 4.0) / (2.0 * std::sqrt(std::numbers::pi));
  }
  CHECK(wsum == Catch::Approx(hi - lo).margin(1e-12));
  // Analytic: (erf((hi-mu)/2) - erf((lo-mu)/2)) / 2.
  const double exact =
      0.5 * (std::erf((hi - mu) / 2.0) - std::erf((lo - mu) / 2.0));
  CHECK(integral == Catch::Approx(exact).margin(1e-13));
}

TEST_CASE("panelled rule rounds the budget up to whole panels", "[quadrature]") {
  CHECK(panelled_rule(0.0, 1.0, 1).x.size() == 16);
  CHECK(panelled_rule(0.0, 1.0, 16).x.size() == 16);
  CHECK(panelled_rule(0.0, 1.0, 17).x.size() == 32);
  CHECK(panelled_rule(0.0, 1.0, 170).x.size() == 176);
  CHECK_THROWS_AS(panelled_rule(1.0, 1.0, 8), std::invalid_argument);
}

TEST_CASE("quadrature construction is deterministic", "[quadrature]") {
  const auto a = panelled_rule(2.0, 9.0, 100);
  const auto b = panelled_rule(2.0, 9.0, 100);
  REQUIRE(a.x == b.x);
  REQUIRE(a.w == b.w);
  const auto g1 = gauss_legendre(16);
  const auto g2 = gauss_legendre(16);
  REQUIRE(g1.x == g2.x);
  REQUIRE(g1.w == g2.w);
}

TEST_CASE("line fit recovers exact lines and reports residuals", "[quadrature]") {
  const std::vector<double> x = {-1.0, 0.0, 2.0, 5.0};
  std::vector<double> y;
  for (double xi : x) y.push_back(3.0 * xi - 2.0);
  const auto f = fit_line(x, y);
  CHECK(f.slope == Catch::Approx(3.0).margin(1e-14));
  CHECK(f.intercept == Catch::Approx(-2.0).margin(1e-14));
  CHECK(f.rms_residual < 1e-14);

  // Symmetric vee: slope 0, intercept 1/3, rms sqrt(2)/3.
  const auto v = fit_line({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0});
  CHECK(v.slope == Catch::Approx(0.0).margin(1e-14));
  CHECK(v.intercept == Catch::Approx(1.0 / 3.0).margin(1e-14));
  CHECK(v.rms_residual == Catch::Approx(std::sqrt(2.0) / 3.0).margin(1e-14));

  CHECK_THROWS_AS(fit_line({1.0}, {2.0}), std::invalid_argument);
  CHECK_THROWS_AS(fit_line({1.0, 2.0}, {1.0, 2.0, 3.0}), std::invalid_argument);
  CHECK_THROWS_AS(fit_line({2.0, 2.0, 2.0}, {1.0, 2.0, 3.0}),
                  std::invalid_argument);
}
