#include <cmath>
#include <complex>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "qstep/metrics.hpp"
#include "qstep/packet.hpp"

using qstep::cplx;
using qstep::half_line_masses;
using qstep::make_uniform_grid;
using qstep::observe;
using qstep::PacketField;
using qstep::PacketObservables;
using qstep::Quaternion;

namespace {

// Hand-built field with z1 = sqrt(density), so |values|^2 is prescribed.
PacketField field_with_density(std::vector<double> grid,
                               double (*dens)(double), double tau) {
  PacketField f;
  f.tau = tau;
  f.grid = std::move(grid);
  f.values.reserve(f.grid.size());
  for (double x : f.grid)
    f.values.push_back(Quaternion(cplx(std::sqrt(dens(x)), 0.0), 0.0));
  return f;
}

double gauss_m15(double x) { return std::exp(-(x + 15.0) * (x + 15.0) / 0.98); }
double gauss_m18(double x) {
  return 0.04 * std::exp(-(x + 18.0) * (x + 18.0) / 0.98);
}
double gauss_p20(double x) {
  return 0.9 * std::exp(-(x - 20.0) * (x - 20.0) / 0.98);
}

}  // namespace

TEST_CASE("half-line masses split the straddling segment exactly", "[metrics]") {
  // d(x) = 1 + x on {-1, -0.25, 0.5, 1}: trapezoid is exact for a linear
  // density, including the interpolated split at x = 0.
  const std::vector<double> x = {-1.0, -0.25, 0.5, 1.0};
  const std::vector<double> d = {0.0, 0.75, 1.5, 2.0};
  const auto [neg, pos] = half_line_masses(x, d);
  CHECK(neg == Catch::Approx(0.5).margin(1e-15));
  CHECK(pos == Catch::Approx(1.5).margin(1e-15));

  // Grid point exactly at 0 belongs to the boundary of both sums.
  const auto [n2, p2] = half_line_masses({-1.0, 0.0, 1.0}, {1.0, 1.0, 1.0});
  CHECK(n2 == Catch::Approx(1.0).margin(1e-15));
  CHECK(p2 == Catch::Approx(1.0).margin(1e-15));

  CHECK_THROWS_AS(half_line_masses({0.0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(half_line_masses({0.0, 1.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("observe refines gaussian peaks to machine accuracy", "[metrics]") {
  // Log-parabolic refinement is exact for a sampled gaussian, even on a
  // coarse grid that misses the true peak.
  const auto grid = make_uniform_grid(-4.0, 4.0, 33);  // h = 0.25
  PacketField f;
  f.tau = 0.4;
  f.grid = grid;
  for (double x : grid) {
    const double amp = 0.8 * std::exp(-(x - 0.3) * (x - 0.3) / 0.72);
    f.values.push_back(Quaternion(cplx(amp, 0.0), 0.0));
  }
  const PacketObservables obs = observe(f);
  CHECK(obs.tau == 0.4);
  CHECK(obs.peak_x == Catch::Approx(0.3).margin(1e-12));
  CHECK(obs.peak_density == Catch::Approx(0.64).margin(1e-12));
  CHECK(obs.mass_neg > 0.0);
  CHECK(obs.mass_pos > obs.mass_neg);  // peak sits right of the origin
}

TEST_CASE("observe falls back to the raw argmax at boundaries and zeros",
          "[metrics]") {
  // Monotone density: argmax at the last grid point, no refinement possible.
  PacketField mono;
  mono.grid = {0.0, 1.0, 2.0};
  mono.values = {Quaternion(cplx(1.0, 0.0), 0.0),
                 Quaternion(cplx(2.0, 0.0), 0.0),
                 Quaternion(cplx(3.0, 0.0), 0.0)};
  const auto m = observe(mono);
  CHECK(m.peak_x == 2.0);
  CHECK(m.peak_density == 9.0);

  // All-zero field: defined, massless, no crash.
  PacketField zero;
  zero.grid = {-1.0, 0.0, 1.0};
  zero.values.assign(3, Quaternion{});
  const auto z = observe(zero);
  CHECK(z.peak_density == 0.0);
  CHECK(z.mass_neg == 0.0);
  CHECK(z.mass_pos == 0.0);
}

TEST_CASE("numeric probabilities ratio cleared half-line masses", "[metrics]") {
  const auto grid = make_uniform_grid(-30.0, 30.0, 1201);
  const PacketField inc = field_with_density(grid, gauss_m15, -0.2);
  const PacketField ref = field_with_density(grid, gauss_m18, 0.2);
  const PacketField tra = field_with_density(grid, gauss_p20, 0.2);

  const auto p = qstep::numeric_probabilities(inc, ref, tra);
  // Same gaussian shape everywhere, so the mass ratios are the amplitude
  // ratios up to trapezoid error on a smooth integrand.
  CHECK(p.p_ref == Catch::Approx(0.04).epsilon(1e-9));
  CHECK(p.p_tra == Catch::Approx(0.9).epsilon(1e-9));
}

TEST_CASE("numeric probabilities validate their inputs", "[metrics]") {
  const auto grid = make_uniform_grid(-30.0, 30.0, 601);
  const PacketField inc = field_with_density(grid, gauss_m15, -0.2);
  const PacketField ref = field_with_density(grid, gauss_m18, 0.2);
  const PacketField tra = field_with_density(grid, gauss_p20, 0.2);

  PacketField wrong_tau = ref;
  wrong_tau.tau = 0.3;
  CHECK_THROWS_AS(qstep::numeric_probabilities(inc, wrong_tau, tra),
                  std::invalid_argument);
  PacketField inc_tau = inc;
  inc_tau.tau = -0.3;
  CHECK_THROWS_AS(qstep::numeric_probabilities(inc_tau, ref, tra),
                  std::invalid_argument);
  PacketField other_grid = field_with_density(
      make_uniform_grid(-30.0, 30.0, 301), gauss_m18, 0.2);
  CHECK_THROWS_AS(qstep::numeric_probabilities(inc, other_grid, tra),
                  std::invalid_argument);

  // A packet still straddling the origin has not cleared the step.
  const PacketField stuck = field_with_density(
      grid, [](double x) { return std::exp(-x * x / 0.98); }, 0.2);
  CHECK_THROWS_AS(qstep::numeric_probabilities(inc, stuck, tra),
                  qstep::DomainError);
}

TEST_CASE("peak trajectory fits velocity and intercept", "[metrics]") {
  std::vector<PacketObservables> obs;
  for (double tau : {0.05, 0.10, 0.15, 0.20}) {
    PacketObservables o;
    o.tau = tau;
    o.peak_x = 5.0 - 3.0 * tau;
    obs.push_back(o);
  }
  const auto fit = qstep::peak_trajectory(obs);
  CHECK(fit.velocity == Catch::Approx(-3.0).margin(1e-12));
  CHECK(fit.intercept == Catch::Approx(5.0).margin(1e-12));
  CHECK(fit.rms_residual < 1e-12);

  obs.resize(2);
  CHECK_THROWS_AS(qstep::peak_trajectory(obs), std::invalid_argument);
}
