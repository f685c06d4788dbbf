#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "qstep/errors.hpp"
#include "qstep/packet.hpp"
#include "qstep/quadrature.hpp"

/*
 * Observables extracted from synthesized fields: pointwise density |Omega|^2,
 * refined density peaks, trapezoidal half-line masses, numeric reflection and
 * transmission probabilities, and straight-line peak-trajectory fits.
 */

namespace qstep {

inline std::vector<double> density(const PacketField& field) {
  std::vector<double> d(field.values.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = field.values[i].norm_sq();
  return d;
}

// Trapezoidal masses over x < 0 and x > 0; a segment straddling the origin is
// split with a linearly interpolated density at x = 0.
inline std::pair<double, double> half_line_masses(const std::vector<double>& x,
                                                  const std::vector<double>& d) {
  if (x.size() != d.size() || x.size() < 2)
    throw std::invalid_argument("half_line_masses: need >= 2 matching samples");
  double neg = 0.0, pos = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i], b = x[i + 1];
    const double area = 0.5 * (d[i] + d[i + 1]) * (b - a);
    if (b <= 0.0) {
      neg += area;
    } else if (a >= 0.0) {
      pos += area;
    } else {
      const double d0 = d[i] + (d[i + 1] - d[i]) * (0.0 - a) / (b - a);
      neg += 0.5 * (d[i] + d0) * (0.0 - a);
      pos += 0.5 * (d0 + d[i + 1]) * (b - 0.0);
    }
  }
  return {neg, pos};
}

struct PacketObservables {
  double tau = 0.0;
  double peak_x = 0.0;
  double peak_density = 0.0;
  double mass_neg = 0.0;  // trapezoidal integral of the density over x < 0
  double mass_pos = 0.0;
};

/*
 * Peak location by grid argmax plus three-point parabolic refinement on the
 * log-density (exact for gaussian packets). Falls back to the raw grid point
 * at the boundary or where the log-parabola degenerates.
 */
inline PacketObservables observe(const PacketField& field) {
  const std::vector<double> d = density(field);
  if (d.empty()) throw std::invalid_argument("observe: empty field");
  std::size_t k = 0;
  for (std::size_t i = 1; i < d.size(); ++i)
    if (d[i] > d[k]) k = i;

  PacketObservables obs;
  obs.tau = field.tau;
  obs.peak_x = field.grid[k];
  obs.peak_density = d[k];
  if (k > 0 && k + 1 < d.size() && d[k - 1] > 0.0 && d[k] > 0.0 &&
      d[k + 1] > 0.0) {
    const double ym = std::log(d[k - 1]), y0 = std::log(d[k]),
                 yp = std::log(d[k + 1]);
    const double denom = ym - 2.0 * y0 + yp;
    if (denom < 0.0) {
      const double h = 0.5 * (field.grid[k + 1] - field.grid[k - 1]);
      const double shift = 0.5 * (ym - yp) / denom;
      obs.peak_x = field.grid[k] + shift * h;
      obs.peak_density = std::exp(y0 - 0.125 * (ym - yp) * (ym - yp) / denom);
    }
  }
  if (d.size() >= 2) {
    const auto [neg, pos] = half_line_masses(field.grid, d);
    obs.mass_neg = neg;
    obs.mass_pos = pos;
  }
  return obs;
}

namespace detail {

// Density-weighted std of x; packets here are unimodal so this is a width.
inline double field_width(const std::vector<double>& x,
                          const std::vector<double>& d) {
  double m0 = 0.0, m1 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    m0 += d[i];
    m1 += d[i] * x[i];
  }
  if (m0 <= 0.0) throw DomainError("field has zero mass");
  const double mean = m1 / m0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    m2 += d[i] * (x[i] - mean) * (x[i] - mean);
  return std::sqrt(m2 / m0);
}

inline void check_cleared(const PacketObservables& obs, double width,
                          const char* name) {
  if (std::abs(obs.peak_x) <= 5.0 * width)
    throw DomainError(std::string("numeric_probabilities: ") + name +
                      " packet has not cleared the step (|peak| <= 5 widths)");
}

}  // namespace detail

struct NumericProbabilities {
  double p_ref;
  double p_tra;
};

/*
 * Half-line-integral probability ratios: the reflected and transmitted
 * packets at +tau0 against the incident packet at -tau0,
 *
 *   p_ref = Int_{x<0} |ref|^2 / Int_{x<0} |inc|^2,
 *   p_tra = Int_{x>0} |tra|^2 / Int_{x<0} |inc|^2.
 */
inline NumericProbabilities numeric_probabilities(const PacketField& inc,
                                                  const PacketField& ref,
                                                  const PacketField& tra) {
  if (inc.grid != ref.grid)
    throw std::invalid_argument("numeric_probabilities: incident/reflected grids differ");
  if (!(ref.tau > 0.0) || ref.tau != tra.tau || inc.tau != -ref.tau)
    throw std::invalid_argument(
        "numeric_probabilities: expected incident at -tau0, reflected and transmitted at +tau0 > 0");

  const std::vector<double> di = density(inc), dr = density(ref), dt = density(tra);
  const PacketObservables oi = observe(inc), orf = observe(ref), ot = observe(tra);
  detail::check_cleared(oi, detail::field_width(inc.grid, di), "incident");
  detail::check_cleared(orf, detail::field_width(ref.grid, dr), "reflected");
  detail::check_cleared(ot, detail::field_width(tra.grid, dt), "transmitted");

  const double denom = half_line_masses(inc.grid, di).first;
  if (!(denom > 0.0)) throw DomainError("numeric_probabilities: empty incident mass");
  return {half_line_masses(ref.grid, dr).first / denom,
          half_line_masses(tra.grid, dt).second / denom};
}

struct TrajectoryFit {
  double velocity;      // slope of peak_x(tau), a per tau
  double intercept;     // peak_x extrapolated to tau = 0
  double rms_residual;  // fit quality over the samples
};

inline TrajectoryFit peak_trajectory(const std::vector<PacketObservables>& obs) {
  if (obs.size() < 3)
    throw std::invalid_argument("peak_trajectory: need >= 3 tau samples");
  std::vector<double> taus, peaks;
  taus.reserve(obs.size());
  peaks.reserve(obs.size());
  for (const auto& o : obs) {
    taus.push_back(o.tau);
    peaks.push_back(o.peak_x);
  }
  const LineFit f = fit_line(taus, peaks);  // rejects all-equal tau
  return {f.slope, f.intercept, f.rms_residual};
}

inline TrajectoryFit peak_trajectory(const std::vector<PacketField>& fields) {
  std::vector<PacketObservables> obs;
  obs.reserve(fields.size());
  for (const auto& f : fields) obs.push_back(observe(f));
  return peak_trajectory(obs);
}

}  // namespace qstep
