#pragma once

#include <cmath>
#include <complex>

#include "qstep/errors.hpp"
#include "qstep/packet.hpp"
#include "qstep/quaternion.hpp"
#include "qstep/step.hpp"

/*
 * Closed-form packet approximations, valid when the spectrum clears the
 * diffusion threshold (g(eps_min)/g(eps0) <= 1e-6) so the half-line spectral
 * integral extends to the full line.
 *
 * Everything evaluates through the single free-packet kernel
 *
 *   K(X, tau) = exp[ i (eps0 X - eps0^2 tau/2) - (i/2) arctan(2 tau) ]
 *               * exp[ -(X - eps0 tau)^2 / (1 + 2 i tau) ] / (1 + 4 tau^2)^{1/4}
 *
 * composed with an affine argument map and a constant quaternion prefactor:
 * the reflected packet is r(eps0) K(-x, tau); the transmitted packets follow
 * from the first-order expansion of sigma(eps) (slope eps0/sigma0) and
 * rho(eps) (slope eps0^3/rho0^3) about eps0.
 */

namespace qstep {

enum class ClosedFormKind { Incident, Reflected, Transmitted };

// Free gaussian packet, the exact full-line integral of g(eps) e^{i(eps X - eps^2 tau/2)}.
inline cplx incident_kernel(double eps0, double X, double tau) {
  const double spread = 1.0 + 4.0 * tau * tau;
  const cplx one_2it(1.0, 2.0 * tau);
  const double d = X - eps0 * tau;
  const cplx phase(0.0, eps0 * X - 0.5 * eps0 * eps0 * tau - 0.5 * std::atan(2.0 * tau));
  return std::exp(phase) * std::exp(-d * d / one_2it) / std::pow(spread, 0.25);
}

struct ClosedFormPacket {
  StepKind kind{};
  ClosedFormKind packet{};
  Quaternion prefactor;  // constant quaternion in front of the kernel
  double eps0 = 0.0;
  double arg_scale = 1.0;    // K is evaluated at X = arg_scale * x
  double phase_slope = 0.0;  // extra carrier factor e^{i phase_slope * x}
  bool spectrum_ok = true;   // g(eps_min)/g(eps0) <= 1e-6

  Quaternion eval(double x, double tau) const {
    const cplx k = incident_kernel(eps0, arg_scale * x, tau) *
                   std::exp(cplx(0.0, phase_slope * x));
    return right_mul(prefactor, k);
  }
};

inline ClosedFormPacket closed_form(StepKind kind, ClosedFormKind which,
                                    const Kinematics& kin,
                                    const SpectralParams& sp) {
  ClosedFormPacket cf;
  cf.kind = kind;
  cf.packet = which;
  cf.eps0 = sp.eps0;
  cf.spectrum_ok = sp.tail_ratio() <= 1e-6;
  switch (which) {
    case ClosedFormKind::Incident:
      cf.prefactor = Quaternion(1.0, 0.0);
      break;
    case ClosedFormKind::Reflected: {
      const cplx r = kind == StepKind::Complex
                         ? complex_coeffs(kin, kin.eps0).r
                         : quaternionic_coeffs(kin, kin.eps0).r;
      cf.prefactor = Quaternion(r, 0.0);
      cf.arg_scale = -1.0;
      break;
    }
    case ClosedFormKind::Transmitted:
      if (kind == StepKind::Complex) {
        const double s0 = kin.sigma0(), e0 = kin.eps0;
        cf.prefactor = Quaternion(complex_coeffs(kin, e0).t, 0.0);
        cf.arg_scale = e0 / s0;
        cf.phase_slope = (s0 * s0 - e0 * e0) / s0;
      } else {
        const double r0 = kin.rho0(), e0 = kin.eps0;
        const StepCoefficients c = quaternionic_coeffs(kin, e0);
        cf.prefactor = Quaternion(c.t, c.w * c.t);  // (1 + j w0) t
        cf.arg_scale = (e0 * e0 * e0) / (r0 * r0 * r0);
        cf.phase_slope =
            (r0 * r0 * r0 * r0 - e0 * e0 * e0 * e0) / (r0 * r0 * r0);
      }
      break;
  }
  return cf;
}

inline cplx incident_closed_form(const SpectralParams& sp, double x, double tau) {
  return incident_kernel(sp.eps0, x, tau);
}

inline cplx reflected_closed_form(StepKind kind, const Kinematics& kin,
                                  const SpectralParams& sp, double x, double tau) {
  return closed_form(kind, ClosedFormKind::Reflected, kin, sp).eval(x, tau).z1;
}

inline Quaternion transmitted_closed_form(StepKind kind, const Kinematics& kin,
                                          const SpectralParams& sp, double x,
                                          double tau) {
  return closed_form(kind, ClosedFormKind::Transmitted, kin, sp).eval(x, tau);
}

// Spreading-free |Omega| envelope A exp[-s^2 (x - v tau)^2], valid for tau << 1.
struct GaussianEnvelope {
  double amplitude = 0.0;
  double width_scale = 1.0;  // s: inverse packet width in 1/a
  double velocity = 0.0;     // v in a per tau

  double eval(double x, double tau) const {
    const double d = width_scale * (x - velocity * tau);
    return amplitude * std::exp(-d * d);
  }
};

struct EnvelopeSet {
  GaussianEnvelope incident, reflected, transmitted;
};

inline EnvelopeSet small_tau_envelopes(StepKind kind, const Kinematics& kin) {
  EnvelopeSet env;
  env.incident = {1.0, 1.0, kin.v_incident()};
  if (kind == StepKind::Complex) {
    const StepCoefficients c = complex_coeffs(kin, kin.eps0);
    env.reflected = {std::abs(c.r), 1.0, kin.v_reflected()};
    env.transmitted = {std::abs(c.t), kin.eps0 / kin.sigma0(),
                       kin.v_transmitted_complex()};
  } else {
    const StepCoefficients c = quaternionic_coeffs(kin, kin.eps0);
    const double s = kin.eps0 / kin.rho0();
    env.reflected = {std::abs(c.r), 1.0, kin.v_reflected()};
    env.transmitted = {std::sqrt(1.0 + std::norm(c.w)) * std::abs(c.t),
                       s * s * s, kin.v_transmitted_quaternionic()};
  }
  return env;
}

// Packet-level probabilities: the plane-wave ratios at the spectral center.
inline Probabilities probabilities(StepKind kind, const Kinematics& kin) {
  return planewave_probabilities(kind, kin, kin.eps0);
}

/*
 * Height W0 of the complex step whose transmitted-peak trajectory, in the
 * parameterization x_max/a = sqrt(E0/W0 - 1) * eps_min * tau (original
 * potential scale kept in the second factor), coincides with the quaternionic
 * trajectory:
 *
 *   sqrt(E0/W0 - 1) = [ (E0/V0)^2 - 1 ]^{3/4} * V0/E0.
 *
 * Both velocity expressions then reduce to (eps0^4 - eps_min^4)^{3/4}/eps0^2
 * identically. The fitted reflection probability is the complex-step value at
 * height W0: [ (sqrt(E0) - sqrt(E0 - W0)) / (sqrt(E0) + sqrt(E0 - W0)) ]^2.
 */
struct W0Fit {
  double w0_energy;       // W0, internal energy units
  double e0_over_w0;      // E0/W0
  double w0_over_v0;      // W0/V0
  double p_ref_fitted;    // complex reflection probability at step height W0
  double velocity_fitted; // sqrt(E0/W0 - 1) * eps_min, in a per tau
};

inline W0Fit fit_w0(const Kinematics& kin) {
  if (!(kin.eps_min > 0.0)) throw DomainError("fit_w0 requires V0 > 0");
  const double ratio = kin.e_over_v();
  const double e0_over_w0 =
      1.0 + std::pow(ratio * ratio - 1.0, 1.5) / (ratio * ratio);
  W0Fit fit;
  fit.e0_over_w0 = e0_over_w0;
  fit.w0_energy = kin.e0_energy() / e0_over_w0;
  fit.w0_over_v0 = ratio / e0_over_w0;
  const double s = std::sqrt(1.0 - 1.0 / e0_over_w0);  // sqrt(1 - W0/E0)
  fit.p_ref_fitted = ((1.0 - s) / (1.0 + s)) * ((1.0 - s) / (1.0 + s));
  fit.velocity_fitted = std::sqrt(e0_over_w0 - 1.0) * kin.eps_min;
  return fit;
}

}  // namespace qstep
