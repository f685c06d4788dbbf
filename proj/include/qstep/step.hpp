#pragma once

#include <cmath>
#include <complex>

#include "qstep/errors.hpp"
#include "qstep/quaternion.hpp"

/*
 * Stationary scattering at a one-dimensional potential step, internal units
 * hbar = m = a = 1 (a is the incident packet width used as length unit).
 *
 * The time-independent equation, with the energy phase multiplying from the
 * right, reads
 *
 *     (i/2) psi'' - (i V1 + j V2 + k V3) psi + psi E i = 0,
 *
 * with the step potential supported on x >= 0. Two canonical step cases are
 * solved in closed form for diffusion energies E > V0:
 *
 *   complex step       i V0:  wavenumbers  eps = sqrt(2E), sigma = sqrt(2(E-V0))
 *   quaternionic step  j V0:  rho = (eps^4 - eps_min^4)^{1/4},
 *                             w = -i V0 / (E + sqrt(E^2 - V0^2))
 *
 * where eps_min = sqrt(2 V0) is the diffusion threshold wavenumber. A general
 * potential direction (V1, V2, V3) reduces to a canonical one by the global
 * phase rotation implemented in canonicalize().
 */

namespace qstep {

enum class StepKind { Complex, Quaternionic };
enum class Region { I, II };  // x < 0 and x >= 0

struct PotentialSpec {
  double v1 = 0.0;  // coefficient of i, >= 0
  double v2 = 0.0;  // coefficient of j
  double v3 = 0.0;  // coefficient of k

  double v_perp() const { return std::hypot(v2, v3); }
  double theta() const {
    return (v2 == 0.0 && v3 == 0.0) ? 0.0 : std::atan2(v3, v2);
  }
  double magnitude() const { return std::sqrt(v1 * v1 + v2 * v2 + v3 * v3); }
};

struct CanonicalPotential {
  PotentialSpec canonical;  // (v1, v_perp, 0)
  double alpha;             // phi = e^{i alpha} psi solves the canonical form
};

// j V2 + k V3 = j * v_perp * e^{-i theta}; substituting psi = e^{i theta/2} phi
// cancels the phase, so phi solves the pure-j form and alpha = -theta/2.
inline CanonicalPotential canonicalize(const PotentialSpec& v) {
  if (v.v1 < 0.0) throw DomainError("potential v1 must be >= 0");
  return {PotentialSpec{v.v1, v.v_perp(), 0.0}, -0.5 * v.theta()};
}

// Scenario-level kinematics: incident spectral center eps0 and threshold
// eps_min, both in units of 1/a.
struct Kinematics {
  double eps0;
  double eps_min;

  Kinematics(double eps0_, double eps_min_) : eps0(eps0_), eps_min(eps_min_) {
    if (!(eps_min >= 0.0)) throw DomainError("eps_min must be >= 0");
    if (!(eps0 > eps_min))
      throw DomainError("diffusion regime requires eps0 > eps_min (E0 > V0)");
  }

  // E0 = e0_over_v0 * V0 with a*sqrt(2m V0)/hbar = av0.
  static Kinematics from_ratio(double e0_over_v0, double av0) {
    if (!(av0 > 0.0)) throw DomainError("av0 must be > 0");
    if (!(e0_over_v0 > 1.0))
      throw DomainError("diffusion regime requires e0_over_v0 > 1");
    return Kinematics(av0 * std::sqrt(e0_over_v0), av0);
  }

  double v0_energy() const { return 0.5 * eps_min * eps_min; }
  double e0_energy() const { return 0.5 * eps0 * eps0; }
  double e_over_v() const {
    return (eps0 / eps_min) * (eps0 / eps_min);  // inf when eps_min = 0
  }

  double sigma_of(double eps) const {
    check_diffusion(eps);
    return std::sqrt(eps * eps - eps_min * eps_min);
  }
  double rho_of(double eps) const {
    check_diffusion(eps);
    const double e2 = eps * eps, m2 = eps_min * eps_min;
    return std::sqrt(std::sqrt((e2 - m2) * (e2 + m2)));
  }
  cplx w_of(double eps) const {
    const double rho = rho_of(eps);
    return cplx(0.0, -eps_min * eps_min / (eps * eps + rho * rho));
  }

  double sigma0() const { return sigma_of(eps0); }
  double rho0() const { return rho_of(eps0); }
  cplx w0() const { return w_of(eps0); }

  // Group velocities in a per tau, tau = hbar t/(m a^2).
  double v_incident() const { return eps0; }
  double v_reflected() const { return -eps0; }
  double v_transmitted_complex() const { return sigma0(); }
  double v_transmitted_quaternionic() const {
    const double r = rho0();
    return r * r * r / (eps0 * eps0);
  }

 private:
  void check_diffusion(double eps) const {
    if (!(eps > eps_min))
      throw DomainError("plane-wave energy below diffusion threshold (E <= V0)");
  }
};

// Scattering coefficients of one spectral line. Complex case: r, t real,
// r_tilde = t_tilde = w = 0. Quaternionic case: all five populated.
struct StepCoefficients {
  StepKind kind;
  cplx r{};        // reflected e^{-i eps x}
  cplx t{};        // transmitted e^{i sigma x} or (1 + j w) e^{i rho x}
  cplx r_tilde{};  // region I evanescent j e^{eps x}
  cplx t_tilde{};  // region II evanescent (conj(w) + j) e^{-rho x}
  cplx w{};        // j-admixture of the transmitted mode
};

inline StepCoefficients complex_coeffs(const Kinematics& kin, double eps) {
  const double sigma = kin.sigma_of(eps);
  StepCoefficients c;
  c.kind = StepKind::Complex;
  c.r = (eps - sigma) / (eps + sigma);
  c.t = 2.0 * eps / (eps + sigma);
  return c;
}

/*
 * Quaternionic coefficients, from matching psi and psi' at x = 0:
 *
 *   r~ = (1 + i) eps w / (eps + rho)
 *   t  = eps / rho
 *   t~ = -eps w (eps - i rho) / (rho (eps + rho))
 *   r  = (eps - rho)(rho + i eps) / (eps^2 + rho^2)
 *        = (eps - rho) e^{i arctan(eps/rho)} / sqrt(eps^2 + rho^2)
 *
 * |r|^2 = (eps - rho)^2/(eps^2 + rho^2) and the transmitted flux factor
 * (rho^3/eps^3)(1 + |w|^2) t^2 complete it to 1 exactly.
 */
inline StepCoefficients quaternionic_coeffs(const Kinematics& kin, double eps) {
  const double rho = kin.rho_of(eps);
  const cplx w = kin.w_of(eps);
  StepCoefficients c;
  c.kind = StepKind::Quaternionic;
  c.w = w;
  c.r = (eps - rho) * cplx(rho, eps) / (eps * eps + rho * rho);
  c.r_tilde = cplx(1.0, 1.0) * eps * w / (eps + rho);
  c.t = eps / rho;
  c.t_tilde = -eps * w * cplx(eps, -rho) / (rho * (eps + rho));
  return c;
}

// psi and its first two x-derivatives at one point of one region.
struct WaveDerivs {
  Quaternion psi, dpsi, d2psi;
};

// Region-explicit evaluation; exponentials are evaluated in the exponent
// domain, so evanescent modes stay finite on their own side of the step.
inline WaveDerivs planewave_derivs_region(const StepCoefficients& c,
                                          const Kinematics& kin, double eps,
                                          double x, Region region) {
  WaveDerivs out;
  if (region == Region::I) {
    const cplx ep = std::exp(cplx(0.0, eps * x));
    const cplx em = std::conj(ep);
    const cplx ieps(0.0, eps);
    out.psi = Quaternion(ep + c.r * em, 0.0);
    out.dpsi = Quaternion(ieps * (ep - c.r * em), 0.0);
    out.d2psi = Quaternion(-eps * eps * (ep + c.r * em), 0.0);
    if (c.kind == StepKind::Quaternionic) {
      const cplx ev = c.r_tilde * std::exp(eps * x);  // x <= 0 in practice
      out.psi.z2 = ev;
      out.dpsi.z2 = eps * ev;
      out.d2psi.z2 = eps * eps * ev;
    }
    return out;
  }
  if (c.kind == StepKind::Complex) {
    const double sigma = kin.sigma_of(eps);
    const cplx es = c.t * std::exp(cplx(0.0, sigma * x));
    out.psi = Quaternion(es, 0.0);
    out.dpsi = Quaternion(cplx(0.0, sigma) * es, 0.0);
    out.d2psi = Quaternion(-sigma * sigma * es, 0.0);
    return out;
  }
  const double rho = kin.rho_of(eps);
  const Quaternion prop(1.0, c.w);             // 1 + j w
  const Quaternion evan(std::conj(c.w), 1.0);  // conj(w) + j
  const cplx cp = c.t * std::exp(cplx(0.0, rho * x));
  const cplx ce = c.t_tilde * std::exp(-rho * x);  // x >= 0 in practice
  out.psi = prop * cp + evan * ce;
  out.dpsi = prop * (cplx(0.0, rho) * cp) + evan * (-rho * ce);
  out.d2psi = prop * (-rho * rho * cp) + evan * (rho * rho * ce);
  return out;
}

inline WaveDerivs planewave_derivs(const StepCoefficients& c,
                                   const Kinematics& kin, double eps, double x) {
  return planewave_derivs_region(c, kin, eps, x,
                                 x < 0.0 ? Region::I : Region::II);
}

// psi_I for x < 0, psi_II for x >= 0.
inline Quaternion eval_planewave(const StepCoefficients& c, const Kinematics& kin,
                                 double eps, double x) {
  return planewave_derivs(c, kin, eps, x).psi;
}

// Relative residual of (i/2) psi'' - (i V1 + j V2 + k V3) psi + psi E i = 0.
inline double schrodinger_residual(const PotentialSpec& v, double energy,
                                   const Quaternion& psi,
                                   const Quaternion& psi_xx) {
  const Quaternion pot{cplx(0.0, v.v1), cplx(v.v2, -v.v3)};
  const Quaternion res = 0.5 * left_mul(cplx(0.0, 1.0), psi_xx) - pot * psi +
                         right_mul(psi, cplx(0.0, energy));
  const double scale = 0.5 * psi_xx.abs() + v.magnitude() * psi.abs() +
                       energy * psi.abs();
  return res.abs() / std::max(scale, 1e-300);
}

// Interior ODE residual of the exact solution; x = 0 sits on the potential
// discontinuity and is excluded.
inline double ode_residual(const Kinematics& kin, double eps, double x,
                           StepKind kind) {
  if (x == 0.0)
    throw std::invalid_argument("ode_residual: x = 0 is the step discontinuity");
  const StepCoefficients c = kind == StepKind::Complex
                                 ? complex_coeffs(kin, eps)
                                 : quaternionic_coeffs(kin, eps);
  const WaveDerivs wd = planewave_derivs(c, kin, eps, x);
  PotentialSpec v;
  if (x > 0.0) {
    if (kind == StepKind::Complex)
      v.v1 = kin.v0_energy();
    else
      v.v2 = kin.v0_energy();
  }
  return schrodinger_residual(v, 0.5 * eps * eps, wd.psi, wd.d2psi);
}

// Relative mismatch of psi and psi' across x = 0. The interior ODE holds for
// any coefficient values, so this is the check that detects wrong coefficients.
inline double matching_residual(const StepCoefficients& c, const Kinematics& kin,
                                double eps) {
  const WaveDerivs a = planewave_derivs_region(c, kin, eps, 0.0, Region::I);
  const WaveDerivs b = planewave_derivs_region(c, kin, eps, 0.0, Region::II);
  const double s = std::max({1.0, a.psi.abs(), b.psi.abs()});
  const double rv = (a.psi - b.psi).abs() / s;
  const double rd = (a.dpsi - b.dpsi).abs() / (eps * s);
  return std::max(rv, rd);
}

// Plane-wave reflection/transmission probabilities (currents).
struct Probabilities {
  double p_ref;
  double p_tra;
};

inline Probabilities planewave_probabilities(StepKind kind, const Kinematics& kin,
                                             double eps) {
  if (kind == StepKind::Complex) {
    const StepCoefficients c = complex_coeffs(kin, eps);
    const double sigma = kin.sigma_of(eps);
    return {std::norm(c.r), sigma / eps * std::norm(c.t)};
  }
  const StepCoefficients c = quaternionic_coeffs(kin, eps);
  const double rho = kin.rho_of(eps);
  const double flux = (rho * rho * rho) / (eps * eps * eps);
  return {std::norm(c.r), flux * (1.0 + std::norm(c.w)) * std::norm(c.t)};
}

}  // namespace qstep
