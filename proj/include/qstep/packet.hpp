#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qstep/errors.hpp"
#include "qstep/quadrature.hpp"
#include "qstep/quaternion.hpp"
#include "qstep/step.hpp"

/*
 * Gaussian wave packets over the step, synthesized by direct quadrature of
 *
 *     Omega(x, tau) = Int_{eps_min}^{inf} d eps  g(eps) psi(eps, x) e^{-i eps^2 tau / 2}
 *
 * with the real spectral weight g(eps) = exp[-(eps - eps0)^2/4] / (2 sqrt(pi)).
 * Superposition coefficients must be real for the quaternionic case, which g is.
 *
 * Quadrature policy: the gaussian is truncated at `truncation` spectral
 * standard deviations (default 6, window tail mass < 1e-8), never below
 * eps_min; composite 16-point Gauss-Legendre panels supply at least 10 nodes
 * per 2 pi of the worst-case phase variation eps*x_max + eps^2*|tau|_max/2
 * across the window. Node placement and accumulation order are fixed, so
 * results are bit-identical across runs and across any parallelization of the
 * grid loop.
 */

namespace qstep {

enum class Component {
  Incident,
  Reflected,
  EvanescentI,
  Transmitted,
  EvanescentII,
  TotalI,
  TotalII,
  Total,  // piecewise union assembled by total_field()
};

inline const char* component_name(Component c) {
  switch (c) {
    case Component::Incident: return "incident";
    case Component::Reflected: return "reflected";
    case Component::EvanescentI: return "evanescent-I";
    case Component::Transmitted: return "transmitted";
    case Component::EvanescentII: return "evanescent-II";
    case Component::TotalI: return "total-I";
    case Component::TotalII: return "total-II";
    case Component::Total: return "total";
  }
  return "?";
}

struct SpectralParams {
  double eps0 = 0.0;
  double eps_min = 0.0;
  double width = std::numbers::sqrt2;  // spectral std of g in units of 1/a
  double truncation = 6.0;
  int nodes = 0;  // quadrature node budget; 0 = auto from the phase rule

  static SpectralParams for_kinematics(const Kinematics& kin,
                                       double truncation = 6.0, int nodes = 0) {
    SpectralParams sp;
    sp.eps0 = kin.eps0;
    sp.eps_min = kin.eps_min;
    sp.truncation = truncation;
    sp.nodes = nodes;
    return sp;
  }

  void validate() const {
    if (!(eps0 > eps_min)) throw DomainError("spectral center must exceed eps_min");
    if (!(width > 0.0) || !(truncation > 0.0))
      throw DomainError("spectral width and truncation must be > 0");
  }

  std::pair<double, double> window() const {
    validate();
    const double lo = std::max(eps_min, eps0 - truncation * width);
    const double hi = eps0 + truncation * width;
    if (!(hi > lo)) throw DomainError("empty spectral window");
    return {lo, hi};
  }

  // Spectral weight; unit total integral over the full line at default width.
  double gaussian_weight(double eps) const {
    const double d = eps - eps0;
    return std::exp(-d * d / (2.0 * width * width)) /
           (2.0 * std::sqrt(std::numbers::pi));
  }

  // Weight left at the truncated threshold relative to the peak; the
  // closed-form approximations assume this is <= 1e-6.
  double tail_ratio() const { return gaussian_weight(eps_min) / gaussian_weight(eps0); }

  // Phase-resolution rule: >= 10 nodes per 2 pi of max phase variation.
  int required_nodes(double x_absmax, double tau_absmax) const {
    const auto [lo, hi] = window();
    const double dphi =
        x_absmax * (hi - lo) + 0.5 * tau_absmax * (hi * hi - lo * lo);
    const double cycles = dphi / (2.0 * std::numbers::pi);
    return std::max(32, static_cast<int>(std::ceil(10.0 * cycles)));
  }
};

struct PacketField {
  StepKind kind{};
  Component component{};
  double tau = 0.0;
  std::vector<double> grid;
  std::vector<Quaternion> values;
};

inline std::vector<double> make_uniform_grid(double lo, double hi, int n) {
  if (n < 2 || !(hi > lo)) throw DomainError("grid needs n >= 2 and hi > lo");
  std::vector<double> g(n);
  const double h = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) g[i] = lo + h * i;
  g.back() = hi;
  return g;
}

namespace detail {

inline int thread_count() {
  if (const char* env = std::getenv("QSTEP_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return std::min(n, 64);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 16u));
}

// Static block partition; every index is computed by the same pure function,
// so the partition cannot affect the result.
template <class F>
inline void parallel_for(std::size_t n, F&& f) {
  const int threads = thread_count();
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  const std::size_t chunk = (n + threads - 1) / threads;
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) {
    const std::size_t lo = t * chunk;
    if (lo >= n) break;
    const std::size_t hi = std::min(n, lo + chunk);
    pool.emplace_back([&f, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) f(i);
    });
  }
  for (std::size_t i = 0; i < std::min(n, chunk); ++i) f(i);
  for (auto& th : pool) th.join();
}

// One spectral line of one elementary component:
//   value(x) = (amp1, amp2) * exp( k_re*x + i*(k_im*x + phase) )
struct LineTerm {
  double k_im, k_re, phase;
  cplx amp1, amp2;
};

struct ComponentTable {
  Component component{};
  std::vector<LineTerm> terms;

  Quaternion eval(double x) const {
    cplx z1(0.0, 0.0), z2(0.0, 0.0);
    for (const LineTerm& t : terms) {
      const cplx e = std::exp(cplx(t.k_re * x, t.k_im * x + t.phase));
      z1 += t.amp1 * e;
      z2 += t.amp2 * e;
    }
    return {z1, z2};
  }
};

inline bool component_valid_for(Component c, StepKind kind) {
  if (kind == StepKind::Complex)
    return c != Component::EvanescentI && c != Component::EvanescentII;
  return true;
}

inline ComponentTable build_table(const SpectralParams& sp, const Kinematics& kin,
                                  StepKind kind, Component comp, double tau,
                                  const QuadratureRule& rule) {
  ComponentTable table;
  table.component = comp;
  table.terms.reserve(rule.x.size());
  for (std::size_t i = 0; i < rule.x.size(); ++i) {
    const double eps = rule.x[i];
    const double gw = rule.w[i] * sp.gaussian_weight(eps);
    const double phase = -0.5 * eps * eps * tau;
    LineTerm term{0.0, 0.0, phase, cplx(0.0, 0.0), cplx(0.0, 0.0)};
    switch (comp) {
      case Component::Incident:
        term.k_im = eps;
        term.amp1 = gw;
        break;
      case Component::Reflected:
        term.k_im = -eps;
        term.amp1 = gw * (kind == StepKind::Complex
                              ? complex_coeffs(kin, eps).r
                              : quaternionic_coeffs(kin, eps).r);
        break;
      case Component::EvanescentI: {
        const StepCoefficients c = quaternionic_coeffs(kin, eps);
        term.k_re = eps;
        term.amp2 = gw * c.r_tilde;
        break;
      }
      case Component::Transmitted:
        if (kind == StepKind::Complex) {
          term.k_im = kin.sigma_of(eps);
          term.amp1 = gw * complex_coeffs(kin, eps).t;
        } else {
          const StepCoefficients c = quaternionic_coeffs(kin, eps);
          term.k_im = kin.rho_of(eps);
          term.amp1 = gw * c.t;
          term.amp2 = gw * c.w * c.t;
        }
        break;
      case Component::EvanescentII: {
        const StepCoefficients c = quaternionic_coeffs(kin, eps);
        term.k_re = -kin.rho_of(eps);
        term.amp1 = gw * std::conj(c.w) * c.t_tilde;
        term.amp2 = gw * c.t_tilde;
        break;
      }
      default:
        throw std::invalid_argument("build_table: not an elementary component");
    }
    table.terms.push_back(term);
  }
  return table;
}

inline std::vector<Component> elementary_parts(Component c, StepKind kind) {
  switch (c) {
    case Component::TotalI:
      if (kind == StepKind::Quaternionic)
        return {Component::Incident, Component::Reflected, Component::EvanescentI};
      return {Component::Incident, Component::Reflected};
    case Component::TotalII:
      if (kind == StepKind::Quaternionic)
        return {Component::Transmitted, Component::EvanescentII};
      return {Component::Transmitted};
    default:
      return {c};
  }
}

inline void check_grid(const std::vector<double>& grid) {
  if (grid.size() < 1) throw std::invalid_argument("empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw std::invalid_argument("grid must be strictly increasing");
}

inline void check_side(Component c, const std::vector<double>& grid) {
  const bool needs_neg = c == Component::EvanescentI || c == Component::TotalI;
  const bool needs_pos = c == Component::EvanescentII || c == Component::TotalII;
  if (needs_neg && grid.back() > 0.0)
    throw DomainError(std::string(component_name(c)) +
                      " is defined on x <= 0 only (growing exponential)");
  if (needs_pos && grid.front() < 0.0)
    throw DomainError(std::string(component_name(c)) +
                      " is defined on x >= 0 only (growing exponential)");
}

inline QuadratureRule spectral_rule(const SpectralParams& sp, double x_absmax,
                                    double tau_absmax) {
  const int required = sp.required_nodes(x_absmax, tau_absmax);
  int n = sp.nodes > 0 ? sp.nodes : required;
  if (n < required)
    throw ResolutionError("quadrature budget " + std::to_string(n) +
                          " below phase-resolution requirement " +
                          std::to_string(required));
  const auto [lo, hi] = sp.window();
  return panelled_rule(lo, hi, n);
}

inline double grid_absmax(const std::vector<double>& grid) {
  return std::max(std::abs(grid.front()), std::abs(grid.back()));
}

}  // namespace detail

// Synthesize one component (or a one-sided total) on a grid.
inline PacketField synthesize(const SpectralParams& sp, const Kinematics& kin,
                              StepKind kind, Component comp, double tau,
                              const std::vector<double>& grid) {
  detail::check_grid(grid);
  if (!detail::component_valid_for(comp, kind))
    throw std::invalid_argument("evanescent components exist only in the quaternionic case");
  if (comp == Component::Total)
    throw std::invalid_argument("use total_field() for the assembled field");
  detail::check_side(comp, grid);

  const QuadratureRule rule =
      detail::spectral_rule(sp, detail::grid_absmax(grid), std::abs(tau));
  std::vector<detail::ComponentTable> tables;
  for (Component part : detail::elementary_parts(comp, kind))
    tables.push_back(detail::build_table(sp, kin, kind, part, tau, rule));

  PacketField field;
  field.kind = kind;
  field.component = comp;
  field.tau = tau;
  field.grid = grid;
  field.values.assign(grid.size(), Quaternion{});
  detail::parallel_for(grid.size(), [&](std::size_t i) {
    Quaternion q;
    for (const auto& t : tables) q += t.eval(grid[i]);
    field.values[i] = q;
  });
  return field;
}

// Full field on a grid spanning the step: incident + reflected (+ evanescent-I)
// for x < 0, transmitted (+ evanescent-II) for x >= 0.
inline PacketField total_field(const SpectralParams& sp, const Kinematics& kin,
                               StepKind kind, double tau,
                               const std::vector<double>& grid) {
  detail::check_grid(grid);
  if (!(grid.front() < 0.0) || !(grid.back() > 0.0))
    throw DomainError("total_field: grid must span negative and positive x");

  const QuadratureRule rule =
      detail::spectral_rule(sp, detail::grid_absmax(grid), std::abs(tau));
  std::vector<detail::ComponentTable> left, right;
  for (Component part : detail::elementary_parts(Component::TotalI, kind))
    left.push_back(detail::build_table(sp, kin, kind, part, tau, rule));
  for (Component part : detail::elementary_parts(Component::TotalII, kind))
    right.push_back(detail::build_table(sp, kin, kind, part, tau, rule));

  PacketField field;
  field.kind = kind;
  field.component = Component::Total;
  field.tau = tau;
  field.grid = grid;
  field.values.assign(grid.size(), Quaternion{});
  detail::parallel_for(grid.size(), [&](std::size_t i) {
    const auto& tables = grid[i] < 0.0 ? left : right;
    Quaternion q;
    for (const auto& t : tables) q += t.eval(grid[i]);
    field.values[i] = q;
  });
  return field;
}

}  // namespace qstep
