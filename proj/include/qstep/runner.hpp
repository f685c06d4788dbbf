#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qstep/approx.hpp"
#include "qstep/errors.hpp"
#include "qstep/metrics.hpp"
#include "qstep/packet.hpp"
#include "qstep/scenario.hpp"
#include "qstep/step.hpp"

/*
 * Subcommand drivers. Each writes a summary.json with a fixed key set into
 * the output directory; evolve additionally writes one density CSV per tau.
 * All numeric output is formatted with %.17g so runs are reproducible
 * byte for byte.
 */

namespace qstep {

using ordered_json = nlohmann::ordered_json;

namespace detail {

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string csv_name(const std::string& prefix, double tau) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "_tau_%+.4f.csv", tau);
  return prefix + buf;
}

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << body;
  if (!out) throw IoError("write failed: " + path.string());
}

inline ordered_json complex_json(cplx z) {
  return {{"re", z.real()}, {"im", z.imag()}};
}

}  // namespace detail

inline ordered_json scenario_json(const Scenario& s,
                                  const EffectiveScenario& eff) {
  ordered_json j;
  j["e0_over_v0"] = s.e0_over_v0;
  j["av0"] = s.av0;
  j["potential"] = s.potential;
  j["input_components"] = {s.v1, s.v2, s.v3};
  j["canonical"] = {{"v1", eff.canon.canonical.v1},
                    {"v_perp", eff.canon.canonical.v2},
                    {"alpha", eff.canon.alpha}};
  j["height_scale"] = eff.height_scale;
  j["tau_list"] = s.tau_list;
  j["grid"] = {{"min", s.grid_min}, {"max", s.grid_max}, {"points", s.grid_points}};
  j["truncation"] = s.truncation;
  j["nodes"] = s.nodes;
  j["csv_prefix"] = s.csv_prefix;
  return j;
}

inline ordered_json kinematics_json(const Kinematics& kin) {
  const cplx w = kin.w0();
  ordered_json j;
  j["eps0"] = kin.eps0;
  j["eps_min"] = kin.eps_min;
  j["e0_energy"] = kin.e0_energy();
  j["v0_energy"] = kin.v0_energy();
  j["sigma0"] = kin.sigma0();
  j["rho0"] = kin.rho0();
  j["w0"] = {{"re", w.real()}, {"im", w.imag()}, {"abs", std::abs(w)}};
  return j;
}

inline ordered_json coefficients_json(const Kinematics& kin) {
  const StepCoefficients c = complex_coeffs(kin, kin.eps0);
  const StepCoefficients q = quaternionic_coeffs(kin, kin.eps0);
  ordered_json j;
  j["complex"] = {{"r", c.r.real()}, {"t", c.t.real()}};
  j["quaternionic"] = {{"r", detail::complex_json(q.r)},
                       {"r_abs_sq", std::norm(q.r)},
                       {"r_tilde", detail::complex_json(q.r_tilde)},
                       {"t", q.t.real()},
                       {"t_tilde", detail::complex_json(q.t_tilde)},
                       {"w", detail::complex_json(q.w)}};
  return j;
}

inline ordered_json probabilities_json(const Kinematics& kin) {
  const Probabilities pc = planewave_probabilities(StepKind::Complex, kin, kin.eps0);
  const Probabilities pq =
      planewave_probabilities(StepKind::Quaternionic, kin, kin.eps0);
  ordered_json j;
  j["complex"] = {{"p_ref", pc.p_ref},
                  {"p_tra", pc.p_tra},
                  {"unitarity_residual", std::abs(pc.p_ref + pc.p_tra - 1.0)}};
  j["quaternionic"] = {{"p_ref", pq.p_ref},
                       {"p_tra", pq.p_tra},
                       {"unitarity_residual", std::abs(pq.p_ref + pq.p_tra - 1.0)}};
  j["reflected_ratio"] = pc.p_ref / pq.p_ref;
  return j;
}

inline ordered_json velocities_json(const Kinematics& kin) {
  const double vc = kin.v_transmitted_complex();
  const double vq = kin.v_transmitted_quaternionic();
  ordered_json j;
  j["incident"] = kin.v_incident();
  j["reflected"] = kin.v_reflected();
  j["transmitted_complex"] = vc;
  j["transmitted_quaternionic"] = vq;
  j["transmitted_ratio"] = vq / vc;
  return j;
}

inline ordered_json fit_json(const Kinematics& kin) {
  const W0Fit f = fit_w0(kin);
  const Probabilities pq =
      planewave_probabilities(StepKind::Quaternionic, kin, kin.eps0);
  ordered_json j;
  j["w0_energy"] = f.w0_energy;
  j["e0_over_w0"] = f.e0_over_w0;
  j["w0_over_v0"] = f.w0_over_v0;
  j["p_ref_fitted"] = f.p_ref_fitted;
  j["p_ref_quaternionic"] = pq.p_ref;
  j["p_ref_mismatch_rel"] = std::abs(f.p_ref_fitted / pq.p_ref - 1.0);
  j["velocity_fitted"] = f.velocity_fitted;
  j["velocity_quaternionic"] = kin.v_transmitted_quaternionic();
  j["velocity_mismatch_rel"] =
      std::abs(f.velocity_fitted / kin.v_transmitted_quaternionic() - 1.0);
  return j;
}

inline ordered_json observables_json(const PacketObservables& o) {
  return {{"peak_x", o.peak_x},
          {"peak_density", o.peak_density},
          {"mass_neg", o.mass_neg},
          {"mass_pos", o.mass_pos}};
}

namespace detail {

inline void write_summary(const std::filesystem::path& out_dir,
                          const ordered_json& j) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + out_dir.string());
  write_text_file(out_dir / "summary.json", j.dump(2) + "\n");
}

// Per-tau synthesis of every elementary component plus assembled totals.
struct EvolvedCase {
  std::vector<std::pair<std::string, PacketField>> parts;  // named components
  std::vector<double> total_density;                       // on the full grid
};

inline EvolvedCase evolve_case(const SpectralParams& sp, const Kinematics& kin,
                               StepKind kind, double tau,
                               const std::vector<double>& grid_neg,
                               const std::vector<double>& grid_pos) {
  EvolvedCase out;
  auto add = [&](Component comp, const std::vector<double>& grid) {
    out.parts.emplace_back(component_name(comp),
                           synthesize(sp, kin, kind, comp, tau, grid));
  };
  add(Component::Incident, grid_neg);
  add(Component::Reflected, grid_neg);
  if (kind == StepKind::Quaternionic) add(Component::EvanescentI, grid_neg);
  add(Component::Transmitted, grid_pos);
  if (kind == StepKind::Quaternionic) add(Component::EvanescentII, grid_pos);

  const std::size_t n_neg = grid_neg.size();
  std::vector<Quaternion> total(n_neg + grid_pos.size(), Quaternion::zero());
  for (const auto& [name, field] : out.parts) {
    const bool left = field.component == Component::Incident ||
                      field.component == Component::Reflected ||
                      field.component == Component::EvanescentI;
    const std::size_t base = left ? 0 : n_neg;
    for (std::size_t i = 0; i < field.values.size(); ++i)
      total[base + i] += field.values[i];
  }
  out.total_density.reserve(total.size());
  for (const Quaternion& q : total) out.total_density.push_back(q.norm_sq());
  return out;
}

}  // namespace detail

inline void run_coeffs(const Scenario& s, const std::string& out_dir) {
  const EffectiveScenario eff = build_effective(s);
  ordered_json j;
  j["scenario"] = scenario_json(s, eff);
  j["kinematics"] = kinematics_json(eff.kin);
  j["coefficients"] = coefficients_json(eff.kin);
  j["probabilities"] = probabilities_json(eff.kin);
  j["velocities"] = velocities_json(eff.kin);
  j["fit"] = fit_json(eff.kin);
  detail::write_summary(out_dir, j);
}

inline void run_compare(const Scenario& s, const std::string& out_dir) {
  const EffectiveScenario eff = build_effective(s);
  ordered_json j;
  j["scenario"] = scenario_json(s, eff);
  j["kinematics"] = kinematics_json(eff.kin);
  j["probabilities"] = probabilities_json(eff.kin);
  j["velocities"] = velocities_json(eff.kin);
  j["fit"] = fit_json(eff.kin);
  detail::write_summary(out_dir, j);
}

inline void run_evolve(const Scenario& s, const std::string& out_dir) {
  const EffectiveScenario eff = build_effective(s);
  const Kinematics& kin = eff.kin;
  const std::vector<double> grid = s.make_grid();
  if (!(grid.front() < 0.0 && grid.back() > 0.0))
    throw DomainError("evolve grid must straddle the step at x = 0");

  std::vector<double> grid_neg, grid_pos;
  for (double x : grid) (x < 0.0 ? grid_neg : grid_pos).push_back(x);

  SpectralParams sp = SpectralParams::for_kinematics(kin, s.truncation, s.nodes);
  sp.validate();
  double tau_absmax = 0.0;
  for (double tau : s.tau_list) tau_absmax = std::max(tau_absmax, std::abs(tau));
  const double x_absmax = std::max(std::abs(grid.front()), std::abs(grid.back()));
  const int required = sp.required_nodes(x_absmax, tau_absmax);
  if (sp.nodes == 0) sp.nodes = required;
  else if (sp.nodes < required)
    throw ResolutionError("nodes = " + std::to_string(sp.nodes) +
                          " below required " + std::to_string(required) +
                          " for this grid and tau range");
  if (sp.tail_ratio() > 1e-6)
    std::cerr << "warning: spectral window clips the gaussian tail "
                 "(tail ratio " +
                     detail::fmt17(sp.tail_ratio()) + "); densities may drift "
                 "from the closed-form envelopes\n";

  ordered_json j;
  j["scenario"] = scenario_json(s, eff);
  j["kinematics"] = kinematics_json(eff.kin);
  j["quadrature"] = {{"window_lo", sp.window().first},
                     {"window_hi", sp.window().second},
                     {"nodes_used", sp.nodes},
                     {"nodes_required", required},
                     {"tail_ratio", sp.tail_ratio()}};
  ordered_json obs = ordered_json::array();
  ordered_json files = ordered_json::array();

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + std::string(out_dir));

  for (double tau : s.tau_list) {
    const detail::EvolvedCase cc =
        detail::evolve_case(sp, kin, StepKind::Complex, tau, grid_neg, grid_pos);
    const detail::EvolvedCase qc = detail::evolve_case(
        sp, kin, StepKind::Quaternionic, tau, grid_neg, grid_pos);

    ordered_json entry;
    entry["tau"] = tau;
    for (const auto* pair : {&cc, &qc}) {
      ordered_json block;
      for (const auto& [name, field] : pair->parts)
        block[name] = observables_json(observe(field));
      entry[pair == &cc ? "complex" : "quaternionic"] = std::move(block);
    }

    std::string body = "x_over_a,density_complex,density_quaternionic\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      body += detail::fmt17(grid[i]);
      body += ',';
      body += detail::fmt17(cc.total_density[i]);
      body += ',';
      body += detail::fmt17(qc.total_density[i]);
      body += '\n';
    }
    const std::string name = detail::csv_name(s.csv_prefix, tau);
    detail::write_text_file(std::filesystem::path(out_dir) / name, body);
    entry["csv"] = name;
    files.push_back(name);
    obs.push_back(std::move(entry));
  }

  j["observables"] = std::move(obs);
  j["files"] = std::move(files);
  detail::write_summary(out_dir, j);
}

}  // namespace qstep
