#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qstep/errors.hpp"
#include "qstep/runner.hpp"
#include "qstep/scenario.hpp"

// Exit codes: 0 ok, 2 config error, 3 domain error, 4 resolution error,
// 5 io error. CLI11 usage errors map to the config code.

namespace {

int dispatch(const std::string& mode, const std::string& config,
             const std::string& out_dir) {
  try {
    const qstep::Scenario s = config.empty() ? qstep::Scenario{}
                                             : qstep::parse_scenario_file(config);
    if (mode == "coeffs") qstep::run_coeffs(s, out_dir);
    else if (mode == "evolve") qstep::run_evolve(s, out_dir);
    else qstep::run_compare(s, out_dir);
    return 0;
  } catch (const qstep::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const qstep::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const qstep::ResolutionError& e) {
    std::cerr << "resolution error: " << e.what() << "\n";
    return 4;
  } catch (const qstep::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quaternionic vs complex step diffusion toolkit"};
  app.require_subcommand(1);

  std::string config, out_dir = ".";
  std::string mode;
  for (const auto& [name, help] :
       {std::pair<const char*, const char*>{"coeffs",
            "plane-wave coefficients, probabilities, velocities, and the "
            "effective-potential fit at the design energy"},
        {"evolve", "synthesize wave packets on the x grid for each tau and "
                   "write density CSVs plus observables"},
        {"compare", "effective complex potential fit against the exact "
                    "quaternionic observables"}}) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "scenario config file (key = value)");
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->callback([&mode, sub] { mode = sub->get_name(); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }
  return dispatch(mode, config, out_dir);
}
