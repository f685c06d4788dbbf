#pragma once

#include <stdexcept>
#include <string>

namespace qstep {

// Error taxonomy mirrored by the CLI exit codes: config 2, domain 3,
// resolution 4, io 5.

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
  ConfigError(int line, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg) {}
};

// Physically out-of-range inputs (e.g. E <= V0, empty spectral window).
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Requested accuracy cannot be met with the allotted resources
// (quadrature node budget below the phase-resolution rule).
struct ResolutionError : std::runtime_error {
  explicit ResolutionError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qstep
