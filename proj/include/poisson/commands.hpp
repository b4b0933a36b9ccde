#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "poisson/config.hpp"

namespace poisson {

enum ExitCode : int { kExitSuccess = 0, kExitFailure = 1, kExitUsage = 2 };

/// Output of one CLI command. `output` is the report (JSON) or CSV; `summary`
/// is the human-readable line destined for stderr.
struct CommandResult {
  int exit_code = kExitSuccess;
  std::string output;
  std::string summary;
};

inline constexpr double kVerifyJacobiTolerance = 1e-7;
inline constexpr double kCertifyTolerance = 1e-9;

/// Jacobi, Casimir-kernel and rank sweeps. Polynomial structure fields get
/// the Jacobi and rank-constancy sweeps only.
CommandResult cmd_verify(const SystemConfig& config, int points, std::uint64_t seed);

/// Chart description plus the canonical-form certificate.
CommandResult cmd_darboux(const SystemConfig& config, int points = 100, std::uint64_t seed = 0);

enum class Route { Direct, Canonical };

struct IntegrateOptions {
  std::optional<HamiltonianConfig> hamiltonian;  // overrides the config
  std::optional<Vector> x0;                      // overrides the config
  double dt = 1e-3;
  long long steps = 1000;
  Route route = Route::Direct;
};

/// CSV trajectory. Defaults: the config's Hamiltonian, else the unit
/// quadratic; the config's x0, else the centre of the sample region.
/// A domain exit keeps the rows up to the last valid time and exits 1.
CommandResult cmd_integrate(const SystemConfig& config, const IntegrateOptions& options);

/// Names and default parameters of the catalog systems, as JSON.
CommandResult cmd_catalog_list();

/// Report for an error raised before any sweep ran (exit 2).
CommandResult usage_error(const std::exception& error);

}  // namespace poisson
