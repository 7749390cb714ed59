#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "roughpde/calibration.hpp"
#include "roughpde/cli/config.hpp"

namespace roughpde::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kValidation = 2, kConvergence = 3, kIo = 4 };

const std::vector<std::string>& command_names();

// Seeds of the generated inputs, derived from the run seed unless set in the file.
inline constexpr std::uint64_t kForcingSeedOffset = 1;
inline constexpr std::uint64_t kTerminalSeedOffset = 2;
inline constexpr std::uint64_t kFieldSeedOffset = 3;

// sin/cos: amplitude * f(mode k0 (x_0 + ... + x_{d-1})).
SpectralField make_field(const FieldSpec& spec, const TorusGrid& grid, std::uint64_t seed);
AffinePeriodicField make_terminal(const RunConfig& cfg);
ScalarPath make_forcing(const RunConfig& cfg);
DriftSpec resolved_drift(const RunConfig& cfg);
PDEData make_pde_data(const RunConfig& cfg);

// Run one subcommand on a validated config; outputs go to cfg.out with manifest.json.
// cal is required when a policy is auto. Errors propagate as exceptions.
void run_command(const std::string& command, const RunConfig& cfg, const std::optional<Calibration>& cal,
                 std::ostream& log);

// Full entry point: argv without the program name. Maps exceptions to exit codes
// and writes a failure manifest when the output directory is usable.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace roughpde::cli
