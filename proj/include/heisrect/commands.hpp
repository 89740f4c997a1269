#pragma once

#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "heisrect/builder.hpp"
#include "heisrect/config.hpp"
#include "heisrect/output.hpp"

namespace heisrect {

enum ExitCode : int { kExitPass = 0, kExitViolation = 1, kExitUsage = 2, kExitNumerical = 3 };

const std::vector<std::string>& command_names();

// Flag oracle for n = 1, plane oracle otherwise.
std::unique_ptr<CorrespondenceOracle> make_oracle(const RunConfig& c, const SurfaceFn& phi);

// Fills n0, nmax and tau in place when they are "auto".
void resolve_scales(RunConfig& c, const CorrespondenceOracle& oracle);

// Base points (x, p) with p on the surface near the configured base.
std::vector<BasePoint> make_bases(const RunConfig& c, const SurfaceFn& phi);

// Runs a command on a copy of the configuration; the report's config block
// holds the resolved values.  Throws UsageError, NumericalFailure or
// InvariantViolation.
Report run_command(const std::string& command, RunConfig& config);

// Runs and writes the output; returns the exit code.
int run(const std::string& command, const RunConfig& config, std::ostream& err);

// heisrect <command> --config FILE [--set key=value]...
int cli_main(const std::vector<std::string>& args, std::ostream& err);

}  // namespace heisrect
