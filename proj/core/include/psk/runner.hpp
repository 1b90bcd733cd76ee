#pragma once

// Orchestration for the CLI subcommands. Each runner executes the checks
// for one command, assembles a deterministic RunReport, and never throws
// for check failures (only for invalid configs or evaluation errors).

#include "psk/config.hpp"
#include "psk/report.hpp"

namespace psk {

RunReport run_verify(const RunConfig& cfg);
RunReport run_second_variation(const RunConfig& cfg);
RunReport run_tanno(const RunConfig& cfg);
RunReport run_spectrum(const RunConfig& cfg);

} // namespace psk
