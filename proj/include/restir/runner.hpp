// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "restir/config.hpp"

namespace restir {

/// Exit codes; gate failures are distinct so scripts can tell them apart.
enum ExitCode : int {
    kExitOk = 0,
    kExitConfigError = 1,
    kExitIoError = 2,
    kExitUnbiasednessGate = 10,
    kExitTwoPixelGate = 11,
    kExitChainGate = 12,
};

/// Executes a run: writes all artifacts under cfg.out_dir (including the
/// resolved config echo) and returns an exit code. Statistical testbed modes
/// return a gate-failure code when their check fails.
int run(const RunConfig &cfg);

} // namespace restir
