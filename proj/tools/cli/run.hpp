#pragma once

#include "config.hpp"

#include <ostream>

namespace crowdflow::cli {

inline constexpr int kExitConverged = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNotConverged = 2;

/// Executes a validated configuration and writes its output files below
/// `config.output.path` (a directory, or the mesh file for MeshGen).
/// Progress goes to `log`. Returns kExitConverged or kExitNotConverged;
/// throws on invalid input.
int run(const RunConfig& config, std::ostream& log);

}  // namespace crowdflow::cli
