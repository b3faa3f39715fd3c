#pragma once

#include "crowdflow/dg_solver.hpp"
#include "crowdflow/mesh.hpp"
#include "crowdflow/model.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace crowdflow::cli {

enum class Mode { Solve1D, Solve2D, Phase, Analytic, MeshGen };

/// Invalid configuration; `path()` names the offending key, e.g.
/// "geometry.doors[1].rate".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct OutputSpec {
  std::string path = "out";
  std::vector<std::string> formats;
};

struct RunConfig {
  Mode mode = Mode::Solve1D;
  ModelParams model;
  GeometrySpec geometry = IntervalSpec{};
  SolverConfig solver;
  std::optional<double> alpha;
  std::optional<double> beta;
  double step = 0.01;
  int jobs = 0;
  OutputSpec output;
};

/// Parses and validates a JSON run description, filling defaults
/// (tau 0.01, initial density 1/2, eta 10, tol 1e-8). Throws ConfigError.
RunConfig parse_config(std::string_view text);

Mode parse_mode(std::string_view name);
const char* mode_name(Mode mode);

/// Boundary segments of the 1D interval problem.
std::vector<BoundarySegment> interval_segments(double alpha, double beta);

}  // namespace crowdflow::cli
