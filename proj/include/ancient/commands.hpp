#pragma once

#include <memory>
#include <string>

#include "ancient/config.hpp"
#include "ancient/flow.hpp"
#include "ancient/report.hpp"

namespace ancient {

enum ExitCode { exit_ok = 0, exit_verify_failed = 1, exit_config = 2, exit_no_convergence = 3 };

/// Grid, spectrum and resolved weights for one configuration. Fills the NaN
/// defaults of `cfg` in place so reports echo the values actually used.
struct Setup {
  std::unique_ptr<SpectralData> data;
  WeightParams params;
  TimeGrid time;

  const Grid& grid() const { return data->grid; }
};

Setup prepare(RunConfig& cfg);

Json checkpoint_json(const PicardState& state, const Eigen::VectorXd& a);
PicardState checkpoint_from_json(const Json& j, const Eigen::VectorXd& a);

int cmd_index(RunConfig cfg);
int cmd_spectrum(RunConfig cfg);
int cmd_construct(RunConfig cfg);
int cmd_verify(RunConfig cfg);
int cmd_sweep(RunConfig cfg);

/// Parses argv, loads the config and dispatches; returns the exit code.
int run_cli(int argc, char** argv);

}  // namespace ancient
