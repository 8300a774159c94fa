#ifndef MM_RUNNER_HPP
#define MM_RUNNER_HPP

#include <functional>
#include <optional>
#include <vector>

#include "mm/scenario.hpp"

namespace mm {

struct RunOptions {
  std::optional<double> dx;
  std::optional<double> cfl;
  std::optional<double> t_end;
  std::optional<double> output_every;
};

struct RunResult {
  std::vector<Snapshot> history;  // cadence snapshots, endpoints inclusive
  // Per-step extremes over the whole run.
  double min_density = 0.0;
  double max_density = 0.0;
  double worst_spacing_deficit = 0.0;  // max over steps of (ell - min spacing)+
  double max_dt = 0.0;
  long steps = 0;
};

using StepCallback =
    std::function<void(const HybridState& state, double dt, double leader_velocity)>;

/// Steps the scenario from t=0 to t_end with the per-step CFL rule, recording
/// at the output cadence. The callback (optional) fires after every step with
/// the velocity of the first platoon's leader.
RunResult run_scenario(const Scenario& scenario, const RunOptions& options = {},
                       const StepCallback& on_step = nullptr);

}  // namespace mm

#endif  // MM_RUNNER_HPP
