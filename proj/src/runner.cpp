#include "mm/runner.hpp"

#include <algorithm>
#include <cmath>

namespace mm {

RunResult run_scenario(const Scenario& scenario, const RunOptions& options,
                       const StepCallback& on_step) {
  Scenario sc = scenario;
  if (options.dx) sc.grid.dx = *options.dx;
  if (options.cfl) sc.cfl = *options.cfl;
  if (options.t_end) sc.t_end = *options.t_end;
  if (options.output_every) sc.output_every = *options.output_every;

  const SpeedLaw law = sc.make_law();
  HybridState state = make_initial_state(sc);

  RunResult result;
  result.min_density = 0.0;
  result.max_density = 0.0;
  result.history.push_back({state, record(state)});

  const double eps = 1e-12 * std::max(1.0, sc.t_end);
  double next_out = sc.output_every;
  while (state.time < sc.t_end - eps) {
    double dt = global_cfl_dt(state, law, sc.cfl);
    dt = std::min(dt, sc.t_end - state.time);
    if (next_out < sc.t_end && next_out > state.time + eps)
      dt = std::min(dt, next_out - state.time);
    state = step(state, law, dt);

    result.max_dt = std::max(result.max_dt, dt);
    ++result.steps;
    for (double rho : state.field.rho) {
      result.min_density = std::min(result.min_density, rho);
      result.max_density = std::max(result.max_density, rho);
    }
    for (const auto& pl : state.platoons)
      result.worst_spacing_deficit = std::max(
          result.worst_spacing_deficit, sc.ell - pl.column.min_spacing());
    if (on_step)
      on_step(state, dt, state.platoons.front().column.velocities().back());

    const bool at_cadence = std::abs(state.time - next_out) <= eps;
    const bool at_end = std::abs(state.time - sc.t_end) <= eps;
    if (at_cadence || at_end) {
      result.history.push_back({state, record(state)});
      if (at_cadence) next_out += sc.output_every;
    }
  }
  result.worst_spacing_deficit = std::max(0.0, result.worst_spacing_deficit);
  return result;
}

}  // namespace mm
