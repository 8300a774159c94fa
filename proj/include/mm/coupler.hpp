#ifndef MM_COUPLER_HPP
#define MM_COUPLER_HPP

#include <vector>

#include "mm/ftl.hpp"
#include "mm/lwr_grid.hpp"
#include "mm/speed_law.hpp"

namespace mm {

enum class ModelVariant { LwrFtl, FtlLwr, General };

/// One microscopic phase. macro_left / macro_right say whether a macroscopic
/// segment adjoins the platoon on that side; the prescribed profile is used
/// only when there is no macro phase on the right.
struct Platoon {
  VehicleColumn column;
  SpeedProfile leader_w;
  bool macro_left = true;
  bool macro_right = true;

  /// Density imposed at the p1 boundary: ell / (p2 - p1).
  double imposed_density() const;
};

/// Full state of the alternating model: the shared grid plus N platoons,
/// spatially ordered and non-overlapping.
struct HybridState {
  ModelVariant variant = ModelVariant::General;
  double time = 0.0;
  DensityField field;
  std::vector<Platoon> platoons;
};

/// Shared time step: min over macro cells of the CFL rule, also applied to
/// the ODEs.
double global_cfl_dt(const HybridState& state, const SpeedLaw& law, double cfl);

/// Throws when platoon spans overlap, ordering is lost or a column spacing
/// falls below the discrete slack.
void check_phase_separation(const HybridState& state);

HybridState step_lwr_ftl(const HybridState& state, const SpeedLaw& law, double dt);
HybridState step_ftl_lwr(const HybridState& state, const SpeedLaw& law, double dt);
HybridState step_general(const HybridState& state, const SpeedLaw& law, double dt);

/// Dispatch on state.variant.
HybridState step(const HybridState& state, const SpeedLaw& law, double dt);

}  // namespace mm

#endif  // MM_COUPLER_HPP
