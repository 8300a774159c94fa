#include "mm/coupler.hpp"

#include "mm/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp_density(double rho) { return std::clamp(rho, 0.0, 1.0); }

double leader_speed_of(const HybridState& s, const SpeedLaw& law, const Platoon& pl) {
  if (!pl.macro_right) return pl.leader_w(s.time);
  const double rho = sample_density(s.field, pl.column.front(), Side::Right);
  return law.v(clamp_density(rho));
}

// Ghost/firewall layout around one platoon. Cells in [p1, p1 + 2.5 dx) carry
// the boundary density for the macro segment on the left; cells from there
// to the span midpoint are kept at zero so the boundary value cannot diffuse
// across the span toward the leader.
struct SpanZones {
  double bc_lo = kInf, bc_hi = -kInf;      // boundary-density cells
  double zero_lo = kInf, zero_hi = -kInf;  // forced-zero cells
  double imposed = 0.0;
};

SpanZones zones_for(const HybridState& s, const SpeedLaw& law, const Platoon& pl) {
  SpanZones z;
  if (!pl.macro_left) return z;
  const double dx = s.field.dx;
  const double p1 = pl.column.rear();
  const double pn = pl.column.front();
  // Weak imposition: the ghost value is the trace of the Riemann fan between
  // the wake state and the prescribed density, seen from the moving boundary.
  // It equals the prescribed density except when the wake is vacuum and the
  // emitted shock rides exactly on the boundary; then nothing is released.
  const double prescribed = clamp_density(pl.imposed_density());
  const double wake = clamp_density(sample_density(s.field, p1, Side::Left));
  z.imposed = boundary_trace(law, wake, prescribed, law.extended_u(prescribed));
  z.bc_lo = p1;
  z.bc_hi = p1 + 2.5 * dx;
  z.zero_lo = z.bc_hi;
  if (pl.macro_right) {
    const double mid = 0.5 * (p1 + pn);
    if (mid - p1 < 3.5 * dx)
      throw std::runtime_error("coupler: platoon span too narrow for the grid");
    z.zero_hi = mid;
  } else {
    z.zero_hi = kInf;  // no macro phase to the right of this platoon
  }
  return z;
}

HybridState advance(const HybridState& state, const SpeedLaw& law, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("coupler: dt must be positive");
  const DensityField& f = state.field;
  const int K = f.cells();

  std::vector<double> leader_speeds(state.platoons.size());
  std::vector<SpanZones> zones(state.platoons.size());
  double lambda_loc = 1e-6 * law.free_speed();
  for (std::size_t j = 0; j < state.platoons.size(); ++j) {
    leader_speeds[j] = leader_speed_of(state, law, state.platoons[j]);
    zones[j] = zones_for(state, law, state.platoons[j]);
    if (state.platoons[j].macro_left)
      lambda_loc = std::max(lambda_loc, std::abs(law.dflux(zones[j].imposed)));
  }
  for (int k = 0; k < K; ++k)
    lambda_loc = std::max(lambda_loc, std::abs(law.dflux(clamp_density(f.rho[k]))));
  if (dt > f.dx / lambda_loc * (1.0 + 1e-12))
    throw CflError("coupler: CFL violation");

  auto read = [&](int m) -> double {
    m = std::clamp(m, 0, K - 1);
    const double c = f.center(m);
    for (const auto& z : zones)
      if (c >= z.bc_lo && c < z.bc_hi) return z.imposed;
    return f.rho[m];
  };

  HybridState next = state;
  const double r = 0.5 * dt / f.dx;
  for (int k = 0; k < K; ++k) {
    const double c = f.center(k);
    bool handled = false;
    for (const auto& z : zones) {
      if (c >= z.bc_lo && c < z.bc_hi) {
        next.field.rho[k] = z.imposed;
        handled = true;
      } else if (c >= z.zero_lo && c <= z.zero_hi) {
        next.field.rho[k] = 0.0;
        handled = true;
      }
      if (handled) break;
    }
    if (handled) continue;
    const double vm = read(k - 1);
    const double vp = read(k + 1);
    next.field.rho[k] = 0.5 * (vm + vp) - r * (law.flux(vp) - law.flux(vm));
  }

  for (std::size_t j = 0; j < state.platoons.size(); ++j)
    next.platoons[j].column =
        euler_step(state.platoons[j].column, law, leader_speeds[j], dt);

  next.time = state.time + dt;
  next.field.time = next.time;
  switch (state.variant) {
    case ModelVariant::LwrFtl:
      next.field.window_b = next.platoons.front().column.rear();
      break;
    case ModelVariant::FtlLwr:
      next.field.window_a = next.platoons.front().column.front();
      break;
    case ModelVariant::General:
      break;
  }
  check_phase_separation(next);
  return next;
}

}  // namespace

double Platoon::imposed_density() const {
  return column.ell() / column.spacing(0);
}

double global_cfl_dt(const HybridState& state, const SpeedLaw& law, double cfl) {
  if (!(cfl > 0.0 && cfl <= 1.0))
    throw std::invalid_argument("global_cfl_dt: cfl in (0,1]");
  double lambda_loc = 1e-6 * law.free_speed();
  for (int k = 0; k < state.field.cells(); ++k)
    lambda_loc = std::max(lambda_loc,
                          std::abs(law.dflux(clamp_density(state.field.rho[k]))));
  for (const auto& pl : state.platoons)
    if (pl.macro_left)
      lambda_loc =
          std::max(lambda_loc, std::abs(law.dflux(clamp_density(pl.imposed_density()))));
  return cfl * state.field.dx / lambda_loc;
}

void check_phase_separation(const HybridState& state) {
  for (std::size_t j = 0; j < state.platoons.size(); ++j) {
    const auto& col = state.platoons[j].column;
    for (int i = 0; i + 1 < col.count(); ++i)
      if (col.spacing(i) < 0.0)
        throw std::runtime_error("coupler: vehicle ordering lost");
    if (j + 1 < state.platoons.size() &&
        !(col.front() < state.platoons[j + 1].column.rear()))
      throw std::runtime_error("coupler: platoon spans overlap");
  }
  if (!state.platoons.empty()) {
    const double tol = 1e-7;
    if (std::isfinite(state.field.window_b) &&
        state.field.window_b > state.platoons.front().column.rear() + tol)
      throw std::runtime_error("coupler: macro window overlaps a platoon");
    if (std::isfinite(state.field.window_a) &&
        state.field.window_a < state.platoons.back().column.front() - tol)
      throw std::runtime_error("coupler: macro window overlaps a platoon");
  }
}

HybridState step_lwr_ftl(const HybridState& state, const SpeedLaw& law, double dt) {
  if (state.variant != ModelVariant::LwrFtl || state.platoons.size() != 1 ||
      !state.platoons[0].macro_left || state.platoons[0].macro_right)
    throw std::invalid_argument("step_lwr_ftl: layout mismatch");
  return advance(state, law, dt);
}

HybridState step_ftl_lwr(const HybridState& state, const SpeedLaw& law, double dt) {
  if (state.variant != ModelVariant::FtlLwr || state.platoons.size() != 1 ||
      state.platoons[0].macro_left || !state.platoons[0].macro_right)
    throw std::invalid_argument("step_ftl_lwr: layout mismatch");
  return advance(state, law, dt);
}

HybridState step_general(const HybridState& state, const SpeedLaw& law, double dt) {
  if (state.platoons.empty())
    throw std::invalid_argument("step_general: at least one platoon required");
  return advance(state, law, dt);
}

HybridState step(const HybridState& state, const SpeedLaw& law, double dt) {
  switch (state.variant) {
    case ModelVariant::LwrFtl:
      return step_lwr_ftl(state, law, dt);
    case ModelVariant::FtlLwr:
      return step_ftl_lwr(state, law, dt);
    case ModelVariant::General:
      return step_general(state, law, dt);
  }
  throw std::logic_error("step: unknown variant");
}

}  // namespace mm
