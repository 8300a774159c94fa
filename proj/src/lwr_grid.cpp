#include "mm/lwr_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mm {

DensityField DensityField::zeros(double x_min, double x_max, double dx) {
  if (!(dx > 0.0)) throw std::invalid_argument("DensityField: dx must be positive");
  const int k = static_cast<int>(std::llround((x_max - x_min) / dx));
  if (k < 3) throw std::invalid_argument("DensityField: at least 3 cells required");
  DensityField f;
  f.x_min = x_min;
  f.dx = dx;
  f.rho.assign(k, 0.0);
  return f;
}

int DensityField::cell_index(double x) const {
  return static_cast<int>(std::floor((x - x_min) / dx));
}

double DensityField::total_mass() const {
  double m = 0.0;
  for (int k = 0; k < cells(); ++k)
    if (active(k)) m += rho[k];
  return m * dx;
}

double cfl_dt(const DensityField& field, const SpeedLaw& law, double cfl) {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("cfl_dt: cfl in (0,1]");
  double lambda_loc = 0.0;
  bool any = false;
  for (int k = 0; k < field.cells(); ++k) {
    if (!field.active(k)) continue;
    any = true;
    lambda_loc = std::max(lambda_loc, std::abs(law.dflux(field.rho[k])));
  }
  if (!any) throw std::runtime_error("cfl_dt: empty active window");
  lambda_loc = std::max(lambda_loc, 1e-6 * law.free_speed());
  return cfl * field.dx / lambda_loc;
}

namespace {

double ghost_value(const DensityField& f, const std::optional<BoundaryDatum>& left,
                   const std::optional<BoundaryDatum>& right, int m) {
  m = std::clamp(m, 0, f.cells() - 1);
  if (f.active(m)) return f.rho[m];
  if (f.center(m) < f.window_a) return left ? left->density : 0.0;
  return right ? right->density : 0.0;
}

}  // namespace

DensityField lax_friedrichs_step(const DensityField& field, const SpeedLaw& law,
                                 double dt,
                                 const std::optional<BoundaryDatum>& left,
                                 const std::optional<BoundaryDatum>& right) {
  if (!(dt > 0.0)) throw std::invalid_argument("lax_friedrichs_step: dt must be positive");
  for (const auto& bd : {left, right})
    if (bd && !(bd->density >= 0.0 && bd->density <= 1.0))
      throw std::runtime_error("lax_friedrichs_step: imposed density outside [0,1]");

  double lambda_loc = 1e-6 * law.free_speed();
  for (int k = 0; k < field.cells(); ++k)
    if (field.active(k))
      lambda_loc = std::max(lambda_loc, std::abs(law.dflux(field.rho[k])));
  for (const auto& bd : {left, right})
    if (bd) lambda_loc = std::max(lambda_loc, std::abs(law.dflux(bd->density)));
  if (dt > field.dx / lambda_loc * (1.0 + 1e-12))
    throw CflError("lax_friedrichs_step: CFL violation");

  DensityField next = field;
  const double r = 0.5 * dt / field.dx;
  for (int k = 0; k < field.cells(); ++k) {
    if (!field.active(k)) continue;
    const double vm = ghost_value(field, left, right, k - 1);
    const double vp = ghost_value(field, left, right, k + 1);
    next.rho[k] = 0.5 * (vm + vp) - r * (law.flux(vp) - law.flux(vm));
  }

  if (left && std::isfinite(next.window_a)) next.window_a += dt * left->speed;
  if (right && std::isfinite(next.window_b)) next.window_b += dt * right->speed;
  for (int k = 0; k < next.cells(); ++k)
    if (!next.active(k)) next.rho[k] = 0.0;
  next.time = field.time + dt;
  return next;
}

double sample_density(const DensityField& field, double x, Side limit) {
  if (!(x >= field.x_min && x <= field.x_max()))
    throw std::out_of_range("sample_density: x beyond grid extent");
  const double s = (x - field.x_min) / field.dx;
  int k = static_cast<int>(std::floor(s));
  if (limit == Side::Left) {
    if (s == std::floor(s)) --k;  // exactly on an edge: cell to the left
    for (; k >= 0; --k)
      if (field.active(k)) return field.rho[k];
  } else {
    for (; k < field.cells(); ++k)
      if (field.active(k)) return field.rho[k];
  }
  return 0.0;
}

double l1_distance(const DensityField& a, const DensityField& b) {
  if (a.cells() != b.cells() || a.dx != b.dx || a.x_min != b.x_min)
    throw std::invalid_argument("l1_distance: grid mismatch");
  double sum = 0.0;
  for (int k = 0; k < a.cells(); ++k) sum += std::abs(a.rho[k] - b.rho[k]);
  return sum * a.dx;
}

}  // namespace mm
