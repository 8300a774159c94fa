#include "mm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mm {

namespace {

// Integral of the piecewise-constant field over [lo, hi] with fractional
// overlap weights at the interval ends.
double integrate(const DensityField& f, double lo, double hi) {
  double mass = 0.0;
  for (int k = 0; k < f.cells(); ++k) {
    const double cl = f.x_min + k * f.dx;
    const double overlap = std::min(hi, cl + f.dx) - std::max(lo, cl);
    if (overlap > 0.0) mass += f.rho[k] * overlap;
  }
  return mass;
}

}  // namespace

double segment_mass(const HybridState& state, int j) {
  const int n = static_cast<int>(state.platoons.size());
  if (j < 1 || j > n - 1)
    throw std::out_of_range("segment_mass: invalid strip index");
  const double lo = state.platoons[j - 1].column.front();
  const double hi = state.platoons[j].column.rear();
  return integrate(state.field, lo, hi);
}

double total_variation(const DensityField& field) {
  double tv = 0.0;
  int prev = -1;
  for (int k = 0; k < field.cells(); ++k) {
    if (!field.active(k)) continue;
    if (prev == k - 1) tv += std::abs(field.rho[k] - field.rho[prev]);
    prev = k;
  }
  return tv;
}

DiagnosticsRecord record(const HybridState& state) {
  DiagnosticsRecord rec;
  rec.time = state.time;
  rec.total_mass = state.field.total_mass();
  const int n = static_cast<int>(state.platoons.size());
  for (int j = 1; j <= n - 1; ++j)
    rec.segment_masses.push_back(segment_mass(state, j));

  rec.min_spacing = std::numeric_limits<double>::infinity();
  for (const auto& pl : state.platoons) {
    rec.min_spacing = std::min(rec.min_spacing, pl.column.min_spacing());
    rec.leader_speeds.push_back(pl.column.velocities().back());
  }

  rec.min_density = std::numeric_limits<double>::infinity();
  rec.max_density = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < state.field.cells(); ++k) {
    rec.min_density = std::min(rec.min_density, state.field.rho[k]);
    rec.max_density = std::max(rec.max_density, state.field.rho[k]);
  }
  rec.total_variation = total_variation(state.field);
  return rec;
}

}  // namespace mm
