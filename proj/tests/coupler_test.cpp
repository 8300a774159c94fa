#include <cmath>
#include <vector>

#include <doctest.h>

#include "mm/coupler.hpp"

using namespace mm;

namespace {
const SpeedLaw g1 = SpeedLaw::greenshields(1.0);

HybridState vacuum_lwr_ftl(std::vector<double> positions, double w,
                           double dx = 0.05) {
  HybridState s;
  s.variant = ModelVariant::LwrFtl;
  s.field = DensityField::zeros(-4.0, 4.0, dx);
  s.field.window_b = positions.front();
  Platoon pl{VehicleColumn(0.49, std::move(positions)),
             SpeedProfile::constant(w), true, false};
  s.platoons.push_back(std::move(pl));
  return s;
}
}  // namespace

TEST_CASE("jammed platoon over vacuum is a fixed point") {
  // Gaps at the length floor, leader held still. The imposed density is 1,
  // but the wave it would emit into vacuum rides exactly on the boundary,
  // so nothing is released and the whole state is stationary.
  HybridState s = vacuum_lwr_ftl({0.0, 0.49, 0.98}, 0.0);
  const std::vector<double> p0 = s.platoons[0].column.positions();
  CHECK(s.platoons[0].imposed_density() == doctest::Approx(1.0).epsilon(1e-14));
  for (int k = 0; k < 50; ++k) s = step(s, g1, global_cfl_dt(s, g1, 0.9));
  CHECK(s.platoons[0].column.positions() == p0);
  CHECK(s.field.total_mass() <= 1e-12);
  CHECK(s.field.window_b == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("evenly spaced convoy translates rigidly at its common speed") {
  // Gaps 2*ell give follower speed v(1/2) = 1/2; with the leader profile at
  // 1/2 the convoy is a traveling wave and leaves the vacuum untouched.
  HybridState s = vacuum_lwr_ftl({0.0, 0.98, 1.96}, 0.5);
  const std::vector<double> p0 = s.platoons[0].column.positions();
  double t = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double dt = global_cfl_dt(s, g1, 0.9);
    s = step(s, g1, dt);
    t += dt;
  }
  for (int i = 0; i < 3; ++i)
    CHECK(s.platoons[0].column.positions()[i] ==
          doctest::Approx(p0[i] + 0.5 * t).epsilon(1e-12));
  CHECK(s.field.total_mass() <= 1e-12);
  CHECK(s.time == doctest::Approx(t).epsilon(1e-12));
}

TEST_CASE("downstream density dictates the leader speed") {
  auto make = [](double rho_ahead) {
    HybridState s;
    s.variant = ModelVariant::FtlLwr;
    s.field = DensityField::zeros(0.0, 4.0, 0.05);
    for (double& r : s.field.rho) r = rho_ahead;
    s.field.window_a = 0.0;
    Platoon pl{VehicleColumn(0.49, {-1.5, -1.0, -0.5, 0.0}),
               SpeedProfile::constant(0.0), false, true};
    s.platoons.push_back(std::move(pl));
    return s;
  };

  HybridState jammed = make(1.0);
  const double dt = 0.01;
  jammed = step(jammed, g1, dt);
  CHECK(jammed.platoons[0].column.front() == doctest::Approx(0.0).epsilon(1e-14));

  HybridState open = make(0.0);
  open = step(open, g1, dt);
  CHECK(open.platoons[0].column.front() ==
        doctest::Approx(g1.free_speed() * dt).epsilon(1e-13));
}

TEST_CASE("single-platoon general stepping matches the dedicated variants") {
  HybridState a = vacuum_lwr_ftl({0.5, 1.2, 2.0}, 0.75);
  for (int k = 0; k < a.field.cells(); ++k) {
    const double x = a.field.center(k);
    if (x < 0.0 && a.field.active(k)) a.field.rho[k] = 0.4;
  }
  HybridState b = a;
  b.variant = ModelVariant::General;

  const double dt = global_cfl_dt(a, g1, 0.9);
  const HybridState a1 = step_lwr_ftl(a, g1, dt);
  const HybridState b1 = step_general(b, g1, dt);
  CHECK(a1.field.rho == b1.field.rho);
  CHECK(a1.platoons[0].column.positions() == b1.platoons[0].column.positions());
  CHECK(a1.time == b1.time);
}

TEST_CASE("ill-formed layouts are rejected") {
  // Platoon span protruding past the window edge.
  HybridState s = vacuum_lwr_ftl({0.0, 0.49, 0.98}, 0.0);
  s.field.window_b = 1.0;  // claims macro phase on top of the platoon
  CHECK_THROWS(check_phase_separation(s));

  HybridState ok = vacuum_lwr_ftl({0.0, 0.49, 0.98}, 0.0);
  CHECK_NOTHROW(check_phase_separation(ok));

  CHECK_THROWS_AS(step(ok, g1, 1.0), CflError);
}
