#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "mm/ftl.hpp"

using namespace mm;

namespace {
const SpeedLaw g1 = SpeedLaw::greenshields(1.0);
}

TEST_CASE("speed profiles evaluate piecewise and reject bad breakpoints") {
  const SpeedProfile c = SpeedProfile::constant(0.75);
  CHECK(c(0.0) == 0.75);
  CHECK(c(10.0) == 0.75);
  CHECK(c.max_value() == 0.75);

  const SpeedProfile w =
      SpeedProfile::from_breakpoints({{0.0, 0.5}, {0.5, 1.0}});
  CHECK(w(0.0) == 0.5);
  CHECK(w(0.49) == 0.5);
  CHECK(w(0.5) == 1.0);
  CHECK(w(3.0) == 1.0);
  CHECK(w.max_value() == 1.0);

  CHECK_THROWS(SpeedProfile::from_breakpoints({}));
  CHECK_THROWS(SpeedProfile::from_breakpoints({{0.1, 0.5}}));       // first t != 0
  CHECK_THROWS(SpeedProfile::from_breakpoints({{0.0, 0.5}, {0.0, 1.0}}));
  CHECK_THROWS(SpeedProfile::from_breakpoints({{0.0, -0.5}}));      // negative speed
}

TEST_CASE("profile L1 distance on the merged breakpoint grid") {
  const SpeedProfile a = SpeedProfile::constant(0.75);
  const SpeedProfile b =
      SpeedProfile::from_breakpoints({{0.0, 0.5}, {0.5, 1.0}});
  // |0.75-0.5|*0.5 + |0.75-1.0|*0.5 = 0.25
  CHECK(l1_distance(a, b, 1.0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(l1_distance(a, a, 7.0) == 0.0);
}

TEST_CASE("vehicle columns require ordered positions with full headways") {
  CHECK_NOTHROW(VehicleColumn(0.49, {0.0, 0.49, 1.5}));
  CHECK_THROWS(VehicleColumn(0.49, {0.0, 0.3}));    // gap below ell
  CHECK_THROWS(VehicleColumn(0.49, {1.0, 0.0}));    // unordered
  CHECK_THROWS(VehicleColumn(0.49, {}));            // empty
  CHECK_THROWS(VehicleColumn(-0.1, {0.0, 1.0}));    // bad length

  const VehicleColumn col(0.5, {0.0, 1.0, 1.5});
  CHECK(col.count() == 3);
  CHECK(col.rear() == 0.0);
  CHECK(col.front() == 1.5);
  CHECK(col.min_spacing() == 0.5);
  CHECK(col.spacing(0) == 1.0);
}

TEST_CASE("follow-the-leader right-hand side oracles") {
  const VehicleColumn col(0.49, {0.0, 0.49, 1.47});
  const std::vector<double> rhs = ftl_rhs(col, g1, 0.75);
  REQUIRE(rhs.size() == 3);
  CHECK(rhs[0] == doctest::Approx(0.0).epsilon(1e-14));   // gap == ell, jammed
  CHECK(rhs[1] == doctest::Approx(0.5).epsilon(1e-14));   // gap == 2*ell
  CHECK(rhs[2] == 0.75);                                  // prescribed leader
}

TEST_CASE("Euler step oracles") {
  // Fully jammed column with leader speed 0 is a fixed point.
  const VehicleColumn jam(0.49, {0.0, 0.49, 0.98});
  const VehicleColumn jam1 = euler_step(jam, g1, 0.0, 0.1);
  CHECK(jam1.positions() == jam.positions());
  CHECK(jam1.velocities() == std::vector<double>{0.0, 0.0, 0.0});

  // Pair at spacing 2*ell = 0.98, leader held still, dt = 0.1:
  // follower moves 0.5*0.1 = 0.05, spacing shrinks to 0.93.
  const VehicleColumn pair0(0.49, {0.0, 0.98});
  const VehicleColumn pair1 = euler_step(pair0, g1, 0.0, 0.1);
  CHECK(pair1.positions()[0] == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(pair1.positions()[1] == 0.98);
  CHECK(pair1.spacing(0) == doctest::Approx(0.93).epsilon(1e-14));

  // Leader at 0.75 advances exactly 0.075.
  const VehicleColumn lead1 = euler_step(pair0, g1, 0.75, 0.1);
  CHECK(lead1.front() == doctest::Approx(0.98 + 0.075).epsilon(1e-14));
  CHECK(lead1.velocities().back() == 0.75);
}

TEST_CASE("random columns keep order and space out no faster than free flow") {
  std::mt19937_64 rng(314);
  std::uniform_real_distribution<double> gap(0.0, 2.0);
  std::uniform_real_distribution<double> wdist(0.0, 1.0);
  const double ell = 0.49;
  const double dt = 1e-3;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> p{0.0};
    for (int i = 0; i < 6; ++i) p.push_back(p.back() + ell + gap(rng));
    VehicleColumn col(ell, std::move(p));
    const double w = wdist(rng);
    double worst = 0.0;
    for (int step = 0; step < 400; ++step) {
      col = euler_step(col, g1, w, dt);
      for (int i = 0; i + 1 < col.count(); ++i) {
        // discrete spacing floor: ell - V*dt, strictly positive order
        worst = std::max(worst, ell - col.spacing(i));
        CHECK(col.spacing(i) > 0.0);
      }
      for (double v : col.velocities()) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
      }
    }
    CHECK(worst <= g1.free_speed() * dt + 1e-14);
  }
}

TEST_CASE("stability ceiling closed form") {
  CHECK(gronwall_bound(g1, 0.49, 0.0, 0.3, 0.2) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(gronwall_bound(g1, 0.49, 5.0, 0.0, 0.0) == 0.0);
  CHECK(gronwall_bound(g1, 0.49, 1.0, 0.01, 0.0) ==
        doctest::Approx(0.01 * std::exp(2.0 / 0.49)).epsilon(1e-13));
}
