#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "mm/lwr_grid.hpp"
#include "mm/riemann.hpp"

using namespace mm;

namespace {
const SpeedLaw g1 = SpeedLaw::greenshields(1.0);

double tv(const DensityField& f) {
  double s = 0.0;
  for (int k = 0; k + 1 < f.cells(); ++k) s += std::abs(f.rho[k + 1] - f.rho[k]);
  return s;
}

DensityField random_field(std::mt19937_64& rng, double x_min, double x_max,
                          double dx) {
  std::uniform_real_distribution<double> real(0.0, 1.0);
  DensityField f = DensityField::zeros(x_min, x_max, dx);
  for (double& r : f.rho) r = real(rng);
  return f;
}
}  // namespace

TEST_CASE("stable step size") {
  DensityField f = DensityField::zeros(0.0, 1.0, 5e-4);
  // rho == 0: |f'| == 1 everywhere, dt = cfl * dx.
  CHECK(cfl_dt(f, g1, 0.9) == doctest::Approx(4.5e-4).epsilon(1e-14));
  // rho == 1/2 is the sonic state; the wave-speed floor keeps dt finite.
  for (double& r : f.rho) r = 0.5;
  const double dt = cfl_dt(f, g1, 0.9);
  CHECK(std::isfinite(dt));
  CHECK(dt >= 1e3 * f.dx);
}

TEST_CASE("oversized steps are refused") {
  DensityField f = DensityField::zeros(0.0, 1.0, 0.1);
  CHECK_THROWS_AS(lax_friedrichs_step(f, g1, 0.2), CflError);
  CHECK_NOTHROW(lax_friedrichs_step(f, g1, 0.09));
}

TEST_CASE("constants are exact steady states") {
  for (double c : {0.0, 0.3, 1.0}) {
    DensityField f = DensityField::zeros(-1.0, 1.0, 0.05);
    for (double& r : f.rho) r = c;
    const DensityField g = lax_friedrichs_step(f, g1, cfl_dt(f, g1, 0.9));
    for (double r : g.rho) CHECK(r == doctest::Approx(c).epsilon(1e-15));
    CHECK(g.time == doctest::Approx(f.time + cfl_dt(f, g1, 0.9)));
  }
}

TEST_CASE("compact data conserve mass to rounding") {
  DensityField f = DensityField::zeros(-2.0, 2.0, 0.02);
  for (int k = 0; k < f.cells(); ++k) {
    const double x = f.center(k);
    f.rho[k] = std::abs(x) < 0.5 ? 0.8 * (1.0 - 4.0 * x * x) : 0.0;
  }
  const double m0 = f.total_mass();
  for (int s = 0; s < 40; ++s) f = lax_friedrichs_step(f, g1, cfl_dt(f, g1, 0.9));
  CHECK(f.total_mass() == doctest::Approx(m0).epsilon(1e-12));
}

TEST_CASE("monotone-scheme structure on random data") {
  std::mt19937_64 rng(1729);
  for (int trial = 0; trial < 20; ++trial) {
    DensityField a = random_field(rng, 0.0, 2.0, 0.05);
    DensityField b = a;
    std::uniform_real_distribution<double> real(0.0, 1.0);
    for (double& r : b.rho) r = real(rng);

    const double dt = std::min(cfl_dt(a, g1, 0.9), cfl_dt(b, g1, 0.9));
    const DensityField a1 = lax_friedrichs_step(a, g1, dt);
    const DensityField b1 = lax_friedrichs_step(b, g1, dt);

    for (double r : a1.rho) {
      CHECK(r >= -1e-14);
      CHECK(r <= 1.0 + 1e-14);
    }
    CHECK(tv(a1) <= tv(a) + 1e-12);
    CHECK(l1_distance(a1, b1) <= l1_distance(a, b) + 1e-12);
  }
}

TEST_CASE("shock and rarefaction match the exact fan") {
  for (auto [rl, rr] : {std::pair{0.2, 0.8}, {0.9, 0.1}}) {
    DensityField f = DensityField::zeros(-2.0, 2.0, 0.01);
    for (int k = 0; k < f.cells(); ++k) f.rho[k] = f.center(k) < 0.0 ? rl : rr;
    const double t_end = 1.0;
    while (f.time < t_end - 1e-12) {
      const double dt = std::min(cfl_dt(f, g1, 0.9), t_end - f.time);
      f = lax_friedrichs_step(f, g1, dt);
    }
    const RiemannFan fan = solve_riemann(g1, rl, rr);
    double err = 0.0;
    for (int k = 0; k < f.cells(); ++k)
      err += std::abs(f.rho[k] - sample_fan(fan, f.center(k) / t_end)) * f.dx;
    CHECK(err < 0.05);
  }
}

TEST_CASE("one-sided density sampling") {
  DensityField f = DensityField::zeros(0.0, 1.0, 0.1);
  for (int k = 0; k < f.cells(); ++k) f.rho[k] = f.center(k) < 0.5 ? 0.2 : 0.9;

  CHECK(sample_density(f, 0.5, Side::Left) == 0.2);
  CHECK(sample_density(f, 0.5, Side::Right) == 0.9);
  CHECK(sample_density(f, 0.47, Side::Left) == 0.2);   // snaps to cell center 0.45
  CHECK(sample_density(f, 0.47, Side::Right) == 0.2);  // still inside cell 4

  f.window_a = 0.4;  // cells left of the window are not part of the phase
  CHECK(sample_density(f, 0.2, Side::Left) == 0.0);
  // first active cell to the right is centered at 0.45 and still holds 0.2
  CHECK(sample_density(f, 0.2, Side::Right) == 0.2);

  CHECK_THROWS(sample_density(f, -0.5, Side::Left));
  CHECK_THROWS(sample_density(f, 1.5, Side::Right));
}

TEST_CASE("grid L1 distance") {
  DensityField a = DensityField::zeros(0.0, 1.0, 0.1);
  DensityField b = a;
  CHECK(l1_distance(a, b) == 0.0);
  b.rho[3] = 1.0;
  CHECK(l1_distance(a, b) == doctest::Approx(0.1).epsilon(1e-14));
  DensityField c = DensityField::zeros(0.0, 1.0, 0.05);
  CHECK_THROWS(l1_distance(a, c));
}

TEST_CASE("boundary data feed the ghost cell of a windowed field") {
  DensityField f = DensityField::zeros(0.0, 1.0, 0.1);
  f.window_a = 0.25;  // first two cells inactive
  BoundaryDatum bd{Side::Left, 0.25, 0.0, 1.0};
  const double dt = 0.05;
  const DensityField g = lax_friedrichs_step(f, g1, dt, bd);
  // First active cell: 0.5*(rho_ghost + 0) - dt/(2 dx)*(f(0) - f(rho_ghost))
  // with rho_ghost = 1 and f(1) = f(0) = 0, hence exactly 1/2.
  const int k0 = 2;
  CHECK(g.rho[k0] == doctest::Approx(0.5).epsilon(1e-14));
  for (int k = 0; k < k0; ++k) CHECK(g.rho[k] == 0.0);
  CHECK(g.window_a == doctest::Approx(0.25).epsilon(1e-14));  // speed 0

  bd.density = 1.5;
  CHECK_THROWS(lax_friedrichs_step(f, g1, dt, bd));
}
