#include "mm/ftl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mm {

SpeedProfile::SpeedProfile() : pts_{{0.0, 0.0}} {}

SpeedProfile SpeedProfile::constant(double w) {
  SpeedProfile p;
  p.pts_ = {{0.0, w}};
  return p;
}

SpeedProfile SpeedProfile::from_breakpoints(std::vector<std::pair<double, double>> pts) {
  if (pts.empty() || pts.front().first != 0.0)
    throw std::invalid_argument("SpeedProfile: first breakpoint must be at t=0");
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (!(pts[i].first > pts[i - 1].first))
      throw std::invalid_argument("SpeedProfile: breakpoints must be ascending");
  for (const auto& [t, w] : pts)
    if (!(w >= 0.0))
      throw std::invalid_argument("SpeedProfile: speeds must be nonnegative");
  SpeedProfile p;
  p.pts_ = std::move(pts);
  return p;
}

double SpeedProfile::operator()(double t) const {
  double value = pts_.front().second;
  for (const auto& [tb, w] : pts_) {
    if (tb > t) break;
    value = w;
  }
  return value;
}

double SpeedProfile::max_value() const {
  double m = 0.0;
  for (const auto& [tb, w] : pts_) m = std::max(m, w);
  return m;
}

double l1_distance(const SpeedProfile& a, const SpeedProfile& b, double t_end) {
  std::vector<double> grid{0.0, t_end};
  for (const auto& [t, w] : a.breakpoints())
    if (t < t_end) grid.push_back(t);
  for (const auto& [t, w] : b.breakpoints())
    if (t < t_end) grid.push_back(t);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    sum += std::abs(a(grid[i]) - b(grid[i])) * (grid[i + 1] - grid[i]);
  return sum;
}

VehicleColumn::VehicleColumn(double ell, std::vector<double> positions)
    : ell_(ell), positions_(std::move(positions)) {
  if (!(ell > 0.0)) throw std::invalid_argument("VehicleColumn: ell must be positive");
  if (positions_.size() < 2)
    throw std::invalid_argument("VehicleColumn: at least two vehicles required");
  for (std::size_t i = 0; i + 1 < positions_.size(); ++i)
    if (!(positions_[i + 1] - positions_[i] >= ell))
      throw std::invalid_argument("VehicleColumn: headway below ell at construction");
  velocities_.assign(positions_.size(), 0.0);
}

double VehicleColumn::min_spacing() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < positions_.size(); ++i)
    m = std::min(m, positions_[i + 1] - positions_[i]);
  return m;
}

std::vector<double> ftl_rhs(const VehicleColumn& column, const SpeedLaw& law,
                            double leader_speed) {
  const auto& p = column.positions();
  const int n = column.count();
  std::vector<double> vel(n);
  for (int i = 0; i < n - 1; ++i) {
    if (!std::isfinite(p[i]) || !std::isfinite(p[i + 1]))
      throw std::runtime_error("ftl_rhs: non-finite position");
    vel[i] = law.extended_u(column.ell() / (p[i + 1] - p[i]));
  }
  vel[n - 1] = leader_speed;
  return vel;
}

VehicleColumn euler_step(const VehicleColumn& column, const SpeedLaw& law,
                         double leader_speed, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("euler_step: dt must be positive");
  VehicleColumn next = column;
  next.velocities_ = ftl_rhs(column, law, leader_speed);
  for (int i = 0; i < next.count(); ++i) {
    next.positions_[i] += dt * next.velocities_[i];
    if (!std::isfinite(next.positions_[i]))
      throw std::runtime_error("euler_step: non-finite position");
  }
  for (int i = 0; i + 1 < next.count(); ++i)
    if (next.positions_[i + 1] < next.positions_[i])
      throw std::runtime_error("euler_step: ordering lost");
  return next;
}

double gronwall_bound(const SpeedLaw& law, double ell, double t, double dp0,
                      double dw_l1) {
  return (dp0 + dw_l1) * std::exp(2.0 * law.lipschitz() * t / ell);
}

}  // namespace mm
