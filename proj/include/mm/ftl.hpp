#ifndef MM_FTL_HPP
#define MM_FTL_HPP

#include <utility>
#include <vector>

#include "mm/speed_law.hpp"

namespace mm {

/// Piecewise-constant speed profile w(t) with breakpoints, w in [0, v(0)].
class SpeedProfile {
 public:
  SpeedProfile();  // identically zero
  static SpeedProfile constant(double w);
  /// Breakpoints are (t, value) pairs, t strictly ascending, first t == 0.
  static SpeedProfile from_breakpoints(std::vector<std::pair<double, double>> pts);

  double operator()(double t) const;
  double max_value() const;
  const std::vector<std::pair<double, double>>& breakpoints() const { return pts_; }

 private:
  std::vector<std::pair<double, double>> pts_;
};

/// Exact L1 distance of two profiles on [0, t_end] via the merged breakpoint grid.
double l1_distance(const SpeedProfile& a, const SpeedProfile& b, double t_end);

/// Ordered vehicle positions p_1 <= ... <= p_n with headways at least the
/// vehicle length ell at construction.
class VehicleColumn {
 public:
  VehicleColumn(double ell, std::vector<double> positions);

  int count() const { return static_cast<int>(positions_.size()); }
  double ell() const { return ell_; }
  const std::vector<double>& positions() const { return positions_; }
  /// Velocities of the last completed step (zeros before any step).
  const std::vector<double>& velocities() const { return velocities_; }

  double spacing(int i) const { return positions_[i + 1] - positions_[i]; }
  double min_spacing() const;
  double rear() const { return positions_.front(); }
  double front() const { return positions_.back(); }

  friend VehicleColumn euler_step(const VehicleColumn&, const SpeedLaw&, double, double);

 private:
  double ell_;
  std::vector<double> positions_;
  std::vector<double> velocities_;
};

/// Right-hand side: followers move at u(ell/gap) with u the extended law,
/// the last vehicle at leader_speed.
std::vector<double> ftl_rhs(const VehicleColumn& column, const SpeedLaw& law,
                            double leader_speed);

/// One explicit forward Euler step; the input column is unchanged.
VehicleColumn euler_step(const VehicleColumn& column, const SpeedLaw& law,
                         double leader_speed, double dt);

/// (dp0 + dw_l1) * exp(2*Lip(v)*t/ell), the certified stability ceiling of the
/// ODE subsystem.
double gronwall_bound(const SpeedLaw& law, double ell, double t, double dp0,
                      double dw_l1);

}  // namespace mm

#endif  // MM_FTL_HPP
