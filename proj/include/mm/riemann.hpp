#ifndef MM_RIEMANN_HPP
#define MM_RIEMANN_HPP

#include "mm/speed_law.hpp"

namespace mm {

enum class WaveKind { Shock, Rarefaction, Constant };

/// Self-similar exact solution of a scalar LWR Riemann problem.
///
/// For a strictly concave flux the entropy solution is a single shock when
/// rho_l < rho_r, a rarefaction when rho_l > rho_r and constant otherwise.
class RiemannFan {
 public:
  RiemannFan(const SpeedLaw& law, double rho_l, double rho_r);

  WaveKind kind() const { return kind_; }
  double left() const { return rho_l_; }
  double right() const { return rho_r_; }
  double sigma() const { return sigma_; }        // shock speed (Shock only)
  double xi_left() const { return xi_left_; }    // f'(rho_l)
  double xi_right() const { return xi_right_; }  // f'(rho_r)

  /// Value at similarity variable xi = x/t, right-continuous in xi.
  double sample(double xi) const;
  /// Left limit in xi (differs from sample only at a shock location).
  double sample_left_limit(double xi) const;

 private:
  double invert_dflux(double xi) const;

  SpeedLaw law_;
  double rho_l_, rho_r_;
  WaveKind kind_;
  double sigma_ = 0.0;
  double xi_left_ = 0.0, xi_right_ = 0.0;
};

RiemannFan solve_riemann(const SpeedLaw& law, double rho_l, double rho_r);

double sample_fan(const RiemannFan& fan, double xi);

/// Density trace just left of a boundary moving at boundary_speed, obtained
/// by solving the Riemann problem (interior_state, boundary_state) and
/// sampling the fan at xi = boundary_speed from the left.
double boundary_trace(const SpeedLaw& law, double interior_state,
                      double boundary_state, double boundary_speed);

}  // namespace mm

#endif  // MM_RIEMANN_HPP
