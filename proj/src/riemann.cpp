#include "mm/riemann.hpp"

#include <stdexcept>

namespace mm {

RiemannFan::RiemannFan(const SpeedLaw& law, double rho_l, double rho_r)
    : law_(law), rho_l_(rho_l), rho_r_(rho_r) {
  if (!(rho_l >= 0.0 && rho_l <= 1.0) || !(rho_r >= 0.0 && rho_r <= 1.0))
    throw std::domain_error("solve_riemann: states outside [0,1]");
  if (rho_l == rho_r) {
    kind_ = WaveKind::Constant;
  } else if (rho_l < rho_r) {
    // Entropy shock for concave flux: jump up in density.
    kind_ = WaveKind::Shock;
    sigma_ = (law_.flux(rho_l) - law_.flux(rho_r)) / (rho_l - rho_r);
  } else {
    kind_ = WaveKind::Rarefaction;
  }
  xi_left_ = law_.dflux(rho_l);
  xi_right_ = law_.dflux(rho_r);
}

double RiemannFan::invert_dflux(double xi) const {
  // f' is strictly decreasing; for Greenshields f'(rho) = V(1-2rho).
  if (law_.is_greenshields())
    return 0.5 * (1.0 - xi / law_.free_speed());
  double lo = rho_r_, hi = rho_l_;  // f'(lo) >= xi >= f'(hi)
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (law_.dflux(mid) > xi)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double RiemannFan::sample(double xi) const {
  switch (kind_) {
    case WaveKind::Constant:
      return rho_l_;
    case WaveKind::Shock:
      return xi < sigma_ ? rho_l_ : rho_r_;
    case WaveKind::Rarefaction:
      if (xi <= xi_left_) return rho_l_;
      if (xi >= xi_right_) return rho_r_;
      return invert_dflux(xi);
  }
  return rho_l_;
}

double RiemannFan::sample_left_limit(double xi) const {
  if (kind_ == WaveKind::Shock) return xi <= sigma_ ? rho_l_ : rho_r_;
  return sample(xi);  // continuous profiles
}

RiemannFan solve_riemann(const SpeedLaw& law, double rho_l, double rho_r) {
  return RiemannFan(law, rho_l, rho_r);
}

double sample_fan(const RiemannFan& fan, double xi) { return fan.sample(xi); }

double boundary_trace(const SpeedLaw& law, double interior_state,
                      double boundary_state, double boundary_speed) {
  const RiemannFan fan(law, interior_state, boundary_state);
  return fan.sample_left_limit(boundary_speed);
}

}  // namespace mm
