#ifndef MM_SPEED_LAW_HPP
#define MM_SPEED_LAW_HPP

#include <functional>
#include <string>
#include <vector>

namespace mm {

struct LawCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<LawCheck> checks;
  bool all_passed() const;
};

/// Speed law v(rho) on [0,1] and the associated flux f(rho) = rho*v(rho).
///
/// Immutable after construction; all member functions are pure, so instances
/// can be shared freely between threads. Derivatives are analytic, never
/// finite differences.
class SpeedLaw {
 public:
  /// v(rho) = vmax*(1 - rho).
  static SpeedLaw greenshields(double vmax);

  /// User-supplied analytic law. All three derivatives handles are required
  /// so that flux concavity can be checked exactly at sample points.
  static SpeedLaw analytic(std::string name, std::function<double(double)> v,
                           std::function<double(double)> dv,
                           std::function<double(double)> d2v);

  double v(double rho) const;  // throws std::domain_error outside [0,1]
  double dv(double rho) const;
  double d2v(double rho) const;
  double flux(double rho) const;    // rho * v(rho)
  double dflux(double rho) const;   // v + rho*v'
  double d2flux(double rho) const;  // 2v' + rho*v''

  /// Bounded Lipschitz extension of v to the whole real line:
  /// v(0) for rho < 0, v(rho) on [0,1], 0 for rho > 1.
  double extended_u(double rho) const;

  double free_speed() const { return v0_; }  // v(0)
  double lipschitz() const { return lip_; }  // max |v'| on [0,1]
  double lambda() const { return lambda_; }  // max |f'| on [0,1]

  /// Exponent (1 + max_{(0,1]} (v(rho)-v(0))/(rho*v'(rho)))^-1, the ratio
  /// extended by continuity (value 1) at rho = 0. Throws if v' vanishes on
  /// the maximization range.
  double holder_alpha() const;

  bool is_greenshields() const { return greenshields_; }
  const std::string& name() const { return name_; }

  /// Checks strict decrease, v(1)=0, v>=0 and strict flux concavity on a
  /// uniform grid of n_samples points (n_samples >= 3). Failures are report
  /// entries, not errors.
  ValidationReport validate(int n_samples) const;

 private:
  SpeedLaw() = default;
  void init_bounds();

  std::string name_;
  bool greenshields_ = false;
  double vmax_ = 0.0;  // greenshields parameter
  std::function<double(double)> v_fn_, dv_fn_, d2v_fn_;
  double v0_ = 0.0;
  double lip_ = 0.0;
  double lambda_ = 0.0;
};

}  // namespace mm

#endif  // MM_SPEED_LAW_HPP
