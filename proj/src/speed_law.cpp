#include "mm/speed_law.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mm {

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const LawCheck& c) { return c.passed; });
}

SpeedLaw SpeedLaw::greenshields(double vmax) {
  if (!(vmax > 0.0)) throw std::invalid_argument("greenshields: vmax must be positive");
  SpeedLaw law;
  law.name_ = "greenshields";
  law.greenshields_ = true;
  law.vmax_ = vmax;
  law.v0_ = vmax;
  law.lip_ = vmax;     // |v'| = vmax
  law.lambda_ = vmax;  // f' = vmax*(1-2rho) in [-vmax, vmax]
  return law;
}

SpeedLaw SpeedLaw::analytic(std::string name, std::function<double(double)> v,
                            std::function<double(double)> dv,
                            std::function<double(double)> d2v) {
  if (!v || !dv || !d2v) throw std::invalid_argument("analytic: all handles required");
  SpeedLaw law;
  law.name_ = std::move(name);
  law.v_fn_ = std::move(v);
  law.dv_fn_ = std::move(dv);
  law.d2v_fn_ = std::move(d2v);
  law.v0_ = law.v_fn_(0.0);
  law.init_bounds();
  return law;
}

void SpeedLaw::init_bounds() {
  // Grid maximization for laws without closed-form bounds.
  constexpr int kSamples = 20001;
  double lip = 0.0, lam = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const double rho = static_cast<double>(i) / (kSamples - 1);
    lip = std::max(lip, std::abs(dv_fn_(rho)));
    lam = std::max(lam, std::abs(v_fn_(rho) + rho * dv_fn_(rho)));
  }
  lip_ = lip;
  lambda_ = lam;
}

namespace {

// Scheme round-off may leave cell averages a few ulp outside [0,1]; accept
// and clamp within this slack, reject anything larger.
constexpr double kDomainSlack = 1e-12;

double clamp_density(double rho, const char* who) {
  if (!(rho >= -kDomainSlack && rho <= 1.0 + kDomainSlack))
    throw std::domain_error(std::string(who) + ": density outside [0,1]");
  return std::clamp(rho, 0.0, 1.0);
}

}  // namespace

double SpeedLaw::v(double rho) const {
  rho = clamp_density(rho, "SpeedLaw::v");
  return greenshields_ ? vmax_ * (1.0 - rho) : v_fn_(rho);
}

double SpeedLaw::dv(double rho) const {
  rho = clamp_density(rho, "SpeedLaw::dv");
  return greenshields_ ? -vmax_ : dv_fn_(rho);
}

double SpeedLaw::d2v(double rho) const {
  rho = clamp_density(rho, "SpeedLaw::d2v");
  return greenshields_ ? 0.0 : d2v_fn_(rho);
}

double SpeedLaw::flux(double rho) const { return rho * v(rho); }

double SpeedLaw::dflux(double rho) const { return v(rho) + rho * dv(rho); }

double SpeedLaw::d2flux(double rho) const { return 2.0 * dv(rho) + rho * d2v(rho); }

double SpeedLaw::extended_u(double rho) const {
  if (rho < 0.0) return v0_;
  if (rho > 1.0) return 0.0;
  return v(rho);
}

double SpeedLaw::holder_alpha() const {
  // max over (0,1] of (v(rho)-v(0))/(rho*v'(rho)); the limit at rho->0 is 1.
  // For the affine law the ratio is identically 1, exponent exactly 1/2.
  if (greenshields_) return 0.5;
  double max_ratio = 1.0;
  constexpr int kSamples = 10001;
  for (int i = 1; i < kSamples; ++i) {
    const double rho = static_cast<double>(i) / (kSamples - 1);
    const double slope = dv(rho);
    if (slope == 0.0)
      throw std::runtime_error("holder_alpha: v' vanishes on the maximization range");
    max_ratio = std::max(max_ratio, (v(rho) - v0_) / (rho * slope));
  }
  return 1.0 / (1.0 + max_ratio);
}

ValidationReport SpeedLaw::validate(int n_samples) const {
  if (n_samples < 3) throw std::invalid_argument("validate: n_samples >= 3 required");
  ValidationReport report;

  auto add = [&report](const std::string& name, bool ok, const std::string& detail) {
    report.checks.push_back({name, ok, detail});
  };

  bool decreasing = true, nonnegative = true, concave = true;
  std::ostringstream where;
  for (int i = 0; i < n_samples; ++i) {
    const double rho = static_cast<double>(i) / (n_samples - 1);
    if (v(rho) < 0.0) nonnegative = false;
    if (i > 0) {
      const double prev = static_cast<double>(i - 1) / (n_samples - 1);
      if (!(v(prev) > v(rho))) decreasing = false;
    }
    if (!(d2flux(rho) < 0.0)) {
      if (concave) where << "f'' >= 0 at rho=" << rho;
      concave = false;
    }
  }
  add("strictly_decreasing", decreasing, decreasing ? "" : "v not strictly decreasing");
  const bool jam_zero = v(1.0) == 0.0;
  add("v_at_jam_zero", jam_zero, jam_zero ? "" : "v(1) != 0");
  add("flux_strictly_concave", concave, where.str());
  add("nonnegative_speed", nonnegative, nonnegative ? "" : "v < 0 somewhere");
  return report;
}

}  // namespace mm
