#ifndef MM_VERIFY_HPP
#define MM_VERIFY_HPP

#include <string>
#include <vector>

#include "mm/speed_law.hpp"

namespace mm {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;  // measured margins, human readable
};

struct ConvergenceRow {
  double dx = 0.0;
  double error = 0.0;  // L1 distance to the exact fan at t_end
  double order = 0.0;  // log2(previous error / error), 0 for the first row
};

/// Pure Cauchy runs of a two-state datum on [-3, 3] with the jump at x = 0,
/// refined by halving dx `levels` times starting from dx0.
std::vector<ConvergenceRow> riemann_convergence(const SpeedLaw& law,
                                                double rho_l, double rho_r,
                                                double t_end, int levels,
                                                double dx0, double cfl = 0.9);

struct VerifyOptions {
  std::string scenario_dir;  // directory holding the bundled scenario files
  double cfl = 0.9;
};

/// Runs every verification suite and reports one result per suite. Suites
/// never throw; infrastructure failures are reported as failed checks.
std::vector<CheckResult> run_verification(const VerifyOptions& options);

}  // namespace mm

#endif  // MM_VERIFY_HPP
