#ifndef MM_SCENARIO_HPP
#define MM_SCENARIO_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "mm/coupler.hpp"
#include "mm/diagnostics.hpp"

namespace mm {

/// Scenario document violation; what() carries a field-path message.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DensityPiece {
  double a = 0.0, b = 0.0, value = 0.0;  // constant value on [a, b]
};

struct GridSpec {
  double x_min = 0.0, x_max = 0.0, dx = 0.0;
};

struct Scenario {
  ModelVariant variant = ModelVariant::General;
  std::string family = "greenshields";
  double vmax = 1.0;
  double ell = 0.0;
  std::vector<std::vector<double>> platoons;
  SpeedProfile leader_w;  // lwr_ftl only
  std::vector<DensityPiece> pieces;
  GridSpec grid;
  double cfl = 0.9;
  double t_end = 0.0;
  double output_every = 0.1;

  SpeedLaw make_law() const;
};

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);
std::string serialize(const Scenario& scenario);

/// Exact cell averages of the piecewise-constant initial datum; the activity
/// window is set from the platoon layout.
DensityField rasterize_density(const Scenario& scenario);

HybridState make_initial_state(const Scenario& scenario);

struct Snapshot {
  HybridState state;
  DiagnosticsRecord diag;
};

/// Writes density.csv, trajectories.csv and diagnostics.csv (time-major,
/// deterministic row order) into the sink directory.
void write_outputs(const std::vector<Snapshot>& history, const std::string& sink);

}  // namespace mm

#endif  // MM_SCENARIO_HPP
