#ifndef MM_LWR_GRID_HPP
#define MM_LWR_GRID_HPP

#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mm/speed_law.hpp"

namespace mm {

enum class Side { Left, Right };

/// Thrown when a requested time step exceeds the stability limit.
class CflError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Uniform-grid cell averages of the density with an activity window
/// [window_a, window_b] (either edge may be infinite). Cells whose centers
/// fall outside the window are not part of the macroscopic phase.
struct DensityField {
  double x_min = 0.0;
  double dx = 0.0;
  double time = 0.0;
  double window_a = -std::numeric_limits<double>::infinity();
  double window_b = std::numeric_limits<double>::infinity();
  std::vector<double> rho;

  static DensityField zeros(double x_min, double x_max, double dx);

  int cells() const { return static_cast<int>(rho.size()); }
  double x_max() const { return x_min + dx * cells(); }
  double center(int k) const { return x_min + dx * (k + 0.5); }
  int cell_index(double x) const;  // floor((x - x_min)/dx), unclamped
  bool active(int k) const {
    const double c = center(k);
    return c >= window_a && c <= window_b;
  }
  double total_mass() const;  // over active cells
};

struct BoundaryDatum {
  Side side;
  double position = 0.0;
  double speed = 0.0;
  double density = 0.0;
};

/// cfl * dx / Lambda_loc with Lambda_loc the max of |f'| over active cells,
/// floored at 1e-6 * v(0). Throws if no cell is active.
double cfl_dt(const DensityField& field, const SpeedLaw& law, double cfl);

/// One Lax-Friedrichs step on the active cells. Ghost values outside the
/// window come from the boundary data (imposed density) or are zero when a
/// side has none; grid ends copy the edge cell. Finite window edges move by
/// dt * (datum speed) and cells exiting the window are zeroed.
DensityField lax_friedrichs_step(const DensityField& field, const SpeedLaw& law,
                                 double dt,
                                 const std::optional<BoundaryDatum>& left = {},
                                 const std::optional<BoundaryDatum>& right = {});

/// Piecewise-constant reconstruction with one-sided limits: the cell average
/// of the first active cell at or beyond x in the requested direction, 0 if
/// no active cell lies in that direction. Throws when x is outside the grid.
double sample_density(const DensityField& field, double x, Side limit);

/// Sum_k |a_k - b_k| * dx over the common grid; grids must match.
double l1_distance(const DensityField& a, const DensityField& b);

}  // namespace mm

#endif  // MM_LWR_GRID_HPP
