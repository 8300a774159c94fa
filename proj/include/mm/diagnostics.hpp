#ifndef MM_DIAGNOSTICS_HPP
#define MM_DIAGNOSTICS_HPP

#include <vector>

#include "mm/coupler.hpp"

namespace mm {

struct DiagnosticsRecord {
  double time = 0.0;
  double total_mass = 0.0;                  // active macro cells
  std::vector<double> segment_masses;       // one per inter-platoon strip
  double min_spacing = 0.0;                 // over all platoons
  double min_density = 0.0, max_density = 0.0;
  double total_variation = 0.0;
  std::vector<double> leader_speeds;        // last computed, one per platoon
};

/// Integral of the density over the strip [p_{n_j}^j, p_1^{j+1}] between
/// consecutive platoons (j is 1-based, 1 <= j <= N-1), with fractional
/// weights for the two boundary cells.
double segment_mass(const HybridState& state, int j);

/// Sum of |rho_{k+1} - rho_k| over consecutive active cells.
double total_variation(const DensityField& field);

DiagnosticsRecord record(const HybridState& state);

}  // namespace mm

#endif  // MM_DIAGNOSTICS_HPP
