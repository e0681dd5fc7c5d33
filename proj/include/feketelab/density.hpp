#pragma once

#include <cstdint>
#include <map>
#include <variant>
#include <vector>

#include "feketelab/fekete.hpp"
#include "feketelab/potential.hpp"
#include "feketelab/types.hpp"

namespace feketelab {

// Converged Fekete families indexed by n, with the provenance needed to
// reproduce them.
struct FamilySweep {
  PotentialModel model;
  std::map<int, FeketeResult> results;
  double grad_tol = 0.0;
  std::uint64_t seed = 0;
  int restarts = 0;
};

struct DensityRow {
  int n = 0;
  double R = 0.0;
  Complex center{0.0, 0.0};
  double depth = 0.0;  // sqrt(n) * dist(center, boundary)
  int count = 0;
  double normalized = 0.0;  // count / (R^2 LapQ(center))
};
using DensityProfile = std::vector<DensityRow>;

// Center placement: either fixed points, or the edge rule
// z_n = (1 - L/sqrt(n)) * u for a unit direction u and depth L.
struct EdgeCenterRule {
  Complex direction{1.0, 0.0};
  double depth = 0.0;
};
using CenterSpec = std::variant<std::vector<Complex>, EdgeCenterRule>;

// Number of points of the configuration in the open disk
// D(center; R / sqrt(n)).
int count_in_disk(const Configuration& config, Complex center, double R);

// Throws out_of_range listing every requested n absent from the sweep.
void require_sweep_entries(const FamilySweep& sweep,
                           const std::vector<int>& ns);

// Normalized disk counts over the sweep's n values, the given centers and
// the R grid.  Missing n values raise with the absent entries listed.
DensityProfile density_profile(const FamilySweep& sweep,
                               const CenterSpec& centers,
                               const std::vector<double>& R_grid);

// Edge crossover: centers (1 - L/sqrt(n)) * 1 for each depth L.
DensityProfile density_vs_depth(const FamilySweep& sweep, int n,
                                const std::vector<double>& depths, double R);

}  // namespace feketelab
