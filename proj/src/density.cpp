#include "feketelab/density.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace feketelab {

int count_in_disk(const Configuration& config, Complex center, double R) {
  if (!(R > 0.0)) throw std::invalid_argument("count_in_disk: R <= 0");
  const double radius = R / std::sqrt(static_cast<double>(config.n()));
  int count = 0;
  for (int j = 0; j < config.n(); ++j)
    if (std::abs(config.points[j] - center) < radius) ++count;
  return count;
}

void require_sweep_entries(const FamilySweep& sweep,
                           const std::vector<int>& ns) {
  std::ostringstream missing;
  bool any = false;
  for (int n : ns)
    if (!sweep.results.count(n)) {
      missing << (any ? ", " : "") << n;
      any = true;
    }
  if (any)
    throw std::out_of_range("sweep is missing n = {" + missing.str() + "}");
}

namespace {

DensityRow make_row(const FamilySweep& sweep, int n,
                    const Configuration& config, Complex center, double R) {
  DensityRow row;
  row.n = n;
  row.R = R;
  row.center = center;
  row.depth = std::sqrt(static_cast<double>(n)) *
              distance_to_boundary(sweep.model, center);
  row.count = count_in_disk(config, center, R);
  row.normalized = row.count / (R * R * laplacian(sweep.model, center));
  return row;
}

}  // namespace

DensityProfile density_profile(const FamilySweep& sweep,
                               const CenterSpec& centers,
                               const std::vector<double>& R_grid) {
  DensityProfile profile;
  for (const auto& [n, result] : sweep.results) {
    std::vector<Complex> cs;
    if (const auto* fixed = std::get_if<std::vector<Complex>>(&centers)) {
      cs = *fixed;
    } else {
      const auto& rule = std::get<EdgeCenterRule>(centers);
      const Complex u = rule.direction / std::abs(rule.direction);
      const double scale = 1.0 - rule.depth / std::sqrt(static_cast<double>(n));
      if (scale < 0.0)
        throw std::invalid_argument(
            "density_profile: edge depth exceeds sqrt(n)");
      cs = {scale * u};
    }
    for (Complex c : cs)
      for (double R : R_grid)
        profile.push_back(make_row(sweep, n, result.config, c, R));
  }
  return profile;
}

DensityProfile density_vs_depth(const FamilySweep& sweep, int n,
                                const std::vector<double>& depths, double R) {
  const auto it = sweep.results.find(n);
  if (it == sweep.results.end()) {
    std::ostringstream msg;
    msg << "density_vs_depth: missing n = " << n << " in sweep";
    throw std::out_of_range(msg.str());
  }
  DensityProfile profile;
  for (double L : depths) {
    const double scale = 1.0 - L / std::sqrt(static_cast<double>(n));
    if (scale < 0.0)
      throw std::invalid_argument("density_vs_depth: depth exceeds sqrt(n)");
    profile.push_back(
        make_row(sweep, n, it->second.config, Complex(scale, 0.0), R));
  }
  return profile;
}

}  // namespace feketelab
