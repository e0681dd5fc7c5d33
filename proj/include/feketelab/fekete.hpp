#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "feketelab/kernel.hpp"
#include "feketelab/potential.hpp"
#include "feketelab/types.hpp"

namespace feketelab {

// An ordered n-point candidate configuration.
struct Configuration {
  Eigen::VectorXcd points;

  int n() const { return static_cast<int>(points.size()); }
};

struct OptimizerSettings {
  enum class StepRule { FixedBacktracking, BarzilaiBorwein };

  int max_iters = 50000;
  double grad_tol = 1e-7;  // residual threshold, relative to n
  int restarts = 2;
  std::uint64_t rng_seed = 1;
  StepRule step_rule = StepRule::BarzilaiBorwein;
};

struct FeketeResult {
  Configuration config;
  double energy = 0.0;
  double grad_inf_norm = 0.0;
  double first_order_residual = 0.0;
  int iterations = 0;
  int restart_index = 0;
};

// Raised when no restart reaches grad_tol; carries the best partial result.
class FeketeNonConvergence : public std::runtime_error {
 public:
  FeketeNonConvergence(const std::string& what, FeketeResult best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const FeketeResult& best() const { return best_; }

 private:
  FeketeResult best_;
};

// Weighted energy sum_{i!=j} log|z_i-z_j|^{-1} + n sum_j Q(z_j).
// Exact coincidence of two points returns +inf.
double energy(const Configuration& config, const PotentialModel& model);

// log of the weighted Vandermonde determinant; identically -energy.
double log_vandermonde(const Configuration& config,
                       const PotentialModel& model);

// Euclidean gradient of the energy, one R^2 row per point.
std::vector<Eigen::Vector2d> gradient(const Configuration& config,
                                      const PotentialModel& model);

// max_j |sum_{i!=j} 1/(z_j-z_i) - n dQ(z_j)| with dQ the complex
// derivative; zero exactly at critical configurations.
double first_order_residual(const Configuration& config,
                            const PotentialModel& model);

// Scale-invariant separation sqrt(n) * min_{i!=j} |z_i - z_j|.
double separation(const Configuration& config);

// Best critical configuration over `restarts` seeded descents (BB or
// fixed-step with backtracking, then damped Newton).
FeketeResult solve_fekete(int n, const PotentialModel& model,
                          const OptimizerSettings& settings);

// Weighted Lagrange basis ell_j(z) = l_j(z) e^{-n(Q(z)-Q(z_j))/2} in
// overflow-free form; exact Kronecker delta on the nodes.
LogPolar lagrange_weighted_log(const Configuration& config, int j, Complex z,
                               const PotentialModel& model);
double lagrange_weighted(const Configuration& config, int j, Complex z,
                         const PotentialModel& model);

// (1/n) log of the Leja-Siciak function max_j |l_j(z)|^2 e^{n Q(z_j)};
// dominated by Qhat(z) for Fekete configurations.
double leja_siciak(const Configuration& config, Complex z,
                   const PotentialModel& model);

// Fraction of points with |z_j| <= t for each t in the grid.
std::vector<double> radial_cdf(const Configuration& config,
                               const std::vector<double>& t_grid);

}  // namespace feketelab
