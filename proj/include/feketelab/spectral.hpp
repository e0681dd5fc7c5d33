#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "feketelab/fekete.hpp"
#include "feketelab/kernel.hpp"
#include "feketelab/types.hpp"

namespace feketelab {

struct DiskRegion {
  Complex center{0.0, 0.0};
  double radius = 0.0;
};

// Spectrum of a concentration operator: eigenvalues in [0,1] sorted
// decreasing, with the first two moments.
struct ConcentrationSpectrum {
  Eigen::VectorXd eigenvalues;
  double trace = 0.0;
  double trace_square = 0.0;
  int m = 0;
};

// Matrix of the concentration operator over the weighted orthonormal
// basis: M(j,k) = int_disk e_j(z) conj(e_k(z)) dA; Hermitian with
// 0 <= M <= I.
Eigen::MatrixXcd concentration_matrix(const KernelModel& kern,
                                      const DiskRegion& disk);

// Eigen-decomposition with residual verification ||Mv - lambda v|| <= 1e-8;
// eigenvalues outside [-band, 1+band] signal an assembly error.
ConcentrationSpectrum spectrum(const Eigen::MatrixXcd& matrix,
                               double band = 1e-10);

// Quadrature of the kernel diagonal over the disk (= trace).
double trace_direct(const KernelModel& kern, const DiskRegion& disk);

// Double quadrature of |K|^2 over disk x disk (= trace of the squared
// operator).
double trace_square_direct(const KernelModel& kern, const DiskRegion& disk);

// #\{j : lambda_j >= threshold\}.
int plateau_count(const ConcentrationSpectrum& spec, double threshold);

// Landau-style comparison of the point count in a disk D(z; R/sqrt(n))
// against plateau eigenvalue counts at two thresholds.
struct LandauReport {
  int point_count = 0;
  int count_gamma = 0;
  int count_delta = 0;
  double R = 0.0;            // rescaled disk radius sqrt(n) * disk.radius
  double slack_needed = 0.0; // smallest c with the two-sided O(R) bounds
};
LandauReport landau_compare(const Configuration& config,
                            const KernelModel& kern, const DiskRegion& disk,
                            double gamma, double delta);

// max over random unit-norm weighted polynomials of
// int_{S_n} |f|^2 dA / ((1/m) sum_j |f(z_j)|^2); bounded for rho < 1.
double sampling_ratio(const Configuration& config, const KernelModel& kern,
                      int trials, std::uint64_t seed);

// Peak-localized Lagrange function
// |L_j(z)| = |K_eps(z,z_j)/K_eps(z_j,z_j)|^2 |ell_j(z)|.
double peaked_lagrange(const Configuration& config,
                       const KernelModel& kern_eps, int j, Complex z);

// n ||sum_j c_j L_j||^2_{L^2} / sum_j |c_j|^2 over the nodes of
// F_n within S_n; empty `values` draws +-1 coefficients from `seed`.
double interpolation_norm(const Configuration& config,
                          const KernelModel& kern_eps,
                          const std::vector<double>& values,
                          std::uint64_t seed);

// L^1 mass of the peak function: int |L_j| dA over the truncation region.
double peaked_lagrange_l1(const Configuration& config,
                          const KernelModel& kern_eps, int j);

// sup over a grid of sum_{z_j in S_n} |L_j(z)|.
double peaked_lagrange_sup_sum(const Configuration& config,
                               const KernelModel& kern_eps);

// Indices of configuration points inside S_n (distance to the boundary at
// least `margin_factor` times the model's bulk margin).
std::vector<int> bulk_node_indices(const Configuration& config,
                                   const PotentialModel& model, int n,
                                   double margin_factor = 2.0);

}  // namespace feketelab
