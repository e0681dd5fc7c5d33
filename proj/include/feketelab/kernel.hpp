#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>

#include "feketelab/potential.hpp"
#include "feketelab/types.hpp"

namespace feketelab {

enum class KernelMode { GinibreClosedForm, NumericOrthobasis };

// Polar quadrature sizes and the truncation radius for integrals over C.
struct QuadratureSpec {
  int radial_nodes = 200;
  int angular_nodes = 256;
  double outer_radius = 2.5;
};

// A number held as exp(log_magnitude) * phase with |phase| = 1; the
// representation cannot overflow for any kernel magnitude.
struct LogPolar {
  double log_magnitude = 0.0;
  Complex phase{1.0, 0.0};

  Complex value() const { return std::exp(log_magnitude) * phase; }
  double abs() const { return std::exp(log_magnitude); }
};

// s_m(zeta) * e^{-scale} where s_m is the partial exponential sum
// sum_{k<m} zeta^k / k!, evaluated with the running maximum term factored
// out so no intermediate can overflow.  Exact for m = 1.
LogPolar stable_partial_exp(int m, Complex zeta, double scale);

// Weighted reproducing kernel of dimension m: either the Ginibre closed
// form m * s_m(m z conj(w)) * e^{-m(|z|^2+|w|^2)/2}, or a numerically
// orthonormalized monomial basis under the weight e^{-mQ}.
struct KernelModel {
  KernelMode mode = KernelMode::GinibreClosedForm;
  int n = 1;
  double rho = 1.0;
  int m = 1;  // dimension of the polynomial space and weight exponent
  PotentialModel model;
  QuadratureSpec quad;
  // Lower-triangular change of basis: e_k(z) = sum_j basis(k,j) z^j.
  // Empty in closed-form mode.
  Eigen::MatrixXcd basis;
};

// The paper's dimension convention: m = rho*n when rho*n is an integer,
// otherwise the largest integer below rho*n.
int kernel_dimension(int n, double rho);

KernelModel build_kernel(const PotentialModel& model, int n, double rho,
                         KernelMode mode, const QuadratureSpec& quad = {});

// Weighted orthonormal basis values (tilde e_0(z), ..., tilde e_{m-1}(z)).
Eigen::VectorXcd weighted_basis(const KernelModel& kern, Complex z);

// K(z, w); Hermitian in (z, w) and positive on the diagonal.
Complex eval_K(const KernelModel& kern, Complex z, Complex w);

// K(z, w) in overflow-free form; log_magnitude is -inf when K vanishes.
LogPolar eval_K_log(const KernelModel& kern, Complex z, Complex w);

// Bulk approximation m * LapQ(z) * exp(-(m/2) * LapQ(z) * |z-w|^2) of
// |K(z, w)| for z at bulk depth.
double bulk_modulus_predictor(const KernelModel& kern, Complex z, Complex w);

// Berezin kernel |K(zeta, w)|^2 / K(zeta, zeta) rooted at zeta.
double berezin(const KernelModel& kern, Complex zeta, Complex w);

// Quadrature of the Berezin kernel over C (truncated where it is below
// machine scale); equals 1 for an exact projection kernel.
double berezin_total_mass(const KernelModel& kern, Complex zeta);

// Heat kernel m*LapQ(zeta)*exp(-m*LapQ(zeta)*|zeta-w|^2); a probability
// density for dA.
double heat_kernel(const PotentialModel& model, int m, Complex zeta,
                   Complex w);

// Closed-form mass of the heat kernel on D(zeta; R/sqrt(m)).
double heat_kernel_disk_mass(const PotentialModel& model, int m, Complex zeta,
                             double R);

// (1 + sqrt(m)|z-w|) |K(z,w)| / m; the quantity bounded uniformly in m by
// the Ginibre off-diagonal damping estimate.  Ginibre closed form only.
double offdiag_ratio(const KernelModel& kern, Complex z, Complex w);

// A weighted polynomial sum_k c_k tilde-e_k with unit L^2 norm.
struct WeightedPoly {
  const KernelModel* kern = nullptr;
  Eigen::VectorXcd coeffs;

  Complex operator()(Complex z) const;
};

// Coefficients drawn i.i.d. complex Gaussian from `seed`, then normalized
// so the L^2(dA) norm is exactly one.
WeightedPoly random_weighted_poly(const KernelModel& kern,
                                  std::uint64_t seed);

// |grad |f|(z)| / (sqrt(m) * sup|f|) via central differences; the
// Bernstein inequality bounds this by a constant depending only on the
// local Laplacian bound.  Throws if |f(z)| vanishes.
double bernstein_ratio(const KernelModel& kern, const WeightedPoly& f,
                       Complex z, double sup_f);
double bernstein_ratio(const KernelModel& kern, const WeightedPoly& f,
                       Complex z);

// sup of |f| over a polar grid covering the droplet neighbourhood.
double sup_on_grid(const KernelModel& kern, const WeightedPoly& f,
                   double radius = 0.0);

}  // namespace feketelab
