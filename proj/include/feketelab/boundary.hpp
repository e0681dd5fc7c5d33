#pragma once

#include <vector>

#include "feketelab/kernel.hpp"
#include "feketelab/types.hpp"

namespace feketelab {

// Policy for the complex complementary error function: a Maclaurin series
// near the origin and a Lentz continued fraction (with a real-axis Taylor
// shift in the thin band where the fraction converges slowly) beyond the
// switch radius.  Relative accuracy target 1e-10 on the region exercised
// by the checks; the two branches are cross-validated in an overlap
// annulus around the switch radius.
struct EdgeEvaluator {
  enum class ErfcMethod { SeriesSmall, ContinuedFractionLarge };
  double switch_radius = 4.0;
};

// erfc on C.  The default evaluator picks the branch automatically;
// `forced` pins one branch (used by the overlap validation).
Complex erfc_complex(Complex zeta, const EdgeEvaluator& ev = {});
Complex erfc_complex_with(Complex zeta, EdgeEvaluator::ErfcMethod forced,
                          const EdgeEvaluator& ev = {});

// Analytic continuation of the standard normal distribution function,
// Phi(z) = erfc(-z/sqrt(2)) / 2.
Complex phi(Complex z, const EdgeEvaluator& ev = {});

// Dawson's function e^{-t^2} int_0^t e^{x^2} dx on the real line.
double dawson(double t);

namespace detail {
// Individual Dawson branches, exposed for overlap validation.
double dawson_series(double t);      // |t| <= ~4.3
double dawson_sampling(double t);    // midrange, exponentially convergent
double dawson_asymptotic(double t);  // t >= ~4.8, optimally truncated
}  // namespace detail

// Boundary kernel F(z,w) = e^{z conj(w) - |z|^2/2 - |w|^2/2} Phi(-z-conj(w)).
Complex boundary_kernel(Complex z, Complex w);

// Ginibre(inf) bulk kernel k(zeta,eta) = e^{zeta conj(eta) - |zeta|^2/2 - |eta|^2/2}.
Complex ginibre_infty_kernel(Complex zeta, Complex eta);

// Both sides of the Dawson-function bound
// |F(z,w)| <= e^{-|z-w|^2/2} + e^{-Re(z-w)^2/2} F(|Im(z-w)|/sqrt(2))/sqrt(pi).
struct DawsonBound {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds(double tol = 1e-9) const { return lhs <= rhs + tol; }
};
DawsonBound dawson_bound_check(Complex z, Complex w);

// | rho^2 int e^{-rho|z-w|^2} |Phi(-sqrt(rho)(z+conj(w)))|^2 dA(w)
//   - rho Phi(-2 sqrt(rho) Re z) |.
// The integrand has algebraic 1/|w|^2 ridges along the imaginary
// directions, so the integral is reduced by Fubini to one dimension and
// the far tail is summed from the asymptotic expansion of Phi.
double lastl_identity_residual(Complex z, double rho);

// Rescaled joint intensities (1/m)^k det(K(xi_i, xi_j)) at the edge
// points xi_i = z0 (1 + zeta_i / sqrt(m)).  For k = 1 each entry of
// `zetas` produces one intensity; for k in {2, 3} `zetas` holds exactly
// the k points of a single determinant.
std::vector<double> rescaled_intensity(const KernelModel& kern, Complex z0,
                                       const std::vector<Complex>& zetas,
                                       int k);

// min over |z| <= 1 + 0.5/sqrt(m) of K(z,z)/m for each requested m; the
// diagonal lower bound keeps these above a fixed constant near Phi(-1).
struct DiagLowerBoundRow {
  int m = 0;
  double min_ratio = 0.0;
};
std::vector<DiagLowerBoundRow> diag_lower_bound_check(
    const std::vector<int>& m_list);

}  // namespace feketelab
