#include "feketelab/boundary.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "feketelab/quadrature.hpp"

namespace feketelab {

namespace {

constexpr double kSqrtPi = 1.772453850905516027298167483341145183;
const double kInvSqrtPi = 1.0 / kSqrtPi;

using CLD = std::complex<long double>;

// Faddeeva w(z) = e^{-z^2} erfc(-iz) for Im z >= 0.

// Maclaurin series w(z) = sum_n (iz)^n / Gamma(n/2 + 1).  The terms reach
// ~e^{|z|^2/2} before decaying, so the accumulation runs in long double to
// keep the cancellation below the 1e-10 target up to |z| ~ 4.5.
Complex faddeeva_series(Complex zc) {
  const CLD iz(-static_cast<long double>(zc.imag()),
               static_cast<long double>(zc.real()));
  CLD sum(1.0L, 0.0L);
  CLD izn(1.0L, 0.0L);
  long double even = 1.0L;                    // 1/Gamma(k+1)
  long double odd = 2.0L / 1.772453850905516027298167483341145183L;  // 1/Gamma(3/2)
  for (int k = 0; k < 260; ++k) {
    izn *= iz;
    const CLD t_odd = izn * odd;  // n = 2k+1
    izn *= iz;
    even /= static_cast<long double>(k + 1);
    const CLD t_even = izn * even;  // n = 2k+2
    sum += t_odd + t_even;
    odd /= (static_cast<long double>(k) + 1.5L);
    if (std::abs(t_odd) + std::abs(t_even) < 1e-24L * std::abs(sum) && k > std::norm(zc))
      break;
  }
  return Complex(static_cast<double>(sum.real()),
                 static_cast<double>(sum.imag()));
}

// Lentz continued fraction w(z) = (i/sqrt(pi)) / (z - (1/2)/(z - 1/(z - ...))).
Complex faddeeva_contfrac(Complex z) {
  const Complex tiny(1e-280, 0.0);
  Complex f = tiny, C = tiny, D(0.0, 0.0);
  for (int j = 1; j <= 400; ++j) {
    const Complex a = (j == 1) ? Complex(1.0, 0.0)
                               : Complex(-0.5 * (j - 1), 0.0);
    D = z + a * D;
    if (D == Complex(0.0, 0.0)) D = tiny;
    C = z + a / C;
    if (C == Complex(0.0, 0.0)) C = tiny;
    D = 1.0 / D;
    const Complex delta = C * D;
    f *= delta;
    if (std::abs(delta - Complex(1.0, 0.0)) < 1e-16) break;
  }
  return Complex(0.0, kInvSqrtPi) * f;
}

// w just above the real axis: exact real-line value
// w(x) = e^{-x^2} + 2i F(x)/sqrt(pi), then a Taylor shift along iy using
// w'(z) = -2 z w(z) + 2i/sqrt(pi).
Complex faddeeva_near_axis(Complex z) {
  const double x = z.real();
  const double y = z.imag();
  Complex w0(std::exp(-x * x), 2.0 * kInvSqrtPi * dawson(x));
  if (y == 0.0) return w0;
  Complex wk = w0;
  Complex wkm1(0.0, 0.0);
  const Complex iy(0.0, y);
  Complex pow(1.0, 0.0);
  Complex sum = w0;
  double factorial = 1.0;
  for (int k = 1; k <= 96; ++k) {
    const Complex wk1 = -2.0 * (x * wk + static_cast<double>(k - 1) * wkm1) +
                        ((k == 1) ? Complex(0.0, 2.0 * kInvSqrtPi)
                                  : Complex(0.0, 0.0));
    wkm1 = wk;
    wk = wk1;
    pow *= iy;
    factorial *= k;
    const Complex term = wk * pow / factorial;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum) && k > 2 * std::abs(z) * y)
      break;
  }
  return sum;
}

Complex faddeeva_upper(Complex z, const EdgeEvaluator& ev,
                       const EdgeEvaluator::ErfcMethod* forced) {
  // Map to Re z >= 0 via w(-conj z) = conj(w(z)), which stays in the upper
  // half plane.
  if (z.real() < 0.0) {
    const EdgeEvaluator::ErfcMethod* f = forced;
    return std::conj(faddeeva_upper(Complex(-z.real(), z.imag()), ev, f));
  }
  const bool small = std::abs(z) <= ev.switch_radius;
  if (forced ? (*forced == EdgeEvaluator::ErfcMethod::SeriesSmall) : small)
    return faddeeva_series(z);
  if (z.imag() < 0.5) return faddeeva_near_axis(z);
  return faddeeva_contfrac(z);
}

Complex erfc_impl(Complex zeta, const EdgeEvaluator& ev,
                  const EdgeEvaluator::ErfcMethod* forced) {
  if (zeta.real() < 0.0)
    return 2.0 - erfc_impl(-zeta, ev, forced);
  // erfc(zeta) = e^{-zeta^2} w(i zeta); i*zeta has Im >= 0 here.
  const Complex z(-zeta.imag(), zeta.real());
  const Complex w = faddeeva_upper(z, ev, forced);
  return std::exp(-zeta * zeta) * w;
}

}  // namespace

Complex erfc_complex(Complex zeta, const EdgeEvaluator& ev) {
  return erfc_impl(zeta, ev, nullptr);
}

Complex erfc_complex_with(Complex zeta, EdgeEvaluator::ErfcMethod forced,
                          const EdgeEvaluator& ev) {
  return erfc_impl(zeta, ev, &forced);
}

Complex phi(Complex z, const EdgeEvaluator& ev) {
  return 0.5 * erfc_complex(-z / std::sqrt(2.0), ev);
}

namespace detail {

double dawson_series(double t) {
  // F(t) = sum_k (-1)^k 2^k t^{2k+1} / (2k+1)!!, long double accumulation.
  const long double tl = t;
  const long double t2 = tl * tl;
  long double term = tl;
  long double sum = tl;
  for (int k = 0; k < 300; ++k) {
    term *= -2.0L * t2 / (2.0L * k + 3.0L);
    sum += term;
    if (std::abs(term) < 1e-24L * std::abs(sum)) break;
  }
  return static_cast<double>(sum);
}

double dawson_sampling(double t) {
  // Rybicki's sampling form F(t) = (1/sqrt(pi)) sum_{n odd} e^{-(t-nh)^2}/n;
  // the discretization error scales like e^{-(pi/2h)^2}.
  const double h = 0.2;
  const int n0 = 2 * static_cast<int>(std::floor(t / (2.0 * h))) + 1;
  int span = static_cast<int>(std::ceil(6.7 / h));
  if (span % 2 != 0) ++span;  // keep n0 + j odd
  double sum = 0.0;
  for (int j = -span; j <= span; j += 2) {
    const int n = n0 + j;
    if (n == 0) continue;
    const double d = t - n * h;
    if (std::abs(d) > 6.8) continue;
    sum += std::exp(-d * d) / n;
  }
  return kInvSqrtPi * sum;
}

double dawson_asymptotic(double t) {
  // (1/2t) sum_k (2k-1)!!/(2t^2)^k, truncated at the smallest term.
  const double inv = 1.0 / (2.0 * t * t);
  double term = 1.0;
  double sum = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 40; ++k) {
    term *= (2.0 * k - 1.0) * inv;
    if (std::abs(term) >= prev) break;
    sum += term;
    prev = std::abs(term);
    if (std::abs(term) < 1e-18 * sum) break;
  }
  return sum / (2.0 * t);
}

}  // namespace detail

double dawson(double t) {
  const double a = std::abs(t);
  double v;
  if (a <= 4.0)
    v = detail::dawson_series(a);
  else if (a < 6.0)
    v = detail::dawson_sampling(a);
  else
    v = detail::dawson_asymptotic(a);
  return t < 0.0 ? -v : v;
}

Complex boundary_kernel(Complex z, Complex w) {
  const Complex expo = z * std::conj(w) -
                       0.5 * (std::norm(z) + std::norm(w));
  return std::exp(expo) * phi(-(z + std::conj(w)));
}

Complex ginibre_infty_kernel(Complex zeta, Complex eta) {
  const Complex expo = zeta * std::conj(eta) -
                       0.5 * (std::norm(zeta) + std::norm(eta));
  return std::exp(expo);
}

DawsonBound dawson_bound_check(Complex z, Complex w) {
  DawsonBound b;
  const Complex d = z - w;
  b.lhs = std::abs(boundary_kernel(z, w));
  const double re = d.real();
  // |F| is symmetric in (z, w) while F(t) is odd, so the bound is applied
  // with |Im(z-w)|.
  const double im = std::abs(d.imag());
  b.rhs = std::exp(-0.5 * std::norm(d)) +
          std::exp(-0.5 * re * re) * kInvSqrtPi * dawson(im / std::sqrt(2.0));
  return b;
}

namespace {

// K(a) = int_R e^{-q^2} |Phi(a + iq)|^2 dq.  |Phi(a+iq)|^2 e^{-q^2} decays
// like e^{-a^2}/(2 pi q^2) as |q| grows, so the integral is split at
// q = 9 and the fat tail is summed from the asymptotic expansion
// e^{-q^2/2} H(q) ~ e^{-iaq} (w + w^3 + 3 w^5 + 15 w^7), w = 1/(q - ia).
double phi_vertical_second_moment(double a) {
  const GaussLegendre gl = gauss_legendre(120);
  const double Q = 9.0;
  double core = 0.0;
  for (int i = 0; i < gl.nodes.size(); ++i) {
    const double q = Q * gl.nodes[i];
    const Complex p = phi(Complex(a, q));
    core += Q * gl.weights[i] * std::exp(-q * q) * std::norm(p);
  }

  // Tail 2 * int_Q^inf (e^{-a^2}/2pi) |w|^2 |1 + w^2 + 3w^4 + 15w^6|^2 dq,
  // integrated on a log grid up to 300 plus the closed 1/(q^2+a^2) rest.
  const double ea = std::exp(-a * a) / (2.0 * kPi);
  if (ea > 0.0) {
    const GaussLegendre gt = gauss_legendre(60);
    const double s0 = std::log(Q), s1 = std::log(300.0);
    double tail = 0.0;
    for (int i = 0; i < gt.nodes.size(); ++i) {
      const double s = 0.5 * (s1 - s0) * (gt.nodes[i] + 1.0) + s0;
      const double q = std::exp(s);
      const Complex w = 1.0 / Complex(q, -a);
      const Complex w2 = w * w;
      const Complex series = 1.0 + w2 * (1.0 + w2 * (3.0 + 15.0 * w2));
      tail += 0.5 * (s1 - s0) * gt.weights[i] * q * std::norm(w) *
              std::norm(series);
    }
    double rest;
    if (std::abs(a) < 1e-8)
      rest = 1.0 / 300.0;
    else
      rest = (0.5 * kPi - std::atan(300.0 / std::abs(a))) / std::abs(a);
    core += 2.0 * ea * (tail + rest);
  }
  return core;
}

}  // namespace

double lastl_identity_residual(Complex z, double rho) {
  if (!(rho > 0.0))
    throw std::invalid_argument("lastl_identity_residual: rho <= 0");
  // Rescaling w = z + xi/sqrt(rho) reduces to rho = 1 with x' = sqrt(rho) Re z:
  //   I = (rho/pi) int e^{-p^2} K(-2x' - p) dp.
  const double xp = std::sqrt(rho) * z.real();
  const GaussLegendre gl = gauss_legendre(90);
  const double P = 9.0;
  double integral = 0.0;
  for (int i = 0; i < gl.nodes.size(); ++i) {
    const double p = P * gl.nodes[i];
    integral += P * gl.weights[i] * std::exp(-p * p) *
                phi_vertical_second_moment(-2.0 * xp - p);
  }
  integral *= rho / kPi;
  const double target = rho * phi(Complex(-2.0 * xp, 0.0)).real();
  return std::abs(integral - target);
}

std::vector<double> rescaled_intensity(const KernelModel& kern, Complex z0,
                                       const std::vector<Complex>& zetas,
                                       int k) {
  if (k < 1 || k > 3)
    throw CapabilityError("rescaled_intensity: k must be 1, 2 or 3");
  if (kern.mode != KernelMode::GinibreClosedForm)
    throw CapabilityError("rescaled_intensity: Ginibre closed form only");
  const double sm = std::sqrt(static_cast<double>(kern.m));
  std::vector<double> out;
  if (k == 1) {
    out.reserve(zetas.size());
    for (Complex zeta : zetas) {
      const Complex xi = z0 * (1.0 + zeta / sm);
      out.push_back(eval_K(kern, xi, xi).real() / kern.m);
    }
    return out;
  }
  if (static_cast<int>(zetas.size()) != k)
    throw std::invalid_argument(
        "rescaled_intensity: zetas must hold exactly k points for k > 1");
  Eigen::MatrixXcd M(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const Complex xi = z0 * (1.0 + zetas[i] / sm);
      const Complex xj = z0 * (1.0 + zetas[j] / sm);
      M(i, j) = eval_K(kern, xi, xj) / static_cast<double>(kern.m);
    }
  out.push_back(M.determinant().real());
  return out;
}

std::vector<DiagLowerBoundRow> diag_lower_bound_check(
    const std::vector<int>& m_list) {
  std::vector<DiagLowerBoundRow> rows;
  rows.reserve(m_list.size());
  const PotentialModel gin = ginibre_potential();
  for (int m : m_list) {
    KernelModel kern = build_kernel(gin, m, 1.0, KernelMode::GinibreClosedForm);
    // K(z,z)/m = f(m r^2) with f decreasing, so the minimum over the
    // dilated disk sits on its outer rim; a radial scan confirms it.
    double mn = std::numeric_limits<double>::infinity();
    const double rmax = 1.0 + 0.5 / std::sqrt(static_cast<double>(m));
    for (int i = 0; i <= 64; ++i) {
      const double r = rmax * i / 64.0;
      const double v = eval_K(kern, Complex(r, 0), Complex(r, 0)).real() / m;
      mn = std::min(mn, v);
    }
    rows.push_back({m, mn});
  }
  return rows;
}

}  // namespace feketelab
