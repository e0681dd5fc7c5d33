#include "feketelab/kernel.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "feketelab/quadrature.hpp"

namespace feketelab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Deterministic standard normal pairs from raw mt19937_64 output
// (Box-Muller on 53-bit uniforms; avoids the implementation-defined
// std::normal_distribution so cached results are portable).
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : eng_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * kPi * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * kPi * u2);
  }

 private:
  double uniform() {
    return (eng_() >> 11) * 0x1.0p-53;
  }

  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace

int kernel_dimension(int n, double rho) {
  if (n < 1) throw std::invalid_argument("kernel_dimension: n < 1");
  if (!(rho > 0.0) || rho > 2.0)
    throw std::invalid_argument("kernel_dimension: rho outside (0, 2]");
  const double t = rho * n;
  if (t < 1.0) throw std::invalid_argument("kernel_dimension: rho*n < 1");
  const long long r = std::llround(t);
  // rho*n integral (up to roundoff) keeps m = rho*n; otherwise the largest
  // integer strictly below rho*n.
  if (std::abs(t - static_cast<double>(r)) < 1e-9) return static_cast<int>(r);
  return static_cast<int>(std::floor(t));
}

LogPolar stable_partial_exp(int m, Complex zeta, double scale) {
  if (m < 1) throw std::invalid_argument("stable_partial_exp: m < 1");
  if (zeta == Complex(0.0, 0.0)) return {-scale, Complex(1.0, 0.0)};

  const double azeta = std::abs(zeta);
  const double logz = std::log(azeta);
  const double theta = std::arg(zeta);

  // The term magnitudes |zeta|^k / k! peak near k = |zeta|; everything is
  // accumulated relative to the peak term so nothing can overflow, and the
  // ratio recurrences decay monotonically away from the peak.
  long kstar = static_cast<long>(azeta);
  if (kstar > m - 1) kstar = m - 1;
  if (kstar < 0) kstar = 0;
  const double base = kstar * logz - std::lgamma(static_cast<double>(kstar) + 1.0);

  Complex sum(0.0, 0.0);
  Complex r(1.0, 0.0);
  sum += r;
  for (long k = kstar; k >= 1; --k) {
    r *= static_cast<double>(k) / zeta;
    sum += r;
    if (std::abs(r) < 1e-19) break;
  }
  r = Complex(1.0, 0.0);
  for (long k = kstar; k + 1 <= m - 1; ++k) {
    r *= zeta / static_cast<double>(k + 1);
    sum += r;
    if (std::abs(r) < 1e-19) break;
  }

  const double asum = std::abs(sum);
  if (asum == 0.0) return {-kInf, Complex(1.0, 0.0)};

  LogPolar out;
  out.log_magnitude = base + std::log(asum) - scale;
  out.phase = (sum / asum) * std::polar(1.0, kstar * theta);
  return out;
}

namespace {

// Grows the truncation radius until the exterior weight
// e^{-m(Q - Qhat)} drops below 1e-14; exact for models exposing Qhat.
double effective_outer_radius(const PotentialModel& model, int m,
                              double requested) {
  if (!model.has_q_hat()) return requested;
  double r = requested;
  const double target = std::log(1e-14);
  for (int i = 0; i < 200; ++i) {
    const Complex z(r, 0.0);
    if (-m * (model.q(z) - model.q_hat(z)) <= target) return r;
    r *= 1.05;
  }
  return r;
}

// Cholesky of a Hermitian PSD matrix that reports the first failing degree
// instead of silently producing garbage.
Eigen::MatrixXcd cholesky_lower(const Eigen::MatrixXcd& a) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Complex diag = a(j, j);
    for (Eigen::Index k = 0; k < j; ++k) diag -= std::norm(L(j, k));
    const double d = diag.real();
    if (!(d > 0.0) || !std::isfinite(d))
      throw IllConditionedError(
          "build_kernel: moment matrix not positive definite at degree " +
              std::to_string(j),
          static_cast<int>(j));
    const double ljj = std::sqrt(d);
    L(j, j) = ljj;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      Complex s = a(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= L(i, k) * std::conj(L(j, k));
      L(i, j) = s / ljj;
    }
  }
  return L;
}

}  // namespace

KernelModel build_kernel(const PotentialModel& model, int n, double rho,
                         KernelMode mode, const QuadratureSpec& quad) {
  KernelModel kern;
  kern.mode = mode;
  kern.n = n;
  kern.rho = rho;
  kern.m = kernel_dimension(n, rho);
  kern.model = model;
  kern.quad = quad;

  if (mode == KernelMode::GinibreClosedForm) {
    if (model.kind != PotentialKind::Ginibre)
      throw CapabilityError(
          "build_kernel: closed form requires the Ginibre potential");
    return kern;
  }

  const int m = kern.m;
  kern.quad.outer_radius = effective_outer_radius(model, m, quad.outer_radius);

  // Monomial moment matrix A(j,k) = int z^j conj(z)^k e^{-mQ} dA.
  PolarRule rule = disk_rule(Complex(0, 0), kern.quad.outer_radius,
                             quad.radial_nodes, quad.angular_nodes);
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(m, m);
  Eigen::VectorXcd v(m);
  for (Eigen::Index i = 0; i < rule.points.size(); ++i) {
    const Complex z = rule.points[i];
    const double w = rule.weights[i] * std::exp(-m * model.q(z));
    if (w == 0.0) continue;
    v[0] = Complex(1.0, 0.0);
    for (int k = 1; k < m; ++k) v[k] = v[k - 1] * z;
    A.selfadjointView<Eigen::Lower>().rankUpdate(v, w);
  }
  A.triangularView<Eigen::StrictlyUpper>() =
      A.triangularView<Eigen::StrictlyLower>().transpose().conjugate();

  // Diagonal pre-scaling tames the huge dynamic range of raw moments
  // before factoring; the conditioning gate applies to the scaled matrix.
  Eigen::VectorXd d(m);
  for (int j = 0; j < m; ++j) {
    const double ajj = A(j, j).real();
    if (!(ajj > 0.0) || !std::isfinite(ajj))
      throw IllConditionedError(
          "build_kernel: vanishing moment at degree " + std::to_string(j), j);
    d[j] = std::sqrt(ajj);
  }
  Eigen::MatrixXcd As =
      d.cwiseInverse().asDiagonal() * A * d.cwiseInverse().asDiagonal();

  Eigen::MatrixXcd L = cholesky_lower(As);
  double lmin = kInf, lmax = 0.0;
  int argmin = 0;
  for (int j = 0; j < m; ++j) {
    const double ljj = L(j, j).real();
    if (ljj < lmin) {
      lmin = ljj;
      argmin = j;
    }
    lmax = std::max(lmax, ljj);
  }
  if (lmax * lmax > 1e14 * lmin * lmin)
    throw IllConditionedError(
        "build_kernel: moment matrix condition beyond 1e14 at degree " +
            std::to_string(argmin),
        argmin);

  // e_k = sum_j B(k,j) z^j with B = L^{-1} D^{-1} lower triangular.
  Eigen::MatrixXcd B = Eigen::MatrixXcd::Identity(m, m);
  L.triangularView<Eigen::Lower>().solveInPlace(B);
  B = B * d.cwiseInverse().asDiagonal();

  // Orthonormality audit against the raw moments.
  const double gram_err = (B * A * B.adjoint() - Eigen::MatrixXcd::Identity(m, m))
                              .cwiseAbs()
                              .maxCoeff();
  if (gram_err > 1e-8)
    throw IllConditionedError(
        "build_kernel: orthonormalization residual " + std::to_string(gram_err),
        m - 1);

  kern.basis = std::move(B);
  return kern;
}

Eigen::VectorXcd weighted_basis(const KernelModel& kern, Complex z) {
  const int m = kern.m;
  Eigen::VectorXcd out(m);
  if (kern.mode == KernelMode::GinibreClosedForm) {
    // tilde-e_k(z) = sqrt(m^{k+1}/k!) z^k e^{-m|z|^2/2}, built in log scale
    // so high degrees underflow cleanly instead of contaminating the rest.
    const double r = std::abs(z);
    const double th = std::arg(z);
    const double mm = static_cast<double>(m);
    if (r == 0.0) {
      out.setZero();
      out[0] = std::sqrt(mm);
      return out;
    }
    const double logr = std::log(r);
    double lk = 0.5 * std::log(mm) - 0.5 * mm * r * r;
    for (int k = 0; k < m; ++k) {
      out[k] = std::exp(lk) * std::polar(1.0, k * th);
      lk += 0.5 * (std::log(mm) - std::log(static_cast<double>(k + 1))) + logr;
    }
    return out;
  }
  Eigen::VectorXcd v(m);
  v[0] = Complex(1.0, 0.0);
  for (int k = 1; k < m; ++k) v[k] = v[k - 1] * z;
  out = kern.basis * v;
  out *= std::exp(-0.5 * kern.m * kern.model.q(z));
  return out;
}

LogPolar eval_K_log(const KernelModel& kern, Complex z, Complex w) {
  const double mm = static_cast<double>(kern.m);
  if (kern.mode == KernelMode::GinibreClosedForm) {
    const double scale = 0.5 * mm * (std::norm(z) + std::norm(w));
    LogPolar s = stable_partial_exp(kern.m, mm * z * std::conj(w), scale);
    s.log_magnitude += std::log(mm);
    return s;
  }
  const Eigen::VectorXcd bz = weighted_basis(kern, z);
  const Eigen::VectorXcd bw = weighted_basis(kern, w);
  const Complex val = bw.dot(bz);  // sum_k e_k(z) conj(e_k(w))
  const double a = std::abs(val);
  if (a == 0.0) return {-kInf, Complex(1.0, 0.0)};
  return {std::log(a), val / a};
}

Complex eval_K(const KernelModel& kern, Complex z, Complex w) {
  const LogPolar lp = eval_K_log(kern, z, w);
  if (!std::isfinite(lp.log_magnitude) && lp.log_magnitude > 0.0)
    throw EvaluationError("eval_K: overflow in kernel evaluation");
  return lp.value();
}

double bulk_modulus_predictor(const KernelModel& kern, Complex z, Complex w) {
  const double lap = laplacian(kern.model, z);
  const double mm = static_cast<double>(kern.m);
  return mm * lap * std::exp(-0.5 * mm * lap * std::norm(z - w));
}

double berezin(const KernelModel& kern, Complex zeta, Complex w) {
  const LogPolar diag = eval_K_log(kern, zeta, zeta);
  if (!std::isfinite(diag.log_magnitude))
    throw std::domain_error("berezin: kernel diagonal vanishes at zeta");
  const LogPolar off = eval_K_log(kern, zeta, w);
  return std::exp(2.0 * off.log_magnitude - diag.log_magnitude);
}

double berezin_total_mass(const KernelModel& kern, Complex zeta) {
  // The Berezin kernel concentrates at scale 1/sqrt(m); the radius covers
  // the Gaussian core down to ~1e-18 with a margin for edge effects.
  const double mm = static_cast<double>(kern.m);
  double lap_floor = 1.0;
  if (kern.model.kind != PotentialKind::Ginibre)
    lap_floor = std::max(0.05, laplacian(kern.model, zeta));
  const double radius = std::sqrt(2.0 * 41.5 / (mm * lap_floor)) + 0.4;
  PolarRule rule = disk_rule(zeta, radius, 160, 192);
  double mass = 0.0;
  for (Eigen::Index i = 0; i < rule.points.size(); ++i)
    mass += rule.weights[i] * berezin(kern, zeta, rule.points[i]);
  return mass;
}

double heat_kernel(const PotentialModel& model, int m, Complex zeta,
                   Complex w) {
  const double lap = laplacian(model, zeta);
  const double mm = static_cast<double>(m);
  return mm * lap * std::exp(-mm * lap * std::norm(zeta - w));
}

double heat_kernel_disk_mass(const PotentialModel& model, int m, Complex zeta,
                             double R) {
  const double lap = laplacian(model, zeta);
  (void)m;
  return 1.0 - std::exp(-R * R * lap);
}

double offdiag_ratio(const KernelModel& kern, Complex z, Complex w) {
  if (kern.mode != KernelMode::GinibreClosedForm)
    throw CapabilityError("offdiag_ratio: Ginibre closed form only");
  const double mm = static_cast<double>(kern.m);
  const LogPolar lp = eval_K_log(kern, z, w);
  return (1.0 + std::sqrt(mm) * std::abs(z - w)) *
         std::exp(lp.log_magnitude - std::log(mm));
}

Complex WeightedPoly::operator()(Complex z) const {
  const Eigen::VectorXcd wb = weighted_basis(*kern, z);
  return (wb.array() * coeffs.array()).sum();
}

WeightedPoly random_weighted_poly(const KernelModel& kern,
                                  std::uint64_t seed) {
  GaussianStream g(seed);
  Eigen::VectorXcd c(kern.m);
  for (int k = 0; k < kern.m; ++k) {
    const double re = g.next();
    const double im = g.next();
    c[k] = Complex(re, im);
  }
  c /= c.norm();  // basis is orthonormal, so ||f||_{L^2} = ||c||_2 = 1
  WeightedPoly f;
  f.kern = &kern;
  f.coeffs = std::move(c);
  return f;
}

double sup_on_grid(const KernelModel& kern, const WeightedPoly& f,
                   double radius) {
  if (radius <= 0.0) {
    radius = 1.25;
    if (kern.model.droplet.radial && kern.model.droplet.outer_radius > 0.0)
      radius = 1.25 * kern.model.droplet.outer_radius;
  }
  double sup = std::abs(f(Complex(0, 0)));
  const int nr = 24, nt = 48;
  for (int i = 1; i <= nr; ++i) {
    const double r = radius * i / nr;
    for (int j = 0; j < nt; ++j) {
      const double th = 2.0 * kPi * j / nt;
      sup = std::max(sup, std::abs(f(std::polar(r, th))));
    }
  }
  return sup;
}

double bernstein_ratio(const KernelModel& kern, const WeightedPoly& f,
                       Complex z, double sup_f) {
  if (!(sup_f > 0.0))
    throw std::invalid_argument("bernstein_ratio: sup_f must be positive");
  const double mm = static_cast<double>(kern.m);
  if (std::abs(f(z)) < 1e-13 * sup_f)
    throw std::domain_error(
        "bernstein_ratio: |f| vanishes at z; gradient of modulus undefined");
  const double h = 1e-5 / std::sqrt(mm);
  const double gx = (std::abs(f(z + Complex(h, 0))) -
                     std::abs(f(z - Complex(h, 0)))) /
                    (2.0 * h);
  const double gy = (std::abs(f(z + Complex(0, h))) -
                     std::abs(f(z - Complex(0, h)))) /
                    (2.0 * h);
  return std::hypot(gx, gy) / (std::sqrt(mm) * sup_f);
}

double bernstein_ratio(const KernelModel& kern, const WeightedPoly& f,
                       Complex z) {
  return bernstein_ratio(kern, f, z, sup_on_grid(kern, f));
}

}  // namespace feketelab
