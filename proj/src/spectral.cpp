#include "feketelab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "feketelab/quadrature.hpp"

namespace feketelab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int round_up(int v, int mult) { return ((v + mult - 1) / mult) * mult; }

double laplacian_scale(const KernelModel& kern, const DiskRegion& disk) {
  double lap = laplacian(kern.model, disk.center);
  for (int j = 0; j < 4; ++j) {
    const Complex rim =
        disk.center + std::polar(disk.radius, 0.5 * kPi * j);
    lap = std::max(lap, laplacian(kern.model, rim));
  }
  return std::max(lap, 0.05);
}

// Node counts for disk integrals of kernel quantities.  In rescaled
// coordinates u = sqrt(m LapQ) (z - center) the integrands vary at unit
// scale; the angular count also covers the winding of the top basis mode
// around off-center disks.
std::pair<int, int> assembly_nodes(const KernelModel& kern,
                                   const DiskRegion& disk) {
  const double Rs = disk.radius * std::sqrt(kern.m * laplacian_scale(kern, disk));
  int nr = std::clamp(16 + static_cast<int>(6.0 * Rs), 32, 160);
  double base = std::max(128.0, 12.0 * Rs);
  const double winding =
      2.0 * kern.m * disk.radius / std::max(std::abs(disk.center), 0.25);
  base = std::max(base, 2.5 * winding / kPi + 64.0);
  if (kern.m >= 300) base = std::max(base, 256.0);
  const int nt = std::clamp(round_up(static_cast<int>(base), 8), 64, 512);
  return {nr, nt};
}

std::pair<int, int> pair_quadrature_nodes(const KernelModel& kern,
                                          const DiskRegion& disk) {
  const double Rs = disk.radius * std::sqrt(kern.m * laplacian_scale(kern, disk));
  const int nr = std::clamp(10 + static_cast<int>(5.0 * Rs), 24, 72);
  const int nt =
      std::clamp(round_up(static_cast<int>(std::max(96.0, 12.0 * Rs)), 8), 96, 192);
  return {nr, nt};
}

// Rows of weighted basis values over the rule nodes.
Eigen::MatrixXcd basis_rows(const KernelModel& kern, const PolarRule& rule) {
  Eigen::MatrixXcd E(rule.points.size(), kern.m);
  for (Eigen::Index i = 0; i < rule.points.size(); ++i)
    E.row(i) = weighted_basis(kern, rule.points[i]).transpose();
  return E;
}

}  // namespace

Eigen::MatrixXcd concentration_matrix(const KernelModel& kern,
                                      const DiskRegion& disk) {
  const int m = kern.m;
  if (disk.radius == 0.0) return Eigen::MatrixXcd::Zero(m, m);
  if (!(disk.radius > 0.0) || !std::isfinite(disk.radius))
    throw std::invalid_argument("concentration_matrix: bad disk radius");
  const auto [nr, nt] = assembly_nodes(kern, disk);
  const GaussLegendre gl = gauss_legendre(nr);

  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(m, m);
  Eigen::MatrixXcd ring(m, nt);
  for (int i = 0; i < nr; ++i) {
    const double r = 0.5 * disk.radius * (gl.nodes[i] + 1.0);
    const double w = 0.5 * disk.radius * gl.weights[i] * r * (2.0 / nt);
    for (int j = 0; j < nt; ++j) {
      const double th = 2.0 * kPi * j / nt;
      ring.col(j) = weighted_basis(kern, disk.center + std::polar(r, th));
    }
    M.selfadjointView<Eigen::Lower>().rankUpdate(ring, w);
  }
  M.triangularView<Eigen::StrictlyUpper>() =
      M.triangularView<Eigen::StrictlyLower>().transpose().conjugate();
  return M;
}

ConcentrationSpectrum spectrum(const Eigen::MatrixXcd& matrix, double band) {
  if (matrix.rows() != matrix.cols())
    throw std::invalid_argument("spectrum: matrix not square");
  const Eigen::Index m = matrix.rows();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix);
  if (es.info() != Eigen::Success)
    throw EvaluationError("spectrum: eigensolver did not converge");

  // Residual verification before any clamping.
  const Eigen::MatrixXcd R = matrix * es.eigenvectors() -
                             es.eigenvectors() * es.eigenvalues().asDiagonal();
  for (Eigen::Index j = 0; j < m; ++j)
    if (R.col(j).norm() > 1e-8)
      throw EvaluationError("spectrum: eigenpair residual above 1e-8");

  ConcentrationSpectrum out;
  out.m = static_cast<int>(m);
  out.eigenvalues.resize(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    double lam = es.eigenvalues()[m - 1 - j];  // decreasing order
    if (lam < -band || lam > 1.0 + band)
      throw EvaluationError(
          "spectrum: eigenvalue outside [0,1] beyond the clamp band; "
          "assembly error");
    out.eigenvalues[j] = std::clamp(lam, 0.0, 1.0);
  }
  out.trace = out.eigenvalues.sum();
  out.trace_square = out.eigenvalues.squaredNorm();
  return out;
}

double trace_direct(const KernelModel& kern, const DiskRegion& disk) {
  if (disk.radius == 0.0) return 0.0;
  const auto [nr, nt] = assembly_nodes(kern, disk);
  PolarRule rule = disk_rule(disk.center, disk.radius, nr, nt);
  double tr = 0.0;
  for (Eigen::Index i = 0; i < rule.points.size(); ++i) {
    const LogPolar lp = eval_K_log(kern, rule.points[i], rule.points[i]);
    tr += rule.weights[i] * std::exp(lp.log_magnitude);
  }
  return tr;
}

double trace_square_direct(const KernelModel& kern, const DiskRegion& disk) {
  if (disk.radius == 0.0) return 0.0;
  const auto [nr, nt] = pair_quadrature_nodes(kern, disk);
  PolarRule rule = disk_rule(disk.center, disk.radius, nr, nt);
  const Eigen::MatrixXcd E = basis_rows(kern, rule);
  const Eigen::Index N = rule.points.size();

  // sum_{i,j} w_i w_j |K(z_i, z_j)|^2 with K factored through the basis;
  // blocked GEMM with Hermitian symmetry.
  double acc = 0.0;
  const Eigen::Index blk = 256;
  for (Eigen::Index i0 = 0; i0 < N; i0 += blk) {
    const Eigen::Index ib = std::min(blk, N - i0);
    const Eigen::MatrixXcd G =
        E.middleRows(i0, ib) * E.adjoint();  // ib x N kernel values
    for (Eigen::Index i = 0; i < ib; ++i) {
      const double wi = rule.weights[i0 + i];
      double row = 0.0;
      for (Eigen::Index j = 0; j < N; ++j)
        row += rule.weights[j] * std::norm(G(i, j));
      acc += wi * row;
    }
  }
  return acc;
}

int plateau_count(const ConcentrationSpectrum& spec, double threshold) {
  int count = 0;
  for (Eigen::Index j = 0; j < spec.eigenvalues.size(); ++j)
    if (spec.eigenvalues[j] >= threshold) ++count;
  return count;
}

LandauReport landau_compare(const Configuration& config,
                            const KernelModel& kern, const DiskRegion& disk,
                            double gamma, double delta) {
  LandauReport rep;
  rep.R = std::sqrt(static_cast<double>(config.n())) * disk.radius;
  for (int j = 0; j < config.n(); ++j)
    if (std::abs(config.points[j] - disk.center) < disk.radius)
      ++rep.point_count;
  const ConcentrationSpectrum spec = spectrum(concentration_matrix(kern, disk));
  rep.count_gamma = plateau_count(spec, gamma);
  rep.count_delta = plateau_count(spec, delta);
  const double c_lo = (rep.count_gamma - rep.point_count) / rep.R;
  const double c_up = (rep.point_count - rep.count_delta) / rep.R;
  rep.slack_needed = std::max({0.0, c_lo, c_up});
  return rep;
}

std::vector<int> bulk_node_indices(const Configuration& config,
                                   const PotentialModel& model, int n,
                                   double margin_factor) {
  const double margin = margin_factor * model.bulk_margin(n);
  std::vector<int> idx;
  for (int j = 0; j < config.n(); ++j)
    if (distance_to_boundary(model, config.points[j]) >= margin)
      idx.push_back(j);
  return idx;
}

double sampling_ratio(const Configuration& config, const KernelModel& kern,
                      int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("sampling_ratio: trials < 1");
  const PotentialModel& model = kern.model;
  if (!model.droplet.radial)
    throw CapabilityError("sampling_ratio: radial droplet required");
  const int n = kern.n;
  const double margin = 2.0 * model.bulk_margin(n);
  const double radius = model.droplet.outer_radius - margin;
  if (!(radius > 0.0))
    throw std::invalid_argument(
        "sampling_ratio: S_n is empty at this n and bulk margin");

  // int_{S_n} |f|^2 = c^T M conj(c) through the disk moment matrix; the
  // node basis rows give all f(z_j) per trial in one product.
  const Eigen::MatrixXcd M =
      concentration_matrix(kern, DiskRegion{Complex(0, 0), radius});
  Eigen::MatrixXcd node_basis(config.n(), kern.m);
  for (int j = 0; j < config.n(); ++j)
    node_basis.row(j) = weighted_basis(kern, config.points[j]).transpose();

  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const WeightedPoly f =
        random_weighted_poly(kern, seed + 0x9e3779b97f4a7c15ull * t);
    const double mass =
        (f.coeffs.transpose() * (M * f.coeffs.conjugate()))(0).real();
    const double node_sum = (node_basis * f.coeffs).squaredNorm();
    if (node_sum <= 0.0)
      throw EvaluationError("sampling_ratio: polynomial vanishes at all nodes");
    worst = std::max(worst, mass / (node_sum / kern.m));
  }
  return worst;
}

double peaked_lagrange(const Configuration& config,
                       const KernelModel& kern_eps, int j, Complex z) {
  const LogPolar diag =
      eval_K_log(kern_eps, config.points[j], config.points[j]);
  const LogPolar off = eval_K_log(kern_eps, z, config.points[j]);
  const LogPolar ell = lagrange_weighted_log(config, j, z, kern_eps.model);
  return std::exp(2.0 * (off.log_magnitude - diag.log_magnitude) +
                  ell.log_magnitude);
}

namespace {

// Shared precomputation for sums of peak functions: node basis rows,
// kernel diagonals, and the barycentric log-derivative log omega'(z_j).
struct PeakContext {
  Eigen::MatrixXcd node_basis_conj;  // n x m
  Eigen::VectorXd diag_log;          // log K(z_j, z_j)
  Eigen::VectorXcd log_wprime;       // sum_{i != j} log(z_j - z_i)
  Eigen::VectorXd qnode;             // Q(z_j)

  PeakContext(const Configuration& config, const KernelModel& kern) {
    const int n = config.n();
    node_basis_conj.resize(n, kern.m);
    diag_log.resize(n);
    log_wprime.resize(n);
    qnode.resize(n);
    for (int j = 0; j < n; ++j) {
      const Complex zj = config.points[j];
      node_basis_conj.row(j) =
          weighted_basis(kern, zj).conjugate().transpose();
      diag_log[j] = eval_K_log(kern, zj, zj).log_magnitude;
      Complex lw(0.0, 0.0);
      for (int i = 0; i < n; ++i)
        if (i != j) lw += std::log(zj - config.points[i]);
      log_wprime[j] = lw;
      qnode[j] = kern.model.q(zj);
    }
  }
};

}  // namespace

double peaked_lagrange_l1(const Configuration& config,
                          const KernelModel& kern_eps, int j) {
  const double outer = kern_eps.quad.outer_radius;
  const int n = config.n();
  PolarRule rule = disk_rule(Complex(0, 0), outer, 200, 256);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < rule.points.size(); ++i) {
    acc += rule.weights[i] *
           peaked_lagrange(config, kern_eps, j, rule.points[i]);
  }
  return acc;
}

double peaked_lagrange_sup_sum(const Configuration& config,
                               const KernelModel& kern_eps) {
  const PeakContext ctx(config, kern_eps);
  const std::vector<int> bulk =
      bulk_node_indices(config, kern_eps.model, kern_eps.n);
  const int n = config.n();
  double sup = 0.0;
  const int nrg = 40, ntg = 64;
  const double R = 1.2 * std::max(1.0, kern_eps.model.droplet.outer_radius);
  for (int ir = 0; ir <= nrg; ++ir) {
    const double r = R * ir / nrg;
    for (int it = 0; it < ntg; ++it) {
      const Complex z = std::polar(std::max(r, 1e-6), 2.0 * kPi * it / ntg);
      // Skip grid points colliding with nodes; |L_j| is bounded there.
      double smin = kInf;
      for (int i = 0; i < n; ++i)
        smin = std::min(smin, std::abs(z - config.points[i]));
      if (smin < 1e-9) continue;
      const Eigen::VectorXcd wb = weighted_basis(kern_eps, z);
      const Eigen::VectorXcd kvec = ctx.node_basis_conj * wb;
      double logw = 0.0;
      for (int i = 0; i < n; ++i) logw += std::log(std::abs(z - config.points[i]));
      const double qz = kern_eps.model.q(z);
      double total = 0.0;
      for (int j : bulk) {
        const double ka = std::abs(kvec[j]);
        if (ka == 0.0) continue;
        const double log_ell = logw - std::log(std::abs(z - config.points[j])) -
                               ctx.log_wprime[j].real() -
                               0.5 * n * (qz - ctx.qnode[j]);
        total += std::exp(2.0 * (std::log(ka) - ctx.diag_log[j]) + log_ell);
      }
      sup = std::max(sup, total);
    }
  }
  return sup;
}

double interpolation_norm(const Configuration& config,
                          const KernelModel& kern_eps,
                          const std::vector<double>& values,
                          std::uint64_t seed) {
  const int n = config.n();
  const std::vector<int> bulk =
      bulk_node_indices(config, kern_eps.model, kern_eps.n);
  if (bulk.empty())
    throw std::invalid_argument("interpolation_norm: no nodes in S_n");

  std::vector<double> c(values);
  if (c.empty()) {
    std::mt19937_64 eng(seed);
    c.resize(bulk.size());
    for (auto& v : c) v = (eng() & 1) ? 1.0 : -1.0;
  }
  if (c.size() != bulk.size())
    throw std::invalid_argument(
        "interpolation_norm: values must match the S_n node count");
  double csq = 0.0;
  for (double v : c) csq += v * v;
  if (csq == 0.0) return 0.0;

  const PeakContext ctx(config, kern_eps);
  // Top angular mode of |f|^2: twice deg f = (n-1) + 2(m_eps - 1).
  const int deg_f = (n - 1) + 2 * (kern_eps.m - 1);
  const int nt = std::clamp(round_up(2 * deg_f + 16, 64), 256, 1536);
  const int nr = 220;
  const double outer = kern_eps.quad.outer_radius;
  const GaussLegendre gl = gauss_legendre(nr);

  double mass = 0.0;
  for (int ir = 0; ir < nr; ++ir) {
    const double r = 0.5 * outer * (gl.nodes[ir] + 1.0);
    const double wring = 0.5 * outer * gl.weights[ir] * r * (2.0 / nt);
    double ring = 0.0;
    for (int it = 0; it < nt; ++it) {
      const Complex z = std::polar(r, 2.0 * kPi * it / nt);
      const Eigen::VectorXcd wb = weighted_basis(kern_eps, z);
      const Eigen::VectorXcd kvec = ctx.node_basis_conj * wb;
      Complex logw(0.0, 0.0);
      bool at_node = false;
      for (int i = 0; i < n; ++i) {
        const Complex d = z - config.points[i];
        if (d == Complex(0.0, 0.0)) {
          at_node = true;
          break;
        }
        logw += std::log(d);
      }
      if (at_node) continue;  // measure-zero; skip the node hit
      const double qz = kern_eps.model.q(z);
      Complex f(0.0, 0.0);
      for (std::size_t b = 0; b < bulk.size(); ++b) {
        const int j = bulk[b];
        if (kvec[j] == Complex(0.0, 0.0)) continue;
        const Complex log_ratio2 =
            2.0 * (std::log(kvec[j]) - ctx.diag_log[j]);
        const Complex log_ell = logw - std::log(z - config.points[j]) -
                                ctx.log_wprime[j] -
                                0.5 * n * (qz - ctx.qnode[j]);
        f += c[b] * std::exp(log_ratio2 + log_ell);
      }
      ring += std::norm(f);
    }
    mass += wring * ring;
  }
  return n * mass / csq;
}

}  // namespace feketelab
