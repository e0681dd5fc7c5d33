#include "feketelab/fekete.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace feketelab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double min_pair_distance(const Eigen::VectorXcd& pts) {
  const int n = static_cast<int>(pts.size());
  double mn = kInf;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      mn = std::min(mn, std::abs(pts[i] - pts[j]));
  return mn;
}

double energy_of(const Eigen::VectorXcd& pts, const PotentialModel& model) {
  const int n = static_cast<int>(pts.size());
  double interaction = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double d = std::abs(pts[i] - pts[j]);
      if (d == 0.0) return kInf;
      interaction -= 2.0 * std::log(d);
    }
  double field = 0.0;
  for (int j = 0; j < n; ++j) field += model.q(pts[j]);
  return interaction + n * field;
}

// Gradient as a packed (x0, y0, x1, y1, ...) vector.
Eigen::VectorXd gradient_packed(const Eigen::VectorXcd& pts,
                                const PotentialModel& model) {
  const int n = static_cast<int>(pts.size());
  Eigen::VectorXd g = Eigen::VectorXd::Zero(2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Complex d = pts[i] - pts[j];
      const double r2 = std::norm(d);
      if (r2 == 0.0)
        throw CoincidentPointsError("gradient: coincident points");
      const double fx = -2.0 * d.real() / r2;
      const double fy = -2.0 * d.imag() / r2;
      g[2 * i] += fx;
      g[2 * i + 1] += fy;
      g[2 * j] -= fx;
      g[2 * j + 1] -= fy;
    }
  for (int j = 0; j < n; ++j) {
    const Eigen::Vector2d gq = model.grad_q(pts[j]);
    g[2 * j] += n * gq[0];
    g[2 * j + 1] += n * gq[1];
  }
  return g;
}

double residual_of(const Eigen::VectorXcd& pts, const PotentialModel& model) {
  const int n = static_cast<int>(pts.size());
  double mx = 0.0;
  for (int j = 0; j < n; ++j) {
    Complex s(0.0, 0.0);
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      const Complex d = pts[j] - pts[i];
      if (d == Complex(0.0, 0.0))
        throw CoincidentPointsError("first_order_residual: coincident points");
      s += 1.0 / d;
    }
    s -= static_cast<double>(n) * model.complex_derivative(pts[j]);
    mx = std::max(mx, std::abs(s));
  }
  return mx;
}

// Energy Hessian in packed real coordinates.  The pair term
// -2 log|p_i - p_j| contributes (2/r^2)(2 dd^T - I) on the diagonal blocks
// and its negative on the cross blocks; the field adds n Hess Q.
Eigen::MatrixXd hessian_packed(const Eigen::VectorXcd& pts,
                               const PotentialModel& model) {
  const int n = static_cast<int>(pts.size());
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Complex d = pts[i] - pts[j];
      const double r2 = std::norm(d);
      const double c = 2.0 / (r2 * r2);
      const double hxx = c * (d.real() * d.real() - d.imag() * d.imag());
      const double hxy = c * 2.0 * d.real() * d.imag();
      // block = (2/r^2)(2 dd^T/r^2 - I) written out
      Eigen::Matrix2d B;
      B << hxx, hxy, hxy, -hxx;
      H.block<2, 2>(2 * i, 2 * i) += B;
      H.block<2, 2>(2 * j, 2 * j) += B;
      H.block<2, 2>(2 * i, 2 * j) -= B;
      H.block<2, 2>(2 * j, 2 * i) -= B;
    }
  // Field Hessian by central differences of grad_q (exact for Ginibre up
  // to roundoff); h tuned for C^3 fields.
  const double h = 1e-5;
  for (int j = 0; j < n; ++j) {
    const Complex z = pts[j];
    const Eigen::Vector2d gxp = model.grad_q(z + Complex(h, 0));
    const Eigen::Vector2d gxm = model.grad_q(z - Complex(h, 0));
    const Eigen::Vector2d gyp = model.grad_q(z + Complex(0, h));
    const Eigen::Vector2d gym = model.grad_q(z - Complex(0, h));
    Eigen::Matrix2d Hq;
    Hq(0, 0) = (gxp[0] - gxm[0]) / (2 * h);
    Hq(0, 1) = (gyp[0] - gym[0]) / (2 * h);
    Hq(1, 0) = (gxp[1] - gxm[1]) / (2 * h);
    Hq(1, 1) = (gyp[1] - gym[1]) / (2 * h);
    Hq = 0.5 * (Hq + Hq.transpose()).eval();
    H.block<2, 2>(2 * j, 2 * j) += n * Hq;
  }
  return H;
}

Eigen::VectorXcd unpack(const Eigen::VectorXd& x) {
  Eigen::VectorXcd pts(x.size() / 2);
  for (int j = 0; j < pts.size(); ++j)
    pts[j] = Complex(x[2 * j], x[2 * j + 1]);
  return pts;
}

Eigen::VectorXd pack(const Eigen::VectorXcd& pts) {
  Eigen::VectorXd x(2 * pts.size());
  for (int j = 0; j < pts.size(); ++j) {
    x[2 * j] = pts[j].real();
    x[2 * j + 1] = pts[j].imag();
  }
  return x;
}

Eigen::VectorXcd sample_initial(int n, const PotentialModel& model,
                                std::mt19937_64& eng) {
  auto uniform = [&eng]() { return (eng() >> 11) * 0x1.0p-53; };
  Eigen::VectorXcd pts(n);
  const double R = model.droplet.radial && model.droplet.outer_radius > 0.0
                       ? model.droplet.outer_radius
                       : 1.0;
  for (int j = 0; j < n; ++j) {
    for (int tries = 0; tries < 10000; ++tries) {
      const double r = R * std::sqrt(uniform());
      const double th = 2.0 * kPi * uniform();
      const Complex z = std::polar(r, th);
      if (model.droplet.radial || model.droplet.contains(z)) {
        pts[j] = z;
        break;
      }
    }
  }
  return pts;
}

struct RunResult {
  Eigen::VectorXd x;
  double energy = kInf;
  double residual = kInf;
  int iterations = 0;
  bool converged = false;
};

// One seeded descent: a BB (or fixed-step) globalization phase followed by
// damped Newton once the residual is small.
RunResult run_descent(int n, const PotentialModel& model,
                      const OptimizerSettings& settings, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  RunResult out;
  Eigen::VectorXd x = pack(sample_initial(n, model, eng));
  const double tol = settings.grad_tol * n;
  const double collision_floor = 1e-9;

  auto e_of = [&](const Eigen::VectorXd& v) {
    return energy_of(unpack(v), model);
  };

  double e = e_of(x);
  Eigen::VectorXd g = gradient_packed(unpack(x), model);
  Eigen::VectorXd x_prev, g_prev;
  int iter = 0;
  const int newton_budget = settings.max_iters;
  const double phase_switch = std::max(tol, 2e-3 * n);

  // Phase 1: descent until the residual is small enough for Newton.
  while (iter < newton_budget) {
    const double res = residual_of(unpack(x), model);
    if (res <= phase_switch) break;
    double step;
    if (settings.step_rule == OptimizerSettings::StepRule::BarzilaiBorwein &&
        x_prev.size() > 0) {
      const Eigen::VectorXd dx = x - x_prev;
      const Eigen::VectorXd dg = g - g_prev;
      const double dgdg = dg.dot(dg);
      step = dgdg > 0.0 ? std::abs(dx.dot(dg)) / dgdg : 1.0 / (4.0 * n);
    } else {
      step = 1.0 / (4.0 * n);  // field curvature scale
    }
    step = std::clamp(step, 1e-12, 10.0);

    // Backtracking with a collision guard.
    x_prev = x;
    g_prev = g;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      Eigen::VectorXd xt = x - step * g;
      const Eigen::VectorXcd pt = unpack(xt);
      if (min_pair_distance(pt) < collision_floor) {
        step *= 0.5;
        continue;
      }
      const double et = energy_of(pt, model);
      if (et < e) {
        x = std::move(xt);
        e = et;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    ++iter;
    if (!accepted) break;  // stagnation: hand over to Newton
    g = gradient_packed(unpack(x), model);
  }

  // Phase 2: Newton with Levenberg damping.
  double lambda = 0.0;
  while (iter < settings.max_iters) {
    const Eigen::VectorXcd pts = unpack(x);
    const double res = residual_of(pts, model);
    if (res <= tol) {
      out.converged = true;
      break;
    }
    Eigen::MatrixXd H = hessian_packed(pts, model);
    g = gradient_packed(pts, model);
    bool accepted = false;
    for (int attempt = 0; attempt < 12; ++attempt) {
      Eigen::MatrixXd Hd = H;
      if (lambda > 0.0) Hd.diagonal().array() += lambda;
      Eigen::LDLT<Eigen::MatrixXd> ldlt(Hd);
      if (ldlt.info() == Eigen::Success) {
        Eigen::VectorXd s = ldlt.solve(-g);
        double t = 1.0;
        for (int bt = 0; bt < 40; ++bt) {
          Eigen::VectorXd xt = x + t * s;
          const Eigen::VectorXcd pt = unpack(xt);
          if (min_pair_distance(pt) >= collision_floor) {
            const double rt = residual_of(pt, model);
            const double et = energy_of(pt, model);
            if (rt < res || et < e) {
              x = std::move(xt);
              e = et;
              accepted = true;
              break;
            }
          }
          t *= 0.5;
        }
      }
      if (accepted) {
        lambda *= 0.25;
        break;
      }
      lambda = (lambda == 0.0) ? 2.0 * n : 10.0 * lambda;
    }
    ++iter;
    if (!accepted) break;
  }

  out.x = x;
  out.energy = e_of(x);
  out.residual = residual_of(unpack(x), model);
  out.iterations = iter;
  return out;
}

}  // namespace

double energy(const Configuration& config, const PotentialModel& model) {
  return energy_of(config.points, model);
}

double log_vandermonde(const Configuration& config,
                       const PotentialModel& model) {
  return -energy(config, model);
}

std::vector<Eigen::Vector2d> gradient(const Configuration& config,
                                      const PotentialModel& model) {
  const Eigen::VectorXd g = gradient_packed(config.points, model);
  std::vector<Eigen::Vector2d> out(config.n());
  for (int j = 0; j < config.n(); ++j)
    out[j] = Eigen::Vector2d(g[2 * j], g[2 * j + 1]);
  return out;
}

double first_order_residual(const Configuration& config,
                            const PotentialModel& model) {
  return residual_of(config.points, model);
}

double separation(const Configuration& config) {
  if (config.n() < 2)
    throw std::invalid_argument("separation: need at least two points");
  return std::sqrt(static_cast<double>(config.n())) *
         min_pair_distance(config.points);
}

FeketeResult solve_fekete(int n, const PotentialModel& model,
                          const OptimizerSettings& settings) {
  if (n < 1) throw std::invalid_argument("solve_fekete: n < 1");
  if (settings.restarts < 1)
    throw std::invalid_argument("solve_fekete: restarts < 1");
  if (!(settings.grad_tol > 0.0))
    throw std::invalid_argument("solve_fekete: grad_tol <= 0");

  FeketeResult best;
  best.energy = kInf;
  bool any_converged = false;
  for (int r = 0; r < settings.restarts; ++r) {
    const std::uint64_t seed = settings.rng_seed + 0x9e3779b97f4a7c15ull * r;
    RunResult run = run_descent(n, model, settings, seed);
    const bool better =
        (run.converged && !any_converged) ||
        (run.converged == any_converged && run.energy < best.energy);
    if (better) {
      best.config.points = unpack(run.x);
      best.energy = run.energy;
      best.first_order_residual = run.residual;
      best.iterations = run.iterations;
      best.restart_index = r;
      const Eigen::VectorXd g = gradient_packed(best.config.points, model);
      double ginf = 0.0;
      for (int j = 0; j < n; ++j)
        ginf = std::max(ginf, std::hypot(g[2 * j], g[2 * j + 1]));
      best.grad_inf_norm = ginf;
    }
    any_converged = any_converged || run.converged;
  }
  if (!any_converged)
    throw FeketeNonConvergence(
        "solve_fekete: no restart reached grad_tol within max_iters", best);
  return best;
}

LogPolar lagrange_weighted_log(const Configuration& config, int j, Complex z,
                               const PotentialModel& model) {
  const int n = config.n();
  if (j < 0 || j >= n)
    throw std::invalid_argument("lagrange_weighted: index out of range");
  const Complex zj = config.points[j];
  double logmag = 0.0;
  Complex phase(1.0, 0.0);
  for (int i = 0; i < n; ++i) {
    if (i == j) continue;
    const Complex num = z - config.points[i];
    const Complex den = zj - config.points[i];
    const double an = std::abs(num), ad = std::abs(den);
    if (ad == 0.0)
      throw CoincidentPointsError("lagrange_weighted: coincident nodes");
    if (an == 0.0) return {-kInf, Complex(1.0, 0.0)};
    logmag += std::log(an) - std::log(ad);
    phase *= (num / an) * (ad / den);
  }
  logmag -= 0.5 * n * (model.q(z) - model.q(zj));
  const double ap = std::abs(phase);
  if (ap > 0.0) phase /= ap;
  return {logmag, phase};
}

double lagrange_weighted(const Configuration& config, int j, Complex z,
                         const PotentialModel& model) {
  return lagrange_weighted_log(config, j, z, model).abs();
}

double leja_siciak(const Configuration& config, Complex z,
                   const PotentialModel& model) {
  if (!model.has_q_hat())
    throw CapabilityError("leja_siciak: model does not expose q_hat");
  const int n = config.n();
  double best = -kInf;
  for (int j = 0; j < n; ++j) {
    double log_lj = 0.0;  // log |l_j(z)| (unweighted Lagrange polynomial)
    const Complex zj = config.points[j];
    bool zero = false;
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      const double an = std::abs(z - config.points[i]);
      const double ad = std::abs(zj - config.points[i]);
      if (ad == 0.0)
        throw CoincidentPointsError("leja_siciak: coincident nodes");
      if (an == 0.0) {
        zero = true;
        break;
      }
      log_lj += std::log(an) - std::log(ad);
    }
    if (zero) continue;
    best = std::max(best, 2.0 * log_lj + n * model.q(zj));
  }
  return best / n;
}

std::vector<double> radial_cdf(const Configuration& config,
                               const std::vector<double>& t_grid) {
  std::vector<double> out;
  out.reserve(t_grid.size());
  const int n = config.n();
  for (double t : t_grid) {
    int count = 0;
    for (int j = 0; j < n; ++j)
      if (std::abs(config.points[j]) <= t) ++count;
    out.push_back(n > 0 ? static_cast<double>(count) / n : 0.0);
  }
  return out;
}

}  // namespace feketelab
