#include "feketelab/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace feketelab {

GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  GaussLegendre gl;
  gl.nodes.resize(n);
  gl.weights.resize(n);
  // Newton iteration on P_n from the Chebyshev-like initial guess; the
  // rule is symmetric so only the lower half is computed.
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Recurrence for P_n(x) and P_{n-1}(x).
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    gl.nodes[i] = -x;
    gl.nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    gl.weights[i] = w;
    gl.weights[n - 1 - i] = w;
  }
  return gl;
}

PolarRule annulus_rule(Complex center, double r0, double r1, int radial_nodes,
                       int angular_nodes) {
  if (!(r1 > r0) || r0 < 0.0)
    throw std::invalid_argument("annulus_rule: need 0 <= r0 < r1");
  if (radial_nodes < 1 || angular_nodes < 1)
    throw std::invalid_argument("annulus_rule: node counts must be positive");
  const GaussLegendre gl = gauss_legendre(radial_nodes);

  PolarRule rule;
  rule.points.resize(static_cast<Eigen::Index>(radial_nodes) * angular_nodes);
  rule.weights.resize(rule.points.size());

  // dA = r dr dtheta / pi; trapezoid weight in angle is 2*pi/n_theta, so the
  // combined angular factor is 2/n_theta.
  const double ang_w = 2.0 / angular_nodes;
  Eigen::Index idx = 0;
  for (int i = 0; i < radial_nodes; ++i) {
    const double r = 0.5 * (r1 - r0) * (gl.nodes[i] + 1.0) + r0;
    const double wr = 0.5 * (r1 - r0) * gl.weights[i] * r * ang_w;
    for (int j = 0; j < angular_nodes; ++j) {
      const double th = 2.0 * kPi * j / angular_nodes;
      rule.points[idx] = center + Complex(r * std::cos(th), r * std::sin(th));
      rule.weights[idx] = wr;
      ++idx;
    }
  }
  return rule;
}

PolarRule disk_rule(Complex center, double radius, int radial_nodes,
                    int angular_nodes) {
  if (!(radius > 0.0)) throw std::invalid_argument("disk_rule: radius <= 0");
  return annulus_rule(center, 0.0, radius, radial_nodes, angular_nodes);
}

}  // namespace feketelab
