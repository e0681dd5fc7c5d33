#pragma once

#include <Eigen/Dense>

#include "feketelab/types.hpp"

namespace feketelab {

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  Eigen::ArrayXd nodes;
  Eigen::ArrayXd weights;
};

GaussLegendre gauss_legendre(int n);

// Quadrature rule for integrals against normalized area measure
// dA = dx dy / pi.  Nodes are complex points; sum(weights * f(points))
// approximates the integral of f over the covered region.
struct PolarRule {
  Eigen::ArrayXcd points;
  Eigen::ArrayXd weights;

  // Integrates a scalar function over the rule.
  template <class F>
  double integrate(F&& f) const {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < points.size(); ++i)
      acc += weights[i] * f(points[i]);
    return acc;
  }
};

// Tensor rule on the disk D(center; radius): Gauss-Legendre in radius,
// trapezoid in angle (spectrally accurate for the periodic direction).
PolarRule disk_rule(Complex center, double radius, int radial_nodes,
                    int angular_nodes);

// Same construction on the annulus r0 <= |z - center| <= r1.
PolarRule annulus_rule(Complex center, double r0, double r1, int radial_nodes,
                       int angular_nodes);

}  // namespace feketelab
