#include "feketelab/potential.hpp"

#include <cmath>
#include <stdexcept>

#include "feketelab/quadrature.hpp"

namespace feketelab {

double default_bulk_margin(int n) {
  const double ln = std::log(static_cast<double>(n));
  return ln * ln / std::sqrt(static_cast<double>(n));
}

PotentialModel ginibre_potential() {
  PotentialModel m;
  m.kind = PotentialKind::Ginibre;
  m.name = "ginibre";
  m.q = [](Complex z) { return std::norm(z); };
  m.grad_q = [](Complex z) {
    return Eigen::Vector2d(2.0 * z.real(), 2.0 * z.imag());
  };
  m.lap_q = [](Complex) { return 1.0; };
  m.q_hat = [](Complex z) { return ginibre_equilibrium_potential(z); };
  m.droplet.signed_distance = [](Complex z) { return 1.0 - std::abs(z); };
  m.droplet.radial = true;
  m.droplet.outer_radius = 1.0;
  m.bulk_margin = default_bulk_margin;
  return m;
}

PotentialModel quartic_potential() {
  // Q = |z|^4: Laplacian 4|z|^2, droplet radius R with 2R^4 = 1.
  const double R = std::pow(0.5, 0.25);
  PotentialModel m;
  m.kind = PotentialKind::CustomSmooth;
  m.name = "quartic";
  m.q = [](Complex z) {
    double r2 = std::norm(z);
    return r2 * r2;
  };
  m.grad_q = [](Complex z) {
    double r2 = std::norm(z);
    return Eigen::Vector2d(4.0 * r2 * z.real(), 4.0 * r2 * z.imag());
  };
  m.lap_q = [](Complex z) { return 4.0 * std::norm(z); };
  m.q_hat = [R](Complex z) {
    double r = std::abs(z);
    if (r <= R) {
      double r2 = r * r;
      return r2 * r2;
    }
    return 2.0 * std::log(r / R) + R * R * R * R;
  };
  m.droplet.signed_distance = [R](Complex z) { return R - std::abs(z); };
  m.droplet.radial = true;
  m.droplet.outer_radius = R;
  m.bulk_margin = default_bulk_margin;
  return m;
}

PotentialModel make_potential(const std::string& name) {
  if (name == "ginibre") return ginibre_potential();
  if (name == "quartic") return quartic_potential();
  throw std::invalid_argument("make_potential: unknown potential '" + name +
                              "'");
}

std::vector<std::string> registered_potentials() {
  return {"ginibre", "quartic"};
}

double laplacian_fd(const PotentialModel& model, Complex z, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("laplacian_fd: h <= 0");
  const double c = model.q(z);
  const double s = model.q(z + Complex(h, 0)) + model.q(z - Complex(h, 0)) +
                   model.q(z + Complex(0, h)) + model.q(z - Complex(0, h));
  const double val = (s - 4.0 * c) / (4.0 * h * h);
  if (!std::isfinite(val))
    throw EvaluationError("laplacian_fd: non-finite potential near z");
  return val;
}

double laplacian(const PotentialModel& model, Complex z) {
  if (model.has_analytic_laplacian()) {
    double val = model.lap_q(z);
    if (!std::isfinite(val))
      throw EvaluationError("laplacian: non-finite evaluation");
    return val;
  }
  // Central difference; h balances O(h^2) truncation against roundoff.
  const double h = 5e-4 * std::max(1.0, std::abs(z));
  return laplacian_fd(model, z, h);
}

double ginibre_equilibrium_potential(Complex z) {
  const double r = std::abs(z);
  if (r <= 1.0) return r * r;
  return 2.0 * std::log(r) + 1.0;
}

double equilibrium_mass_in_disk(const PotentialModel& model, double t) {
  if (t < 0.0)
    throw std::invalid_argument("equilibrium_mass_in_disk: negative radius");
  if (t == 0.0) return 0.0;
  if (model.kind == PotentialKind::Ginibre) {
    const double c = std::min(t, 1.0);
    return c * c;
  }
  if (!model.droplet.signed_distance)
    throw CapabilityError("equilibrium_mass_in_disk: no droplet descriptor");
  // Quadrature of 1_S * lap_q over D(0;t).  For radial droplets the
  // integration domain is cut exactly at the droplet radius.
  double outer = t;
  if (model.droplet.radial)
    outer = std::min(t, model.droplet.outer_radius);
  PolarRule rule = disk_rule(Complex(0, 0), outer, 160, 64);
  double mass = 0.0;
  for (Eigen::Index i = 0; i < rule.points.size(); ++i) {
    Complex z = rule.points[i];
    if (model.droplet.radial || model.droplet.contains(z))
      mass += rule.weights[i] * laplacian(model, z);
  }
  return mass;
}

double distance_to_boundary(const PotentialModel& model, Complex z) {
  if (model.kind == PotentialKind::Ginibre) return 1.0 - std::abs(z);
  return model.droplet.signed_distance(z);
}

bool in_bulk(const PotentialModel& model, int n, Complex z,
             double margin_factor) {
  const double margin = margin_factor * model.bulk_margin(n);
  return distance_to_boundary(model, z) >= margin;
}

}  // namespace feketelab
