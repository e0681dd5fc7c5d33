#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "feketelab/types.hpp"

namespace feketelab {

enum class PotentialKind { Ginibre, CustomSmooth };

// Geometry of the droplet S (support of the equilibrium measure).
// signed_distance is positive inside, zero on the boundary, negative
// outside.  Radial droplets expose their outer radius so that the
// shrunk set S_n stays an exact disk for quadrature.
struct DropletDescriptor {
  std::function<double(Complex)> signed_distance;
  bool radial = false;
  double outer_radius = 0.0;

  bool contains(Complex z) const { return signed_distance(z) >= 0.0; }
};

// External field Q with its derivatives, the equilibrium potential
// Q-hat where available, and the droplet geometry.  Evaluators are pure;
// the model can be shared freely across threads.
struct PotentialModel {
  PotentialKind kind = PotentialKind::Ginibre;
  std::string name = "ginibre";

  std::function<double(Complex)> q;
  std::function<Eigen::Vector2d(Complex)> grad_q;
  std::function<double(Complex)> lap_q;  // normalized Laplacian; empty -> FD
  std::function<double(Complex)> q_hat;  // empty for models without it
  DropletDescriptor droplet;

  // Bulk margin delta_n; the default log^2(n)/sqrt(n) follows the droplet
  // shrinkage S_n of the density theorems.  Desk-scale sweeps override it.
  std::function<double(int)> bulk_margin;

  // Separation parameter s entering S+ = S + D(0; s/sqrt(n)).
  double separation_parameter = 0.5;

  bool has_q_hat() const { return static_cast<bool>(q_hat); }
  bool has_analytic_laplacian() const { return static_cast<bool>(lap_q); }

  // Complex derivative dQ = (dQ/dx - i dQ/dy)/2, derived from grad_q.
  Complex complex_derivative(Complex z) const {
    Eigen::Vector2d g = grad_q(z);
    return 0.5 * Complex(g[0], -g[1]);
  }
};

double default_bulk_margin(int n);

// Built-in potentials.  quartic_potential is |z|^4 with droplet radius
// 2^{-1/4}; its equilibrium potential is known in closed form, so it also
// carries the q_hat capability.
PotentialModel ginibre_potential();
PotentialModel quartic_potential();

// Registry lookup by name ("ginibre", "quartic").  Unknown names throw.
PotentialModel make_potential(const std::string& name);
std::vector<std::string> registered_potentials();

// Normalized Laplacian at z: analytic when the model provides it, else a
// second-order central difference of q with step h.
double laplacian(const PotentialModel& model, Complex z);
double laplacian_fd(const PotentialModel& model, Complex z, double h);

// Equilibrium potential for Q = |z|^2: |z|^2 on the closed unit disk,
// 2 log|z| + 1 outside (C^1 across the boundary circle).
double ginibre_equilibrium_potential(Complex z);

// sigma(D(0;t)) for the model's equilibrium measure.  Ginibre is the
// closed form min(t,1)^2; custom models are integrated in polar
// coordinates over the droplet.
double equilibrium_mass_in_disk(const PotentialModel& model, double t);

// Signed Euclidean distance from z to the droplet boundary (negative
// outside), d_n-style.
double distance_to_boundary(const PotentialModel& model, Complex z);

// Whether z lies in the shrunk bulk S_n = {dist(., boundary) >= margin}.
// `margin_factor` multiplies bulk_margin(n) (the M-class definitions use
// factor 2, the density theorems factor 3).
bool in_bulk(const PotentialModel& model, int n, Complex z,
             double margin_factor = 1.0);

}  // namespace feketelab
