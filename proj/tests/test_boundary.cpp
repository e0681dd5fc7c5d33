#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "feketelab/boundary.hpp"
#include "oracles.hpp"

using namespace feketelab;

TEST_CASE("phi at simple points") {
  CHECK(phi(Complex(0, 0)).real() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(phi(Complex(0, 0)).imag() == doctest::Approx(0.0));
  // increasing on the real line
  CHECK(phi(Complex(1, 0)).real() > phi(Complex(0.5, 0)).real());
  CHECK(phi(Complex(-3, 0)).real() > 0.0);
}

TEST_CASE("phi reflection identity") {
  for (Complex z : {Complex(0.5, 0), Complex(1, 1), Complex(-2, 3)}) {
    const Complex sum = phi(z) + phi(-z);
    CHECK(std::abs(sum - 1.0) < 1e-12);
  }
}

TEST_CASE("phi respects Schwarz reflection") {
  std::mt19937_64 eng(7);
  auto u = [&](double lo, double hi) {
    return lo + (hi - lo) * ((eng() >> 11) * 0x1.0p-53);
  };
  for (int i = 0; i < 40; ++i) {
    const Complex z(u(-4, 4), u(-4, 4));
    const Complex a = phi(std::conj(z));
    const Complex b = std::conj(phi(z));
    CHECK(std::abs(a - b) <= 1e-12 * (1.0 + std::abs(b)));
  }
}

TEST_CASE("phi matches contour quadrature oracle") {
  // real point from the acceptance list
  const Complex p2 = phi(Complex(-2, 0));
  const Complex o2 = oracles::phi_contour(Complex(-2, 0));
  CHECK(std::abs(p2 - o2) < 1e-10);
  // complex samples
  for (Complex z : {Complex(1, 1), Complex(-1.5, 2.0), Complex(0.3, -2.2)}) {
    const Complex got = phi(z);
    const Complex want = oracles::phi_contour(z);
    CHECK(std::abs(got - want) <= 1e-10 * (1.0 + std::abs(want)));
  }
}

TEST_CASE("erfc branch overlap agreement near the switch radius") {
  // Points land in the annulus around |w| = 4 where both branches are
  // defined; the continued-fraction side uses the near-axis Taylor shift
  // automatically where Lentz converges slowly.
  const EdgeEvaluator ev;
  std::mt19937_64 eng(19);
  auto u = [&](double lo, double hi) {
    return lo + (hi - lo) * ((eng() >> 11) * 0x1.0p-53);
  };
  for (int i = 0; i < 60; ++i) {
    const double r = u(3.7, 4.3);
    const double th = u(0.0, 2.0 * kPi);
    const Complex zeta = std::polar(r, th);
    const Complex a =
        erfc_complex_with(zeta, EdgeEvaluator::ErfcMethod::SeriesSmall, ev);
    const Complex b = erfc_complex_with(
        zeta, EdgeEvaluator::ErfcMethod::ContinuedFractionLarge, ev);
    CHECK(std::abs(a - b) <= 1e-9 * (1.0 + std::max(std::abs(a), std::abs(b))));
  }
}

TEST_CASE("dawson basic values and oracle") {
  CHECK(dawson(0.0) == 0.0);
  CHECK(dawson(1.0) > 0.0);
  CHECK(dawson(-1.0) == -dawson(1.0));
  // F(1) against the defining integral
  const double inner =
      oracles::adaptive_simpson([](double x) { return std::exp(x * x); }, 0.0,
                                1.0, 1e-14);
  const double want = std::exp(-1.0) * inner;
  CHECK(dawson(1.0) == doctest::Approx(want).epsilon(1e-10));
  // asymptotic expansion at t = 10: 1/(2t) + 1/(4t^3)
  const double asym = 1.0 / 20.0 + 1.0 / 4000.0;
  CHECK(std::abs(dawson(10.0) - asym) / asym < 1e-3);
}

TEST_CASE("dawson oracle at t = 10 to 1e-10") {
  const double inner = oracles::adaptive_simpson(
      [](double x) { return std::exp(x * x - 100.0); }, 0.0, 10.0, 1e-16);
  CHECK(std::abs(dawson(10.0) - inner) <= 1e-10 * inner);
}

TEST_CASE("dawson branch overlaps") {
  for (double t : {3.8, 3.9, 4.0}) {
    const double a = detail::dawson_series(t);
    const double b = detail::dawson_sampling(t);
    CHECK(std::abs(a - b) <= 1e-9 * std::abs(a));
  }
  for (double t : {5.6, 5.8, 6.0, 6.2}) {
    const double a = detail::dawson_sampling(t);
    const double b = detail::dawson_asymptotic(t);
    CHECK(std::abs(a - b) <= 1e-9 * std::abs(a));
  }
}

TEST_CASE("boundary kernel diagonal and hermitian symmetry") {
  CHECK(boundary_kernel(Complex(0, 0), Complex(0, 0)).real() ==
        doctest::Approx(0.5).epsilon(1e-13));
  // F(z,z) = Phi(-2 Re z); deep bulk side approx 1
  const Complex deep = boundary_kernel(Complex(-3, 0), Complex(-3, 0));
  CHECK(deep.real() == doctest::Approx(phi(Complex(6, 0)).real()).epsilon(1e-12));
  CHECK(deep.real() > 0.999999);
  std::mt19937_64 eng(3);
  auto u = [&](double lo, double hi) {
    return lo + (hi - lo) * ((eng() >> 11) * 0x1.0p-53);
  };
  for (int i = 0; i < 25; ++i) {
    const Complex z(u(-2, 2), u(-2, 2)), w(u(-2, 2), u(-2, 2));
    const Complex a = boundary_kernel(z, w);
    const Complex b = std::conj(boundary_kernel(w, z));
    CHECK(std::abs(a - b) <= 1e-13 * (1.0 + std::abs(a)));
  }
}

TEST_CASE("boundary kernel decays along rays") {
  double prev = 1.0;
  for (double s : {2.0, 4.0, 6.0, 8.0}) {
    const double v =
        std::abs(boundary_kernel(Complex(0.3 + s, s), Complex(0.3, 0)));
    CHECK(v < prev);
    prev = v;
  }
  CHECK(prev < 1e-8);
}

TEST_CASE("dawson bound holds on the grid") {
  // z = w diagonal case first
  const auto diag = dawson_bound_check(Complex(0.4, -1.0), Complex(0.4, -1.0));
  CHECK(diag.holds());
  int checked = 0;
  for (int a = 0; a < 20; ++a)
    for (int b = 0; b < 20; ++b) {
      const Complex z(-3.0 + 6.0 * a / 19.0, -3.0 + 6.0 * b / 19.0);
      const Complex w(-3.0 + 6.0 * b / 19.0, -3.0 + 6.0 * a / 19.0);
      const auto res = dawson_bound_check(z, w);
      CHECK(res.holds());
      ++checked;
    }
  CHECK(checked == 400);
  // purely imaginary separation: rhs dominated by the Dawson term
  const auto im = dawson_bound_check(Complex(0.2, 2.5), Complex(0.2, -2.5));
  CHECK(im.holds());
  CHECK(im.rhs > std::exp(-0.5 * 25.0));
}

TEST_CASE("ginibre infinity kernel") {
  CHECK(ginibre_infty_kernel(Complex(0.7, -0.2), Complex(0.7, -0.2)).real() ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(ginibre_infty_kernel(Complex(0, 0), Complex(2, 0))) ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-13));
  std::mt19937_64 eng(11);
  auto u = [&](double lo, double hi) {
    return lo + (hi - lo) * ((eng() >> 11) * 0x1.0p-53);
  };
  for (int i = 0; i < 20; ++i) {
    const Complex z(u(-2, 2), u(-2, 2)), w(u(-2, 2), u(-2, 2));
    CHECK(std::abs(ginibre_infty_kernel(z, w) -
                   std::conj(ginibre_infty_kernel(w, z))) < 1e-14);
    CHECK(std::abs(ginibre_infty_kernel(z, w)) ==
          doctest::Approx(std::exp(-0.5 * std::norm(z - w))).epsilon(1e-12));
  }
}

TEST_CASE("lastl identity residual") {
  CHECK(lastl_identity_residual(Complex(-10, 0), 1.0) < 1e-6);
  CHECK(lastl_identity_residual(Complex(0, 0), 1.0) < 1e-6);
  CHECK(lastl_identity_residual(Complex(0.5, 0), 1.0) < 1e-6);
  CHECK(lastl_identity_residual(Complex(1, 1), 0.5) < 1e-6);
}

TEST_CASE("F determinants positive semidefinite at random points") {
  std::mt19937_64 eng(23);
  auto u = [&](double lo, double hi) {
    return lo + (hi - lo) * ((eng() >> 11) * 0x1.0p-53);
  };
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXcd M2(2, 2), M3(3, 3);
    std::vector<Complex> pts;
    for (int i = 0; i < 3; ++i) pts.emplace_back(u(-2, 2), u(-2, 2));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) M3(i, j) = boundary_kernel(pts[i], pts[j]);
    M2 = M3.topLeftCorner(2, 2);
    CHECK(M2.determinant().real() >= -1e-10);
    CHECK(M3.determinant().real() >= -1e-10);
  }
}
