#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "mss/boundary_data.hpp"
#include "mss/bounds.hpp"
#include "mss/errors.hpp"
#include "mss/geometry.hpp"
#include "mss/mesh.hpp"
#include "oracles.hpp"

using namespace mss;

namespace {

// closed-form root of R^4 = c (1 + R^2), the crossing equation for the
// quadratic-image disk case after both sides are squared
double quartic_root(double c) {
  double x = 0.5 * (c + std::sqrt(c * c + 4.0 * c));  // x = R^2
  double R = std::sqrt(x);
  // self-check: the root actually satisfies the quartic
  REQUIRE(std::abs(R * R * R * R - c * (1.0 + R * R)) < 1e-4 * c * (1.0 + R * R));
  return R;
}

GraphFunction radial_hopf(const Mesh& ball, double R) {
  return sample_graph(ball, 3, [R](const VectorXd& x) {
    double r = x.norm();
    if (r < 1e-12) return VectorXd(VectorXd::Zero(3));
    return VectorXd(R * r * oracle::hopf3(x / r));
  });
}

}  // namespace

TEST_CASE("upper bound curve matches its closed forms") {
  double V = 10.0 * M_PI * M_PI;
  CHECK(upper_bound_curve(0.0, 3, 2, V) == 0.0);
  CHECK(upper_bound_curve(1.0, 3, 2, V) ==
        doctest::Approx(std::sqrt(2.0) / 4.0 * V).epsilon(1e-14));
  // the simplified power form touches the exact curve at R = 1 and dominates it above
  CHECK(upper_bound_simplified(1.0, 3, 2, V) ==
        doctest::Approx(upper_bound_curve(1.0, 3, 2, V)).epsilon(1e-14));
  double prev = 0.0;
  for (double R : oracle::linspace(1.0, 30.0, 30)) {
    double exact = upper_bound_curve(R, 3, 2, V);
    CHECK(upper_bound_simplified(R, 3, 2, V) >= exact * (1.0 - 1e-14));
    CHECK(exact > prev);
    prev = exact;
  }
  CHECK_THROWS_AS(upper_bound_curve(-1.0, 3, 2, V), std::invalid_argument);
  CHECK_THROWS_AS(upper_bound_curve(1.0, 3, 2, 0.0), std::invalid_argument);
}

TEST_CASE("lower bound curve matches its closed forms") {
  CHECK(lower_bound_curve(1.0, 3, 1.0) == doctest::Approx(M_PI * M_PI / 2.0).epsilon(1e-14));
  CHECK(lower_bound_curve(2.0, 1, 1.0) == doctest::Approx(4.0 * M_PI).epsilon(1e-14));
  // halving the reach scales the bound by 2^{-(n+1)}
  CHECK(lower_bound_curve(1.5, 3, 0.5) ==
        doctest::Approx(lower_bound_curve(1.5, 3, 1.0) / 16.0).epsilon(1e-14));
  double prev = 0.0;
  for (double R : oracle::linspace(0.5, 20.0, 25)) {
    double v = lower_bound_curve(R, 3, 1.0);
    CHECK(v > prev);
    prev = v;
  }
  CHECK_THROWS_AS(lower_bound_curve(1.0, 3, 0.0), std::invalid_argument);
}

TEST_CASE("the ball volume constant agrees with meshed balls") {
  CHECK(unit_ball_volume(2) == doctest::Approx(M_PI).epsilon(1e-14));
  CHECK(unit_ball_volume(4) == doctest::Approx(M_PI * M_PI / 2.0).epsilon(1e-14));
  CHECK(mesh_volume(ball_mesh(2, 1.0, 2, 4)) == doctest::Approx(M_PI).epsilon(0.01));
  CHECK(mesh_volume(ball_mesh(3, 1.0, 2, 3)) ==
        doctest::Approx(unit_ball_volume(3)).epsilon(0.02));
  CHECK(mesh_volume(ball_mesh(4, 1.0, 2, 3)) ==
        doctest::Approx(unit_ball_volume(4)).epsilon(0.08));
}

TEST_CASE("the disk threshold matches the closed-form quartic root") {
  double V = 10.0 * M_PI * M_PI;
  double R_star = nonexistence_threshold(3, 2, V, 1.0);
  CHECK(R_star == doctest::Approx(quartic_root(25.0)).epsilon(1e-10));
  CHECK(R_star == doctest::Approx(std::sqrt((25.0 + std::sqrt(725.0)) / 2.0)).epsilon(1e-10));
  CHECK(std::abs(R_star - 5.0954) < 1e-3);

  // the crossing certificate: relative gap closed, sign change across R*
  double U = upper_bound_curve(R_star, 3, 2, V);
  double L = lower_bound_curve(R_star, 3, 1.0);
  CHECK(std::abs(L - U) / L <= 1e-10);
  CHECK(lower_bound_curve(R_star - 1e-3, 3, 1.0) < upper_bound_curve(R_star - 1e-3, 3, 2, V));
  CHECK(lower_bound_curve(R_star + 1e-3, 3, 1.0) > upper_bound_curve(R_star + 1e-3, 3, 2, V));

  // halving the reach: the crossing coefficient scales by epsilon0^{-8}
  // (epsilon0^4 R^2 = 5 sqrt(1+R^2), squared), so c = 25 * 256 = 6400
  double R_half = nonexistence_threshold(3, 2, V, 0.5);
  CHECK(R_half == doctest::Approx(quartic_root(6400.0)).epsilon(1e-10));
  CHECK(std::abs(R_half - 80.0062) < 1e-3);

  // more data volume pushes the inconsistency further out
  CHECK(nonexistence_threshold(3, 2, 2.0 * V, 1.0) > R_star);
  CHECK_THROWS_AS(nonexistence_threshold(3, 3, V, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(nonexistence_threshold(3, 2, V, 0.0), std::invalid_argument);
}

TEST_CASE("tiny data volumes cross below one and say so") {
  bool below = false;
  double R_star = nonexistence_threshold(3, 2, 0.1, 1.0, &below);
  CHECK(below);
  CHECK(R_star < 1.0);
  CHECK(R_star > 0.0);
  double U = upper_bound_curve(R_star, 3, 2, 0.1);
  double L = lower_bound_curve(R_star, 3, 1.0);
  CHECK(std::abs(L - U) / L <= 1e-10);

  bool above = true;
  nonexistence_threshold(3, 2, 10.0 * M_PI * M_PI, 1.0, &above);
  CHECK_FALSE(above);
}

TEST_CASE("the annulus threshold is finite and collapses as the gap closes") {
  // summed data volume for the two-component family: the unit-sphere fibration
  // plus its doubled copy over the radius-2 sphere, which is the uniform
  // dilation of the unit graph and so carries exactly 8 times its volume
  BoundaryMap inner = make_map("hopf3");
  BoundaryMap outer = scale_map(make_map("hopf3"), 2.0);
  Mesh s3 = sphere_mesh(3, 4);
  double V1 = graph_volume(inner, s3, 1.0);
  double V2 = graph_volume(outer, s3, 2.0);
  CHECK(V1 == doctest::Approx(10.0 * M_PI * M_PI).epsilon(0.02));
  CHECK(V2 == doctest::Approx(8.0 * V1).epsilon(1e-12));
  CHECK(V2 == doctest::Approx(80.0 * M_PI * M_PI).epsilon(0.02));
  double V_total = V1 + V2;

  double R_star = annulus_threshold(3, 2, V_total, 1.0);
  CHECK(std::isfinite(R_star));
  // closed-form crossing with the same V_total: R^2 = (16 V / pi^2) sqrt(1+R^2)
  double c = std::pow(16.0 * V_total / (M_PI * M_PI), 2);
  CHECK(R_star == doctest::Approx(quartic_root(c)).epsilon(1e-8));
  CHECK(std::abs(R_star - 1440.0) < 15.0);  // regression scale for the d = 1 gap

  // monotone decreasing in the separation, diverging as it vanishes
  std::vector<double> d_grid = {0.5, 0.75, 1.0, 1.5, 2.0};
  double prev = std::numeric_limits<double>::infinity();
  for (double d : d_grid) {
    double r = annulus_threshold(3, 2, V_total, d);
    CHECK(r < prev);
    prev = r;
  }
  // R* grows like d^{-4} here, so a tenth of the gap pushes it out by 1e4
  CHECK(annulus_threshold(3, 2, V_total, 0.1) > 1e6);

  // far above R = 1 the curves are pure powers, so doubling d rescales the
  // crossing by 2^{-(n+1)/(n-l)} = 1/16
  double r1 = annulus_threshold(3, 2, V_total, 0.5);
  double r2 = annulus_threshold(3, 2, V_total, 1.0);
  CHECK(r2 / r1 == doctest::Approx(1.0 / 16.0).epsilon(0.02));

  CHECK_THROWS_AS(annulus_threshold(3, 3, V_total, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(annulus_threshold(3, 2, V_total, 0.0), std::invalid_argument);
}

TEST_CASE("the bounds report assembles curves, crossing and regime") {
  double V = 10.0 * M_PI * M_PI;
  std::vector<double> grid = oracle::linspace(0.5, 8.0, 76);
  BoundsReport rep = make_bounds_report(3, 2, V, 1.0, grid);
  CHECK(rep.n == 3);
  CHECK(rep.l == 2);
  CHECK(rep.omega == doctest::Approx(M_PI * M_PI / 2.0).epsilon(1e-14));
  CHECK(rep.regime == "disk");
  CHECK_FALSE(rep.crossing_below_one);
  REQUIRE(rep.upper.size() == grid.size());
  REQUIRE(rep.lower.size() == grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    CHECK(rep.upper[i] == doctest::Approx(upper_bound_curve(grid[i], 3, 2, V)).epsilon(1e-14));
    CHECK(rep.lower[i] == doctest::Approx(lower_bound_curve(grid[i], 3, 1.0)).epsilon(1e-14));
  }
  CHECK(rep.R_star == doctest::Approx(nonexistence_threshold(3, 2, V, 1.0)).epsilon(1e-12));
  for (size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < rep.R_star - 1e-3) CHECK(rep.lower[i] < rep.upper[i]);
    if (grid[i] > rep.R_star + 1e-3) CHECK(rep.lower[i] > rep.upper[i]);
  }

  BoundsReport degen = make_bounds_report(3, 2, 0.0, 1.0, grid, "degenerate");
  CHECK(degen.regime == "degenerate");
  CHECK(degen.R_star == 0.0);
  CHECK(degen.upper.size() == grid.size());
  // zero data volume forces the degenerate regime even when unlabeled
  CHECK(make_bounds_report(3, 2, 0.0, 1.0, grid).regime == "degenerate");
}

TEST_CASE("certification joins a measured fixture to the curves") {
  Mesh ball = ball_mesh(4, 1.0, 2, 2);
  GraphFunction F = radial_hopf(ball, 0.4);
  std::vector<double> grid = oracle::linspace(0.5, 8.0, 16);
  BoundsReport rep = make_bounds_report(3, 2, 10.0 * M_PI * M_PI, 1.0, grid);

  CertBundle cert = certify(F, rep, 0.4);
  CHECK(cert.measured_mass == doctest::Approx(graph_mass(F)).epsilon(1e-14));
  CHECK(cert.min_norm <= 1e-12);  // the zero at the center is the witness
  CHECK(cert.R == 0.4);
  CHECK_FALSE(cert.degenerate);
  CHECK(cert.upper_curve == doctest::Approx(upper_bound_curve(0.4, 3, 2, rep.V_eta)).epsilon(1e-14));
  CHECK(cert.lower_curve == doctest::Approx(lower_bound_curve(0.4, 3, 1.0)).epsilon(1e-14));
  CHECK(cert.mass_within_upper == (cert.measured_mass <= cert.upper_quadrature));

  // recompute the quadrature bound by hand: max lifted boundary position
  // times lifted boundary area over the domain dimension
  double max_pos = 0.0, area = 0.0;
  for (int i = 0; i < ball.n_vertices(); ++i)
    if (ball.vertex_on_boundary[i])
      max_pos = std::max(max_pos, std::sqrt(ball.vertices.row(i).squaredNorm() +
                                            F.values.row(i).squaredNorm()));
  for (int b = 0; b < ball.n_boundary_facets(); ++b) {
    MatrixXd dom(4, 4), val(4, 3);
    for (int j = 0; j < 4; ++j) {
      dom.row(j) = ball.vertices.row(ball.boundary_facets(b, j));
      val.row(j) = F.values.row(ball.boundary_facets(b, j));
    }
    area += lifted_volume(dom, val);
  }
  CHECK(cert.upper_quadrature == doctest::Approx(max_pos * area / 4.0).epsilon(1e-12));
}

TEST_CASE("the flat fixture stays under its quadrature bound exactly") {
  Mesh ball = ball_mesh(4, 1.0, 2, 2);
  GraphFunction F = zero_graph(ball, 3);
  std::vector<double> grid = {0.5, 1.0};
  BoundsReport degen = make_bounds_report(3, 2, 0.0, 1.0, grid, "degenerate");
  CertBundle cert = certify(F, degen, 0.0);
  CHECK(cert.degenerate);
  CHECK(cert.measured_mass == doctest::Approx(mesh_volume(ball)).epsilon(1e-12));
  // boundary facets sit inside the unit sphere, so the cone volume (= mass)
  // stays strictly below max position times area over dimension
  CHECK(cert.mass_within_upper);
  CHECK(cert.upper_quadrature > cert.measured_mass);
  CHECK(cert.upper_curve == 0.0);
}
