#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "mss/errors.hpp"
#include "mss/geometry.hpp"
#include "mss/mesh.hpp"
#include "oracles.hpp"

using namespace mss;

namespace {

// mass of the graph of z -> z^2 over the unit disk by radial quadrature:
// the area element is (1 + 4 r^2) r dr dtheta, and Simpson is exact for the
// cubic integrand
double zsquare_mass_oracle() {
  const int n = 64;
  double h = 1.0 / n, sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double a = i * h, b = a + h, mid = a + 0.5 * h;
    auto f = [](double r) { return (1.0 + 4.0 * r * r) * r; };
    sum += (h / 6.0) * (f(a) + 4.0 * f(mid) + f(b));
  }
  return 2.0 * M_PI * sum;
}

// density of the same graph in ambient balls about the origin: points at
// parameter radius r sit at lifted distance sqrt(r^2 + r^4), so with t = r^2
// solving t + t^2 = d^2 the enclosed mass is pi (t + 2 t^2)
double zsquare_theta_oracle(double d) {
  double t = 0.5 * (std::sqrt(1.0 + 4.0 * d * d) - 1.0);
  return (1.0 + 2.0 * t) / (1.0 + t);
}

GraphFunction zsquare_graph(const Mesh& m) {
  return sample_graph(m, 2, [](const VectorXd& x) { return oracle::zsquare(x); });
}

// orthonormal basis of the tangent space of the unit sphere at x
MatrixXd tangent_frame(const VectorXd& x) {
  Eigen::HouseholderQR<MatrixXd> qr(x);
  MatrixXd Q = qr.householderQ();
  return Q.rightCols(x.size() - 1);
}

// central finite differences of the radially extended Hopf map, restricted to
// the tangent frame; written against the longhand formula, not the library one
MatrixXd hopf3_tangent_jacobian(const VectorXd& x, const MatrixXd& T) {
  const double h = 1e-5;
  MatrixXd J(3, T.cols());
  for (int j = 0; j < T.cols(); ++j) {
    VectorXd xp = x + h * T.col(j), xm = x - h * T.col(j);
    J.col(j) = (oracle::hopf3(xp / xp.norm()) - oracle::hopf3(xm / xm.norm())) / (2.0 * h);
  }
  return J;
}

}  // namespace

TEST_CASE("quadrature oracle reproduces the closed form 3 pi") {
  CHECK(std::abs(zsquare_mass_oracle() - 3.0 * M_PI) < 1e-12);
}

TEST_CASE("induced metric of a scalar slope-one graph") {
  MatrixXd J(1, 1);
  J(0, 0) = 1.0;
  MetricSample s = induced_metric(J);
  CHECK(std::abs(s.g(0, 0) - 2.0) < 1e-15);
  CHECK(std::abs(s.sqrt_g - std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(s.g_inv(0, 0) - 0.5) < 1e-15);
}

TEST_CASE("hopf graph metric has singular values 2,2,0 and volume factor 5") {
  VectorXd x(4);
  x << 0.3, -0.5, 0.7, 0.4;
  x /= x.norm();
  MatrixXd T = tangent_frame(x);
  MatrixXd J = hopf3_tangent_jacobian(x, T);
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(J.transpose() * J);
  VectorXd ev = eig.eigenvalues();  // ascending
  CHECK(std::abs(ev[0] - 0.0) < 1e-6);
  CHECK(std::abs(ev[1] - 4.0) < 1e-6);
  CHECK(std::abs(ev[2] - 4.0) < 1e-6);
  MetricSample s = induced_metric(J);
  CHECK(std::abs(s.sqrt_g - 5.0) < 1e-6);
  CHECK((s.g * s.g_inv - MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("metric volume factor never drops below one") {
  Mesh m = ball_mesh(2, 1.0, 4, 3);
  GraphFunction F = zsquare_graph(m);
  for (int c = 0; c < m.n_cells(); ++c) {
    MetricSample s = induced_metric(cell_jacobian(F, c));
    CHECK(s.sqrt_g >= 1.0 - 1e-15);
  }
}

TEST_CASE("lifted volume scales like the dimension power under dilation") {
  MatrixXd X(3, 2), Y(3, 2);
  X << 0.0, 0.0, 1.0, 0.2, 0.3, 1.1;
  Y << 0.1, -0.4, 0.7, 0.2, -0.3, 0.5;
  double v1 = lifted_volume(X, Y);
  double v2 = lifted_volume(2.0 * X, 2.0 * Y);
  CHECK(std::abs(v2 - 4.0 * v1) < 1e-14 * v1);
}

TEST_CASE("mass of the zero graph is the mesh volume") {
  Mesh m = ball_mesh(2, 1.0, 8, 4);
  GraphFunction F = zero_graph(m, 3);
  CHECK(std::abs(graph_mass(F) - mesh_volume(m)) < 1e-12);
}

TEST_CASE("constant shifts do not change the mass") {
  Mesh m = ball_mesh(2, 1.0, 4, 3);
  GraphFunction F = zsquare_graph(m);
  GraphFunction G = F;
  G.values.array() += 0.37;
  CHECK(std::abs(graph_mass(G) - graph_mass(F)) < 1e-12 * graph_mass(F));
}

TEST_CASE("doubling domain and values multiplies the mass by four") {
  Mesh m1 = ball_mesh(2, 1.0, 6, 3);
  Mesh m2 = ball_mesh(2, 2.0, 6, 3);
  GraphFunction F1 = zsquare_graph(m1);
  GraphFunction F2 = zero_graph(m2, 2);
  F2.values = 2.0 * F1.values;  // same vertex order, radii exactly doubled
  CHECK(std::abs(graph_mass(F2) - 4.0 * graph_mass(F1)) < 1e-13 * graph_mass(F2));
}

TEST_CASE("holomorphic square graph mass approaches the quadrature value") {
  Mesh m = ball_mesh(2, 1.0, 16, 4);
  double mass = graph_mass(zsquare_graph(m));
  double target = zsquare_mass_oracle();
  CHECK(mass < target);  // inscribed graph undershoots
  CHECK(std::abs(mass - target) / target < 0.02);
}

TEST_CASE("boundary integral of the flat disk equals its area exactly") {
  Mesh m = ball_mesh(2, 1.0, 8, 4);
  GraphFunction F = zero_graph(m, 2);
  double bm = boundary_mass_integral(F);
  CHECK(std::abs(bm - mesh_volume(m)) < 1e-12);
  CHECK(std::abs(bm - M_PI) / M_PI < 0.01);
}

TEST_CASE("boundary integral is exact for affine graphs") {
  MatrixXd A(2, 2);
  A << 0.4, -0.7, 1.1, 0.3;
  VectorXd b(2);
  b << 0.2, -0.5;
  for (int shells : {4, 8}) {
    Mesh m = ball_mesh(2, 1.0, shells, 3);
    GraphFunction F = sample_graph(m, 2, [&](const VectorXd& x) { return VectorXd(A * x + b); });
    double mass = graph_mass(F);
    CHECK(std::abs(boundary_mass_integral(F) - mass) < 1e-12 * mass);
  }
}

TEST_CASE("boundary integral tracks the mass for the square graph") {
  double prev_gap = 1e9;
  for (auto [shells, level] : {std::pair{16, 4}, {32, 5}}) {
    Mesh m = ball_mesh(2, 1.0, shells, level);
    GraphFunction F = zsquare_graph(m);
    double mass = graph_mass(F);
    double bm = boundary_mass_integral(F);
    double gap = std::abs(bm - mass) / mass;
    CHECK(gap < 0.02);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
}

TEST_CASE("degenerate boundary facets are reported, not averaged over") {
  Mesh m;
  m.ambient_dim = 2;
  m.top_dim = 2;
  m.kind = "ball";
  m.vertices.resize(3, 2);
  m.vertices << 0.0, 0.0, 1.0, 0.0, 1.0, 0.0;  // repeated vertex
  m.cells.resize(1, 3);
  m.cells << 0, 1, 2;
  m.boundary_facets.resize(1, 2);
  m.boundary_facets << 1, 2;
  m.boundary_facet_cell.resize(1);
  m.boundary_facet_cell << 0;
  GraphFunction F = zero_graph(m, 1);
  CHECK_THROWS_AS(boundary_mass_integral(F), numerical_error);
}

TEST_CASE("affine graphs have vanishing weak residual") {
  Mesh m = ball_mesh(2, 1.0, 4, 3);
  MatrixXd A(2, 2);
  A << 0.9, -0.2, 0.4, 1.3;
  GraphFunction F = sample_graph(m, 2, [&](const VectorXd& x) { return VectorXd(A * x); });
  ResidualReport r = msys_residual(F);
  CHECK(r.r_domain < 1e-12);
  CHECK(r.r_range < 1e-12);
  CHECK(r.rms_domain < 1e-12);
  CHECK(r.rms_range < 1e-12);
}

TEST_CASE("square graph residual decays by at least 1.8x per refinement") {
  ResidualReport coarse, fine;
  {
    Mesh m = ball_mesh(2, 1.0, 16, 4);
    coarse = msys_residual(zsquare_graph(m));
  }
  {
    Mesh m = ball_mesh(2, 1.0, 32, 5);
    fine = msys_residual(zsquare_graph(m));
  }
  CHECK(coarse.r_domain / fine.r_domain >= 1.8);
  CHECK(coarse.r_range / fine.r_range >= 1.8);
  CHECK(coarse.rms_range / fine.rms_range >= 1.8);
}

TEST_CASE("a cubic graph keeps a residual bounded away from zero") {
  double prev = 0.0;
  for (auto [shells, level] : {std::pair{16, 4}, {32, 5}}) {
    Mesh m = ball_mesh(2, 1.0, shells, level);
    GraphFunction F = sample_graph(m, 2, [](const VectorXd& x) {
      VectorXd y(2);
      y << x[0] * x[0] * x[0], 0.0;
      return y;
    });
    ResidualReport r = msys_residual(F);
    CHECK(r.r_range > 0.05);
    prev = r.r_range;
  }
  CHECK(prev > 0.05);
}

TEST_CASE("point to simplex distance handles faces, edges and interior") {
  // in-plane barycenter of a triangle
  MatrixXd T(3, 2);
  T << 0.0, 0.0, 1.0, 0.0, 0.0, 1.0;
  VectorXd p(2);
  p << 1.0 / 3.0, 1.0 / 3.0;
  CHECK(point_simplex_distance(p, T) < 1e-12);

  // straight above an interior point: orthogonal height
  MatrixXd T3(3, 3);
  T3 << 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0;
  VectorXd q(3);
  q << 0.2, 0.3, 0.7;
  CHECK(std::abs(point_simplex_distance(q, T3) - 0.7) < 1e-12);

  // beyond a vertex of a segment
  MatrixXd S(2, 2);
  S << 0.0, 0.0, 1.0, 0.0;
  VectorXd r(2);
  r << 2.0, 3.0;
  CHECK(std::abs(point_simplex_distance(r, S) - std::sqrt(10.0)) < 1e-12);
}

TEST_CASE("distance from the center to disk boundary facets is the apothem") {
  Mesh m = ball_mesh(2, 1.0, 8, 4);
  int segs = m.n_boundary_facets();
  double apothem = std::cos(M_PI / segs);
  double best = 1e9;
  for (int b = 0; b < m.n_boundary_facets(); ++b) {
    MatrixXd rows(2, 2);
    rows.row(0) = m.vertices.row(m.boundary_facets(b, 0));
    rows.row(1) = m.vertices.row(m.boundary_facets(b, 1));
    best = std::min(best, point_simplex_distance(VectorXd::Zero(2), rows));
  }
  CHECK(std::abs(best - apothem) < 1e-12);
}

TEST_CASE("graph evaluation interpolates vertices and cell barycenters") {
  Mesh m = ball_mesh(2, 1.0, 4, 3);
  GraphFunction F = zsquare_graph(m);
  VectorXd at_vertex = evaluate_graph(F, m.vertices.row(17).transpose());
  CHECK((at_vertex - F.at(17)).norm() < 1e-13);

  VectorXd bary = (m.vertices.row(m.cells(5, 0)) + m.vertices.row(m.cells(5, 1)) +
                   m.vertices.row(m.cells(5, 2)))
                      .transpose() / 3.0;
  VectorXd want = (F.at(m.cells(5, 0)) + F.at(m.cells(5, 1)) + F.at(m.cells(5, 2))) / 3.0;
  CHECK((evaluate_graph(F, bary) - want).norm() < 1e-13);

  VectorXd outside(2);
  outside << 2.0, 0.0;
  CHECK_THROWS_AS(evaluate_graph(F, outside), std::invalid_argument);
}

TEST_CASE("flat graph density is one at every radius") {
  Mesh m = ball_mesh(2, 1.0, 16, 4);
  GraphFunction F = zero_graph(m, 1);
  VectorXd x0(2);
  x0 << 0.3, -0.2;
  DensityProfile prof = density_profile(F, x0, {0.05, 0.1, 0.2, 0.4, 0.6}, 1024);
  for (double th : prof.theta) CHECK(std::abs(th - 1.0) < 0.02);
  for (size_t k = 1; k < prof.mass_in_ball.size(); ++k)
    CHECK(prof.mass_in_ball[k] >= prof.mass_in_ball[k - 1]);  // nested balls, shared samples
}

TEST_CASE("square graph density rises from one and matches the closed form") {
  Mesh m = ball_mesh(2, 1.0, 16, 4);
  GraphFunction F = zsquare_graph(m);
  std::vector<double> radii = {0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
  DensityProfile prof = density_profile(F, VectorXd::Zero(2), radii, 1024);
  CHECK(prof.theta.front() > 0.98);
  CHECK(prof.theta.front() < 1.05);
  for (size_t k = 1; k < prof.theta.size(); ++k)
    CHECK(prof.theta[k] >= prof.theta[k - 1] - 0.02);
  for (size_t k = 0; k < radii.size(); ++k) {
    double want = zsquare_theta_oracle(radii[k]);
    CHECK(std::abs(prof.theta[k] - want) / want < 0.02);
  }
}

TEST_CASE("density refuses balls that reach past the boundary") {
  Mesh m = ball_mesh(2, 1.0, 8, 3);
  GraphFunction F = zero_graph(m, 1);
  VectorXd x0(2);
  x0 << 0.9, 0.0;
  CHECK_THROWS_AS(density_profile(F, x0, {0.5}, 64), std::invalid_argument);
  CHECK_THROWS_AS(density_profile(F, VectorXd::Zero(2), {0.2, 0.1}, 64), std::invalid_argument);
}

TEST_CASE("lipschitz estimate reads off the largest slope") {
  Mesh m = ball_mesh(2, 1.0, 4, 3);
  CHECK(lipschitz_estimate(zero_graph(m, 2)) < 1e-15);

  MatrixXd A(2, 2);
  A << 0.0, 1.7, -1.7, 0.0;  // 1.7 times a rotation
  GraphFunction F = sample_graph(m, 2, [&](const VectorXd& x) { return VectorXd(A * x); });
  CHECK(std::abs(lipschitz_estimate(F) - 1.7) < 1e-12);

  // slope of z -> z^2 is 2|z|, largest at the rim; the cell-wise secant fit
  // may overshoot the smooth slope a little
  GraphFunction G = zsquare_graph(m);
  double lip = lipschitz_estimate(G);
  CHECK(lip > 1.8);
  CHECK(lip < 2.1);
}
