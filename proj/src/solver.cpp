#include "mss/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "mss/errors.hpp"
#include "mss/topology.hpp"

namespace mss {

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// per-cell quantities that stay fixed while only the graph values move
struct CellWork {
  Eigen::PartialPivLU<MatrixXd> lu;  // of the edge matrix E
  MatrixXd hat;                      // row i = grad of hat function i+1, rows of E^{-T}
  double volume = 0.0;
};

std::vector<CellWork> factor_cells(const Mesh& m) {
  const int k = m.top_dim;
  std::vector<CellWork> work(m.n_cells());
  for (int c = 0; c < m.n_cells(); ++c) {
    MatrixXd E(k, k);
    for (int j = 0; j < k; ++j)
      E.row(j) = m.vertices.row(m.cells(c, j + 1)) - m.vertices.row(m.cells(c, 0));
    work[c].lu = Eigen::PartialPivLU<MatrixXd>(E);
    work[c].hat = work[c].lu.solve(MatrixXd::Identity(k, k)).transpose();
    work[c].volume = std::abs(work[c].lu.determinant()) / factorial(k);
  }
  return work;
}

double energy_only(const Mesh& m, const MatrixXd& values, const std::vector<CellWork>& work) {
  const int k = m.top_dim;
  double total = 0.0;
  MatrixXd Y(k, values.cols());
  for (int c = 0; c < m.n_cells(); ++c) {
    for (int j = 0; j < k; ++j)
      Y.row(j) = values.row(m.cells(c, j + 1)) - values.row(m.cells(c, 0));
    MatrixXd J = work[c].lu.solve(Y).transpose();
    double det = (MatrixXd::Identity(k, k) + J.transpose() * J).determinant();
    total += work[c].volume * std::sqrt(std::max(det, 0.0));
  }
  return total;
}

double energy_and_gradient(const Mesh& m, const MatrixXd& values,
                           const std::vector<CellWork>& work,
                           const std::vector<char>& free_vertex, MatrixXd& grad) {
  const int k = m.top_dim;
  double energy = 0.0;
  grad.setZero(m.n_vertices(), values.cols());
  MatrixXd Y(k, values.cols());
  for (int c = 0; c < m.n_cells(); ++c) {
    for (int j = 0; j < k; ++j)
      Y.row(j) = values.row(m.cells(c, j + 1)) - values.row(m.cells(c, 0));
    MatrixXd J = work[c].lu.solve(Y).transpose();  // target_dim x k
    MatrixXd M = MatrixXd::Identity(k, k) + J.transpose() * J;
    double sqrt_det = std::sqrt(std::max(M.determinant(), 0.0));
    energy += work[c].volume * sqrt_det;

    // d mass / d J = volume * sqrt(det M) * J M^{-1}; chain through the hat
    // function gradients, with vertex 0 carrying minus their sum
    MatrixXd S =
        work[c].volume * sqrt_det * M.ldlt().solve(J.transpose()).transpose();  // target_dim x k
    for (int j = 0; j < k; ++j) {
      int vj = m.cells(c, j + 1);
      if (free_vertex[vj]) grad.row(vj) += (S * work[c].hat.row(j).transpose()).transpose();
    }
    int v0 = m.cells(c, 0);
    if (free_vertex[v0]) grad.row(v0) -= (S * work[c].hat.colwise().sum().transpose()).transpose();
  }
  return energy;
}

}  // namespace

std::pair<double, MatrixXd> area_energy_and_gradient(const GraphFunction& F,
                                                     const std::vector<char>& free_vertex) {
  const Mesh& m = *F.mesh;
  if (m.top_dim != m.ambient_dim)
    throw std::invalid_argument("area_energy_and_gradient: solid meshes only");
  if (static_cast<int>(free_vertex.size()) != m.n_vertices())
    throw std::invalid_argument("area_energy_and_gradient: one free flag per vertex");
  std::vector<CellWork> work = factor_cells(m);
  MatrixXd grad;
  double energy = energy_and_gradient(m, F.values, work, free_vertex, grad);
  return {energy, grad};
}

namespace {

std::vector<char> interior_mask(const Mesh& m) {
  std::vector<char> free_vertex(m.n_vertices());
  for (int i = 0; i < m.n_vertices(); ++i) free_vertex[i] = !m.vertex_on_boundary[i];
  return free_vertex;
}

// inverse lumped cell volume per vertex, the discrete L2 preconditioner; the
// shelled meshes concentrate tiny cells near the center and plain descent
// crawls there
VectorXd lumped_inverse(const Mesh& m, const std::vector<CellWork>& work) {
  VectorXd lumped = VectorXd::Zero(m.n_vertices());
  for (int c = 0; c < m.n_cells(); ++c)
    for (int j = 0; j <= m.top_dim; ++j) lumped(m.cells(c, j)) += work[c].volume;
  return (lumped.array() > 0).select(lumped.array().inverse(), 1.0);
}

// boundary values R*data per component: annulus data evaluates each boundary
// component with its own map, single-component data uses the plain evaluator
MatrixXd pinned_values(const Mesh& m, const BoundaryMap& data, double R) {
  MatrixXd values = MatrixXd::Zero(m.n_vertices(), data.target_dim);
  std::vector<int> component(m.n_vertices(), -1);
  for (int b = 0; b < m.n_boundary_facets(); ++b)
    for (int j = 0; j < m.top_dim; ++j)
      component[m.boundary_facets(b, j)] = m.boundary_component[b];
  for (int i = 0; i < m.n_vertices(); ++i) {
    if (!m.vertex_on_boundary[i]) continue;
    VectorXd x = m.vertices.row(i).transpose();
    VectorXd y;
    if (data.components.size() == 2 && component[i] >= 0)
      y = data.components[std::min(component[i], 1)](x);
    else
      y = data.eval(x);
    if (y.size() != data.target_dim)
      throw std::invalid_argument("minimize: boundary data dimension mismatch");
    values.row(i) = R * y.transpose();
  }
  return values;
}

}  // namespace

MinimizeOutput minimize(const Mesh& mesh, const BoundaryMap& data, double R, Init init,
                        const SolverOptions& opts, const GraphFunction* warm) {
  if (mesh.top_dim != mesh.ambient_dim || mesh.n_boundary_facets() == 0)
    throw std::invalid_argument("minimize: need a solid mesh with boundary");
  auto t0 = std::chrono::steady_clock::now();

  MinimizeOutput out;
  out.F.mesh = &mesh;
  out.F.target_dim = data.target_dim;
  out.F.values = pinned_values(mesh, data, R);

  if (init == Init::radial) {
    for (int i = 0; i < mesh.n_vertices(); ++i) {
      if (mesh.vertex_on_boundary[i]) continue;
      VectorXd x = mesh.vertices.row(i).transpose();
      double r = x.norm();
      if (r > 1e-12) out.F.values.row(i) = R * r * data.eval(x / r).transpose();
    }
  } else if (init == Init::warm_start) {
    if (!warm || warm->values.rows() != mesh.n_vertices() ||
        warm->values.cols() != data.target_dim)
      throw std::invalid_argument("minimize: warm start shape mismatch");
    for (int i = 0; i < mesh.n_vertices(); ++i)
      if (!mesh.vertex_on_boundary[i]) out.F.values.row(i) = warm->values.row(i);
  }

  std::vector<char> free_vertex = interior_mask(mesh);
  std::vector<CellWork> work = factor_cells(mesh);
  VectorXd inv_lump = lumped_inverse(mesh, work);
  auto inner = [](const MatrixXd& a, const MatrixXd& b) { return (a.array() * b.array()).sum(); };
  auto precondition = [&](const MatrixXd& g) { return inv_lump.asDiagonal() * g; };

  MatrixXd grad;
  double energy = energy_and_gradient(mesh, out.F.values, work, free_vertex, grad);
  MatrixXd pre = precondition(grad);
  MatrixXd direction = -pre;
  double step = 1.0;
  int it = 0;
  bool stalled = false;

  for (; it < opts.max_iterations; ++it) {
    double gnorm = grad.norm();
    if (opts.record_trace) out.trace.push_back({static_cast<double>(it), energy, gnorm});
    if (gnorm <= opts.grad_tol * (1.0 + energy)) break;

    double slope = inner(grad, direction);
    if (slope >= 0.0) {  // not a descent direction: restart on steepest descent
      direction = -pre;
      slope = inner(grad, direction);
    }

    // backtracking Armijo search; non-finite trial energies are rejected like
    // any failed decrease
    double t = std::min(2.0 * step, 1e6);
    bool accepted = false;
    for (int half = 0; half < 60; ++half) {
      double trial = energy_only(mesh, out.F.values + t * direction, work);
      if (std::isfinite(trial) && trial <= energy + 1e-4 * t * slope) {
        out.F.values += t * direction;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      stalled = true;
      break;
    }
    step = t;

    MatrixXd grad_old = grad;
    MatrixXd pre_old = pre;
    energy = energy_and_gradient(mesh, out.F.values, work, free_vertex, grad);
    pre = precondition(grad);
    double beta = std::max(
        0.0, inner(pre, grad - grad_old) / std::max(inner(grad_old, pre_old), 1e-300));
    direction = -pre + beta * direction;
  }

  out.result.iterations = it;
  out.result.final_gradient_norm = grad.norm();
  out.result.mass = energy;
  out.result.converged = !stalled &&
                         out.result.final_gradient_norm <= opts.grad_tol * (1.0 + energy) &&
                         std::isfinite(energy);
  out.result.lipschitz = lipschitz_estimate(out.F);
  out.result.blown_up = out.result.lipschitz > opts.blowup_threshold;
  out.result.min_norm_interior = min_norm_locus(out.F, true).first;
  out.result.R = R;
  out.result.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

std::vector<MinimizeOutput> continuation(const Mesh& mesh, const BoundaryMap& data,
                                         const std::vector<double>& R_schedule,
                                         const SolverOptions& opts) {
  for (size_t i = 1; i < R_schedule.size(); ++i)
    if (R_schedule[i] <= R_schedule[i - 1])
      throw std::invalid_argument("continuation: schedule must be increasing");
  std::vector<MinimizeOutput> outputs;
  for (size_t i = 0; i < R_schedule.size(); ++i) {
    if (outputs.empty())
      outputs.push_back(minimize(mesh, data, R_schedule[i], Init::radial, opts));
    else
      outputs.push_back(minimize(mesh, data, R_schedule[i], Init::warm_start, opts,
                                 &outputs.back().F));
  }
  return outputs;
}

GraphFunction cone_candidate(double theta, const BoundaryMap& eta, const Mesh& mesh) {
  if (!(theta > 0.0 && theta < M_PI / 2.0))
    throw std::invalid_argument("cone_candidate: theta must lie in (0, pi/2)");
  if (!eta.sphere_valued())
    throw std::invalid_argument("cone_candidate: sphere-valued data required");
  double slope = std::tan(theta);
  return sample_graph(mesh, eta.target_dim, [&eta, slope](const VectorXd& x) {
    double r = x.norm();
    if (r < 1e-12) return VectorXd(VectorXd::Zero(eta.target_dim));
    return VectorXd(slope * r * eta.eval(x / r));
  });
}

ConeScan cone_scan(const BoundaryMap& eta, const std::vector<double>& theta_grid,
                   const Mesh& annulus) {
  if (annulus.kind != "annulus")
    throw std::invalid_argument("cone_scan: an annulus mesh keeps the cone vertex out");
  if (theta_grid.empty()) throw std::invalid_argument("cone_scan: empty theta grid");
  for (size_t i = 0; i < theta_grid.size(); ++i) {
    if (!(theta_grid[i] > 0.0 && theta_grid[i] < M_PI / 2.0))
      throw std::invalid_argument("cone_scan: theta must lie in (0, pi/2)");
    if (i > 0 && theta_grid[i] <= theta_grid[i - 1])
      throw std::invalid_argument("cone_scan: theta grid must be strictly increasing");
  }
  ConeScan scan;
  scan.theta_grid = theta_grid;
  scan.aggregation = "rms";  // the max residual diverges on the inner vertex ring
  double best = std::numeric_limits<double>::infinity();
  for (double theta : theta_grid) {
    GraphFunction F = cone_candidate(theta, eta, annulus);
    ResidualReport rep = msys_residual(F);
    scan.residuals.push_back({rep.rms_domain, rep.rms_range});
    if (rep.rms_range < best) {
      best = rep.rms_range;
      scan.theta_star = theta;
    }
  }
  return scan;
}

}  // namespace mss
