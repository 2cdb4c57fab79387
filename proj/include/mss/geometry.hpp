#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mss/mesh.hpp"

namespace mss {

// piecewise-linear map from mesh vertices into R^{target_dim}; the graph
// x -> (x, F(x)) is the surface whose mass and residual get measured
struct GraphFunction {
  const Mesh* mesh = nullptr;
  int target_dim = 0;
  MatrixXd values;  // V x target_dim

  VectorXd at(int vertex) const { return values.row(vertex).transpose(); }
};

GraphFunction zero_graph(const Mesh& mesh, int target_dim);
GraphFunction sample_graph(const Mesh& mesh, int target_dim,
                           const std::function<VectorXd(const VectorXd&)>& f);

struct MetricSample {
  MatrixXd g;      // I + J^T J
  MatrixXd g_inv;
  double sqrt_g;   // sqrt(det g), >= 1
};

// jacobian is target_dim x domain_dim (column j = d/dx^j)
MetricSample induced_metric(const MatrixXd& jacobian);

// per-cell Jacobian of the PL map (target_dim x top_dim); solid meshes only
MatrixXd cell_jacobian(const GraphFunction& F, int cell);

// flat volume of the lifted simplex spanned by rows (x_i, y_i); equals
// sqrt(det(I + J^T J)) * base volume for graph simplices
double lifted_volume(const MatrixXd& domain_rows, const MatrixXd& value_rows);

double graph_mass(const GraphFunction& F);

// evaluates the mass through the first-variation identity on the boundary:
// (1/(n+1)) * sum over boundary facets of <conormal, position> * facet graph area.
// Agrees with graph_mass when F solves the system; the gap is a diagnostic.
double boundary_mass_integral(const GraphFunction& F);

struct ResidualReport {
  double r_domain = 0.0;    // max over interior vertices, domain equations
  double r_range = 0.0;     // max over interior vertices, range equations
  double rms_domain = 0.0;  // dual-volume-weighted rms of the same vertex residuals
  double rms_range = 0.0;
};

// weak residual of both equation groups against interior hat functions,
// normalized by vertex dual volume
ResidualReport msys_residual(const GraphFunction& F);

struct DensityProfile {
  VectorXd center;  // lifted point (x0, F(x0))
  std::vector<double> radii;
  std::vector<double> mass_in_ball;
  std::vector<double> theta;  // mass / (omega_{n+1} d^{n+1})
};

// mass of the graph inside ambient balls about (x0, F(x0)); cells cut by the
// sphere are subsampled with a per-cell deterministic seed
DensityProfile density_profile(const GraphFunction& F, const VectorXd& x0,
                               const std::vector<double>& radii, int samples = 64,
                               std::uint64_t seed = 2026);

// max over cells of the operator norm of the PL Jacobian
double lipschitz_estimate(const GraphFunction& F);

// exact distance from a point to the convex hull of the rows
double point_simplex_distance(const VectorXd& p, const MatrixXd& vertex_rows);

// PL evaluation at an arbitrary domain point (containing-cell scan)
VectorXd evaluate_graph(const GraphFunction& F, const VectorXd& x);

}  // namespace mss
