#pragma once

#include <array>
#include <string>
#include <vector>

#include "mss/boundary_data.hpp"
#include "mss/geometry.hpp"

namespace mss {

struct SolverOptions {
  double grad_tol = 1e-8;       // stop at ||grad||_2 <= grad_tol * (1 + energy)
  int max_iterations = 20000;
  double blowup_threshold = 1e3;  // lipschitz beyond this flags blow-up
  bool record_trace = false;
};

struct SolveResult {
  bool converged = false;
  int iterations = 0;
  double final_gradient_norm = 0.0;
  double mass = 0.0;
  double lipschitz = 0.0;
  double min_norm_interior = 0.0;
  double wall_time_seconds = 0.0;
  double R = 0.0;
  bool blown_up = false;
};

enum class Init { zero, radial, warm_start };

// exact first variation of the PL graph mass; gradient rows for vertices
// outside free_vertices are zeroed. Assembly runs in fixed cell order.
std::pair<double, MatrixXd> area_energy_and_gradient(const GraphFunction& F,
                                                     const std::vector<char>& free_vertex);

struct MinimizeOutput {
  SolveResult result;
  GraphFunction F;
  std::vector<std::array<double, 3>> trace;  // iteration, energy, gradient norm
};

// area minimization with F = R*data on the boundary vertices: conjugate
// gradient (PR+ with restarts) over interior values, backtracking line search
MinimizeOutput minimize(const Mesh& mesh, const BoundaryMap& data, double R, Init init,
                        const SolverOptions& opts = {},
                        const GraphFunction* warm = nullptr);

// warm-started sweep over an increasing R schedule; failures and blow-ups are
// recorded, not thrown
std::vector<MinimizeOutput> continuation(const Mesh& mesh, const BoundaryMap& data,
                                         const std::vector<double>& R_schedule,
                                         const SolverOptions& opts = {});

struct ConeScan {
  std::vector<double> theta_grid;
  std::vector<std::pair<double, double>> residuals;  // aggregated (domain, range) per theta
  double theta_star = 0.0;
  std::string aggregation;  // "rms" (max diverges at the cone vertex ring)
};

// the candidate F(x) = tan(theta) * |x| * eta(x/|x|) sampled at mesh vertices
GraphFunction cone_candidate(double theta, const BoundaryMap& eta, const Mesh& mesh);

// residual of the cone candidate over a theta grid on an annulus mesh (the
// singular origin excluded); theta_star is the argmin of the range residual
ConeScan cone_scan(const BoundaryMap& eta, const std::vector<double>& theta_grid,
                   const Mesh& annulus);

}  // namespace mss
