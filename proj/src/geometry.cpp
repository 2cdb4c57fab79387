#include "mss/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mss/errors.hpp"
#include "mss/sampling.hpp"

namespace mss {

namespace {

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

// rows of the lifted positions (x_i, F(x_i)) for the given vertex ids
MatrixXd lifted_rows(const GraphFunction& F, const int* ids, int count) {
  const Mesh& m = *F.mesh;
  MatrixXd P(count, m.ambient_dim + F.target_dim);
  for (int i = 0; i < count; ++i) {
    P.block(i, 0, 1, m.ambient_dim) = m.vertices.row(ids[i]);
    P.block(i, m.ambient_dim, 1, F.target_dim) = F.values.row(ids[i]);
  }
  return P;
}

struct CellFrame {
  MatrixXd E, Einv, J, ginv;
  double sqrt_g, vol;
};

CellFrame cell_frame(const GraphFunction& F, int cell) {
  const Mesh& m = *F.mesh;
  const int d = m.top_dim;
  CellFrame f;
  f.E.resize(d, d);
  MatrixXd D(F.target_dim, d);
  for (int i = 0; i < d; ++i) {
    f.E.col(i) = (m.vertices.row(m.cells(cell, i + 1)) - m.vertices.row(m.cells(cell, 0))).transpose();
    D.col(i) = (F.values.row(m.cells(cell, i + 1)) - F.values.row(m.cells(cell, 0))).transpose();
  }
  f.Einv = f.E.inverse();
  f.J = D * f.Einv;
  MatrixXd g = MatrixXd::Identity(d, d) + f.J.transpose() * f.J;
  f.ginv = g.inverse();
  f.sqrt_g = std::sqrt(g.determinant());
  f.vol = std::abs(f.E.determinant()) / factorial(d);
  return f;
}

}  // namespace

GraphFunction zero_graph(const Mesh& mesh, int target_dim) {
  GraphFunction F;
  F.mesh = &mesh;
  F.target_dim = target_dim;
  F.values = MatrixXd::Zero(mesh.n_vertices(), target_dim);
  return F;
}

GraphFunction sample_graph(const Mesh& mesh, int target_dim,
                           const std::function<VectorXd(const VectorXd&)>& f) {
  GraphFunction F = zero_graph(mesh, target_dim);
  for (int i = 0; i < mesh.n_vertices(); ++i)
    F.values.row(i) = f(mesh.vertices.row(i).transpose()).transpose();
  if (!F.values.allFinite()) throw numerical_error("sample_graph: non-finite vertex value");
  return F;
}

MetricSample induced_metric(const MatrixXd& jacobian) {
  if (!jacobian.allFinite()) throw numerical_error("induced_metric: non-finite jacobian");
  const int d = static_cast<int>(jacobian.cols());
  MetricSample s;
  s.g = MatrixXd::Identity(d, d) + jacobian.transpose() * jacobian;
  s.g_inv = s.g.inverse();
  s.sqrt_g = std::sqrt(s.g.determinant());
  return s;
}

MatrixXd cell_jacobian(const GraphFunction& F, int cell) {
  return cell_frame(F, cell).J;
}

double lifted_volume(const MatrixXd& domain_rows, const MatrixXd& value_rows) {
  const int k = static_cast<int>(domain_rows.rows()) - 1;
  MatrixXd E(domain_rows.cols(), k), D(value_rows.cols(), k);
  for (int i = 0; i < k; ++i) {
    E.col(i) = (domain_rows.row(i + 1) - domain_rows.row(0)).transpose();
    D.col(i) = (value_rows.row(i + 1) - value_rows.row(0)).transpose();
  }
  double g = (E.transpose() * E + D.transpose() * D).determinant();
  return std::sqrt(std::max(g, 0.0)) / factorial(k);
}

double graph_mass(const GraphFunction& F) {
  const Mesh& m = *F.mesh;
  double total = 0.0;
  MatrixXd X(m.top_dim + 1, m.ambient_dim), Y(m.top_dim + 1, F.target_dim);
  for (int c = 0; c < m.n_cells(); ++c) {
    for (int j = 0; j <= m.top_dim; ++j) {
      X.row(j) = m.vertices.row(m.cells(c, j));
      Y.row(j) = F.values.row(m.cells(c, j));
    }
    total += lifted_volume(X, Y);
  }
  return total;
}

double boundary_mass_integral(const GraphFunction& F) {
  const Mesh& m = *F.mesh;
  const int d = m.top_dim;       // n+1
  const int fd = d - 1;          // boundary facet dimension
  if (m.n_boundary_facets() == 0)
    throw std::invalid_argument("boundary_mass_integral: mesh has no boundary");

  double total = 0.0;
  for (int b = 0; b < m.n_boundary_facets(); ++b) {
    std::vector<int> fv(d);
    for (int j = 0; j < d; ++j) fv[j] = m.boundary_facets(b, j);
    MatrixXd P = lifted_rows(F, fv.data(), d);  // d lifted facet vertices

    // graph-metric facet volume
    MatrixXd U(P.cols(), fd);
    for (int i = 0; i < fd; ++i) U.col(i) = (P.row(i + 1) - P.row(0)).transpose();
    double area = std::sqrt(std::max((U.transpose() * U).determinant(), 0.0)) / factorial(fd);
    if (area <= 0.0) {
      std::ostringstream os;
      os << "boundary_mass_integral: facet " << b << " has zero graph volume";
      throw numerical_error(os.str());
    }

    // conormal: inward lifted direction from the owning cell, projected out of
    // the facet tangent space, negated
    int cell = m.boundary_facet_cell[b];
    int opp = -1;
    for (int j = 0; j <= d; ++j) {
      int v = m.cells(cell, j);
      if (std::find(fv.begin(), fv.end(), v) == fv.end()) opp = v;
    }
    VectorXd lifted_opp = lifted_rows(F, &opp, 1).row(0).transpose();
    VectorXd bary = P.colwise().mean().transpose();
    VectorXd w = lifted_opp - bary;
    Eigen::HouseholderQR<MatrixXd> qr(U);
    MatrixXd Q = qr.householderQ() * MatrixXd::Identity(P.cols(), fd);
    w -= Q * (Q.transpose() * w);
    double wn = w.norm();
    if (wn <= 0.0) throw numerical_error("boundary_mass_integral: degenerate conormal");
    VectorXd nu = -w / wn;
    total += nu.dot(bary) * area;
  }
  return total / d;
}

ResidualReport msys_residual(const GraphFunction& F) {
  const Mesh& m = *F.mesh;
  const int d = m.top_dim;
  MatrixXd dom = MatrixXd::Zero(m.n_vertices(), d);
  MatrixXd rng = MatrixXd::Zero(m.n_vertices(), F.target_dim);
  VectorXd dual = VectorXd::Zero(m.n_vertices());

  for (int c = 0; c < m.n_cells(); ++c) {
    CellFrame f = cell_frame(F, c);
    // hat gradients: row 0 is minus the column sums of Einv, then Einv rows
    MatrixXd grads(d + 1, d);
    grads.row(0) = -f.Einv.colwise().sum();
    grads.block(1, 0, d, d) = f.Einv;
    double w = f.sqrt_g * f.vol;
    for (int loc = 0; loc <= d; ++loc) {
      int v = m.cells(c, loc);
      VectorXd gphi = f.ginv * grads.row(loc).transpose();
      dom.row(v) += w * gphi.transpose();
      rng.row(v) += w * (f.J * gphi).transpose();
      dual[v] += f.vol / (d + 1);
    }
  }

  ResidualReport r;
  double wsum = 0.0, sq_dom = 0.0, sq_rng = 0.0;
  for (int v = 0; v < m.n_vertices(); ++v) {
    if (m.vertex_on_boundary[v]) continue;
    double rd = dom.row(v).cwiseAbs().maxCoeff() / dual[v];
    double rr = rng.row(v).cwiseAbs().maxCoeff() / dual[v];
    r.r_domain = std::max(r.r_domain, rd);
    r.r_range = std::max(r.r_range, rr);
    wsum += dual[v];
    sq_dom += dual[v] * rd * rd;
    sq_rng += dual[v] * rr * rr;
  }
  if (wsum > 0.0) {
    r.rms_domain = std::sqrt(sq_dom / wsum);
    r.rms_range = std::sqrt(sq_rng / wsum);
  }
  return r;
}

double point_simplex_distance(const VectorXd& p, const MatrixXd& vertex_rows) {
  const int k = static_cast<int>(vertex_rows.rows());
  double best = std::numeric_limits<double>::infinity();
  // scan the faces: the nearest point has nonnegative barycentric coordinates
  // on the face whose affine hull it projects into
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    std::vector<int> idx;
    for (int i = 0; i < k; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    const int j = static_cast<int>(idx.size());
    VectorXd q0 = vertex_rows.row(idx[0]).transpose();
    if (j == 1) {
      best = std::min(best, (p - q0).norm());
      continue;
    }
    MatrixXd A(vertex_rows.cols(), j - 1);
    for (int i = 1; i < j; ++i)
      A.col(i - 1) = vertex_rows.row(idx[i]).transpose() - q0;
    VectorXd t = (A.transpose() * A).ldlt().solve(A.transpose() * (p - q0));
    double w0 = 1.0 - t.sum();
    if (w0 < -1e-12 || (t.array() < -1e-12).any()) continue;
    best = std::min(best, (p - q0 - A * t).norm());
  }
  return best;
}

VectorXd evaluate_graph(const GraphFunction& F, const VectorXd& x) {
  const Mesh& m = *F.mesh;
  const int d = m.top_dim;
  if (d != m.ambient_dim)
    throw std::invalid_argument("evaluate_graph: needs a solid domain mesh");
  for (int c = 0; c < m.n_cells(); ++c) {
    MatrixXd E(d, d);
    for (int i = 0; i < d; ++i)
      E.col(i) = (m.vertices.row(m.cells(c, i + 1)) - m.vertices.row(m.cells(c, 0))).transpose();
    VectorXd lam = E.partialPivLu().solve(x - m.vertices.row(m.cells(c, 0)).transpose());
    if ((lam.array() < -1e-12).any() || lam.sum() > 1.0 + 1e-12) continue;
    VectorXd y = (1.0 - lam.sum()) * F.values.row(m.cells(c, 0)).transpose();
    for (int i = 0; i < d; ++i) y += lam[i] * F.values.row(m.cells(c, i + 1)).transpose();
    return y;
  }
  throw std::invalid_argument("evaluate_graph: point outside the mesh");
}

DensityProfile density_profile(const GraphFunction& F, const VectorXd& x0,
                               const std::vector<double>& radii, int samples,
                               std::uint64_t seed) {
  const Mesh& m = *F.mesh;
  const int d = m.top_dim;
  if (radii.empty()) throw std::invalid_argument("density_profile: empty radius list");
  for (size_t i = 1; i < radii.size(); ++i)
    if (radii[i] <= radii[i - 1])
      throw std::invalid_argument("density_profile: radii must be strictly increasing");

  DensityProfile prof;
  VectorXd Fx0 = evaluate_graph(F, x0);
  prof.center.resize(m.ambient_dim + F.target_dim);
  prof.center << x0, Fx0;
  prof.radii = radii;

  // the profile is only meaningful for balls that stay inside the graph:
  // measure the lifted distance to the boundary facets and refuse beyond it
  double boundary_dist = std::numeric_limits<double>::infinity();
  for (int b = 0; b < m.n_boundary_facets(); ++b) {
    std::vector<int> fv(d);
    for (int j = 0; j < d; ++j) fv[j] = m.boundary_facets(b, j);
    boundary_dist =
        std::min(boundary_dist, point_simplex_distance(prof.center, lifted_rows(F, fv.data(), d)));
  }
  if (radii.back() > boundary_dist) {
    std::ostringstream os;
    os << "density_profile: radius " << radii.back() << " exceeds the distance "
       << boundary_dist << " to the graph boundary; largest valid radius is " << boundary_dist;
    throw std::invalid_argument(os.str());
  }

  prof.mass_in_ball.assign(radii.size(), 0.0);
  MatrixXd X(d + 1, m.ambient_dim), Y(d + 1, F.target_dim);
  std::vector<int> ids(d + 1);
  for (int c = 0; c < m.n_cells(); ++c) {
    for (int j = 0; j <= d; ++j) {
      ids[j] = m.cells(c, j);
      X.row(j) = m.vertices.row(ids[j]);
      Y.row(j) = F.values.row(ids[j]);
    }
    MatrixXd P = lifted_rows(F, ids.data(), d + 1);
    double cell_mass = lifted_volume(X, Y);
    double far = 0.0;
    for (int j = 0; j <= d; ++j)
      far = std::max(far, (P.row(j).transpose() - prof.center).norm());
    double near = point_simplex_distance(prof.center, P);

    // one fixed sample set per cell, shared across radii, so the per-ball
    // masses are nested exactly
    std::vector<double> sample_dist;
    for (size_t k = 0; k < radii.size(); ++k) {
      double r = radii[k];
      if (far <= r) {
        prof.mass_in_ball[k] += cell_mass;
      } else if (near <= r) {
        if (sample_dist.empty()) {
          std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(c)));
          for (int s = 0; s < samples; ++s)
            sample_dist.push_back((simplex_point(P, rng) - prof.center).norm());
        }
        int inside = 0;
        for (double sd : sample_dist)
          if (sd <= r) ++inside;
        prof.mass_in_ball[k] += cell_mass * inside / samples;
      }
    }
  }

  double omega = unit_ball_volume(d);
  for (size_t k = 0; k < radii.size(); ++k)
    prof.theta.push_back(prof.mass_in_ball[k] / (omega * std::pow(radii[k], d)));
  return prof;
}

double lipschitz_estimate(const GraphFunction& F) {
  double lip = 0.0;
  for (int c = 0; c < F.mesh->n_cells(); ++c) {
    Eigen::JacobiSVD<MatrixXd> svd(cell_frame(F, c).J);
    lip = std::max(lip, svd.singularValues()[0]);
  }
  return lip;
}

}  // namespace mss
