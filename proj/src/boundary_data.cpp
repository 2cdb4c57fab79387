#include "mss/boundary_data.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "mss/errors.hpp"
#include "mss/geometry.hpp"
#include "mss/sampling.hpp"

namespace mss {

VectorXd cd_conjugate(const VectorXd& a) {
  VectorXd c = -a;
  c[0] = a[0];
  return c;
}

VectorXd cd_multiply(const VectorXd& a, const VectorXd& b) {
  const auto n = a.size();
  if (b.size() != n) throw std::invalid_argument("cd_multiply: size mismatch");
  if (n == 1) return a * b[0];
  // doubling rule (p, q)(r, s) = (pr - conj(s) q, s p + q conj(r))
  VectorXd p = a.head(n / 2), q = a.tail(n / 2);
  VectorXd r = b.head(n / 2), s = b.tail(n / 2);
  VectorXd out(n);
  out.head(n / 2) = cd_multiply(p, r) - cd_multiply(cd_conjugate(s), q);
  out.tail(n / 2) = cd_multiply(s, p) + cd_multiply(q, cd_conjugate(r));
  return out;
}

VectorXd hopf_point(int sphere_dim, const VectorXd& x) {
  if (sphere_dim != 3 && sphere_dim != 7 && sphere_dim != 15)
    throw std::invalid_argument("hopf_point: sphere_dim must be 3, 7 or 15");
  if (x.size() != sphere_dim + 1)
    throw std::invalid_argument("hopf_point: input size does not match sphere_dim");
  if (std::abs(x.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("hopf_point: input must be a unit vector");
  const auto k = (sphere_dim + 1) / 2;
  VectorXd z1 = x.head(k), z2 = x.tail(k);
  VectorXd w = cd_multiply(z1, cd_conjugate(z2));
  VectorXd out(k + 1);
  out[0] = z1.squaredNorm() - z2.squaredNorm();
  out.tail(k) = 2.0 * w;
  return out;
}

BoundaryMap hopf_map(int sphere_dim) {
  if (sphere_dim != 3 && sphere_dim != 7 && sphere_dim != 15)
    throw std::invalid_argument("hopf_map: sphere_dim must be 3, 7 or 15");
  BoundaryMap f;
  f.name = "hopf" + std::to_string(sphere_dim);
  f.domain_dim = sphere_dim;
  f.target_dim = (sphere_dim + 1) / 2 + 1;
  f.image_dim = (sphere_dim + 1) / 2;
  f.image_radius = 1.0;
  f.eval = [sphere_dim](const VectorXd& x) {
    double n = x.norm();
    if (n <= 0.0) throw std::invalid_argument("hopf eval: zero input");
    return hopf_point(sphere_dim, VectorXd(x / n));
  };
  return f;
}

BoundaryMap constant_map(int domain_dim, const VectorXd& value) {
  BoundaryMap f;
  f.name = "const";
  f.domain_dim = domain_dim;
  f.target_dim = static_cast<int>(value.size());
  f.image_dim = 0;
  f.eval = [value](const VectorXd&) { return value; };
  return f;
}

BoundaryMap scale_map(const BoundaryMap& f, double R) {
  if (!std::isfinite(R)) throw std::invalid_argument("scale_map: scale must be finite");
  BoundaryMap g = f;
  auto base = f.eval;
  g.eval = [base, R](const VectorXd& x) { return VectorXd(R * base(x)); };
  g.image_radius = std::abs(R) * f.image_radius;
  g.components.clear();
  for (const auto& comp : f.components)
    g.components.push_back([comp, R](const VectorXd& x) { return VectorXd(R * comp(x)); });
  return g;
}

BoundaryMap deform_map(const BoundaryMap& f, const MatrixXd& A) {
  if (A.rows() != f.target_dim || A.cols() != f.target_dim)
    throw std::invalid_argument("deform_map: matrix size does not match the target dimension");
  BoundaryMap g = f;
  auto base = f.eval;
  g.eval = [base, A](const VectorXd& x) { return VectorXd(A * base(x)); };
  // the image stays a round sphere only under orthogonal deformations
  bool orthogonal =
      (A.transpose() * A - MatrixXd::Identity(A.rows(), A.cols())).cwiseAbs().maxCoeff() < 1e-12;
  if (!orthogonal) g.image_radius = 0.0;
  g.components.clear();
  for (const auto& comp : f.components)
    g.components.push_back([comp, A](const VectorXd& x) { return VectorXd(A * comp(x)); });
  return g;
}

namespace {

// orthonormal basis of the tangent space of S^n at a unit point
MatrixXd sphere_tangent_frame(const VectorXd& x) {
  Eigen::HouseholderQR<MatrixXd> qr(x);
  MatrixXd Q = qr.householderQ();
  return Q.rightCols(x.size() - 1);
}

MatrixXd fd_differential(const std::function<VectorXd(const VectorXd&)>& eval, const VectorXd& x,
                         const MatrixXd& T) {
  const double h = 1e-5;
  MatrixXd J(eval(x).size(), T.cols());
  for (int j = 0; j < T.cols(); ++j)
    J.col(j) = (eval(x + h * T.col(j)) - eval(x - h * T.col(j))) / (2.0 * h);
  return J;
}

}  // namespace

double verify_isometry(const MatrixXd& A, const BoundaryMap& f, int samples) {
  if (A.rows() != f.target_dim || A.cols() != f.target_dim)
    throw std::invalid_argument("verify_isometry: matrix size does not match the target dimension");
  if (samples < 1) throw std::invalid_argument("verify_isometry: samples must be positive");
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    VectorXd x = halton_sphere_point(s, f.domain_dim + 1);
    MatrixXd T = sphere_tangent_frame(x);
    VectorXd eta = f.eval(x);
    MatrixXd J = fd_differential(f.eval, x, T);
    MatrixXd AJ = A * J;
    VectorXd Aeta = A * eta;
    worst = std::max(worst, std::abs(Aeta.norm() - eta.norm()));
    for (int j = 0; j < J.cols(); ++j) {
      worst = std::max(worst, std::abs(Aeta.dot(AJ.col(j))));
      for (int k = 0; k < J.cols(); ++k)
        worst = std::max(worst, std::abs(AJ.col(j).dot(AJ.col(k)) - J.col(j).dot(J.col(k))));
    }
  }
  return worst;
}

double graph_volume(const BoundaryMap& f, const Mesh& unit_sphere, double domain_radius) {
  if (unit_sphere.kind != "sphere")
    throw std::invalid_argument("graph_volume: expected a sphere mesh");
  if (unit_sphere.top_dim != f.domain_dim)
    throw std::invalid_argument("graph_volume: sphere dimension does not match the map domain");
  if (domain_radius <= 0.0) throw std::invalid_argument("graph_volume: radius must be positive");
  const int d = unit_sphere.top_dim;
  double total = 0.0;
  MatrixXd X(d + 1, unit_sphere.ambient_dim), Y(d + 1, f.target_dim);
  for (int c = 0; c < unit_sphere.n_cells(); ++c) {
    for (int j = 0; j <= d; ++j) {
      X.row(j) = domain_radius * unit_sphere.vertices.row(unit_sphere.cells(c, j));
      Y.row(j) = f.eval(X.row(j).transpose()).transpose();
    }
    total += lifted_volume(X, Y);
  }
  return total;
}

namespace {

// largest principal curvature of the sampled image, by quadric fits over
// nearest neighbors in PCA tangent coordinates
double max_curvature_estimate(const std::vector<VectorXd>& cloud, int l,
                              std::vector<MatrixXd>* normals_out) {
  const int S = static_cast<int>(cloud.size());
  const int m1 = static_cast<int>(cloud[0].size());
  const int quad_terms = l * (l + 1) / 2;
  const int K = std::max(3 * (l + quad_terms) + 6, 18);
  if (S < K + 1) throw std::invalid_argument("reach_estimate: too few samples for the quadric fit");

  double kappa = 0.0;
  std::vector<std::pair<double, int>> dist(S);
  if (normals_out) normals_out->assign(S, MatrixXd());
  for (int i = 0; i < S; ++i) {
    for (int j = 0; j < S; ++j) dist[j] = {(cloud[j] - cloud[i]).squaredNorm(), j};
    std::partial_sort(dist.begin(), dist.begin() + K + 1, dist.end());

    MatrixXd offsets(K, m1);
    for (int k = 0; k < K; ++k)
      offsets.row(k) = (cloud[dist[k + 1].second] - cloud[i]).transpose();  // skip self
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(offsets.transpose() * offsets);
    MatrixXd T = eig.eigenvectors().rightCols(l);        // tangent estimate
    MatrixXd N = eig.eigenvectors().leftCols(m1 - l);    // normal estimate
    if (normals_out) (*normals_out)[i] = N;

    // fit h = b.u + sum_{a<=b} c_ab u_a u_b in each normal direction; the
    // linear part absorbs the tangent-plane tilt
    MatrixXd design(K, l + quad_terms);
    for (int k = 0; k < K; ++k) {
      VectorXd u = T.transpose() * offsets.row(k).transpose();
      design.block(k, 0, 1, l) = u.transpose();
      int col = l;
      for (int a = 0; a < l; ++a)
        for (int b = a; b < l; ++b) design(k, col++) = u[a] * u[b];
    }
    MatrixXd rhs = offsets * N;
    MatrixXd coef = design.colPivHouseholderQr().solve(rhs);
    for (int nd = 0; nd < m1 - l; ++nd) {
      MatrixXd H(l, l);
      int col = l;
      for (int a = 0; a < l; ++a)
        for (int b = a; b < l; ++b) {
          double c = coef(col++, nd);
          H(a, b) = H(b, a) = (a == b) ? 2.0 * c : c;
        }
      Eigen::SelfAdjointEigenSolver<MatrixXd> he(H);
      kappa = std::max(kappa, he.eigenvalues().cwiseAbs().maxCoeff());
    }
  }
  return kappa;
}

}  // namespace

double reach_estimate(const BoundaryMap& f, int samples) {
  if (samples < 100) throw std::invalid_argument("reach_estimate: need at least 100 samples");
  if (f.sphere_valued()) return f.image_radius;  // round images are exact
  if (f.image_dim < 1)
    throw std::invalid_argument("reach_estimate: image dimension must be at least 1");

  std::vector<VectorXd> cloud(samples);
  for (int s = 0; s < samples; ++s) cloud[s] = f.eval(halton_sphere_point(s, f.domain_dim + 1));

  std::vector<MatrixXd> normals;
  double kappa = max_curvature_estimate(cloud, f.image_dim, &normals);
  double focal = kappa > 1e-12 ? 1.0 / kappa : std::numeric_limits<double>::infinity();

  // self-approach: pairs that are far along the sheet (graph geodesic over a
  // nearest-neighbor graph, infinite across disconnected pieces) yet
  // extrinsically close; curvature arcs have geodesic close to chord and are
  // left to the focal bound
  const int K = 10;
  std::vector<std::vector<std::pair<int, double>>> adj(samples);
  std::vector<std::pair<double, int>> dist(samples);
  for (int i = 0; i < samples; ++i) {
    for (int j = 0; j < samples; ++j) dist[j] = {(cloud[j] - cloud[i]).squaredNorm(), j};
    std::partial_sort(dist.begin(), dist.begin() + K + 1, dist.end());
    for (int k = 1; k <= K; ++k)
      adj[i].push_back({dist[k].second, std::sqrt(dist[k].first)});
  }
  double diam = 0.0;
  for (int i = 1; i < samples; ++i) diam = std::max(diam, (cloud[i] - cloud[0]).norm());
  double global = std::numeric_limits<double>::infinity();
  const int stride = std::max(samples / 64, 1);
  std::vector<double> geo(samples);
  for (int src = 0; src < samples; src += stride) {
    std::fill(geo.begin(), geo.end(), std::numeric_limits<double>::infinity());
    geo[src] = 0.0;
    std::priority_queue<std::pair<double, int>, std::vector<std::pair<double, int>>,
                        std::greater<>> pq;
    pq.push({0.0, src});
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > geo[u]) continue;
      for (auto [v, w] : adj[u])
        if (geo[u] + w < geo[v]) {
          geo[v] = geo[u] + w;
          pq.push({geo[v], v});
        }
    }
    for (int t = 0; t < samples; ++t) {
      double extr = (cloud[t] - cloud[src]).norm();
      if (extr < 1e-12 || extr >= 0.25 * diam) continue;
      if (geo[t] >= 3.0 * extr) global = std::min(global, 0.5 * extr);
    }
  }
  return std::min(focal, global);
}

BoundaryMap annulus_map(const BoundaryMap& inner, const BoundaryMap& outer) {
  if (inner.domain_dim != outer.domain_dim)
    throw std::invalid_argument("annulus_map: component domain dimensions differ");
  if (inner.target_dim != outer.target_dim)
    throw std::invalid_argument("annulus_map: component target dimensions differ");
  BoundaryMap g;
  g.name = "annulus:" + inner.name + "+" + outer.name;
  g.domain_dim = inner.domain_dim;
  g.target_dim = inner.target_dim;
  g.image_dim = std::max(inner.image_dim, outer.image_dim);
  g.image_radius = 0.0;
  g.eval = inner.eval;
  g.components = {inner.eval, outer.eval};
  return g;
}

double image_distance(const BoundaryMap& f1, const BoundaryMap& f2, int samples) {
  if (samples < 1) throw std::invalid_argument("image_distance: samples must be positive");
  // concentric round spheres have a closed-form separation
  if (f1.sphere_valued() && f2.sphere_valued() && f1.image_dim == f2.image_dim &&
      f1.target_dim == f2.target_dim)
    return std::abs(f1.image_radius - f2.image_radius);

  std::vector<VectorXd> c1(samples), c2(samples);
  for (int s = 0; s < samples; ++s) {
    c1[s] = f1.eval(halton_sphere_point(s, f1.domain_dim + 1));
    c2[s] = f2.eval(halton_sphere_point(s, f2.domain_dim + 1));
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& a : c1)
    for (const auto& b : c2) best = std::min(best, (a - b).norm());
  return best;
}

BoundaryMap torus_data(int n) {
  if (n < 2) throw std::invalid_argument("torus_data: n must be at least 2");
  BoundaryMap f;
  f.name = "torus";
  f.domain_dim = n;
  f.target_dim = n;
  f.image_dim = n - 1;
  f.image_radius = 0.5;
  f.eval = [](const VectorXd& p) { return torus_fiber_point(p, 1.0); };
  return f;
}

BoundaryMap make_map(const std::string& id) {
  if (id == "hopf3") return hopf_map(3);
  if (id == "hopf7") return hopf_map(7);
  if (id == "hopf15") return hopf_map(15);
  if (id == "torus") return torus_data(3);
  if (id == "annulus:hopf12") return annulus_map(hopf_map(3), scale_map(hopf_map(3), 2.0));
  throw std::invalid_argument("make_map: unknown map id '" + id + "'");
}

}  // namespace mss
