#include "mss/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mss/errors.hpp"

namespace mss {

namespace {

constexpr long kCellBudget = 1L << 24;  // refuse builds past ~16M top cells

void check_budget(long estimated_cells, const std::string& who) {
  if (estimated_cells > kCellBudget) {
    std::ostringstream os;
    os << who << ": estimated " << estimated_cells << " cells exceeds budget "
       << kCellBudget << "; lower the refinement level or shell count";
    throw resolution_error(os.str());
  }
}

long ipow(long b, int e) {
  long r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

// working representation while building: vertex list + simplex index lists
struct Complex {
  std::vector<VectorXd> verts;
  std::vector<std::vector<int>> simps;
};

// S^n as the boundary of the cross-polytope in R^{n+1}: vertices +-e_i
// (vertex 2i = +e_i, 2i+1 = -e_i), one facet per orthant sign pattern
Complex cross_polytope(int n) {
  const int d = n + 1;
  Complex cx;
  for (int i = 0; i < d; ++i) {
    VectorXd e = VectorXd::Zero(d);
    e[i] = 1.0;
    cx.verts.push_back(e);
    cx.verts.push_back(-e);
  }
  for (long signs = 0; signs < (1L << d); ++signs) {
    std::vector<int> s(d);
    for (int i = 0; i < d; ++i) s[i] = 2 * i + ((signs >> i) & 1);
    cx.simps.push_back(s);
  }
  return cx;
}

// one round of edge-midpoint subdivision; handles segment, triangle and
// tetrahedron cells. The tetrahedron case leaves a central octahedron which is
// split along its shortest diagonal (first of the three on ties, so the choice
// is deterministic for symmetric configurations).
void subdivide(Complex& cx) {
  std::map<std::pair<int, int>, int> edge_mid;
  auto mid = [&](int a, int b) {
    auto key = std::minmax(a, b);
    auto it = edge_mid.find(key);
    if (it != edge_mid.end()) return it->second;
    int id = static_cast<int>(cx.verts.size());
    cx.verts.push_back(0.5 * (cx.verts[a] + cx.verts[b]));
    edge_mid.emplace(key, id);
    return id;
  };

  std::vector<std::vector<int>> out;
  const int d = static_cast<int>(cx.simps[0].size());
  for (const auto& s : cx.simps) {
    if (d == 2) {
      int a = s[0], b = s[1];
      int m = mid(a, b);
      out.push_back({a, m});
      out.push_back({m, b});
    } else if (d == 3) {
      int a = s[0], b = s[1], c = s[2];
      int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
      out.push_back({a, ab, ca});
      out.push_back({b, bc, ab});
      out.push_back({c, ca, bc});
      out.push_back({ab, bc, ca});
    } else if (d == 4) {
      int a = s[0], b = s[1], c = s[2], e = s[3];
      int ab = mid(a, b), ac = mid(a, c), ae = mid(a, e);
      int bc = mid(b, c), be = mid(b, e), ce = mid(c, e);
      out.push_back({a, ab, ac, ae});
      out.push_back({b, ab, bc, be});
      out.push_back({c, ac, bc, ce});
      out.push_back({e, ae, be, ce});
      const int diag[3][2] = {{ab, ce}, {ac, be}, {ae, bc}};
      const int ring[3][4] = {{ac, ae, be, bc}, {ab, ae, ce, bc}, {ab, ac, ce, be}};
      int best = 0;
      double best_len = (cx.verts[diag[0][0]] - cx.verts[diag[0][1]]).squaredNorm();
      for (int k = 1; k < 3; ++k) {
        double len = (cx.verts[diag[k][0]] - cx.verts[diag[k][1]]).squaredNorm();
        if (len < best_len) {
          best_len = len;
          best = k;
        }
      }
      int p = diag[best][0], q = diag[best][1];
      const int* r = ring[best];
      for (int k = 0; k < 4; ++k) out.push_back({p, q, r[k], r[(k + 1) % 4]});
    }
  }
  cx.simps = std::move(out);
}

double row_det(const std::vector<VectorXd>& verts, const std::vector<int>& s) {
  const int d = static_cast<int>(s.size());
  MatrixXd M(d, d);
  for (int i = 0; i < d; ++i) M.row(i) = verts[s[i]].transpose();
  return M.determinant();
}

double edge_det(const std::vector<VectorXd>& verts, const std::vector<int>& s) {
  const int d = static_cast<int>(s.size()) - 1;
  MatrixXd E(d, d);
  for (int i = 0; i < d; ++i) E.col(i) = verts[s[i + 1]] - verts[s[0]];
  return E.determinant();
}

// flip to positive orientation by swapping the last two vertices
template <typename DetFn>
void orient_positive(std::vector<std::vector<int>>& simps, DetFn det) {
  for (auto& s : simps) {
    if (det(s) < 0.0) std::swap(s[s.size() - 1], s[s.size() - 2]);
  }
}

Mesh pack(Complex&& cx, int ambient_dim, int top_dim, std::string kind) {
  Mesh m;
  m.ambient_dim = ambient_dim;
  m.top_dim = top_dim;
  m.kind = std::move(kind);
  m.vertices.resize(static_cast<int>(cx.verts.size()), ambient_dim);
  for (int i = 0; i < m.n_vertices(); ++i) m.vertices.row(i) = cx.verts[i].transpose();
  m.cells.resize(static_cast<int>(cx.simps.size()), top_dim + 1);
  for (int i = 0; i < m.n_cells(); ++i)
    for (int j = 0; j <= top_dim; ++j) m.cells(i, j) = cx.simps[i][j];
  m.vertex_shell = VectorXi::Constant(m.n_vertices(), -1);
  m.vertex_on_boundary.assign(m.n_vertices(), 0);
  return m;
}

// identify boundary facets (owned by exactly one cell), give them the
// orientation induced by their positively oriented cell (which points outward),
// and tag connected components ordered by mean distance from the origin
void finalize_boundary(Mesh& m) {
  const int d = m.top_dim;
  std::map<std::vector<int>, std::vector<std::pair<int, int>>> owners;  // sorted facet -> (cell, opposite slot)
  for (int c = 0; c < m.n_cells(); ++c) {
    for (int i = 0; i <= d; ++i) {
      std::vector<int> f;
      f.reserve(d);
      for (int j = 0; j <= d; ++j)
        if (j != i) f.push_back(m.cells(c, j));
      std::sort(f.begin(), f.end());
      owners[f].push_back({c, i});
    }
  }
  std::vector<std::vector<int>> facets;
  std::vector<int> facet_cell;
  for (const auto& [key, own] : owners) {
    if (own.size() > 2) throw numerical_error("mesh build produced a non-manifold facet");
    if (own.size() != 1) continue;
    auto [c, i] = own[0];
    std::vector<int> f;
    for (int j = 0; j <= d; ++j)
      if (j != i) f.push_back(m.cells(c, j));
    if (i % 2 == 1) std::swap(f[0], f[1]);  // induced orientation carries sign (-1)^i
    facets.push_back(f);
    facet_cell.push_back(c);
  }

  const int B = static_cast<int>(facets.size());
  m.boundary_facets.resize(B, d);
  m.boundary_facet_cell.resize(B);
  for (int b = 0; b < B; ++b) {
    for (int j = 0; j < d; ++j) m.boundary_facets(b, j) = facets[b][j];
    m.boundary_facet_cell[b] = facet_cell[b];
    for (int j = 0; j < d; ++j) m.vertex_on_boundary[facets[b][j]] = 1;
  }

  // union-find over facets sharing a ridge
  std::vector<int> parent(B);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::map<std::vector<int>, int> ridge_seen;
  for (int b = 0; b < B; ++b) {
    std::vector<int> f = facets[b];
    std::sort(f.begin(), f.end());
    for (int i = 0; i < d; ++i) {
      std::vector<int> ridge;
      for (int j = 0; j < d; ++j)
        if (j != i) ridge.push_back(f[j]);
      auto it = ridge_seen.find(ridge);
      if (it == ridge_seen.end())
        ridge_seen.emplace(std::move(ridge), b);
      else
        parent[find(b)] = find(it->second);
    }
  }
  std::map<int, double> comp_radius;  // root -> sum of vertex norms
  std::map<int, int> comp_count;
  for (int b = 0; b < B; ++b) {
    int r = find(b);
    for (int j = 0; j < d; ++j) comp_radius[r] += m.vertices.row(facets[b][j]).norm();
    comp_count[r] += d;
  }
  std::vector<std::pair<double, int>> order;  // (mean radius, root)
  for (const auto& [root, sum] : comp_radius) order.push_back({sum / comp_count[root], root});
  std::sort(order.begin(), order.end());
  std::map<int, int> label;
  for (int k = 0; k < static_cast<int>(order.size()); ++k) label[order[k].second] = k;
  m.boundary_component.resize(B);
  for (int b = 0; b < B; ++b) m.boundary_component[b] = label[find(b)];
}

Complex unit_sphere_complex(int n, int level) {
  Complex cx = cross_polytope(n);
  for (int r = 0; r < level; ++r) {
    subdivide(cx);
    for (auto& v : cx.verts) v.normalize();
  }
  for (auto& v : cx.verts) v.normalize();
  return cx;
}

// stack shell copies of a sphere complex at the given radii, connect them by
// prisms split with the sorted-index staircase rule (conforming across cells
// because the diagonal choice depends only on global sphere vertex order), and
// optionally cone the innermost shell to a center vertex
Mesh radial_mesh(int dim, const std::vector<double>& radii, int level, bool with_center,
                 const std::string& kind) {
  Complex sph = unit_sphere_complex(dim - 1, level);
  const int V = static_cast<int>(sph.verts.size());
  const int S = static_cast<int>(sph.simps.size());
  const int shells = static_cast<int>(radii.size());

  Complex cx;
  std::vector<int> shell_of;
  if (with_center) {
    cx.verts.push_back(VectorXd::Zero(dim));
    shell_of.push_back(0);
  }
  const int base = with_center ? 1 : 0;
  auto vid = [&](int shell, int i) { return base + shell * V + i; };
  for (int k = 0; k < shells; ++k)
    for (const auto& v : sph.verts) {
      cx.verts.push_back(radii[k] * v);
      shell_of.push_back(with_center ? k + 1 : k);
    }

  if (with_center) {
    for (const auto& s : sph.simps) {
      std::vector<int> cell = {0};
      for (int i : s) cell.push_back(vid(0, i));
      cx.simps.push_back(cell);
    }
  }
  for (int k = 0; k + 1 < shells; ++k) {
    for (const auto& s : sph.simps) {
      std::vector<int> o(s);
      std::sort(o.begin(), o.end());
      const int d = static_cast<int>(o.size());
      for (int i = 0; i < d; ++i) {
        std::vector<int> cell;
        for (int j = 0; j <= i; ++j) cell.push_back(vid(k, o[j]));
        for (int j = i; j < d; ++j) cell.push_back(vid(k + 1, o[j]));
        cx.simps.push_back(cell);
      }
    }
  }
  orient_positive(cx.simps, [&](const std::vector<int>& s) { return edge_det(cx.verts, s); });

  (void)S;
  Mesh m = pack(std::move(cx), dim, dim, kind);
  for (int i = 0; i < m.n_vertices(); ++i) m.vertex_shell[i] = shell_of[i];
  finalize_boundary(m);
  return m;
}

}  // namespace

std::vector<int> Mesh::boundary_vertices() const {
  std::vector<int> out;
  for (int i = 0; i < n_vertices(); ++i)
    if (vertex_on_boundary[i]) out.push_back(i);
  return out;
}

Mesh sphere_mesh(int n, int level) {
  if (n < 1 || n > 3) {
    std::ostringstream os;
    os << "sphere_mesh: n = " << n << " unsupported, need 1 <= n <= 3";
    throw std::invalid_argument(os.str());
  }
  if (level < 0) throw std::invalid_argument("sphere_mesh: negative refinement level");
  check_budget(ipow(2, n + 1) * ipow(ipow(2, n), level), "sphere_mesh");

  Complex cx = unit_sphere_complex(n, level);
  orient_positive(cx.simps, [&](const std::vector<int>& s) { return row_det(cx.verts, s); });
  Mesh m = pack(std::move(cx), n + 1, n, "sphere");
  m.params = {{"n", double(n)}, {"level", double(level)}};
  return m;
}

Mesh ball_mesh(int dim, double radius, int shells, int level) {
  if (dim < 2 || dim > 4) throw std::invalid_argument("ball_mesh: need 2 <= dim <= 4");
  if (!(radius > 0.0)) throw std::invalid_argument("ball_mesh: radius must be positive");
  if (shells < 1) throw std::invalid_argument("ball_mesh: need at least one shell");
  if (level < 0) throw std::invalid_argument("ball_mesh: negative refinement level");
  long sphere_cells = ipow(2, dim) * ipow(ipow(2, dim - 1), level);
  check_budget(sphere_cells * (1 + long(shells - 1) * dim), "ball_mesh");

  std::vector<double> radii;
  for (int k = 1; k <= shells; ++k) radii.push_back(radius * k / shells);
  Mesh m = radial_mesh(dim, radii, level, /*with_center=*/true, "ball");
  m.params = {{"dim", double(dim)}, {"radius", radius}, {"shells", double(shells)},
              {"level", double(level)}};
  return m;
}

Mesh annulus_mesh(int dim, double r_inner, double r_outer, int shells, int level,
                  RadialSpacing spacing) {
  if (dim < 2 || dim > 4) throw std::invalid_argument("annulus_mesh: need 2 <= dim <= 4");
  if (!(0.0 < r_inner && r_inner < r_outer))
    throw std::invalid_argument("annulus_mesh: need 0 < r_inner < r_outer");
  if (shells < 1) throw std::invalid_argument("annulus_mesh: need at least one shell");
  if (level < 0) throw std::invalid_argument("annulus_mesh: negative refinement level");
  long sphere_cells = ipow(2, dim) * ipow(ipow(2, dim - 1), level);
  check_budget(sphere_cells * long(shells) * dim, "annulus_mesh");

  std::vector<double> radii;
  for (int k = 0; k <= shells; ++k) {
    double t = double(k) / shells;
    radii.push_back(spacing == RadialSpacing::uniform
                        ? r_inner + (r_outer - r_inner) * t
                        : r_inner * std::pow(r_outer / r_inner, t));
  }
  Mesh m = radial_mesh(dim, radii, level, /*with_center=*/false, "annulus");
  m.params = {{"dim", double(dim)}, {"r_inner", r_inner}, {"r_outer", r_outer},
              {"shells", double(shells)}, {"level", double(level)},
              {"geometric", spacing == RadialSpacing::geometric ? 1.0 : 0.0}};
  return m;
}

VectorXd torus_embed(const VectorXd& u, double t, double ring_radius) {
  const int dim = static_cast<int>(u.size()) + 1;
  VectorXd p(dim);
  p[0] = (ring_radius + u[0]) * std::cos(t);
  p[1] = (ring_radius + u[0]) * std::sin(t);
  for (int i = 1; i + 1 < dim; ++i) p[i + 1] = u[i];
  return p;
}

VectorXd torus_fiber_point(const VectorXd& p, double ring_radius) {
  const int dim = static_cast<int>(p.size());
  VectorXd u(dim - 1);
  u[0] = std::hypot(p[0], p[1]) - ring_radius;
  for (int i = 1; i + 1 < dim; ++i) u[i] = p[i + 1];
  return u;
}

Mesh solid_torus_mesh(int dim, double tube_radius, double ring_radius, int rings,
                      int shells, int level) {
  if (dim < 3 || dim > 4) throw std::invalid_argument("solid_torus_mesh: need 3 <= dim <= 4");
  if (!(tube_radius > 0.0 && ring_radius > 0.0))
    throw std::invalid_argument("solid_torus_mesh: radii must be positive");
  if (tube_radius >= ring_radius)
    throw std::invalid_argument("solid_torus_mesh: need tube_radius < ring_radius for an embedding");
  if (rings < 3) throw std::invalid_argument("solid_torus_mesh: need at least 3 rings");

  Mesh disk = ball_mesh(dim - 1, tube_radius, shells, level);
  const int V = disk.n_vertices();
  check_budget(long(rings) * disk.n_cells() * dim, "solid_torus_mesh");

  Complex cx;
  for (int j = 0; j < rings; ++j) {
    double t = 2.0 * M_PI * j / rings;
    for (int i = 0; i < V; ++i)
      cx.verts.push_back(torus_embed(disk.vertices.row(i).transpose(), t, ring_radius));
  }
  auto vid = [&](int ring, int i) { return (ring % rings) * V + i; };
  for (int j = 0; j < rings; ++j) {
    for (int c = 0; c < disk.n_cells(); ++c) {
      std::vector<int> o(dim);
      for (int k = 0; k < dim; ++k) o[k] = disk.cells(c, k);
      std::sort(o.begin(), o.end());
      for (int i = 0; i < dim; ++i) {
        std::vector<int> cell;
        for (int k = 0; k <= i; ++k) cell.push_back(vid(j, o[k]));
        for (int k = i; k < dim; ++k) cell.push_back(vid(j + 1, o[k]));
        cx.simps.push_back(cell);
      }
    }
  }
  orient_positive(cx.simps, [&](const std::vector<int>& s) { return edge_det(cx.verts, s); });

  Mesh m = pack(std::move(cx), dim, dim, "solid_torus");
  for (int j = 0; j < rings; ++j)
    for (int i = 0; i < V; ++i) m.vertex_shell[j * V + i] = disk.vertex_shell[i];
  finalize_boundary(m);
  m.params = {{"dim", double(dim)}, {"tube_radius", tube_radius},
              {"ring_radius", ring_radius}, {"rings", double(rings)},
              {"shells", double(shells)}, {"level", double(level)}};
  return m;
}

double simplex_volume(const MatrixXd& vertex_rows) {
  const int k = static_cast<int>(vertex_rows.rows()) - 1;
  MatrixXd E(vertex_rows.cols(), k);
  for (int i = 0; i < k; ++i)
    E.col(i) = (vertex_rows.row(i + 1) - vertex_rows.row(0)).transpose();
  double g = (E.transpose() * E).determinant();
  return std::sqrt(std::max(g, 0.0)) / factorial(k);
}

double mesh_volume(const Mesh& m) {
  double vol = 0.0;
  MatrixXd rows(m.top_dim + 1, m.ambient_dim);
  for (int c = 0; c < m.n_cells(); ++c) {
    for (int j = 0; j <= m.top_dim; ++j) rows.row(j) = m.vertices.row(m.cells(c, j));
    vol += simplex_volume(rows);
  }
  return vol;
}

double max_edge_length(const Mesh& m) {
  double h = 0.0;
  for (int c = 0; c < m.n_cells(); ++c)
    for (int a = 0; a <= m.top_dim; ++a)
      for (int b = a + 1; b <= m.top_dim; ++b)
        h = std::max(h, (m.vertices.row(m.cells(c, a)) - m.vertices.row(m.cells(c, b))).norm());
  return h;
}

double unit_ball_volume(int dim) {
  return std::pow(M_PI, 0.5 * dim) / std::tgamma(0.5 * dim + 1.0);
}

void validate_mesh(const Mesh& m) {
  const int d = m.top_dim;
  auto fail = [](const std::string& msg) { throw numerical_error("validate_mesh: " + msg); };

  // positive orientation of every top cell
  for (int c = 0; c < m.n_cells(); ++c) {
    std::vector<int> s(d + 1);
    for (int j = 0; j <= d; ++j) s[j] = m.cells(c, j);
    double det;
    if (m.top_dim == m.ambient_dim) {
      MatrixXd E(d, d);
      for (int i = 0; i < d; ++i)
        E.col(i) = (m.vertices.row(s[i + 1]) - m.vertices.row(s[0])).transpose();
      det = E.determinant();
    } else {
      MatrixXd M(d + 1, d + 1);
      for (int i = 0; i <= d; ++i) M.row(i) = m.vertices.row(s[i]);
      det = M.determinant();
    }
    if (!(det > 0.0)) fail("cell " + std::to_string(c) + " has non-positive orientation");
  }

  // facet incidence counts, and the boundary set must be exactly the count-1 facets
  std::map<std::vector<int>, int> count;
  for (int c = 0; c < m.n_cells(); ++c)
    for (int i = 0; i <= d; ++i) {
      std::vector<int> f;
      for (int j = 0; j <= d; ++j)
        if (j != i) f.push_back(m.cells(c, j));
      std::sort(f.begin(), f.end());
      ++count[f];
    }
  std::set<std::vector<int>> boundary_keys;
  for (const auto& [f, k] : count) {
    if (k > 2) fail("facet shared by more than two cells");
    if (k == 1) boundary_keys.insert(f);
  }
  std::set<std::vector<int>> stored;
  for (int b = 0; b < m.n_boundary_facets(); ++b) {
    std::vector<int> f(d);
    for (int j = 0; j < d; ++j) f[j] = m.boundary_facets(b, j);
    std::sort(f.begin(), f.end());
    stored.insert(f);
  }
  if (stored != boundary_keys) fail("stored boundary facets disagree with facet counts");
  if (m.kind == "sphere" && !boundary_keys.empty()) fail("sphere mesh has boundary facets");

  // stored boundary orientation must point outward: det[outward | facet frame] > 0
  for (int b = 0; b < m.n_boundary_facets(); ++b) {
    int c = m.boundary_facet_cell[b];
    std::set<int> fv;
    for (int j = 0; j < d; ++j) fv.insert(m.boundary_facets(b, j));
    int opp = -1;
    for (int j = 0; j <= d; ++j)
      if (!fv.count(m.cells(c, j))) opp = m.cells(c, j);
    if (opp < 0) fail("boundary facet not contained in its cell");
    VectorXd bary = VectorXd::Zero(m.ambient_dim);
    for (int j = 0; j < d; ++j) bary += m.vertices.row(m.boundary_facets(b, j)).transpose();
    bary /= d;
    MatrixXd M(m.ambient_dim, d);
    M.col(0) = bary - m.vertices.row(opp).transpose();
    for (int j = 1; j < d; ++j)
      M.col(j) = (m.vertices.row(m.boundary_facets(b, j)) - m.vertices.row(m.boundary_facets(b, 0)))
                     .transpose();
    if (!(M.determinant() > 0.0))
      fail("boundary facet " + std::to_string(b) + " is not outward-oriented");
  }

  // boundary complex is closed: every ridge shared by exactly two boundary facets
  std::map<std::vector<int>, int> ridge_count;
  for (const auto& f : stored)
    for (int i = 0; i < d; ++i) {
      std::vector<int> ridge;
      for (int j = 0; j < d; ++j)
        if (j != i) ridge.push_back(f[j]);
      ++ridge_count[ridge];
    }
  for (const auto& [r, k] : ridge_count)
    if (k != 2) fail("boundary complex not closed at a ridge");

  // vertex norm structure
  if (m.kind == "sphere") {
    for (int i = 0; i < m.n_vertices(); ++i)
      if (std::abs(m.vertices.row(i).norm() - 1.0) > 1e-14)
        fail("sphere vertex off the unit sphere");
  }
  if (m.kind == "ball" || m.kind == "annulus") {
    std::map<int, std::pair<double, double>> range;  // shell -> (min, max) norm
    for (int i = 0; i < m.n_vertices(); ++i) {
      double r = m.vertices.row(i).norm();
      auto it = range.find(m.vertex_shell[i]);
      if (it == range.end())
        range[m.vertex_shell[i]] = {r, r};
      else {
        it->second.first = std::min(it->second.first, r);
        it->second.second = std::max(it->second.second, r);
      }
    }
    double prev = -1.0;
    for (const auto& [shell, mm] : range) {
      if (mm.second - mm.first > 1e-14 * std::max(1.0, mm.second))
        fail("shell " + std::to_string(shell) + " has inconsistent radii");
      if (mm.first <= prev) fail("shell radii not increasing");
      prev = mm.second;
    }
  }

  // vertex_on_boundary flags match the facet set
  std::vector<char> on(m.n_vertices(), 0);
  for (const auto& f : stored)
    for (int v : f) on[v] = 1;
  for (int i = 0; i < m.n_vertices(); ++i)
    if (on[i] != m.vertex_on_boundary[i]) fail("vertex boundary flags inconsistent");
}

void save_mesh_json(const Mesh& m, const std::string& path) {
  nlohmann::ordered_json j;
  j["version"] = 1;
  j["kind"] = m.kind;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : m.params) params[k] = v;
  j["params"] = params;
  j["ambient_dim"] = m.ambient_dim;
  j["top_dim"] = m.top_dim;
  auto mat_rows = [](const auto& M) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (int i = 0; i < M.rows(); ++i) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (int k = 0; k < M.cols(); ++k) row.push_back(M(i, k));
      rows.push_back(row);
    }
    return rows;
  };
  j["vertices"] = mat_rows(m.vertices);
  j["simplices"] = mat_rows(m.cells);
  j["boundary"]["facets"] = mat_rows(m.boundary_facets);
  j["boundary"]["facet_cell"] = std::vector<int>(m.boundary_facet_cell.data(),
                                                 m.boundary_facet_cell.data() + m.boundary_facet_cell.size());
  j["boundary"]["component"] = std::vector<int>(m.boundary_component.data(),
                                                m.boundary_component.data() + m.boundary_component.size());
  j["vertex_shell"] = std::vector<int>(m.vertex_shell.data(),
                                       m.vertex_shell.data() + m.vertex_shell.size());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_mesh_json: cannot open " + path);
  out << j.dump(1) << "\n";
}

Mesh load_mesh_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_mesh_json: cannot open " + path);
  nlohmann::ordered_json j = nlohmann::ordered_json::parse(in);
  if (j.at("version").get<int>() != 1) throw std::runtime_error("load_mesh_json: unknown version");
  Mesh m;
  m.kind = j.at("kind").get<std::string>();
  m.ambient_dim = j.at("ambient_dim").get<int>();
  m.top_dim = j.at("top_dim").get<int>();
  for (const auto& [k, v] : j.at("params").items()) m.params.push_back({k, v.get<double>()});
  auto load_mat = [](const nlohmann::json& rows, auto& M, int cols) {
    M.resize(static_cast<int>(rows.size()), cols);
    for (int i = 0; i < M.rows(); ++i)
      for (int k = 0; k < cols; ++k) M(i, k) = rows[i][k];
  };
  load_mat(j.at("vertices"), m.vertices, m.ambient_dim);
  load_mat(j.at("simplices"), m.cells, m.top_dim + 1);
  load_mat(j.at("boundary").at("facets"), m.boundary_facets, m.top_dim);
  auto load_vec = [](const nlohmann::json& a, VectorXi& v) {
    v.resize(static_cast<int>(a.size()));
    for (int i = 0; i < v.size(); ++i) v[i] = a[i];
  };
  load_vec(j.at("boundary").at("facet_cell"), m.boundary_facet_cell);
  load_vec(j.at("boundary").at("component"), m.boundary_component);
  load_vec(j.at("vertex_shell"), m.vertex_shell);
  m.vertex_on_boundary.assign(m.n_vertices(), 0);
  for (int b = 0; b < m.n_boundary_facets(); ++b)
    for (int k = 0; k < m.top_dim; ++k) m.vertex_on_boundary[m.boundary_facets(b, k)] = 1;
  return m;
}

}  // namespace mss
