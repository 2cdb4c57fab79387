#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

namespace mss {

using Eigen::MatrixXd;
using Eigen::MatrixXi;
using Eigen::VectorXd;
using Eigen::VectorXi;

// Oriented simplicial mesh of S^n or of a solid domain in R^d.
// Solid meshes have top_dim == ambient_dim; sphere meshes are codimension-1
// complexes with top_dim == ambient_dim - 1 and no boundary.
struct Mesh {
  int ambient_dim = 0;
  int top_dim = 0;
  std::string kind;           // "sphere" | "ball" | "annulus" | "solid_torus"
  MatrixXd vertices;          // V x ambient_dim
  MatrixXi cells;             // C x (top_dim+1), positive orientation
  MatrixXi boundary_facets;   // B x top_dim, outward induced orientation
  VectorXi boundary_facet_cell;      // owning top cell per boundary facet
  VectorXi boundary_component;       // component tag per boundary facet
  std::vector<char> vertex_on_boundary;
  VectorXi vertex_shell;      // radial shell per vertex (-1 when not radial)
  std::vector<std::pair<std::string, double>> params;  // builder inputs, echoed in caches

  int n_vertices() const { return static_cast<int>(vertices.rows()); }
  int n_cells() const { return static_cast<int>(cells.rows()); }
  int n_boundary_facets() const { return static_cast<int>(boundary_facets.rows()); }
  int n_boundary_components() const {
    return boundary_component.size() ? boundary_component.maxCoeff() + 1 : 0;
  }
  std::vector<int> boundary_vertices() const;
};

enum class RadialSpacing { uniform, geometric };

// S^n as the boundary of the (n+1)-cross-polytope, refined by edge-midpoint
// subdivision with projection back to the unit sphere after every round.
Mesh sphere_mesh(int n, int level);

// Radial shell meshes. ball adds a center vertex coned to the innermost shell;
// annulus spans [r_inner, r_outer] with two tagged boundary components (0 inner,
// 1 outer). dim is the ambient (= top) dimension, 2 <= dim <= 4.
Mesh ball_mesh(int dim, double radius, int shells, int level);
Mesh annulus_mesh(int dim, double r_inner, double r_outer, int shells, int level,
                  RadialSpacing spacing = RadialSpacing::uniform);

// D^{dim-1}(tube_radius) x S^1(ring_radius) embedded in R^dim: the cross-section
// disk swept around the circle in the (x1,x2)-plane, rings angular segments.
Mesh solid_torus_mesh(int dim, double tube_radius, double ring_radius, int rings,
                      int shells, int level);

// Closed-form coordinates of the solid torus embedding: p = phi(u, t) with
// u in D^{dim-1}, t the ring angle. torus_fiber_point inverts phi for the
// cross-section factor.
VectorXd torus_embed(const VectorXd& u, double t, double ring_radius);
VectorXd torus_fiber_point(const VectorXd& p, double ring_radius);

double simplex_volume(const MatrixXd& vertex_rows);   // flat k-volume in any ambient dim
double mesh_volume(const Mesh& m);
double max_edge_length(const Mesh& m);

// Checks every structural invariant (positive volumes, facet counts, unit or
// shell-radius vertex norms, closed boundary complex); throws on violation.
void validate_mesh(const Mesh& m);

// Versioned JSON container; identical meshes re-export byte-identically.
void save_mesh_json(const Mesh& m, const std::string& path);
Mesh load_mesh_json(const std::string& path);

double unit_ball_volume(int dim);   // omega_d = pi^{d/2} / Gamma(d/2 + 1)

}  // namespace mss
