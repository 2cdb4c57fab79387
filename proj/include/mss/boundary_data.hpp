#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mss/mesh.hpp"

namespace mss {

// closed-form boundary data: an evaluator on the boundary of the intended
// domain, plus the declared geometry of its image that the bound curves need
struct BoundaryMap {
  std::string name;
  int domain_dim = 0;   // n, for data on S^n (or dim of the torus boundary)
  int target_dim = 0;   // m+1
  int image_dim = 0;    // l, declared dimension of the image
  double image_radius = 0.0;  // > 0 when the image is a round sphere about 0
  std::function<VectorXd(const VectorXd&)> eval;
  // two-component data (annulus): component evaluators ordered inner, outer
  std::vector<std::function<VectorXd(const VectorXd&)>> components;

  bool sphere_valued() const { return image_radius > 0.0; }
};

// the fibration S^3 -> S^2 and its quaternionic / octonionic analogues;
// sphere_dim picks the family (3, 7 or 15), input must be a unit vector
VectorXd hopf_point(int sphere_dim, const VectorXd& x);

BoundaryMap hopf_map(int sphere_dim);          // evaluator radial: eta(x/|x|)
BoundaryMap constant_map(int domain_dim, const VectorXd& value);
BoundaryMap scale_map(const BoundaryMap& f, double R);
BoundaryMap deform_map(const BoundaryMap& f, const MatrixXd& A);

// max over quasi-random sample points and tangent directions of the three
// isometry violations (norm change, lost orthogonality to the position, metric
// distortion); small value certifies A as an admissible deformation
double verify_isometry(const MatrixXd& A, const BoundaryMap& f, int samples);

// n-volume of the graph of f over the sphere of the given radius, by the
// lifted-simplex quadrature on the supplied unit sphere mesh
double graph_volume(const BoundaryMap& f, const Mesh& unit_sphere, double domain_radius = 1.0);

// normal injectivity radius of the image: min of a focal-distance bound (local
// quadric fits) and a self-approach bound (extrinsically close, far-apart
// sample pairs); round-sphere images short-circuit to their radius
double reach_estimate(const BoundaryMap& f, int samples);

BoundaryMap annulus_map(const BoundaryMap& inner, const BoundaryMap& outer);
double image_distance(const BoundaryMap& f1, const BoundaryMap& f2, int samples);

// data on the boundary of D^n(1/2) x S^1(1) embedded in R^{n+1}: sends the
// boundary point to its cross-section factor, which lies on S^{n-1}(1/2)
BoundaryMap torus_data(int n);

// registry for CLI/config reference: hopf3, hopf7, hopf15, torus, annulus:hopf12
BoundaryMap make_map(const std::string& id);

// Cayley-Dickson doubling products used by the quaternionic/octonionic maps
VectorXd cd_multiply(const VectorXd& a, const VectorXd& b);
VectorXd cd_conjugate(const VectorXd& a);

}  // namespace mss
