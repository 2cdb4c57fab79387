#pragma once

#include <utility>
#include <vector>

#include "mss/geometry.hpp"
#include "mss/mesh.hpp"

namespace mss {

struct Polyline {
  std::vector<VectorXd> points;
  bool closed = false;
};

struct DegreeResult {
  int degree = 0;
  double raw = 0.0;  // signed image volume / sphere volume, before rounding
};

// Brouwer degree of a vertex-sampled map S^n -> S^n (values unit, V x (n+1));
// raw value farther than 0.2 from an integer raises a resolution error
DegreeResult sphere_degree(const Mesh& sphere, const MatrixXd& values);

// preimage of the regular value q under the radialized PL map S^3 -> S^2.
// q is replaced by a nearby deterministic candidate when it sits too close to
// the image of the mesh 1-skeleton; q_used reports the value actually taken.
std::vector<Polyline> preimage_fiber(const Mesh& s3, const MatrixXd& values,
                                     const Eigen::Vector3d& q,
                                     Eigen::Vector3d* q_used = nullptr);

struct LinkResult {
  int link = 0;
  double raw = 0.0;
};

// Gauss linking number of closed disjoint polylines in R^3, by the exact
// per-segment-pair solid angle sum
LinkResult linking_number(const Polyline& a, const Polyline& b);

struct HopfResult {
  int invariant = 0;
  double raw = 0.0;
  Eigen::Vector3d q_plus, q_minus;  // regular values actually used
};

// linking of the fibers over two antipodal regular values, after stereographic
// projection from a pole far from both
HopfResult hopf_invariant(const Mesh& s3, const MatrixXd& values);

// min of ||F|| over vertices (optionally interior only): a small value
// witnesses an approximate zero of the map
std::pair<double, int> min_norm_locus(const GraphFunction& F, bool interior_only = false);

struct Containment {
  bool contained = false;
  double max_dist = 0.0;
  int witness = -1;  // vertex realizing the max
};

// is every value F(x) within eps of the sample cloud of the target image
Containment neighborhood_containment(const GraphFunction& F, const MatrixXd& cloud,
                                     double eps);

}  // namespace mss
