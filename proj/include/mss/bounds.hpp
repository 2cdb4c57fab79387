#pragma once

#include <string>
#include <vector>

#include "mss/boundary_data.hpp"
#include "mss/geometry.hpp"

namespace mss {

struct BoundsReport {
  int n = 0;
  int l = 0;
  double V_eta = 0.0;
  double epsilon0 = 0.0;
  double omega = 0.0;  // unit ball volume in dimension n+1
  std::vector<double> R_grid, upper, lower;
  double R_star = 0.0;
  bool crossing_below_one = false;  // R* < 1, where the power-law form is heuristic
  std::string regime;               // disk | annulus | degenerate
};

// mass that any solution with boundary data R*eta can have, from the boundary
// representation of the mass: (sqrt(1+R^2)/(n+1)) * R^l * V_eta
double upper_bound_curve(double R, int n, int l, double V_eta);
// the cruder constant-times-power form C * R^{l+1}, C = (sqrt(2)/(n+1)) V_eta,
// matching the exact curve at R = 1 and valid above it
double upper_bound_simplified(double R, int n, int l, double V_eta);

// mass any solution must have, from density monotonicity at an interior zero
// plus the reach of the image: omega_{n+1} * epsilon0^{n+1} * R^{n+1}
double lower_bound_curve(double R, int n, double epsilon0);

// certified crossing of the two curves: above the returned R the bounds are
// inconsistent, so no Lipschitz solution exists. Bisection to 1e-10 relative.
double nonexistence_threshold(int n, int l, double V_eta, double epsilon0,
                              bool* crossing_below_one = nullptr);

// same crossing for two-component annulus data: the lower bound uses the
// witness distance R*d/2, the upper bound the summed graph volume of both
// components with positions bounded by the outer data
double annulus_threshold(int n, int l, double V_total, double d,
                         double outer_radius = 2.0,
                         bool* crossing_below_one = nullptr);

BoundsReport make_bounds_report(int n, int l, double V_eta, double epsilon0,
                                const std::vector<double>& R_grid,
                                const std::string& regime = "disk");

struct CertBundle {
  double measured_mass = 0.0;
  double upper_quadrature = 0.0;  // intrinsic bound from F's own lifted boundary
  double upper_curve = 0.0;       // power-law curve value (meaningful for R >= 1)
  double lower_curve = 0.0;
  bool mass_within_upper = false;
  double min_norm = 0.0;          // zero-witness diagnostic over interior vertices
  double R = 0.0;
  bool degenerate = false;        // bounds inapplicable (flat or zero data)
};

// joins a measured solution/fixture mass to the bound curves. The operative
// inequality uses the quadrature bound (max boundary position / (n+1)) times
// the lifted boundary area, which is valid at every R; the power-law curve is
// reported alongside for R >= 1.
CertBundle certify(const GraphFunction& F, const BoundsReport& report, double R);

}  // namespace mss
