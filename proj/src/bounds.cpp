#include "mss/bounds.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "mss/errors.hpp"
#include "mss/mesh.hpp"
#include "mss/topology.hpp"

namespace mss {

double upper_bound_curve(double R, int n, int l, double V_eta) {
  if (R < 0.0 || V_eta <= 0.0) throw std::invalid_argument("upper_bound_curve: need R >= 0, V > 0");
  return std::sqrt(1.0 + R * R) / (n + 1) * std::pow(R, l) * V_eta;
}

double upper_bound_simplified(double R, int n, int l, double V_eta) {
  if (R < 0.0 || V_eta <= 0.0)
    throw std::invalid_argument("upper_bound_simplified: need R >= 0, V > 0");
  return std::sqrt(2.0) / (n + 1) * V_eta * std::pow(R, l + 1);
}

double lower_bound_curve(double R, int n, double epsilon0) {
  if (R < 0.0 || epsilon0 <= 0.0)
    throw std::invalid_argument("lower_bound_curve: need R >= 0, epsilon0 > 0");
  return unit_ball_volume(n + 1) * std::pow(epsilon0 * R, n + 1);
}

namespace {

// bisection for the unique sign change of L - U; the bracket [lo, hi] must
// already straddle it
double bisect_crossing(const std::function<double(double)>& gap, double lo, double hi) {
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (gap(mid) > 0.0)
      hi = mid;
    else
      lo = mid;
    if (hi - lo <= 1e-14 * hi) break;
  }
  return 0.5 * (lo + hi);
}

double threshold_from_curves(int n, int l, const std::function<double(double)>& upper,
                             const std::function<double(double)>& lower,
                             bool* crossing_below_one) {
  if (l >= n)
    throw std::invalid_argument(
        "nonexistence_threshold: the bounds only cross for image dimension below the domain's");
  auto gap = [&](double R) { return lower(R) - upper(R); };

  bool below_one = gap(1.0) > 0.0;
  if (crossing_below_one) *crossing_below_one = below_one;
  if (below_one) return bisect_crossing(gap, 1e-10, 1.0);

  double hi = 2.0;
  while (gap(hi) <= 0.0) {
    hi *= 2.0;
    if (hi > 1e12)
      throw numerical_error("nonexistence_threshold: no crossing found below R = 1e12");
  }
  return bisect_crossing(gap, hi / 2.0, hi);
}

}  // namespace

double nonexistence_threshold(int n, int l, double V_eta, double epsilon0,
                              bool* crossing_below_one) {
  if (V_eta <= 0.0 || epsilon0 <= 0.0)
    throw std::invalid_argument("nonexistence_threshold: need V > 0 and epsilon0 > 0");
  return threshold_from_curves(
      n, l, [=](double R) { return upper_bound_curve(R, n, l, V_eta); },
      [=](double R) { return lower_bound_curve(R, n, epsilon0); }, crossing_below_one);
}

double annulus_threshold(int n, int l, double V_total, double d, double outer_radius,
                         bool* crossing_below_one) {
  if (d <= 0.0 || V_total <= 0.0 || outer_radius <= 0.0)
    throw std::invalid_argument("annulus_threshold: need d > 0, V > 0, outer radius > 0");
  // boundary positions are bounded by the outer component: ||(x, R f(x))|| <=
  // rho sqrt(1+R^2); an interior zero keeps distance R d/2 from both data sets
  return threshold_from_curves(
      n, l, [=](double R) { return upper_bound_curve(R, n, l, outer_radius * V_total); },
      [=](double R) { return lower_bound_curve(R, n, 0.5 * d); }, crossing_below_one);
}

BoundsReport make_bounds_report(int n, int l, double V_eta, double epsilon0,
                                const std::vector<double>& R_grid, const std::string& regime) {
  BoundsReport rep;
  rep.n = n;
  rep.l = l;
  rep.V_eta = V_eta;
  rep.epsilon0 = epsilon0;
  rep.omega = unit_ball_volume(n + 1);
  rep.R_grid = R_grid;
  rep.regime = regime;
  if (regime == "degenerate" || V_eta <= 0.0 || epsilon0 <= 0.0) {
    rep.regime = "degenerate";
    rep.upper.assign(R_grid.size(), 0.0);
    rep.lower.assign(R_grid.size(), 0.0);
    rep.R_star = 0.0;
    return rep;
  }
  for (double R : R_grid) {
    rep.upper.push_back(upper_bound_curve(R, n, l, V_eta));
    rep.lower.push_back(lower_bound_curve(R, n, epsilon0));
  }
  rep.R_star = nonexistence_threshold(n, l, V_eta, epsilon0, &rep.crossing_below_one);
  return rep;
}

CertBundle certify(const GraphFunction& F, const BoundsReport& report, double R) {
  CertBundle c;
  c.R = R;
  c.degenerate = report.regime == "degenerate";
  c.measured_mass = graph_mass(F);
  c.min_norm = min_norm_locus(F, true).first;

  // intrinsic quadrature bound: the boundary representation of the mass is at
  // most the max lifted boundary position times the lifted boundary area,
  // divided by the domain dimension; valid at every R, unlike the power curve
  const Mesh& m = *F.mesh;
  if (m.n_boundary_facets() == 0)
    throw std::invalid_argument("certify: the fixture needs a boundary");
  double max_pos = 0.0;
  for (int i = 0; i < m.n_vertices(); ++i) {
    if (!m.vertex_on_boundary[i]) continue;
    double pos = std::sqrt(m.vertices.row(i).squaredNorm() + F.values.row(i).squaredNorm());
    max_pos = std::max(max_pos, pos);
  }
  double lifted_area = 0.0;
  for (int b = 0; b < m.n_boundary_facets(); ++b) {
    MatrixXd dom(m.top_dim, m.ambient_dim), val(m.top_dim, F.target_dim);
    for (int j = 0; j < m.top_dim; ++j) {
      dom.row(j) = m.vertices.row(m.boundary_facets(b, j));
      val.row(j) = F.values.row(m.boundary_facets(b, j));
    }
    lifted_area += lifted_volume(dom, val);
  }
  c.upper_quadrature = max_pos * lifted_area / m.top_dim;
  c.mass_within_upper = c.measured_mass <= c.upper_quadrature;

  if (!c.degenerate) {
    c.upper_curve = upper_bound_curve(std::max(R, 0.0), report.n, report.l, report.V_eta);
    c.lower_curve = lower_bound_curve(std::max(R, 0.0), report.n, report.epsilon0);
  }
  return c;
}

}  // namespace mss
