#include "mss/topology.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "mss/errors.hpp"
#include "mss/sampling.hpp"

namespace mss {

namespace {

int round_with_tolerance(double raw, const char* what) {
  double nearest = std::round(raw);
  if (std::abs(raw - nearest) > 0.2) {
    std::ostringstream os;
    os << what << ": raw value " << raw << " is more than 0.2 from an integer; refine the mesh";
    throw resolution_error(os.str());
  }
  return static_cast<int>(nearest);
}

MatrixXd unit_rows(const MatrixXd& values) {
  MatrixXd w = values;
  for (int i = 0; i < w.rows(); ++i) {
    double n = w.row(i).norm();
    if (n < 1e-9) {
      std::ostringstream os;
      os << "sphere map value vanishes at vertex " << i;
      throw numerical_error(os.str());
    }
    w.row(i) /= n;
  }
  return w;
}

// signed spherical volume of the image tetrahedron on S^3, by longest-edge
// bisection down to nearly flat pieces. A flat piece with unit corners sits
// slightly inside the sphere; dividing by |centroid|^4 restores the radial
// projection factor to second order.
double spherical_tet_volume(const Eigen::Vector4d& w0, const Eigen::Vector4d& w1,
                            const Eigen::Vector4d& w2, const Eigen::Vector4d& w3, int depth) {
  const Eigen::Vector4d* w[4] = {&w0, &w1, &w2, &w3};
  double longest = 0.0;
  int bi = 0, bj = 1;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      double d = (*w[i] - *w[j]).norm();
      if (d > longest) {
        longest = d;
        bi = i;
        bj = j;
      }
    }
  if (longest < 0.2 || depth >= 16) {
    Eigen::Matrix4d M;
    M << w0.transpose(), w1.transpose(), w2.transpose(), w3.transpose();
    double rc = ((w0 + w1 + w2 + w3) / 4.0).norm();
    return M.determinant() / (6.0 * rc * rc * rc * rc);
  }
  Eigen::Vector4d m = (*w[bi] + *w[bj]).normalized();
  Eigen::Vector4d a[4] = {w0, w1, w2, w3}, b[4] = {w0, w1, w2, w3};
  a[bj] = m;
  b[bi] = m;
  return spherical_tet_volume(a[0], a[1], a[2], a[3], depth + 1) +
         spherical_tet_volume(b[0], b[1], b[2], b[3], depth + 1);
}

}  // namespace

DegreeResult sphere_degree(const Mesh& sphere, const MatrixXd& values) {
  if (sphere.kind != "sphere") throw std::invalid_argument("sphere_degree: expected a sphere mesh");
  if (values.rows() != sphere.n_vertices())
    throw std::invalid_argument("sphere_degree: one value row per vertex required");
  if (values.cols() != sphere.top_dim + 1)
    throw std::invalid_argument("sphere_degree: values must map into the same sphere dimension");
  MatrixXd w = unit_rows(values);

  double total = 0.0;
  if (sphere.top_dim == 1) {
    for (int c = 0; c < sphere.n_cells(); ++c) {
      VectorXd a = w.row(sphere.cells(c, 0)), b = w.row(sphere.cells(c, 1));
      total += std::atan2(a[0] * b[1] - a[1] * b[0], a[0] * b[0] + a[1] * b[1]);
    }
    total /= 2.0 * M_PI;
  } else if (sphere.top_dim == 2) {
    for (int c = 0; c < sphere.n_cells(); ++c) {
      Eigen::Vector3d a = w.row(sphere.cells(c, 0)), b = w.row(sphere.cells(c, 1)),
                      d = w.row(sphere.cells(c, 2));
      double num = a.dot(b.cross(d));
      double den = 1.0 + a.dot(b) + b.dot(d) + d.dot(a);
      if (den <= 0.0) {
        std::ostringstream os;
        os << "sphere_degree: image of cell " << c << " spans a hemisphere; refine the mesh";
        throw resolution_error(os.str());
      }
      total += 2.0 * std::atan2(num, den);
    }
    total /= 4.0 * M_PI;
  } else if (sphere.top_dim == 3) {
    for (int c = 0; c < sphere.n_cells(); ++c)
      total += spherical_tet_volume(w.row(sphere.cells(c, 0)), w.row(sphere.cells(c, 1)),
                                    w.row(sphere.cells(c, 2)), w.row(sphere.cells(c, 3)), 0);
    total /= 2.0 * M_PI * M_PI;
  } else {
    throw std::invalid_argument("sphere_degree: only S^1, S^2 and S^3 meshes are supported");
  }

  DegreeResult r;
  r.raw = total;
  r.degree = round_with_tolerance(total, "sphere_degree");
  return r;
}

namespace {

struct FiberSegment {
  Eigen::Vector4d a, b;                // oriented a -> b
  std::array<int, 3> face_a, face_b;   // sorted global vertex ids of entry/exit faces
};

// preimage segments of the ray through q inside each tetrahedron; nullopt-like
// failure is reported through the ok flag so the caller can resample q
struct ExtractResult {
  bool ok = true;
  std::string why;
  std::vector<Polyline> loops;
};

ExtractResult extract_fibers(const Mesh& s3, const MatrixXd& w, const Eigen::Vector3d& q) {
  // tangent frame with u x v = q
  Eigen::Vector3d a = std::abs(q[0]) < 0.9 ? Eigen::Vector3d(1, 0, 0) : Eigen::Vector3d(0, 1, 0);
  Eigen::Vector3d u = a.cross(q).normalized();
  Eigen::Vector3d v = q.cross(u);

  std::map<int, FiberSegment> segs;
  ExtractResult res;
  for (int c = 0; c < s3.n_cells(); ++c) {
    Eigen::Vector4d fu, fv, fq;
    for (int j = 0; j < 4; ++j) {
      Eigen::Vector3d wv = w.row(s3.cells(c, j));
      fu[j] = wv.dot(u);
      fv[j] = wv.dot(v);
      fq[j] = wv.dot(q);
    }
    std::vector<std::pair<std::array<int, 3>, Eigen::Vector4d>> hits;
    static const int tri[4][3] = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
    for (const auto& t : tri) {
      int i = t[0], j = t[1], k = t[2];
      Eigen::Matrix2d A;
      A << fu[j] - fu[i], fu[k] - fu[i], fv[j] - fv[i], fv[k] - fv[i];
      if (std::abs(A.determinant()) < 1e-14) continue;
      Eigen::Vector2d st = A.inverse() * Eigen::Vector2d(-fu[i], -fv[i]);
      Eigen::Vector3d bc(1.0 - st[0] - st[1], st[0], st[1]);
      if ((bc.array() < -1e-12).any()) continue;
      Eigen::Vector4d wb = Eigen::Vector4d::Zero();
      wb[i] = bc[0];
      wb[j] = bc[1];
      wb[k] = bc[2];
      if (wb.dot(fq) <= 0.0) continue;
      std::array<int, 3> face = {s3.cells(c, i), s3.cells(c, j), s3.cells(c, k)};
      std::sort(face.begin(), face.end());
      hits.push_back({face, wb});
    }
    if (hits.empty()) continue;
    if (hits.size() != 2) {
      std::ostringstream os;
      os << "fiber grazes cell " << c << " (" << hits.size() << " face crossings)";
      res.ok = false;
      res.why = os.str();
      return res;
    }
    FiberSegment seg;
    auto position = [&](const Eigen::Vector4d& wb) {
      Eigen::Vector4d p = Eigen::Vector4d::Zero();
      for (int j = 0; j < 4; ++j) p += wb[j] * s3.vertices.row(s3.cells(c, j)).transpose();
      return p;
    };
    seg.a = position(hits[0].second);
    seg.b = position(hits[1].second);
    seg.face_a = hits[0].first;
    seg.face_b = hits[1].first;
    // orient along grad(f.u) x grad(f.v) pushed to ambient coordinates
    Eigen::Vector3d gu(fu[1] - fu[0], fu[2] - fu[0], fu[3] - fu[0]);
    Eigen::Vector3d gv(fv[1] - fv[0], fv[2] - fv[0], fv[3] - fv[0]);
    Eigen::Vector3d t3 = gu.cross(gv);
    Eigen::Matrix<double, 3, 4> E;
    for (int j = 0; j < 3; ++j)
      E.row(j) = s3.vertices.row(s3.cells(c, j + 1)) - s3.vertices.row(s3.cells(c, 0));
    Eigen::Vector4d tdir = E.transpose() * t3;
    if ((seg.b - seg.a).dot(tdir) < 0.0) {
      std::swap(seg.a, seg.b);
      std::swap(seg.face_a, seg.face_b);
    }
    segs[c] = seg;
  }

  // chain across shared faces
  std::map<std::array<int, 3>, std::vector<int>> byface;
  for (const auto& [c, s] : segs) {
    byface[s.face_a].push_back(c);
    byface[s.face_b].push_back(c);
  }
  std::set<int> unused;
  for (const auto& [c, s] : segs) unused.insert(c);
  while (!unused.empty()) {
    int start = *unused.begin();
    unused.erase(unused.begin());
    const FiberSegment& s0 = segs[start];
    Polyline loop;
    loop.points.push_back(s0.a);
    loop.points.push_back(s0.b);
    std::array<int, 3> exit = s0.face_b;
    int cur = start;
    while (true) {
      int next = -1;
      for (int cand : byface[exit])
        if (cand != cur && unused.count(cand)) next = cand;
      if (next < 0) break;
      unused.erase(next);
      const FiberSegment& sn = segs[next];
      if (sn.face_a == exit) {
        loop.points.push_back(sn.b);
        exit = sn.face_b;
      } else {
        loop.points.push_back(sn.a);
        exit = sn.face_a;
      }
      cur = next;
    }
    bool closed = (loop.points.back() - loop.points.front()).norm() < 1e-9;
    if (!closed) {
      std::ostringstream os;
      os << "open fiber chain breaking at face {" << exit[0] << "," << exit[1] << "," << exit[2]
         << "}";
      res.ok = false;
      res.why = os.str();
      return res;
    }
    loop.points.pop_back();  // drop the duplicated closing point
    loop.closed = true;
    if (loop.points.size() < 3) {
      res.ok = false;
      res.why = "degenerate fiber loop with fewer than 3 segments";
      return res;
    }
    res.loops.push_back(std::move(loop));
  }
  return res;
}

}  // namespace

std::vector<Polyline> preimage_fiber(const Mesh& s3, const MatrixXd& values,
                                     const Eigen::Vector3d& q, Eigen::Vector3d* q_used) {
  if (s3.kind != "sphere" || s3.top_dim != 3)
    throw std::invalid_argument("preimage_fiber: expected a tetrahedral sphere mesh");
  if (values.rows() != s3.n_vertices() || values.cols() != 3)
    throw std::invalid_argument("preimage_fiber: values must be V x 3");
  if (q.norm() < 1e-12) throw std::invalid_argument("preimage_fiber: zero regular value");
  MatrixXd w = unit_rows(values);

  // image chords of the mesh 1-skeleton, for the regular-value margin test
  std::set<std::pair<int, int>> edges;
  for (int c = 0; c < s3.n_cells(); ++c)
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        edges.insert(std::minmax(s3.cells(c, i), s3.cells(c, j)));
  double mean_edge = 0.0;
  for (auto [i, j] : edges) mean_edge += (w.row(i) - w.row(j)).norm();
  mean_edge /= static_cast<double>(edges.size());
  const double margin = std::max(1e-4, 0.05 * mean_edge);

  auto skeleton_clearance = [&](const Eigen::Vector3d& cand) {
    double best = std::numeric_limits<double>::infinity();
    MatrixXd rows(2, 3);
    for (auto [i, j] : edges) {
      rows.row(0) = w.row(i);
      rows.row(1) = w.row(j);
      best = std::min(best, point_simplex_distance(cand, rows));
      if (best < margin) return best;
    }
    return best;
  };

  std::string last_failure = "no admissible regular value tried";
  Eigen::Vector3d qn = q.normalized();
  for (int attempt = 0; attempt < 200; ++attempt) {
    Eigen::Vector3d cand =
        attempt == 0 ? qn
                     : Eigen::Vector3d((qn + margin * (1.5 + 0.05 * attempt) *
                                                 Eigen::Vector3d(halton_sphere_point(attempt, 3)))
                                           .normalized());
    if (skeleton_clearance(cand) < margin) {
      last_failure = "candidate too close to the image of the mesh 1-skeleton";
      continue;
    }
    ExtractResult res = extract_fibers(s3, w, cand);
    if (!res.ok) {
      last_failure = res.why;
      continue;
    }
    if (q_used) *q_used = cand;
    return res.loops;
  }
  throw resolution_error("preimage_fiber: " + last_failure +
                         "; perturb the regular value or refine the mesh");
}

namespace {

// exact solid-angle linking contribution of one segment pair
double segment_pair_link(const Eigen::Vector3d& a1, const Eigen::Vector3d& a2,
                         const Eigen::Vector3d& b1, const Eigen::Vector3d& b2) {
  Eigen::Vector3d r[4] = {b1 - a1, b1 - a2, b2 - a2, b2 - a1};
  Eigen::Vector3d cr[4] = {r[0].cross(r[3]), r[3].cross(r[2]), r[2].cross(r[1]),
                           r[1].cross(r[0])};
  Eigen::Vector3d n[4];
  for (int k = 0; k < 4; ++k) {
    double ln = cr[k].norm();
    if (ln < 1e-15) return 0.0;  // coplanar pair subtends no signed area
    n[k] = cr[k] / ln;
  }
  double s = 0.0;
  for (int k = 0; k < 4; ++k)
    s += std::asin(std::clamp(n[k].dot(n[(k + 1) % 4]), -1.0, 1.0));
  // sign follows the standard double-integral convention (a - b) . (ta x tb)
  double sign = (a2 - a1).cross(b2 - b1).dot(a1 - b1) >= 0.0 ? 1.0 : -1.0;
  return s * sign / (4.0 * M_PI);
}

void check_loop(const Polyline& p, const char* who) {
  if (!p.closed) throw std::invalid_argument(std::string(who) + ": polyline must be closed");
  if (p.points.size() < 3)
    throw std::invalid_argument(std::string(who) + ": closed polyline needs at least 3 segments");
  for (const auto& pt : p.points)
    if (pt.size() != 3)
      throw std::invalid_argument(std::string(who) + ": points must lie in R^3");
}

}  // namespace

LinkResult linking_number(const Polyline& a, const Polyline& b) {
  check_loop(a, "linking_number");
  check_loop(b, "linking_number");
  double total = 0.0;
  const auto na = a.points.size(), nb = b.points.size();
  for (size_t i = 0; i < na; ++i)
    for (size_t j = 0; j < nb; ++j)
      total += segment_pair_link(a.points[i], a.points[(i + 1) % na], b.points[j],
                                 b.points[(j + 1) % nb]);
  LinkResult r;
  r.raw = total;
  r.link = round_with_tolerance(total, "linking_number");
  return r;
}

namespace {

// orientation-preserving rotation taking w to the north pole e4, so the chart
// never mirrors the configuration and linking signs carry over unchanged; the
// standard quadratic fibration then comes out at +1
Eigen::Matrix4d rotation_to_north(const Eigen::Vector4d& w) {
  Eigen::Vector4d e = Eigen::Vector4d::Unit(3);
  double c = 1.0 + w.dot(e);
  if (c < 1e-9) {
    Eigen::Matrix4d R = Eigen::Matrix4d::Identity();
    R(0, 0) = -1.0;
    R(3, 3) = -1.0;  // half-turn in the x-w plane sends -e4 to e4
    return R;
  }
  Eigen::Vector4d s = w + e;
  return Eigen::Matrix4d::Identity() - s * s.transpose() / c + 2.0 * e * w.transpose();
}

Polyline stereographic(const Polyline& loop, const Eigen::Matrix4d& R) {
  Polyline out;
  out.closed = loop.closed;
  for (const auto& p : loop.points) {
    Eigen::Vector4d r = R * p;
    out.points.push_back(Eigen::Vector3d(r.head<3>() / (1.0 - r[3])));
  }
  return out;
}

}  // namespace

HopfResult hopf_invariant(const Mesh& s3, const MatrixXd& values) {
  HopfResult h;
  Eigen::Vector3d q0(0.3, 0.55, 0.8);
  q0.normalize();
  std::vector<Polyline> fa = preimage_fiber(s3, values, q0, &h.q_plus);
  std::vector<Polyline> fb = preimage_fiber(s3, values, -h.q_plus, &h.q_minus);
  if (fa.empty() || fb.empty()) {
    h.invariant = 0;
    h.raw = 0.0;
    return h;
  }

  // stereographic pole: the mesh vertex farthest from every fiber point
  double best = -1.0;
  Eigen::Vector4d pole = Eigen::Vector4d::Unit(3);
  for (int i = 0; i < s3.n_vertices(); ++i) {
    Eigen::Vector4d v = s3.vertices.row(i);
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto* fam : {&fa, &fb})
      for (const auto& loop : *fam)
        for (const auto& p : loop.points) nearest = std::min(nearest, (v - Eigen::Vector4d(p)).norm());
    if (nearest > best) {
      best = nearest;
      pole = v;
    }
  }
  Eigen::Matrix4d R = rotation_to_north(pole);

  double total = 0.0;
  for (const auto& la : fa) {
    Polyline pa = stereographic(la, R);
    for (const auto& lb : fb) total += linking_number(pa, stereographic(lb, R)).raw;
  }
  h.raw = total;
  h.invariant = round_with_tolerance(total, "hopf_invariant");
  return h;
}

std::pair<double, int> min_norm_locus(const GraphFunction& F, bool interior_only) {
  const Mesh& m = *F.mesh;
  double best = std::numeric_limits<double>::infinity();
  int arg = -1;
  for (int i = 0; i < m.n_vertices(); ++i) {
    if (interior_only && m.vertex_on_boundary[i]) continue;
    double n = F.values.row(i).norm();
    if (n < best) {
      best = n;
      arg = i;
    }
  }
  if (arg < 0) throw std::invalid_argument("min_norm_locus: no vertices to scan");
  return {best, arg};
}

Containment neighborhood_containment(const GraphFunction& F, const MatrixXd& cloud, double eps) {
  if (cloud.rows() == 0) throw std::invalid_argument("neighborhood_containment: empty sample cloud");
  if (cloud.cols() != F.target_dim)
    throw std::invalid_argument("neighborhood_containment: cloud dimension mismatch");
  Containment c;
  for (int i = 0; i < F.mesh->n_vertices(); ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (int j = 0; j < cloud.rows(); ++j)
      nearest = std::min(nearest, (F.values.row(i) - cloud.row(j)).norm());
    if (nearest > c.max_dist) {
      c.max_dist = nearest;
      c.witness = i;
    }
  }
  c.contained = c.max_dist <= eps;
  return c;
}

}  // namespace mss
