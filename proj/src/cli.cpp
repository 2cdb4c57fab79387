#include "mss/cli.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mss/boundary_data.hpp"
#include "mss/bounds.hpp"
#include "mss/errors.hpp"
#include "mss/geometry.hpp"
#include "mss/mesh.hpp"
#include "mss/report.hpp"
#include "mss/solver.hpp"
#include "mss/topology.hpp"

namespace mss {

namespace {

std::string sub_path(const std::string& dir, const char* name) {
  return (std::filesystem::path(dir) / name).string();
}

std::vector<double> linspace(double a, double b, int count) {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) v[i] = a + (b - a) * i / (count - 1);
  return v;
}

// SolveResult without the wall time, which would break report reproducibility
Json solve_json(const SolveResult& r) {
  Json j;
  j["R"] = r.R;
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["final_gradient_norm"] = r.final_gradient_norm;
  j["mass"] = r.mass;
  j["lipschitz"] = r.lipschitz;
  j["min_norm_interior"] = r.min_norm_interior;
  j["blown_up"] = r.blown_up;
  return j;
}

Json cert_json(const CertBundle& c) {
  Json j;
  j["measured_mass"] = c.measured_mass;
  j["upper_quadrature"] = c.upper_quadrature;
  j["upper_curve"] = c.upper_curve;
  j["lower_curve"] = c.lower_curve;
  j["mass_within_upper"] = c.mass_within_upper;
  j["min_norm"] = c.min_norm;
  j["degenerate"] = c.degenerate;
  return j;
}

struct BoundsParams {
  std::string map = "hopf3", domain = "ball", out = "msslab_out";
  // level 4 keeps the volume quadrature under one percent on S^3
  int n = 3, l = -1, level = 4, samples = 2000, grid_points = 33;
  double epsilon0 = 0.0, V = 0.0;
  bool plot = false;
};

int run_bounds(const BoundsParams& p) {
  Json config{{"map", p.map},         {"domain", p.domain},   {"n", p.n},
              {"l", p.l},             {"level", p.level},     {"samples", p.samples},
              {"grid_points", p.grid_points}, {"epsilon0", p.epsilon0}, {"V", p.V},
              {"out", p.out},         {"plot", p.plot}};
  BoundsReport rep;
  Json results;
  if (p.domain == "ball") {
    BoundaryMap map = make_map(p.map);
    if (map.domain_dim != p.n)
      throw std::invalid_argument("bounds: map " + p.map + " lives on a sphere of dimension " +
                                  std::to_string(map.domain_dim));
    // fibration data sweep out volume like R^(image dimension): the fiber
    // directions collapse, so the lifted graph grows with rank(d eta) only
    int l = p.l >= 0 ? p.l : map.image_dim;
    double V = p.V > 0.0 ? p.V : graph_volume(map, sphere_mesh(p.n, p.level));
    double eps = p.epsilon0 > 0.0 ? p.epsilon0 : reach_estimate(map, 1000);
    double R_star = nonexistence_threshold(p.n, l, V, eps);
    rep = make_bounds_report(p.n, l, V, eps, linspace(0.0, 1.25 * R_star, p.grid_points));
    results["V_quadrature"] = p.V <= 0.0;
  } else if (p.domain == "annulus") {
    if (p.map != "annulus:hopf12")
      throw std::invalid_argument("bounds: the annulus domain needs --map annulus:hopf12");
    BoundaryMap inner = make_map("hopf3");
    BoundaryMap outer = scale_map(inner, 2.0);
    Mesh s3 = sphere_mesh(3, p.level);
    double V_total = graph_volume(inner, s3) + graph_volume(outer, s3, 2.0);
    double d = image_distance(inner, outer, p.samples);
    int l = p.l >= 0 ? p.l : inner.image_dim;
    double R_star = annulus_threshold(p.n, l, V_total, d, outer.image_radius);
    // the annulus crossing is the disk crossing with the substituted volume
    // and witness radius, so the report machinery is reused as is
    rep = make_bounds_report(p.n, l, outer.image_radius * V_total, 0.5 * d,
                             linspace(0.0, 1.25 * R_star, p.grid_points), "annulus");
    results["V_total"] = V_total;
    results["d"] = d;
    results["outer_radius"] = outer.image_radius;
  } else {
    throw std::invalid_argument("bounds: unknown domain '" + p.domain + "'");
  }

  results["n"] = rep.n;
  results["l"] = rep.l;
  results["V_eta"] = rep.V_eta;
  results["epsilon0"] = rep.epsilon0;
  results["omega"] = rep.omega;
  results["R_star"] = rep.R_star;
  results["crossing_below_one"] = rep.crossing_below_one;
  results["regime"] = rep.regime;
  results["R_grid"] = rep.R_grid;
  results["upper"] = rep.upper;
  results["lower"] = rep.lower;
  write_report(config, results, "bounds", sub_path(p.out, "report.json"));

  std::vector<std::vector<double>> rows;
  for (size_t i = 0; i < rep.R_grid.size(); ++i)
    rows.push_back({rep.R_grid[i], rep.upper[i], rep.lower[i]});
  write_csv({"R", "upper", "lower"}, rows, sub_path(p.out, "bounds_curves.csv"));
  if (p.plot)
    write_svg_plot({{"upper U(R)", rep.R_grid, rep.upper}, {"lower L(R)", rep.R_grid, rep.lower}},
                   "mass bound crossing, R* = " + std::to_string(rep.R_star),
                   sub_path(p.out, "plot.svg"));
  std::cout << "bounds: R_star " << rep.R_star << ", report in " << p.out << "\n";
  return 0;
}

struct SolveParams {
  std::string map = "hopf3", init = "radial", out = "msslab_out";
  int dim = 4, shells = 4, level = 2, max_iter = 20000, vlevel = 3;
  double R = 0.2, radius = 1.0, tol = 1e-6, blowup = 1e3;
  bool trace = false, plot = false;
  std::vector<double> schedule;  // continue only
};

Json solve_config(const SolveParams& p, bool with_schedule) {
  Json config{{"map", p.map},       {"init", p.init},   {"dim", p.dim},
              {"shells", p.shells}, {"level", p.level}, {"max_iterations", p.max_iter},
              {"vlevel", p.vlevel}, {"radius", p.radius}, {"tol", p.tol},
              {"blowup", p.blowup}, {"trace", p.trace}, {"out", p.out},
              {"plot", p.plot}};
  if (with_schedule)
    config["schedule"] = p.schedule;
  else
    config["R"] = p.R;
  return config;
}

void check_solve_setup(const SolveParams& p, const BoundaryMap& map) {
  if (map.domain_dim != p.dim - 1)
    throw std::invalid_argument("solve: map " + p.map + " pairs with a ball of dimension " +
                                std::to_string(map.domain_dim + 1));
  if (p.init != "radial" && p.init != "zero")
    throw std::invalid_argument("solve: init must be radial or zero");
}

SolverOptions solver_options(const SolveParams& p) {
  SolverOptions opts;
  opts.grad_tol = p.tol;
  opts.max_iterations = p.max_iter;
  opts.blowup_threshold = p.blowup;
  opts.record_trace = p.trace;
  return opts;
}

int run_solve(const SolveParams& p) {
  BoundaryMap map = make_map(p.map);
  check_solve_setup(p, map);
  Mesh mesh = ball_mesh(p.dim, p.radius, p.shells, p.level);
  MinimizeOutput out = minimize(mesh, map, p.R, p.init == "zero" ? Init::zero : Init::radial,
                                solver_options(p));

  double V = graph_volume(map, sphere_mesh(p.dim - 1, p.vlevel));
  double eps = reach_estimate(map, 1000);
  BoundsReport rep = make_bounds_report(p.dim - 1, map.image_dim, V, eps, {p.R});
  CertBundle cert = certify(out.F, rep, p.R);

  Json results;
  results["solve"] = solve_json(out.result);
  results["certificate"] = cert_json(cert);
  results["cells"] = mesh.n_cells();
  results["vertices"] = mesh.n_vertices();
  write_report(solve_config(p, false), results, "solve", sub_path(p.out, "report.json"));

  if (p.trace) {
    std::vector<std::vector<double>> rows;
    for (auto& t : out.trace) rows.push_back({t[0], t[1], t[2]});
    write_csv({"iteration", "energy", "gradient_norm"}, rows, sub_path(p.out, "trace.csv"));
    if (p.plot) {
      PlotSeries s{"gradient norm", {}, {}};
      for (auto& t : out.trace) {
        s.x.push_back(t[0]);
        s.y.push_back(t[2]);
      }
      write_svg_plot({s}, "solve convergence", sub_path(p.out, "plot.svg"), true);
    }
  }
  std::cout << "solve: mass " << out.result.mass << ", converged " << out.result.converged
            << ", report in " << p.out << "\n";
  if (!out.result.converged) {
    std::cerr << "numerical: solve did not converge in " << out.result.iterations
              << " iterations\n";
    return 3;
  }
  return 0;
}

int run_continue(const SolveParams& p) {
  BoundaryMap map = make_map(p.map);
  check_solve_setup(p, map);
  if (p.schedule.empty()) throw std::invalid_argument("continue: empty schedule");
  Mesh mesh = ball_mesh(p.dim, p.radius, p.shells, p.level);
  auto outs = continuation(mesh, map, p.schedule, solver_options(p));

  double V = graph_volume(map, sphere_mesh(p.dim - 1, p.vlevel));
  double eps = reach_estimate(map, 1000);
  BoundsReport rep = make_bounds_report(p.dim - 1, map.image_dim, V, eps, p.schedule);

  Json records = Json::array();
  std::vector<std::vector<double>> rows;
  int first_failure = -1;
  for (size_t i = 0; i < outs.size(); ++i) {
    const SolveResult& r = outs[i].result;
    Json rec = solve_json(r);
    rec["upper"] = rep.upper[i];
    rec["lower"] = rep.lower[i];
    // a converged state under the lower curve that still carries a near-zero
    // interior point (the witness the lower bound needs) cannot be a faithful
    // solution; mark it so the mesh level gets a second look
    rec["flagged_artifact"] = r.converged && r.mass < rep.lower[i] && r.mass <= rep.upper[i] &&
                              r.min_norm_interior < 0.1 * r.R;
    records.push_back(rec);
    rows.push_back({r.R, r.mass, double(r.converged), double(r.iterations),
                    r.final_gradient_norm, r.lipschitz, rep.upper[i], rep.lower[i]});
    if (first_failure < 0 && (!r.converged || r.blown_up)) first_failure = int(i);
  }
  Json results;
  results["R_star"] = rep.R_star;
  results["first_failure"] = first_failure;
  results["solves"] = records;
  write_report(solve_config(p, true), results, "continue", sub_path(p.out, "report.json"));
  write_csv({"R", "mass", "converged", "iterations", "gradient_norm", "lipschitz", "upper",
             "lower"},
            rows, sub_path(p.out, "continue.csv"));
  if (p.plot) {
    PlotSeries mass{"mass", p.schedule, {}}, upper{"U(R)", p.schedule, rep.upper};
    for (auto& o : outs) mass.y.push_back(o.result.mass);
    write_svg_plot({mass, upper}, "continuation masses", sub_path(p.out, "plot.svg"));
  }
  std::cout << "continue: " << outs.size() << " solves, first failure " << first_failure
            << ", report in " << p.out << "\n";
  return 0;
}

struct InvariantParams {
  std::string map = "hopf3", kind = "hopf", out = "msslab_out";
  int n = 2, level = 3;
};

int run_invariant(const InvariantParams& p) {
  Json config{{"map", p.map}, {"kind", p.kind}, {"n", p.n}, {"level", p.level}, {"out", p.out}};
  Json results;
  if (p.kind == "hopf") {
    BoundaryMap map = make_map(p.map);
    if (map.domain_dim != 3 || map.target_dim != 3)
      throw std::invalid_argument("invariant: the hopf kind needs a map from S^3 to S^2");
    Mesh s3 = sphere_mesh(3, p.level);
    MatrixXd values(s3.n_vertices(), 3);
    for (int i = 0; i < s3.n_vertices(); ++i)
      values.row(i) = map.eval(s3.vertices.row(i).transpose()).transpose();
    HopfResult h = hopf_invariant(s3, values);
    results["hopf_invariant"] = h.invariant;
    results["raw"] = h.raw;
    results["q_plus"] = {h.q_plus(0), h.q_plus(1), h.q_plus(2)};
    results["q_minus"] = {h.q_minus(0), h.q_minus(1), h.q_minus(2)};
  } else if (p.kind == "degree") {
    // self-map fixtures by name: identity, antipodal, power:k on the circle
    Mesh sphere = sphere_mesh(p.n, p.level);
    MatrixXd values;
    if (p.map == "identity") {
      values = sphere.vertices;
    } else if (p.map == "antipodal") {
      values = -sphere.vertices;
    } else if (p.map.rfind("power:", 0) == 0) {
      if (p.n != 1) throw std::invalid_argument("invariant: power maps live on the circle");
      int k = std::stoi(p.map.substr(6));
      values.resize(sphere.n_vertices(), 2);
      for (int i = 0; i < sphere.n_vertices(); ++i) {
        double a = k * std::atan2(sphere.vertices(i, 1), sphere.vertices(i, 0));
        values.row(i) << std::cos(a), std::sin(a);
      }
    } else {
      throw std::invalid_argument("invariant: unknown degree fixture '" + p.map + "'");
    }
    DegreeResult d = sphere_degree(sphere, values);
    results["degree"] = d.degree;
    results["raw"] = d.raw;
  } else {
    throw std::invalid_argument("invariant: kind must be hopf or degree");
  }
  write_report(config, results, "invariant", sub_path(p.out, "report.json"));
  std::cout << "invariant: " << results.begin().value() << ", report in " << p.out << "\n";
  return 0;
}

struct DensityParams {
  std::string fixture = "zsquare", out = "msslab_out";
  // 8 shells keep the first vertex ring at 0.125: the interpolant is a cone
  // below that ring, and its apex density pollutes smaller probe radii
  int dim = 2, shells = 8, level = 4, samples = 64;
  double R = 0.2, slack = 0.02;
  std::uint64_t seed = 2026;
  std::vector<double> radii;
  bool plot = false;
};

int run_density(const DensityParams& p) {
  std::vector<double> radii = p.radii.empty() ? linspace(0.1, 0.8, 8) : p.radii;
  Json config{{"fixture", p.fixture}, {"dim", p.dim},   {"shells", p.shells},
              {"level", p.level},     {"samples", p.samples}, {"R", p.R},
              {"slack", p.slack},     {"seed", p.seed}, {"radii", radii},
              {"out", p.out},         {"plot", p.plot}};

  Mesh mesh;
  GraphFunction F;
  if (p.fixture == "flat") {
    mesh = ball_mesh(p.dim, 1.0, p.shells, p.level);
    F = zero_graph(mesh, 2);
  } else if (p.fixture == "zsquare") {
    mesh = ball_mesh(2, 1.0, p.shells, p.level);
    F = sample_graph(mesh, 2, [](const VectorXd& x) {
      VectorXd y(2);
      y << x(0) * x(0) - x(1) * x(1), 2.0 * x(0) * x(1);
      return y;
    });
  } else if (p.fixture == "hopf-solve") {
    mesh = ball_mesh(4, 1.0, p.shells, 2);
    SolverOptions opts;
    opts.grad_tol = 1e-6;
    F = minimize(mesh, make_map("hopf3"), p.R, Init::radial, opts).F;
  } else {
    throw std::invalid_argument("density: unknown fixture '" + p.fixture + "'");
  }

  DensityProfile prof =
      density_profile(F, VectorXd::Zero(F.mesh->ambient_dim), radii, p.samples, p.seed);
  bool monotone = true;
  for (size_t i = 0; i + 1 < prof.theta.size(); ++i)
    if (prof.theta[i + 1] < prof.theta[i] - p.slack) monotone = false;

  Json results;
  results["center"] = std::vector<double>(prof.center.data(),
                                          prof.center.data() + prof.center.size());
  results["radii"] = prof.radii;
  results["mass_in_ball"] = prof.mass_in_ball;
  results["theta"] = prof.theta;
  results["theta_first"] = prof.theta.front();
  results["theta_last"] = prof.theta.back();
  results["monotone_within_slack"] = monotone;
  write_report(config, results, "density", sub_path(p.out, "report.json"));

  std::vector<std::vector<double>> rows;
  for (size_t i = 0; i < prof.radii.size(); ++i)
    rows.push_back({prof.radii[i], prof.mass_in_ball[i], prof.theta[i]});
  write_csv({"radius", "mass_in_ball", "theta"}, rows, sub_path(p.out, "density.csv"));
  if (p.plot)
    write_svg_plot({{"theta(d)", prof.radii, prof.theta}}, "density ratio profile",
                   sub_path(p.out, "plot.svg"));
  std::cout << "density: theta spans [" << prof.theta.front() << ", " << prof.theta.back()
            << "], report in " << p.out << "\n";
  return 0;
}

struct MassCheckParams {
  std::string fixture = "zsquare", out = "msslab_out";
  int dim = 2, shells = 4, level = 4;
  double gap_tol = 0.02;
};

int run_mass_check(const MassCheckParams& p) {
  Json config{{"fixture", p.fixture}, {"dim", p.dim},       {"shells", p.shells},
              {"level", p.level},     {"gap_tol", p.gap_tol}, {"out", p.out}};
  GraphFunction F;
  Mesh mesh;
  double reference = 0.0;
  if (p.fixture == "zsquare") {
    mesh = ball_mesh(2, 1.0, p.shells, p.level);
    F = sample_graph(mesh, 2, [](const VectorXd& x) {
      VectorXd y(2);
      y << x(0) * x(0) - x(1) * x(1), 2.0 * x(0) * x(1);
      return y;
    });
    reference = 3.0 * M_PI;  // area of the graph of z^2 over the unit disk
  } else if (p.fixture == "flat") {
    mesh = ball_mesh(p.dim, 1.0, p.shells, p.level);
    F = zero_graph(mesh, 2);
    reference = unit_ball_volume(p.dim);
  } else {
    throw std::invalid_argument("mass-check: unknown fixture '" + p.fixture + "'");
  }

  double direct = graph_mass(F);
  double boundary = boundary_mass_integral(F);
  double rel_direct = std::abs(direct - reference) / reference;
  double rel_boundary = std::abs(boundary - reference) / reference;
  double rel_gap = std::abs(direct - boundary) / direct;
  bool ok = rel_direct <= p.gap_tol && rel_boundary <= p.gap_tol && rel_gap <= p.gap_tol;

  Json results{{"direct_mass", direct},     {"boundary_mass", boundary},
               {"reference", reference},    {"rel_direct", rel_direct},
               {"rel_boundary", rel_boundary}, {"rel_gap", rel_gap},
               {"ok", ok}};
  write_report(config, results, "mass-check", sub_path(p.out, "report.json"));
  std::cout << "mass-check: direct " << direct << ", boundary " << boundary << ", reference "
            << reference << ", report in " << p.out << "\n";
  if (!ok) {
    std::cerr << "numerical: mass agreement outside tolerance " << p.gap_tol << "\n";
    return 3;
  }
  return 0;
}

struct ConeScanParams {
  std::string map = "hopf3", out = "msslab_out";
  int shells = 4, level = 2;
  double inner = 0.5, outer = 1.0;
  std::vector<double> grid;
  bool plot = false;
};

int run_cone_scan(const ConeScanParams& p) {
  std::vector<double> grid = p.grid.empty()
                                 ? std::vector<double>{0.2, 0.3, 0.4, 0.5,  0.6, 0.7, 0.75,
                                                       0.8, 0.841, 0.9, 0.95, 1.0, 1.1, 1.2}
                                 : p.grid;
  Json config{{"map", p.map},     {"shells", p.shells}, {"level", p.level},
              {"inner", p.inner}, {"outer", p.outer},   {"theta_grid", grid},
              {"out", p.out},     {"plot", p.plot}};
  BoundaryMap map = make_map(p.map);
  Mesh ann = annulus_mesh(map.domain_dim + 1, p.inner, p.outer, p.shells, p.level);
  ConeScan scan = cone_scan(map, grid, ann);

  Json results;
  results["theta_grid"] = scan.theta_grid;
  Json pairs = Json::array();
  std::vector<std::vector<double>> rows;
  for (size_t i = 0; i < scan.residuals.size(); ++i) {
    pairs.push_back({scan.residuals[i].first, scan.residuals[i].second});
    rows.push_back({grid[i], scan.residuals[i].first, scan.residuals[i].second});
  }
  results["residuals"] = pairs;
  results["theta_star"] = scan.theta_star;
  results["aggregation"] = scan.aggregation;
  write_report(config, results, "cone-scan", sub_path(p.out, "report.json"));
  write_csv({"theta", "rms_domain", "rms_range"}, rows, sub_path(p.out, "cone_scan.csv"));
  if (p.plot) {
    PlotSeries dom{"rms domain", grid, {}}, rng{"rms range", grid, {}};
    for (auto& [d, r] : scan.residuals) {
      dom.y.push_back(d);
      rng.y.push_back(r);
    }
    write_svg_plot({dom, rng}, "cone residual scan", sub_path(p.out, "plot.svg"), true);
  }
  std::cout << "cone-scan: theta_star " << scan.theta_star << ", report in " << p.out << "\n";
  return 0;
}

struct ReachParams {
  std::string map = "hopf3", out = "msslab_out";
  int samples = 2000;
};

int run_reach(const ReachParams& p) {
  Json config{{"map", p.map}, {"samples", p.samples}, {"out", p.out}};
  BoundaryMap map = make_map(p.map);
  double reach = reach_estimate(map, p.samples);
  Json results{{"reach", reach},
               {"image_radius", map.image_radius},
               {"sphere_valued", map.sphere_valued()},
               {"image_dim", map.image_dim}};
  write_report(config, results, "reach", sub_path(p.out, "report.json"));
  std::cout << "reach: " << reach << ", report in " << p.out << "\n";
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"minimal surface graph laboratory"};
  // the config option lives on the root app (subcommand config files are
  // never read back); fallthrough below lets it sit after the subcommand too
  app.set_config("--config", "", "read options from a TOML file ([subcommand] sections; flags win)");
  app.require_subcommand(1);

  BoundsParams bp;
  auto* bounds = app.add_subcommand("bounds", "mass bound curves and the crossing threshold");
  bounds->add_option("--map", bp.map, "boundary map id");
  bounds->add_option("--domain", bp.domain, "ball or annulus");
  bounds->add_option("--n", bp.n, "boundary sphere dimension");
  bounds->add_option("--l", bp.l, "data homogeneity degree (-1 picks the domain default)");
  bounds->add_option("--level", bp.level, "quadrature sphere refinement");
  bounds->add_option("--epsilon0", bp.epsilon0, "image reach override (0 = estimate)");
  bounds->add_option("--V", bp.V, "graph volume override (0 = quadrature)");
  bounds->add_option("--samples", bp.samples, "image distance samples");
  bounds->add_option("--grid-points", bp.grid_points, "curve grid resolution");
  bounds->add_option("--out", bp.out, "output directory");
  bounds->add_flag("--plot", bp.plot, "emit plot.svg");

  SolveParams sp;
  auto* solve = app.add_subcommand("solve", "minimize graph area at one boundary scale");
  auto add_solve_options = [](CLI::App* cmd, SolveParams& q) {
    cmd->add_option("--map", q.map, "boundary map id");
    cmd->add_option("--dim", q.dim, "ball dimension");
    cmd->add_option("--radius", q.radius, "ball radius");
    cmd->add_option("--shells", q.shells, "radial shells");
    cmd->add_option("--level", q.level, "angular refinement");
    cmd->add_option("--init", q.init, "radial or zero");
    cmd->add_option("--tol", q.tol, "gradient tolerance");
    cmd->add_option("--max-iter", q.max_iter, "iteration cap");
    cmd->add_option("--blowup", q.blowup, "lipschitz blow-up threshold");
    cmd->add_option("--vlevel", q.vlevel, "bound quadrature level");
    cmd->add_option("--out", q.out, "output directory");
    cmd->add_flag("--trace", q.trace, "write trace.csv");
    cmd->add_flag("--plot", q.plot, "emit plot.svg");
  };
  add_solve_options(solve, sp);
  solve->add_option("--R", sp.R, "boundary data scale");

  SolveParams cp;
  auto* cont = app.add_subcommand("continue", "warm-started solves over an R schedule");
  add_solve_options(cont, cp);
  cont->add_option("--schedule", cp.schedule, "increasing R values")->delimiter(',');

  InvariantParams ip;
  auto* invariant = app.add_subcommand("invariant", "degree and Hopf invariant of sphere maps");
  invariant->add_option("--map", ip.map, "hopf3, identity, antipodal or power:k");
  invariant->add_option("--kind", ip.kind, "hopf or degree");
  invariant->add_option("--n", ip.n, "sphere dimension for degree fixtures");
  invariant->add_option("--level", ip.level, "sphere refinement");
  invariant->add_option("--out", ip.out, "output directory");

  DensityParams dp;
  auto* density = app.add_subcommand("density", "mass density ratio around a graph point");
  density->add_option("--fixture", dp.fixture, "flat, zsquare or hopf-solve");
  density->add_option("--dim", dp.dim, "flat fixture dimension");
  density->add_option("--shells", dp.shells, "radial shells");
  density->add_option("--level", dp.level, "angular refinement");
  density->add_option("--R", dp.R, "hopf-solve boundary scale");
  density->add_option("--radii", dp.radii, "profile radii")->delimiter(',');
  density->add_option("--samples", dp.samples, "per-cell subsamples");
  density->add_option("--seed", dp.seed, "subsample seed");
  density->add_option("--slack", dp.slack, "monotonicity slack");
  density->add_option("--out", dp.out, "output directory");
  density->add_flag("--plot", dp.plot, "emit plot.svg");

  MassCheckParams mp;
  auto* mass_check = app.add_subcommand("mass-check", "direct vs boundary-integral mass");
  mass_check->add_option("--fixture", mp.fixture, "zsquare or flat");
  mass_check->add_option("--dim", mp.dim, "flat fixture dimension");
  mass_check->add_option("--shells", mp.shells, "radial shells");
  mass_check->add_option("--level", mp.level, "angular refinement");
  mass_check->add_option("--gap-tol", mp.gap_tol, "relative tolerance");
  mass_check->add_option("--out", mp.out, "output directory");

  ConeScanParams kp;
  auto* cone = app.add_subcommand("cone-scan", "cone candidate residuals over a theta grid");
  cone->add_option("--map", kp.map, "sphere-valued boundary map id");
  cone->add_option("--theta-grid", kp.grid, "angles in (0, pi/2)")->delimiter(',');
  cone->add_option("--inner", kp.inner, "annulus inner radius");
  cone->add_option("--outer", kp.outer, "annulus outer radius");
  cone->add_option("--shells", kp.shells, "radial shells");
  cone->add_option("--level", kp.level, "angular refinement");
  cone->add_option("--out", kp.out, "output directory");
  cone->add_flag("--plot", kp.plot, "emit plot.svg");

  ReachParams rp;
  auto* reach = app.add_subcommand("reach", "normal injectivity radius of a map image");
  reach->add_option("--map", rp.map, "boundary map id");
  reach->add_option("--samples", rp.samples, "image samples");
  reach->add_option("--out", rp.out, "output directory");

  for (CLI::App* sub : {bounds, solve, cont, invariant, density, mass_check, cone, reach})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return 2;
  }

  try {
    if (bounds->parsed()) return run_bounds(bp);
    if (solve->parsed()) return run_solve(sp);
    if (cont->parsed()) return run_continue(cp);
    if (invariant->parsed()) return run_invariant(ip);
    if (density->parsed()) return run_density(dp);
    if (mass_check->parsed()) return run_mass_check(mp);
    if (cone->parsed()) return run_cone_scan(kp);
    if (reach->parsed()) return run_reach(rp);
  } catch (const resolution_error& e) {
    std::cerr << "resolution: " << e.what() << "\n";
    return 4;
  } catch (const numerical_error& e) {
    std::cerr << "numerical: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

}  // namespace mss
