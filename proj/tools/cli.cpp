#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "tensorange/applications.hpp"
#include "tensorange/errors.hpp"
#include "tensorange/matrix_market.hpp"
#include "tensorange/numrange.hpp"
#include "tensorange/oracle.hpp"
#include "tensorange/report_json.hpp"
#include "tensorange/tensor_ops.hpp"

namespace tensorange::cli {

namespace {

struct Options {
  std::string input;
  std::string shape;
  std::string method = "auto";
  std::string solver = "auto";
  std::string kind = "both";
  std::optional<std::string> p_sets;
  std::string out_path;
  std::string format;
  int angles = 360;
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t k = 0;
  int trials = 1000;
  int samples = 10000;
  int starts = 20;
  int grid = 0;
  double c = 0.0;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  double value_tol = 1e-9;
  double solver_tol = 1e-10;
  double margin = 1e-8;
  int max_evaluations = 600;
};

NumRangeConfig numrange_config(const Options& o) {
  NumRangeConfig cfg;
  cfg.value_tol = o.value_tol;
  cfg.max_evaluations = o.max_evaluations;
  cfg.threads = o.threads;
  cfg.solver.tolerance = o.solver_tol;
  cfg.solver.seed = o.seed;
  if (o.solver == "dense") {
    cfg.solver.method = SolverMethod::dense;
  } else if (o.solver == "iterative") {
    cfg.solver.method = SolverMethod::iterative;
  } else if (o.solver != "auto") {
    throw InvalidArgument("unknown solver '" + o.solver + "'");
  }
  return cfg;
}

ApplicationConfig app_config(const Options& o) {
  ApplicationConfig cfg;
  cfg.numrange = numrange_config(o);
  cfg.method = parse_bound_method(o.method);
  cfg.margin = o.margin;
  return cfg;
}

TensorShape required_shape(const Options& o) {
  if (o.shape.empty()) throw InvalidArgument("--shape is required (the tensor structure is never inferred)");
  return TensorShape::parse(o.shape);
}

RealMatrix load_matrix(const Options& o, const TensorShape& shape) {
  if (o.input.empty()) throw InvalidArgument("missing input matrix file");
  auto M = mm::read_matrix_file(o.input);
  if (M.dim() != shape.total_dim()) {
    throw DimensionError("matrix in " + o.input + " has dimension " + std::to_string(M.dim()) + " but shape " +
                         shape.to_string() + " needs " + std::to_string(shape.total_dim()));
  }
  return M;
}

// Adds a notice when the input had to be symmetrized before bounding.
void note_symmetry(nlohmann::json& report, const RealMatrix& M) {
  if (M.symmetry_defect() != 0.0) {
    report["notice"] = "input was not symmetric; bounds refer to (B + B^T)/2, which has the same product-vector values";
  }
}

int emit(const nlohmann::json& report, bool converged, const Options& o, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (o.out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(o.out_path);
    if (!f) throw ParseError("cannot write " + o.out_path);
    f << text;
  }
  return converged ? ok : not_converged;
}

int emit_text(const std::string& text, bool converged, const Options& o, std::ostream& out) {
  if (o.out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(o.out_path);
    if (!f) throw ParseError("cannot write " + o.out_path);
    f << text;
  }
  return converged ? ok : not_converged;
}

int cmd_bound(const Options& o, std::ostream& out) {
  const auto shape = required_shape(o);
  const auto B = load_matrix(o, shape);
  const auto cfg = numrange_config(o);
  const bool joint = o.p_sets.has_value() || !shape.is_bipartite();
  if (o.kind != "both" && o.kind != "min" && o.kind != "max") throw InvalidArgument("--kind must be min, max or both");

  nlohmann::json report;
  report["shape"] = shape.dims();
  report["method"] = o.method;
  note_symmetry(report, B);
  bool converged = true;

  std::vector<SubsystemSet> family;
  if (joint) {
    family = o.p_sets ? SubsystemSet::parse_list(*o.p_sets) : default_subsystem_family(shape);
    auto sets = nlohmann::json::array();
    for (const auto& S : family) sets.push_back(S.to_string());
    report["p_sets"] = sets;
    const auto reduced = reduce_subsystem_family(family, shape);
    report["interval_claim"] = reduced.size() <= 2;
  } else {
    report["interval_claim"] = true;
  }

  auto compute = [&](Extreme kind) {
    if (joint) return w_joint_diag(B, shape, family, kind, cfg);
    return w_diag(B, shape, kind, parse_bound_method(o.method), cfg);
  };
  for (Extreme kind : {Extreme::min, Extreme::max}) {
    if (o.kind != "both" && o.kind != to_string(kind)) continue;
    const auto b = compute(kind);
    const std::string key(to_string(kind));
    report[key] = to_json(b);
    report["outer_" + key] = b.outer;
    report["inner_" + key] = b.inner ? nlohmann::json(*b.inner) : nlohmann::json(nullptr);
    converged = converged && b.certified;
  }
  const auto trivial = trivial_bounds(B, shape, cfg.solver);
  report["trivial"] = to_json(trivial);
  report["converged"] = converged;
  return emit(report, converged, o, out);
}

int cmd_numrange(const Options& o, std::ostream& out) {
  const auto shape = required_shape(o);
  const auto B = load_matrix(o, shape);
  const auto res = boundary(B, shape, o.angles, numrange_config(o));
  const bool converged = std::all_of(res.evaluations.begin(), res.evaluations.end(),
                                     [](const SupportEvaluation& e) { return e.certified; });
  if (o.format.empty() || o.format == "csv") return emit_text(boundary_csv(res), converged, o, out);
  if (o.format != "json") throw InvalidArgument("--format must be csv or json");
  nlohmann::json report;
  note_symmetry(report, B);
  auto rows = nlohmann::json::array();
  for (const auto& e : res.evaluations)
    rows.push_back({{"theta", e.theta}, {"support_value", e.support_value}, {"re", e.re}, {"im", e.im}});
  auto outer = nlohmann::json::array();
  for (const auto& p : res.outer_polygon) outer.push_back({p.x, p.y});
  report["evaluations"] = rows;
  report["outer_polygon"] = outer;
  report["inner_area"] = polygon_area(res.inner_polygon());
  report["outer_area"] = polygon_area(res.outer_polygon);
  report["converged"] = converged;
  return emit(report, converged, o, out);
}

int cmd_rank_one(const Options& o, std::ostream& out) {
  if (o.input.empty()) throw InvalidArgument("missing basis file");
  if (o.m == 0 || o.n == 0) throw InvalidArgument("--m and --n are required");
  const auto blocks = mm::read_blocks_file(o.input);
  for (const auto& Y : blocks) {
    if (static_cast<std::size_t>(Y.rows()) != o.m || static_cast<std::size_t>(Y.cols()) != o.n) {
      throw DimensionError("basis block is " + std::to_string(Y.rows()) + "x" + std::to_string(Y.cols()) +
                           ", expected " + std::to_string(o.m) + "x" + std::to_string(o.n));
    }
  }
  const auto r = certify_rank_one_avoiding(blocks, app_config(o));
  return emit(to_json(r), r.converged, o, out);
}

int cmd_positive_map(const Options& o, std::ostream& out) {
  std::size_t m = o.m;
  std::size_t n = o.n;
  if (!o.shape.empty()) {
    const auto shape = TensorShape::parse(o.shape);
    if (!shape.is_bipartite()) throw DimensionError("positive-map needs a bipartite shape");
    m = shape.dim(0);
    n = shape.dim(1);
  }
  if (m == 0 || n == 0) throw InvalidArgument("--shape m,n (or --m and --n) is required");
  const auto C = load_matrix(o, TensorShape::bipartite(m, n));
  const auto r = certify_positive_map(C, m, n, app_config(o));
  return emit(to_json(r), r.converged, o, out);
}

int cmd_witness(const Options& o, std::ostream& out) {
  const auto shape = required_shape(o);
  const auto B = load_matrix(o, shape);
  const auto r = certify_entanglement_witness(B, shape, app_config(o));
  auto report = to_json(r);
  note_symmetry(report, B);
  return emit(report, r.converged, o, out);
}

int cmd_study(const Options& o, std::ostream& out) {
  if (o.m == 0 || o.n == 0 || o.k == 0) throw InvalidArgument("--m, --n and --k are required");
  const auto s = random_subspace_study(o.m, o.n, o.k, o.trials, o.seed, app_config(o), o.threads);
  auto report = to_json(s);
  report["seed"] = o.seed;
  return emit(report, s.converged, o, out);
}

int cmd_oracle(const Options& o, std::ostream& out) {
  const auto shape = required_shape(o);
  const auto B = prepare_symmetric(load_matrix(o, shape));
  nlohmann::json report;
  report["sampling"] = to_json(sample_mu(B, shape, o.samples, o.seed, o.threads));
  if (o.starts > 0) {
    report["ascent_min"] = to_json(multi_start_ascent(B, shape, Extreme::min, o.starts, o.seed, o.threads));
    report["ascent_max"] = to_json(multi_start_ascent(B, shape, Extreme::max, o.starts, o.seed + 1, o.threads));
  }
  if (o.grid > 0) {
    if (shape.dims() != std::vector<std::size_t>{2, 2}) throw DimensionError("--grid needs shape 2,2");
    report["grid"] = to_json(grid_mu_2x2(B, o.grid));
  }
  return emit(report, true, o, out);
}

int cmd_choi(const Options& o, std::ostream& out) {
  const auto C = choi_from_blocks(generalized_choi_map(o.c));
  const TensorShape shape{3, 3};
  if (o.out_path.empty()) {
    mm::write_matrix(out, C, shape);
  } else {
    mm::write_matrix_file(o.out_path, C, shape);
  }
  return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certified bounds on quadratic forms over unit product vectors"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
    sub->add_option("--out", o.out_path, "Write the report to this file instead of stdout");
    sub->add_option("--threads", o.threads, "Worker threads (default: TENSORANGE_THREADS or all cores)");
    sub->add_option("--solver", o.solver, "Eigensolver: auto, dense or iterative")->capture_default_str();
    sub->add_option("--solver-tol", o.solver_tol, "Relative eigen residual tolerance")->capture_default_str();
    sub->add_option("--value-tol", o.value_tol, "Relative stopping gap for endpoint searches")->capture_default_str();
    sub->add_option("--max-evaluations", o.max_evaluations, "Eigenproblem budget per endpoint")->capture_default_str();
  };
  auto add_input = [&](CLI::App* sub, const char* what) { sub->add_option("input", o.input, what)->required(); };
  auto add_method = [&](CLI::App* sub) {
    sub->add_option("--method", o.method, "Endpoint search: angle, ternary or auto")->capture_default_str();
    sub->add_option("--margin", o.margin, "Certification margin")->capture_default_str();
  };

  auto* bound = app.add_subcommand("bound", "Endpoints of the diagonal numerical range bound");
  add_input(bound, "Matrix Market file");
  bound->add_option("--shape", o.shape, "Factor dimensions n1,n2,...")->required();
  bound->add_option("--method", o.method, "angle, ternary or auto (bipartite only)")->capture_default_str();
  bound->add_option("--p-sets", o.p_sets, "Subsystem family, e.g. \";2;3;2,3\"");
  bound->add_option("--kind", o.kind, "min, max or both")->capture_default_str();
  add_common(bound);

  auto* nr = app.add_subcommand("numrange", "Boundary of the numerical range of B + i B^Gamma");
  add_input(nr, "Matrix Market file");
  nr->add_option("--shape", o.shape, "Factor dimensions m,n")->required();
  nr->add_option("--angles", o.angles, "Number of evenly spaced support angles")->capture_default_str();
  nr->add_option("--format", o.format, "csv or json")->capture_default_str();
  add_common(nr);

  auto* r1 = app.add_subcommand("rank-one", "Certify that a matrix subspace has no rank-one element");
  add_input(r1, "Matrix Market file with one array block per basis matrix");
  r1->add_option("--m", o.m, "Rows of each basis matrix")->required();
  r1->add_option("--n", o.n, "Columns of each basis matrix")->required();
  add_method(r1);
  add_common(r1);

  auto* pm = app.add_subcommand("positive-map", "Certify positivity of a map from its Choi matrix");
  add_input(pm, "Choi matrix (Matrix Market)");
  pm->add_option("--shape", o.shape, "m,n");
  pm->add_option("--m", o.m, "Input dimension");
  pm->add_option("--n", o.n, "Output dimension");
  add_method(pm);
  add_common(pm);

  auto* wi = app.add_subcommand("witness", "Certify an entanglement witness");
  add_input(wi, "Matrix Market file");
  wi->add_option("--shape", o.shape, "m,n")->required();
  add_method(wi);
  add_common(wi);

  auto* st = app.add_subcommand("study", "Detection rate for random subspaces");
  st->add_option("--m", o.m, "Rows")->required();
  st->add_option("--n", o.n, "Columns")->required();
  st->add_option("--k", o.k, "Subspace dimension")->required();
  st->add_option("--trials", o.trials, "Number of random subspaces")->capture_default_str();
  add_method(st);
  add_common(st);

  auto* orc = app.add_subcommand("oracle", "Inner estimates of the product-vector extremes");
  add_input(orc, "Matrix Market file");
  orc->add_option("--shape", o.shape, "Factor dimensions n1,n2,...")->required();
  orc->add_option("--samples", o.samples, "Random product vectors")->capture_default_str();
  orc->add_option("--starts", o.starts, "Alternating ascent starts per direction")->capture_default_str();
  orc->add_option("--grid", o.grid, "Grid resolution for shape 2,2 (0 = off)")->capture_default_str();
  add_common(orc);

  auto* ch = app.add_subcommand("choi", "Write the Choi matrix of the generalized Choi map");
  ch->add_option("--c", o.c, "Map parameter")->capture_default_str();
  ch->add_option("--out", o.out_path, "Output file (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return failure;
  }

  try {
    if (*bound) return cmd_bound(o, out);
    if (*nr) return cmd_numrange(o, out);
    if (*r1) return cmd_rank_one(o, out);
    if (*pm) return cmd_positive_map(o, out);
    if (*wi) return cmd_witness(o, out);
    if (*st) return cmd_study(o, out);
    if (*orc) return cmd_oracle(o, out);
    if (*ch) return cmd_choi(o, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return failure;
  }
  return failure;
}

}  // namespace tensorange::cli
