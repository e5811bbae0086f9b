#include "distweyl/cli.hpp"

#include <omp.h>

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "distweyl/equivalence.hpp"
#include "distweyl/error.hpp"
#include "distweyl/io.hpp"
#include "distweyl/quasideriv.hpp"
#include "distweyl/regularize.hpp"
#include "distweyl/spectral.hpp"

namespace distweyl::cli {

namespace {

using io::json;

struct Overrides {
  std::string config;
  std::optional<int> steps;
  std::optional<double> truncation_X;
  int jobs = 0;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool check = false;
};

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::InvalidConfig, what); }

SolverOptions solver_options(const json& cfg, const Overrides& o) {
  SolverOptions opts;
  if (cfg.contains("steps")) opts.steps = cfg.at("steps").get<int>();
  if (o.steps) opts.steps = *o.steps;
  if (cfg.contains("exponent_guard")) opts.exponent_guard = cfg.at("exponent_guard").get<double>();
  if (opts.steps < 1) config_error("steps must be positive");
  return opts;
}

double truncation(const json& cfg, const Overrides& o) {
  double X = cfg.value("X", 30.0);
  if (o.truncation_X) X = *o.truncation_X;
  if (!(X > 0)) config_error("truncation point must be positive");
  return X;
}

WeylProblem weyl_problem(const json& cfg, const Overrides& o) {
  ProblemSpec spec = io::problem_from_json(io::json(cfg.at("problem")));
  WeylProblem p = to_weyl_problem(spec, truncation(cfg, o));
  if (cfg.contains("sector")) p.sector = cfg.at("sector").get<int>();
  const std::string orient = cfg.value("orientation", "phi_equals_cm");
  if (orient == "c_equals_phi_m") {
    p.orientation = Orientation::CEqualsPhiM;
  } else if (orient != "phi_equals_cm") {
    config_error("orientation must be phi_equals_cm or c_equals_phi_m");
  }
  return p;
}

int cmd_gen_matrix(const json& cfg, std::ostream& out) {
  SingularityOrders orders = io::orders_from_json(cfg);
  std::vector<unsigned> vanishing;
  if (cfg.contains("vanishing")) {
    for (int v : cfg.at("vanishing").get<std::vector<int>>()) {
      if (v < 0 || v > orders.n - 2) config_error("vanishing index out of range");
      vanishing.push_back(static_cast<unsigned>(v));
    }
  }
  SymbolicMatrix Q = build_Q(orders, vanishing);
  SymbolicMatrix F = s_map(Q, orders.n);
  StructureReport report = check_structure(F);
  json doc{{"n", orders.n},
           {"orders", orders.orders},
           {"Q", io::symbolic_matrix_to_json(Q)},
           {"F", io::symbolic_matrix_to_json(F)},
           {"structure_ok", report.ok()},
           {"structure_failures", report.failures}};
  if (cfg.value("latex", false)) {
    doc["Q_latex"] = Q.to_latex();
    doc["F_latex"] = F.to_latex();
  }
  out << doc.dump(1) << '\n';
  return report.ok() ? Success : NumericalFailure;
}

int cmd_weyl_sweep(const json& cfg, const Overrides& o, std::ostream& out) {
  WeylProblem p = weyl_problem(cfg, o);
  std::vector<cdouble> grid = io::lambda_grid_from_json(cfg.at("lambda"));
  std::vector<SweepRow> rows = weyl_sweep(p, grid, solver_options(cfg, o), o.jobs);
  io::write_sweep_csv(out, rows, p.F.size());
  bool clean = std::all_of(rows.begin(), rows.end(),
                           [](const SweepRow& r) { return r.flag == "ok" || r.flag == "ill_conditioned"; });
  return clean ? Success : NumericalFailure;
}

int cmd_verify(const json& cfg, const Overrides& o, std::ostream& out) {
  std::vector<int> ns = cfg.value("n", std::vector<int>{2, 3, 4, 5, 6});
  std::uint64_t first = cfg.value("first_seed", std::uint64_t{1});
  if (o.seed) first = *o.seed;
  const int count = cfg.value("count", 100);
  const int degree = cfg.value("max_degree", 6);
  if (count < 1 || degree < 0) config_error("count must be positive and max_degree non-negative");
  json report = json::object();
  bool all = true;
  for (int n : ns) {
    if (n < 2) config_error("n must be at least 2");
    std::vector<RegularizationCase> cases = regularization_suite(n, first, count, degree);
    json failures = json::array();
    for (const auto& c : cases) {
      if (!c.pass()) failures.push_back({{"seed", c.seed}, {"orders", c.orders}, {"residual_degree", c.residual_degree}});
    }
    all = all && failures.empty();
    report[std::to_string(n)] = {{"cases", cases.size()}, {"failures", failures}};
  }
  out << json{{"first_seed", first}, {"count", count}, {"max_degree", degree}, {"all_pass", all}, {"by_n", report}}.dump(1)
      << '\n';
  return all ? Success : NumericalFailure;
}

int cmd_transform(const json& cfg, const Overrides& o, std::ostream& out) {
  ProblemSpec spec = io::problem_from_json(cfg.at("problem"));
  const json& t = cfg.at("transform");
  const std::string dir = t.value("direction", "raise");
  if (dir != "raise" && dir != "lower") config_error("direction must be raise or lower");
  const Direction direction = dir == "raise" ? Direction::RaiseOrder : Direction::LowerOrder;
  std::optional<cdouble> free;
  if (t.contains("free_parameter")) free = io::complex_from_json(t.at("free_parameter"));
  const bool finite = spec.geometry() == Geometry::FiniteInterval;

  ProblemSpec result;
  if (spec.coeffs.orders.n == 2) {
    result = finite ? finite_shift_n2(spec, direction, free) : shift_n2(spec, direction);
  } else if (spec.coeffs.orders.n == 4) {
    const int c = t.value("case", 0);
    if (c < 1 || c > 3) config_error("n = 4 transforms need \"case\": 1, 2 or 3");
    const N4Case which = static_cast<N4Case>(c - 1);
    result = finite ? finite_shift_n4(spec, which, direction, free) : shift_n4(spec, which, direction);
  } else {
    config_error("transforms exist for n = 2 and n = 4 only");
  }

  json doc{{"problem", io::problem_to_json(result)}};
  int code = Success;
  if (o.check || cfg.contains("check")) {
    json chk = cfg.value("check", json::object());
    if (!chk.contains("lambda")) config_error("--check needs check.lambda");
    const double X = chk.contains("X") ? chk.at("X").get<double>() : truncation(cfg, o);
    const double tol = chk.value("tolerance", finite ? 1e-6 : 1e-4);
    json solver = cfg.value("solver", json::object());
    DeviationReport r = weyl_invariance_check(to_weyl_problem(spec, X), to_weyl_problem(result, X),
                                              io::lambda_grid_from_json(chk.at("lambda")), solver_options(solver, o));
    doc["check"] = {{"max_deviation", r.max_deviation},
                    {"worst_lambda", io::complex_to_json(r.worst_lambda)},
                    {"samples", r.samples},
                    {"tolerance", tol},
                    {"pass", r.max_deviation <= tol}};
    if (r.max_deviation > tol) code = NumericalFailure;
  }
  out << doc.dump(1) << '\n';
  return code;
}

int cmd_asym_probe(const json& cfg, const Overrides& o, std::ostream& out) {
  ProblemSpec spec = io::problem_from_json(cfg.at("problem"));
  if (spec.geometry() != Geometry::TruncatedHalfLine) config_error("asym-probe works on the half-line");
  MatrixFunction F = build_F(spec.coeffs).eval;
  std::vector<double> mags = cfg.value("magnitudes", std::vector<double>{5, 10, 20, 40});
  if (mags.empty()) config_error("magnitudes must not be empty");
  AsymptoticProbe probe = asymptotics_probe(F, spec.U, cfg.value("k", 1), cfg.value("j", 0), cfg.at("phi").get<double>(),
                                            mags, cfg.at("x").get<double>(), truncation(cfg, o), solver_options(cfg, o));
  io::write_probe_csv(out, probe);
  const double tol = cfg.value("tolerance", 0.05);
  const double jitter = cfg.value("jitter", 0.10);
  bool ok = probe.samples.back().rel_error <= tol;
  for (std::size_t i = 1; i < probe.samples.size(); ++i) {
    ok = ok && probe.samples[i].rel_error <= (1.0 + jitter) * probe.samples[i - 1].rel_error;
  }
  return ok ? Success : NumericalFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Regularization matrices, Weyl matrices and equivalence checks"};
  app.require_subcommand(1);
  Overrides o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON config file")->required();
    sub->add_option("--steps", o.steps, "integration steps");
    sub->add_option("--truncation-X", o.truncation_X, "half-line truncation point");
    sub->add_option("--jobs", o.jobs, "OpenMP threads (0: runtime default)")->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", o.seed, "first random seed");
    sub->add_option("--out", o.out, "output file (default stdout)");
  };
  CLI::App* gen = app.add_subcommand("gen-matrix", "symbolic Q and F as JSON");
  CLI::App* sweep = app.add_subcommand("weyl-sweep", "Weyl matrix over a lambda grid as CSV");
  CLI::App* verify = app.add_subcommand("verify", "randomized exact regularization checks");
  CLI::App* transform = app.add_subcommand("transform", "order-changing correspondence on a problem");
  CLI::App* probe = app.add_subcommand("asym-probe", "large-rho ratios of a Weyl solution as CSV");
  for (CLI::App* sub : {gen, sweep, verify, transform, probe}) add_common(sub);
  transform->add_flag("--check", o.check, "compare Weyl matrices of the two problems");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return Success;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return ConfigError;
  }

  if (o.jobs > 0) omp_set_num_threads(o.jobs);
  std::ostringstream buffer;
  int code = Success;
  try {
    json cfg = io::load_json_file(o.config);
    if (gen->parsed()) code = cmd_gen_matrix(cfg, buffer);
    if (sweep->parsed()) code = cmd_weyl_sweep(cfg, o, buffer);
    if (verify->parsed()) code = cmd_verify(cfg, o, buffer);
    if (transform->parsed()) code = cmd_transform(cfg, o, buffer);
    if (probe->parsed()) code = cmd_asym_probe(cfg, o, buffer);
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::Overflow:
      case ErrorKind::SingularAtLambda: return NumericalFailure;
      default: return ConfigError;
    }
  } catch (const json::exception& e) {
    err << "error [InvalidConfig]: " << e.what() << '\n';
    return ConfigError;
  }

  if (o.out.empty()) {
    out << buffer.str();
  } else {
    std::ofstream file(o.out);
    if (!file) {
      err << "error: cannot write '" << o.out << "'\n";
      return ConfigError;
    }
    file << buffer.str();
  }
  if (code != Success) err << "numerical check failed\n";
  return code;
}

}  // namespace distweyl::cli
