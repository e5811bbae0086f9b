#include "distweyl/spectral.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "distweyl/error.hpp"

namespace distweyl {

namespace {

constexpr double kDomainSlack = 1e-12;

void check_interval(const MatrixFunction& F, double x0, double x1) {
  double lo = std::min(x0, x1);
  double hi = std::max(x0, x1);
  if (lo < -kDomainSlack || hi > F.domain().end() + kDomainSlack) {
    throw Error(ErrorKind::DomainViolation,
                "integration interval [" + std::to_string(lo) + ", " + std::to_string(hi) + "] leaves the domain");
  }
}

// sigma_max(full) / sigma_min(block) with every column scaled to unit norm in
// `full`; `block` is a subset of the rows of `full`. A 1 x 1 block that is
// tiny next to the rest of its column still gives a large value.
double pole_condition(const Eigen::MatrixXcd& full, const Eigen::MatrixXcd& block) {
  Eigen::MatrixXcd f = full;
  Eigen::MatrixXcd b = block;
  for (Eigen::Index c = 0; c < f.cols(); ++c) {
    double norm = f.col(c).norm();
    if (norm > 0) {
      f.col(c) /= norm;
      b.col(c) /= norm;
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> sf(f), sb(b);
  double smallest = sb.singularValues()(sb.singularValues().size() - 1);
  return smallest == 0.0 ? std::numeric_limits<double>::infinity() : sf.singularValues()(0) / smallest;
}

Eigen::MatrixXcd orthonormalize(Eigen::MatrixXcd& Y) {
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Y);
  const Eigen::Index n = Y.rows();
  const Eigen::Index k = Y.cols();
  Y = qr.householderQ() * Eigen::MatrixXcd::Identity(n, k);
  return qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
}

void check_guard(const SectorContext& ctx, double X, const SolverOptions& opts) {
  double worst = 0;
  for (cdouble w : ctx.roots) worst = std::max(worst, std::abs((ctx.rho * w).real()));
  if (worst * X > opts.exponent_guard) {
    throw Error(ErrorKind::Overflow, "|Re(rho w)| X = " + std::to_string(worst * X) + " exceeds the exponent guard " +
                                         std::to_string(opts.exponent_guard));
  }
}

void check_no_tie(const SectorContext& ctx) {
  for (int k = 1; k < ctx.n; ++k) {
    if (ctx.tie_after(k)) {
      throw Error(ErrorKind::SingularAtLambda,
                  "rho lies on a branch cut: Re(rho w_" + std::to_string(k) + ") = Re(rho w_" + std::to_string(k + 1) +
                      "), decaying and growing solutions are not separated");
    }
  }
}

struct FlowResult {
  Eigen::MatrixXcd Q;
  Eigen::MatrixXcd R;
};

// Integrates the block Y0 from x0 to x1 keeping it orthonormal; nested spans
// of the leading columns are preserved and Y_exact(x1) = Q * R.
FlowResult orthonormal_flow(const MatrixFunction& F, cdouble lambda, double x0, double x1, Eigen::MatrixXcd Y0,
                            const SolverOptions& opts, bool track_R) {
  const Eigen::Index k = Y0.cols();
  FlowResult out{std::move(Y0), Eigen::MatrixXcd::Identity(k, k)};
  out.R = orthonormalize(out.Q);
  if (!track_R) out.R = Eigen::MatrixXcd::Identity(k, k);
  propagate(F, lambda, x0, x1, out.Q, opts.steps, opts.overflow_bound, {}, [&](double, Eigen::MatrixXcd& Y, bool) {
    Eigen::MatrixXcd r = orthonormalize(Y);
    if (track_R) {
      out.R = (r * out.R).eval();
      if (!out.R.allFinite()) throw Error(ErrorKind::Overflow, "accumulated triangular factor overflowed");
    }
  });
  return out;
}

cdouble int_power(cdouble z, int p) {
  cdouble r = 1.0;
  for (int i = 0; i < p; ++i) r *= z;
  return r;
}

}  // namespace

void propagate(const MatrixFunction& F, cdouble lambda, double x0, double x1, Eigen::MatrixXcd& Y, int steps,
               double overflow_bound, const std::vector<double>& stops, const StepObserver& observer) {
  if (steps < 1) throw Error(ErrorKind::InvalidConfig, "steps must be at least 1");
  const int n = F.size();
  if (Y.rows() != n) throw Error(ErrorKind::ShapeMismatch, "state must have n rows");
  check_interval(F, x0, x1);
  if (x0 == x1) return;

  const double lo = std::min(x0, x1);
  const double hi = std::max(x0, x1);
  std::vector<double> nodes = {lo, hi};
  for (double b : F.breakpoints()) {
    if (b > lo && b < hi) nodes.push_back(b);
  }
  for (double s : stops) {
    if (s > lo && s < hi) nodes.push_back(s);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  if (x1 < x0) std::reverse(nodes.begin(), nodes.end());

  const double total = hi - lo;
  Eigen::MatrixXd Fd;
  Eigen::MatrixXcd A(n, n);
  Eigen::MatrixXcd k1, k2, k3, k4;
  for (std::size_t seg = 0; seg + 1 < nodes.size(); ++seg) {
    const double a = nodes[seg];
    const double b = nodes[seg + 1];
    const double ref = 0.5 * (a + b);
    const long count = std::max(1L, std::lround(steps * std::abs(b - a) / total));
    const double h = (b - a) / static_cast<double>(count);
    const bool stop_at_end = std::find(stops.begin(), stops.end(), b) != stops.end();
    auto system_at = [&](double x) {
      F.evaluate(x, Fd, ref);
      A = Fd.cast<cdouble>();
      A(n - 1, 0) += lambda;
    };
    for (long i = 0; i < count; ++i) {
      const double x = a + static_cast<double>(i) * h;
      system_at(x);
      k1 = A * Y;
      system_at(x + 0.5 * h);
      k2 = A * (Y + (0.5 * h) * k1);
      k3 = A * (Y + (0.5 * h) * k2);
      system_at(x + h);
      k4 = A * (Y + h * k3);
      Y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (!Y.allFinite() || Y.cwiseAbs().maxCoeff() > overflow_bound) {
        throw Error(ErrorKind::Overflow, "solution norm exceeded " + std::to_string(overflow_bound) + " near x = " +
                                             std::to_string(x));
      }
      const bool last = i + 1 == count;
      if (observer) observer(last ? b : x + h, Y, last && stop_at_end);
    }
  }
}

Eigen::VectorXcd integrate_system(const MatrixFunction& F, cdouble lambda, double x0, double x1,
                                  const Eigen::VectorXcd& v0, int steps, double overflow_bound) {
  Eigen::MatrixXcd Y = v0;
  propagate(F, lambda, x0, x1, Y, steps, overflow_bound);
  return Y.col(0);
}

double FundamentalMatrix::det_drift() const {
  if (values.empty()) return 0.0;
  cdouble d0 = values.front().determinant();
  double worst = 0.0;
  for (const auto& c : values) worst = std::max(worst, std::abs(c.determinant() - d0) / std::abs(d0));
  return worst;
}

FundamentalMatrix fundamental_C(const MatrixFunction& F, cdouble lambda, const BoundaryForm& U, double X, int steps,
                                bool record_path) {
  if (U.size() != F.size()) throw Error(ErrorKind::ShapeMismatch, "boundary form and F differ in size");
  FundamentalMatrix out{lambda, {0.0}, {}};
  Eigen::MatrixXcd C = U.assembled().partialPivLu().inverse();
  out.values.push_back(C);
  propagate(F, lambda, 0.0, X, C, steps, 1e280, {}, [&](double x, Eigen::MatrixXcd& Y, bool) {
    if (record_path) {
      out.grid.push_back(x);
      out.values.push_back(Y);
    }
  });
  if (!record_path) {
    out.grid.push_back(X);
    out.values.push_back(C);
  }
  return out;
}

WeylSolutions weyl_solutions_finite(const MatrixFunction& F, cdouble lambda, const BoundaryForm& U,
                                    const BoundaryForm& V, const std::vector<double>& xs,
                                    const SolverOptions& opts) {
  if (F.domain().is_half_line()) throw Error(ErrorKind::DomainViolation, "finite-interval Weyl solutions need [0, l]");
  const int n = F.size();
  if (U.size() != n || V.size() != n) throw Error(ErrorKind::ShapeMismatch, "boundary forms and F differ in size");
  const double L = F.domain().end();

  Eigen::MatrixXcd C = U.assembled().partialPivLu().inverse();
  std::vector<Eigen::MatrixXcd> captured(xs.size());
  std::vector<bool> have(xs.size(), false);
  auto capture = [&](double x, const Eigen::MatrixXcd& Y) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!have[i] && xs[i] == x) {
        captured[i] = Y;
        have[i] = true;
      }
    }
  };
  capture(0.0, C);
  propagate(F, lambda, 0.0, L, C, opts.steps, opts.overflow_bound, xs,
            [&](double x, Eigen::MatrixXcd& Y, bool stop) {
              if (stop) capture(x, Y);
            });
  capture(L, C);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!have[i]) throw Error(ErrorKind::DomainViolation, "sample point " + std::to_string(xs[i]) + " outside [0, l]");
  }

  // V_l(C_j) for all l, j; then V_l(Phi_k) = 0 for l > k fixes the lower part of A
  Eigen::MatrixXcd W = V.assembled() * C;
  WeylSolutions out;
  out.A = Eigen::MatrixXcd::Identity(n, n);
  for (int k = 1; k < n; ++k) {
    Eigen::MatrixXcd G = W.block(k, k, n - k, n - k);
    double cond = pole_condition(W.rightCols(n - k), G);
    out.condition = std::max(out.condition, cond);
    if (!(cond <= opts.condition_pole)) {
      throw Error(ErrorKind::SingularAtLambda, "shooting system for Phi_" + std::to_string(k) +
                                                   " is singular (condition " + std::to_string(cond) + ")");
    }
    Eigen::VectorXcd rhs = -W.block(k, k - 1, n - k, 1);
    out.A.block(k, k - 1, n - k, 1) = G.partialPivLu().solve(rhs);
  }
  out.xs = xs;
  for (const auto& c : captured) out.phi.push_back(c * out.A);
  return out;
}

WeylSample weyl_matrix_finite(const MatrixFunction& F, cdouble lambda, const BoundaryForm& U, const BoundaryForm& V,
                              const SolverOptions& opts, Orientation orientation) {
  WeylSolutions sol = weyl_solutions_finite(F, lambda, U, V, {}, opts);
  const int n = F.size();
  WeylSample s;
  s.lambda = lambda;
  s.rho = lambda == cdouble(0.0) ? cdouble(0.0) : rho_from_lambda(lambda, n);
  s.geometry = Geometry::FiniteInterval;
  s.X = F.domain().end();
  s.orientation = orientation;
  s.condition = sol.condition;
  s.ill_conditioned = sol.condition > opts.condition_warn;
  if (orientation == Orientation::PhiEqualsCM) {
    s.M = sol.A;
  } else {
    s.M = sol.A.triangularView<Eigen::UnitLower>().solve(Eigen::MatrixXcd::Identity(n, n));
  }
  return s;
}

TailBasis tail_basis(const MatrixFunction& F, cdouble rho, double X, double x_stop, const SolverOptions& opts,
                     bool track_R) {
  const int n = F.size();
  TailBasis out;
  out.sector = order_roots(rho, n);
  check_guard(out.sector, X, opts);
  Eigen::MatrixXcd Y(n, n);
  for (int l = 0; l < n; ++l) {
    cdouble mu = rho * out.sector.roots[l];
    for (int j = 0; j < n; ++j) Y(j, l) = int_power(mu, j);
  }
  FlowResult flow = orthonormal_flow(F, rho == cdouble(0.0) ? 0.0 : int_power(rho, n), X, x_stop, Y, opts, track_R);
  out.basis = std::move(flow.Q);
  out.R = std::move(flow.R);
  return out;
}

WeylSample weyl_matrix_halfline(const MatrixFunction& F, cdouble lambda, const BoundaryForm& U, double X,
                                const SolverOptions& opts, std::optional<int> sector) {
  const int n = F.size();
  if (U.size() != n) throw Error(ErrorKind::ShapeMismatch, "boundary form and F differ in size");
  if (!(X > 0)) throw Error(ErrorKind::InvalidConfig, "truncation point must be positive");
  cdouble rho = rho_from_lambda(lambda, n, sector);
  SectorContext ctx = order_roots(rho, n);
  check_no_tie(ctx);
  TailBasis tb = tail_basis(F, rho, X, 0.0, opts);

  Eigen::MatrixXcd W = U.assembled() * tb.basis;  // W(j, r) = U_j(y_r)
  WeylSample s;
  s.lambda = lambda;
  s.rho = rho;
  s.geometry = Geometry::TruncatedHalfLine;
  s.X = X;
  s.orientation = Orientation::PhiEqualsCM;
  s.M = Eigen::MatrixXcd::Identity(n, n);
  for (int k = 1; k < n; ++k) {
    Eigen::MatrixXcd block = W.topLeftCorner(k, k);
    double cond = pole_condition(W.leftCols(k), block);
    s.condition = std::max(s.condition, cond);
    if (!(cond <= opts.condition_pole)) {
      throw Error(ErrorKind::SingularAtLambda, "det[U_j(y_r)] for k = " + std::to_string(k) +
                                                   " vanishes (condition " + std::to_string(cond) + ")");
    }
    cdouble denominator = block.determinant();
    for (int sidx = k + 1; sidx <= n; ++sidx) {
      Eigen::MatrixXcd numerator = block;
      numerator.row(k - 1) = W.row(sidx - 1).head(k);
      s.M(sidx - 1, k - 1) = numerator.determinant() / denominator;
    }
  }
  s.ill_conditioned = s.condition > opts.condition_warn;
  return s;
}

SolutionPath birkhoff_seed(const MatrixFunction& F, cdouble rho, int l, double X, const SolverOptions& opts) {
  const int n = F.size();
  if (l < 1 || l > n) throw Error(ErrorKind::IndexOutOfRange, "mode index must lie in 1..n");
  SectorContext ctx = order_roots(rho, n);
  check_guard(ctx, X, opts);
  const cdouble mu = rho * ctx.roots[l - 1];
  SolutionPath path;
  path.backward = mu.real() < 0;
  const double start = path.backward ? X : 0.0;
  const double stop = path.backward ? 0.0 : X;
  Eigen::MatrixXcd y(n, 1);
  const cdouble scale = std::exp(mu * start);
  for (int j = 0; j < n; ++j) y(j, 0) = int_power(mu, j) * scale;
  path.x.push_back(start);
  path.values.push_back(y.col(0));
  propagate(F, int_power(rho, n), start, stop, y, opts.steps, opts.overflow_bound, {},
            [&](double x, Eigen::MatrixXcd& Y, bool) {
              path.x.push_back(x);
              path.values.push_back(Y.col(0));
            });
  if (path.backward) {
    std::reverse(path.x.begin(), path.x.end());
    std::reverse(path.values.begin(), path.values.end());
  }
  return path;
}

cdouble vandermonde_d(const SectorContext& ctx, const std::vector<int>& permutation, int k) {
  if (k == 0) return 1.0;
  Eigen::MatrixXcd d(k, k);
  for (int l = 0; l < k; ++l) {
    for (int s = 0; s < k; ++s) d(l, s) = int_power(ctx.roots[l], permutation[s]);
  }
  return d.determinant();
}

cdouble asymptotic_constant(const SectorContext& ctx, const std::vector<int>& permutation, int k) {
  cdouble dk = vandermonde_d(ctx, permutation, k);
  if (std::abs(dk) < 1e-14) throw Error(ErrorKind::SingularAtLambda, "d_{k,k} vanishes");
  return vandermonde_d(ctx, permutation, k - 1) / dk;
}

AsymptoticProbe asymptotics_probe(const MatrixFunction& F, const BoundaryForm& U, int k, int j, double phi,
                                  const std::vector<double>& rho_magnitudes, double x, double X,
                                  const SolverOptions& opts) {
  const int n = F.size();
  if (k < 1 || k >= n || j < 0 || j >= n) throw Error(ErrorKind::IndexOutOfRange, "probe indices out of range");
  if (!(x > 0 && x <= X)) throw Error(ErrorKind::DomainViolation, "probe point must satisfy 0 < x <= X");
  AsymptoticProbe probe;
  probe.k = k;
  probe.j = j;
  probe.phi = phi;
  probe.x = x;
  const int p_k = U.permutation()[k - 1];
  for (double r : rho_magnitudes) {
    const cdouble rho = std::polar(r, phi);
    const cdouble lambda = int_power(rho, n);
    SectorContext ctx = order_roots(rho, n);
    check_no_tie(ctx);
    probe.limit = asymptotic_constant(ctx, U.permutation(), k);

    TailBasis at_x = tail_basis(F, rho, X, x, opts);
    FlowResult to_zero = orthonormal_flow(F, lambda, x, 0.0, at_x.basis, opts, true);
    Eigen::MatrixXcd W = U.assembled() * to_zero.Q;
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(k);
    e(k - 1) = 1.0;
    Eigen::VectorXcd a = W.topLeftCorner(k, k).partialPivLu().solve(e);
    Eigen::VectorXcd c = to_zero.R.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(a);
    Eigen::VectorXcd phi_x = at_x.basis.leftCols(k) * c;

    const cdouble mu = rho * ctx.roots[k - 1];
    cdouble ratio = phi_x(j) * int_power(rho, p_k) / int_power(mu, j) * std::exp(-mu * x);
    probe.samples.push_back({r, ratio, std::abs(ratio - probe.limit) / std::abs(probe.limit)});
  }
  return probe;
}

CoefficientFunction potential_from_F2(const CoefficientFunction& a, const CoefficientFunction& b) {
  return a.derivative() + a * a + b;
}

WeylSample weyl_matrix(const WeylProblem& problem, cdouble lambda, const SolverOptions& opts) {
  if (problem.V) return weyl_matrix_finite(problem.F, lambda, problem.U, *problem.V, opts, problem.orientation);
  return weyl_matrix_halfline(problem.F, lambda, problem.U, problem.X, opts, problem.sector);
}

namespace {

SweepRow sweep_one(const WeylProblem& problem, const std::vector<cdouble>& lambdas, std::size_t i,
                   const SolverOptions& opts) {
  SweepRow row;
  row.index = i;
  row.lambda = lambdas[i];
  try {
    if (!problem.V) {
      SectorContext ctx = order_roots(rho_from_lambda(lambdas[i], problem.F.size(), problem.sector), problem.F.size());
      for (int k = 1; k < ctx.n; ++k) {
        if (ctx.tie_after(k)) {
          row.flag = "tie";
          row.message = "rho on a branch cut";
          return row;
        }
      }
    }
    row.sample = weyl_matrix(problem, lambdas[i], opts);
    row.flag = row.sample->ill_conditioned ? "ill_conditioned" : "ok";
  } catch (const Error& e) {
    row.message = e.what();
    switch (e.kind()) {
      case ErrorKind::SingularAtLambda: row.flag = "pole"; break;
      case ErrorKind::Overflow: row.flag = "overflow"; break;
      default: row.flag = "error"; break;
    }
  }
  return row;
}

}  // namespace

std::vector<SweepRow> weyl_sweep(const WeylProblem& problem, const std::vector<cdouble>& lambdas,
                                 const SolverOptions& opts, int jobs) {
  std::vector<SweepRow> rows(lambdas.size());
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
  const long count = static_cast<long>(lambdas.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (long i = 0; i < count; ++i) rows[i] = sweep_one(problem, lambdas, static_cast<std::size_t>(i), opts);
  return rows;
}

std::vector<SweepRow> weyl_sweep_serial(const WeylProblem& problem, const std::vector<cdouble>& lambdas,
                                        const SolverOptions& opts) {
  std::vector<SweepRow> rows;
  rows.reserve(lambdas.size());
  for (std::size_t i = 0; i < lambdas.size(); ++i) rows.push_back(sweep_one(problem, lambdas, i, opts));
  return rows;
}

}  // namespace distweyl
