#pragma once

// Shooting for the system y' = (F(x) + lambda E_{n,1}) y: fundamental
// solutions, Weyl solutions, Weyl matrices on [0, l] and on a truncated
// half-line, Birkhoff-type seeds and the large-rho asymptotics probe.

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "distweyl/model.hpp"
#include "distweyl/regularize.hpp"

namespace distweyl {

struct SolverOptions {
  int steps = 10000;
  double overflow_bound = 1e280;
  /// max |Re(rho w)| * X allowed on the half-line.
  double exponent_guard = 250.0;
  double condition_warn = 1e8;
  double condition_pole = 1e12;
};

/// Called after every step with the current abscissa and state; `stop` is
/// true when x is one of the requested stop points.
using StepObserver = std::function<void(double x, Eigen::MatrixXcd& Y, bool stop)>;

/// Classical RK4 from x0 to x1 (either direction). The total step budget is
/// split over the pieces between breakpoints of F and `stops`, at least one
/// step per piece; stages use the piece's own polynomial so jumps are
/// resolved exactly. Throws Overflow, DomainViolation.
void propagate(const MatrixFunction& F, cdouble lambda, double x0, double x1, Eigen::MatrixXcd& Y, int steps,
               double overflow_bound = 1e280, const std::vector<double>& stops = {},
               const StepObserver& observer = {});

Eigen::VectorXcd integrate_system(const MatrixFunction& F, cdouble lambda, double x0, double x1,
                                  const Eigen::VectorXcd& v0, int steps, double overflow_bound = 1e280);

struct FundamentalMatrix {
  cdouble lambda;
  std::vector<double> grid;
  std::vector<Eigen::MatrixXcd> values;

  /// max_i |det C(x_i) - det C(0)| / |det C(0)|.
  double det_drift() const;
};

/// C(0) = U^{-1}, integrated to X. With `record_path` every step is kept,
/// otherwise only the two endpoints.
FundamentalMatrix fundamental_C(const MatrixFunction& F, cdouble lambda, const BoundaryForm& U, double X, int steps,
                                bool record_path = false);

enum class Geometry { FiniteInterval, TruncatedHalfLine };

/// PhiEqualsCM: M_{s,k} = U_s(Phi_k). CEqualsPhiM: the inverse of that matrix.
enum class Orientation { PhiEqualsCM, CEqualsPhiM };

struct WeylSample {
  cdouble lambda;
  cdouble rho;
  Eigen::MatrixXcd M;
  Geometry geometry = Geometry::FiniteInterval;
  double X = 1.0;  // interval length or truncation point
  Orientation orientation = Orientation::PhiEqualsCM;
  double condition = 1.0;
  bool ill_conditioned = false;
};

/// Weyl solutions at the listed abscissae: column k of each matrix is the
/// quasi-derivative vector of Phi_k. Throws SingularAtLambda.
struct WeylSolutions {
  Eigen::MatrixXcd A;  // Phi = C A, unit lower triangular
  double condition = 1.0;
  std::vector<double> xs;
  std::vector<Eigen::MatrixXcd> phi;
};

WeylSolutions weyl_solutions_finite(const MatrixFunction& F, cdouble lambda, const BoundaryForm& U,
                                    const BoundaryForm& V, const std::vector<double>& xs,
                                    const SolverOptions& opts = {});

WeylSample weyl_matrix_finite(const MatrixFunction& F, cdouble lambda, const BoundaryForm& U, const BoundaryForm& V,
                              const SolverOptions& opts = {}, Orientation orientation = Orientation::PhiEqualsCM);

/// Solutions spanning, for every k, the subspace of solutions that are
/// O(exp(rho w_k x)): seeded at X with the free vectors ((rho w_l)^j)_j and
/// integrated back to `x_stop` with re-orthonormalization after each step,
/// which keeps the nested spans of the leading columns. Optionally returns
/// the accumulated triangular factor R with Y_exact(x_stop) = basis * R.
struct TailBasis {
  SectorContext sector;
  Eigen::MatrixXcd basis;
  Eigen::MatrixXcd R;
};

TailBasis tail_basis(const MatrixFunction& F, cdouble rho, double X, double x_stop, const SolverOptions& opts,
                     bool track_R = false);

/// Weyl matrix on the half-line truncated at X via the determinant ratios
/// M_{s,k} = det[U_j(y_r)]_{j=1..k-1,s; r=1..k} / det[U_j(y_r)]_{j,r=1..k}.
/// `sector` selects the branch of rho (principal root by default).
WeylSample weyl_matrix_halfline(const MatrixFunction& F, cdouble lambda, const BoundaryForm& U, double X,
                                const SolverOptions& opts = {}, std::optional<int> sector = std::nullopt);

struct SolutionPath {
  std::vector<double> x;
  std::vector<Eigen::VectorXcd> values;
  bool backward = false;
};

/// Numerical stand-in for the Birkhoff solution y_l (1-based l): integrated
/// from the endpoint where exp(rho w_l x) is smallest, seeded with
/// ((rho w_l)^j exp(rho w_l x_start))_j. Throws Overflow past the exponent guard.
SolutionPath birkhoff_seed(const MatrixFunction& F, cdouble rho, int l, double X, const SolverOptions& opts = {});

/// d_{k,k} = det[w_l^{p_s}]_{l,s=1..k}, d_{0,0} = 1.
cdouble vandermonde_d(const SectorContext& ctx, const std::vector<int>& permutation, int k);
/// a0_{k,k} = d_{k-1,k-1} / d_{k,k}.
cdouble asymptotic_constant(const SectorContext& ctx, const std::vector<int>& permutation, int k);

struct ProbeSample {
  double rho_abs = 0;
  cdouble ratio;
  double rel_error = 0;
};

struct AsymptoticProbe {
  int k = 1;
  int j = 0;
  double phi = 0;
  double x = 0;
  cdouble limit;
  std::vector<ProbeSample> samples;
};

/// Ratios Phi_k^{[j]}(x) rho^{p_k} (rho w_k)^{-j} exp(-rho w_k x) along the
/// ray arg rho = phi, compared with a0_{k,k}.
AsymptoticProbe asymptotics_probe(const MatrixFunction& F, const BoundaryForm& U, int k, int j, double phi,
                                  const std::vector<double>& rho_magnitudes, double x, double X,
                                  const SolverOptions& opts = {});

/// q = a' + a^2 + b for the two-by-two matrix [[a, 1], [b, -a]].
CoefficientFunction potential_from_F2(const CoefficientFunction& a, const CoefficientFunction& b);

/// A problem ready for sweeping: V present means the finite interval.
struct WeylProblem {
  MatrixFunction F;
  BoundaryForm U;
  std::optional<BoundaryForm> V;
  double X = 30.0;  // truncation point on the half-line
  std::optional<int> sector;
  Orientation orientation = Orientation::PhiEqualsCM;
};

WeylSample weyl_matrix(const WeylProblem& problem, cdouble lambda, const SolverOptions& opts = {});

struct SweepRow {
  std::size_t index = 0;
  cdouble lambda;
  std::optional<WeylSample> sample;
  std::string flag;  // ok, ill_conditioned, pole, overflow, tie, error
  std::string message;
};

/// Independent samples on an OpenMP team of `jobs` threads (0: runtime
/// default); rows come back in grid order.
std::vector<SweepRow> weyl_sweep(const WeylProblem& problem, const std::vector<cdouble>& lambdas,
                                 const SolverOptions& opts = {}, int jobs = 0);
std::vector<SweepRow> weyl_sweep_serial(const WeylProblem& problem, const std::vector<cdouble>& lambdas,
                                        const SolverOptions& opts = {});

}  // namespace distweyl
