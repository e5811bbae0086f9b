#pragma once

// Correspondences between problems whose coefficients differ in singularity
// order (n = 2 and the three n = 4 cases), the list of boundary entries an
// inverse problem has to know, and V-equivalence testing.
//
// Every correspondence is a change of quasi-derivatives y~ = T(x) y with T
// unit lower triangular and built from the raised coefficient s~; boundary
// forms follow as L~ = L T(0)^{-1} and, on [0, l], L~_V = L_V T(l)^{-1}.

#include <optional>
#include <utility>
#include <vector>

#include "distweyl/model.hpp"
#include "distweyl/spectral.hpp"

namespace distweyl {

struct ProblemSpec {
  CoefficientSet coeffs;
  BoundaryForm U;
  std::optional<BoundaryForm> V;  // present exactly on a finite interval

  Geometry geometry() const { return V ? Geometry::FiniteInterval : Geometry::TruncatedHalfLine; }
};

/// Throws InvalidConfig when V and the coefficient domain disagree on the geometry.
ProblemSpec make_problem_spec(CoefficientSet coeffs, BoundaryForm U, std::optional<BoundaryForm> V = std::nullopt);

/// Numeric problem for the spectral module; X is the truncation point on the half-line.
WeylProblem to_weyl_problem(const ProblemSpec& spec, double X = 30.0);

enum class Direction { RaiseOrder, LowerOrder };
enum class N4Case { Case1_00to01, Case2_01to11, Case3_10to20 };

/// The half-line n = 2 map on a bare coefficient: raising gives
/// s~(x) = int_x^inf s and h~ = h + int_0^inf s; lowering gives s = -s~' and
/// h = h~ - s~(0). Throws NonIntegrableTail, NonDifferentiableKind.
std::pair<CoefficientFunction, cdouble> shift_n2(const CoefficientFunction& sigma0, cdouble h, Direction direction);

/// n = 2 on the half-line, h = l_{2,1}.
ProblemSpec shift_n2(const ProblemSpec& spec, Direction direction);

/// n = 4 on the half-line. The source orders must be the case's lower pair
/// (raise) or upper pair (lower); sigma_1 must vanish. Throws InvalidCase,
/// NonIntegrableTail, NonDifferentiableKind, ContinuityAtZeroRequired.
ProblemSpec shift_n4(const ProblemSpec& spec, N4Case which, Direction direction);

/// Finite-interval variants. Raising takes the target's free entry (h~,
/// l~_{3,2}, l~_{4,1}, l~_{3,1} for n = 2 and cases 1..3) and sets
/// s~(x) = c - int_0^x s accordingly; lowering ignores `free_parameter`.
/// Throws InvalidConfig when raising without a real free parameter.
ProblemSpec finite_shift_n2(const ProblemSpec& spec, Direction direction, std::optional<cdouble> free_parameter);
ProblemSpec finite_shift_n4(const ProblemSpec& spec, N4Case which, Direction direction,
                            std::optional<cdouble> free_parameter);

/// T(x) for a correspondence, given the raised coefficient's value s~(x).
Eigen::MatrixXcd transform_matrix(int n, std::optional<N4Case> which, double sigma_tilde);

/// (i_0, i_2) before and after a case.
std::pair<std::pair<int, int>, std::pair<int, int>> case_orders(N4Case which);

/// 1-based positions (k, j) of the l_{k,j} an n = 4 inverse problem needs for
/// orders (i_0, i_2). Throws InvalidCase for pairs outside the admissible six.
std::vector<std::pair<int, int>> required_knowns(int i0, int i2);

struct KnownBoundaryData {
  std::vector<std::vector<cdouble>> L;  // L[nu], nu = 0..n-2
};

KnownBoundaryData knowns_vectors(const BoundaryForm& U, const SingularityOrders& orders);

struct DeviationReport {
  double max_deviation = 0.0;
  cdouble worst_lambda;
  std::size_t samples = 0;
};

/// max over the grid of the entrywise |M_A(lambda) - M_B(lambda)|. The two
/// problems must share the geometry; errors from spectral propagate.
DeviationReport weyl_invariance_check(const WeylProblem& a, const WeylProblem& b, const std::vector<cdouble>& lambdas,
                                      const SolverOptions& opts = {});

struct VEquivalenceReport {
  DeviationReport deviation;
  bool same_permutation = true;
  bool equivalent = false;  // deviation within tolerance and P_V shared
};

/// Weyl solutions (quasi-derivative vectors of every Phi_k) for V and V_alt
/// compared at all (x, lambda) pairs, relative to max(1, max |Phi(x)|).
VEquivalenceReport v_equivalence_check(const MatrixFunction& F, const BoundaryForm& U, const BoundaryForm& V,
                                       const BoundaryForm& V_alt, const std::vector<cdouble>& lambdas,
                                       const std::vector<double>& xs, double tolerance = 1e-10,
                                       const SolverOptions& opts = {});

}  // namespace distweyl
