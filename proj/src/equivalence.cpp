#include "distweyl/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "distweyl/error.hpp"

namespace distweyl {

namespace {

// Coefficient index raised by each n = 4 case.
int raised_index(N4Case which) { return which == N4Case::Case1_00to01 ? 2 : 0; }

void require_orders(const ProblemSpec& spec, int n, const std::vector<int>& orders, const char* what) {
  if (spec.coeffs.orders.n != n || spec.coeffs.orders.orders != orders) {
    std::string want;
    for (int i : orders) want += std::to_string(i) + " ";
    throw Error(ErrorKind::InvalidCase, std::string(what) + ": source orders must be ( " + want + ")");
  }
}

Rational real_rational(cdouble z, const char* what) {
  if (z.imag() != 0.0) throw Error(ErrorKind::InvalidConfig, std::string(what) + " must be real");
  return rational_from_double(z.real());
}

// Common driver: swaps the coefficient, the orders and transforms U (and V).
ProblemSpec apply(const ProblemSpec& spec, int n, std::optional<N4Case> which, int index, int new_order,
                  const CoefficientFunction& new_sigma, const CoefficientFunction& sigma_tilde, Direction direction) {
  std::vector<CoefficientFunction> sigma = spec.coeffs.sigma;
  sigma[index] = new_sigma;
  std::vector<int> orders = spec.coeffs.orders.orders;
  orders[index] = new_order;
  CoefficientSet coeffs = make_coefficient_set(validate_orders(n, orders), std::move(sigma));

  auto move_form = [&](const BoundaryForm& form, double x) {
    Eigen::MatrixXcd T = transform_matrix(n, which, sigma_tilde(x));
    if (direction == Direction::RaiseOrder) return form.transformed(T);
    Eigen::MatrixXcd t_inv = T.triangularView<Eigen::UnitLower>().solve(Eigen::MatrixXcd::Identity(n, n));
    return form.transformed(t_inv);
  };
  ProblemSpec out{std::move(coeffs), move_form(spec.U, 0.0), std::nullopt};
  if (spec.V) out.V = move_form(*spec.V, spec.coeffs.domain().end());
  return out;
}

// The free entry of L~ is affine in c with unit slope; returns c for a target value.
cdouble free_entry_residual(const BoundaryForm& U, int n, std::optional<N4Case> which, cdouble target) {
  if (n == 2) return target - U.l(2, 1);
  switch (*which) {
    case N4Case::Case1_00to01: return U.l(3, 2) - target;
    case N4Case::Case2_01to11: return target - U.l(4, 1);
    case N4Case::Case3_10to20: return U.l(3, 1) - target;
  }
  return 0.0;
}

ProblemSpec shift_impl(const ProblemSpec& spec, int n, std::optional<N4Case> which, Direction direction,
                       std::optional<cdouble> free_parameter, bool finite) {
  if (finite != (spec.geometry() == Geometry::FiniteInterval)) {
    throw Error(ErrorKind::InvalidConfig, finite ? "finite shift needs a finite-interval problem"
                                                 : "half-line shift needs a half-line problem");
  }
  int index = 0;
  int low = 0;
  int high = 1;
  std::vector<int> source;
  if (n == 2) {
    source = {direction == Direction::RaiseOrder ? 0 : 1};
  } else {
    auto [from, to] = case_orders(*which);
    index = raised_index(*which);
    low = index == 0 ? from.first : from.second;
    high = index == 0 ? to.first : to.second;
    auto pair = direction == Direction::RaiseOrder ? from : to;
    source = {pair.first, 0, pair.second};
    if (!spec.coeffs.sigma[1].is_zero()) throw Error(ErrorKind::InvalidCase, "sigma_1 must vanish for n = 4");
  }
  require_orders(spec, n, source, n == 2 ? "n = 2 shift" : "n = 4 shift");

  const CoefficientFunction& current = spec.coeffs.sigma[index];
  if (direction == Direction::RaiseOrder) {
    if (which == N4Case::Case3_10to20 && !current.continuous_at_zero()) {
      throw Error(ErrorKind::ContinuityAtZeroRequired, "case 3 needs sigma_0 continuous at zero");
    }
    CoefficientFunction tilde;
    if (finite) {
      if (!free_parameter) throw Error(ErrorKind::InvalidConfig, "finite-interval raise needs the free parameter");
      Rational c = real_rational(free_entry_residual(spec.U, n, which, *free_parameter), "free parameter offset");
      tilde = CoefficientFunction::constant(c, current.domain()) - current.integral_from_zero();
    } else {
      tilde = current.tail_integral();
    }
    return apply(spec, n, which, index, high, tilde, tilde, direction);
  }
  CoefficientFunction lowered = -current.derivative();
  if (which == N4Case::Case3_10to20 && !lowered.continuous_at_zero()) {
    throw Error(ErrorKind::ContinuityAtZeroRequired, "case 3 needs sigma_0 continuous at zero");
  }
  return apply(spec, n, which, index, low, lowered, current, direction);
}

}  // namespace

ProblemSpec make_problem_spec(CoefficientSet coeffs, BoundaryForm U, std::optional<BoundaryForm> V) {
  const bool finite = !coeffs.domain().is_half_line();
  if (finite != V.has_value()) {
    throw Error(ErrorKind::InvalidConfig, finite ? "finite interval needs V" : "V given on the half-line");
  }
  const int n = coeffs.orders.n;
  if (U.size() != n || (V && V->size() != n)) throw Error(ErrorKind::ShapeMismatch, "boundary forms must be n x n");
  return ProblemSpec{std::move(coeffs), std::move(U), std::move(V)};
}

WeylProblem to_weyl_problem(const ProblemSpec& spec, double X) {
  WeylProblem p{build_F(spec.coeffs).eval, spec.U, spec.V, X, std::nullopt, Orientation::PhiEqualsCM};
  if (spec.V) p.X = spec.coeffs.domain().end();
  return p;
}

Eigen::MatrixXcd transform_matrix(int n, std::optional<N4Case> which, double s) {
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Identity(n, n);
  if (n == 2) {
    T(1, 0) = -s;
    return T;
  }
  if (n != 4 || !which) throw Error(ErrorKind::InvalidCase, "transforms exist for n = 2 and the n = 4 cases");
  switch (*which) {
    case N4Case::Case1_00to01: T(2, 1) = s; break;
    case N4Case::Case2_01to11: T(3, 0) = -s; break;
    case N4Case::Case3_10to20:
      T(2, 0) = s;
      T(3, 1) = -s;
      break;
  }
  return T;
}

std::pair<std::pair<int, int>, std::pair<int, int>> case_orders(N4Case which) {
  switch (which) {
    case N4Case::Case1_00to01: return {{0, 0}, {0, 1}};
    case N4Case::Case2_01to11: return {{0, 1}, {1, 1}};
    case N4Case::Case3_10to20: return {{1, 0}, {2, 0}};
  }
  throw Error(ErrorKind::InvalidCase, "unknown case");
}

std::pair<CoefficientFunction, cdouble> shift_n2(const CoefficientFunction& sigma0, cdouble h, Direction direction) {
  if (direction == Direction::RaiseOrder) {
    CoefficientFunction tilde = sigma0.tail_integral();
    return {tilde, h + sigma0.integral().get_d()};
  }
  CoefficientFunction lowered = -sigma0.derivative();
  return {lowered, h - sigma0.right_limit(0).get_d()};
}

ProblemSpec shift_n2(const ProblemSpec& spec, Direction direction) {
  return shift_impl(spec, 2, std::nullopt, direction, std::nullopt, false);
}

ProblemSpec shift_n4(const ProblemSpec& spec, N4Case which, Direction direction) {
  return shift_impl(spec, 4, which, direction, std::nullopt, false);
}

ProblemSpec finite_shift_n2(const ProblemSpec& spec, Direction direction, std::optional<cdouble> free_parameter) {
  return shift_impl(spec, 2, std::nullopt, direction, free_parameter, true);
}

ProblemSpec finite_shift_n4(const ProblemSpec& spec, N4Case which, Direction direction,
                            std::optional<cdouble> free_parameter) {
  return shift_impl(spec, 4, which, direction, free_parameter, true);
}

std::vector<std::pair<int, int>> required_knowns(int i0, int i2) {
  if (i0 == 0 && i2 == 0) return {};
  if (i0 == 1 && i2 == 0) return {{4, 1}};
  if (i0 == 2 && i2 == 0) return {{3, 1}, {4, 1}};
  if (i0 == 0 && i2 == 1) return {{3, 2}};
  if (i0 == 1 && i2 == 1) return {{3, 2}, {4, 1}};
  if (i0 == 2 && i2 == 1) return {{3, 1}, {3, 2}, {4, 1}};
  throw Error(ErrorKind::InvalidCase, "no n = 4 problem with (i0, i2) = (" + std::to_string(i0) + ", " +
                                          std::to_string(i2) + ")");
}

KnownBoundaryData knowns_vectors(const BoundaryForm& U, const SingularityOrders& orders) {
  const int n = orders.n;
  KnownBoundaryData out;
  out.L.resize(n - 1);
  for (int nu = 0; nu <= n - 2; ++nu) {
    const int k = nu / 2;
    const int i = orders.orders[nu];
    if (nu % 2 == 0) {
      for (int s = k; s <= k + i - 1; ++s) out.L[nu].push_back(U.l(n - s, k + 1) + U.l(n - k, s + 1));
    } else {
      for (int s = k + 1; s <= k + i; ++s) out.L[nu].push_back(U.l(n - s, k + 1) - U.l(n - k, s + 1));
    }
  }
  return out;
}

DeviationReport weyl_invariance_check(const WeylProblem& a, const WeylProblem& b, const std::vector<cdouble>& lambdas,
                                      const SolverOptions& opts) {
  if (a.V.has_value() != b.V.has_value()) throw Error(ErrorKind::InvalidConfig, "problems differ in geometry");
  std::vector<SweepRow> ra = weyl_sweep(a, lambdas, opts);
  std::vector<SweepRow> rb = weyl_sweep(b, lambdas, opts);
  DeviationReport report;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!ra[i].sample || !rb[i].sample) {
      const SweepRow& bad = ra[i].sample ? rb[i] : ra[i];
      throw Error(ErrorKind::SingularAtLambda, "no Weyl matrix at grid point " + std::to_string(i) + ": " +
                                                   bad.flag + " " + bad.message);
    }
    double d = (ra[i].sample->M - rb[i].sample->M).cwiseAbs().maxCoeff();
    if (d >= report.max_deviation) {
      report.max_deviation = d;
      report.worst_lambda = lambdas[i];
    }
    ++report.samples;
  }
  return report;
}

VEquivalenceReport v_equivalence_check(const MatrixFunction& F, const BoundaryForm& U, const BoundaryForm& V,
                                       const BoundaryForm& V_alt, const std::vector<cdouble>& lambdas,
                                       const std::vector<double>& xs, double tolerance, const SolverOptions& opts) {
  if (F.domain().is_half_line()) throw Error(ErrorKind::InvalidConfig, "V-equivalence needs a finite interval");
  VEquivalenceReport report;
  report.same_permutation = V.permutation() == V_alt.permutation();
  for (cdouble lambda : lambdas) {
    WeylSolutions a = weyl_solutions_finite(F, lambda, U, V, xs, opts);
    WeylSolutions b = weyl_solutions_finite(F, lambda, U, V_alt, xs, opts);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      // relative to the solution scale so large |lambda| does not dominate
      double scale = std::max(1.0, a.phi[i].cwiseAbs().maxCoeff());
      double d = (a.phi[i] - b.phi[i]).cwiseAbs().maxCoeff() / scale;
      if (d >= report.deviation.max_deviation) {
        report.deviation.max_deviation = d;
        report.deviation.worst_lambda = lambda;
      }
      ++report.deviation.samples;
    }
  }
  report.equivalent = report.same_permutation && report.deviation.max_deviation <= tolerance;
  return report;
}

}  // namespace distweyl
