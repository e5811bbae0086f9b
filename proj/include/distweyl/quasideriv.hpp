#pragma once

// Quasi-derivatives, the first-order system, and the exact oracle comparing
// the classical expansion of l_n(y) with y^{[n]} for polynomial data.

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "distweyl/model.hpp"
#include "distweyl/regularize.hpp"
#include "distweyl/symbolic.hpp"

namespace distweyl {

struct PolySolution {
  RationalPolynomial y;
  std::vector<RationalPolynomial> quasi;  // y^{[0]} .. y^{[n]}
};

/// y^{[k]} = (y^{[k-1]})' - sum_{j<=k} f_{k,j} y^{[j-1]} with every symbol
/// s_nu replaced by sigma[nu]. The row k = n uses f_{n,j}.
PolySolution quasi_chain(const SymbolicMatrix& F, std::span<const RationalPolynomial> sigma,
                         const RationalPolynomial& y);

/// l_n(y) expanded term by term from its divergence form with classical derivatives.
RationalPolynomial classical_apply(const SingularityOrders& orders, std::span<const RationalPolynomial> sigma,
                                   const RationalPolynomial& y);

/// classical_apply(...) - y^{[n]}; identically zero when the regularization is right.
RationalPolynomial verify_regularization(const SingularityOrders& orders, std::span<const RationalPolynomial> sigma,
                                         const RationalPolynomial& y);

/// F(x) + lambda E_{n,1}. Throws DomainViolation outside the domain of F.
Eigen::MatrixXcd system_matrix(const MatrixFunction& F, cdouble lambda, double x);

struct RegularizationCase {
  int n = 0;
  std::vector<int> orders;
  std::uint64_t seed = 0;
  int residual_degree = -1;  // -1: residual is the zero polynomial

  bool pass() const { return residual_degree < 0; }
};

/// Random case drawn from `seed`: orders uniform in the admissible set,
/// sigma and y random rational polynomials of degree <= max_degree.
RegularizationCase run_regularization_case(int n, std::uint64_t seed, int max_degree = 6);

/// Cases for seeds first_seed .. first_seed + count - 1, in seed order.
std::vector<RegularizationCase> regularization_suite(int n, std::uint64_t first_seed, int count, int max_degree = 6);
std::vector<RegularizationCase> regularization_suite_serial(int n, std::uint64_t first_seed, int count,
                                                           int max_degree = 6);

/// Random rational polynomial with numerators in [-9, 9] and denominators in [1, 4].
RationalPolynomial random_polynomial(std::mt19937_64& rng, int max_degree);

}  // namespace distweyl
