#include "distweyl/quasideriv.hpp"

#include <string>

#include "distweyl/error.hpp"

namespace distweyl {

namespace {

RationalPolynomial nth_derivative(RationalPolynomial p, int order) {
  for (int i = 0; i < order; ++i) p = p.derivative();
  return p;
}

int sign(int power) { return power % 2 == 0 ? 1 : -1; }

}  // namespace

PolySolution quasi_chain(const SymbolicMatrix& F, std::span<const RationalPolynomial> sigma,
                         const RationalPolynomial& y) {
  const int n = static_cast<int>(F.rows());
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (F(r, c).max_symbol() >= static_cast<int>(sigma.size())) {
        throw Error(ErrorKind::NonPolynomialCoefficient, "no polynomial bound to a symbol of F");
      }
    }
  }
  PolySolution out{y, {y}};
  for (int k = 1; k <= n; ++k) {
    RationalPolynomial next = out.quasi[k - 1].derivative();
    for (int j = 1; j <= k; ++j) {
      const SigmaExpression& f = F(k - 1, j - 1);
      if (!f.is_zero()) next -= f.substitute(sigma) * out.quasi[j - 1];
    }
    out.quasi.push_back(std::move(next));
  }
  return out;
}

RationalPolynomial classical_apply(const SingularityOrders& orders, std::span<const RationalPolynomial> sigma,
                                   const RationalPolynomial& y) {
  if (static_cast<int>(sigma.size()) != orders.n - 1) {
    throw Error(ErrorKind::LengthMismatch, "expected one polynomial per coefficient");
  }
  const int m = orders.m();
  const int tau = orders.tau();
  RationalPolynomial out = nth_derivative(y, orders.n);
  for (int k = 0; k <= m - 1; ++k) {
    int i = orders.orders[2 * k];
    RationalPolynomial s = nth_derivative(sigma[2 * k], i);
    out += Rational(sign(i + k)) * nth_derivative(s * nth_derivative(y, k), k);
  }
  for (int k = 0; k <= m + tau - 2; ++k) {
    int i = orders.orders[2 * k + 1];
    RationalPolynomial s = nth_derivative(sigma[2 * k + 1], i);
    RationalPolynomial bracket =
        nth_derivative(s * nth_derivative(y, k), k + 1) + nth_derivative(s * nth_derivative(y, k + 1), k);
    out += Rational(sign(i + k + 1)) * bracket;
  }
  return out;
}

RationalPolynomial verify_regularization(const SingularityOrders& orders, std::span<const RationalPolynomial> sigma,
                                         const RationalPolynomial& y) {
  SymbolicMatrix F = build_F_symbolic(orders);
  return classical_apply(orders, sigma, y) - quasi_chain(F, sigma, y).quasi.back();
}

Eigen::MatrixXcd system_matrix(const MatrixFunction& F, cdouble lambda, double x) {
  if (x < 0 || x > F.domain().end()) {
    throw Error(ErrorKind::DomainViolation, "x = " + std::to_string(x) + " outside the domain");
  }
  const int n = F.size();
  Eigen::MatrixXcd a = F(x).cast<cdouble>();
  a(n - 1, 0) += lambda;
  return a;
}

RationalPolynomial random_polynomial(std::mt19937_64& rng, int max_degree) {
  std::uniform_int_distribution<int> degree(0, max_degree);
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 4);
  std::vector<Rational> c(degree(rng) + 1);
  for (auto& v : c) {
    const int a = num(rng);  // draw order fixed so seeds are portable
    const int b = den(rng);
    v = Rational(a, b);
    v.canonicalize();
  }
  return RationalPolynomial(std::move(c));
}

RegularizationCase run_regularization_case(int n, std::uint64_t seed, int max_degree) {
  std::mt19937_64 rng(seed);
  SingularityOrders shape{n, std::vector<int>(n - 1, 0)};
  for (int nu = 0; nu < n - 1; ++nu) {
    std::uniform_int_distribution<int> pick(0, shape.max_order(nu));
    shape.orders[nu] = pick(rng);
  }
  SingularityOrders orders = validate_orders(n, shape.orders);
  std::vector<RationalPolynomial> sigma;
  for (int nu = 0; nu < n - 1; ++nu) sigma.push_back(random_polynomial(rng, max_degree));
  RationalPolynomial y = random_polynomial(rng, max_degree);
  RationalPolynomial residual = verify_regularization(orders, sigma, y);
  return RegularizationCase{n, orders.orders, seed, residual.degree()};
}

std::vector<RegularizationCase> regularization_suite(int n, std::uint64_t first_seed, int count, int max_degree) {
  std::vector<RegularizationCase> out(count);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < count; ++i) out[i] = run_regularization_case(n, first_seed + i, max_degree);
  return out;
}

std::vector<RegularizationCase> regularization_suite_serial(int n, std::uint64_t first_seed, int count,
                                                           int max_degree) {
  std::vector<RegularizationCase> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(run_regularization_case(n, first_seed + i, max_degree));
  return out;
}

}  // namespace distweyl
