#include "doctest.h"

#include <random>

#include "distweyl/error.hpp"
#include "distweyl/quasideriv.hpp"

using namespace distweyl;

namespace {
RationalPolynomial poly(std::initializer_list<Rational> c) { return RationalPolynomial(std::vector<Rational>(c)); }
RationalPolynomial d(RationalPolynomial p, int k = 1) {
  while (k-- > 0) p = p.derivative();
  return p;
}
}  // namespace

TEST_CASE("quasi-derivative chains for n = 2") {
  SymbolicMatrix F1 = build_F_symbolic(validate_orders(2, {1}));
  std::vector<RationalPolynomial> sx{RationalPolynomial::x()};
  PolySolution p = quasi_chain(F1, sx, poly({0, 0, 1}));
  CHECK(p.quasi[1] == poly({0, 2, 0, -1}));  // 2x - x^3
  CHECK(p.quasi[2] == poly({2, 0, -1}));     // 2 - x^2
  // y^[1] = y' - s0 y for any y
  RationalPolynomial y = poly({1, -2, Rational(1, 3), 4});
  CHECK(quasi_chain(F1, sx, y).quasi[1] == y.derivative() - sx[0] * y);

  SymbolicMatrix F0 = build_F_symbolic(validate_orders(2, {0}));
  std::vector<RationalPolynomial> zero{RationalPolynomial()};
  PolySolution q = quasi_chain(F0, zero, poly({0, 0, 0, 1}));
  CHECK(q.quasi[1] == poly({0, 0, 3}));
  CHECK(q.quasi[2] == poly({0, 6}));
}

TEST_CASE("classical expansion") {
  std::vector<RationalPolynomial> sx{RationalPolynomial::x()};
  CHECK(classical_apply(validate_orders(2, {1}), sx, poly({0, 0, 1})) == poly({2, 0, -1}));
  std::vector<RationalPolynomial> c{RationalPolynomial::constant(5)};
  CHECK(classical_apply(validate_orders(2, {0}), c, RationalPolynomial::x()) == poly({0, 5}));
  std::vector<RationalPolynomial> z(3);
  CHECK(classical_apply(validate_orders(4, {0, 0, 0}), z, RationalPolynomial::monomial(1, 4)) == poly({24}));
  CHECK(verify_regularization(validate_orders(2, {1}), sx, poly({0, 0, 1})).is_zero());
  CHECK_THROWS_AS(classical_apply(validate_orders(2, {0}), z, RationalPolynomial::x()), Error);
}

TEST_CASE("n = 4 against the explicit fourth-order form") {
  // l(y) = y'''' + (-1)^{i2+1} (s2^{(i2)} y')' + (-1)^{i0} s0^{(i0)} y, s1 = 0
  std::mt19937_64 rng(11);
  const unsigned vanishing[] = {1};
  for (int trial = 0; trial < 60; ++trial) {
    const int i0 = trial % 3;
    const int i2 = (trial / 3) % 2;
    SymbolicMatrix F = build_F_symbolic(validate_orders(4, {i0, 0, i2}), vanishing);
    std::vector<RationalPolynomial> sigma{random_polynomial(rng, 5), RationalPolynomial(), random_polynomial(rng, 5)};
    RationalPolynomial y = random_polynomial(rng, 6);
    RationalPolynomial want = d(y, 4) + Rational(i2 % 2 == 0 ? -1 : 1) * d(d(sigma[2], i2) * d(y), 1) +
                              Rational(i0 % 2 == 0 ? 1 : -1) * d(sigma[0], i0) * y;
    CHECK(quasi_chain(F, sigma, y).quasi[4] == want);
  }
}

TEST_CASE("randomized regularization identity") {
  for (int n = 2; n <= 6; ++n) {
    std::vector<RegularizationCase> cases = regularization_suite(n, 1, 100);
    std::vector<RegularizationCase> serial = regularization_suite_serial(n, 1, 100);
    REQUIRE(cases.size() == 100);
    for (std::size_t i = 0; i < cases.size(); ++i) {
      CAPTURE(n);
      CAPTURE(cases[i].seed);
      CHECK(cases[i].pass());
      CHECK(cases[i].orders == serial[i].orders);
      CHECK(cases[i].seed == serial[i].seed);
    }
  }
  // seeds are reproducible
  CHECK(run_regularization_case(5, 42).orders == run_regularization_case(5, 42).orders);
}

TEST_CASE("system matrix") {
  Domain half = Domain::half_line();
  CoefficientSet zero = make_coefficient_set(validate_orders(2, {0}), {CoefficientFunction::zero(half)});
  Eigen::MatrixXcd A = system_matrix(build_F(zero).eval, 5.0, 0.3);
  Eigen::MatrixXcd want(2, 2);
  want << 0, 1, 5, 0;
  CHECK((A - want).norm() == 0.0);

  CoefficientSet sx = make_coefficient_set(
      validate_orders(2, {1}), {CoefficientFunction::polynomial(RationalPolynomial::x(), Domain::interval(3))});
  Eigen::MatrixXcd B = system_matrix(build_F(sx).eval, 0.0, 1.0);
  want << 1, 1, -1, -1;
  CHECK((B - want).norm() == 0.0);
  CHECK_THROWS_AS(system_matrix(build_F(sx).eval, 0.0, 4.0), Error);

  // lambda only enters at (n, 1)
  CoefficientSet z4 = make_coefficient_set(validate_orders(4, {0, 0, 0}), std::vector<CoefficientFunction>(3, CoefficientFunction::zero(half)));
  Eigen::MatrixXcd C = system_matrix(build_F(z4).eval, cdouble(2, 3), 1.0) - system_matrix(build_F(z4).eval, 0.0, 1.0);
  CHECK(C(3, 0) == cdouble(2, 3));
  C(3, 0) = 0;
  CHECK(C.norm() == 0.0);
}
