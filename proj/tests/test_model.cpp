#include "doctest.h"

#include <cmath>
#include <numbers>

#include "distweyl/coefficient.hpp"
#include "distweyl/error.hpp"
#include "distweyl/model.hpp"

using namespace distweyl;
using std::numbers::pi;

namespace {
bool throws_kind(ErrorKind kind, auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
}
}  // namespace

TEST_CASE("order validation") {
  SingularityOrders o = validate_orders(4, {2, 0, 1});
  CHECK(o.m() == 2);
  CHECK(o.tau() == 0);
  CHECK(validate_orders(2, {0}).m() == 1);
  CHECK(throws_kind(ErrorKind::OrderOutOfRange, [] { validate_orders(4, {3, 0, 0}); }));
  CHECK(throws_kind(ErrorKind::LengthMismatch, [] { validate_orders(4, {0, 0}); }));
  CHECK(throws_kind(ErrorKind::OrderOutOfRange, [] { validate_orders(4, {0, 2, 0}); }));
  CHECK(throws_kind(ErrorKind::OrderOutOfRange, [] { validate_orders(2, {-1}); }));
}

TEST_CASE("singular set membership rules") {
  CHECK(singular_set(validate_orders(5, {2, 1, 1, 0})).empty());
  CHECK(singular_set(validate_orders(4, {2, 1, 1})) == std::set<int>{0, 1, 2});
  CHECK(singular_set(validate_orders(4, {0, 0, 0})).empty());
  CHECK(singular_set(validate_orders(2, {1})) == std::set<int>{0});

  // exhaustive over the admissible orders for n = 6: the two rules directly
  const int n = 6, m = 3;
  std::vector<int> bound;
  for (int nu = 0; nu <= n - 2; ++nu) bound.push_back(nu % 2 == 0 ? m - nu / 2 : m - nu / 2 - 1);
  std::vector<int> o(n - 1, 0);
  for (;;) {
    std::set<int> expect;
    for (int nu = 0; nu <= n - 2; ++nu) {
      if (o[nu] == bound[nu]) expect.insert(nu);
    }
    CHECK(singular_set(validate_orders(n, o)) == expect);
    int pos = 0;
    while (pos < n - 1 && ++o[pos] > bound[pos]) o[pos++] = 0;
    if (pos == n - 1) break;
  }
}

TEST_CASE("root ordering") {
  SectorContext c2 = order_roots(1.0, 2);
  CHECK(std::abs(c2.roots[0] - cdouble(-1)) < 1e-14);
  CHECK(std::abs(c2.roots[1] - cdouble(1)) < 1e-14);

  cdouble rho = std::polar(1.0, pi / 8);
  SectorContext c4 = order_roots(rho, 4);
  const cdouble want[] = {-1.0, {0, 1}, {0, -1}, 1.0};
  const double re[] = {-0.924, -0.383, 0.383, 0.924};
  for (int k = 0; k < 4; ++k) {
    CHECK(std::abs(c4.roots[k] - want[k]) < 1e-14);
    CHECK((rho * c4.roots[k]).real() == doctest::Approx(re[k]).epsilon(1e-3));
  }

  // boundary ray: equal real parts, tie broken by the imaginary part
  SectorContext tie = order_roots(cdouble(0, 1), 2);
  CHECK(std::abs(tie.roots[0] - cdouble(-1)) < 1e-14);
  CHECK(tie.tie_after(1));

  for (int n = 2; n <= 7; ++n) {
    SectorContext c = order_roots(std::polar(2.0, 0.37), n);
    for (int k = 0; k < n; ++k) {
      CHECK(std::abs(std::pow(c.roots[k], n) - 1.0) < 1e-12);
      for (int l = 0; l < k; ++l) CHECK(std::abs(c.roots[k] - c.roots[l]) > 1e-6);
      if (k > 0) CHECK((c.rho * c.roots[k - 1]).real() <= (c.rho * c.roots[k]).real() + 1e-12);
    }
  }
}

TEST_CASE("rho from lambda") {
  for (cdouble lambda : {cdouble(4), cdouble(-3, 1), cdouble(0.5, -2)}) {
    for (int n : {2, 3, 4}) {
      cdouble rho = rho_from_lambda(lambda, n);
      CHECK(std::abs(std::pow(rho, n) - lambda) < 1e-12 * std::abs(lambda));
      double arg = std::arg(rho);
      if (arg < 0) arg += 2 * pi;
      CHECK(arg < 2 * pi / n + 1e-12);
    }
  }
  CHECK(std::abs(rho_from_lambda(4.0, 2) - 2.0) < 1e-14);
}

TEST_CASE("boundary forms") {
  Eigen::MatrixXcd L(2, 2);
  L << 1, 0, 0.7, 1;
  BoundaryForm U = validate_boundary_form({1, 0}, L);
  Eigen::MatrixXcd want(2, 2);
  want << 0.7, 1, 1, 0;  // U_1 = y^[1] + h y, U_2 = y
  CHECK((U.assembled() - want).norm() == 0.0);
  CHECK(U.l(2, 1) == cdouble(0.7));

  BoundaryForm I = validate_boundary_form({0, 1, 2}, Eigen::MatrixXcd::Identity(3, 3));
  CHECK((I.assembled() - Eigen::MatrixXcd::Identity(3, 3)).norm() == 0.0);

  CHECK(throws_kind(ErrorKind::NotAPermutation, [&] { validate_boundary_form({0, 0}, L); }));
  Eigen::MatrixXcd upper = Eigen::MatrixXcd::Identity(2, 2);
  upper(0, 1) = 1;
  CHECK(throws_kind(ErrorKind::NotUnitLowerTriangular, [&] { validate_boundary_form({0, 1}, upper); }));
  Eigen::MatrixXcd diag = Eigen::MatrixXcd::Identity(2, 2);
  diag(1, 1) = 2;
  CHECK(throws_kind(ErrorKind::NotUnitLowerTriangular, [&] { validate_boundary_form({0, 1}, diag); }));
  CHECK(throws_kind(ErrorKind::ShapeMismatch, [&] { validate_boundary_form({0, 1, 2}, L); }));

  // transformed(T) == L T^{-1}
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Identity(2, 2);
  T(1, 0) = -0.3;
  BoundaryForm moved = U.transformed(T);
  CHECK((moved.lower() * T - U.lower()).norm() < 1e-15);
}

TEST_CASE("coefficient kinds reduce to exact pieces") {
  Domain half = Domain::half_line();
  auto ind = CoefficientFunction::bump(0, 1, 1, BumpProfile::Indicator, half);
  CHECK(ind(0.5) == 1.0);
  CHECK(ind(2.0) == 0.0);
  CHECK(ind.integral() == 1);
  CHECK(ind.absolutely_integrable());
  CHECK(ind.square_integrable());
  CHECK_FALSE(ind.continuous_at_zero());
  CHECK(throws_kind(ErrorKind::NonDifferentiableKind, [&] { (void)ind.derivative(); }));

  // max(0, 1 - x)
  auto tail = ind.tail_integral();
  for (Rational x : {Rational(0), Rational(1, 3), Rational(1), Rational(5)}) {
    Rational want = x < 1 ? 1 - x : Rational(0);
    CHECK(tail.value(x) == want);
  }

  auto hat = CoefficientFunction::bump(Rational(1, 2), Rational(5, 2), 3, BumpProfile::Hat, half);
  CHECK(hat.integral() == 3);  // (b - a) h / 2
  CHECK(hat.value(Rational(3, 2)) == 3);
  CHECK(hat.continuous_on_interior());

  // 16 h int t^2 (1 - t)^2 (b - a) = 8 h (b - a) / 15
  auto smooth = CoefficientFunction::bump(1, 3, 2, BumpProfile::Smooth, half);
  CHECK(smooth.integral() == Rational(8 * 2 * 2, 15));
  CHECK(smooth.value(2) == 2);
  CHECK(smooth.derivative().value(2) == 0);

  auto poly = CoefficientFunction::polynomial(RationalPolynomial::x(), half);
  CHECK_FALSE(poly.absolutely_integrable());
  CHECK(throws_kind(ErrorKind::NonIntegrableTail, [&] { (void)poly.tail_integral(); }));

  auto lin = CoefficientFunction::piecewise_linear({0, 1}, {1, 0}, half);
  CHECK(lin.continuous_at_zero());
  CHECK(lin.value(0) == 1);
  CHECK(lin.support_end() == Rational(1));

  Domain unit = Domain::interval(1);
  auto c = CoefficientFunction::constant(Rational(1, 2), unit);
  CHECK(c.integral() == Rational(1, 2));
  CHECK(c.tail_integral().value(Rational(1, 4)) == Rational(3, 8));
  CHECK(c(1.0) == 0.5);  // left limit at the right end
  CHECK(throws_kind(ErrorKind::DomainViolation, [&] { (void)(c + ind); }));
}

TEST_CASE("coefficient calculus roundtrips") {
  Domain half = Domain::half_line();
  auto f = CoefficientFunction::bump(0, 2, 5, BumpProfile::Hat, half) +
           CoefficientFunction::bump(Rational(1, 2), 3, 1, BumpProfile::Smooth, half);
  CHECK((-f.tail_integral().derivative()) == f);
  CHECK(f.integral_from_zero().derivative() == f);
  auto g = f * f;
  CHECK(g.value(1) == f.value(1) * f.value(1));
  // one-sided evaluation at a kink
  auto ind = CoefficientFunction::bump(1, 2, 1, BumpProfile::Indicator, half);
  CHECK(ind.at(1.0, 0.5) == 0.0);
  CHECK(ind.at(1.0, 1.5) == 1.0);
  CHECK(ind.right_limit(1) == 1);
  CHECK(ind.left_limit(1) == 0);
}
