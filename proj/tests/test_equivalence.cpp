#include "doctest.h"

#include <cmath>
#include <numbers>

#include "distweyl/equivalence.hpp"
#include "distweyl/error.hpp"

using namespace distweyl;

namespace {

using Q = Rational;

BoundaryForm form(std::vector<int> perm, Eigen::MatrixXcd L) { return validate_boundary_form(std::move(perm), std::move(L)); }

Eigen::MatrixXcd unit_lower4() {
  Eigen::MatrixXcd L = Eigen::MatrixXcd::Identity(4, 4);
  L(1, 0) = 0.3;
  L(2, 0) = -0.2;
  L(2, 1) = 0.5;
  L(3, 0) = 0.7;
  L(3, 1) = -0.4;
  L(3, 2) = 0.25;
  return L;
}

ProblemSpec n4_spec(const Domain& d, std::vector<int> orders, CoefficientFunction s0, CoefficientFunction s2) {
  CoefficientSet c =
      make_coefficient_set(validate_orders(4, std::move(orders)), {std::move(s0), CoefficientFunction::zero(d), std::move(s2)});
  std::optional<BoundaryForm> V;
  if (!d.is_half_line()) {
    Eigen::MatrixXcd Lv = Eigen::MatrixXcd::Identity(4, 4);
    Lv(1, 0) = -0.6;
    Lv(2, 1) = 0.2;
    Lv(3, 0) = 0.1;
    Lv(3, 2) = -0.3;
    V = form({0, 1, 2, 3}, Lv);
  }
  return make_problem_spec(std::move(c), form({3, 2, 1, 0}, unit_lower4()), V);
}

std::vector<cdouble> complex_grid(int count, double r0, double r1) {
  std::vector<cdouble> out;
  for (int i = 0; i < count; ++i) {
    double r = r0 + (r1 - r0) * i / std::max(1, count - 1);
    out.push_back(std::polar(r, 0.4 + 2.1 * i / count));
  }
  return out;
}

double max_entry_change(const BoundaryForm& a, const BoundaryForm& b) { return (a.lower() - b.lower()).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("shift_n2 on the indicator bump") {
  Domain d = Domain::half_line();
  CoefficientFunction s0 = CoefficientFunction::bump(0, 1, 1, BumpProfile::Indicator, d);
  auto [tilde, h_tilde] = shift_n2(s0, 0.0, Direction::RaiseOrder);
  CHECK(h_tilde == cdouble(1.0));
  for (Q x : {Q(0), Q(1, 4), Q(1, 2), Q(1), Q(3), Q(100)}) {
    Q expect = x < 1 ? Q(1) - x : Q(0);
    CHECK(tilde.value(x) == expect);
  }
  auto [back, h] = shift_n2(tilde, h_tilde, Direction::LowerOrder);
  CHECK(back == s0);
  CHECK(h == cdouble(0.0));

  auto [z, hz] = shift_n2(CoefficientFunction::zero(d), cdouble(0.5, -1), Direction::RaiseOrder);
  CHECK(z.is_zero());
  CHECK(hz == cdouble(0.5, -1));

  CHECK_THROWS_AS(shift_n2(CoefficientFunction::constant(1, d), 0.0, Direction::RaiseOrder), Error);
}

TEST_CASE("shift_n2 roundtrips on piecewise polynomials") {
  Domain d = Domain::half_line();
  CoefficientFunction s0 = CoefficientFunction::bump(Q(1, 3), Q(5, 2), Q(-7, 4), BumpProfile::Smooth, d) +
                           CoefficientFunction::piecewise_linear({0, 1, 2}, {3, -1, 0}, d);
  auto [tilde, ht] = shift_n2(s0, cdouble(0.25), Direction::RaiseOrder);
  auto [back, h] = shift_n2(tilde, ht, Direction::LowerOrder);
  CHECK(back == s0);
  CHECK(std::abs(h - 0.25) < 1e-15);
}

TEST_CASE("n = 4 case 2 on the indicator") {
  Domain d = Domain::half_line();
  ProblemSpec spec = n4_spec(d, {0, 0, 1}, CoefficientFunction::bump(0, 1, 1, BumpProfile::Indicator, d),
                             CoefficientFunction::bump(Q(1, 2), 2, 3, BumpProfile::Hat, d));
  Eigen::MatrixXcd L = spec.U.lower();
  L(3, 0) = 0.0;
  spec.U = form({3, 2, 1, 0}, L);
  ProblemSpec t = shift_n4(spec, N4Case::Case2_01to11, Direction::RaiseOrder);
  CHECK(t.coeffs.orders.orders == std::vector<int>{1, 0, 1});
  CHECK(t.coeffs.sigma[0].value(Q(1, 4)) == Q(3, 4));
  CHECK(t.coeffs.sigma[0].value(Q(2)) == Q(0));
  CHECK(std::abs(t.U.l(4, 1) - 1.0) < 1e-15);
  CHECK(t.coeffs.sigma[2] == spec.coeffs.sigma[2]);
  for (auto [k, j] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {3, 2}, {4, 2}, {4, 3}}) {
    CHECK(t.U.l(k, j) == spec.U.l(k, j));
  }
  CHECK(t.U.permutation() == spec.U.permutation());

  ProblemSpec back = shift_n4(t, N4Case::Case2_01to11, Direction::LowerOrder);
  CHECK(back.coeffs.sigma[0] == spec.coeffs.sigma[0]);
  CHECK(max_entry_change(back.U, spec.U) < 1e-15);
}

TEST_CASE("n = 4 case 1 with sigma_2 = 0 is the identity") {
  Domain d = Domain::half_line();
  ProblemSpec spec = n4_spec(d, {1, 0, 0}, CoefficientFunction::bump(0, 1, 2, BumpProfile::Hat, d), CoefficientFunction::zero(d));
  CHECK_THROWS_AS(shift_n4(spec, N4Case::Case1_00to01, Direction::RaiseOrder), Error);  // wrong source orders
  spec = n4_spec(d, {0, 0, 0}, CoefficientFunction::bump(0, 1, 2, BumpProfile::Hat, d), CoefficientFunction::zero(d));
  ProblemSpec t = shift_n4(spec, N4Case::Case1_00to01, Direction::RaiseOrder);
  CHECK(t.coeffs.orders.orders == std::vector<int>{0, 0, 1});
  CHECK(t.coeffs.sigma[2].is_zero());
  CHECK(max_entry_change(t.U, spec.U) == 0.0);

  Domain f = Domain::interval(1);
  ProblemSpec fs = n4_spec(f, {0, 0, 0}, CoefficientFunction::zero(f), CoefficientFunction::zero(f));
  ProblemSpec ft = finite_shift_n4(fs, N4Case::Case1_00to01, Direction::RaiseOrder, fs.U.l(3, 2));
  CHECK(ft.coeffs.sigma[2].is_zero());
  CHECK(max_entry_change(ft.U, fs.U) == 0.0);
  CHECK(max_entry_change(*ft.V, *fs.V) == 0.0);
}

TEST_CASE("n = 4 case 3 boundary relations") {
  Domain d = Domain::half_line();
  // hat on [0, 2] of height 1: continuous at 0, integral 1, so s~0(0) = 1
  ProblemSpec spec = n4_spec(d, {1, 0, 0}, CoefficientFunction::bump(0, 2, 1, BumpProfile::Hat, d), CoefficientFunction::zero(d));
  Eigen::MatrixXcd L = spec.U.lower();
  L(3, 1) = 0.0;
  spec.U = form({3, 2, 1, 0}, L);
  ProblemSpec t = shift_n4(spec, N4Case::Case3_10to20, Direction::RaiseOrder);
  CHECK(t.coeffs.sigma[0].value(0) == Q(1));
  CHECK(std::abs(t.U.l(4, 2) - 1.0) < 1e-15);
  CHECK(std::abs(t.U.l(3, 1) - (spec.U.l(3, 1) - 1.0)) < 1e-15);
  CHECK(std::abs(t.U.l(4, 1) - (spec.U.l(4, 1) - spec.U.l(4, 3))) < 1e-15);

  // The Weyl matrix is unchanged with l~42 = 1 and changes with l~42 = 2.
  std::vector<cdouble> grid = complex_grid(4, 2.0, 8.0);
  DeviationReport same = weyl_invariance_check(to_weyl_problem(spec, 12), to_weyl_problem(t, 12), grid);
  CHECK(same.max_deviation < 1e-4);
  ProblemSpec other = t;
  Eigen::MatrixXcd Lo = other.U.lower();
  Lo(3, 1) = 2.0;
  other.U = form({3, 2, 1, 0}, Lo);
  DeviationReport off = weyl_invariance_check(to_weyl_problem(spec, 12), to_weyl_problem(other, 12), grid);
  CHECK(off.max_deviation > 1e-2);

  ProblemSpec jump = n4_spec(d, {1, 0, 0}, CoefficientFunction::bump(0, 1, 1, BumpProfile::Indicator, d),
                             CoefficientFunction::zero(d));
  CHECK_THROWS_AS(shift_n4(jump, N4Case::Case3_10to20, Direction::RaiseOrder), Error);
  try {
    shift_n4(jump, N4Case::Case3_10to20, Direction::RaiseOrder);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ContinuityAtZeroRequired);
  }
}

TEST_CASE("finite-interval shifts") {
  Domain d = Domain::interval(1);
  CoefficientSet c = make_coefficient_set(validate_orders(2, {0}), {CoefficientFunction::constant(1, d)});
  Eigen::MatrixXcd Lu = Eigen::MatrixXcd::Identity(2, 2);
  Eigen::MatrixXcd Lv = Eigen::MatrixXcd::Identity(2, 2);
  Lv(1, 0) = 0.75;
  ProblemSpec spec = make_problem_spec(c, form({1, 0}, Lu), form({0, 1}, Lv));
  ProblemSpec t = finite_shift_n2(spec, Direction::RaiseOrder, 0.0);
  CHECK(t.coeffs.sigma[0].value(Q(1, 3)) == Q(-1, 3));
  CHECK(t.coeffs.sigma[0].value(1) == Q(-1));
  CHECK(std::abs(t.U.l(2, 1)) < 1e-15);
  CHECK(std::abs(t.V->l(2, 1) - (0.75 - 1.0)) < 1e-15);
  CHECK_THROWS_AS(finite_shift_n2(spec, Direction::RaiseOrder, std::nullopt), Error);
  CHECK_THROWS_AS(finite_shift_n2(spec, Direction::RaiseOrder, cdouble(0, 1)), Error);
  CHECK_THROWS_AS(shift_n2(spec, Direction::RaiseOrder), Error);

  ProblemSpec back = finite_shift_n2(t, Direction::LowerOrder, std::nullopt);
  CHECK(back.coeffs.sigma[0] == spec.coeffs.sigma[0]);
  CHECK(max_entry_change(*back.V, *spec.V) < 1e-15);

  ProblemSpec s4 = n4_spec(d, {0, 0, 1}, CoefficientFunction::bump(0, Q(1, 2), 1, BumpProfile::Indicator, d),
                           CoefficientFunction::zero(d));
  Eigen::MatrixXcd L = s4.U.lower();
  L(3, 0) = 0.0;
  s4.U = form({3, 2, 1, 0}, L);
  ProblemSpec t4 = finite_shift_n4(s4, N4Case::Case2_01to11, Direction::RaiseOrder, 0.5);
  for (Q x : {Q(0), Q(1, 5), Q(1, 2), Q(3, 4), Q(1)}) {
    Q m = x < Q(1, 2) ? x : Q(1, 2);
    CHECK(t4.coeffs.sigma[0].value(x) == Q(1, 2) - m);
  }
  CHECK(std::abs(t4.U.l(4, 1) - 0.5) < 1e-15);
}

TEST_CASE("required_knowns table") {
  using V = std::vector<std::pair<int, int>>;
  CHECK(required_knowns(0, 0) == V{});
  CHECK(required_knowns(1, 0) == V{{4, 1}});
  CHECK(required_knowns(2, 0) == V{{3, 1}, {4, 1}});
  CHECK(required_knowns(0, 1) == V{{3, 2}});
  CHECK(required_knowns(1, 1) == V{{3, 2}, {4, 1}});
  CHECK(required_knowns(2, 1) == V{{3, 1}, {3, 2}, {4, 1}});
  CHECK_THROWS_AS(required_knowns(3, 0), Error);
  CHECK_THROWS_AS(required_knowns(0, 2), Error);
}

TEST_CASE("knowns_vectors") {
  BoundaryForm U = form({3, 2, 1, 0}, unit_lower4());
  KnownBoundaryData k = knowns_vectors(U, validate_orders(4, {2, 0, 1}));
  REQUIRE(k.L.size() == 3);
  REQUIRE(k.L[0].size() == 2);
  CHECK(k.L[0][0] == 2.0 * U.l(4, 1));
  CHECK(k.L[0][1] == U.l(3, 1) + U.l(4, 2));
  CHECK(k.L[1].empty());
  REQUIRE(k.L[2].size() == 1);
  CHECK(k.L[2][0] == U.l(3, 2) + U.l(3, 2));

  for (auto& v : knowns_vectors(U, validate_orders(4, {0, 0, 0})).L) CHECK(v.empty());

  Eigen::MatrixXcd L2 = Eigen::MatrixXcd::Identity(2, 2);
  L2(1, 0) = cdouble(0.5, 2);
  KnownBoundaryData k2 = knowns_vectors(form({1, 0}, L2), validate_orders(2, {1}));
  REQUIRE(k2.L[0].size() == 1);
  CHECK(k2.L[0][0] == cdouble(1, 4));
}

TEST_CASE("knowns_vectors lengths for every admissible I, n <= 8") {
  for (int n = 2; n <= 8; ++n) {
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = n - 1 - i;
    BoundaryForm U = form(perm, Eigen::MatrixXcd::Identity(n, n));
    std::vector<int> bounds(n - 1);
    for (int nu = 0; nu <= n - 2; ++nu) bounds[nu] = validate_orders(n, std::vector<int>(n - 1, 0)).max_order(nu);
    std::vector<int> I(n - 1, 0);
    int count = 0;
    while (true) {
      KnownBoundaryData k = knowns_vectors(U, validate_orders(n, I));
      for (int nu = 0; nu <= n - 2; ++nu) CHECK(static_cast<int>(k.L[nu].size()) == I[nu]);
      ++count;
      int pos = 0;
      while (pos < n - 1 && I[pos] == bounds[pos]) I[pos++] = 0;
      if (pos == n - 1) break;
      ++I[pos];
    }
    CHECK(count > 0);
  }
}

TEST_CASE("Weyl invariance of the correspondences") {
  Domain h = Domain::half_line();
  SUBCASE("identical problems") {
    ProblemSpec s = n4_spec(h, {1, 0, 1}, CoefficientFunction::bump(0, 1, 1, BumpProfile::Hat, h),
                            CoefficientFunction::bump(0, 1, -1, BumpProfile::Smooth, h));
    DeviationReport r = weyl_invariance_check(to_weyl_problem(s, 10), to_weyl_problem(s, 10), complex_grid(3, 2, 6));
    CHECK(r.max_deviation == 0.0);
    CHECK(r.samples == 3);
  }
  SUBCASE("n = 2 half-line bump pair") {
    CoefficientSet c = make_coefficient_set(validate_orders(2, {0}), {CoefficientFunction::bump(0, 1, 1, BumpProfile::Indicator, h)});
    Eigen::MatrixXcd L = Eigen::MatrixXcd::Identity(2, 2);
    L(1, 0) = 0.5;
    ProblemSpec s = make_problem_spec(c, form({1, 0}, L));
    ProblemSpec t = shift_n2(s, Direction::RaiseOrder);
    std::vector<cdouble> ray;
    for (double r : {1.0, 4.0, 16.0, 64.0}) ray.push_back(std::polar(r, 2.0));
    CHECK(weyl_invariance_check(to_weyl_problem(s), to_weyl_problem(t), ray).max_deviation <= 1e-4);
  }
  SUBCASE("n = 4 finite case 2") {
    Domain d = Domain::interval(1);
    ProblemSpec s = n4_spec(d, {0, 0, 1}, CoefficientFunction::bump(Q(1, 5), Q(3, 5), 2, BumpProfile::Hat, d),
                            CoefficientFunction::bump(Q(1, 10), Q(9, 10), -1, BumpProfile::Smooth, d));
    ProblemSpec t = finite_shift_n4(s, N4Case::Case2_01to11, Direction::RaiseOrder, 0.4);
    CHECK(weyl_invariance_check(to_weyl_problem(s), to_weyl_problem(t), complex_grid(5, 3, 40)).max_deviation <= 1e-6);
  }
  SUBCASE("geometries must agree") {
    Domain d = Domain::interval(1);
    ProblemSpec a = n4_spec(d, {0, 0, 0}, CoefficientFunction::zero(d), CoefficientFunction::zero(d));
    ProblemSpec b = n4_spec(h, {0, 0, 0}, CoefficientFunction::zero(h), CoefficientFunction::zero(h));
    CHECK_THROWS_AS(weyl_invariance_check(to_weyl_problem(a), to_weyl_problem(b), {4.0}), Error);
  }
}

TEST_CASE("V-equivalence for the reversed permutation") {
  Domain d = Domain::interval(1);
  MatrixFunction F = build_F(make_coefficient_set(validate_orders(4, {1, 0, 1}),
                                                  {CoefficientFunction::bump(Q(1, 5), Q(3, 5), 2, BumpProfile::Hat, d),
                                                   CoefficientFunction::zero(d),
                                                   CoefficientFunction::bump(Q(1, 10), Q(9, 10), -1, BumpProfile::Smooth, d)}))
                         .eval;
  BoundaryForm U = form({3, 2, 1, 0}, unit_lower4());
  BoundaryForm V = form({3, 2, 1, 0}, unit_lower4());
  Eigen::MatrixXcd Lp = unit_lower4();
  Lp(2, 0) += 7.0;  // v_{2,1}
  Lp(2, 1) += 7.0;  // v_{2,2}
  Lp(1, 0) += 7.0;  // v_{3,1}
  BoundaryForm V_alt = form({3, 2, 1, 0}, Lp);
  std::vector<cdouble> lambdas = complex_grid(4, 2, 30);
  std::vector<double> xs{0.0, 0.25, 0.5, 0.9, 1.0};

  VEquivalenceReport r = v_equivalence_check(F, U, V, V_alt, lambdas, xs);
  CHECK(r.deviation.max_deviation <= 1e-10);
  CHECK(r.same_permutation);
  CHECK(r.equivalent);
  CHECK(r.deviation.samples == lambdas.size() * xs.size());

  CHECK(v_equivalence_check(F, U, V, V, lambdas, xs).deviation.max_deviation == 0.0);

  // Phi_k only sees V_{k+1}, ..., V_n, so the V_1 row never enters either
  Eigen::MatrixXcd Lq = unit_lower4();
  Lq(3, 0) += 7.0;
  CHECK(v_equivalence_check(F, U, V, form({3, 2, 1, 0}, Lq), lambdas, xs).deviation.max_deviation <= 1e-10);

  // with the identity permutation V_2 = y' + v_{2,1} y does constrain Phi_1
  BoundaryForm Vi = form({0, 1, 2, 3}, unit_lower4());
  Eigen::MatrixXcd Lr = unit_lower4();
  Lr(1, 0) += 7.0;
  VEquivalenceReport q = v_equivalence_check(F, U, Vi, form({0, 1, 2, 3}, Lr), lambdas, xs);
  CHECK(q.deviation.max_deviation > 1e-2);
  CHECK(q.same_permutation);
  CHECK_FALSE(q.equivalent);

  VEquivalenceReport p = v_equivalence_check(F, U, V, form({0, 1, 2, 3}, Eigen::MatrixXcd::Identity(4, 4)), lambdas, xs);
  CHECK(p.deviation.max_deviation > 1e-2);
  CHECK_FALSE(p.same_permutation);
  CHECK_FALSE(p.equivalent);
}
