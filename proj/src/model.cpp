#include "distweyl/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "distweyl/error.hpp"

namespace distweyl {

int SingularityOrders::max_order(int nu) const {
  int k = nu / 2;
  return nu % 2 == 0 ? m() - k : m() - k - 1;
}

SingularityOrders validate_orders(int n, std::vector<int> orders) {
  if (n < 2) throw Error(ErrorKind::LengthMismatch, "operator order must be at least 2");
  if (static_cast<int>(orders.size()) != n - 1) {
    throw Error(ErrorKind::LengthMismatch,
                "expected " + std::to_string(n - 1) + " orders, got " + std::to_string(orders.size()));
  }
  SingularityOrders out{n, std::move(orders)};
  for (int nu = 0; nu < n - 1; ++nu) {
    int i = out.orders[nu];
    if (i < 0 || i > out.max_order(nu)) {
      throw Error(ErrorKind::OrderOutOfRange, "order of sigma_" + std::to_string(nu) + " is " + std::to_string(i) +
                                                  ", allowed 0.." + std::to_string(out.max_order(nu)));
    }
  }
  return out;
}

std::set<int> singular_set(const SingularityOrders& orders) {
  std::set<int> k;
  if (orders.tau() == 1) return k;
  for (int nu = 0; nu < orders.n - 1; ++nu) {
    if (orders.orders[nu] == orders.max_order(nu)) k.insert(nu);
  }
  return k;
}

std::vector<unsigned> CoefficientSet::vanishing() const {
  std::vector<unsigned> out;
  for (unsigned nu = 0; nu < sigma.size(); ++nu) {
    if (sigma[nu].is_zero()) out.push_back(nu);
  }
  return out;
}

CoefficientSet make_coefficient_set(const SingularityOrders& orders, std::vector<CoefficientFunction> sigma) {
  if (static_cast<int>(sigma.size()) != orders.n - 1) {
    throw Error(ErrorKind::LengthMismatch, "expected " + std::to_string(orders.n - 1) + " coefficients");
  }
  for (const auto& s : sigma) {
    if (!(s.domain() == sigma.front().domain())) {
      throw Error(ErrorKind::DomainViolation, "coefficients must share one domain");
    }
  }
  for (int nu : singular_set(orders)) {
    if (!sigma[nu].square_integrable()) {
      throw Error(ErrorKind::NonIntegrableTail, "sigma_" + std::to_string(nu) + " must be square integrable");
    }
  }
  return CoefficientSet{orders, std::move(sigma)};
}

namespace {

double tie_tolerance(cdouble rho) { return 1e-12 * std::max(1.0, std::abs(rho)); }

double arg_2pi(cdouble z) {
  double a = std::arg(z);
  return a < 0 ? a + 2 * std::numbers::pi : a;
}

}  // namespace

bool SectorContext::tie_after(int k, double tolerance) const {
  if (k < 1 || k >= n) return false;
  double a = (rho * roots[k - 1]).real();
  double b = (rho * roots[k]).real();
  return std::abs(a - b) <= tolerance * std::max(1.0, std::abs(rho));
}

int sector_of(cdouble rho, int n) {
  if (rho == cdouble(0.0)) throw Error(ErrorKind::ZeroRho, "rho must be nonzero");
  int k = static_cast<int>(std::floor(arg_2pi(rho) / (std::numbers::pi / n))) + 1;
  return std::clamp(k, 1, 2 * n);
}

SectorContext order_roots(cdouble rho, int n) {
  if (rho == cdouble(0.0)) throw Error(ErrorKind::ZeroRho, "rho must be nonzero");
  SectorContext ctx;
  ctx.n = n;
  ctx.rho = rho;
  ctx.sector = sector_of(rho, n);
  for (int j = 0; j < n; ++j) ctx.roots.push_back(std::polar(1.0, 2 * std::numbers::pi * j / n));
  const double tol = tie_tolerance(rho);
  std::sort(ctx.roots.begin(), ctx.roots.end(), [&](cdouble a, cdouble b) {
    cdouble ra = rho * a;
    cdouble rb = rho * b;
    if (std::abs(ra.real() - rb.real()) > tol) return ra.real() < rb.real();
    return ra.imag() < rb.imag();
  });
  return ctx;
}

cdouble rho_from_lambda(cdouble lambda, int n, std::optional<int> sector) {
  if (lambda == cdouble(0.0)) throw Error(ErrorKind::ZeroRho, "lambda = 0 has rho = 0");
  double r = std::pow(std::abs(lambda), 1.0 / n);
  double theta = arg_2pi(lambda) / n;
  if (!sector) return std::polar(r, theta);
  int k = *sector;
  if (k < 1 || k > 2 * n) throw Error(ErrorKind::InvalidConfig, "sector index must lie in 1..2n");
  const double w = std::numbers::pi / n;
  const double lo = w * (k - 1) - 1e-12;
  const double hi = w * k + 1e-12;
  for (int j = 0; j < n; ++j) {
    double a = theta + 2 * std::numbers::pi * j / n;
    if (a >= lo && a <= hi) return std::polar(r, a);
  }
  // arg may also wrap around 2pi for the last sector
  if (k == 2 * n && std::abs(theta) <= 1e-12) return std::polar(r, 2 * std::numbers::pi);
  throw Error(ErrorKind::DomainViolation, "lambda has no n-th root in sector " + std::to_string(k));
}

BoundaryForm::BoundaryForm(std::vector<int> permutation, Eigen::MatrixXcd lower)
    : permutation_(std::move(permutation)), lower_(std::move(lower)) {
  const int n = static_cast<int>(permutation_.size());
  std::vector<bool> seen(n, false);
  for (int p : permutation_) {
    if (p < 0 || p >= n || seen[p]) throw Error(ErrorKind::NotAPermutation, "permutation must be a bijection of 0..n-1");
    seen[p] = true;
  }
  if (lower_.rows() != n || lower_.cols() != n) throw Error(ErrorKind::ShapeMismatch, "L must be n x n");
  for (int r = 0; r < n; ++r) {
    if (lower_(r, r) != cdouble(1.0)) throw Error(ErrorKind::NotUnitLowerTriangular, "L needs a unit diagonal");
    for (int c = r + 1; c < n; ++c) {
      if (lower_(r, c) != cdouble(0.0)) throw Error(ErrorKind::NotUnitLowerTriangular, "L has entries above the diagonal");
    }
  }
}

Eigen::MatrixXcd BoundaryForm::permutation_matrix() const {
  const int n = size();
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n, n);
  for (int s = 0; s < n; ++s) p(s, permutation_[s]) = 1.0;
  return p;
}

Eigen::MatrixXcd BoundaryForm::assembled() const { return permutation_matrix() * lower_; }

BoundaryForm BoundaryForm::transformed(const Eigen::MatrixXcd& T) const {
  const int n = size();
  if (T.rows() != n || T.cols() != n) throw Error(ErrorKind::ShapeMismatch, "transform must be n x n");
  Eigen::MatrixXcd t_inv = T.triangularView<Eigen::UnitLower>().solve(Eigen::MatrixXcd::Identity(n, n));
  Eigen::MatrixXcd l = lower_ * t_inv;
  // products of triangular factors keep exact zeros; force the unit diagonal against rounding
  for (int r = 0; r < n; ++r) {
    l(r, r) = 1.0;
    for (int c = r + 1; c < n; ++c) l(r, c) = 0.0;
  }
  return BoundaryForm(permutation_, std::move(l));
}

BoundaryForm validate_boundary_form(std::vector<int> permutation, Eigen::MatrixXcd lower) {
  return BoundaryForm(std::move(permutation), std::move(lower));
}

}  // namespace distweyl
