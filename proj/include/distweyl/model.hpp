#pragma once

// Problem data: singularity orders, the index set where the orders are
// maximal, root ordering in the rho-plane, and normalized boundary forms.

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <set>
#include <vector>

#include "distweyl/coefficient.hpp"

namespace distweyl {

using cdouble = std::complex<double>;

/// Orders i_0 .. i_{n-2} of the coefficients sigma_0 .. sigma_{n-2} for an
/// operator of order n = 2m + tau.
struct SingularityOrders {
  int n = 2;
  std::vector<int> orders;

  int m() const { return n / 2; }
  int tau() const { return n % 2; }
  /// Largest admissible order of sigma_nu.
  int max_order(int nu) const;
};

/// Throws LengthMismatch or OrderOutOfRange.
SingularityOrders validate_orders(int n, std::vector<int> orders);

/// Indices nu whose order is maximal; always empty for odd n.
std::set<int> singular_set(const SingularityOrders& orders);

/// Coefficients sigma_0 .. sigma_{n-2} on a common domain.
struct CoefficientSet {
  SingularityOrders orders;
  std::vector<CoefficientFunction> sigma;

  const Domain& domain() const { return sigma.front().domain(); }

  /// Indices whose coefficient vanishes identically.
  std::vector<unsigned> vanishing() const;
};

/// Checks sizes, a shared domain, and square integrability of sigma_nu for nu in K(I).
CoefficientSet make_coefficient_set(const SingularityOrders& orders, std::vector<CoefficientFunction> sigma);

/// The n-th roots of unity ordered so that Re(rho*w_1) <= ... <= Re(rho*w_n)
/// for rho in the chosen sector Gamma_k = (pi(k-1)/n, pi k/n).
struct SectorContext {
  int n = 0;
  cdouble rho;
  int sector = 1;
  std::vector<cdouble> roots;

  /// Re(rho*w_k) == Re(rho*w_{k+1}) up to `tolerance` (1-based k); the
  /// separation between decaying and growing modes is lost there.
  bool tie_after(int k, double tolerance = 1e-12) const;
};

/// Sector index (1..2n) whose closure contains arg(rho).
int sector_of(cdouble rho, int n);
SectorContext order_roots(cdouble rho, int n);

/// rho with rho^n == lambda. The principal branch has arg(rho) in [0, 2pi/n);
/// with `sector` the branch whose argument lies in that closed sector is used.
cdouble rho_from_lambda(cdouble lambda, int n, std::optional<int> sector = std::nullopt);

/// Normalized boundary form U = P L: P a permutation matrix whose row s picks
/// row p_s of the unit lower triangular L.
class BoundaryForm {
 public:
  BoundaryForm() = default;
  /// permutation[s] = p_s (0-based, a permutation of 0..n-1).
  BoundaryForm(std::vector<int> permutation, Eigen::MatrixXcd lower);

  int size() const { return static_cast<int>(permutation_.size()); }
  const std::vector<int>& permutation() const { return permutation_; }
  const Eigen::MatrixXcd& lower() const { return lower_; }
  /// l_{k,j} with 1-based indices as in the usual notation.
  cdouble l(int k, int j) const { return lower_(k - 1, j - 1); }
  Eigen::MatrixXcd permutation_matrix() const;
  Eigen::MatrixXcd assembled() const;
  /// Same permutation, L replaced by L * T^{-1} for unit lower triangular T.
  BoundaryForm transformed(const Eigen::MatrixXcd& T) const;

 private:
  std::vector<int> permutation_;
  Eigen::MatrixXcd lower_;
};

/// Throws NotAPermutation, NotUnitLowerTriangular or ShapeMismatch.
BoundaryForm validate_boundary_form(std::vector<int> permutation, Eigen::MatrixXcd lower);

}  // namespace distweyl
