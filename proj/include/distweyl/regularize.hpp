#pragma once

// The associated-matrix construction: chi blocks, Q = sum sigma_nu chi_{nu,i_nu},
// the map Q -> F and its inverse, structural checks, and a numeric F(x).

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

#include "distweyl/model.hpp"
#include "distweyl/symbolic.hpp"

namespace distweyl {

struct ChiMatrix {
  int nu = 0;
  int i = 0;
  int m = 0;
  std::vector<std::vector<long long>> entries;  // (m+1) x (m+1)

  long long operator()(int r, int c) const { return entries[r][c]; }
};

/// Throws IndexOutOfRange when nu > 2m-1 or i exceeds the bound for nu.
ChiMatrix chi_matrix(int nu, int i, int m);

/// Symbolic Q for the given orders; symbols listed in `vanishing` are set to 0.
SymbolicMatrix build_Q(const SingularityOrders& orders, std::span<const unsigned> vanishing = {});

/// Q ((m+1) x (m+1)) -> F (n x n). Throws ShapeMismatch.
SymbolicMatrix s_map(const SymbolicMatrix& Q, int n);

/// F -> Q with q_{m,m} = 0 for even n. Throws StructureViolation when F
/// breaks conditions (i)-(iii).
SymbolicMatrix s_inverse(const SymbolicMatrix& F, int n);

struct StructureReport {
  bool shape = true;
  bool zero_above_superdiagonal = true;  // (i)
  bool unit_superdiagonal = true;        // (ii)
  bool zero_blocks = true;               // (iii)
  bool trace_zero = true;
  std::vector<std::string> failures;

  bool ok() const { return shape && zero_above_superdiagonal && unit_superdiagonal && zero_blocks && trace_zero; }
};

StructureReport check_structure(const SymbolicMatrix& F);

/// F = s_map(build_Q(orders)).
SymbolicMatrix build_F_symbolic(const SingularityOrders& orders, std::span<const unsigned> vanishing = {});

/// Exact substitution of coefficient functions for the symbols of `e`.
CoefficientFunction substitute(const SigmaExpression& e, std::span<const CoefficientFunction> symbols,
                               const Domain& domain);

/// A numeric matrix function F(x) obtained from a symbolic matrix by exact
/// substitution of piecewise-polynomial coefficients.
class MatrixFunction {
 public:
  MatrixFunction() = default;
  MatrixFunction(const SymbolicMatrix& F, std::span<const CoefficientFunction> symbols, const Domain& domain);

  int size() const { return n_; }
  const Domain& domain() const { return domain_; }
  const CoefficientFunction& entry(int r, int c) const { return entries_[r * n_ + c]; }
  /// Sorted breakpoints of all entries, excluding 0.
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  /// Largest x beyond which F is constant, when it exists (0 for constant F).
  std::optional<double> constant_beyond() const { return constant_beyond_; }

  void evaluate(double x, Eigen::MatrixXd& out) const { evaluate(x, out, x); }
  /// Entries taken from the pieces containing `reference`.
  void evaluate(double x, Eigen::MatrixXd& out, double reference) const;
  Eigen::MatrixXd operator()(double x) const;

 private:
  int n_ = 0;
  Domain domain_;
  std::vector<CoefficientFunction> entries_;
  std::vector<int> active_;  // entries that are not identically zero
  std::vector<double> breakpoints_;
  std::optional<double> constant_beyond_;
};

/// Integrability of the entry blocks of F required on the half-line: L1 for
/// f_{k,j}, k > m, j <= m + tau, and additionally L2 for f_{k,m+1}, f_{m,j}
/// when n is even. Entries are exact piecewise polynomials, so each check is
/// decidable; failures name the offending entries (1-based).
std::vector<std::string> check_integrability(const MatrixFunction& F);

struct Regularization {
  SymbolicMatrix Q;
  SymbolicMatrix F;
  MatrixFunction eval;
  StructureReport structure;
};

/// F = S_n(Q_I(Sigma)) with identically vanishing coefficients dropped from
/// the symbolic form, plus the numeric evaluator.
Regularization build_F(const CoefficientSet& coeffs);

}  // namespace distweyl
