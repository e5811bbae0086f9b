#pragma once

// Exact arithmetic kernel: rationals, univariate polynomials over Q, and
// polynomials in the formal coefficient symbols s0, s1, ... used for the
// symbolic regularization matrices.

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace distweyl {

using Rational = mpq_class;

/// Exact conversion (every finite double is a dyadic rational).
Rational rational_from_double(double value);
/// Parses "3", "-7/2" or a decimal such as "0.25" exactly.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& value);
Rational binomial(int n, int k);  // C(n, -1) == 0 by convention

class RationalPolynomial {
 public:
  RationalPolynomial() = default;
  explicit RationalPolynomial(std::vector<Rational> coefficients);

  static RationalPolynomial constant(const Rational& value);
  static RationalPolynomial monomial(const Rational& coefficient, std::size_t degree);
  static RationalPolynomial x() { return monomial(1, 1); }

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coefficients_.size()) - 1; }
  bool is_zero() const { return coefficients_.empty(); }
  const std::vector<Rational>& coefficients() const { return coefficients_; }
  Rational coefficient(std::size_t power) const;

  RationalPolynomial derivative() const;
  /// Antiderivative with zero constant term.
  RationalPolynomial antiderivative() const;
  /// p(x + shift), computed exactly.
  RationalPolynomial shifted(const Rational& shift) const;

  Rational operator()(const Rational& x) const;
  double evaluate(double x) const;

  RationalPolynomial& operator+=(const RationalPolynomial& other);
  RationalPolynomial& operator-=(const RationalPolynomial& other);
  RationalPolynomial& operator*=(const RationalPolynomial& other);
  RationalPolynomial& operator*=(const Rational& scalar);

  friend RationalPolynomial operator+(RationalPolynomial a, const RationalPolynomial& b) { return a += b; }
  friend RationalPolynomial operator-(RationalPolynomial a, const RationalPolynomial& b) { return a -= b; }
  friend RationalPolynomial operator*(RationalPolynomial a, const RationalPolynomial& b) { return a *= b; }
  friend RationalPolynomial operator*(RationalPolynomial a, const Rational& s) { return a *= s; }
  friend RationalPolynomial operator*(const Rational& s, RationalPolynomial a) { return a *= s; }
  RationalPolynomial operator-() const;

  friend bool operator==(const RationalPolynomial& a, const RationalPolynomial& b) {
    return a.coefficients_ == b.coefficients_;
  }

  std::string to_string(const std::string& variable = "x") const;

 private:
  void trim();

  std::vector<Rational> coefficients_;  // ascending powers, no trailing zero
};

std::ostream& operator<<(std::ostream& os, const RationalPolynomial& p);

/// Polynomial with rational coefficients in the symbols s0, s1, ...
///
/// A monomial is the sorted multiset of its symbol indices ({0, 0, 2} is
/// s0^2*s2). Terms are kept in lexicographic order of that multiset, which
/// puts lower symbol indices first: "2*s0 - s2^2".
class SigmaExpression {
 public:
  using Monomial = std::vector<unsigned>;

  SigmaExpression() = default;
  SigmaExpression(int value) : SigmaExpression(Rational(value)) {}  // NOLINT
  SigmaExpression(const Rational& value);                           // NOLINT

  static SigmaExpression symbol(unsigned index);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// True when every term has total degree <= 1.
  bool is_affine() const;
  const std::map<Monomial, Rational>& terms() const { return terms_; }
  /// Largest symbol index present, or -1.
  int max_symbol() const;
  bool contains_symbol(unsigned index) const;

  /// Drops every term containing one of `symbols` (i.e. sets them to zero).
  SigmaExpression without_symbols(std::span<const unsigned> symbols) const;
  /// Replaces each symbol s_k by values[k]; symbols beyond values.size() must not occur.
  RationalPolynomial substitute(std::span<const RationalPolynomial> values) const;
  Rational evaluate(std::span<const Rational> values) const;
  double evaluate(std::span<const double> values) const;

  SigmaExpression& operator+=(const SigmaExpression& other);
  SigmaExpression& operator-=(const SigmaExpression& other);
  SigmaExpression& operator*=(const SigmaExpression& other);

  friend SigmaExpression operator+(SigmaExpression a, const SigmaExpression& b) { return a += b; }
  friend SigmaExpression operator-(SigmaExpression a, const SigmaExpression& b) { return a -= b; }
  friend SigmaExpression operator*(SigmaExpression a, const SigmaExpression& b) { return a *= b; }
  SigmaExpression operator-() const;

  friend bool operator==(const SigmaExpression& a, const SigmaExpression& b) { return a.terms_ == b.terms_; }

  /// Canonical rendering, e.g. "-s0^2", "2*s0 - s2^2", "0".
  std::string to_string() const;
  std::string to_latex() const;

 private:
  void add_term(const Monomial& monomial, const Rational& coefficient);

  std::map<Monomial, Rational> terms_;
};

std::ostream& operator<<(std::ostream& os, const SigmaExpression& e);

/// Dense row-major matrix of SigmaExpression; indices are 0-based.
class SymbolicMatrix {
 public:
  SymbolicMatrix() = default;
  SymbolicMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  SigmaExpression& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const SigmaExpression& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  SigmaExpression trace() const;
  SymbolicMatrix without_symbols(std::span<const unsigned> symbols) const;

  friend bool operator==(const SymbolicMatrix&, const SymbolicMatrix&) = default;

  std::vector<std::vector<std::string>> to_strings() const;
  std::string to_latex() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<SigmaExpression> data_;
};

}  // namespace distweyl
