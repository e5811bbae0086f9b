#pragma once

#include <optional>
#include <vector>

#include "distweyl/symbolic.hpp"

namespace distweyl {

/// [0, length] when `length` is set, otherwise the half-line [0, inf).
struct Domain {
  std::optional<Rational> length;

  static Domain half_line() { return {}; }
  static Domain interval(const Rational& length);

  bool is_half_line() const { return !length.has_value(); }
  double end() const;  // +inf for the half-line
  friend bool operator==(const Domain&, const Domain&) = default;
};

enum class CoefficientKind { ExactPolynomial, PiecewiseLinear, Constant, CompactBump, PiecewisePolynomial };
enum class BumpProfile { Indicator, Hat, Smooth };

/// A coefficient sigma(x) stored exactly as a piecewise polynomial with
/// rational breakpoints.
///
/// Piece i lives on [breaks[i], breaks[i+1]); the last piece runs to the end
/// of the domain. breaks[0] is always 0. Every constructor reduces to this
/// form, so arithmetic, derivatives and tail integrals stay exact. A double
/// shadow of each piece, expanded around its left breakpoint, is kept for fast
/// evaluation inside the ODE integrator.
class CoefficientFunction {
 public:
  CoefficientFunction() : CoefficientFunction(zero(Domain::half_line())) {}

  static CoefficientFunction zero(const Domain& domain);
  static CoefficientFunction constant(const Rational& value, const Domain& domain);
  static CoefficientFunction polynomial(const RationalPolynomial& p, const Domain& domain);
  /// Linear interpolation through (xs[i], ys[i]); zero outside [xs.front(), xs.back()].
  static CoefficientFunction piecewise_linear(const std::vector<Rational>& xs, const std::vector<Rational>& ys,
                                              const Domain& domain);
  /// Bump supported on [a, b] with peak value `height`.
  static CoefficientFunction bump(const Rational& a, const Rational& b, const Rational& height, BumpProfile profile,
                                  const Domain& domain);
  static CoefficientFunction piecewise(std::vector<Rational> breaks, std::vector<RationalPolynomial> pieces,
                                       const Domain& domain);

  CoefficientKind kind() const { return kind_; }
  const Domain& domain() const { return domain_; }
  const std::vector<Rational>& breaks() const { return breaks_; }
  const std::vector<RationalPolynomial>& pieces() const { return pieces_; }
  /// Construction parameters of a CompactBump (support and profile), if any.
  std::optional<BumpProfile> bump_profile() const { return bump_profile_; }

  /// Evaluates with one-sided limits at breakpoints (right limit, except the
  /// left limit at the right end of a finite domain).
  double operator()(double x) const;
  /// Evaluates the piece containing `reference` at x, so integrators can take
  /// one-sided limits at breakpoints.
  double at(double x, double reference) const;
  Rational value(const Rational& x) const;
  Rational right_limit(const Rational& x) const;
  Rational left_limit(const Rational& x) const;

  bool is_zero() const;
  bool is_polynomial() const { return pieces_.size() == 1; }
  /// The single polynomial piece; throws NonPolynomialCoefficient otherwise.
  const RationalPolynomial& as_polynomial() const;

  bool absolutely_integrable() const;
  bool square_integrable() const;
  /// Continuous at every breakpoint inside the open domain.
  bool continuous_on_interior() const;
  /// False only for a CompactBump whose support starts at 0 with a jump there.
  bool continuous_at_zero() const;
  /// Smallest x beyond which the function vanishes identically, if it exists.
  std::optional<Rational> support_end() const;
  /// Breakpoints (as doubles) in the open interval (a, b).
  std::vector<double> breakpoints_in(double a, double b) const;

  /// Classical derivative; NonDifferentiableKind when a jump would produce a delta.
  CoefficientFunction derivative() const;
  /// Integral over the whole domain; NonIntegrableTail on the half-line without compact support.
  Rational integral() const;
  /// x -> integral over [0, x].
  CoefficientFunction integral_from_zero() const;
  /// x -> integral over [x, end of domain]; NonIntegrableTail without compact support on the half-line.
  CoefficientFunction tail_integral() const;

  CoefficientFunction& operator+=(const CoefficientFunction& other);
  CoefficientFunction& operator-=(const CoefficientFunction& other);
  CoefficientFunction& operator*=(const CoefficientFunction& other);
  CoefficientFunction& operator*=(const Rational& scalar);
  CoefficientFunction& operator+=(const Rational& constant);

  friend CoefficientFunction operator+(CoefficientFunction a, const CoefficientFunction& b) { return a += b; }
  friend CoefficientFunction operator-(CoefficientFunction a, const CoefficientFunction& b) { return a -= b; }
  friend CoefficientFunction operator*(CoefficientFunction a, const CoefficientFunction& b) { return a *= b; }
  friend CoefficientFunction operator*(const Rational& s, CoefficientFunction a) { return a *= s; }
  CoefficientFunction operator-() const;

  /// Mathematical equality of the normalized representations (kind tags ignored).
  friend bool operator==(const CoefficientFunction& a, const CoefficientFunction& b) {
    return a.domain_ == b.domain_ && a.breaks_ == b.breaks_ && a.pieces_ == b.pieces_;
  }

 private:
  CoefficientFunction(std::vector<Rational> breaks, std::vector<RationalPolynomial> pieces, Domain domain,
                      CoefficientKind kind);

  std::size_t piece_index(double x) const;
  std::size_t piece_index(const Rational& x) const;
  void normalize();
  template <class Op>
  CoefficientFunction combine(const CoefficientFunction& other, Op op) const;

  Domain domain_;
  CoefficientKind kind_ = CoefficientKind::PiecewisePolynomial;
  std::optional<BumpProfile> bump_profile_;
  std::vector<Rational> breaks_;
  std::vector<RationalPolynomial> pieces_;
  std::vector<double> breaks_d_;
  std::vector<std::vector<double>> local_;  // piece i expanded in (x - breaks[i])
};

}  // namespace distweyl
