#include "distweyl/coefficient.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "distweyl/error.hpp"

namespace distweyl {

Domain Domain::interval(const Rational& length) {
  if (length <= 0) throw Error(ErrorKind::DomainViolation, "interval length must be positive");
  return Domain{length};
}

double Domain::end() const {
  return length ? length->get_d() : std::numeric_limits<double>::infinity();
}

CoefficientFunction::CoefficientFunction(std::vector<Rational> breaks, std::vector<RationalPolynomial> pieces,
                                         Domain domain, CoefficientKind kind)
    : domain_(std::move(domain)), kind_(kind), breaks_(std::move(breaks)), pieces_(std::move(pieces)) {
  if (breaks_.size() != pieces_.size() || breaks_.empty()) {
    throw Error(ErrorKind::LengthMismatch, "need one polynomial piece per breakpoint");
  }
  if (breaks_.front() != 0) throw Error(ErrorKind::DomainViolation, "first breakpoint must be 0");
  for (std::size_t i = 1; i < breaks_.size(); ++i) {
    if (breaks_[i] <= breaks_[i - 1]) throw Error(ErrorKind::DomainViolation, "breakpoints must increase strictly");
  }
  if (domain_.length && breaks_.back() >= *domain_.length) {
    throw Error(ErrorKind::DomainViolation, "breakpoint at or beyond the end of the interval");
  }
  normalize();
}

void CoefficientFunction::normalize() {
  std::vector<Rational> b;
  std::vector<RationalPolynomial> p;
  for (std::size_t i = 0; i < breaks_.size(); ++i) {
    if (!p.empty() && p.back() == pieces_[i]) continue;
    b.push_back(breaks_[i]);
    p.push_back(pieces_[i]);
  }
  breaks_ = std::move(b);
  pieces_ = std::move(p);
  breaks_d_.clear();
  local_.clear();
  for (std::size_t i = 0; i < breaks_.size(); ++i) {
    breaks_d_.push_back(breaks_[i].get_d());
    std::vector<double> c;
    RationalPolynomial local = pieces_[i].shifted(breaks_[i]);
    for (const auto& q : local.coefficients()) c.push_back(q.get_d());
    local_.push_back(std::move(c));
  }
}

CoefficientFunction CoefficientFunction::zero(const Domain& domain) {
  return {{Rational(0)}, {RationalPolynomial()}, domain, CoefficientKind::Constant};
}

CoefficientFunction CoefficientFunction::constant(const Rational& value, const Domain& domain) {
  return {{Rational(0)}, {RationalPolynomial::constant(value)}, domain, CoefficientKind::Constant};
}

CoefficientFunction CoefficientFunction::polynomial(const RationalPolynomial& p, const Domain& domain) {
  return {{Rational(0)}, {p}, domain, CoefficientKind::ExactPolynomial};
}

namespace {

// Wraps pieces living on [start, stop) with zero pieces on [0, start) and
// [stop, end of domain).
void embed_support(const Rational& start, const Rational& stop, const Domain& domain, std::vector<Rational>& breaks,
                   std::vector<RationalPolynomial>& pieces) {
  if (start < 0) throw Error(ErrorKind::DomainViolation, "support starts before 0");
  if (domain.length && stop > *domain.length) throw Error(ErrorKind::DomainViolation, "support ends beyond the interval");
  if (start > 0) {
    breaks.insert(breaks.begin(), Rational(0));
    pieces.insert(pieces.begin(), RationalPolynomial());
  }
  if (!domain.length || stop < *domain.length) {
    breaks.push_back(stop);
    pieces.emplace_back();
  }
}

RationalPolynomial line_through(const Rational& x0, const Rational& y0, const Rational& x1, const Rational& y1) {
  Rational slope = (y1 - y0) / (x1 - x0);
  return RationalPolynomial({Rational(y0 - slope * x0), slope});
}

}  // namespace

CoefficientFunction CoefficientFunction::piecewise_linear(const std::vector<Rational>& xs,
                                                          const std::vector<Rational>& ys, const Domain& domain) {
  if (xs.size() != ys.size()) throw Error(ErrorKind::LengthMismatch, "piecewise_linear: xs and ys differ in length");
  if (xs.size() < 2) throw Error(ErrorKind::LengthMismatch, "piecewise_linear: need at least two nodes");
  std::vector<Rational> breaks;
  std::vector<RationalPolynomial> pieces;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (xs[i + 1] <= xs[i]) throw Error(ErrorKind::DomainViolation, "piecewise_linear: nodes must increase");
    breaks.push_back(xs[i]);
    pieces.push_back(line_through(xs[i], ys[i], xs[i + 1], ys[i + 1]));
  }
  embed_support(xs.front(), xs.back(), domain, breaks, pieces);
  return {std::move(breaks), std::move(pieces), domain, CoefficientKind::PiecewiseLinear};
}

CoefficientFunction CoefficientFunction::bump(const Rational& a, const Rational& b, const Rational& height,
                                              BumpProfile profile, const Domain& domain) {
  if (b <= a) throw Error(ErrorKind::DomainViolation, "bump: empty support");
  std::vector<Rational> breaks;
  std::vector<RationalPolynomial> pieces;
  switch (profile) {
    case BumpProfile::Indicator:
      breaks = {a};
      pieces = {RationalPolynomial::constant(height)};
      break;
    case BumpProfile::Hat: {
      Rational mid = (a + b) / 2;
      breaks = {a, mid};
      pieces = {line_through(a, 0, mid, height), line_through(mid, height, b, 0)};
      break;
    }
    case BumpProfile::Smooth: {
      // 16 h (x-a)^2 (b-x)^2 / (b-a)^4, C^1 with peak h at the midpoint
      RationalPolynomial left({Rational(-a), Rational(1)});
      RationalPolynomial right({b, Rational(-1)});
      Rational w = b - a;
      Rational scale = 16 * height / (w * w * w * w);
      breaks = {a};
      pieces = {scale * (left * left * right * right)};
      break;
    }
  }
  embed_support(a, b, domain, breaks, pieces);
  CoefficientFunction f(std::move(breaks), std::move(pieces), domain, CoefficientKind::CompactBump);
  f.bump_profile_ = profile;
  return f;
}

CoefficientFunction CoefficientFunction::piecewise(std::vector<Rational> breaks, std::vector<RationalPolynomial> pieces,
                                                   const Domain& domain) {
  return {std::move(breaks), std::move(pieces), domain, CoefficientKind::PiecewisePolynomial};
}

std::size_t CoefficientFunction::piece_index(double x) const {
  auto it = std::upper_bound(breaks_d_.begin(), breaks_d_.end(), x);
  return it == breaks_d_.begin() ? 0 : static_cast<std::size_t>(it - breaks_d_.begin()) - 1;
}

std::size_t CoefficientFunction::piece_index(const Rational& x) const {
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  return it == breaks_.begin() ? 0 : static_cast<std::size_t>(it - breaks_.begin()) - 1;
}

double CoefficientFunction::operator()(double x) const { return at(x, x); }

double CoefficientFunction::at(double x, double reference) const {
  std::size_t i = piece_index(reference);
  const auto& c = local_[i];
  double t = x - breaks_d_[i];
  double acc = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * t + c[k];
  return acc;
}

Rational CoefficientFunction::value(const Rational& x) const { return right_limit(x); }

Rational CoefficientFunction::right_limit(const Rational& x) const { return pieces_[piece_index(x)](x); }

Rational CoefficientFunction::left_limit(const Rational& x) const {
  auto it = std::lower_bound(breaks_.begin(), breaks_.end(), x);
  std::size_t i = it == breaks_.begin() ? 0 : static_cast<std::size_t>(it - breaks_.begin()) - 1;
  return pieces_[i](x);
}

bool CoefficientFunction::is_zero() const {
  return std::all_of(pieces_.begin(), pieces_.end(), [](const auto& p) { return p.is_zero(); });
}

const RationalPolynomial& CoefficientFunction::as_polynomial() const {
  if (!is_polynomial()) throw Error(ErrorKind::NonPolynomialCoefficient, "coefficient has several pieces");
  return pieces_.front();
}

bool CoefficientFunction::absolutely_integrable() const {
  return !domain_.is_half_line() || pieces_.back().is_zero();
}

bool CoefficientFunction::square_integrable() const { return absolutely_integrable(); }

bool CoefficientFunction::continuous_on_interior() const {
  for (std::size_t i = 1; i < breaks_.size(); ++i) {
    if (pieces_[i - 1](breaks_[i]) != pieces_[i](breaks_[i])) return false;
  }
  return true;
}

bool CoefficientFunction::continuous_at_zero() const {
  return !(kind_ == CoefficientKind::CompactBump && right_limit(Rational(0)) != 0);
}

std::optional<Rational> CoefficientFunction::support_end() const {
  if (is_zero()) return Rational(0);
  if (!pieces_.back().is_zero()) {
    if (domain_.length) return *domain_.length;
    return std::nullopt;
  }
  return breaks_.back();
}

std::vector<double> CoefficientFunction::breakpoints_in(double a, double b) const {
  if (a > b) std::swap(a, b);
  std::vector<double> out;
  for (double x : breaks_d_) {
    if (x > a && x < b) out.push_back(x);
  }
  return out;
}

CoefficientFunction CoefficientFunction::derivative() const {
  if (!continuous_on_interior()) {
    throw Error(ErrorKind::NonDifferentiableKind, "derivative of a function with an interior jump is a distribution");
  }
  std::vector<RationalPolynomial> d;
  for (const auto& p : pieces_) d.push_back(p.derivative());
  return {breaks_, std::move(d), domain_, CoefficientKind::PiecewisePolynomial};
}

Rational CoefficientFunction::integral() const {
  if (!absolutely_integrable()) throw Error(ErrorKind::NonIntegrableTail, "coefficient has no compact support");
  Rational total = 0;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (pieces_[i].is_zero()) continue;
    Rational hi = i + 1 < breaks_.size() ? breaks_[i + 1] : *domain_.length;
    RationalPolynomial anti = pieces_[i].antiderivative();
    total += anti(hi) - anti(breaks_[i]);
  }
  return total;
}

CoefficientFunction CoefficientFunction::integral_from_zero() const {
  std::vector<RationalPolynomial> g;
  Rational acc = 0;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    RationalPolynomial anti = pieces_[i].antiderivative();
    g.push_back(anti + RationalPolynomial::constant(acc - anti(breaks_[i])));
    if (i + 1 < breaks_.size()) acc += anti(breaks_[i + 1]) - anti(breaks_[i]);
  }
  return {breaks_, std::move(g), domain_, CoefficientKind::PiecewisePolynomial};
}

CoefficientFunction CoefficientFunction::tail_integral() const {
  Rational total = integral();
  CoefficientFunction g = integral_from_zero();
  std::vector<RationalPolynomial> t;
  for (const auto& p : g.pieces_) t.push_back(RationalPolynomial::constant(total) - p);
  return {g.breaks_, std::move(t), domain_, CoefficientKind::PiecewisePolynomial};
}

template <class Op>
CoefficientFunction CoefficientFunction::combine(const CoefficientFunction& other, Op op) const {
  if (!(domain_ == other.domain_)) throw Error(ErrorKind::DomainViolation, "coefficients live on different domains");
  std::vector<Rational> breaks;
  std::merge(breaks_.begin(), breaks_.end(), other.breaks_.begin(), other.breaks_.end(), std::back_inserter(breaks));
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  std::vector<RationalPolynomial> pieces;
  for (const auto& b : breaks) pieces.push_back(op(pieces_[piece_index(b)], other.pieces_[other.piece_index(b)]));
  return {std::move(breaks), std::move(pieces), domain_, CoefficientKind::PiecewisePolynomial};
}

CoefficientFunction& CoefficientFunction::operator+=(const CoefficientFunction& other) {
  return *this = combine(other, [](const auto& a, const auto& b) { return a + b; });
}

CoefficientFunction& CoefficientFunction::operator-=(const CoefficientFunction& other) {
  return *this = combine(other, [](const auto& a, const auto& b) { return a - b; });
}

CoefficientFunction& CoefficientFunction::operator*=(const CoefficientFunction& other) {
  return *this = combine(other, [](const auto& a, const auto& b) { return a * b; });
}

CoefficientFunction& CoefficientFunction::operator*=(const Rational& scalar) {
  for (auto& p : pieces_) p *= scalar;
  kind_ = CoefficientKind::PiecewisePolynomial;
  bump_profile_.reset();
  normalize();
  return *this;
}

CoefficientFunction& CoefficientFunction::operator+=(const Rational& constant) {
  for (auto& p : pieces_) p += RationalPolynomial::constant(constant);
  kind_ = CoefficientKind::PiecewisePolynomial;
  bump_profile_.reset();
  normalize();
  return *this;
}

CoefficientFunction CoefficientFunction::operator-() const {
  CoefficientFunction f = *this;
  f *= Rational(-1);
  return f;
}

}  // namespace distweyl
