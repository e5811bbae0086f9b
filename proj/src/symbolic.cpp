#include "distweyl/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "distweyl/error.hpp"

namespace distweyl {

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw Error(ErrorKind::InvalidConfig, "non-finite number");
  Rational r(value);
  r.canonicalize();
  return r;
}

Rational parse_rational(const std::string& text) {
  std::string s = text;
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  if (s.empty()) throw Error(ErrorKind::InvalidConfig, "empty rational literal");
  try {
    const auto dot = s.find('.');
    const auto exp = s.find_first_of("eE");
    if (dot == std::string::npos && exp == std::string::npos) {
      Rational r(s, 10);
      r.canonicalize();
      return r;
    }
    // Decimal literal: read it as the exact decimal fraction, not the nearest double.
    std::string mantissa = exp == std::string::npos ? s : s.substr(0, exp);
    long exponent = exp == std::string::npos ? 0 : std::stol(s.substr(exp + 1));
    if (const auto d = mantissa.find('.'); d != std::string::npos) {
      exponent -= static_cast<long>(mantissa.size() - d - 1);
      mantissa.erase(d, 1);
    }
    mpz_class num(mantissa, 10);
    mpz_class scale = 1;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
    Rational r = exponent >= 0 ? Rational(num * scale) : Rational(num, scale);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw Error(ErrorKind::InvalidConfig, "malformed rational literal '" + text + "'");
  }
}

std::string to_string(const Rational& value) { return value.get_str(); }

Rational binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(r);
}

// ---------------------------------------------------------------------------
// RationalPolynomial

RationalPolynomial::RationalPolynomial(std::vector<Rational> coefficients) : coefficients_(std::move(coefficients)) {
  trim();
}

RationalPolynomial RationalPolynomial::constant(const Rational& value) { return RationalPolynomial({value}); }

RationalPolynomial RationalPolynomial::monomial(const Rational& coefficient, std::size_t degree) {
  std::vector<Rational> c(degree + 1);
  c[degree] = coefficient;
  return RationalPolynomial(std::move(c));
}

void RationalPolynomial::trim() {
  while (!coefficients_.empty() && coefficients_.back() == 0) coefficients_.pop_back();
}

Rational RationalPolynomial::coefficient(std::size_t power) const {
  return power < coefficients_.size() ? coefficients_[power] : Rational(0);
}

RationalPolynomial RationalPolynomial::derivative() const {
  if (coefficients_.size() <= 1) return {};
  std::vector<Rational> d(coefficients_.size() - 1);
  for (std::size_t k = 1; k < coefficients_.size(); ++k) d[k - 1] = coefficients_[k] * static_cast<long>(k);
  return RationalPolynomial(std::move(d));
}

RationalPolynomial RationalPolynomial::antiderivative() const {
  if (coefficients_.empty()) return {};
  std::vector<Rational> a(coefficients_.size() + 1);
  for (std::size_t k = 0; k < coefficients_.size(); ++k) a[k + 1] = coefficients_[k] / static_cast<long>(k + 1);
  return RationalPolynomial(std::move(a));
}

RationalPolynomial RationalPolynomial::shifted(const Rational& shift) const {
  // Horner in the polynomial ring: p(x + a) = (...(c_d (x+a) + c_{d-1})(x+a) ...).
  RationalPolynomial result;
  const RationalPolynomial xa({shift, Rational(1)});
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
    result *= xa;
    result += constant(*it);
  }
  return result;
}

Rational RationalPolynomial::operator()(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double RationalPolynomial::evaluate(double x) const {
  double acc = 0.0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) acc = acc * x + it->get_d();
  return acc;
}

RationalPolynomial& RationalPolynomial::operator+=(const RationalPolynomial& other) {
  if (other.coefficients_.size() > coefficients_.size()) coefficients_.resize(other.coefficients_.size());
  for (std::size_t k = 0; k < other.coefficients_.size(); ++k) coefficients_[k] += other.coefficients_[k];
  trim();
  return *this;
}

RationalPolynomial& RationalPolynomial::operator-=(const RationalPolynomial& other) {
  if (other.coefficients_.size() > coefficients_.size()) coefficients_.resize(other.coefficients_.size());
  for (std::size_t k = 0; k < other.coefficients_.size(); ++k) coefficients_[k] -= other.coefficients_[k];
  trim();
  return *this;
}

RationalPolynomial& RationalPolynomial::operator*=(const RationalPolynomial& other) {
  if (is_zero() || other.is_zero()) {
    coefficients_.clear();
    return *this;
  }
  std::vector<Rational> product(coefficients_.size() + other.coefficients_.size() - 1);
  for (std::size_t i = 0; i < coefficients_.size(); ++i) {
    if (coefficients_[i] == 0) continue;
    for (std::size_t j = 0; j < other.coefficients_.size(); ++j) product[i + j] += coefficients_[i] * other.coefficients_[j];
  }
  coefficients_ = std::move(product);
  trim();
  return *this;
}

RationalPolynomial& RationalPolynomial::operator*=(const Rational& scalar) {
  if (scalar == 0) {
    coefficients_.clear();
    return *this;
  }
  for (auto& c : coefficients_) c *= scalar;
  return *this;
}

RationalPolynomial RationalPolynomial::operator-() const {
  RationalPolynomial r = *this;
  for (auto& c : r.coefficients_) c = -c;
  return r;
}

std::string RationalPolynomial::to_string(const std::string& variable) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = coefficients_.size(); k-- > 0;) {
    const Rational& c = coefficients_[k];
    if (c == 0) continue;
    Rational magnitude = abs(c);
    if (first) {
      if (c < 0) os << '-';
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    const bool unit = magnitude == 1;
    if (k == 0 || !unit) os << magnitude.get_str();
    if (k > 0) {
      if (!unit) os << '*';
      os << variable;
      if (k > 1) os << '^' << k;
    }
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const RationalPolynomial& p) { return os << p.to_string(); }

// ---------------------------------------------------------------------------
// SigmaExpression

SigmaExpression::SigmaExpression(const Rational& value) {
  if (value != 0) terms_.emplace(Monomial{}, value);
}

SigmaExpression SigmaExpression::symbol(unsigned index) {
  SigmaExpression e;
  e.terms_.emplace(Monomial{index}, Rational(1));
  return e;
}

bool SigmaExpression::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

bool SigmaExpression::is_affine() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first.size() <= 1; });
}

int SigmaExpression::max_symbol() const {
  int result = -1;
  for (const auto& [monomial, c] : terms_)
    for (unsigned s : monomial) result = std::max(result, static_cast<int>(s));
  return result;
}

bool SigmaExpression::contains_symbol(unsigned index) const {
  for (const auto& [monomial, c] : terms_)
    if (std::find(monomial.begin(), monomial.end(), index) != monomial.end()) return true;
  return false;
}

void SigmaExpression::add_term(const Monomial& monomial, const Rational& coefficient) {
  if (coefficient == 0) return;
  auto [it, inserted] = terms_.emplace(monomial, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second == 0) terms_.erase(it);
  }
}

SigmaExpression SigmaExpression::without_symbols(std::span<const unsigned> symbols) const {
  SigmaExpression result;
  for (const auto& [monomial, c] : terms_) {
    const bool hit = std::any_of(monomial.begin(), monomial.end(), [&](unsigned s) {
      return std::find(symbols.begin(), symbols.end(), s) != symbols.end();
    });
    if (!hit) result.terms_.emplace(monomial, c);
  }
  return result;
}

RationalPolynomial SigmaExpression::substitute(std::span<const RationalPolynomial> values) const {
  RationalPolynomial result;
  for (const auto& [monomial, c] : terms_) {
    RationalPolynomial term = RationalPolynomial::constant(c);
    for (unsigned s : monomial) {
      if (s >= values.size()) throw Error(ErrorKind::IndexOutOfRange, "symbol s" + std::to_string(s) + " has no value");
      term *= values[s];
    }
    result += term;
  }
  return result;
}

Rational SigmaExpression::evaluate(std::span<const Rational> values) const {
  Rational result = 0;
  for (const auto& [monomial, c] : terms_) {
    Rational term = c;
    for (unsigned s : monomial) {
      if (s >= values.size()) throw Error(ErrorKind::IndexOutOfRange, "symbol s" + std::to_string(s) + " has no value");
      term *= values[s];
    }
    result += term;
  }
  return result;
}

double SigmaExpression::evaluate(std::span<const double> values) const {
  double result = 0.0;
  for (const auto& [monomial, c] : terms_) {
    double term = c.get_d();
    for (unsigned s : monomial) {
      if (s >= values.size()) throw Error(ErrorKind::IndexOutOfRange, "symbol s" + std::to_string(s) + " has no value");
      term *= values[s];
    }
    result += term;
  }
  return result;
}

SigmaExpression& SigmaExpression::operator+=(const SigmaExpression& other) {
  for (const auto& [monomial, c] : other.terms_) add_term(monomial, c);
  return *this;
}

SigmaExpression& SigmaExpression::operator-=(const SigmaExpression& other) {
  for (const auto& [monomial, c] : other.terms_) add_term(monomial, -c);
  return *this;
}

SigmaExpression& SigmaExpression::operator*=(const SigmaExpression& other) {
  SigmaExpression product;
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : other.terms_) {
      Monomial m;
      m.reserve(ma.size() + mb.size());
      std::merge(ma.begin(), ma.end(), mb.begin(), mb.end(), std::back_inserter(m));
      product.add_term(m, ca * cb);
    }
  }
  *this = std::move(product);
  return *this;
}

SigmaExpression SigmaExpression::operator-() const {
  SigmaExpression r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

namespace {

std::string render(const std::map<SigmaExpression::Monomial, Rational>& terms, bool latex) {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [monomial, c] : terms) {
    if (first) {
      if (c < 0) os << '-';
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    const Rational magnitude = abs(c);
    const bool unit = magnitude == 1;
    if (monomial.empty() || !unit) {
      if (latex && magnitude.get_den() != 1)
        os << "\\frac{" << magnitude.get_num().get_str() << "}{" << magnitude.get_den().get_str() << "}";
      else
        os << magnitude.get_str();
      if (!monomial.empty() && !latex) os << '*';
    }
    bool first_factor = true;
    for (std::size_t i = 0; i < monomial.size();) {
      std::size_t j = i;
      while (j < monomial.size() && monomial[j] == monomial[i]) ++j;
      const std::size_t power = j - i;
      if (!first_factor && !latex) os << '*';
      first_factor = false;
      if (latex)
        os << "\\sigma_{" << monomial[i] << "}";
      else
        os << 's' << monomial[i];
      if (power > 1) os << '^' << power;
      i = j;
    }
  }
  return os.str();
}

}  // namespace

std::string SigmaExpression::to_string() const { return render(terms_, false); }
std::string SigmaExpression::to_latex() const { return render(terms_, true); }

std::ostream& operator<<(std::ostream& os, const SigmaExpression& e) { return os << e.to_string(); }

// ---------------------------------------------------------------------------
// SymbolicMatrix

SigmaExpression SymbolicMatrix::trace() const {
  SigmaExpression t;
  for (std::size_t k = 0; k < std::min(rows_, cols_); ++k) t += (*this)(k, k);
  return t;
}

SymbolicMatrix SymbolicMatrix::without_symbols(std::span<const unsigned> symbols) const {
  SymbolicMatrix r(rows_, cols_);
  for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = data_[k].without_symbols(symbols);
  return r;
}

std::vector<std::vector<std::string>> SymbolicMatrix::to_strings() const {
  std::vector<std::vector<std::string>> out(rows_, std::vector<std::string>(cols_));
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out[r][c] = (*this)(r, c).to_string();
  return out;
}

std::string SymbolicMatrix::to_latex() const {
  std::ostringstream os;
  os << "\\begin{bmatrix}\n";
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      if (c) os << " & ";
      os << (*this)(r, c).to_latex();
    }
    os << (r + 1 < rows_ ? " \\\\\n" : "\n");
  }
  os << "\\end{bmatrix}";
  return os.str();
}

}  // namespace distweyl
