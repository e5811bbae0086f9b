#include "distweyl/regularize.hpp"

#include <algorithm>
#include <cassert>
#include <string>

#include "distweyl/error.hpp"

namespace distweyl {

namespace {

int sign(int power) { return power % 2 == 0 ? 1 : -1; }

std::string entry_name(const char* matrix, int k, int j) {
  return std::string(matrix) + "_{" + std::to_string(k) + "," + std::to_string(j) + "}";
}

}  // namespace

ChiMatrix chi_matrix(int nu, int i, int m) {
  if (m < 1 || nu < 0 || nu > 2 * m - 1) {
    throw Error(ErrorKind::IndexOutOfRange, "chi: nu=" + std::to_string(nu) + " outside 0..2m-1");
  }
  const int k = nu / 2;
  const int bound = nu % 2 == 0 ? m - k : m - k - 1;
  if (i < 0 || i > bound) {
    throw Error(ErrorKind::IndexOutOfRange, "chi: order " + std::to_string(i) + " exceeds " + std::to_string(bound));
  }
  ChiMatrix chi{nu, i, m, std::vector<std::vector<long long>>(m + 1, std::vector<long long>(m + 1, 0))};
  if (nu % 2 == 0) {
    for (int s = 0; s <= i; ++s) chi.entries[s + k][i - s + k] = binomial(i, s).get_num().get_si();
  } else {
    for (int s = 0; s <= i + 1; ++s) {
      Rational v = binomial(i + 1, s) - 2 * binomial(i, s - 1);
      chi.entries[s + k][i + 1 - s + k] = v.get_num().get_si();
    }
  }
  return chi;
}

SymbolicMatrix build_Q(const SingularityOrders& orders, std::span<const unsigned> vanishing) {
  const int m = orders.m();
  SymbolicMatrix q(m + 1, m + 1);
  for (int nu = 0; nu <= orders.n - 2; ++nu) {
    if (std::find(vanishing.begin(), vanishing.end(), static_cast<unsigned>(nu)) != vanishing.end()) continue;
    ChiMatrix chi = chi_matrix(nu, orders.orders[nu], m);
    SigmaExpression s = SigmaExpression::symbol(nu);
    for (int r = 0; r <= m; ++r) {
      for (int c = 0; c <= m; ++c) {
        if (chi(r, c) != 0) q(r, c) += SigmaExpression(Rational(static_cast<long>(chi(r, c)))) * s;
      }
    }
  }
  return q;
}

SymbolicMatrix s_map(const SymbolicMatrix& Q, int n) {
  const int m = n / 2;
  const int tau = n % 2;
  if (n < 2 || Q.rows() != static_cast<std::size_t>(m + 1) || Q.cols() != static_cast<std::size_t>(m + 1)) {
    throw Error(ErrorKind::ShapeMismatch, "Q must be (m+1) x (m+1) for n = " + std::to_string(n));
  }
  SymbolicMatrix f(n, n);
  std::vector<bool> defined(n * n, false);
  // 1-based accessors to keep the formulas recognizable
  auto F = [&](int k, int j) -> SigmaExpression& {
    defined[(k - 1) * n + (j - 1)] = true;
    return f(k - 1, j - 1);
  };
  auto q = [&](int l, int s) -> const SigmaExpression& { return Q(l, s); };

  if (tau == 0) {
    for (int j = 1; j <= m; ++j) F(m, j) = SigmaExpression(sign(m + 1)) * q(j - 1, m);
    for (int k = m + 1; k <= 2 * m; ++k) {
      F(k, m + 1) = SigmaExpression(sign(k + 1)) * q(m, 2 * m - k);
      for (int j = 1; j <= m; ++j) {
        F(k, j) = SigmaExpression(sign(k + 1)) * q(j - 1, 2 * m - k) +
                  SigmaExpression(sign(m + k)) * q(j - 1, m) * q(m, 2 * m - k);
      }
    }
  } else {
    for (int k = m + 1; k <= 2 * m + 1; ++k) {
      for (int j = 1; j <= m + 1; ++j) F(k, j) = SigmaExpression(sign(k)) * q(j - 1, 2 * m + 1 - k);
    }
  }

  // remaining entries, by (i), (ii), (iii) in that order
  for (int k = 1; k <= n; ++k) {
    for (int j = 1; j <= n; ++j) {
      if (defined[(k - 1) * n + (j - 1)]) {
        assert(j <= k + 1 && "formula entry collides with a structure condition");
        continue;
      }
      if (j > k + 1) {
        f(k - 1, j - 1) = 0;
      } else if (j == k + 1) {
        f(k - 1, j - 1) = 1;
      } else {
        [[maybe_unused]] bool zero_block = (k <= m - 1 + tau && j <= k) || (j >= m + 2 && k >= j);
        assert(zero_block && "entry left undetermined by the structure conditions");
        f(k - 1, j - 1) = 0;
      }
    }
  }
  return f;
}

StructureReport check_structure(const SymbolicMatrix& F) {
  StructureReport report;
  const int n = static_cast<int>(F.rows());
  if (F.cols() != F.rows() || n < 2) {
    report.shape = false;
    report.failures.push_back("F must be square with n >= 2");
    return report;
  }
  const int m = n / 2;
  const int tau = n % 2;
  for (int k = 1; k <= n; ++k) {
    for (int j = 1; j <= n; ++j) {
      const SigmaExpression& e = F(k - 1, j - 1);
      if (j > k + 1 && !e.is_zero()) {
        report.zero_above_superdiagonal = false;
        report.failures.push_back("(i) " + entry_name("f", k, j) + " = " + e.to_string());
      }
      if (j == k + 1 && !(e == SigmaExpression(1))) {
        report.unit_superdiagonal = false;
        report.failures.push_back("(ii) " + entry_name("f", k, j) + " = " + e.to_string());
      }
      bool zero_block = (k <= m - 1 + tau && j <= k) || (j >= m + 2 && k >= j);
      if (zero_block && !e.is_zero()) {
        report.zero_blocks = false;
        report.failures.push_back("(iii) " + entry_name("f", k, j) + " = " + e.to_string());
      }
    }
  }
  SigmaExpression tr = F.trace();
  if (!tr.is_zero()) {
    report.trace_zero = false;
    report.failures.push_back("trace = " + tr.to_string());
  }
  return report;
}

SymbolicMatrix s_inverse(const SymbolicMatrix& F, int n) {
  if (F.rows() != static_cast<std::size_t>(n) || F.cols() != static_cast<std::size_t>(n)) {
    throw Error(ErrorKind::ShapeMismatch, "F must be n x n");
  }
  StructureReport report = check_structure(F);
  if (!report.zero_above_superdiagonal || !report.unit_superdiagonal || !report.zero_blocks) {
    std::string what = "F violates the structure conditions:";
    for (const auto& f : report.failures) what += " " + f + ";";
    throw Error(ErrorKind::StructureViolation, what);
  }
  const int m = n / 2;
  SymbolicMatrix q(m + 1, m + 1);
  auto f = [&](int k, int j) -> const SigmaExpression& { return F(k - 1, j - 1); };
  if (n % 2 == 0) {
    for (int j = 1; j <= m; ++j) q(j - 1, m) = SigmaExpression(sign(m + 1)) * f(m, j);
    for (int k = m + 1; k <= 2 * m; ++k) {
      q(m, 2 * m - k) = SigmaExpression(sign(k + 1)) * f(k, m + 1);
      for (int j = 1; j <= m; ++j) {
        q(j - 1, 2 * m - k) = SigmaExpression(sign(k + 1)) * (f(k, j) - f(k, m + 1) * f(m, j));
      }
    }
    q(m, m) = 0;
  } else {
    for (int k = m + 1; k <= 2 * m + 1; ++k) {
      for (int j = 1; j <= m + 1; ++j) q(j - 1, 2 * m + 1 - k) = SigmaExpression(sign(k)) * f(k, j);
    }
  }
  return q;
}

SymbolicMatrix build_F_symbolic(const SingularityOrders& orders, std::span<const unsigned> vanishing) {
  return s_map(build_Q(orders, vanishing), orders.n);
}

CoefficientFunction substitute(const SigmaExpression& e, std::span<const CoefficientFunction> symbols,
                               const Domain& domain) {
  CoefficientFunction out = CoefficientFunction::zero(domain);
  for (const auto& [monomial, coefficient] : e.terms()) {
    CoefficientFunction term = CoefficientFunction::constant(coefficient, domain);
    for (unsigned idx : monomial) {
      if (idx >= symbols.size()) {
        throw Error(ErrorKind::IndexOutOfRange, "no coefficient bound to s" + std::to_string(idx));
      }
      term *= symbols[idx];
    }
    out += term;
  }
  return out;
}

MatrixFunction::MatrixFunction(const SymbolicMatrix& F, std::span<const CoefficientFunction> symbols,
                               const Domain& domain)
    : n_(static_cast<int>(F.rows())), domain_(domain) {
  if (F.rows() != F.cols()) throw Error(ErrorKind::ShapeMismatch, "F must be square");
  for (const auto& s : symbols) {
    if (!(s.domain() == domain)) throw Error(ErrorKind::DomainViolation, "coefficient domain differs from F's domain");
  }
  double beyond = 0.0;
  bool bounded = true;
  for (int r = 0; r < n_; ++r) {
    for (int c = 0; c < n_; ++c) {
      entries_.push_back(substitute(F(r, c), symbols, domain));
      const CoefficientFunction& e = entries_.back();
      if (!e.is_zero()) active_.push_back(r * n_ + c);
      for (std::size_t b = 1; b < e.breaks().size(); ++b) breakpoints_.push_back(e.breaks()[b].get_d());
      if (e.pieces().back().degree() > 0) {
        bounded = false;
      } else if (e.breaks().size() > 1) {
        beyond = std::max(beyond, e.breaks().back().get_d());
      }
    }
  }
  std::sort(breakpoints_.begin(), breakpoints_.end());
  breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()), breakpoints_.end());
  if (bounded) constant_beyond_ = beyond;
}

void MatrixFunction::evaluate(double x, Eigen::MatrixXd& out, double reference) const {
  out.setZero(n_, n_);
  for (int idx : active_) out(idx / n_, idx % n_) = entries_[idx].at(x, reference);
}

Eigen::MatrixXd MatrixFunction::operator()(double x) const {
  Eigen::MatrixXd out;
  evaluate(x, out);
  return out;
}

std::vector<std::string> check_integrability(const MatrixFunction& F) {
  std::vector<std::string> failures;
  if (!F.domain().is_half_line()) return failures;
  const int n = F.size();
  const int m = n / 2;
  const int tau = n % 2;
  for (int k = m + 1; k <= n; ++k) {
    for (int j = 1; j <= m + tau; ++j) {
      if (!F.entry(k - 1, j - 1).absolutely_integrable()) failures.push_back(entry_name("f", k, j) + " not in L1");
    }
  }
  if (tau == 0) {
    for (int k = m + 1; k <= 2 * m; ++k) {
      if (!F.entry(k - 1, m).square_integrable()) failures.push_back(entry_name("f", k, m + 1) + " not in L2");
    }
    for (int j = 1; j <= m; ++j) {
      if (!F.entry(m - 1, j - 1).square_integrable()) failures.push_back(entry_name("f", m, j) + " not in L2");
    }
  }
  return failures;
}

Regularization build_F(const CoefficientSet& coeffs) {
  std::vector<unsigned> vanishing = coeffs.vanishing();
  Regularization out;
  out.Q = build_Q(coeffs.orders, vanishing);
  out.F = s_map(out.Q, coeffs.orders.n);
  out.structure = check_structure(out.F);
  out.eval = MatrixFunction(out.F, coeffs.sigma, coeffs.domain());
  return out;
}

}  // namespace distweyl
