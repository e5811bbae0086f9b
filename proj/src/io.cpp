#include "distweyl/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "distweyl/error.hpp"

namespace distweyl::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidConfig, what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::vector<Rational> rationals(const json& j, const char* what) {
  if (!j.is_array()) bad(std::string(what) + " must be an array");
  std::vector<Rational> out;
  for (const auto& v : j) out.push_back(rational_from_json(v));
  return out;
}

json rationals_to_json(const std::vector<Rational>& v) {
  json out = json::array();
  for (const auto& r : v) out.push_back(to_string(r));
  return out;
}

// 17 significant digits, so CSV values round-trip.
std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  // keep the literal as written (0.1 stays 1/10)
  if (j.is_number()) return parse_rational(j.dump());
  bad("expected a number or a rational string, got " + j.dump());
}

double real_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return rational_from_json(j).get_d();
  bad("expected a real number, got " + j.dump());
}

cdouble complex_from_json(const json& j) {
  if (j.is_array()) {
    if (j.size() != 2) bad("complex values are [re, im] pairs");
    return {real_from_json(j[0]), real_from_json(j[1])};
  }
  if (j.is_object()) return {real_from_json(field(j, "re")), j.contains("im") ? real_from_json(j.at("im")) : 0.0};
  return real_from_json(j);
}

json complex_to_json(cdouble z) {
  if (z.imag() == 0.0) return z.real();
  return json::array({z.real(), z.imag()});
}

Domain domain_from_json(const json& j) {
  if (j.is_string() && j.get<std::string>() == "half_line") return Domain::half_line();
  if (j.is_object() && j.contains("length")) {
    Rational len = rational_from_json(j.at("length"));
    if (len <= 0) bad("interval length must be positive");
    return Domain::interval(len);
  }
  bad("domain must be \"half_line\" or {\"length\": l}");
}

json domain_to_json(const Domain& d) {
  if (d.is_half_line()) return "half_line";
  return json{{"length", to_string(*d.length)}};
}

CoefficientFunction coefficient_from_json(const json& j, const Domain& domain) {
  const std::string kind = field(j, "kind").get<std::string>();
  if (kind == "zero") return CoefficientFunction::zero(domain);
  if (kind == "constant") return CoefficientFunction::constant(rational_from_json(field(j, "value")), domain);
  if (kind == "polynomial") {
    return CoefficientFunction::polynomial(RationalPolynomial(rationals(field(j, "coefficients"), "coefficients")),
                                           domain);
  }
  if (kind == "piecewise_linear") {
    return CoefficientFunction::piecewise_linear(rationals(field(j, "xs"), "xs"), rationals(field(j, "ys"), "ys"),
                                                 domain);
  }
  if (kind == "bump") {
    const std::string p = j.value("profile", "indicator");
    BumpProfile profile = p == "indicator" ? BumpProfile::Indicator
                          : p == "hat"     ? BumpProfile::Hat
                          : p == "smooth"  ? BumpProfile::Smooth
                                           : (bad("unknown bump profile '" + p + "'"), BumpProfile::Indicator);
    Rational height = j.contains("height") ? rational_from_json(j.at("height")) : Rational(1);
    return CoefficientFunction::bump(rational_from_json(field(j, "a")), rational_from_json(field(j, "b")), height,
                                     profile, domain);
  }
  if (kind == "piecewise") {
    std::vector<RationalPolynomial> pieces;
    for (const auto& p : field(j, "pieces")) pieces.emplace_back(rationals(p, "piece"));
    return CoefficientFunction::piecewise(rationals(field(j, "breaks"), "breaks"), std::move(pieces), domain);
  }
  bad("unknown coefficient kind '" + kind + "'");
}

json coefficient_to_json(const CoefficientFunction& c) {
  json pieces = json::array();
  for (const auto& p : c.pieces()) pieces.push_back(rationals_to_json(p.coefficients()));
  return json{{"kind", "piecewise"}, {"breaks", rationals_to_json(c.breaks())}, {"pieces", pieces}};
}

BoundaryForm boundary_form_from_json(const json& j, int n) {
  std::vector<int> perm = field(j, "permutation").get<std::vector<int>>();
  const json& rows = field(j, "lower");
  if (static_cast<int>(perm.size()) != n || !rows.is_array() || static_cast<int>(rows.size()) != n) {
    throw Error(ErrorKind::ShapeMismatch, "boundary form must be " + std::to_string(n) + " x " + std::to_string(n));
  }
  Eigen::MatrixXcd lower(n, n);
  for (int r = 0; r < n; ++r) {
    if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != n) {
      throw Error(ErrorKind::ShapeMismatch, "row " + std::to_string(r) + " of lower has the wrong length");
    }
    for (int c = 0; c < n; ++c) lower(r, c) = complex_from_json(rows[r][c]);
  }
  return validate_boundary_form(std::move(perm), std::move(lower));
}

json boundary_form_to_json(const BoundaryForm& b) {
  json rows = json::array();
  for (int r = 0; r < b.size(); ++r) {
    json row = json::array();
    for (int c = 0; c < b.size(); ++c) row.push_back(complex_to_json(b.lower()(r, c)));
    rows.push_back(row);
  }
  return json{{"permutation", b.permutation()}, {"lower", rows}};
}

SingularityOrders orders_from_json(const json& j) {
  const json& n = field(j, "n");
  if (!n.is_number_integer()) bad("n must be an integer");
  const json& o = field(j, "orders");
  if (!o.is_array()) bad("orders must be an array of integers");
  std::vector<int> orders;
  for (const auto& v : o) {
    if (!v.is_number_integer()) bad("orders must be an array of integers");
    orders.push_back(v.get<int>());
  }
  return validate_orders(n.get<int>(), std::move(orders));
}

ProblemSpec problem_from_json(const json& j) {
  SingularityOrders orders = orders_from_json(j);
  Domain domain = domain_from_json(field(j, "domain"));
  std::vector<CoefficientFunction> sigma;
  if (j.contains("sigma")) {
    if (!j.at("sigma").is_array() || static_cast<int>(j.at("sigma").size()) > orders.n - 1) {
      bad("sigma must list at most n - 1 coefficients");
    }
    for (const auto& s : j.at("sigma")) sigma.push_back(coefficient_from_json(s, domain));
  }
  while (static_cast<int>(sigma.size()) < orders.n - 1) sigma.push_back(CoefficientFunction::zero(domain));
  CoefficientSet coeffs = make_coefficient_set(orders, std::move(sigma));
  BoundaryForm U = boundary_form_from_json(field(j, "U"), orders.n);
  std::optional<BoundaryForm> V;
  if (j.contains("V")) V = boundary_form_from_json(j.at("V"), orders.n);
  return make_problem_spec(std::move(coeffs), std::move(U), std::move(V));
}

json problem_to_json(const ProblemSpec& spec) {
  json sigma = json::array();
  for (const auto& s : spec.coeffs.sigma) sigma.push_back(coefficient_to_json(s));
  json out{{"n", spec.coeffs.orders.n},
           {"orders", spec.coeffs.orders.orders},
           {"domain", domain_to_json(spec.coeffs.domain())},
           {"sigma", sigma},
           {"U", boundary_form_to_json(spec.U)}};
  if (spec.V) out["V"] = boundary_form_to_json(*spec.V);
  return out;
}

std::vector<cdouble> lambda_grid_from_json(const json& j) {
  std::vector<cdouble> grid;
  if (j.is_array() || (j.is_object() && j.contains("list"))) {
    for (const auto& v : j.is_array() ? j : j.at("list")) grid.push_back(complex_from_json(v));
  } else if (j.is_object() && j.contains("ray")) {
    const json& ray = j.at("ray");
    const double phi = real_from_json(field(ray, "phi"));
    for (const auto& r : field(ray, "magnitudes")) grid.push_back(std::polar(real_from_json(r), phi));
  } else if (j.is_object() && j.contains("linspace")) {
    const json& ls = j.at("linspace");
    const cdouble a = complex_from_json(field(ls, "from"));
    const cdouble b = complex_from_json(field(ls, "to"));
    const int count = field(ls, "count").get<int>();
    for (int i = 0; i < count; ++i) grid.push_back(count == 1 ? a : a + (b - a) * (double(i) / (count - 1)));
  } else {
    bad("lambda grid must be a list, {\"ray\": ...} or {\"linspace\": ...}");
  }
  if (grid.empty()) bad("lambda grid is empty");
  return grid;
}

SigmaExpression sigma_expression_from_string(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  if (s.empty()) bad("empty expression");
  SigmaExpression out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    int sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (pos != 0) {
      bad("malformed expression '" + text + "'");
    }
    std::size_t end = s.find_first_of("+-", pos);
    if (end == std::string::npos) end = s.size();
    std::string term = s.substr(pos, end - pos);
    if (term.empty()) bad("malformed expression '" + text + "'");
    SigmaExpression value(sign);
    std::istringstream factors(term);
    std::string f;
    while (std::getline(factors, f, '*')) {
      if (f.empty()) bad("malformed expression '" + text + "'");
      if (f[0] == 's') {
        const auto caret = f.find('^');
        const std::string idx = f.substr(1, caret == std::string::npos ? std::string::npos : caret - 1);
        const std::string pw = caret == std::string::npos ? "1" : f.substr(caret + 1);
        if (idx.empty() || pw.empty() || idx.find_first_not_of("0123456789") != std::string::npos ||
            pw.find_first_not_of("0123456789") != std::string::npos) {
          bad("malformed symbol '" + f + "'");
        }
        for (int p = std::stoi(pw); p > 0; --p) value *= SigmaExpression::symbol(std::stoul(idx));
      } else {
        value *= SigmaExpression(parse_rational(f));
      }
    }
    out += value;
    pos = end;
  }
  return out;
}

json symbolic_matrix_to_json(const SymbolicMatrix& m) { return m.to_strings(); }

SymbolicMatrix symbolic_matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) bad("matrix must be an array of rows");
  SymbolicMatrix m(j.size(), j[0].size());
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (j[r].size() != j[0].size()) throw Error(ErrorKind::ShapeMismatch, "ragged matrix");
    for (std::size_t c = 0; c < j[r].size(); ++c) m(r, c) = sigma_expression_from_string(j[r][c].get<std::string>());
  }
  return m;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, int n) {
  out << "index,lambda_re,lambda_im,rho_re,rho_im,flag,condition";
  for (int s = 1; s <= n; ++s)
    for (int k = 1; k <= s; ++k) out << ",M_" << s << '_' << k << "_re,M_" << s << '_' << k << "_im";
  out << '\n';
  for (const SweepRow& row : rows) {
    out << row.index << ',' << num(row.lambda.real()) << ',' << num(row.lambda.imag()) << ',';
    if (row.sample) {
      out << num(row.sample->rho.real()) << ',' << num(row.sample->rho.imag()) << ',' << row.flag << ','
          << num(row.sample->condition);
      for (int s = 0; s < n; ++s)
        for (int k = 0; k <= s; ++k) out << ',' << num(row.sample->M(s, k).real()) << ',' << num(row.sample->M(s, k).imag());
    } else {
      out << ",," << row.flag << ',';
      for (int c = 0; c < n * (n + 1); ++c) out << ',';
    }
    out << '\n';
  }
}

void write_probe_csv(std::ostream& out, const AsymptoticProbe& probe) {
  out << "rho_abs,ratio_re,ratio_im,limit_re,limit_im,rel_error\n";
  for (const auto& s : probe.samples) {
    out << num(s.rho_abs) << ',' << num(s.ratio.real()) << ',' << num(s.ratio.imag()) << ','
        << num(probe.limit.real()) << ',' << num(probe.limit.imag()) << ',' << num(s.rel_error) << '\n';
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open config '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    bad("config '" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace distweyl::io
