#pragma once

// JSON configuration parsing and serialization, CSV helpers. Numbers in
// configs may be JSON numbers or strings holding exact rationals ("1/3",
// "0.25"); complex values are numbers or [re, im] pairs. Malformed input
// raises Error(InvalidConfig).

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "distweyl/equivalence.hpp"
#include "distweyl/spectral.hpp"
#include "distweyl/symbolic.hpp"

namespace distweyl::io {

using nlohmann::json;

Rational rational_from_json(const json& j);
double real_from_json(const json& j);
cdouble complex_from_json(const json& j);
json complex_to_json(cdouble z);

Domain domain_from_json(const json& j);
json domain_to_json(const Domain& d);

/// {"kind": "zero" | "constant" | "polynomial" | "piecewise_linear" | "bump" | "piecewise", ...}
CoefficientFunction coefficient_from_json(const json& j, const Domain& domain);
/// Always written in the exact "piecewise" form.
json coefficient_to_json(const CoefficientFunction& c);

/// {"permutation": [p_1 .. p_n] (0-based), "lower": n x n rows}
BoundaryForm boundary_form_from_json(const json& j, int n);
json boundary_form_to_json(const BoundaryForm& b);

SingularityOrders orders_from_json(const json& j);

/// {"n", "orders", "domain", "sigma": [...], "U", "V"?}; missing sigma
/// entries are zero.
ProblemSpec problem_from_json(const json& j);
json problem_to_json(const ProblemSpec& spec);

/// {"list": [...]} | {"ray": {"phi", "magnitudes"}} (lambda = r e^{i phi}) |
/// {"linspace": {"from", "to", "count"}}. Empty grids are rejected.
std::vector<cdouble> lambda_grid_from_json(const json& j);

/// Parses the output of SigmaExpression::to_string, e.g. "2*s0 - s2^2".
SigmaExpression sigma_expression_from_string(const std::string& text);
json symbolic_matrix_to_json(const SymbolicMatrix& m);
SymbolicMatrix symbolic_matrix_from_json(const json& j);

/// Header plus one row per grid point: index, lambda, rho, flag, condition,
/// then M_s_k_re/_im for s >= k (1-based).
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, int n);
void write_probe_csv(std::ostream& out, const AsymptoticProbe& probe);

json load_json_file(const std::string& path);

}  // namespace distweyl::io
