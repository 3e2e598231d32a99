#pragma once

#include <string>
#include <vector>

#include "unitsum/ff.hpp"
#include "unitsum/funcfield.hpp"
#include "unitsum/poly.hpp"
#include "unitsum/quadratic.hpp"

namespace unitsum {

// Text front end shared by the CLI and the tests.  All parsers throw
// ParseError with the line/column of the offending token; printers emit the
// canonical forms, which re-parse to equal values.

// `GF(p)`, `GF(q)` with q = p^k (built-in modulus), or `GF(q):<modulus in t>`
FieldRef parse_field(const std::string& text);

// terms joined by +/-; a term is [coef*]x[^exp] or a bare coefficient;
// extension-field coefficients are `t` polynomials, parenthesized when they
// have more than one term, e.g. (t+1)*x^2+t
Polynomial parse_poly(const FieldRef& field, const std::string& text);

// sums of fragments <num>, <num>/<den>; each side a single term or a
// parenthesized polynomial, e.g. "x + 1/x", "(x^2+1)/x"
RationalFunction parse_rational(const FieldRef& field, const std::string& text);

// `inf` or a monic irreducible polynomial (non-monic input is normalized)
Place parse_place(const FieldRef& field, const std::string& text);
std::vector<Place> parse_places(const FieldRef& field, const std::string& text);

// `y^2 = <f>` | `y^2 + (<B>)y + (<C>) = 0` | `y^2 + y = (<g>)/((<p1>)^<e1>*...)`
// The Hasse denominator exponents are the literal odd 2n-1 of Eq. (1).
CurveRef parse_curve(const FieldRef& field, const std::string& text);

// a(x) + b(x)y on a curve: x-polynomial terms, `y`, `<term>*y`, `(<poly>)y`
OrderElement parse_order_element(const CurveRef& curve, const std::string& text);

std::string rational_text(const RationalFunction& f);
std::string unit_sum_text(const std::vector<RationalFunction>& units);

} // namespace unitsum
