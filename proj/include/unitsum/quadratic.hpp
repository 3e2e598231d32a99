#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unitsum/funcfield.hpp"

namespace unitsum {

enum class CurveKind { OddChar, CharTwo, CharTwoInseparable };

class CurveSpec;
using CurveRef = std::shared_ptr<const CurveSpec>;

// Defining equation of the quadratic order O = K[x, y]:
//   OddChar:             y^2 = f,  f nonconstant separable, char >= 3
//   CharTwo:             y^2 + B y + C = 0 (modified Hasse form), char 2
//   CharTwoInseparable:  y^2 = f,  f a non-square nonconstant, char 2
//
// Modified-form invariants: B monic nonzero, C nonzero, radical(B) | C,
// gcd(C/radical(B), radical(B)) = 1, and 2*deg B - deg C is >= 0 or the
// deficit deg C - 2*deg B is odd (the image of the Hasse parity condition;
// equality deg C = 2*deg B is required by the accepted split/inert genus-0
// shapes, see ledger).  B = 1 with constant C additionally requires the
// constant to have no Artin-Schreier root, else the equation is reducible.
class CurveSpec : public std::enable_shared_from_this<CurveSpec> {
public:
    static CurveRef make_curve(Polynomial f);               // y^2 = f
    static CurveRef make_curve(Polynomial B, Polynomial C); // y^2 + By + C = 0

    CurveKind kind() const { return kind_; }
    const FieldRef& field() const { return field_; }
    const Polynomial& f() const; // OddChar / CharTwoInseparable only
    const Polynomial& B() const; // CharTwo only
    const Polynomial& C() const; // CharTwo only
    bool same(const CurveSpec& other) const;
    std::string text() const;

private:
    CurveSpec(CurveKind k, FieldRef fld, Polynomial p, Polynomial q)
        : kind_(k), field_(std::move(fld)), p_(std::move(p)), q_(std::move(q)) {}
    CurveKind kind_;
    FieldRef field_;
    Polynomial p_, q_; // f lives in p_; (B, C) live in (p_, q_)
};

// Hasse normal form y^2 + y = g / (p_1^(2n_1-1) ... p_m^(2n_m-1)).
struct HasseForm {
    std::vector<std::pair<Polynomial, int>> factors; // (p_i, n_i), n_i >= 1
    Polynomial g;
};

// B = prod p_i^(n_i), C = g * prod p_i.  Validates the Hasse invariants
// (monic irreducible distinct p_i, g nonzero and coprime to each p_i, parity
// of sum (2n_i - 1) deg p_i - deg g) and reports every violated clause.
std::pair<Polynomial, Polynomial> hasse_to_modified(const HasseForm& h);

// a(x) + b(x) y on a fixed curve.
class OrderElement {
public:
    OrderElement(CurveRef curve, Polynomial a, Polynomial b);
    static OrderElement zero(const CurveRef& curve);
    static OrderElement one(const CurveRef& curve);
    static OrderElement from_poly(const CurveRef& curve, Polynomial a);
    static OrderElement y(const CurveRef& curve);

    const CurveRef& curve() const { return curve_; }
    const Polynomial& a() const { return a_; }
    const Polynomial& b() const { return b_; }
    bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
    std::string text() const; // e.g. "(x) + (1)y"

    OrderElement operator-() const;
    friend OrderElement operator+(const OrderElement& u, const OrderElement& v);
    friend OrderElement operator-(const OrderElement& u, const OrderElement& v);
    friend OrderElement operator*(const OrderElement& u, const OrderElement& v);
    friend bool operator==(const OrderElement& u, const OrderElement& v);
    friend bool operator!=(const OrderElement& u, const OrderElement& v) {
        return !(u == v);
    }

private:
    CurveRef curve_;
    Polynomial a_, b_;
};

OrderElement mul(const OrderElement& u, const OrderElement& v);
OrderElement conj(const OrderElement& u); // a - by resp. (a + bB) + by
Polynomial norm(const OrderElement& u);   // a^2 - b^2 f resp. a^2 + abB + b^2 C
bool is_unit(const OrderElement& u);      // norm is a nonzero constant

// Least unit of the shape a(x) + y together with mu = norm(eps), found by
// sweeping mu over K* in index order (odd char: f + mu a perfect square;
// char 2: a^2 + B a = C + mu solved as a GF(2)-linear system, the lesser of
// the two solutions a, a + B taken by degree then top-down coefficient
// index).  Absent exactly when the unit group has rank 0.
std::optional<std::pair<OrderElement, FieldElement>>
fundamental_unit(const CurveRef& curve);

// (a_n, b_n) with (a + y)^n = a_n + b_n y, by the first-order recursions
//   odd char: a_{n+1} = a a_n + b_n f,  b_{n+1} = a b_n + a_n
//   char 2:   a_{n+1} = a a_n + b_n C,  b_{n+1} = a b_n + a_n + b_n B
std::pair<Polynomial, Polynomial> unit_powers(const OrderElement& eps, int n);

enum class Splitting { Split, Inert, Ramified, NotApplicable };

std::string splitting_text(Splitting s);

struct GenusSplitting {
    bool genus_zero = false;
    long long genus = 0; // informational; only genus_zero drives classification
    Splitting splitting = Splitting::NotApplicable;
    bool inseparable = false;
};

// Odd char: genus floor((deg f - 1)/2), split iff deg f even with square
// leading coefficient.  Char 2 modified form: genus = deg B - 1 for
// nonconstant B (LeBrigand), Artin-Schreier genus for B = 1; splitting read
// off the infinite-place series roots and cross-checked against the
// closed-form genus-0 criterion.  Inseparable: always ramified.
GenusSplitting genus_and_splitting(const CurveRef& curve);

struct ClassificationReport {
    enum class Verdict { Omega, Infinity };
    Verdict verdict = Verdict::Infinity;
    bool full_constant_field = false;
    bool genus_zero = false;
    Splitting splitting = Splitting::NotApplicable;
    std::vector<std::string> reasons;
};

// Unit sum number of O: omega iff full constant field, genus 0, and the
// infinite place splits; every other case is infinity.  reasons lists the
// satisfied criteria for omega and the violated ones for infinity.
ClassificationReport classify(const CurveRef& curve);

// Exhaustive smoothness check of G = Y^2 + B(X) Y + C(X) over GF(q^d) for
// each d in D: no common zero of (G, G_X, G_Y) with G_X = B'Y + C' and
// G_Y = B.  Extensions are realized as GF(q)[u]/(m) with m the first monic
// irreducible of degree d in index order.
bool check_nonsingular(const Polynomial& B, const Polynomial& C,
                       const std::vector<int>& D);
bool check_nonsingular(const CurveRef& curve, const std::vector<int>& D = {1, 2});

} // namespace unitsum
