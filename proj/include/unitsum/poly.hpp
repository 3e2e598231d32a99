#pragma once

#include <initializer_list>
#include <optional>
#include <utility>
#include <vector>

#include "unitsum/ff.hpp"

namespace unitsum {

// Dense univariate polynomial over a finite field.  Coefficients live in one
// flat residue array (stride k), index = degree, trailing zeros trimmed, so
// the zero polynomial is the empty sequence.
class Polynomial {
public:
    explicit Polynomial(FieldRef f);
    static Polynomial zero(FieldRef f) { return Polynomial(std::move(f)); }
    static Polynomial one(FieldRef f);
    static Polynomial x(FieldRef f);
    static Polynomial constant(const FieldElement& c);
    static Polynomial monomial(const FieldElement& c, int deg);
    static Polynomial from_coeffs(const FieldRef& f, const std::vector<FieldElement>& cs);
    // Prime-subfield constants, ascending degree; negatives reduced mod p.
    static Polynomial from_ints(const FieldRef& f, std::initializer_list<long long> cs);
    static Polynomial from_ints(const FieldRef& f, const std::vector<long long>& cs);

    const FieldRef& field() const { return f_; }
    int degree() const { return static_cast<int>(c_.size() / f_->k()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return degree() <= 0; }
    bool is_one() const;
    bool is_monic() const;
    FieldElement coeff(int i) const; // zero beyond the degree
    FieldElement leading() const;    // throws ZeroInput on the zero polynomial
    Polynomial monic() const;        // throws ZeroInput on the zero polynomial
    Polynomial derivative() const;
    FieldElement eval(const FieldElement& at) const;
    Polynomial shifted(int n) const; // multiply by x^n
    Polynomial pow(unsigned e) const;
    Polynomial scaled(const FieldElement& c) const;

    Polynomial operator-() const;
    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend bool operator==(const Polynomial& a, const Polynomial& b);
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    // Quotient and remainder with deg r < deg g; throws DivisionByZero.
    static std::pair<Polynomial, Polynomial> divmod(const Polynomial& f, const Polynomial& g);
    Polynomial operator/(const Polynomial& g) const { return divmod(*this, g).first; }
    Polynomial operator%(const Polynomial& g) const { return divmod(*this, g).second; }

    // Raw flat storage, (degree+1)*k residues.
    const std::uint32_t* data() const { return c_.data(); }
    std::size_t count() const { return c_.size() / f_->k(); }

private:
    void trim();
    FieldRef f_;
    std::vector<std::uint32_t> c_;
};

// Monic gcd; gcd(f, 0) = monic(f); throws BothZero on (0, 0).
Polynomial gcd(const Polynomial& a, const Polynomial& b);

// Exact quotient; throws Error when the division leaves a remainder.
Polynomial exact_div(const Polynomial& f, const Polynomial& g);

// gcd(f, f') constant; throws ZeroInput on the zero polynomial.
bool is_separable(const Polynomial& f);

// g with g*g = f when f is a perfect square (g's leading coefficient is the
// canonical square root of f's); absent otherwise.
std::optional<Polynomial> sqrt_poly(const Polynomial& f);

// Monic product of the distinct irreducible factors, with the char-p descent
// through p-th powers; throws ZeroInput on the zero polynomial.
Polynomial radical(const Polynomial& f);

// Deterministic irreducibility test: exhaustive trial division at small
// sizes, Frobenius-power test above; throws ConstantInput on constants.
bool is_irreducible(const Polynomial& f);

// base^e mod m.
Polynomial powmod(const Polynomial& base, std::uint64_t e, const Polynomial& m);

// Canonical text: descending exponents, zero terms dropped, no "1*".
// Extension coefficients attached to a power of x are parenthesized, e.g.
// "(t+1)*x^2+t"; prime-subfield coefficients print as plain integers.
std::string to_text(const Polynomial& f);

} // namespace unitsum
