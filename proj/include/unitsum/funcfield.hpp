#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unitsum/poly.hpp"

namespace unitsum {

// Element of K(x) in canonical form: coprime numerator/denominator with a
// monic denominator.
class RationalFunction {
public:
    RationalFunction(Polynomial num, Polynomial den); // canonicalizes
    static RationalFunction from_poly(Polynomial f);
    static RationalFunction zero(const FieldRef& f);
    static RationalFunction one(const FieldRef& f);
    static RationalFunction constant(const FieldElement& c);

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }
    const FieldRef& field() const { return num_.field(); }
    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.is_constant() && den_.is_one(); }
    bool is_polynomial() const { return den_.is_one(); }

    RationalFunction operator-() const;
    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
    friend bool operator==(const RationalFunction& a, const RationalFunction& b);
    friend bool operator!=(const RationalFunction& a, const RationalFunction& b) { return !(a == b); }

private:
    Polynomial num_, den_;
};

// Place of K(x): the infinite place or a monic irreducible polynomial.
class Place {
public:
    static Place infinite(FieldRef f);
    static Place finite(Polynomial prime); // must be monic irreducible

    bool is_infinite() const { return !prime_.has_value(); }
    const Polynomial& prime() const; // throws on the infinite place
    const FieldRef& field() const { return f_; }
    int degree() const { return prime_ ? prime_->degree() : 1; }
    std::string text() const { return prime_ ? to_text(*prime_) : "inf"; }
    // For a degree-one finite place x - alpha, the point alpha.
    FieldElement point() const;

    // Deterministic order: by printed text (so "inf" sorts first among the
    // usual degree-one places).
    friend bool operator<(const Place& a, const Place& b);
    friend bool operator==(const Place& a, const Place& b);
    friend bool operator!=(const Place& a, const Place& b) { return !(a == b); }

private:
    Place(FieldRef f, std::optional<Polynomial> prime)
        : f_(std::move(f)), prime_(std::move(prime)) {}
    FieldRef f_;
    std::optional<Polynomial> prime_;
};

// Formal Z-linear combination of places; zero multiplicities are dropped.
class Divisor {
public:
    Divisor() = default;
    void add(const Place& p, long long mult);
    long long multiplicity(const Place& p) const;
    long long degree() const;
    const std::map<Place, long long>& entries() const { return m_; }
    bool empty() const { return m_.empty(); }
    std::string text() const; // e.g. "1*(x+2) + 1*(x+3) - 2*(inf)"

    friend Divisor operator+(const Divisor& a, const Divisor& b);
    friend Divisor operator-(const Divisor& a, const Divisor& b);
    friend bool operator==(const Divisor& a, const Divisor& b) { return a.m_ == b.m_; }
    friend bool operator!=(const Divisor& a, const Divisor& b) { return !(a == b); }

private:
    std::map<Place, long long> m_;
};

// v_P(f); the zero function has +infinity valuation, reported distinctly.
struct Valuation {
    bool infinite = false;
    long long v = 0;
};
Valuation valuation(const RationalFunction& f, const Place& p);

// H(f) = deg of the pole divisor = deg of the zero divisor (both computed
// and checked against each other); throws ZeroInput.
long long height(const RationalFunction& f);

struct Divisors {
    Divisor zeros;
    Divisor poles;
};
Divisors divisors(const RationalFunction& f);

// Deterministic factorization into monic irreducibles (ascending degree,
// then canonical order).  Enumeration-backed, so desk-scale fields only.
std::vector<std::pair<Polynomial, int>> factor(const Polynomial& f);

// x -> (a x + b) / (c x + d), determinant nonzero.
struct Mobius {
    Mobius(FieldElement a, FieldElement b, FieldElement c, FieldElement d);
    static Mobius identity(const FieldRef& f);
    Mobius inverse() const;
    friend Mobius operator*(const Mobius& m, const Mobius& n); // matrix product
    FieldElement a, b, c, d;
};

RationalFunction mobius_substitute(const RationalFunction& f, const Mobius& m);

// Image of a point of P^1 (nullopt = infinity) under the Mobius map.
std::optional<FieldElement> mobius_apply(const Mobius& m,
                                         const std::optional<FieldElement>& pt);

// Truncated Laurent expansion at the infinite place, descending powers of x.
// Coefficients are known for exponents >= low(); stored entries start at the
// leading (first nonzero) exponent.
class LaurentSeries {
public:
    static LaurentSeries zero_to(FieldRef f, long long low);
    static LaurentSeries monomial(const FieldElement& c, long long exp, long long low);
    static LaurentSeries from_poly(const Polynomial& f, long long low);
    static LaurentSeries from_rational(const RationalFunction& f, long long low);

    const FieldRef& field() const { return f_; }
    long long low() const { return low_; }
    // True when some known coefficient is nonzero.
    bool known_nonzero() const { return !c_.empty(); }
    long long lead_exp() const;      // throws PrecisionExhausted when all-zero
    FieldElement lead_coeff() const; // likewise
    // Coefficient at exponent e; e above the lead is zero, e < low() throws.
    FieldElement coeff(long long e) const;
    LaurentSeries truncated(long long low) const;
    std::string text() const;

    LaurentSeries operator-() const;
    LaurentSeries scaled(const FieldElement& c) const;
    friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b);
    friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b);
    friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b);

private:
    LaurentSeries(FieldRef f, long long low) : f_(std::move(f)), low_(low) {}
    void normalize();
    long long hi_exp() const { // exponent of c_[0]; low_-1 when empty
        return low_ + static_cast<long long>(c_.size() / f_->k()) - 1;
    }
    FieldRef f_;
    long long low_;
    std::vector<std::uint32_t> c_; // slice i holds the coefficient of x^(hi-i)
};

// m leading terms of f at infinity; leading exponent is -v_inf(f).
LaurentSeries series_at_infinity(const RationalFunction& f, int m);

struct InfiniteRoots {
    std::vector<LaurentSeries> roots; // zero or two entries
    bool ramified = false;
};

// Series roots of Y^2 = f at the infinite place (odd characteristic).
InfiniteRoots quadratic_roots_at_infinity(const Polynomial& f, int precision);
// Series roots of Y^2 + B Y + C = 0 at the infinite place (characteristic 2).
InfiniteRoots quadratic_roots_at_infinity(const Polynomial& B, const Polynomial& C,
                                          int precision);

} // namespace unitsum
