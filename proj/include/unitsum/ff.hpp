#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "unitsum/errors.hpp"

namespace unitsum {

class FieldElement;
class FieldSpec;
using FieldRef = std::shared_ptr<const FieldSpec>;

// Immutable description of GF(p^k) = GF(p)[t]/(modulus).  Elements are
// coefficient vectors of length k with entries reduced into [0, p); the
// canonical order of elements is by index c_0 + c_1*p + ... + c_{k-1}*p^{k-1}.
//
// p is capped below 2^21 so coefficient products stay exact in 64 bits;
// enumeration-style operations additionally enforce the desk-scale cap
// q <= 2^20.
class FieldSpec : public std::enable_shared_from_this<FieldSpec> {
public:
    static constexpr std::uint64_t kDeskScaleCap = 1u << 20;

    static FieldRef prime(std::uint64_t p);
    // modulus: k+1 coefficients, ascending degree, monic, irreducible.
    static FieldRef extension(std::uint64_t p, unsigned k,
                              std::vector<std::uint32_t> modulus);
    // Uses the first monic irreducible of degree k in canonical order.
    static FieldRef extension(std::uint64_t p, unsigned k);

    std::uint32_t p() const { return p_; }
    unsigned k() const { return k_; }
    std::uint64_t q() const { return q_; }
    // Empty for prime fields, otherwise k+1 ascending coefficients.
    const std::vector<std::uint32_t>& modulus() const { return mod_; }
    bool same(const FieldSpec& other) const;
    std::string text() const; // e.g. "GF(5)", "GF(4):t^2+t+1"

    FieldElement zero() const;
    FieldElement one() const;
    FieldElement from_int(long long v) const;
    FieldElement element(std::vector<std::uint32_t> coeffs) const;
    FieldElement from_index(std::uint64_t index) const;

    // Slice API: a slice is k consecutive residues.  Used by the polynomial
    // and series layers, which keep coefficients in flat arrays.
    void s_zero(std::uint32_t* r) const;
    void s_copy(const std::uint32_t* a, std::uint32_t* r) const;
    bool s_is_zero(const std::uint32_t* a) const;
    bool s_eq(const std::uint32_t* a, const std::uint32_t* b) const;
    void s_add(const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* r) const;
    void s_sub(const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* r) const;
    void s_neg(const std::uint32_t* a, std::uint32_t* r) const;
    // r must not alias a or b.
    void s_mul(const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* r) const;
    void s_pow(const std::uint32_t* a, std::uint64_t e, std::uint32_t* r) const;
    void s_inv(const std::uint32_t* a, std::uint32_t* r) const;
    std::uint64_t s_index(const std::uint32_t* a) const;

private:
    friend class FieldElement;
    FieldSpec() = default;

    std::uint32_t p_ = 0;
    unsigned k_ = 1;
    std::uint64_t q_ = 0;
    std::vector<std::uint32_t> mod_;     // empty when k == 1
    std::vector<std::uint32_t> neg_mod_; // (p - mod_[j]) % p for j < k
};

class FieldElement {
public:
    FieldElement() = default; // invalid placeholder; any arithmetic throws

    const FieldRef& field() const { return f_; }
    bool valid() const { return f_ != nullptr; }
    bool is_zero() const;
    bool is_one() const;
    std::uint64_t index() const;
    const std::vector<std::uint32_t>& coeffs() const { return c_; }
    std::string text() const; // polynomial in t, integer coefficients in [0,p)

    FieldElement operator-() const;
    FieldElement inverse() const;
    FieldElement pow(long long e) const;

    friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
    friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
    friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
    friend FieldElement operator/(const FieldElement& a, const FieldElement& b);
    friend bool operator==(const FieldElement& a, const FieldElement& b);
    friend bool operator!=(const FieldElement& a, const FieldElement& b);

private:
    friend class FieldSpec;
    FieldElement(FieldRef f, std::vector<std::uint32_t> c)
        : f_(std::move(f)), c_(std::move(c)) {}

    FieldRef f_;
    std::vector<std::uint32_t> c_;
};

// Square root in canonical form: the lexicographically least of the two
// roots in odd characteristic (Tonelli-Shanks behind an Euler test), the
// unique root in characteristic 2.  Absent for non-residues.
std::optional<FieldElement> sqrt_elem(const FieldElement& c);

// Least a with a^2 + a = c over GF(2^k); absent iff the absolute trace of c
// is 1.  Throws WrongCharacteristic outside characteristic 2.
std::optional<FieldElement> artin_schreier_solve(const FieldElement& c);

// The unique r with r^p = c.
FieldElement frobenius_root(const FieldElement& c);

// Absolute trace down to the prime field, returned as a field element.
FieldElement absolute_trace(const FieldElement& c);

// All q elements in canonical order; throws FieldTooLarge above the desk cap.
std::vector<FieldElement> enumerate(const FieldRef& field);

} // namespace unitsum
