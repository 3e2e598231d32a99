#pragma once

#include <string>
#include <vector>

#include "unitsum/decompose.hpp"
#include "unitsum/funcfield.hpp"
#include "unitsum/quadratic.hpp"

namespace unitsum {

// Search outcome.  Representable carries a certificate that re-sums to the
// target; NotRepresentableExact is a proof (degree-span or unit-test
// failure), never the result of an exhausted bounded search — that case is
// NoneWithinBounds, which is explicitly inconclusive.
struct Verdict {
    enum class Kind { Representable, NotRepresentableExact, NoneWithinBounds };
    Kind kind = Kind::NoneWithinBounds;
    std::vector<RationalFunction> rational_certificate;
    std::vector<QuadraticUnitTerm> quadratic_certificate;
    std::string reason;         // NotRepresentableExact
    long long height_bound = 0; // NoneWithinBounds: the bound searched
    long long unit_count = 0;   // NoneWithinBounds: units enumerated
};

// Least positive n <= limit with n mod p^T outside the residue set R_T of
// all sums -(p^{t_1} k_1 + ... + p^{t_M} k_M), t_j < T, |k_j| <= A; throws
// NoneFound when no n <= limit certifies.
struct NonrepCertificate {
    long long n = 0;
    int T = 0;
};
NonrepCertificate nonrepresentable_n(long long p, int M, int A,
                                     long long limit = 1000);

// R_T as a membership table over Z/p^T (index = residue); exposed so the
// certificate can be re-verified independently of the search loop.
std::vector<bool> nonrep_residues(long long p, int M, int A, int T);

// nonzero with divisor support inside S
bool is_S_unit(const RationalFunction& u, const std::vector<Place>& S);

// All S-units lambda * prod p^{e_p} (p finite in S) of height <= bound,
// ordered by height, then exponent tuples descending lexicographically,
// then lambda by field index.  Without the infinite place in S the
// exponents must balance degrees to keep v_inf = 0.
std::vector<RationalFunction> enumerate_units(const FieldRef& field,
                                              const std::vector<Place>& S,
                                              int height_bound);

// Sums of at most max_units S-units of height <= height_bound.  N = 1 is
// answered exactly by the divisor test; N = 2 closes each candidate with
// the complement test; deeper levels are a pruned exhaustive search.
Verdict bounded_witness(const FieldRef& field, const std::vector<Place>& S,
                        const RationalFunction& target, int max_units,
                        int height_bound, long long budget = 1000000);

// Exact membership of w in the span of sums of unit pairs: the a_n span in
// odd characteristic, K + the b_n*B span in characteristic 2.  Distinct
// span degrees make greedy leading-term elimination exact, so the negative
// answer is a certificate, not a search outcome.
Verdict exact_witness_quadratic(const CurveRef& curve, const Polynomial& w);

} // namespace unitsum
