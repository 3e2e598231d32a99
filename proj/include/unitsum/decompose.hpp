#pragma once

#include <vector>

#include "unitsum/funcfield.hpp"
#include "unitsum/quadratic.hpp"

namespace unitsum {

// Sum-of-units decomposition of an S-integer of K(x).  `units` sums to the
// decomposed element; every entry has divisor support inside S.
// `height_trace` starts at H(input) and records H(remainder) after each
// pole-cancelling subtraction — strictly decreasing by construction.
struct RationalUnitSum {
    std::vector<RationalFunction> units;
    std::vector<long long> height_trace;
};

// Greedy decomposition per the height-descent argument: move the deepest
// S-pole to infinity, subtract lambda*(x - alpha_2)^v against another
// S-place, transport back, repeat; the leftover constant is the last unit.
// Zero decomposes to the empty list unless nonempty_zero asks for the
// [1, -1] form (char 2: [1, 1]).
RationalUnitSum decompose_rational(const RationalFunction& f,
                                   const std::vector<Place>& S,
                                   bool nonempty_zero = false);

// One term lambda * eps^power of a quadratic decomposition.
struct QuadraticUnitTerm {
    FieldElement lambda;
    long long power = 0;
};

struct QuadraticUnitSum {
    OrderElement eps;   // the fundamental unit the powers refer to
    FieldElement mu;    // norm(eps); eps^{-1} = conj(eps)/mu stays integral
    std::vector<QuadraticUnitTerm> terms; // pairwise distinct powers
    std::vector<long long> height_trace;  // total infinite-pole degree
};

// lambda * eps^k as an exact order element; k may be negative.
OrderElement unit_term_value(const OrderElement& eps, const FieldElement& mu,
                             const FieldElement& lambda, long long k);

// Decomposition of w in the omega case: cancel the poles of w at the two
// infinite places by powers of the fundamental unit, deepest first, positive
// powers against the place where eps has its pole, then negative powers.
// precision 0 picks a working window from the degrees; on PrecisionExhausted
// the window is doubled and the run retried.
QuadraticUnitSum decompose_quadratic(const OrderElement& w,
                                     bool nonempty_zero = false,
                                     int precision = 0);

} // namespace unitsum
