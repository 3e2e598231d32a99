#include "unitsum/search.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "unitsum/errors.hpp"

namespace unitsum {

namespace {

bool is_prime_ll(long long p) {
    if (p < 2) return false;
    for (long long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

// residue tables stay desk-sized
constexpr long long kResidueCap = 1ll << 22;

long long height_or_zero(const RationalFunction& f) {
    return f.is_zero() ? 0 : height(f);
}

void check_places(const FieldRef& field, const std::vector<Place>& S) {
    std::set<Place> seen;
    for (const auto& p : S) {
        if (!p.field()->same(*field)) throw MixedFields();
        if (!seen.insert(p).second)
            throw BadPlaceSet("repeated place " + p.text());
    }
}

// exponent vectors over the finite places of S, grouped by height
struct UnitShape {
    std::vector<Place> finite; // sorted ascending; exponents index into this
    bool has_infinity = false;
};

UnitShape unit_shape(const std::vector<Place>& S) {
    UnitShape sh;
    for (const auto& p : S) {
        if (p.is_infinite())
            sh.has_infinity = true;
        else
            sh.finite.push_back(p);
    }
    std::sort(sh.finite.begin(), sh.finite.end());
    return sh;
}

long long vector_height(const UnitShape& sh, const std::vector<int>& e) {
    long long up = 0, down = 0;
    for (size_t i = 0; i < e.size(); ++i) {
        long long d = static_cast<long long>(e[i]) * sh.finite[i].degree();
        if (d > 0)
            up += d;
        else
            down -= d;
    }
    return std::max(up, down);
}

long long degree_sum(const UnitShape& sh, const std::vector<int>& e) {
    long long s = 0;
    for (size_t i = 0; i < e.size(); ++i)
        s += static_cast<long long>(e[i]) * sh.finite[i].degree();
    return s;
}

void collect_vectors(const UnitShape& sh, int bound, size_t i,
                     std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (i == sh.finite.size()) {
        if (vector_height(sh, cur) <= bound &&
            (sh.has_infinity || degree_sum(sh, cur) == 0))
            out.push_back(cur);
        return;
    }
    int b = bound / static_cast<int>(sh.finite[i].degree());
    for (int e = -b; e <= b; ++e) {
        cur.push_back(e);
        collect_vectors(sh, bound, i + 1, cur, out);
        cur.pop_back();
    }
}

RationalFunction build_unit(const FieldRef& field, const UnitShape& sh,
                            const std::vector<int>& e, const FieldElement& lambda) {
    Polynomial num = Polynomial::constant(lambda);
    Polynomial den = Polynomial::one(field);
    for (size_t i = 0; i < e.size(); ++i) {
        if (e[i] > 0)
            num = num * sh.finite[i].prime().pow(static_cast<unsigned>(e[i]));
        else if (e[i] < 0)
            den = den * sh.finite[i].prime().pow(static_cast<unsigned>(-e[i]));
    }
    return RationalFunction(num, den);
}

// height ascending, then exponent tuples descending lexicographically
bool vector_order(const UnitShape& sh, const std::vector<int>& a,
                  const std::vector<int>& b) {
    long long ha = vector_height(sh, a), hb = vector_height(sh, b);
    if (ha != hb) return ha < hb;
    return a > b;
}

std::vector<RationalFunction> units_in_order(const FieldRef& field,
                                             const std::vector<Place>& S,
                                             int bound) {
    UnitShape sh = unit_shape(S);
    unsigned long long box = field->q() - 1;
    for (const auto& p : sh.finite) {
        box *= 2ull * static_cast<unsigned long long>(bound / p.degree()) + 1;
        if (box > FieldSpec::kDeskScaleCap)
            throw FieldTooLarge("S-unit enumeration above desk scale");
    }
    if (box > FieldSpec::kDeskScaleCap)
        throw FieldTooLarge("S-unit enumeration above desk scale");
    std::vector<std::vector<int>> vecs;
    std::vector<int> cur;
    collect_vectors(sh, bound, 0, cur, vecs);
    std::sort(vecs.begin(), vecs.end(),
              [&](const std::vector<int>& a, const std::vector<int>& b) {
                  return vector_order(sh, a, b);
              });
    unsigned long long q = field->q();
    unsigned long long total = (q - 1) * vecs.size();
    if (total > FieldSpec::kDeskScaleCap)
        throw FieldTooLarge("S-unit enumeration above desk scale");
    std::vector<RationalFunction> out;
    out.reserve(total);
    for (const auto& e : vecs)
        for (unsigned long long j = 1; j < q; ++j)
            out.push_back(build_unit(field, sh, e, field->from_index(j)));
    return out;
}

// Bounded-search scan order: buckets from the target height down to 0, then the
// heights above it; the balancing partner of a short sum tends to sit at
// the target height itself.
std::vector<size_t> scan_order(const std::vector<RationalFunction>& units,
                               long long target_height, int bound) {
    std::map<long long, std::vector<size_t>> buckets;
    for (size_t i = 0; i < units.size(); ++i)
        buckets[height_or_zero(units[i])].push_back(i);
    std::vector<size_t> order;
    order.reserve(units.size());
    long long s = std::min(target_height, static_cast<long long>(bound));
    for (long long h = s; h >= 0; --h)
        if (auto it = buckets.find(h); it != buckets.end())
            order.insert(order.end(), it->second.begin(), it->second.end());
    for (long long h = s + 1; h <= bound; ++h)
        if (auto it = buckets.find(h); it != buckets.end())
            order.insert(order.end(), it->second.begin(), it->second.end());
    return order;
}

struct WitnessSearch {
    const std::vector<RationalFunction>& units;
    const std::vector<size_t>& order;
    const std::vector<Place>& S;
    int bound;
    long long budget;
    long long spent = 0;
    long long completed_height = -1; // highest fully scanned top-level bucket

    void spend() {
        if (++spent > budget)
            throw BudgetExceeded("unit-sum search budget exhausted",
                                 completed_height);
    }

    void mark_bucket_end(size_t pos) {
        long long h = height_or_zero(units[order[pos]]);
        if (pos + 1 == order.size() ||
            height_or_zero(units[order[pos + 1]]) != h)
            completed_height = std::max(completed_height, h);
    }

    // exactly k units summing to rem; k >= 2
    bool find(const RationalFunction& rem, int k,
              std::vector<RationalFunction>& acc, int depth = 0) {
        if (k == 2) {
            for (size_t pos = 0; pos < order.size(); ++pos) {
                spend();
                const RationalFunction& u = units[order[pos]];
                RationalFunction v = rem - u;
                if (!v.is_zero() && height(v) <= bound && is_S_unit(v, S)) {
                    acc.push_back(u);
                    acc.push_back(v);
                    return true;
                }
                if (depth == 0) mark_bucket_end(pos);
            }
            return false;
        }
        for (size_t pos = 0; pos < order.size(); ++pos) {
            spend();
            RationalFunction next = rem - units[order[pos]];
            if (height_or_zero(next) <=
                static_cast<long long>(k - 1) * bound) {
                acc.push_back(units[order[pos]]);
                if (find(next, k - 1, acc, depth + 1)) return true;
                acc.pop_back();
            }
            if (depth == 0) mark_bucket_end(pos);
        }
        return false;
    }
};

FieldElement half(const FieldRef& field) {
    return field->from_int(2).inverse();
}

Verdict not_representable(std::string reason) {
    Verdict v;
    v.kind = Verdict::Kind::NotRepresentableExact;
    v.reason = std::move(reason);
    return v;
}

// re-sum a quadratic certificate and compare against w
void verify_quadratic(const CurveRef& curve, const OrderElement& eps,
                      const FieldElement& mu,
                      const std::vector<QuadraticUnitTerm>& terms,
                      const Polynomial& w) {
    OrderElement sum = OrderElement::zero(curve);
    for (const auto& t : terms)
        sum = sum + unit_term_value(eps, mu, t.lambda, t.power);
    if (!(sum == OrderElement::from_poly(curve, w)))
        throw Error("unit-sum certificate failed re-verification");
}

} // namespace

std::vector<bool> nonrep_residues(long long p, int M, int A, int T) {
    if (!is_prime_ll(p)) throw Error("p must be prime");
    if (M < 0 || A < 0 || T < 1) throw Error("bad certificate parameters");
    long long mod = 1;
    for (int i = 0; i < T; ++i) {
        mod *= p;
        if (mod > kResidueCap) throw Error("p^T above desk scale");
    }
    // set-valued dynamic program over the M slots; k = 0 covers sums with
    // fewer than M terms
    std::vector<bool> cur(static_cast<size_t>(mod), false);
    cur[0] = true;
    for (int j = 0; j < M; ++j) {
        std::vector<bool> next(static_cast<size_t>(mod), false);
        long long pw = 1;
        for (int t = 0; t < T; ++t) {
            for (int k = -A; k <= A; ++k) {
                long long step = ((pw % mod) * k) % mod;
                if (step < 0) step += mod;
                for (long long r = 0; r < mod; ++r)
                    if (cur[static_cast<size_t>(r)])
                        next[static_cast<size_t>((r + step) % mod)] = true;
            }
            pw *= p;
        }
        cur.swap(next);
    }
    // R_T holds the residues of the NEGATED sums
    std::vector<bool> neg(static_cast<size_t>(mod), false);
    for (long long r = 0; r < mod; ++r)
        if (cur[static_cast<size_t>(r)])
            neg[static_cast<size_t>((mod - r) % mod)] = true;
    return neg;
}

NonrepCertificate nonrepresentable_n(long long p, int M, int A,
                                     long long limit) {
    if (!is_prime_ll(p)) throw Error("p must be prime");
    if (M < 0 || A < 0 || limit < 1) throw Error("bad certificate parameters");
    // grow T until p^T dwarfs the residue set or leaves desk scale
    std::vector<std::vector<bool>> tables; // tables[T-1] = R_T
    long long mod_cap = std::max<long long>(64 * (limit + 1) * (limit + 1), 4096);
    mod_cap = std::min(mod_cap, kResidueCap);
    for (long long n = 1; n <= limit; ++n) {
        long long mod = 1;
        for (int T = 1;; ++T) {
            if (mod > mod_cap / p) break;
            mod *= p;
            if (tables.size() < static_cast<size_t>(T))
                tables.push_back(nonrep_residues(p, M, A, T));
            const auto& R = tables[static_cast<size_t>(T - 1)];
            if (!R[static_cast<size_t>(n % mod)])
                return NonrepCertificate{n, T};
        }
    }
    throw NoneFound("no modulus certificate for n <= " +
                    std::to_string(limit));
}

bool is_S_unit(const RationalFunction& u, const std::vector<Place>& S) {
    if (u.is_zero()) return false;
    Divisors dv = divisors(u);
    auto inside = [&](const Divisor& d) {
        for (const auto& [p, m] : d.entries()) {
            (void)m;
            if (std::find(S.begin(), S.end(), p) == S.end()) return false;
        }
        return true;
    };
    return inside(dv.zeros) && inside(dv.poles);
}

std::vector<RationalFunction> enumerate_units(const FieldRef& field,
                                              const std::vector<Place>& S,
                                              int height_bound) {
    if (height_bound < 0) throw Error("height bound must be nonnegative");
    check_places(field, S);
    return units_in_order(field, S, height_bound);
}

Verdict bounded_witness(const FieldRef& field, const std::vector<Place>& S,
                        const RationalFunction& target, int max_units,
                        int height_bound, long long budget) {
    if (max_units < 1) throw Error("max_units must be positive");
    if (height_bound < 0) throw Error("height bound must be nonnegative");
    if (budget < 1) throw Error("budget must be positive");
    if (!target.field()->same(*field)) throw MixedFields();
    check_places(field, S);
    Verdict v;
    if (target.is_zero()) { // the empty sum
        v.kind = Verdict::Kind::Representable;
        return v;
    }
    {
        Divisors dv = divisors(target);
        for (const auto& [p, m] : dv.poles.entries()) {
            (void)m;
            if (std::find(S.begin(), S.end(), p) == S.end())
                throw NotAnSInteger("pole at " + p.text() +
                                    " lies outside S");
        }
    }
    // one unit is decided exactly by the divisor test
    if (is_S_unit(target, S)) {
        v.kind = Verdict::Kind::Representable;
        v.rational_certificate.push_back(target);
        return v;
    }
    if (max_units == 1)
        return not_representable("target fails the S-unit divisor test: " +
                                 divisors(target).zeros.text() + " / " +
                                 divisors(target).poles.text());
    std::vector<RationalFunction> units =
        units_in_order(field, S, height_bound);
    std::vector<size_t> order =
        scan_order(units, height_or_zero(target), height_bound);
    WitnessSearch ws{units, order, S, height_bound, budget, 0, -1};
    for (int k = 2; k <= max_units; ++k) {
        std::vector<RationalFunction> acc;
        if (ws.find(target, k, acc)) {
            RationalFunction sum = RationalFunction::zero(field);
            for (const auto& u : acc) sum = sum + u;
            if (!(sum == target))
                throw Error("unit-sum certificate failed re-verification");
            v.kind = Verdict::Kind::Representable;
            v.rational_certificate = std::move(acc);
            return v;
        }
    }
    v.kind = Verdict::Kind::NoneWithinBounds;
    v.height_bound = height_bound;
    v.unit_count = static_cast<long long>(units.size());
    return v;
}

Verdict exact_witness_quadratic(const CurveRef& curve, const Polynomial& w) {
    auto fu = fundamental_unit(curve);
    if (!fu)
        throw NoFundamentalUnit("no fundamental unit for " + curve->text());
    const OrderElement& eps = fu->first;
    const FieldElement& mu = fu->second;
    FieldRef field = w.field();
    if (!field->same(*curve->field())) throw MixedFields();

    Verdict v;
    if (w.is_zero()) {
        v.kind = Verdict::Kind::Representable;
        return v;
    }

    bool odd = curve->kind() == CurveKind::OddChar;
    // span step: degrees in the unit-pair span are the multiples of d
    int d = odd ? curve->f().degree() / 2 : curve->B().degree();
    if (d == 0) {
        // torsion-only unit group (constant-field extension): sums of units
        // stay constant
        if (!w.is_constant())
            return not_representable(
                "unit sums are constant but deg w = " +
                std::to_string(w.degree()));
        v.kind = Verdict::Kind::Representable;
        v.quadratic_certificate.push_back(QuadraticUnitTerm{w.coeff(0), 0});
        verify_quadratic(curve, eps, mu, v.quadratic_certificate, Polynomial::constant(w.coeff(0)));
        return v;
    }

    // greedy leading-term elimination; span degrees n*d are pairwise
    // distinct, so each step is forced
    std::map<int, FieldElement> coeffs; // n -> c_n
    Polynomial rem = w;
    while (!rem.is_zero() && rem.degree() > 0) {
        int D = rem.degree();
        if (D % d != 0)
            return not_representable(
                "degree " + std::to_string(D) + " is not a multiple of the span step " +
                std::to_string(d));
        int n = D / d;
        auto [an, bn] = unit_powers(eps, n);
        Polynomial span = odd ? an : bn * curve->B();
        if (span.degree() != D)
            return not_representable(
                "span element for n = " + std::to_string(n) +
                " has degree " + std::to_string(span.degree()) +
                ", cannot reach degree " + std::to_string(D));
        FieldElement c = rem.leading() * span.leading().inverse();
        rem = rem - span * Polynomial::constant(c);
        if (rem.degree() >= D)
            throw Error("degree did not drop in span elimination");
        coeffs.emplace(n, c);
    }
    if (!rem.is_zero()) {
        // a_0 = 1 absorbs the constant in odd characteristic; in
        // characteristic 2 the constants sit beside the b_n*B span
        coeffs.emplace(0, rem.coeff(0));
    }

    FieldElement two_inv = odd ? half(field) : field->one();
    for (const auto& [n, c] : coeffs) {
        if (n == 0) {
            v.quadratic_certificate.push_back(QuadraticUnitTerm{c, 0});
            continue;
        }
        // c*(eps^n + conj(eps)^n) with conj(eps)^n = mu^n eps^{-n}
        FieldElement lam = c * two_inv;
        v.quadratic_certificate.push_back(QuadraticUnitTerm{lam, n});
        v.quadratic_certificate.push_back(
            QuadraticUnitTerm{lam * mu.pow(static_cast<unsigned>(n)), -n});
    }
    v.kind = Verdict::Kind::Representable;
    verify_quadratic(curve, eps, mu, v.quadratic_certificate, w);
    return v;
}

} // namespace unitsum
