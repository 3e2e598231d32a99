#include "unitsum/decompose.hpp"

#include <algorithm>
#include <set>

#include "unitsum/errors.hpp"

namespace unitsum {

namespace {

bool support_inside(const Divisor& d, const std::vector<Place>& S) {
    for (const auto& [p, m] : d.entries()) {
        (void)m;
        if (std::find(S.begin(), S.end(), p) == S.end()) return false;
    }
    return true;
}

} // namespace

RationalUnitSum decompose_rational(const RationalFunction& f,
                                   const std::vector<Place>& S,
                                   bool nonempty_zero) {
    const FieldRef& fld = f.field();
    if (S.size() < 2) throw BadPlaceSet("need at least two places");
    std::set<Place> seen;
    for (const Place& p : S) {
        if (!p.field()->same(*fld)) throw MixedFields();
        if (p.degree() != 1)
            throw BadPlaceSet("place " + p.text() + " has degree > 1");
        if (!seen.insert(p).second)
            throw BadPlaceSet("place " + p.text() + " repeats");
    }

    RationalUnitSum out;
    if (f.is_zero()) {
        if (nonempty_zero) {
            RationalFunction one = RationalFunction::one(fld);
            out.units = {one, -one}; // char 2 prints as [1, 1]
        }
        return out;
    }

    Divisors dv = divisors(f);
    for (const auto& [p, m] : dv.poles.entries()) {
        (void)m;
        if (std::find(S.begin(), S.end(), p) == S.end())
            throw NotAnSInteger("pole at " + p.text() + " lies outside S");
    }

    RationalFunction rem = f;
    out.height_trace.push_back(height(rem));
    while (!rem.is_zero() && height(rem) > 0) {
        // deepest S-pole; ties go to the place printing first
        const Place* p1 = nullptr;
        long long order1 = 0;
        for (const Place& p : S) {
            Valuation v = valuation(rem, p);
            if (v.infinite || v.v >= 0) continue;
            if (!p1 || -v.v > order1 || (-v.v == order1 && p < *p1)) {
                order1 = -v.v;
                p1 = &p;
            }
        }
        // f is an S-integer, so a nonconstant remainder has an S-pole
        if (!p1) throw Error("internal: height positive without an S-pole");
        const Place* p2 = nullptr;
        for (const Place& p : S)
            if (p != *p1 && (!p2 || p < *p2)) p2 = &p;

        Mobius m = Mobius::identity(fld);
        if (!p1->is_infinite()) // x -> alpha_1 + 1/x moves the pole home
            m = Mobius(p1->point(), fld->one(), fld->one(), fld->zero());
        Mobius minv = m.inverse();
        RationalFunction g =
            p1->is_infinite() ? rem : mobius_substitute(rem, m);
        std::optional<FieldElement> alpha2 = mobius_apply(
            minv, p2->is_infinite() ? std::nullopt
                                    : std::optional<FieldElement>(p2->point()));
        // p2 != p1, so p2 cannot land on the new infinite place
        if (!alpha2) throw Error("internal: auxiliary place at infinity");

        long long v1 = g.num().degree() - g.den().degree();
        if (v1 != order1) throw Error("internal: transported order mismatch");
        FieldElement lambda = g.num().leading() / g.den().leading();
        Polynomial shift =
            Polynomial::x(fld) - Polynomial::constant(*alpha2);
        RationalFunction u(Polynomial::constant(lambda) *
                               shift.pow(static_cast<unsigned>(v1)),
                           Polynomial::one(fld));
        if (!p1->is_infinite()) u = mobius_substitute(u, minv);

        rem = rem - u;
        out.units.push_back(u);
        long long h = rem.is_zero() ? 0 : height(rem);
        if (h >= out.height_trace.back())
            throw Error("internal: height did not descend");
        out.height_trace.push_back(h);
    }
    if (!rem.is_zero()) out.units.push_back(rem); // final constant

    RationalFunction sum = RationalFunction::zero(fld);
    for (const RationalFunction& u : out.units) {
        Divisors d = divisors(u);
        if (!support_inside(d.zeros, S) || !support_inside(d.poles, S))
            throw Error("internal: emitted unit leaves S");
        sum = sum + u;
    }
    if (!(sum == f)) throw Error("internal: unit sum does not reconstruct");
    return out;
}

// ---- quadratic case ----

OrderElement unit_term_value(const OrderElement& eps, const FieldElement& mu,
                             const FieldElement& lambda, long long k) {
    const CurveRef& cur = eps.curve();
    OrderElement base = eps;
    if (k < 0) {
        FieldElement s = mu.inverse();
        OrderElement cj = conj(eps);
        base = OrderElement(cur, cj.a() * Polynomial::constant(s),
                            cj.b() * Polynomial::constant(s));
        k = -k;
    }
    OrderElement acc = OrderElement::one(cur);
    for (long long i = 0; i < k; ++i) acc = mul(acc, base);
    return mul(OrderElement::from_poly(cur, Polynomial::constant(lambda)),
               acc);
}

namespace {

struct Embeddings {
    LaurentSeries y1, y2; // the two series roots at infinity
    long long low;

    LaurentSeries of(const OrderElement& r, bool first) const {
        const LaurentSeries& y = first ? y1 : y2;
        LaurentSeries a = LaurentSeries::from_poly(r.a(), low);
        if (r.b().is_zero()) return a;
        return a + LaurentSeries::from_poly(r.b(), low) * y;
    }
};

// pole order at the infinite place behind the embedding (0 when none)
long long pole_order(const LaurentSeries& s) {
    if (!s.known_nonzero()) {
        if (s.low() <= 0) return 0; // window reaches the constant term
        throw PrecisionExhausted("series window is all zero above exponent " +
                                 std::to_string(s.low()));
    }
    return std::max(s.lead_exp(), 0ll);
}

QuadraticUnitSum run_decompose(const OrderElement& w, const OrderElement& eps,
                               const FieldElement& mu, bool nonempty_zero,
                               int precision) {
    const CurveRef& cur = w.curve();
    const FieldRef& fld = cur->field();
    InfiniteRoots roots =
        cur->kind() == CurveKind::CharTwo
            ? quadratic_roots_at_infinity(cur->B(), cur->C(), precision)
            : quadratic_roots_at_infinity(cur->f(), precision);
    if (roots.roots.size() != 2)
        throw Error("internal: omega curve must split at infinity");

    QuadraticUnitSum out{eps, mu, {}, {}};
    if (w.is_zero()) {
        if (nonempty_zero) {
            out.terms = {{fld->one(), 0}, {-fld->one(), 0}};
        }
        return out;
    }

    Embeddings emb{roots.roots[0], roots.roots[1],
                   std::min(roots.roots[0].low(), roots.roots[1].low())};
    // label P1 by the pole of eps; its divisor is P2 - P1
    LaurentSeries e1 = emb.of(eps, true), e2 = emb.of(eps, false);
    bool p1_first = pole_order(e1) > 0;
    if (p1_first == (pole_order(e2) > 0))
        throw Error("internal: fundamental unit needs exactly one pole");
    if (!p1_first) std::swap(e1, e2);
    if (e1.lead_exp() != 1 || pole_order(e2) != 0)
        throw Error("internal: fundamental unit divisor is not P2 - P1");
    OrderElement eps_inv = unit_term_value(eps, mu, fld->one(), -1);
    LaurentSeries i2 = emb.of(eps_inv, !p1_first);
    if (i2.lead_exp() != 1)
        throw Error("internal: inverse unit divisor is not P1 - P2");

    OrderElement rem = w;
    auto total_poles = [&](const OrderElement& r) {
        return pole_order(emb.of(r, p1_first)) +
               pole_order(emb.of(r, !p1_first));
    };
    out.height_trace.push_back(total_poles(rem));
    auto push = [&](const FieldElement& lambda, long long k) {
        rem = rem - unit_term_value(eps, mu, lambda, k);
        out.terms.push_back({lambda, k});
        long long h = rem.is_zero() ? 0 : total_poles(rem);
        if (h >= out.height_trace.back())
            throw Error("internal: pole degree did not descend");
        out.height_trace.push_back(h);
    };

    while (!rem.is_zero()) {
        LaurentSeries r1 = emb.of(rem, p1_first);
        long long m = pole_order(r1);
        if (m > 0) {
            push(r1.lead_coeff() / e1.lead_coeff().pow(m), m);
            continue;
        }
        LaurentSeries r2 = emb.of(rem, !p1_first);
        long long t = pole_order(r2);
        if (t > 0) {
            push(r2.lead_coeff() / i2.lead_coeff().pow(t), -t);
            continue;
        }
        break; // no infinite poles left: rem is a constant
    }
    if (!rem.is_zero()) {
        if (!rem.b().is_zero() || !rem.a().is_constant())
            throw Error("internal: pole-free remainder is not constant");
        out.terms.push_back({rem.a().coeff(0), 0});
        rem = rem - OrderElement::from_poly(cur, rem.a());
    }

    OrderElement sum = OrderElement::zero(cur);
    for (const auto& t : out.terms)
        sum = sum + unit_term_value(eps, mu, t.lambda, t.power);
    if (!(sum == w)) throw Error("internal: unit sum does not reconstruct");
    return out;
}

} // namespace

QuadraticUnitSum decompose_quadratic(const OrderElement& w, bool nonempty_zero,
                                     int precision) {
    const CurveRef& cur = w.curve();
    ClassificationReport rep = classify(cur);
    if (rep.verdict != ClassificationReport::Verdict::Omega) {
        std::string why;
        for (const std::string& r : rep.reasons) {
            if (!why.empty()) why += ", ";
            why += r;
        }
        throw NotOmega("u(O_F) is not omega for " + cur->text() + " (" + why +
                       ")");
    }
    auto fu = fundamental_unit(cur);
    if (!fu)
        throw NoFundamentalUnit("omega curve without a fundamental unit");

    int deg_curve = cur->kind() == CurveKind::CharTwo
                        ? std::max(cur->B().degree(), cur->C().degree())
                        : cur->f().degree();
    int prec = precision > 0
                   ? precision
                   : 2 * (std::max(w.a().degree(), w.b().degree()) +
                          std::max(deg_curve, 1)) +
                         16;
    for (int attempt = 0; attempt < 6; ++attempt) {
        try {
            return run_decompose(w, fu->first, fu->second, nonempty_zero,
                                 prec);
        } catch (const PrecisionExhausted&) {
            prec *= 2; // required recovery: widen the window and retry
        }
    }
    return run_decompose(w, fu->first, fu->second, nonempty_zero, prec);
}

} // namespace unitsum
