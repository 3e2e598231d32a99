#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "unitsum/errors.hpp"
#include "unitsum/search.hpp"
#include "util.hpp"

using namespace unitsum;

namespace {

Polynomial P(const FieldRef& f, std::initializer_list<long long> cs) {
    return Polynomial::from_ints(f, cs);
}

RationalFunction rf(const Polynomial& n, const Polynomial& d) {
    return RationalFunction(n, d);
}

// every sum -(p^{t_1} k_1 + ... + p^{t_M} k_M) with t_j <= tmax as plain
// integers; independent of the residue tables
void integer_sums(long long p, int M, int A, int tmax,
                  long long acc, std::set<long long>& out) {
    if (M == 0) {
        out.insert(-acc);
        return;
    }
    long long pw = 1;
    for (int t = 0; t <= tmax; ++t) {
        for (int k = -A; k <= A; ++k)
            integer_sums(p, M - 1, A, tmax, acc + pw * k, out);
        pw *= p;
    }
}

} // namespace

TEST_CASE("modulus certificates match the worked values") {
    auto r = nonrepresentable_n(2, 1, 1);
    CHECK(r.n == 3);
    CHECK(r.T == 3);

    r = nonrepresentable_n(2, 2, 1);
    CHECK(r.n == 11);
    CHECK(r.T == 5);

    r = nonrepresentable_n(3, 1, 1);
    CHECK(r.n == 2);
    CHECK(r.T == 2);

    r = nonrepresentable_n(5, 0, 3);
    CHECK(r.n == 1);
    CHECK(r.T == 1);
}

TEST_CASE("modulus certificates re-verify and survive integer enumeration") {
    struct Case {
        long long p;
        int M, A;
    } cases[] = {{2, 1, 1}, {2, 2, 1}, {3, 1, 1}, {3, 2, 1}, {5, 1, 2}};
    for (const auto& c : cases) {
        auto r = nonrepresentable_n(c.p, c.M, c.A);
        std::vector<bool> R = nonrep_residues(c.p, c.M, c.A, r.T);
        long long mod = 1;
        for (int i = 0; i < r.T; ++i) mod *= c.p;
        CHECK(!R[static_cast<size_t>(r.n % mod)]);
        // wider exponent range than the certificate used
        std::set<long long> sums;
        integer_sums(c.p, c.M, c.A, r.T + 2, 0, sums);
        CHECK(sums.count(r.n) == 0);
        // least: everything below n is an actual sum
        for (long long m = 1; m < r.n; ++m) CHECK(sums.count(m) == 1);
    }
}

TEST_CASE("residue tables agree with direct tuple enumeration") {
    for (int T = 1; T <= 4; ++T) {
        std::vector<bool> R = nonrep_residues(2, 2, 1, T);
        long long mod = 1ll << T;
        std::vector<bool> direct(static_cast<size_t>(mod), false);
        for (int t1 = 0; t1 < T; ++t1)
            for (int k1 = -1; k1 <= 1; ++k1)
                for (int t2 = 0; t2 < T; ++t2)
                    for (int k2 = -1; k2 <= 1; ++k2) {
                        long long v = -((1ll << t1) * k1 + (1ll << t2) * k2);
                        direct[static_cast<size_t>(((v % mod) + mod) % mod)] =
                            true;
                    }
        CHECK(R == direct);
    }
}

TEST_CASE("modulus certificate validation") {
    CHECK_THROWS_AS(nonrepresentable_n(4, 1, 1), Error);
    CHECK_THROWS_AS(nonrepresentable_n(1, 1, 1), Error);
    CHECK_THROWS_AS(nonrepresentable_n(2, -1, 1), Error);
    CHECK_THROWS_AS(nonrep_residues(2, 1, 1, 0), Error);
    // 1 and 2 are both single-term sums, so a tiny limit finds nothing
    CHECK_THROWS_AS(nonrepresentable_n(2, 1, 1, 2), NoneFound);
}

TEST_CASE("S-unit membership is the divisor-support test") {
    auto F5 = FieldSpec::prime(5);
    std::vector<Place> S = {Place::infinite(F5), Place::finite(P(F5, {0, 1}))};
    CHECK(is_S_unit(RationalFunction::from_poly(P(F5, {0, 1})), S));
    CHECK(is_S_unit(rf(P(F5, {3}), P(F5, {0, 0, 1})), S));
    CHECK(is_S_unit(RationalFunction::constant(F5->from_int(2)), S));
    CHECK(!is_S_unit(RationalFunction::from_poly(P(F5, {1, 1})), S));
    CHECK(!is_S_unit(RationalFunction::zero(F5), S));
}

TEST_CASE("unit enumeration order is pinned") {
    auto F2 = FieldSpec::prime(2);
    std::vector<Place> S = {Place::infinite(F2), Place::finite(P(F2, {0, 1}))};
    auto units = enumerate_units(F2, S, 1);
    REQUIRE(units.size() == 3);
    CHECK(units[0] == RationalFunction::one(F2));
    CHECK(units[1] == RationalFunction::from_poly(P(F2, {0, 1})));
    CHECK(units[2] == rf(P(F2, {1}), P(F2, {0, 1})));
}

TEST_CASE("unit enumeration counts and contracts") {
    auto F5 = FieldSpec::prime(5);
    Place inf = Place::infinite(F5);
    Place px = Place::finite(P(F5, {0, 1}));
    auto units = enumerate_units(F5, {inf, px}, 1);
    CHECK(units.size() == 12); // (q-1) * 3 exponent vectors
    std::set<std::string> seen;
    for (const auto& u : units) {
        CHECK(is_S_unit(u, {inf, px}));
        CHECK(height(u) <= 1);
        std::string key = to_text(u.num()) + "/" + to_text(u.den());
        CHECK(seen.insert(key).second); // no duplicates
    }
    // first block is the constants in field-index order
    CHECK(units[0] == RationalFunction::constant(F5->from_int(1)));
    CHECK(units[1] == RationalFunction::constant(F5->from_int(2)));
    CHECK(units[2] == RationalFunction::constant(F5->from_int(3)));
    CHECK(units[3] == RationalFunction::constant(F5->from_int(4)));
    CHECK(units[4] == RationalFunction::from_poly(P(F5, {0, 1})));
}

TEST_CASE("without the infinite place exponents must balance") {
    auto F2 = FieldSpec::prime(2);
    Place px = Place::finite(P(F2, {0, 1}));
    Place px1 = Place::finite(P(F2, {1, 1}));
    auto units = enumerate_units(F2, {px, px1}, 2);
    REQUIRE(units.size() == 5);
    CHECK(units[0] == RationalFunction::one(F2));
    CHECK(units[1] == rf(P(F2, {0, 1}), P(F2, {1, 1})));
    CHECK(units[2] == rf(P(F2, {1, 1}), P(F2, {0, 1})));
    CHECK(units[3] == rf(P(F2, {0, 0, 1}), P(F2, {1, 2, 1})));
    CHECK(units[4] == rf(P(F2, {1, 2, 1}), P(F2, {0, 0, 1})));
    for (const auto& u : units) {
        Divisors dv = divisors(u);
        CHECK(dv.zeros.multiplicity(Place::infinite(F2)) == 0);
        CHECK(dv.poles.multiplicity(Place::infinite(F2)) == 0);
    }
}

TEST_CASE("unit enumeration validation") {
    auto F2 = FieldSpec::prime(2);
    auto F3 = FieldSpec::prime(3);
    Place px = Place::finite(P(F2, {0, 1}));
    CHECK_THROWS_AS(enumerate_units(F2, {px, px}, 1), BadPlaceSet);
    CHECK_THROWS_AS(enumerate_units(F2, {Place::infinite(F3)}, 1),
                    MixedFields);
    CHECK_THROWS_AS(enumerate_units(F2, {px}, -1), Error);
    CHECK_THROWS_AS(
        enumerate_units(F2, {Place::infinite(F2), px}, 1 << 20),
        FieldTooLarge);
}

TEST_CASE("bounded witness: pinned certificates") {
    auto F2 = FieldSpec::prime(2);
    Place inf = Place::infinite(F2);
    Place px = Place::finite(P(F2, {0, 1}));
    Place px1 = Place::finite(P(F2, {1, 1}));
    std::vector<Place> S = {inf, px, px1};
    RationalFunction target = RationalFunction::from_poly(P(F2, {1, 1, 1}));

    SUBCASE("one unit is refuted exactly") {
        Verdict v = bounded_witness(F2, S, target, 1, 4);
        CHECK(v.kind == Verdict::Kind::NotRepresentableExact);
        CHECK(!v.reason.empty());
    }
    SUBCASE("two units succeed with the canonical pair") {
        Verdict v = bounded_witness(F2, S, target, 2, 4);
        REQUIRE(v.kind == Verdict::Kind::Representable);
        REQUIRE(v.rational_certificate.size() == 2);
        CHECK(v.rational_certificate[0] ==
              RationalFunction::from_poly(P(F2, {0, 0, 1})));
        CHECK(v.rational_certificate[1] ==
              RationalFunction::from_poly(P(F2, {1, 1})));
    }
    SUBCASE("a unit target is its own certificate") {
        RationalFunction u = rf(P(F2, {0, 0, 1}), P(F2, {1, 1}));
        Verdict v = bounded_witness(F2, S, u, 2, 4);
        REQUIRE(v.kind == Verdict::Kind::Representable);
        REQUIRE(v.rational_certificate.size() == 1);
        CHECK(v.rational_certificate[0] == u);
    }
}

TEST_CASE("bounded witness: GF(5) x+3 splits as x plus 3") {
    auto F5 = FieldSpec::prime(5);
    std::vector<Place> S = {Place::infinite(F5), Place::finite(P(F5, {0, 1}))};
    Verdict v = bounded_witness(F5, S, RationalFunction::from_poly(P(F5, {3, 1})),
                                2, 2);
    REQUIRE(v.kind == Verdict::Kind::Representable);
    REQUIRE(v.rational_certificate.size() == 2);
    CHECK(v.rational_certificate[0] ==
          RationalFunction::from_poly(P(F5, {0, 1})));
    CHECK(v.rational_certificate[1] ==
          RationalFunction::constant(F5->from_int(3)));
}

TEST_CASE("bounded witness: inconclusive and error outcomes") {
    auto F2 = FieldSpec::prime(2);
    Place inf = Place::infinite(F2);
    Place px = Place::finite(P(F2, {0, 1}));
    RationalFunction target = RationalFunction::from_poly(P(F2, {1, 1, 1}));

    // over S = {inf, x} the S-units are powers of x; x^2+x+1 has three
    // terms, so no pair works at any bound
    Verdict v = bounded_witness(F2, {inf, px}, target, 2, 3);
    CHECK(v.kind == Verdict::Kind::NoneWithinBounds);
    CHECK(v.height_bound == 3);
    CHECK(v.unit_count == 7);

    CHECK_THROWS_AS(
        bounded_witness(F2, {inf, px},
                        rf(P(F2, {1}), P(F2, {1, 1, 1})), 2, 3),
        NotAnSInteger);
    CHECK_THROWS_AS(bounded_witness(F2, {inf, px}, target, 0, 3), Error);
    CHECK_THROWS_AS(bounded_witness(F2, {inf, px}, target, 2, 3, 1),
                    BudgetExceeded);
    try {
        bounded_witness(F2, {inf, px}, target, 3, 3, 25);
    } catch (const BudgetExceeded& e) {
        CHECK(e.partial_bound >= -1);
        CHECK(e.partial_bound <= 3);
    }

    Verdict z = bounded_witness(F2, {inf, px}, RationalFunction::zero(F2), 2, 3);
    CHECK(z.kind == Verdict::Kind::Representable);
    CHECK(z.rational_certificate.empty());
}

TEST_CASE("bounded witness certificates always re-sum") {
    auto F5 = FieldSpec::prime(5);
    std::mt19937_64 rng(test_seed() ^ 0x5ea2c4ull);
    Place inf = Place::infinite(F5);
    Place px = Place::finite(P(F5, {0, 1}));
    Place px1 = Place::finite(P(F5, {1, 1}));
    std::vector<Place> S = {inf, px, px1};
    int found = 0;
    for (int it = 0; it < 40; ++it) {
        std::vector<FieldElement> cs;
        for (int i = 0; i < 4; ++i)
            cs.push_back(F5->from_index(rng() % 5));
        Polynomial num = Polynomial::from_coeffs(F5, cs);
        if (num.is_zero()) continue;
        RationalFunction t = RationalFunction::from_poly(num);
        Verdict v = bounded_witness(F5, S, t, 3, 4);
        if (v.kind != Verdict::Kind::Representable) continue;
        ++found;
        CHECK(v.rational_certificate.size() <= 3);
        RationalFunction sum = RationalFunction::zero(F5);
        for (const auto& u : v.rational_certificate) {
            CHECK(is_S_unit(u, S));
            CHECK(height(u) <= 4);
            sum = sum + u;
        }
        CHECK(sum == t);
    }
    CHECK(found > 10);
}

TEST_CASE("exact quadratic witness: degree-span refutation on y^2 = x^4+1") {
    auto F5 = FieldSpec::prime(5);
    auto cur = CurveSpec::make_curve(P(F5, {1, 0, 0, 0, 1}));

    Verdict no = exact_witness_quadratic(cur, P(F5, {0, 1}));
    CHECK(no.kind == Verdict::Kind::NotRepresentableExact);
    CHECK(no.reason.find("span step 2") != std::string::npos);

    Verdict yes = exact_witness_quadratic(cur, P(F5, {0, 0, 3}));
    REQUIRE(yes.kind == Verdict::Kind::Representable);
    REQUIRE(yes.quadratic_certificate.size() == 2);
    CHECK(yes.quadratic_certificate[0].lambda == F5->from_int(4));
    CHECK(yes.quadratic_certificate[0].power == 1);
    CHECK(yes.quadratic_certificate[1].lambda == F5->from_int(1));
    CHECK(yes.quadratic_certificate[1].power == -1);

    // degree 6 = 3 * span step is again refuted only if 6/2 = 3 works out;
    // x^6 has degree divisible by 2, so elimination proceeds and the tail
    // decides.  x^6 reduces against a_3 and the remainder stays in span.
    Verdict deep = exact_witness_quadratic(cur, P(F5, {0, 0, 0, 0, 0, 0, 1}));
    CHECK(deep.kind == Verdict::Kind::Representable);

    Verdict mixed = exact_witness_quadratic(cur, P(F5, {0, 0, 2, 1}));
    CHECK(mixed.kind == Verdict::Kind::NotRepresentableExact);
}

TEST_CASE("exact quadratic witness: characteristic 2") {
    auto F2 = FieldSpec::prime(2);
    auto cur = CurveSpec::make_curve(P(F2, {0, 1}), P(F2, {0, 1}));

    Verdict v = exact_witness_quadratic(cur, P(F2, {0, 1}));
    REQUIRE(v.kind == Verdict::Kind::Representable);
    REQUIRE(v.quadratic_certificate.size() == 2);
    CHECK(v.quadratic_certificate[0].lambda == F2->one());
    CHECK(v.quadratic_certificate[0].power == 1);
    CHECK(v.quadratic_certificate[1].lambda == F2->one());
    CHECK(v.quadratic_certificate[1].power == -1);

    // 1 + x + x^2 needs the constant slot plus two span elements
    Verdict w = exact_witness_quadratic(cur, P(F2, {1, 1, 1}));
    REQUIRE(w.kind == Verdict::Kind::Representable);
    CHECK(w.quadratic_certificate.size() == 5);
}

TEST_CASE("exact quadratic witness: omega curve agrees with decomposition") {
    auto F5 = FieldSpec::prime(5);
    auto cur = CurveSpec::make_curve(P(F5, {1, 0, 1}));
    Verdict v = exact_witness_quadratic(cur, P(F5, {0, 1}));
    REQUIRE(v.kind == Verdict::Kind::Representable);
    REQUIRE(v.quadratic_certificate.size() == 2);
    CHECK(v.quadratic_certificate[0].lambda == F5->from_int(3));
    CHECK(v.quadratic_certificate[0].power == 1);
    CHECK(v.quadratic_certificate[1].lambda == F5->from_int(2));
    CHECK(v.quadratic_certificate[1].power == -1);
}

TEST_CASE("exact quadratic witness: degenerate and error cases") {
    auto F5 = FieldSpec::prime(5);
    auto F3 = FieldSpec::prime(3);
    auto F2 = FieldSpec::prime(2);

    CHECK_THROWS_AS(exact_witness_quadratic(
                        CurveSpec::make_curve(P(F5, {0, 1, 0, 1})),
                        P(F5, {0, 1})),
                    NoFundamentalUnit);
    CHECK_THROWS_AS(exact_witness_quadratic(
                        CurveSpec::make_curve(P(F5, {1, 0, 1})),
                        P(F3, {0, 1})),
                    MixedFields);

    auto cur = CurveSpec::make_curve(P(F5, {1, 0, 1}));
    Verdict z = exact_witness_quadratic(cur, Polynomial::zero(F5));
    CHECK(z.kind == Verdict::Kind::Representable);
    CHECK(z.quadratic_certificate.empty());

    // constant-field extension: units are torsion, sums stay constant
    auto tor = CurveSpec::make_curve(Polynomial::one(F2), Polynomial::one(F2));
    Verdict c = exact_witness_quadratic(tor, Polynomial::one(F2));
    REQUIRE(c.kind == Verdict::Kind::Representable);
    REQUIRE(c.quadratic_certificate.size() == 1);
    CHECK(c.quadratic_certificate[0].power == 0);
    Verdict nc = exact_witness_quadratic(tor, P(F2, {0, 1}));
    CHECK(nc.kind == Verdict::Kind::NotRepresentableExact);
}

TEST_CASE("exact witness verdicts agree with a direct bounded search") {
    auto F5 = FieldSpec::prime(5);
    auto F2 = FieldSpec::prime(2);
    std::vector<CurveRef> curves = {
        CurveSpec::make_curve(P(F5, {1, 0, 1})),
        CurveSpec::make_curve(P(F5, {1, 0, 0, 0, 1})),
        CurveSpec::make_curve(P(F2, {0, 1}), P(F2, {0, 1})),
    };
    std::mt19937_64 rng(test_seed() ^ 0x517be55ull);
    for (const auto& cur : curves) {
        auto fu = fundamental_unit(cur);
        REQUIRE(fu.has_value());
        const auto& [eps, mu] = *fu;
        auto F = cur->field();
        // all sums of up to 2 unit terms lambda*eps^k with |k| <= 2
        std::vector<OrderElement> pool;
        for (int k = -2; k <= 2; ++k)
            for (std::uint64_t j = 1; j < F->q(); ++j)
                pool.push_back(
                    unit_term_value(eps, mu, F->from_index(j), k));
        std::set<std::string> reachable;
        reachable.insert(OrderElement::zero(cur).text());
        for (const auto& u : pool) {
            reachable.insert(u.text());
            for (const auto& v : pool) reachable.insert((u + v).text());
        }
        for (int it = 0; it < 30; ++it) {
            std::vector<FieldElement> cs;
            for (int i = 0; i < 5; ++i)
                cs.push_back(F->from_index(rng() % F->q()));
            Polynomial w = Polynomial::from_coeffs(F, cs);
            Verdict v = exact_witness_quadratic(cur, w);
            bool found =
                reachable.count(OrderElement::from_poly(cur, w).text()) > 0;
            if (v.kind == Verdict::Kind::NotRepresentableExact)
                CHECK(!found); // a proof can never contradict a witness
            if (v.kind == Verdict::Kind::Representable) {
                OrderElement sum = OrderElement::zero(cur);
                for (const auto& t : v.quadratic_certificate)
                    sum = sum + unit_term_value(eps, mu, t.lambda, t.power);
                CHECK(sum == OrderElement::from_poly(cur, w));
            }
        }
    }
}
