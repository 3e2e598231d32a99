#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "unitsum/decompose.hpp"
#include "unitsum/errors.hpp"
#include "util.hpp"

using namespace unitsum;

namespace {

Polynomial P(const FieldRef& f, std::initializer_list<long long> cs) {
    return Polynomial::from_ints(f, cs);
}

RationalFunction rf(const FieldRef& f, std::initializer_list<long long> num,
                    std::initializer_list<long long> den) {
    return RationalFunction(P(f, num), P(f, den));
}

bool is_S_unit_of(const RationalFunction& u, const std::vector<Place>& S) {
    if (u.is_zero()) return false;
    Divisors d = divisors(u);
    auto inside = [&](const Divisor& dv) {
        for (const auto& [p, m] : dv.entries()) {
            (void)m;
            if (std::find(S.begin(), S.end(), p) == S.end()) return false;
        }
        return true;
    };
    return inside(d.zeros) && inside(d.poles);
}

void check_rational_contract(const RationalFunction& f,
                             const std::vector<Place>& S,
                             const RationalUnitSum& r) {
    RationalFunction sum = RationalFunction::zero(f.field());
    for (const auto& u : r.units) {
        CHECK(is_S_unit_of(u, S));
        sum = sum + u;
    }
    CHECK(sum == f);
    if (!f.is_zero()) {
        CHECK(static_cast<long long>(r.units.size()) <= height(f) + 1);
        REQUIRE(!r.height_trace.empty());
        CHECK(r.height_trace.front() == height(f));
        for (std::size_t i = 1; i < r.height_trace.size(); ++i)
            CHECK(r.height_trace[i] < r.height_trace[i - 1]);
    }
}

// random S-integer: polynomial part plus S-supported denominators
RationalFunction random_s_integer(const FieldRef& fld,
                                  const std::vector<Place>& S, int height_cap,
                                  std::mt19937_64& rng) {
    std::uniform_int_distribution<std::uint64_t> dc(0, fld->q() - 1);
    std::uniform_int_distribution<int> de(0, 2);
    Polynomial den = Polynomial::one(fld);
    int den_deg = 0;
    for (const Place& p : S) {
        if (p.is_infinite()) continue;
        int e = de(rng);
        if (den_deg + e > height_cap / 2) continue;
        den_deg += e;
        den = den * p.prime().pow(static_cast<unsigned>(e));
    }
    int max_num = height_cap - 1;
    std::uniform_int_distribution<int> dn(0, max_num);
    int nd = dn(rng);
    std::vector<FieldElement> cs;
    for (int i = 0; i <= nd; ++i) cs.push_back(fld->from_index(dc(rng)));
    Polynomial num = Polynomial::from_coeffs(fld, cs);
    if (num.is_zero()) num = Polynomial::one(fld);
    return RationalFunction(num, den);
}

} // namespace

TEST_CASE("greedy rational decomposition, pinned instances") {
    auto F5 = FieldSpec::prime(5);
    std::vector<Place> S = {Place::infinite(F5), Place::finite(P(F5, {0, 1}))};

    // polynomial with poles only at infinity peels term by term
    auto r1 = decompose_rational(rf(F5, {2, 3, 1}, {1}), S);
    REQUIRE(r1.units.size() == 3);
    CHECK(r1.units[0] == rf(F5, {0, 0, 1}, {1}));
    CHECK(r1.units[1] == rf(F5, {0, 3}, {1}));
    CHECK(r1.units[2] == rf(F5, {2}, {1}));
    CHECK(r1.height_trace == std::vector<long long>{2, 1, 0});

    // pole split between infinity and x
    auto r2 = decompose_rational(rf(F5, {1, 0, 1}, {0, 1}), S);
    REQUIRE(r2.units.size() == 2);
    CHECK(r2.units[0] == rf(F5, {0, 1}, {1}));
    CHECK(r2.units[1] == rf(F5, {1}, {0, 1}));
    CHECK(r2.height_trace == std::vector<long long>{2, 1, 0});

    // constants are single units; zero is the empty sum
    auto r3 = decompose_rational(rf(F5, {3}, {1}), S);
    REQUIRE(r3.units.size() == 1);
    CHECK(r3.units[0] == rf(F5, {3}, {1}));
    CHECK(decompose_rational(RationalFunction::zero(F5), S).units.empty());
    auto r4 = decompose_rational(RationalFunction::zero(F5), S, true);
    REQUIRE(r4.units.size() == 2);
    CHECK(r4.units[0] + r4.units[1] == RationalFunction::zero(F5));

    check_rational_contract(rf(F5, {2, 3, 1}, {1}), S, r1);
    check_rational_contract(rf(F5, {1, 0, 1}, {0, 1}), S, r2);
}

TEST_CASE("rational decomposition input validation") {
    auto F5 = FieldSpec::prime(5);
    Place inf = Place::infinite(F5);
    Place px = Place::finite(P(F5, {0, 1}));
    Place p1 = Place::finite(P(F5, {1, 1}));

    CHECK_THROWS_AS(decompose_rational(rf(F5, {1}, {1}), {inf}), BadPlaceSet);
    CHECK_THROWS_AS(decompose_rational(rf(F5, {1}, {1}), {inf, px, px}),
                    BadPlaceSet);
    CHECK_THROWS_AS(
        decompose_rational(rf(F5, {1}, {1}),
                           {inf, Place::finite(P(F5, {2, 0, 1}))}),
        BadPlaceSet); // degree-2 place
    // pole at x+1 is outside S
    CHECK_THROWS_AS(decompose_rational(rf(F5, {1}, {1, 1}), {inf, px}),
                    NotAnSInteger);
    // but inside an S that contains it
    auto ok = decompose_rational(rf(F5, {1}, {1, 1}), {inf, px, p1});
    check_rational_contract(rf(F5, {1}, {1, 1}), {inf, px, p1}, ok);
}

TEST_CASE("rational decomposition reconstructs random S-integers") {
    auto F5 = FieldSpec::prime(5);
    std::mt19937_64 rng(test_seed() ^ 0xdecull);
    std::vector<std::vector<Place>> sets = {
        {Place::infinite(F5), Place::finite(P(F5, {0, 1}))},
        {Place::infinite(F5), Place::finite(P(F5, {0, 1})),
         Place::finite(P(F5, {1, 1}))},
    };
    for (const auto& S : sets) {
        for (int iter = 0; iter < 100; ++iter) {
            RationalFunction f = random_s_integer(F5, S, 10, rng);
            auto r = decompose_rational(f, S);
            check_rational_contract(f, S, r);
            // decomposing the reconstructed sum agrees
            RationalFunction sum = RationalFunction::zero(F5);
            for (const auto& u : r.units) sum = sum + u;
            auto r2 = decompose_rational(sum, S);
            RationalFunction sum2 = RationalFunction::zero(F5);
            for (const auto& u : r2.units) sum2 = sum2 + u;
            CHECK(sum2 == f);
        }
    }
}

TEST_CASE("quadratic decomposition, pinned instances") {
    auto F5 = FieldSpec::prime(5);
    auto F2 = FieldSpec::prime(2);
    CurveRef odd = CurveSpec::make_curve(P(F5, {1, 0, 1}));
    CurveRef c2 = CurveSpec::make_curve(P(F2, {0, 1}), P(F2, {0, 1}));

    // w = x over y^2 = x^2+1: 3*eps + 2*eps^-1 with eps = x+y
    auto q1 = decompose_quadratic(OrderElement::from_poly(odd, P(F5, {0, 1})));
    CHECK(q1.eps == OrderElement(odd, P(F5, {0, 1}), Polynomial::one(F5)));
    REQUIRE(q1.terms.size() == 2);
    CHECK(q1.terms[0].lambda == F5->from_int(3));
    CHECK(q1.terms[0].power == 1);
    CHECK(q1.terms[1].lambda == F5->from_int(2));
    CHECK(q1.terms[1].power == -1);
    CHECK(q1.height_trace == std::vector<long long>{2, 1, 0});

    // w = y: 3*eps + 3*eps^-1
    auto q2 = decompose_quadratic(OrderElement::y(odd));
    REQUIRE(q2.terms.size() == 2);
    CHECK(q2.terms[0].lambda == F5->from_int(3));
    CHECK(q2.terms[0].power == 1);
    CHECK(q2.terms[1].lambda == F5->from_int(3));
    CHECK(q2.terms[1].power == -1);

    // char 2: x = eps + eps^-1 with eps = 1+y
    auto q3 = decompose_quadratic(OrderElement::from_poly(c2, P(F2, {0, 1})));
    REQUIRE(q3.terms.size() == 2);
    CHECK(q3.terms[0].lambda == F2->one());
    CHECK(q3.terms[0].power == 1);
    CHECK(q3.terms[1].lambda == F2->one());
    CHECK(q3.terms[1].power == -1);

    // constants and zero
    auto q4 = decompose_quadratic(OrderElement::from_poly(odd, P(F5, {4})));
    REQUIRE(q4.terms.size() == 1);
    CHECK(q4.terms[0].power == 0);
    CHECK(q4.terms[0].lambda == F5->from_int(4));
    CHECK(decompose_quadratic(OrderElement::zero(odd)).terms.empty());
    auto q5 = decompose_quadratic(OrderElement::zero(odd), true);
    CHECK(q5.terms.size() == 2);

    // verdict gate: infinity curves refuse
    CHECK_THROWS_AS(decompose_quadratic(OrderElement::y(
                        CurveSpec::make_curve(P(F5, {1, 0, 2})))),
                    NotOmega);
    CHECK_THROWS_AS(decompose_quadratic(OrderElement::y(
                        CurveSpec::make_curve(P(F5, {1, 0, 0, 0, 1})))),
                    NotOmega);
}

TEST_CASE("unit_term_value matches direct arithmetic") {
    auto F5 = FieldSpec::prime(5);
    CurveRef odd = CurveSpec::make_curve(P(F5, {1, 0, 1}));
    OrderElement eps(odd, P(F5, {0, 1}), Polynomial::one(F5));
    FieldElement mu = F5->from_int(4);

    CHECK(unit_term_value(eps, mu, F5->one(), 0) == OrderElement::one(odd));
    CHECK(unit_term_value(eps, mu, F5->one(), 1) == eps);
    // eps * eps^-1 = 1
    OrderElement inv = unit_term_value(eps, mu, F5->one(), -1);
    CHECK(mul(eps, inv) == OrderElement::one(odd));
    CHECK(inv == OrderElement(odd, P(F5, {0, 4}), Polynomial::one(F5)));
    // powers compose
    CHECK(mul(unit_term_value(eps, mu, F5->one(), 3),
              unit_term_value(eps, mu, F5->one(), -3)) ==
          OrderElement::one(odd));
    CHECK(unit_term_value(eps, mu, F5->from_int(2), 2) ==
          mul(OrderElement::from_poly(odd, P(F5, {2})), mul(eps, eps)));
}

TEST_CASE("quadratic decomposition reconstructs random elements") {
    std::mt19937_64 rng(test_seed() ^ 0x0dd5ull);
    auto F5 = FieldSpec::prime(5);
    auto F3 = FieldSpec::prime(3);
    auto F2 = FieldSpec::prime(2);
    auto F4 = FieldSpec::extension(2, 2);
    std::vector<CurveRef> curves = {
        CurveSpec::make_curve(P(F5, {1, 0, 1})),
        CurveSpec::make_curve(P(F3, {1, 0, 1})),
        CurveSpec::make_curve(P(F2, {0, 1}), P(F2, {0, 1})),
        CurveSpec::make_curve(P(F4, {0, 1}), P(F4, {0, 1, 1})),
    };
    for (const auto& cur : curves) {
        const FieldRef& fld = cur->field();
        std::uniform_int_distribution<std::uint64_t> dc(0, fld->q() - 1);
        std::uniform_int_distribution<int> dd(0, 6);
        for (int iter = 0; iter < 50; ++iter) {
            auto rand_poly = [&]() {
                int d = dd(rng);
                std::vector<FieldElement> cs;
                for (int i = 0; i <= d; ++i)
                    cs.push_back(fld->from_index(dc(rng)));
                return Polynomial::from_coeffs(fld, cs);
            };
            OrderElement w(cur, rand_poly(), rand_poly());
            auto r = decompose_quadratic(w);
            OrderElement sum = OrderElement::zero(cur);
            std::set<long long> powers;
            for (const auto& t : r.terms) {
                CHECK(!t.lambda.is_zero());
                CHECK(powers.insert(t.power).second); // distinct powers
                sum = sum + unit_term_value(r.eps, r.mu, t.lambda, t.power);
            }
            CHECK(sum == w);
            for (std::size_t i = 1; i < r.height_trace.size(); ++i)
                CHECK(r.height_trace[i] < r.height_trace[i - 1]);
        }
    }
}
