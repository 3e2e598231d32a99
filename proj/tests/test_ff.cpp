#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "unitsum/errors.hpp"
#include "unitsum/ff.hpp"
#include "util.hpp"

using namespace unitsum;

TEST_CASE("prime field construction and arithmetic") {
    auto F5 = FieldSpec::prime(5);
    CHECK(F5->p() == 5);
    CHECK(F5->k() == 1);
    CHECK(F5->q() == 5);
    CHECK(F5->text() == "GF(5)");

    FieldElement a = F5->from_int(3), b = F5->from_int(4);
    CHECK((a + b).index() == 2);
    CHECK((a - b).index() == 4);
    CHECK((a * b).index() == 2);
    CHECK((a / b).index() == 2); // 3 * 4^-1 = 3 * 4 = 12 = 2
    CHECK((-a).index() == 2);
    CHECK(a.pow(0).is_one());
    CHECK(a.pow(4).is_one());
    CHECK(F5->from_int(-1).index() == 4);

    CHECK_THROWS_AS(FieldSpec::prime(6), Error);
    CHECK_THROWS_AS(FieldSpec::prime(1), Error);
    CHECK_THROWS_AS((void)F5->zero().inverse(), DivisionByZero);
    CHECK_THROWS_AS((void)(a / F5->zero()), DivisionByZero);
}

TEST_CASE("moduli above the desk-scale cap are rejected") {
    CHECK_NOTHROW(FieldSpec::prime(2097143)); // largest prime below 2^21
    CHECK_THROWS_AS(FieldSpec::prime(2097169), FieldTooLarge);
}

TEST_CASE("default extension moduli are the first irreducibles in index order") {
    // independently recomputed: GF(4) t^2+t+1, GF(8) t^3+t+1, GF(16) t^4+t+1,
    // GF(9) t^2+1, GF(25) t^2+2, GF(27) t^3+2t+1
    struct Row { unsigned p, k; std::vector<std::uint32_t> mod; };
    const Row rows[] = {
        {2, 2, {1, 1, 1}},
        {2, 3, {1, 1, 0, 1}},
        {2, 4, {1, 1, 0, 0, 1}},
        {3, 2, {1, 0, 1}},
        {5, 2, {2, 0, 1}},
        {3, 3, {1, 2, 0, 1}},
    };
    for (const auto& r : rows) {
        auto F = FieldSpec::extension(r.p, r.k);
        CHECK(F->modulus() == r.mod);
        CHECK(F->q() == [&] { std::uint64_t q = 1; for (unsigned i = 0; i < r.k; ++i) q *= r.p; return q; }());
    }
    CHECK(FieldSpec::extension(2, 2)->text() == "GF(4):t^2+t+1");
}

TEST_CASE("explicit extension moduli are validated") {
    // t^2+1 is reducible over GF(2)
    CHECK_THROWS_AS(FieldSpec::extension(2, 2, {1, 0, 1}), Error);
    CHECK_THROWS_AS(FieldSpec::extension(2, 2, {1, 1, 0}), Error); // not monic
    CHECK_NOTHROW(FieldSpec::extension(2, 2, {1, 1, 1}));
    CHECK_THROWS_AS(FieldSpec::extension(2, 31), FieldTooLarge);
}

TEST_CASE("GF(4) multiplication table") {
    auto F4 = FieldSpec::extension(2, 2);
    FieldElement t = F4->from_index(2), t1 = F4->from_index(3);
    CHECK((t * t) == t1);      // t^2 = t+1
    CHECK((t * t1).is_one());  // t(t+1) = t^2+t = 1
    CHECK((t1 * t1) == t);     // (t+1)^2 = t^2+1 = t
    CHECK(t.inverse() == t1);
    CHECK((t + t1).is_one());
    CHECK(t.text() == "t");
    CHECK(t1.text() == "t+1");
    CHECK(F4->from_index(0).text() == "0");
}

TEST_CASE("element index round-trip and enumeration order") {
    for (auto F : {FieldSpec::prime(7), FieldSpec::extension(2, 3),
                   FieldSpec::extension(3, 2)}) {
        auto all = enumerate(F);
        REQUIRE(all.size() == F->q());
        for (std::uint64_t i = 0; i < F->q(); ++i) {
            CHECK(all[i].index() == i);
            CHECK(F->from_index(i) == all[i]);
        }
    }
    auto big = FieldSpec::prime(2097143);
    CHECK_THROWS_AS(enumerate(big), FieldTooLarge);
}

TEST_CASE("square roots in prime fields") {
    auto F7 = FieldSpec::prime(7);
    auto r = sqrt_elem(F7->from_int(2));
    REQUIRE(r.has_value());
    CHECK(r->index() == 3); // {3,4} both square to 2; the smaller index wins
    CHECK(!sqrt_elem(F7->from_int(3)).has_value());
    CHECK(sqrt_elem(F7->zero())->is_zero());

    // 13 = 1 mod 4 exercises the general discrete-log descent
    auto F13 = FieldSpec::prime(13);
    auto s = sqrt_elem(F13->from_int(10));
    REQUIRE(s.has_value());
    CHECK(s->index() == 6);
    CHECK(!sqrt_elem(F13->from_int(5)).has_value());

    auto F2 = FieldSpec::prime(2);
    CHECK(sqrt_elem(F2->one())->is_one()); // Frobenius is the identity here
}

TEST_CASE("square roots in GF(9)") {
    // square table recomputed by hand: squares are indices {0,1,2,3,6}
    auto F9 = FieldSpec::extension(3, 2);
    auto s = sqrt_elem(F9->from_index(2));
    REQUIRE(s.has_value());
    CHECK(s->index() == 3); // sqrt(2) = t, not 2t (index 6)
    s = sqrt_elem(F9->from_index(3));
    REQUIRE(s.has_value());
    CHECK(s->index() == 5); // sqrt(t) = t+2
    CHECK(!sqrt_elem(F9->from_index(4)).has_value()); // t+1 is a non-square
}

TEST_CASE("sqrt in characteristic 2 is the inverse Frobenius") {
    auto F8 = FieldSpec::extension(2, 3);
    for (std::uint64_t i = 0; i < 8; ++i) {
        FieldElement c = F8->from_index(i);
        auto s = sqrt_elem(c);
        REQUIRE(s.has_value()); // every element is a square
        CHECK((*s) * (*s) == c);
        CHECK(*s == frobenius_root(c));
    }
    CHECK(frobenius_root(F8->from_index(2)).index() == 6); // sqrt(t) = t^2+t
}

TEST_CASE("artin-schreier solutions in characteristic 2") {
    auto F2 = FieldSpec::prime(2);
    CHECK(artin_schreier_solve(F2->zero())->is_zero());
    CHECK(!artin_schreier_solve(F2->one()).has_value()); // trace(1) = 1

    // image of a^2+a on GF(8): indices {0,2,4,6}; least solutions hand-checked
    auto F8 = FieldSpec::extension(2, 3);
    auto a = artin_schreier_solve(F8->from_index(2));
    REQUIRE(a.has_value());
    CHECK(a->index() == 4); // t^2 solves a^2+a = t
    CHECK((*a) * (*a) + *a == F8->from_index(2));
    CHECK(!artin_schreier_solve(F8->one()).has_value());
    a = artin_schreier_solve(F8->from_index(6));
    REQUIRE(a.has_value());
    CHECK(a->index() == 2);

    auto F5 = FieldSpec::prime(5);
    CHECK_THROWS_AS((void)artin_schreier_solve(F5->one()), WrongCharacteristic);
}

TEST_CASE("absolute trace") {
    auto F8 = FieldSpec::extension(2, 3);
    // traces over GF(8): odd indices have trace 1 (hand table)
    for (std::uint64_t i = 0; i < 8; ++i)
        CHECK(absolute_trace(F8->from_index(i)).index() == (i & 1));
    auto F4 = FieldSpec::extension(2, 2);
    CHECK(absolute_trace(F4->one()).is_zero());
    CHECK(absolute_trace(F4->from_index(2)).is_one());
}

TEST_CASE("field identity is tracked") {
    auto F5 = FieldSpec::prime(5);
    auto F7 = FieldSpec::prime(7);
    CHECK_THROWS_AS((void)(F5->one() + F7->one()), MixedFields);
    auto F5b = FieldSpec::prime(5);
    CHECK(F5->same(*F5b)); // same (p, k, modulus) counts as the same field
    CHECK_NOTHROW((void)(F5->one() + F5b->one()));
}

TEST_CASE("random field algebra laws") {
    std::mt19937_64 rng(test_seed());
    for (auto F : {FieldSpec::prime(5), FieldSpec::prime(2097143),
                   FieldSpec::extension(2, 4), FieldSpec::extension(5, 2)}) {
        for (int it = 0; it < 200; ++it) {
            FieldElement a = F->from_index(rng() % F->q());
            FieldElement b = F->from_index(rng() % F->q());
            FieldElement c = F->from_index(rng() % F->q());
            CHECK(a * (b + c) == a * b + a * c);
            CHECK((a + b) * (a - b) == a * a - b * b);
            if (!a.is_zero()) {
                CHECK((a * a.inverse()).is_one());
                CHECK(a.pow(F->q() - 1).is_one());
            }
            CHECK(a.pow(3) == a * a * a);
        }
    }
}
