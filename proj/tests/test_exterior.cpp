#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "g2gauge/errors.hpp"
#include "g2gauge/kform.hpp"

using namespace g2gauge;

namespace {

KForm random_form(int degree, const RingPtr& ring, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> coeff(-6, 6);
    std::uniform_int_distribution<int> pick(0, 2);
    std::uniform_int_distribution<std::size_t> var(0, ring->var_count() - 1);
    KForm w(degree, ring);
    for (std::uint8_t m = 0; m < 0x80; ++m) {
        IndexTuple t{m};
        if (t.degree() != degree) continue;
        if (pick(rng) == 0) continue;
        Poly c = Poly::constant(ring, coeff(rng));
        if (pick(rng) == 0) c *= Poly::var(ring, var(rng));
        w += KForm::monomial(c, t);
    }
    return w;
}

const RingPtr kRing = PolyRing::create({"a", "b"});

KForm example_connection() {
    // x2 e3 + a x4 e5 + b x6 e7
    KForm b = KForm::monomial(Poly::var(kRing, "x2"), IndexTuple::of({3}));
    b += KForm::monomial(Poly::var(kRing, "a") * Poly::var(kRing, "x4"),
                         IndexTuple::of({5}));
    b += KForm::monomial(Poly::var(kRing, "b") * Poly::var(kRing, "x6"),
                         IndexTuple::of({7}));
    return b;
}

}  // namespace

TEST_CASE("index tuples") {
    IndexTuple t = IndexTuple::of({1, 3, 7});
    CHECK(t.degree() == 3);
    CHECK(t.contains(3));
    CHECK(!t.contains(2));
    CHECK(t.indices() == std::vector<int>{1, 3, 7});
    CHECK(t.complement().indices() == std::vector<int>{2, 4, 5, 6});
    CHECK_THROWS_AS(IndexTuple::of({1, 1}), Error);
    CHECK_THROWS_AS(IndexTuple::of({0}), Error);
    CHECK_THROWS_AS(IndexTuple::of({8}), Error);
}

TEST_CASE("wedge on basis covectors") {
    KForm e1 = KForm::basis({1});
    KForm e2 = KForm::basis({2});
    CHECK(wedge(e1, e2) == KForm::basis({1, 2}));
    CHECK(wedge(e2, e1) == -KForm::basis({1, 2}));
    CHECK(wedge(e1, e1).is_zero());
    CHECK(wedge(KForm::basis({1, 2}), KForm::basis({3, 4})) ==
          KForm::basis({1, 2, 3, 4}));
    CHECK(wedge(KForm::basis({2, 3}), KForm::basis({1})) == KForm::basis({1, 2, 3}));
    // degree overflow clamps to the zero 7-form
    KForm over = wedge(KForm::basis({1, 2, 3, 4}), KForm::basis({1, 2, 3, 4}));
    CHECK(over.is_zero());
    CHECK(over.degree() == 7);
}

TEST_CASE("worked-example connection at a=b=0") {
    KForm b0 = example_connection().substitute({{"a", Rational(0)}, {"b", Rational(0)}});
    CHECK(wedge(b0, ext_d(b0)).is_zero());
}

TEST_CASE("exterior derivative") {
    KForm x2e3 = KForm::monomial(Poly::var(kRing, "x2"), IndexTuple::of({3}));
    CHECK(ext_d(x2e3) == KForm::basis({2, 3}, kRing));

    KForm db = ext_d(example_connection());
    KForm expect = KForm::basis({2, 3}, kRing);
    expect += Poly::var(kRing, "a") * KForm::basis({4, 5}, kRing);
    expect += Poly::var(kRing, "b") * KForm::basis({6, 7}, kRing);
    CHECK(db == expect);
    CHECK(ext_d(db).is_zero());
}

TEST_CASE("d squared vanishes on random forms") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 40; ++t) {
        int deg = int(rng() % 6);
        KForm w = random_form(deg, kRing, rng);
        CHECK(ext_d(ext_d(w)).is_zero());
    }
}

TEST_CASE("hodge star basics") {
    for (int s : {+1, -1}) {
        Orientation orient(s);
        KForm one = KForm::from_poly(Poly::constant(1));
        KForm vol = hodge(one, orient);
        CHECK(vol == Rational(s) * KForm::basis({1, 2, 3, 4, 5, 6, 7}));
        CHECK(hodge(KForm::basis({1}), orient) ==
              Rational(s) * KForm::basis({2, 3, 4, 5, 6, 7}));
    }
    CHECK_THROWS_AS(Orientation(2), Error);
}

TEST_CASE("hodge involution and diagonal pairing on all basis tuples") {
    for (int s : {+1, -1}) {
        Orientation orient(s);
        for (std::uint8_t m = 0; m < 0x80; ++m) {
            IndexTuple t{m};
            KForm et = KForm::monomial(Poly::constant(1), t);
            CHECK(hodge(hodge(et, orient), orient) == et);
            CHECK(wedge(et, hodge(et, orient)) ==
                  Rational(s) * KForm::basis({1, 2, 3, 4, 5, 6, 7}));
        }
    }
}

TEST_CASE("inner product is the orthonormal pairing") {
    Orientation plus(+1), minus(-1);
    CHECK(inner(KForm::basis({1}), KForm::basis({1}), plus) == Poly::constant(1));
    CHECK(inner(KForm::basis({1}), KForm::basis({2}), plus).is_zero());
    CHECK(inner(KForm::basis({1}), KForm::basis({1}), minus) == Poly::constant(1));
    for (std::uint8_t m = 0; m < 0x80; ++m) {
        for (std::uint8_t n = 0; n < 0x80; ++n) {
            IndexTuple t{m}, u{n};
            if (t.degree() != u.degree()) continue;
            KForm et = KForm::monomial(Poly::constant(1), t);
            KForm eu = KForm::monomial(Poly::constant(1), u);
            Poly want = Poly::constant(m == n ? 1 : 0);
            CHECK(inner(et, eu, plus) == want);
        }
    }
    CHECK_THROWS_AS(inner(KForm::basis({1}), KForm::basis({1, 2}), plus),
                    DegreeMismatch);
}

TEST_CASE("graded commutativity") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 30; ++t) {
        int da = int(rng() % 4), db = int(rng() % 4);
        KForm a = random_form(da, kRing, rng);
        KForm b = random_form(db, kRing, rng);
        KForm lhs = wedge(a, b);
        KForm rhs = wedge(b, a);
        if ((da * db) % 2 == 1) rhs = -rhs;
        CHECK(lhs == rhs);
    }
}

TEST_CASE("contraction is an antiderivation") {
    CHECK(contract(1, KForm::basis({1, 2})) == KForm::basis({2}));
    CHECK(contract(3, KForm::basis({1, 2})).is_zero());
    CHECK(contract(2, KForm::basis({1, 2})) == -KForm::basis({1}));

    std::mt19937_64 rng(9);
    for (int t = 0; t < 30; ++t) {
        int da = 1 + int(rng() % 3), db = int(rng() % 3);
        KForm a = random_form(da, kRing, rng);
        KForm b = random_form(db, kRing, rng);
        for (int i = 1; i <= 7; ++i) {
            KForm lhs = contract(i, wedge(a, b));
            KForm rhs = wedge(contract(i, a), b);
            KForm second = wedge(a, contract(i, b));
            if (da % 2 == 1) second = -second;
            rhs += second;
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("hodge is an isometry") {
    std::mt19937_64 rng(13);
    Orientation plus(+1);
    for (int t = 0; t < 30; ++t) {
        int deg = int(rng() % 5);
        KForm a = random_form(deg, kRing, rng);
        KForm b = random_form(deg, kRing, rng);
        CHECK(inner(a, b, plus) == inner(hodge(a, plus), hodge(b, plus), plus));
    }
}

TEST_CASE("form printing") {
    CHECK(KForm::basis({1, 2}).str() == "e[1,2]");
    CHECK((-KForm::basis({3})).str() == "-e[3]");
    CHECK(example_connection().str() == "x2*e[3] + a*x4*e[5] + b*x6*e[7]");
    CHECK(KForm(2).str() == "0");
    Poly mixed = Poly::var(kRing, "a") + Poly::constant(kRing, 1);
    CHECK(KForm::monomial(mixed, IndexTuple::of({1, 2})).str() == "(a + 1)*e[1,2]");
}
