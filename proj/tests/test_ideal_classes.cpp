#include "doctest.h"
#include "gt/ideal_classes.hpp"

using namespace gt;

namespace {

AlgebraPtr algebra_for(long n_minus, long level = 1) {
    auto K = auto_field(n_minus);
    return QuatAlgebra::make(K, 1, 1, n_minus, 1, level);
}

// Independent unit count: exhaustive search over a coordinate box that is
// large enough for norm-one elements (|coordinate| <= 2 for these algebras).
long brute_force_units(const QuatAlgebra& B, const Lattice& order) {
    long D = order.den.get_si();
    long box = 3 * D;
    long count = 0;
    for (long a = -box; a <= box; ++a)
        for (long b = -box; b <= box; ++b)
            for (long c = -box; c <= box; ++c)
                for (long d = -box; d <= box; ++d) {
                    QVec x{Rational(a, D), Rational(b, D), Rational(c, D), Rational(d, D)};
                    for (auto& y : x) y.canonicalize();
                    if (qnorm(B, x) == 1 && order.contains(x)) ++count;
                }
    return count;
}

}  // namespace

TEST_CASE("maximal orders have the expected discriminant") {
    for (long nm : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 19L}) {
        auto R = maximal_order(algebra_for(nm));
        CHECK(R.reduced_discriminant() == nm);
        CHECK(is_order(*R.B, R.L));
    }
}

TEST_CASE("Eichler orders of level 3 in B_11") {
    auto B = QuatAlgebra::make(QuadField::make(4), 3, 1, 11, 3);
    auto R1 = maximal_order(B);
    auto R3 = eichler_order(R1, 3);
    CHECK(R1.reduced_discriminant() == 11);
    CHECK(R3.reduced_discriminant() == 33);
    CHECK(R1.L.contains(R3.L));
    auto R9 = eichler_order(R1, 9);
    CHECK(R9.reduced_discriminant() == 99);
    CHECK(R3.L.contains(R9.L));
    CHECK_THROWS_AS(eichler_order(R1, 11), ConfigError);
}

TEST_CASE("level 3 is rejected for N- = 3") {
    auto R = maximal_order(algebra_for(3));
    CHECK_THROWS_AS(eichler_order(R, 3), ConfigError);
}

TEST_CASE("class sets of small maximal orders") {
    SUBCASE("B_2") {
        auto R = maximal_order(algebra_for(2));
        auto cs = right_class_set(R);
        CHECK(cs.size() == 1);
        CHECK(cs.gamma_orders[0] == 12);
        CHECK(cs.mass() == Rational(1, 12));
        CHECK(brute_force_units(*R.B, R.L) == 24);
    }
    SUBCASE("B_3") {
        auto R = maximal_order(algebra_for(3));
        auto cs = right_class_set(R);
        CHECK(cs.size() == 1);
        CHECK(cs.gamma_orders[0] == 6);
        CHECK(brute_force_units(*R.B, R.L) == 12);
    }
    SUBCASE("B_11") {
        auto B = QuatAlgebra::make(QuadField::make(4), 3, 1, 11, 3);
        auto R = maximal_order(B);
        auto cs = right_class_set(R, 3);
        CHECK(cs.size() == 2);
        std::vector<long> g = cs.gamma_orders;
        std::sort(g.begin(), g.end());
        CHECK(g == std::vector<long>{2, 3});
        CHECK(cs.mass() == Rational(5, 6));
        CHECK(cs.mass() == 2 * rat(11 - 1, 24));
        for (size_t i = 0; i < cs.size(); ++i) {
            auto O = left_order(*B, cs.reps[i], cs.norms[i]);
            CHECK(brute_force_units(*B, O) == 2 * cs.gamma_orders[i]);
        }
    }
}

TEST_CASE("mass identity for Eichler orders") {
    struct Case {
        long nm, M;
        Rational mass;
    };
    // closed form (1/12) prod (q - 1) * M prod (1 + 1/q)
    std::vector<Case> cases = {{11, 3, Rational(10, 3)}, {2, 3, Rational(1, 3)}, {3, 2, Rational(1, 2)},
                               {5, 2, Rational(1, 1)},   {7, 5, Rational(3, 1)}, {13, 3, Rational(4, 1)},
                               {2, 9, Rational(1, 1)}};
    for (auto& c : cases) {
        CAPTURE(c.nm);
        CAPTURE(c.M);
        auto B = algebra_for(c.nm, c.M);
        auto R = eichler_order(B, c.M);
        CHECK(eichler_mass(c.nm, c.M) == c.mass);
        auto cs = right_class_set(R);
        CHECK(cs.mass() == c.mass);
        // each representative is a right ideal with the recorded norm
        for (size_t i = 0; i < cs.size(); ++i) {
            CHECK(is_right_ideal(R, cs.reps[i]));
            CHECK(ideal_norm(R, cs.reps[i]) == cs.norms[i]);
            CHECK(right_order(*B, cs.reps[i], cs.norms[i]) == R.L);
        }
        // pairwise inequivalence
        for (size_t i = 0; i < cs.size(); ++i)
            for (size_t j = 0; j < cs.size(); ++j)
                if (i != j) CHECK(!cs.connecting_element(cs.reps[i], j).has_value());
    }
    auto B11 = QuatAlgebra::make(QuadField::make(4), 3, 1, 11, 3);
    CHECK(right_class_set(eichler_order(B11, 3), 3).mass() == 4 * right_class_set(maximal_order(B11), 3).mass());
}

TEST_CASE("unit groups are closed under multiplication") {
    auto R = maximal_order(algebra_for(2));
    const auto& B = *R.B;
    auto U = unit_group(B, R.L);
    REQUIRE(U.size() == 24);
    std::set<QVec> S(U.begin(), U.end());
    for (auto& x : U)
        for (auto& y : U) CHECK(S.count(qmul(B, x, y)) == 1);
    // a large-level Eichler order has only the trivial group modulo +-1
    auto B2 = algebra_for(2, 7 * 9);
    auto R2 = eichler_order(B2, 63);
    auto cs = right_class_set(R2);
    long trivial = 0;
    for (long g : cs.gamma_orders) trivial += (g == 1);
    CHECK(trivial > 0);
    CHECK(cs.mass() == eichler_mass(2, 63));
}

TEST_CASE("local images of Eichler orders") {
    auto B = QuatAlgebra::make(QuadField::make(4), 3, 5, 7, 3, 5);
    auto R = eichler_order(B, 15);
    CHECK(R.reduced_discriminant() == 105);
    for (long q : {2L, 3L, 5L, 11L, 13L}) {
        int e = (15 % q == 0) ? 1 : 0;
        // rows (a, b, c / q^e, d) of the images must span Z_q^4
        auto bv = R.L.basis_vectors();
        Int rows[4][4];
        for (int i = 0; i < 4; ++i) {
            auto im = B->split_at(q, 6, B->elem(bv[i]));
            CHECK(mod(im.e[2], ipow(Int(q), e)) == 0);
            rows[i][0] = im.e[0];
            rows[i][1] = im.e[1];
            rows[i][2] = im.e[2] / ipow(Int(q), e);
            rows[i][3] = im.e[3];
        }
        // determinant modulo q
        Int det = 0;
        int perm[4] = {0, 1, 2, 3};
        do {
            int sign = 1;
            for (int a = 0; a < 4; ++a)
                for (int b = a + 1; b < 4; ++b)
                    if (perm[a] > perm[b]) sign = -sign;
            Int t = sign;
            for (int a = 0; a < 4; ++a) t *= rows[a][perm[a]];
            det += t;
        } while (std::next_permutation(perm, perm + 4));
        CAPTURE(q);
        CHECK(mod(det, q) != 0);
    }
}

TEST_CASE("neighbours and identification") {
    auto B = QuatAlgebra::make(QuadField::make(4), 3, 1, 11, 3);
    auto R = maximal_order(B);
    auto cs = right_class_set(R, 3);
    for (long q : {2L, 5L, 7L}) {
        auto subs = sub_ideals(R, R.L, 1, q);
        CHECK(subs.size() == static_cast<size_t>(q + 1));
        for (auto& J : subs) {
            CHECK(ideal_norm(R, J) == q);
            auto [i, g] = cs.identify(J);
            CHECK(left_multiply(*B, g, cs.reps[i]) == J);
        }
    }
    // q | N^-: a unique two-sided ideal of norm 11
    CHECK(sub_ideals(R, R.L, 1, 11).size() == 1);
}
