#include "doctest.h"
#include "gt/exact_arith.hpp"

#include <random>

using namespace gt;

TEST_CASE("quadratic field theta for D_K = 4 is 1 + i") {
    auto K = QuadField::make(4);
    CHECK(K.Dprime == 2);
    CHECK(K.T == 2);
    CHECK(K.N == 2);
    QuadElem th(K, 0, 1);
    auto z = th.embed();
    CHECK(z.real() == doctest::Approx(1.0));
    CHECK(z.imag() == doctest::Approx(1.0));
}

TEST_CASE("quadratic field theta for D_K = 3") {
    auto K = QuadField::make(3);
    CHECK(K.T == 3);
    CHECK(K.N == 3);   // (9 + 3) / 4
    QuadElem th(K, 0, 1);
    CHECK(th.embed().real() == doctest::Approx(1.5));
    CHECK(th.embed().imag() == doctest::Approx(std::sqrt(3.0) / 2));
    CHECK((th * th.conj()).u == 3);
    CHECK((th + th.conj()).u == 3);
}

TEST_CASE("non-fundamental discriminants are rejected") {
    CHECK_THROWS_AS(QuadField::make(5), ArithError);
    CHECK_THROWS_AS(QuadField::make(12), ArithError);
    CHECK_THROWS_AS(QuadField::make(16), ArithError);
    CHECK_NOTHROW(QuadField::make(8));
    CHECK_NOTHROW(QuadField::make(7));
}

TEST_CASE("conjugation is an involution fixing Q") {
    auto K = QuadField::make(7);
    QuadElem x(K, rat(3, 2), rat(-5, 7));
    CHECK(x.conj().conj() == x);
    QuadElem q(K, rat(4, 9), 0);
    CHECK(q.conj() == q);
    CHECK(x.norm() == (x * x.conj()).u);
    CHECK((x * x.conj()).v == 0);
}

TEST_CASE("cyclotomic normal forms") {
    Cyclo one = Cyclo::constant(1);
    auto z3 = Cyclo::monomial(3, 1, Rational(1));
    CHECK((one + z3 + z3 * z3).is_zero());
    auto z4 = Cyclo::monomial(4, 1, Rational(1));
    auto sq = z4 * z4;
    CHECK(sq == Cyclo::constant(-1));
    CHECK(sq.m == 1);
    auto z9 = Cyclo::monomial(9, 1, Rational(1));
    auto cube = z9 * z9 * z9;
    CHECK(cube.m == 3);
    CHECK(cube == z3);
    CHECK(z3 + z3.galois(2) == Cyclo::constant(-1));
}

TEST_CASE("cyclotomic p-adic valuation") {
    auto z3 = Cyclo::monomial(3, 1, Rational(1));
    auto one = Cyclo::constant(1);
    CHECK(*cyclo_p_valuation(one - z3, 3) == rat(1, 2));
    CHECK(*cyclo_p_valuation(Cyclo::constant(3), 3) == 1);
    CHECK(*cyclo_p_valuation(one + z3, 3) == 0);
    CHECK(!cyclo_p_valuation(Cyclo::constant(0), 3).has_value());
    auto z9 = Cyclo::monomial(9, 1, Rational(1));
    CHECK(*cyclo_p_valuation(one - z9, 3) == rat(1, 6));
    // additivity
    auto x = one - z9, y = Cyclo::constant(3) + z9 * z9;
    CHECK(*cyclo_p_valuation(x * y, 3) == *cyclo_p_valuation(x, 3) + *cyclo_p_valuation(y, 3));
}

TEST_CASE("complex embedding conventions") {
    auto z4 = Cyclo::monomial(4, 1, Rational(1));
    CHECK(embed_complex(z4).real() == doctest::Approx(0.0));
    CHECK(embed_complex(z4).imag() == doctest::Approx(1.0));
    auto z3 = Cyclo::monomial(3, 1, Rational(1));
    CHECK(embed_complex(z3 + z3.galois(2)).real() == doctest::Approx(-1.0));
}

namespace {
Cyclo random_cyclo(std::mt19937& rng, long m) {
    std::uniform_int_distribution<int> d(-5, 5);
    std::vector<Rational> v(euler_phi(m));
    for (auto& x : v) x = rat(d(rng), 1 + (d(rng) + 5) % 3);
    return Cyclo(m, v);
}
}  // namespace

TEST_CASE("cyclotomic ring axioms and Galois equivariance (randomised)") {
    std::mt19937 rng(7);
    for (long m : {3L, 4L, 5L, 8L, 9L, 25L, 27L, 6L, 12L}) {
        for (int trial = 0; trial < 10; ++trial) {
            auto a = random_cyclo(rng, m), b = random_cyclo(rng, m), c = random_cyclo(rng, m);
            CHECK(a * (b + c) == a * b + a * c);
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * b == b * a);
            CHECK((a - a).is_zero());
            for (long s = 1; s < m; ++s) {
                if (std::gcd(s, m) != 1) continue;
                CHECK((a * b).galois(s) == a.galois(s) * b.galois(s));
                cplx lhs = embed_complex(a.galois(s));
                cplx rhs = 0;
                for (size_t i = 0; i < a.c.size(); ++i)
                    rhs += a.c[i].get_d() * std::polar(1.0, 2 * M_PI * double(s * (long)i) / double(m));
                CHECK(std::abs(lhs - rhs) < 1e-9);
            }
            CHECK(std::abs(embed_complex(a * b) - embed_complex(a) * embed_complex(b)) < 1e-8);
        }
    }
}

TEST_CASE("quadratic field and Q(sqrt d) ring axioms (randomised)") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> d(-9, 9);
    auto K = QuadField::make(11);
    for (int t = 0; t < 50; ++t) {
        QuadElem a(K, rat(d(rng), 3), d(rng)), b(K, d(rng), rat(d(rng), 2)), c(K, d(rng), d(rng));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a * b) * c == a * (b * c));
        CHECK((a * b).conj() == a.conj() * b.conj());
        CHECK((a * b).norm() == a.norm() * b.norm());
        CHECK(std::abs((a * b).embed() - a.embed() * b.embed()) < 1e-9);
        if (!a.is_zero()) CHECK(a * a.inverse() == QuadElem(K, 1, 0));
        QuadNum x(rat(d(rng), 2), d(rng), -11), y(d(rng), rat(d(rng), 5), -11), z(d(rng), d(rng), -11);
        CHECK(x * (y + z) == x * y + x * z);
        CHECK((x * y) * z == x * (y * z));
        if (!x.is_zero()) CHECK(x * x.inverse() == QuadNum(1));
    }
}

TEST_CASE("p-adic residues") {
    auto x = PadicNum::from_rational(3, 5, rat(1, 2));
    CHECK((x * PadicNum(3, 5, 2)).r == 1);
    CHECK(PadicNum(3, 5, 9).valuation() == 2);
    CHECK(PadicNum(3, 5, 0).valuation() == 5);
    auto s = sqrt_mod_prime_power(Int(-11), 3, 6);
    CHECK(mod(s * s + 11, ipow(Int(3), 6)) == 0);
    CHECK(mod(s, 3) == 1);
    auto t = sqrt_mod_prime_power(Int(17), 2, 10);
    CHECK(mod(t * t - 17, 1024) == 0);
    CHECK(mod(t, 4) == 1);
    CHECK_THROWS_AS(sqrt_mod_prime_power(Int(2), 3, 4), ArithError);
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> d(1, 100000);
    for (int t2 = 0; t2 < 100; ++t2) {
        PadicNum a(5, 6, d(rng)), b(5, 6, d(rng)), c(5, 6, d(rng));
        CHECK(a * (b + c) == a * b + a * c);
        if (!a.is_zero() && !b.is_zero() && a.valuation() + b.valuation() < 6)
            CHECK((a * b).valuation() == a.valuation() + b.valuation());
    }
}

TEST_CASE("number theory helpers") {
    CHECK(kronecker(-4, 3) == -1);
    CHECK(kronecker(-4, 5) == 1);
    CHECK(kronecker(-4, 2) == 0);
    CHECK(QuadField::make(4).split_type(11) == -1);
    CHECK(QuadField::make(3).split_type(7) == 1);
    CHECK(euler_phi(27) == 18);
    CHECK(cyclotomic_polynomial(6) == std::vector<Int>{1, -1, 1});
    CHECK(rational_from_string("-6/4") == rat(-3, 2));
    CHECK(to_string(rat(10, -4)) == "-5/2");
}
