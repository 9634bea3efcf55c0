#include "doctest.h"
#include "gt/forms_hecke.hpp"

#include <random>

using namespace gt;

namespace {

// q-expansion coefficients of prod_i eta(d_i z)^{e_i} (times the q-power
// shift, which is 1 for the products used here), up to q^n.
std::vector<long> eta_product(const std::vector<std::pair<long, int>>& factors, long n) {
    std::vector<long> c(n + 1, 0);
    c[1] = 1;   // leading q
    for (auto [d, e] : factors)
        for (int rep = 0; rep < e; ++rep)
            for (long m = 1; m * d <= n; ++m) {
                long s = m * d;
                // multiply by (1 - q^s)
                for (long i = n; i >= s; --i) c[i] -= c[i - s];
            }
    return c;
}

std::shared_ptr<const FormSpace> b11(long level = 1, int k = 2) {
    auto B = QuatAlgebra::make(QuadField::make(4), 3, 1, 11, 3);
    return std::make_shared<FormSpace>(right_class_set(eichler_order(B, level), 3), k);
}

std::shared_ptr<const FormSpace> weight4(long nm, long level = 1) {
    auto K = nm == 5 ? auto_field(5) : QuadField::make(4);
    long p = nm == 5 ? 3 : 5;
    auto B = QuatAlgebra::make(K, p, 1, nm, p);
    return std::make_shared<FormSpace>(right_class_set(eichler_order(B, level), p), 4);
}

Rational random_rational(std::mt19937& g) {
    std::uniform_int_distribution<long> num(-9, 9), den(1, 5);
    return rat(num(g), den(g));
}

}  // namespace

TEST_CASE("rho_k basic properties") {
    RVec P{rat(1), rat(-2, 3), rat(5)};
    CHECK(rho_act(4, {1, 0, 0, 1}, P) == P);
    CHECK(rho_act(2, {rat(3), rat(1), rat(7), rat(2)}, RVec{rat(5)}) == RVec{rat(5)});
    CHECK(rho_act(4, {rat(-7, 2), 0, 0, rat(-7, 2)}, P) == P);
    CHECK_THROWS_AS(rho_rational(4, 1, 2, 2, 4), ArithError);
    CHECK_THROWS_AS(rho_rational(3, 1, 0, 0, 1), ConfigError);

    std::mt19937 gen(7);
    for (int k : {4, 6, 8}) {
        for (int trial = 0; trial < 20; ++trial) {
            std::array<Rational, 4> g, h;
            do {
                for (auto& x : g) x = random_rational(gen);
            } while (g[0] * g[3] - g[1] * g[2] == 0);
            do {
                for (auto& x : h) x = random_rational(gen);
            } while (h[0] * h[3] - h[1] * h[2] == 0);
            std::array<Rational, 4> gh{g[0] * h[0] + g[1] * h[2], g[0] * h[1] + g[1] * h[3],
                                       g[2] * h[0] + g[3] * h[2], g[2] * h[1] + g[3] * h[3]};
            CHECK(rho_rational(k, gh[0], gh[1], gh[2], gh[3]) ==
                  rho_rational(k, g[0], g[1], g[2], g[3]) * rho_rational(k, h[0], h[1], h[2], h[3]));
        }
    }
}

TEST_CASE("pairing is perfect and equivariant") {
    CHECK(pair_k<Rational>(2, {rat(3)}, {rat(5)}) == 15);
    CHECK(pair_coefficient(4, 1) == 1);
    CHECK(pair_coefficient(4, 0) == rat(-1, 2));
    for (int k : {4, 6}) {
        int n = k - 1, r = weight_r(k);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                RVec x(n, Rational(0)), y(n, Rational(0));
                x[a] = 1;
                y[b] = 1;
                if (a - r != -(b - r)) CHECK(pair_k(k, x, y) == 0);
                else CHECK(pair_k(k, x, y) != 0);
            }
    }
    std::mt19937 gen(11);
    for (int k : {4, 6}) {
        for (int trial = 0; trial < 200; ++trial) {
            std::array<Rational, 4> g;
            do {
                for (auto& x : g) x = random_rational(gen);
            } while (g[0] * g[3] - g[1] * g[2] == 0);
            RVec P(k - 1), Q(k - 1);
            for (auto& x : P) x = random_rational(gen);
            for (auto& x : Q) x = random_rational(gen);
            CHECK(pair_k(k, rho_act(k, g, P), rho_act(k, g, Q)) == pair_k(k, P, Q));
        }
    }
}

TEST_CASE("the rational structure is a representation of B^x") {
    auto B = QuatAlgebra::make(QuadField::make(4), 5, 1, 7, 5);
    std::mt19937 gen(3);
    for (int k : {4, 6}) {
        WeightStructure W(B, k);
        for (int trial = 0; trial < 10; ++trial) {
            QVec x, y;
            for (auto& c : x) c = random_rational(gen);
            for (auto& c : y) c = random_rational(gen);
            if (qnorm(*B, x) == 0 || qnorm(*B, y) == 0) continue;
            CHECK(W.rho(qmul(*B, x, y)) == W.rho(x) * W.rho(y));
            RVec P(k - 1), Q(k - 1);
            for (auto& c : P) c = random_rational(gen);
            for (auto& c : Q) c = random_rational(gen);
            CHECK(W.pair(W.rho(x) * P, W.rho(x) * Q) == W.pair(P, Q));
            CHECK(W.from_K(W.to_K(P)) == P);
        }
    }
}

TEST_CASE("Brandt matrices of B_11 in weight 2") {
    auto S = b11();
    REQUIRE(S->h() == 2);
    auto T2 = hecke_operator(*S, 2);
    CHECK(rational_spectrum(*S, T2) == std::vector<Rational>{-2, 3});
    CHECK(rational_spectrum(*S, hecke_operator(*S, 3)) == std::vector<Rational>{-1, 4});
    // row degree q + 1, so constants have eigenvalue q + 1
    for (long q : {2L, 5L, 7L}) {
        auto T = hecke_operator(*S, q);
        for (auto& row : T.matrix) {
            Rational s = 0;
            for (auto& x : row) s += x;
            CHECK(s == q + 1);
        }
    }
    // cuspidal eigenvalues against the eta product q prod (1-q^n)^2 (1-q^{11n})^2
    auto c = eta_product({{1, 2}, {11, 2}}, 60);
    for (long q = 2; q <= 60; ++q) {
        if (!is_prime(q)) continue;
        auto ev = rational_spectrum(*S, hecke_operator(*S, q));
        CAPTURE(q);
        REQUIRE(ev.size() == 2);
        long eis = q == 11 ? 1 : q + 1;
        bool ok = (ev[0] == c[q] && ev[1] == eis) || (ev[1] == c[q] && ev[0] == eis);
        CHECK(ok);
    }
}

TEST_CASE("coset and theta constructions agree") {
    for (auto S : {b11(), b11(3), weight4(7), weight4(5)}) {
        for (long q : {3L, 5L, 7L, 11L}) {
            if (q == S->classes().neighbor_prime || S->order().level % q == 0) continue;
            CAPTURE(q);
            CHECK(restrict_to_forms(*S, brandt_theta(*S, q).matrix) ==
                  restrict_to_forms(*S, brandt_cosets(*S, q).matrix));
        }
    }
}

TEST_CASE("weight 4 spectra") {
    // the newforms (eta(z) eta(5z))^4 and the level-7 weight-4 newform
    auto c5 = eta_product({{1, 4}, {5, 4}}, 20);
    auto S5 = weight4(5);
    CHECK(S5->dimension() == 1);
    for (long q : {2L, 3L, 7L, 11L, 13L}) CHECK(restrict_to_forms(*S5, hecke_operator(*S5, q).matrix)[0][0] == c5[q]);
    auto S7 = weight4(7);
    CHECK(S7->dimension() == 1);
    CHECK(restrict_to_forms(*S7, hecke_operator(*S7, 2).matrix)[0][0] == -1);
    CHECK(restrict_to_forms(*S7, hecke_operator(*S7, 3).matrix)[0][0] == -2);
    CHECK(restrict_to_forms(*S7, hecke_operator(*S7, 5).matrix)[0][0] == 16);
}

TEST_CASE("Hecke operators commute and are self-adjoint") {
    std::vector<std::shared_ptr<const FormSpace>> spaces{b11(), b11(3), weight4(7), weight4(7, 5)};
    for (auto& S : spaces) {
        std::vector<HeckeOperator> ops;
        for (long q : {2L, 3L, 5L, 7L, 13L}) ops.push_back(hecke_operator(*S, q));
        const QMat& V = S->invariant_basis();
        for (auto& A : ops)
            for (auto& B : ops) {
                CAPTURE(A.label);
                CAPTURE(B.label);
                CHECK(A.matrix * B.matrix * V == B.matrix * A.matrix * V);
            }
        // self-adjointness for T_q, q prime to the level and N^-
        size_t d = S->dimension();
        for (auto& A : ops) {
            if ((S->order().level * S->alg().n_minus()) % A.q == 0) continue;
            for (size_t a = 0; a < d; ++a)
                for (size_t b = 0; b < d; ++b) {
                    RVec F(S->full_dim()), G(S->full_dim());
                    for (size_t i = 0; i < F.size(); ++i) F[i] = V[i][a], G[i] = V[i][b];
                    CHECK(S->petersson(A.matrix * F, G) == S->petersson(F, A.matrix * G));
                    CHECK(S->plain_pairing(A.matrix * F, G) == S->plain_pairing(F, A.matrix * G));
                }
        }
    }
}

TEST_CASE("eigenforms and normalization") {
    auto S = b11();
    auto f = eigenform(S, {{2, -2}});
    auto F = f.rational_values();
    CHECK(primitive_integral(F) == F);
    Int g = 0;
    for (auto& x : F) g = gcd(g, x.get_num());
    CHECK(g == 1);
    CHECK(f.lambda_normalized);
    // T_3 eigenvalue follows
    CHECK(hecke_operator(*S, 3).matrix * F == Rational(-1) * F);
    // Eisenstein: constant function
    auto e = eigenform(S, {{2, 3}});
    CHECK(e.rational_values() == RVec{1, 1});
    CHECK_THROWS_AS(eigenform(S, {{2, 0}}), ConfigError);
    // Eisenstein is orthogonal to the cusp form
    CHECK(S->petersson(e.rational_values(), F) == 0);
    CHECK(S->plain_pairing(e.rational_values(), F) == 0);
    // Ramanujan sanity bound
    for (long q : {2L, 3L, 5L, 7L, 13L}) {
        auto Tq = hecke_operator(*S, q);
        auto img = Tq.matrix * F;
        Rational a = img[0] / F[0];
        CHECK(a * a <= 4 * q);
    }
}

TEST_CASE("one-class pairing") {
    auto B = QuatAlgebra::make(auto_field(2), 1, 1, 2, 1);
    auto S = std::make_shared<FormSpace>(right_class_set(maximal_order(B)), 2);
    REQUIRE(S->h() == 1);
    RVec F{rat(5)};
    CHECK(S->petersson(F, F) == rat(25, 12));
}

TEST_CASE("p-stabilization") {
    SUBCASE("N = 11, p = 3") {
        auto S = b11();
        auto f = eigenform(S, {{2, -2}, {3, -1}});
        auto ur = unit_root(3, 2, -1);
        CHECK(ur.A_mod(1) == 2);
        CHECK(mod(ur.A_mod(6) * ur.A_mod(6) + ur.A_mod(6) + 3, 729) == 0);
        auto S3 = b11(3);
        auto fd = p_stabilize(f, 3, S3);
        REQUIRE(fd.stabilization.has_value());
        auto up = apply_Up(*S3, 3, fd.values);
        for (size_t i = 0; i < up.size(); ++i) CHECK(up[i] == fd.stabilization->alpha * fd.values[i]);
        // the classical U_3 matrix agrees with the coset sum
        auto U3 = hecke_operator(*S3, 3);
        CHECK(mat_apply(U3.matrix, fd.values) == up);
        // p | level: unchanged
        auto g = p_stabilize(fd, 3, S3);
        CHECK(g.values == fd.values);
    }
    SUBCASE("weight 4, N- = 7, p = 5") {
        auto S = weight4(7);
        auto f = eigenform(S, {{2, -1}});
        auto S5 = weight4(7, 5);
        auto fd = p_stabilize(f, 5, S5);
        auto up = apply_Up(*S5, 5, fd.values);
        for (size_t i = 0; i < up.size(); ++i) CHECK(up[i] == fd.stabilization->alpha * fd.values[i]);
        CHECK(mod(fd.stabilization->A_mod(3) - 16, 5) == 0);
    }
    CHECK_THROWS_AS(unit_root(5, 2, 10), ConfigError);
}

TEST_CASE("Atkin-Lehner translation is an involution up to the centre") {
    for (auto S : {b11(), b11(3), weight4(7, 5)}) {
        const QMat& W = S->atkin_lehner();
        const QMat& V = S->invariant_basis();
        CHECK(W * W * V == V);
    }
}
