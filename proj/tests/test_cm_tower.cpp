#include "doctest.h"
#include "gt/cm_tower.hpp"

#include <set>

using namespace gt;

namespace {

// #G_n for h_K = 1 and n >= 1: p^{n-1} (p - (-D/p)) / (#O_K^x / 2).
long class_group_order(const QuadField& K, long p, int n) {
    if (n == 0) return 1;
    long pw = 1;
    for (int i = 1; i < n; ++i) pw *= p;
    return pw * (p - K.split_type(p)) / (K.units_count() / 2);
}

// All residues of O_K modulo p^n prime to p.
std::vector<QuadElem> unit_residues_mod(const QuadField& K, long p, int n) {
    long pn = 1;
    for (int i = 0; i < n; ++i) pn *= p;
    std::vector<QuadElem> out;
    for (long a = 0; a < pn; ++a)
        for (long b = 0; b < pn; ++b)
            if ((a * a + K.T * a * b + K.N * b * b) % p != 0) out.push_back(QuadElem(K, a, b));
    return out;
}

// a + b i in Q(i), where theta = 1 + i
QuadElem gauss(long a, long b) { return QuadElem(QuadField::make(4), a - b, b); }

std::shared_ptr<const FormSpace> space(long n_plus, long n_minus, long level) {
    auto B = QuatAlgebra::make(QuadField::make(4), 3, n_plus, n_minus, 3);
    return std::make_shared<FormSpace>(right_class_set(eichler_order(B, level), 3), 2);
}

// L1 = gamma L2 for some gamma in K^x, given both reductions.
bool differ_by_K(const FormSpace& S, const GrossPoints::Reduced& a, const GrossPoints::Reduced& b) {
    if (a.cls != b.cls) return false;
    const QuatAlgebra& B = S.alg();
    Rational nb = qnorm(B, b.alpha);
    QVec binv = qconj(B, b.alpha);
    for (auto& x : binv) x /= nb;
    for (auto& eps : S.classes().units[a.cls]) {
        QVec g = qmul(B, qmul(B, a.alpha, eps), binv);
        if (g[2] == 0 && g[3] == 0) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("class numbers of imaginary quadratic fields") {
    for (long D : {3, 4, 7, 8, 11, 19, 43, 67, 163}) CHECK(class_number(D) == 1);
    CHECK(class_number(15) == 2);
    CHECK(class_number(20) == 2);
    CHECK(class_number(23) == 3);
    CHECK(class_number(56) == 4);
    CHECK(class_number(84) == 4);
}

TEST_CASE("ring class groups: orders and structure") {
    auto Ki = QuadField::make(4);
    CHECK(RingClassGroup(Ki, 3, 0).size() == 1);
    CHECK(RingClassGroup(Ki, 3, 1).size() == 2);
    CHECK(RingClassGroup(Ki, 3, 2).size() == 6);
    CHECK(RingClassGroup(Ki, 3, 2).gamma_order() == 3);
    for (auto [D, p] : std::vector<std::pair<long, long>>{{4, 3}, {4, 5}, {7, 3}, {3, 5}, {8, 3}, {7, 5}})
        for (int n = 0; n <= 3; ++n) {
            auto K = QuadField::make(D);
            RingClassGroup G(K, p, n);
            CHECK(G.size() == static_cast<size_t>(class_group_order(K, p, n)));
            if (n >= 1) CHECK(G.delta_order() == class_group_order(K, p, 1));
        }
    CHECK_THROWS_AS(RingClassGroup(QuadField::make(15), 7, 1), ConfigError);
    CHECK_THROWS_AS(RingClassGroup(QuadField::make(3), 3, 1), ConfigError);
    CHECK_THROWS_AS(RingClassGroup(Ki, 2, 1), ConfigError);
}

TEST_CASE("ring class groups: presentation by residues") {
    for (auto [D, p, n] : std::vector<std::tuple<long, long, int>>{{4, 3, 2}, {4, 5, 2}, {3, 5, 2}, {7, 3, 3}}) {
        auto K = QuadField::make(D);
        RingClassGroup G(K, p, n);
        auto res = unit_residues_mod(K, p, n);
        std::map<RingClassGroup::Elem, long> fibre;
        for (auto& x : res) fibre[G.from_residue(x)]++;
        // surjective with equal fibres of size #(Z/p^n)^x * #O_K^x / 2
        CHECK(fibre.size() == G.size());
        long pn = 1;
        for (int i = 0; i < n; ++i) pn *= p;
        for (auto& [e, c] : fibre) CHECK(c == static_cast<long>(res.size()) / static_cast<long>(G.size()));
        // homomorphism and kernel
        std::vector<QuadElem> sample(res.begin(), res.begin() + std::min<size_t>(40, res.size()));
        for (auto& x : sample)
            for (auto& y : sample) CHECK(G.from_residue(x * y) == G.mul(G.from_residue(x), G.from_residue(y)));
        for (auto& x : sample) {
            CHECK(G.from_residue(x * Rational(pn - 1)) == G.from_residue(x));
            for (long u = -6; u <= 6; ++u)
                for (long v = -2; v <= 2; ++v) {
                    QuadElem z(K, u, v);
                    if (z.norm() == 1) CHECK(G.from_residue(x * z) == G.from_residue(x));
                }
            CHECK(G.from_residue(x + QuadElem(K, 0, pn)) == G.from_residue(x));
        }
        for (auto& e : G.elements()) CHECK(G.from_residue(G.representative(e)) == e);
    }
}

TEST_CASE("ring class groups: projections and ideal classes") {
    auto K = QuadField::make(4);
    RingClassGroup G2(K, 3, 2), G1(K, 3, 1), G0(K, 3, 0);
    size_t kernel = 0;
    for (auto& e : G2.elements()) {
        if (G2.project(e) == G1.identity()) ++kernel;
        CHECK(G1.from_residue(G2.representative(e)) == G2.project(e));
    }
    CHECK(kernel == 3);
    QuadElem pi = gauss(2, 1);
    CHECK(G0.ideal_class(pi) == G0.identity());
    CHECK(G2.ideal_class(QuadElem(K, 7, 0)) == G2.identity());
    CHECK(G2.ideal_class(gauss(0, 1)) == G2.identity());
    QuadElem rho = gauss(3, 2);
    CHECK(G2.ideal_class(pi * rho) == G2.mul(G2.ideal_class(pi), G2.ideal_class(rho)));
    CHECK(G2.mul(G2.ideal_class(pi), G2.ideal_class(pi.conj())) == G2.identity());
    CHECK(G1.project(G1.ideal_class(pi)) == G0.identity());
    CHECK(G2.project(G2.ideal_class(pi)) == G1.ideal_class(pi));
    CHECK_THROWS_AS(G2.ideal_class(QuadElem(K, 3, 0)), ArithError);
}

TEST_CASE("tower characters") {
    auto K = QuadField::make(4);
    RingClassGroup G(K, 3, 3);
    CHECK(G.size() == 18);
    std::vector<TowerCharacter> all;
    for (long t = 0; t < G.delta_order(); ++t)
        for (int s : {0, 2, 3})
            for (auto& c : wild_characters(G, t, s)) all.push_back(c);
    CHECK(all.size() == 18);
    for (auto& chi : all) {
        Cyclo sum = Cyclo::constant(0);
        for (auto& e : G.elements()) sum = sum + chi(e);
        bool trivial = chi.conductor_exponent() == 0;
        CHECK(sum == Cyclo::constant(trivial ? 18 : 0));
        for (auto& a : G.elements())
            for (auto& b : G.elements()) CHECK(chi(G.mul(a, b)) == chi(a) * chi(b));
    }
    // orthogonality between distinct characters
    for (size_t a = 0; a < all.size(); ++a)
        for (size_t b = a + 1; b < all.size(); ++b) {
            Cyclo s = Cyclo::constant(0);
            for (auto& e : G.elements()) s = s + all[a](e) * all[b](G.inv(e));
            CHECK(s.is_zero());
        }
    CHECK(wild_characters(G, 1, 0).front().conductor_exponent() == 1);
    CHECK(wild_characters(G, 0, 2).size() == 2);
    CHECK(wild_characters(G, 0, 3).front().conductor_exponent() == 3);
    CHECK_THROWS_AS(wild_characters(G, 0, 4), ConfigError);
}

TEST_CASE("varsigma matrices") {
    auto S = space(5, 7, 15);
    GrossPoints gp(S, 3, 5);
    const QuatAlgebra& B = S->alg();
    const QuadField& K = B.field();
    // varsigma_q diagonalizes the embedding of K at q | N+
    Int r = gp.theta_q(5, 4);
    CHECK(mod(r * r - K.T * r + K.N, 625) == 0);
    LocalMat s = gp.varsigma_q(5, 4);
    LocalMat d = s.inverse() * B.split_at(5, 4, B.theta()) * s;
    CHECK(d == LocalMat::make(5, 4, r, 0, 0, K.T - r));
    // the generator of frak N+ vanishes under theta -> r
    QuadElem g = gp.n_plus_generator();
    CHECK(g.norm() == 5);
    CHECK(mod(g.u.get_num() + g.v.get_num() * r, 5) == 0);
    // inert p: [[0, 1], [-p^n, 0]]
    CHECK(gp.varsigma_p(2, 4) == LocalMat::make(3, 4, 0, 1, -9, 0));
    CHECK(gp.theta_p(4) == 0);
}

TEST_CASE("Gross points: optimal embeddings") {
    auto S1 = space(1, 11, 1), S3 = space(1, 11, 3);
    GrossPoints g1(S1, 3, 1), g3(S3, 3, 1);
    CHECK(g1.check_optimality(0));
    CHECK(g1.check_optimality(1));
    CHECK(g3.check_optimality(1));
    CHECK(g3.check_optimality(2));
    CHECK_FALSE(g3.check_optimality(0));
    CHECK(g3.embedded_conductor(0) == 3);
    auto S15 = space(5, 7, 15);
    GrossPoints g15(S15, 3, 5);
    CHECK(g15.check_optimality(1));
    CHECK(g15.check_optimality(2));
    CHECK_THROWS_AS(GrossPoints(S15, 3, 1), ConfigError);
}

TEST_CASE("Gross points: invariance and Galois equivariance of the reduction") {
    for (auto [np, nm] : std::vector<std::pair<long, long>>{{1, 11}, {5, 7}}) {
        auto S = space(np, nm, 3 * np);
        GrossPoints gp(S, 3, np);
        const QuatAlgebra& B = S->alg();
        const QuadField& K = B.field();
        for (int n = 1; n <= 2; ++n) {
            RingClassGroup G(K, 3, n);
            long pn = n == 1 ? 3 : 9;
            for (auto& e : G.elements()) {
                QuadElem u = G.representative(e);
                Lattice L = gp.lattice(n, u);
                CHECK(gp.lattice(n, u * Rational(pn + 2)) == L);
                CHECK(gp.lattice(n, u * (QuadElem(K, 1, 0) + gauss(2, 1) * Rational(pn))) == L);
                QuadElem zeta = gauss(0, 1);
                CHECK(gp.lattice(n, zeta * u) == left_multiply(B, qvec(B.from_K(zeta)), L));
                for (auto pi : {gauss(2, 1), gauss(1, 2), gauss(3, 2), gauss(1, 1)}) {
                    auto moved = gp.reduce_lattice(gp.lattice(n, u, pi));
                    auto target = gp.reduce(n, G.representative(G.mul(G.ideal_class(pi), e)));
                    CHECK(differ_by_K(*S, moved, target));
                }
            }
        }
    }
}
