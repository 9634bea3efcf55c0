// Acceptance runner: one PASS/FAIL line per criterion.
//
//   acceptance [--only 1,2,...] [--expect-red 7,10] [--json report.json]
//
// Exit status 0 when every criterion passes, or, with --expect-red, when the
// failing criteria are exactly the listed ones (documented known reds); 1
// otherwise.
#include "app.hpp"

#include "gt/errors.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

using namespace gt;
using namespace gt::app;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

struct Criterion {
    int id;
    std::string title;
    double budget_s;   // runtime budget; 0 = none
    Outcome (*run)();
};

std::string fmt(double x) {
    std::ostringstream o;
    o.precision(10);
    o << x;
    return o.str();
}

SpacePtr make_space(const AlgebraPtr& B, long level, long avoid, int k) {
    return std::make_shared<FormSpace>(right_class_set(eichler_order(B, level), avoid), k);
}

RunConfig desk11() { return RunConfig{}; }   // N- = 11, K = Q(i), p = 3, k = 2

RunConfig desk35() {
    RunConfig c;
    c.n_plus = 5;
    c.n_minus = 7;
    c.eigenvalues = "2:0,3:1";
    return c;
}

RunConfig desk7w4() {
    RunConfig c;
    c.p = 5;
    c.n_minus = 7;
    c.k = 4;
    c.aux = 3;
    c.eigenvalues = "2:-1";
    return c;
}

const Instance& desk() {
    static const Instance I(desk11());
    return I;
}

// --- 1 ---------------------------------------------------------------------
Outcome mass_certification() {
    Outcome o;
    std::ostringstream d;
    for (long nm : {2L, 3L, 5L, 7L, 11L, 13L})
        for (long M : {1L, 3L}) {
            if (nm % M == 0 && M > 1) {
                d << "N-=" << nm << ",M=" << M << ": n/a (level not prime to N-); ";
                continue;
            }
            auto t0 = std::chrono::steady_clock::now();
            auto B = QuatAlgebra::make(auto_field(nm), 1, 1, nm, 1, M);
            auto cs = right_class_set(eichler_order(B, M));
            double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            bool ok = cs.mass() == eichler_mass(nm, M) && s < 10;
            o.ok = o.ok && ok;
            d << "N-=" << nm << ",M=" << M << ": h=" << cs.size() << " mass " << to_string(cs.mass())
              << (ok ? " = " : " != ") << to_string(eichler_mass(nm, M)) << " (" << fmt(s) << "s); ";
        }
    o.detail = d.str();
    return o;
}

// --- 2 ---------------------------------------------------------------------
Rational eigenvalue(const FormSpace& S, const RVec& F, long q) {
    RVec TF = hecke_operator(S, q).matrix * F;
    for (size_t i = 0; i < F.size(); ++i)
        if (F[i] != 0) return TF[i] / F[i];
    throw ArithError("zero form");
}

Outcome hecke_spectrum() {
    Outcome o;
    std::ostringstream d;
    const Instance& I = desk();
    const FormSpace& S = *I.space();
    RVec F = I.form().rational_values();
    std::map<long, long> expect = {{2, -2}, {3, -1}, {5, 1}, {7, -2}, {13, 4}};
    for (auto [q, a] : expect) {
        Rational got = eigenvalue(S, F, q);
        if (got != a) o.ok = false;
        d << "a_" << q << "=" << to_string(got) << " ";
    }
    // all a_n, n <= 1000, from Brandt eigenvalues against the eta product
    std::map<long, long> ap;
    for (long q = 2; q <= 1000; ++q)
        if (is_prime(q)) ap[q] = eigenvalue(S, F, q).get_num().get_si();
    auto brandt = newform_from_primes(11, 2, [&](long q) { return ap.at(q); }, 1000);
    auto eta = eta_product({{1, 2}, {11, 2}}, 1000);
    long bad = 0;
    for (long n = 1; n <= 1000; ++n)
        if (brandt.coefficient(n) != eta[n]) ++bad;
    if (bad) o.ok = false;
    d << "| a_n (n<=1000) Brandt vs eta: " << bad << " mismatches ";
    // weight 4, N- = 5 against the trace formula on S_4(Gamma_0(5)) (dimension 1)
    auto B5 = QuatAlgebra::make(auto_field(5), 3, 1, 5, 3);
    auto S5 = make_space(B5, 1, 3, 4);
    if (S5->dimension() != 1) o.ok = false;
    for (long q : {2L, 3L}) {
        Rational b = restrict_to_forms(*S5, hecke_operator(*S5, q).matrix)[0][0];
        Rational t = eichler_selberg_trace(5, 4, q);
        if (b != t) o.ok = false;
        d << "| k=4 N=5 a_" << q << ": Brandt " << to_string(b) << ", trace formula " << to_string(t) << " ";
    }
    o.detail = d.str();
    return o;
}

// --- 3 ---------------------------------------------------------------------
Outcome operator_algebra() {
    Outcome o;
    std::ostringstream d;
    auto B11 = QuatAlgebra::make(QuadField::make(4), 3, 1, 11, 3);
    auto B7 = QuatAlgebra::make(QuadField::make(4), 5, 1, 7, 5);
    struct Sp {
        std::string name;
        SpacePtr S;
    };
    std::vector<Sp> spaces = {{"B11 k=2 M=1", make_space(B11, 1, 3, 2)},
                              {"B11 k=2 M=3", make_space(B11, 3, 3, 2)},
                              {"B7 k=4 M=1", make_space(B7, 1, 5, 4)},
                              {"B7 k=4 M=5", make_space(B7, 5, 5, 4)}};
    std::mt19937 gen(20240521);
    std::uniform_int_distribution<long> coef(-9, 9);
    for (auto& [name, S] : spaces) {
        std::vector<HeckeOperator> ops;
        for (long q : {2L, 3L, 5L, 7L, 13L}) ops.push_back(hecke_operator(*S, q));
        const QMat& V = S->invariant_basis();
        int pairs = 0, bad = 0;
        for (auto& A : ops)
            for (auto& B : ops) {
                ++pairs;
                if (!(A.matrix * B.matrix * V == B.matrix * A.matrix * V)) ++bad;
            }
        int adj = 0, badadj = 0;
        size_t dim = S->dimension();
        for (auto& A : ops) {
            if ((S->order().level * S->alg().n_minus()) % A.q == 0) continue;
            for (int r = 0; r < 20; ++r) {
                RVec F(S->full_dim(), Rational(0)), G(S->full_dim(), Rational(0));
                for (size_t j = 0; j < dim; ++j) {
                    Rational x = coef(gen), y = coef(gen);
                    for (size_t i = 0; i < F.size(); ++i) F[i] += x * V[i][j], G[i] += y * V[i][j];
                }
                ++adj;
                if (S->petersson(A.matrix * F, G) != S->petersson(F, A.matrix * G)) ++badadj;
            }
        }
        if (bad || badadj) o.ok = false;
        d << name << ": " << pairs - bad << "/" << pairs << " commuting pairs, " << adj - badadj << "/" << adj
          << " self-adjoint random pairs; ";
    }
    o.detail = d.str();
    return o;
}

// --- 4 ---------------------------------------------------------------------
Outcome tower_compatibility() {
    Outcome o;
    std::ostringstream d;
    const Instance& I = desk();
    for (int n = 1; n <= 3; ++n) {
        bool exact = I.theta(n + 1).project() == I.theta(n);
        auto ctx = I.padic(n);
        bool padic = reduce_theta(I.theta(n + 1).project(), ctx) == reduce_theta(I.theta(n), ctx);
        o.ok = o.ok && exact && padic;
        d << "n=" << n << ": exact " << (exact ? "equal" : "DIFFERENT") << ", mod 3^" << ctx.M << " "
          << (padic ? "equal" : "DIFFERENT") << "; ";
    }
    o.detail = d.str();
    return o;
}

// --- 5 ---------------------------------------------------------------------
Outcome congruences() {
    Outcome o;
    std::ostringstream d;
    Instance I(desk7w4());
    for (int n = 1; n <= 2; ++n) {
        std::vector<ThetaElement> ths;
        for (int m = -1; m <= 1; ++m) ths.push_back(I.theta(n, m));
        auto rep = congruence_check(ths, I.padic(n));
        o.ok = o.ok && rep.ok && rep.integral;
        d << "n=" << n << ": Theta^[m] = Theta^[0] mod 5^" << n << " for m=-1,0,1: " << (rep.ok ? "yes" : "NO")
          << (rep.integral ? "" : " (not integral)") << rep.counterexample << "; ";
    }
    o.detail = d.str();
    return o;
}

// --- 6 ---------------------------------------------------------------------
Outcome functional_equation() {
    Outcome o;
    std::ostringstream d;
    Instance I35(desk35());
    for (const Instance* I : std::vector<const Instance*>{&desk(), &I35}) {
        int eps = functional_equation_sign(I->stabilized(), I->config().p);
        d << "N+=" << I->config().n_plus << " (split translations: " << j_translations(I->gross_points()).size()
          << ", eps'=" << eps << "):";
        for (int n = 1; n <= 3; ++n) {
            auto rep = functional_equation_check(I->theta(n), I->gross_points(), eps);
            o.ok = o.ok && rep.ok;
            d << " n=" << n << (rep.ok ? " ok" : " FAIL");
        }
        d << "; ";
    }
    o.detail = d.str();
    return o;
}

// --- 7 ---------------------------------------------------------------------
Outcome mu_witness() {
    Outcome o;
    std::ostringstream d;
    const Instance& I = desk();
    for (long t = 0; t < 2; ++t) {
        d << "chi_" << t << ":";
        for (int n = 1; n <= 4; ++n) {
            auto ctx = I.padic(n);
            auto ml = mu_lambda(padic_branch(I.theta(n), t, ctx), ctx);
            if (ml.mu != 0) o.ok = false;
            d << " mu_" << n << "=" << ml.mu;
        }
        d << "; ";
    }
    if (!o.ok)
        d << "mu_1 = 1 on the trivial branch: Theta_1(chi_0) carries the factor "
             "e_p = 1 - alpha^-2 = 0 mod 3 (p inert, a_3 = -1, alpha = -1 mod 3); mu_n = 0 for n >= 2 on both branches";
    o.detail = d.str();
    return o;
}

// --- 8 ---------------------------------------------------------------------
Outcome galois_equivariance() {
    Outcome o;
    const Instance& I = desk();
    const ThetaElement& th = I.theta(3);
    const RingClassGroup& G = *th.group;
    int checked = 0, bad = 0;
    for (long t = 0; t < G.delta_order(); ++t)
        for (auto& nu : wild_characters(G, t, 2)) {
            long M = nu.order_modulus();
            auto v = evaluate(th, nu);
            for (long a = 1; a < M; ++a) {
                if (std::gcd(a, M) != 1) continue;
                TowerCharacter conj = nu;
                conj.t = (nu.t * a) % nu.d;
                conj.j = (nu.j * a) % 3;
                ++checked;
                if (!(evaluate(th, conj) == v.galois(a))) ++bad;
            }
        }
    o.ok = bad == 0 && checked > 0;
    o.detail = std::to_string(checked - bad) + "/" + std::to_string(checked) +
               " pairs (nu, sigma) on Theta_3 with nu^sigma(Theta) = sigma(nu(Theta))";
    return o;
}

// --- 9 ---------------------------------------------------------------------
Outcome ratio() {
    Outcome o;
    std::ostringstream d;
    // Every conductor-p character factors through G_1, which lies in Delta, so
    // two distinct conductor-p characters need #G_1 >= 3; on Q(i) with p = 3,
    // #G_1 = 2.  The comparison uses p = 13 (split, G_1 cyclic of order 6).
    RunConfig c;
    c.p = 13;
    Instance I(c);
    auto an = analytic_form(11, 2, 200000);
    const ThetaElement& th = I.theta(1);
    const RingClassGroup& G = *th.group;
    auto chars = all_characters(G);
    auto c1 = chars.at(1), c2 = chars.at(2);
    auto L1 = central_value(*an, I.field(), ideal_character(c1, G), 1e-9);
    auto L2 = central_value(*an, I.field(), ideal_character(c2, G), 1e-9);
    auto r = ratio_check(th, c1, c2, L1, L2, 1e-4);
    o.ok = r.ok && c1.conductor_exponent() == 1 && c2.conductor_exponent() == 1;
    d << "K=Q(i), p=13: " << c1.str() << " / " << c2.str() << ": L(chi1)=" << fmt(L1.value.real())
      << ", L(chi2)=" << fmt(L2.value.real()) << "; " << r.detail;
    o.detail = d.str();
    return o;
}

// --- 10 --------------------------------------------------------------------
Outcome absolute() {
    Outcome o;
    std::ostringstream d;
    const Instance& I = desk();
    auto an = analytic_form(11, 2, 200000);
    double norm = petersson_norm_numeric(*an, 11).norm;
    RVec F = I.form().rational_values();
    Rational pairing = I.space()->petersson(F, F);
    std::vector<std::pair<int, TowerCharacter>> cases;
    for (auto& chi : all_characters(*I.theta(1).group)) cases.emplace_back(1, chi);
    for (auto& chi : wild_characters(*I.theta(2).group, 1, 2)) cases.emplace_back(2, chi);
    double u = I.field().u_K();
    bool any = false, uniform = true;
    for (auto& [n, chi] : cases) {
        const ThetaElement& th = I.theta(n);
        auto L = central_value(*an, I.field(), ideal_character(chi, *th.group), 1e-9);
        auto a = absolute_check(th, chi, I.gross_points(), I.unit_root(), *an, 11, pairing, L, norm, 1e-3);
        any = any || a.ok;
        uniform = uniform && a.matches_multiple(1 / (2 * u * u), 1e-6);
        d << chi.str() << " (conductor 3^" << chi.conductor_exponent() << "): best relative error "
          << fmt(a.best_rel_error) << ", |chi(Theta)|^2/|RHS| = " << fmt(std::abs(a.lhs) / std::abs(a.rhs)) << "; ";
        if (n == 1 && chi.t == 0) d << "Omega = " << fmt(a.period) << "; ";
    }
    o.ok = any;
    if (!o.ok && uniform)
        d << "every character gives |chi(Theta)|^2 = |RHS| / (2 u_K^2) = |RHS| / 8 to 1e-6; "
             "the defect is a constant of the normalization chain (see README)";
    o.detail = d.str();
    return o;
}

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> list = {
        {1, "mass certification", 0, mass_certification},
        {2, "Hecke spectrum", 60, hecke_spectrum},
        {3, "operator algebra", 0, operator_algebra},
        {4, "tower compatibility", 0, tower_compatibility},
        {5, "congruences (k=4, p=5)", 0, congruences},
        {6, "functional equation", 0, functional_equation},
        {7, "mu-invariant witness", 0, mu_witness},
        {8, "Galois equivariance", 0, galois_equivariance},
        {9, "interpolation ratio", 300, ratio},
        {10, "absolute interpolation", 0, absolute},
    };
    return list;
}

std::set<int> parse_ids(const std::string& s) {
    std::set<int> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) out.insert(std::stoi(item));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::string only, expect_red, json_file;
    app.add_option("--only", only, "Comma-separated criterion ids");
    app.add_option("--expect-red", expect_red, "Comma-separated ids of documented known failures");
    app.add_option("--json", json_file, "Write a JSON report");
    CLI11_PARSE(app, argc, argv);
    std::set<int> sel = parse_ids(only), red_expected = parse_ids(expect_red), red;
    json report = json::array();
    for (auto& c : criteria()) {
        if (!sel.empty() && !sel.count(c.id)) continue;
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_s > 0 && s > c.budget_s) {
            o.ok = false;
            o.detail += " [runtime budget " + fmt(c.budget_s) + "s exceeded]";
        }
        if (!o.ok) red.insert(c.id);
        std::cout << (o.ok ? "PASS" : "FAIL") << "  " << c.id << ". " << c.title << " (" << fmt(s) << " s): " << o.detail
                  << std::endl;
        report.push_back({{"id", c.id}, {"title", c.title}, {"ok", o.ok}, {"seconds", s}, {"detail", o.detail}});
    }
    if (!json_file.empty()) std::ofstream(json_file) << report.dump(2) << "\n";
    if (!expect_red.empty()) {
        std::set<int> exp;
        for (int id : red_expected)
            if (sel.empty() || sel.count(id)) exp.insert(id);
        bool match = exp == red;
        std::cout << "known reds: " << expect_red << (match ? " (as documented)" : " (MISMATCH with documented reds)")
                  << std::endl;
        return match ? 0 : 1;
    }
    return red.empty() ? 0 : 1;
}
