#include "gt/interpolation.hpp"

#include "gt/errors.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace gt {

namespace {

const double PI = 3.14159265358979323846;

KQ conj_K(const KQ& x) { return {x.u + x.v * Rational(x.T), QuadNum() - x.v, x.T, x.N}; }

cplx embed_cyclo(const Cyclo& c, const Embedding& e) {
    if (e.M % c.m != 0) throw ArithError("embedding modulus does not contain the value field");
    return embed_complex(c.lift(e.M).galois(e.galois));
}

long value_modulus(const CycloNum<KQ>& v, const TowerCharacter& chi) { return std::lcm(v.m, chi.order_modulus()); }

}  // namespace

IdealCharacter ideal_character(const TowerCharacter& chi, const RingClassGroup& G) {
    IdealCharacter c;
    c.p = G.p();
    c.conductor_exponent = chi.conductor_exponent();
    if (c.conductor_exponent > G.level()) throw ConfigError("character conductor exceeds the tower level");
    if (c.conductor_exponent == 0) {
        c.value = [](const QuadElem&) { return cplx(1, 0); };
        return c;
    }
    c.value = [chi, G](const QuadElem& pi) { return embed_complex(chi(G.ideal_class(pi))); };
    return c;
}

std::string Embedding::str() const {
    std::ostringstream o;
    o << "{sqrt_d: " << root_sign << ", conj_K: " << (conj_K ? 1 : 0) << ", zeta_" << M << " -> zeta^" << galois << "}";
    return o.str();
}

std::vector<Embedding> embeddings(long M) {
    std::vector<Embedding> out;
    for (int s : {1, -1})
        for (bool c : {false, true})
            for (long a = 1; a <= std::max(1L, M); ++a)
                if (std::gcd(a, M) == 1) out.push_back({s, c, a, M});
    return out;
}

cplx embed(const CycloNum<KQ>& x, const QuadField& K, const Embedding& e) {
    if (e.M % x.m != 0) throw ArithError("embedding modulus does not contain the value field");
    auto y = x.lift(e.M).galois(e.galois);
    if (e.conj_K)
        for (auto& c : y.c) c = conj_K(c);
    return embed_complex(y, K, e.root_sign);
}

RatioReport ratio_check(const ThetaElement& th, const TowerCharacter& chi1, const TowerCharacter& chi2,
                        const LValue& L1, const LValue& L2, double tol) {
    const QuadField& K = th.group->field();
    auto v1 = evaluate(th, chi1), v2 = evaluate(th, chi2);
    long M = std::lcm(value_modulus(v1, chi1), value_modulus(v2, chi2));
    RatioReport r;
    r.analytic = L1.value.real() / L2.value.real();
    for (auto& e : embeddings(M)) {
        double a1 = std::norm(embed(v1, K, e)), a2 = std::norm(embed(v2, K, e));
        double q = a1 / a2;
        r.algebraic.push_back(q);
        double err = std::abs(q / r.analytic - 1);
        if (err < r.best_rel_error) {
            r.best_rel_error = err;
            r.best = e;
        }
    }
    r.ok = r.best_rel_error < tol;
    std::ostringstream o;
    o.precision(10);
    o << "L-ratio " << r.analytic << ", best algebraic ratio relative error " << r.best_rel_error << " at " << r.best.str();
    r.detail = o.str();
    return r;
}

InterpolationData interpolation_data(const ThetaElement& th, const TowerCharacter& chi, const GrossPoints& gp,
                                     const UnitRoot& ur, const NewformData& f, long n_minus, const Embedding& e) {
    if (th.m != 0) throw ConfigError("the analytic comparison is implemented for weight index m = 0");
    const RingClassGroup& G = *th.group;
    const QuadField& K = G.field();
    InterpolationData d;
    d.k = th.k;
    d.m = th.m;
    d.s = chi.conductor_exponent();
    d.p = G.p();
    d.D_K = K.D;
    d.u_K = K.u_K();
    d.ord_p_N = f.N % d.p == 0 ? 1 : 0;
    d.e_p = e_p_multiplier(ur.alpha, K.split_type(d.p), d.s > 0).embed(e.root_sign);
    d.A_p = ur.A.embed(e.root_sign);
    d.eps_p = d.ord_p_N ? f.eps.at(d.p) : 1;
    TowerCharacter tame = chi;
    tame.s = 0;
    tame.j = 0;
    for (auto& [q, ex] : factorize(std::gcd(K.D, n_minus))) {
        QuadElem pi = prime_generator(K, q);
        d.ram_factors.push_back(static_cast<double>(f.eps.at(q)) * embed_cyclo(tame(G.ideal_class(pi)), e));
    }
    d.chi_nplus = embed_cyclo(chi(G.ideal_class(gp.n_plus_generator())), e);
    return d;
}

AbsoluteReport absolute_check(const ThetaElement& th, const TowerCharacter& chi, const GrossPoints& gp,
                              const UnitRoot& ur, const NewformData& f, long n_minus, const Rational& pairing,
                              const LValue& L, double petersson, double tol) {
    const QuadField& K = th.group->field();
    AbsoluteReport r;
    r.petersson = petersson;
    r.pairing = pairing;
    r.period = std::pow(4.0, th.k - 1) * std::pow(PI, th.k) * petersson / pairing.get_d();
    auto v = evaluate(th, chi);
    long M = value_modulus(v, chi);
    for (auto& e : embeddings(M)) {
        cplx lhs = embed(v, K, e);
        cplx rhs = interpolation_rhs(interpolation_data(th, chi, gp, ur, f, n_minus, e), L.value.real(), r.period);
        double err = std::abs(std::norm(lhs) - std::abs(rhs)) / std::abs(rhs);
        r.ratios.push_back(std::norm(lhs) / std::abs(rhs));
        if (err < r.best_rel_error) {
            r.best_rel_error = err;
            r.best = e;
            r.lhs = lhs * lhs;
            r.rhs = rhs;
        }
    }
    r.ok = r.best_rel_error < tol;
    std::ostringstream o;
    o.precision(10);
    o << "chi(Theta)^2 = " << r.lhs << ", RHS = " << r.rhs << ", |.| relative error " << r.best_rel_error
      << ", ratio |chi(Theta)|^2/|RHS| = " << std::abs(r.lhs) / std::abs(r.rhs) << ", Omega = " << r.period;
    r.detail = o.str();
    return r;
}

bool AbsoluteReport::matches_multiple(double c, double tol) const {
    for (double q : ratios)
        if (std::abs(q / c - 1) < tol) return true;
    return false;
}

}  // namespace gt
