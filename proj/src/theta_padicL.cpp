#include "gt/theta_padicL.hpp"

#include "json.hpp"

#include <cmath>
#include <sstream>

namespace gt {

// ---------------------------------------------------------------------------
// K (x) Q(sqrt d)

namespace {

long pick(long a, long b) { return a != 0 || b != 0 ? a : b; }

KQ make_kq(QuadNum u, QuadNum v, const KQ& x, const KQ& y) {
    long T = x.T != 0 || x.N != 0 ? x.T : y.T;
    long N = x.T != 0 || x.N != 0 ? x.N : y.N;
    return {std::move(u), std::move(v), T, N};
}

QuadNum qpow(const QuadNum& x, long e) {
    QuadNum base = e < 0 ? x.inverse() : x;
    QuadNum r(1);
    for (long i = 0; i < std::labs(e); ++i) r = r * base;
    return r;
}

QuadElem kpow(const QuadElem& x, long e) {
    QuadElem base = e < 0 ? x.inverse() : x;
    QuadElem r(Rational(1), Rational(0), x.T, x.N);
    for (long i = 0; i < std::labs(e); ++i) r = r * base;
    return r;
}

CycloNum<KQ> lift_cyclo(const Cyclo& c, const QuadField& K) {
    std::vector<KQ> v;
    for (auto& x : c.c) v.push_back(KQ(QuadNum(x), QuadNum(0), K.T, K.N));
    return CycloNum<KQ>(c.m, std::move(v));
}

}  // namespace

KQ operator+(const KQ& x, const KQ& y) { return make_kq(x.u + y.u, x.v + y.v, x, y); }
KQ operator-(const KQ& x, const KQ& y) { return make_kq(x.u - y.u, x.v - y.v, x, y); }
KQ operator-(const KQ& x) { return {-x.u, -x.v, x.T, x.N}; }
KQ operator*(const KQ& x, const KQ& y) {
    long T = pick(x.T, y.T), N = x.T != 0 || x.N != 0 ? x.N : y.N;
    // theta^2 = T theta - N
    QuadNum vv = x.v * y.v;
    return {x.u * y.u - vv * N, x.u * y.v + x.v * y.u + vv * T, T, N};
}
KQ operator*(const KQ& x, long c) { return {x.u * c, x.v * c, x.T, x.N}; }
KQ operator*(const KQ& x, const QuadNum& c) { return {x.u * c, x.v * c, x.T, x.N}; }
bool operator==(const KQ& x, const KQ& y) { return x.u == y.u && x.v == y.v; }

std::string KQ::str() const {
    if (v.is_zero()) return u.str();
    return "(" + u.str() + ") + (" + v.str() + ")*theta";
}

cplx embed_complex(const KQ& x, const QuadField& K, int root_sign) {
    return x.u.embed(root_sign) + x.v.embed(root_sign) * QuadElem(K, 0, 1).embed();
}

cplx embed_complex(const CycloNum<KQ>& x, const QuadField& K, int root_sign) {
    cplx z(0, 0);
    const double tau = 2 * std::acos(-1.0) / static_cast<double>(x.m);
    for (size_t i = 0; i < x.c.size(); ++i)
        z += embed_complex(x.c[i], K, root_sign) * std::polar(1.0, tau * static_cast<double>(i));
    return z;
}

std::vector<KQ> to_K_coefficients(const WeightStructure& W, const std::vector<QuadNum>& x, const QuadField& K) {
    RVec a, b;
    long d = 0;
    for (auto& q : x) {
        a.push_back(q.a);
        b.push_back(q.b);
        if (q.d != 0) d = q.d;
    }
    auto A = W.to_K(a), Bq = W.to_K(b);
    std::vector<KQ> out;
    for (size_t i = 0; i < A.size(); ++i)
        out.push_back({QuadNum(A[i].u, Bq[i].u, d), QuadNum(A[i].v, Bq[i].v, d), K.T, K.N});
    return out;
}

// ---------------------------------------------------------------------------
// Theta elements

namespace {

// <v_m, F> times D_K^r: the weight-m pairing without the sqrt(beta)^{-m} factor.
KQ pairing_value(const FormSpace& S, const std::vector<QuadNum>& block, int m) {
    int k = S.weight(), r = weight_r(k);
    const QuadField& K = S.alg().field();
    auto c = to_K_coefficients(S.weights(), block, K);
    Rational scale = pair_coefficient(k, m) * Rational(ipow(Int(K.D), static_cast<unsigned long>(r)));
    return c[static_cast<size_t>(r - m)] * QuadNum(scale);
}

// (ubar / u)^m
KQ twist(const QuadElem& u, int m) {
    QuadElem t = kpow(u.conj(), m) * kpow(u, -m);
    return KQ::from_K(t);
}

QuadNum up_eigenvalue(const AutoForm& f, long p) {
    if (f.stabilization) return f.stabilization->alpha;
    auto img = apply_Up(*f.space, p, f.values);
    for (size_t i = 0; i < img.size(); ++i)
        if (!f.values[i].is_zero()) return img[i] / f.values[i];
    throw ArithError("zero form");
}

void check_space(const AutoForm& f, const GrossPoints& gp) {
    if (f.space.get() != &gp.space() && !(f.space->order().level == gp.space().order().level &&
                                           f.space->h() == gp.space().h() &&
                                           f.space->alg().beta() == gp.space().alg().beta()))
        throw ConfigError("the form and the Gross points live on different class sets");
}

}  // namespace

KQ ThetaElement::augmentation() const {
    KQ s(0);
    for (auto& c : coeffs) s = s + c;
    return s;
}

ThetaElement ThetaElement::project() const {
    if (n < 1) throw ConfigError("projection needs n >= 1");
    ThetaElement out = *this;
    auto low = std::make_shared<RingClassGroup>(group->field(), group->p(), n - 1);
    out.group = low;
    out.n = n - 1;
    out.coeffs.assign(low->size(), KQ(QuadNum(0), QuadNum(0), group->field().T, group->field().N));
    for (auto& e : group->elements()) {
        size_t j = low->index(group->project(e));
        out.coeffs[j] = out.coeffs[j] + coeff(e);
    }
    return out;
}

ThetaElement ThetaElement::star() const {
    ThetaElement out = *this;
    for (auto& e : group->elements()) out.coeffs[group->index(group->inv(e))] = coeff(e);
    return out;
}

ThetaElement ThetaElement::shift(const RingClassGroup::Elem& tau) const {
    ThetaElement out = *this;
    for (auto& e : group->elements()) out.coeffs[group->index(group->mul(e, tau))] = coeff(e);
    return out;
}

ThetaElement ThetaElement::scaled(const KQ& c) const {
    ThetaElement out = *this;
    for (auto& x : out.coeffs) x = x * c;
    return out;
}

std::string ThetaElement::to_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["m"] = m;
    j["k"] = k;
    j["p"] = group->p();
    j["alpha"] = alpha.str();
    j["sqrt_beta_power"] = -m;
    j["group"] = nlohmann::json::parse(group->to_json());
    nlohmann::json cs = nlohmann::json::array();
    for (auto& e : group->elements()) cs.push_back({{"delta", e.i}, {"gamma", e.e}, {"value", coeff(e).str()}});
    j["coefficients"] = cs;
    return j.dump();
}

ThetaElement theta_element(const AutoForm& fdag, const GrossPoints& gp, int n, int m) {
    check_space(fdag, gp);
    const FormSpace& S = gp.space();
    int k = S.weight();
    if (std::abs(m) > weight_r(k)) throw ConfigError("weight index m out of range");
    if (n < 0) throw ConfigError("negative level");
    if (S.order().level % gp.p() != 0) throw ConfigError("theta elements use the p-stabilized form of level p N+");
    const QuadField& K = S.alg().field();
    ThetaElement th;
    th.group = std::make_shared<RingClassGroup>(K, gp.p(), n);
    th.n = n;
    th.m = m;
    th.k = k;
    th.beta = S.alg().beta();
    th.alpha = up_eigenvalue(fdag, gp.p());
    QuadNum an = qpow(th.alpha, -n);
    for (auto& e : th.group->elements()) {
        QuadElem u = th.group->representative(e);
        KQ v = pairing_value(S, gp.value(n, u, fdag.values), m) * twist(u, m);
        th.coeffs.push_back(v * an);
    }
    return th;
}

ThetaElement theta_element_regularized(const AutoForm& f, const GrossPoints& gp_new, const QuadNum& alpha, int n,
                                       int m) {
    check_space(f, gp_new);
    const FormSpace& S = gp_new.space();
    if (S.order().level % gp_new.p() == 0) throw ConfigError("regularization needs p not dividing the level");
    if (n < 1) throw ConfigError("regularized points need n >= 1");
    int k = S.weight();
    const QuadField& K = S.alg().field();
    ThetaElement th;
    th.group = std::make_shared<RingClassGroup>(K, gp_new.p(), n);
    th.n = n;
    th.m = m;
    th.k = k;
    th.beta = S.alg().beta();
    th.alpha = alpha;
    QuadNum a0 = qpow(alpha, -n), a1 = qpow(alpha, -n - 1);
    for (auto& e : th.group->elements()) {
        QuadElem u = th.group->representative(e);
        KQ tw = twist(u, m);
        KQ v0 = pairing_value(S, gp_new.value(n, u, f.values), m) * tw;
        KQ v1 = pairing_value(S, gp_new.value(n - 1, u, f.values), m) * tw;
        th.coeffs.push_back(v0 * a0 - v1 * a1);
    }
    return th;
}

// ---------------------------------------------------------------------------
// p-adic reduction

PadicContext padic_context(const GrossPoints& gp, const UnitRoot& ur, int M) {
    PadicContext c;
    c.p = gp.p();
    c.M = M;
    const QuadField& K = gp.space().alg().field();
    c.split = K.split_type(c.p) == 1;
    // guard digits absorb the denominators cleared in reduce(); exact
    // coefficients at level n carry up to about p^{n(k-1)+1}
    c.guard = M + 16;
    int digits = M + c.guard;
    c.theta_p = c.split ? gp.theta_p(digits) : Int(0);
    c.d = ur.d;
    c.sqrt_d = ur.sqrt_d(digits);
    c.sqrt_beta = gp.space().alg().sqrt_beta(c.p, digits);
    return c;
}

std::pair<Int, Int> PadicContext::reduce(const KQ& x, int sqrt_beta_power) const {
    const Rational* parts[4] = {&x.u.a, &x.u.b, &x.v.a, &x.v.b};
    int E = 0;
    for (auto* q : parts)
        if (*q != 0) E = std::max(E, -gt::valuation(*q, p));
    if (E > guard) throw PrecisionError("p-adic denominator exceeds the working precision");
    int W = M + E;
    Int mw = ipow(Int(p), static_cast<unsigned long>(W));
    Rational S(ipow(Int(p), static_cast<unsigned long>(E)));
    auto res = [&](const Rational& q) { return q == 0 ? Int(0) : residue(q * S, p, W); };
    Int sd = mod(sqrt_d, mw);
    Int a = mod(res(x.u.a) + res(x.u.b) * sd, mw);
    Int b = mod(res(x.v.a) + res(x.v.b) * sd, mw);
    if (split) {
        a = mod(a + b * mod(theta_p, mw), mw);
        b = 0;
    }
    Int pe = ipow(Int(p), static_cast<unsigned long>(E));
    if (mod(a, pe) != 0 || mod(b, pe) != 0) throw PrecisionError("element is not p-integral");
    Int pm = ipow(Int(p), static_cast<unsigned long>(M));
    a = mod(Int(a / pe), pm);
    b = mod(Int(b / pe), pm);
    if (sqrt_beta_power != 0) {
        Int sb = mod(sqrt_beta, pm);
        if (sqrt_beta_power < 0) sb = inv_mod(sb, pm);
        Int f = powmod(sb, Int(std::abs(sqrt_beta_power)), pm);
        a = mod(a * f, pm);
        b = mod(b * f, pm);
    }
    return {a, b};
}

int PadicContext::valuation(const std::pair<Int, Int>& r) const {
    int v = M;
    if (r.first != 0) v = std::min(v, gt::valuation(r.first, p));
    if (r.second != 0) v = std::min(v, gt::valuation(r.second, p));
    return v;
}

std::vector<std::pair<Int, Int>> reduce_theta(const ThetaElement& th, const PadicContext& ctx) {
    std::vector<std::pair<Int, Int>> out;
    for (auto& c : th.coeffs) out.push_back(ctx.reduce(c, -th.m));
    return out;
}

CongruenceReport congruence_check(const std::vector<ThetaElement>& by_weight, const PadicContext& ctx) {
    CongruenceReport rep;
    const ThetaElement* base = nullptr;
    for (auto& th : by_weight)
        if (th.m == 0) base = &th;
    if (!base) throw ConfigError("congruence check needs the weight-0 element");
    int n = base->n;
    if (ctx.M < n) throw PrecisionError("precision below the congruence modulus");
    Int pn = ipow(Int(ctx.p), static_cast<unsigned long>(n));
    std::vector<std::pair<Int, Int>> r0;
    try {
        r0 = reduce_theta(*base, ctx);
    } catch (const PrecisionError&) {
        rep.ok = rep.integral = false;
        rep.counterexample = "m = 0: non-integral coefficient";
        return rep;
    }
    for (auto& th : by_weight) {
        if (th.n != n) throw ConfigError("congruence check needs a common level");
        std::vector<std::pair<Int, Int>> r;
        try {
            r = reduce_theta(th, ctx);
        } catch (const PrecisionError&) {
            rep.ok = rep.integral = false;
            rep.counterexample = "m = " + std::to_string(th.m) + ": non-integral coefficient";
            return rep;
        }
        auto els = th.group->elements();
        for (size_t i = 0; i < r.size(); ++i)
            if (mod(r[i].first - r0[i].first, pn) != 0 || mod(r[i].second - r0[i].second, pn) != 0) {
                rep.ok = false;
                std::ostringstream s;
                s << "m = " << th.m << " at (" << els[i].i << ", " << els[i].e << ")";
                rep.counterexample = s.str();
                return rep;
            }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Branches and characters

BranchTheta branch_project(const ThetaElement& th, long t) {
    const RingClassGroup& G = *th.group;
    BranchTheta b;
    b.n = th.n;
    b.p = G.p();
    b.d = G.delta_order();
    b.t = ((t % b.d) + b.d) % b.d;
    const QuadField& K = G.field();
    KQ zero(QuadNum(0), QuadNum(0), K.T, K.N);
    b.coeffs.assign(static_cast<size_t>(G.gamma_order()), CycloNum<KQ>::constant(zero));
    for (auto& e : G.elements())
        b.coeffs[static_cast<size_t>(e.e)] = b.coeffs[static_cast<size_t>(e.e)] +
                                             CycloNum<KQ>::monomial(b.d, b.t * e.i, th.coeff(e));
    return b;
}

CycloNum<KQ> evaluate(const BranchTheta& b, const TowerCharacter& nu) {
    if (nu.s > std::max(b.n, 1)) throw ConfigError("character conductor exceeds the level");
    RingClassGroup::Elem g{};
    CycloNum<KQ> sum;
    bool first = true;
    for (size_t e = 0; e < b.coeffs.size(); ++e) {
        g.e = static_cast<long>(e);
        Cyclo v = nu(g);
        const KQ& any = b.coeffs[e].c.empty() ? KQ(0) : b.coeffs[e].c[0];
        std::vector<KQ> w;
        for (auto& x : v.c) w.push_back(KQ(QuadNum(x), QuadNum(0), any.T, any.N));
        CycloNum<KQ> term = b.coeffs[e] * CycloNum<KQ>(v.m, std::move(w));
        sum = first ? term : sum + term;
        first = false;
    }
    return sum;
}

CycloNum<KQ> evaluate(const ThetaElement& th, const TowerCharacter& chi) {
    if (chi.s > std::max(th.n, 1) || (th.n == 0 && chi.conductor_exponent() > 0))
        throw ConfigError("character conductor exceeds the level");
    const QuadField& K = th.group->field();
    CycloNum<KQ> sum = CycloNum<KQ>::constant(KQ(QuadNum(0), QuadNum(0), K.T, K.N));
    for (auto& e : th.group->elements()) sum = sum + lift_cyclo(chi(e), K) * th.coeff(e);
    return sum;
}

std::vector<std::pair<Int, Int>> padic_branch(const ThetaElement& th, long t, const PadicContext& ctx) {
    const RingClassGroup& G = *th.group;
    long d = G.delta_order();
    t = ((t % d) + d) % d;
    long g = std::gcd(d, t == 0 ? d : t);
    long o = d / g;   // order of chi_t
    Int pm = ipow(Int(ctx.p), static_cast<unsigned long>(ctx.M));
    Int zeta = 1;
    if (o > 1) {
        if ((ctx.p - 1) % o != 0) throw ConfigError("chi_t does not take values in Z_p");
        long r = 2;
        for (;; ++r) {
            bool prim = true;
            for (long q : prime_factors(ctx.p - 1))
                if (powmod(Int(r), Int((ctx.p - 1) / q), Int(ctx.p)) == 1) prim = false;
            if (prim) break;
        }
        Int teich = powmod(Int(r), ipow(Int(ctx.p), static_cast<unsigned long>(ctx.M)), pm);
        zeta = powmod(teich, Int((ctx.p - 1) / o), pm);
    }
    long step = t / g;   // chi_t(delta_gen) = zeta_o^step
    auto red = reduce_theta(th, ctx);
    std::vector<std::pair<Int, Int>> out(static_cast<size_t>(G.gamma_order()), {Int(0), Int(0)});
    for (auto& e : G.elements()) {
        Int c = o > 1 ? powmod(zeta, Int(step * e.i % o), pm) : Int(1);
        auto& r = red[G.index(e)];
        auto& slot = out[static_cast<size_t>(e.e)];
        slot.first = mod(slot.first + c * r.first, pm);
        slot.second = mod(slot.second + c * r.second, pm);
    }
    return out;
}

MuLambda mu_lambda(const std::vector<std::pair<Int, Int>>& branch, const PadicContext& ctx) {
    MuLambda res;
    Int pm = ipow(Int(ctx.p), static_cast<unsigned long>(ctx.M));
    size_t g = branch.size();
    // coefficients of sum_e b_e (1 + T)^e
    std::vector<std::pair<Int, Int>> poly(g, {Int(0), Int(0)});
    for (size_t e = 0; e < g; ++e) {
        Int binom = 1;
        for (size_t j = 0; j <= e; ++j) {
            poly[j].first = mod(poly[j].first + binom * branch[e].first, pm);
            poly[j].second = mod(poly[j].second + binom * branch[e].second, pm);
            binom = binom * Int(static_cast<long>(e - j)) / Int(static_cast<long>(j + 1));
        }
    }
    res.mu = ctx.M;
    for (auto& c : poly) res.mu = std::min(res.mu, ctx.valuation(c));
    if (res.mu == ctx.M) {
        res.zero = true;
        return res;
    }
    for (size_t j = 0; j < g; ++j)
        if (ctx.valuation(poly[j]) == res.mu) {
            res.lambda = static_cast<int>(j);
            break;
        }
    return res;
}

// ---------------------------------------------------------------------------

QuadNum e_p_multiplier(const QuadNum& alpha, int split_type, bool chi_ramified, const QuadNum& chi_p,
                       const QuadNum& chi_pbar) {
    if (chi_ramified) return QuadNum(1);
    QuadNum ai = alpha.inverse();
    if (split_type == 1) return (QuadNum(1) - ai * chi_p) * (QuadNum(1) - ai * chi_pbar);
    if (split_type == -1) return QuadNum(1) - ai * ai;
    return QuadNum(1) - ai * chi_p;
}

int local_sign(const AutoForm& f, long q) {
    const FormSpace& S = *f.space;
    int k = S.weight();
    auto ratio = [&](const std::vector<QuadNum>& img) {
        for (size_t i = 0; i < img.size(); ++i)
            if (!f.values[i].is_zero()) return img[i] / f.values[i];
        throw ArithError("zero form");
    };
    if (S.alg().n_minus() % q == 0) {
        // right translation by a uniformizer of B_q: eigenvalue chi(q) = -eps(pi_q)
        std::vector<QuadNum> img;
        const ClassSet& cs = S.classes();
        for (size_t i = 0; i < S.h(); ++i) {
            auto v = S.value_at(f.values, cs.reps[i], q, {});
            img.insert(img.end(), v.begin(), v.end());
        }
        QuadNum w = ratio(img);
        if (!(w == QuadNum(1)) && !(w == QuadNum(-1))) throw VerificationError("W_q eigenvalue is not +-1");
        return w == QuadNum(1) ? -1 : 1;
    }
    if (S.order().level % q != 0) return 1;
    if (S.order().level % (q * q) == 0) throw ConfigError("local sign needs q || N");
    QuadNum c = ratio(mat_apply(hecke_operator(S, q).matrix, f.values));
    QuadNum e = -c * QuadNum(Rational(1) / Rational(ipow(Int(q), static_cast<unsigned long>(weight_r(k)))));
    if (e == QuadNum(1)) return 1;
    if (e == QuadNum(-1)) return -1;
    throw VerificationError("U_q eigenvalue is not +-q^{(k-2)/2}");
}

int functional_equation_sign(const AutoForm& f, long p) {
    const FormSpace& S = *f.space;
    long nm = S.alg().n_minus(), D = S.alg().field().D;
    int r0 = 0;
    for (long q : prime_factors(nm))
        if (D % q == 0) ++r0;
    int sign = ((r0 + S.weight() / 2) % 2 == 0) ? 1 : -1;
    long N = nm * S.order().level;
    for (long q : prime_factors(N))
        if (q != p && D % q != 0) sign *= local_sign(f, q);
    return sign;
}

namespace {

// x in R (x) Z_q, for the order lattice L in upper-triangular Hermite form.
bool in_local_order(const Lattice& L, const QVec& x, long q) {
    std::array<Rational, 4> c;
    for (int i = 0; i < 4; ++i) {
        Rational s = x[i] * Rational(L.den);
        for (int j = 0; j < i; ++j) s -= c[j] * Rational(L.rows[j][i]);
        c[i] = s / Rational(L.rows[i][i]);
    }
    for (auto& v : c)
        if (v != 0 && valuation(v, q) < 0) return false;
    return true;
}

}  // namespace

std::vector<QuadElem> j_translations(const GrossPoints& gp) {
    const FormSpace& S = gp.space();
    const QuatAlgebra& B = S.alg();
    const QuadField& K = B.field();
    long beta = B.beta();
    std::vector<QuadElem> out;
    for (auto [q, e] : factorize(std::labs(beta))) {
        if (e % 2 == 0 || B.n_minus() % q == 0) continue;
        if (K.split_type(q) != 1) throw VerificationError("beta has odd valuation at a non-split prime");
        std::optional<QuadElem> pi;
        for (long v = 0; v <= q && !pi; ++v)
            for (long u = -q - K.T * q; u <= q + K.T * q && !pi; ++u) {
                QuadElem x(K, u, v);
                if (x.norm() == q) pi = x;
            }
        if (!pi) throw VerificationError("no element of norm q");
        std::optional<QuadElem> found;
        for (const QuadElem& t : {*pi, pi->conj()}) {
            QuatElem x = B.from_K(t.inverse()) * B.J() * rat(q, beta);
            if (in_local_order(S.order().L, qvec(x), q)) found = t;
        }
        if (!found) throw VerificationError("J is not in K_q^x R_q^x");
        out.push_back(*found);
    }
    return out;
}

FunctionalEquationReport functional_equation_check(const ThetaElement& th, const GrossPoints& gp, int eps) {
    FunctionalEquationReport rep;
    rep.eps = eps;
    const RingClassGroup& G = *th.group;
    rep.sigma_nplus = G.ideal_class(gp.n_plus_generator());
    rep.sigma_beta = G.identity();
    for (auto& t : j_translations(gp)) rep.sigma_beta = G.mul(rep.sigma_beta, G.ideal_class(t));
    ThetaElement lhs = th.star();
    auto rhs = [&](const RingClassGroup::Elem& s, long e) { return th.shift(s).scaled(KQ(e)); };
    RingClassGroup::Elem corr = G.inv(rep.sigma_beta);
    rep.ok = lhs.coeffs == rhs(G.mul(G.inv(rep.sigma_nplus), corr), eps).coeffs;
    if (!rep.ok) {
        // diagnose which normalization would hold instead
        if (lhs.coeffs == rhs(G.mul(rep.sigma_nplus, corr), eps).coeffs) rep.detail = "holds with sigma instead of sigma^{-1}";
        else if (lhs.coeffs == rhs(G.mul(G.inv(rep.sigma_nplus), corr), -eps).coeffs) rep.detail = "holds with the opposite sign";
        else rep.detail = "no normalization matches";
    }
    return rep;
}

// ---------------------------------------------------------------------------

cplx interpolation_rhs(const InterpolationData& x, double L_value, double period) {
    double k2 = x.k / 2.0;
    cplx v = std::tgamma(k2 + x.m) * std::tgamma(k2 - x.m) * L_value / period;
    v *= std::pow(x.e_p, 2 - x.ord_p_N);
    double ps = std::pow(static_cast<double>(x.p), x.s);
    v *= ps * std::pow(x.A_p, -2.0 * x.s) * std::pow(ps * static_cast<double>(x.D_K), x.k - 2);
    v *= static_cast<double>(x.u_K * x.u_K) * std::sqrt(static_cast<double>(x.D_K));
    v *= static_cast<double>(x.eps_p) * (x.m % 2 == 0 ? 1.0 : -1.0);
    for (auto& r : x.ram_factors) v *= cplx(1, 0) - r;
    v *= x.chi_nplus;
    return v;
}

bool st_condition(const InterpolationData& x) {
    for (auto& r : x.ram_factors)
        if (std::abs(r + cplx(1, 0)) > 1e-9) return false;
    return true;
}

}  // namespace gt
