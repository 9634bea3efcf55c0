#include "gt/cm_tower.hpp"

#include "json.hpp"

namespace gt {

long class_number(long D_K) {
    // reduced primitive forms (a, b, c) with b^2 - 4ac = -D_K
    long h = 0;
    for (long a = 1; 3 * a * a <= D_K; ++a)
        for (long b = -a + 1; b <= a; ++b) {
            long num = b * b + D_K;
            if (num % (4 * a) != 0) continue;
            long c = num / (4 * a);
            if (c < a) continue;
            if (c == a && b < 0) continue;
            if (std::gcd(std::gcd(a, std::abs(b)), c) != 1) continue;
            ++h;
        }
    return h;
}

namespace {

std::vector<OKRes> unit_residues(const QuadField& K) {
    std::vector<OKRes> out;
    long B = K.T + 3;
    for (long v = -2; v <= 2; ++v)
        for (long u = -B; u <= B; ++u)
            if (u * u + K.T * u * v + K.N * v * v == 1) out.push_back({Int(u), Int(v)});
    return out;
}

OKRes reduce_res(const OKRes& x, const Int& m) { return {mod(x.u, m), mod(x.v, m)}; }

// Least root of X^2 - T X + N modulo q, Hensel lifted to q^digits (q not dividing D_K).
Int theta_root(const QuadField& K, long q, int digits) {
    Int Q = ipow(Int(q), digits);
    for (long r = 0; r < q; ++r) {
        if ((r * r - K.T * r + K.N) % q != 0) continue;
        Int x = r;
        for (int i = 0; i < digits + 1; ++i) {
            Int f = mod(x * x - K.T * x + K.N, Q);
            Int fp = mod(2 * x - K.T, Q);
            x = mod(x - f * inv_mod(fp, Q), Q);
        }
        return x;
    }
    throw ConfigError("prime does not split in K");
}

}  // namespace

// ---------------------------------------------------------------------------
RingClassGroup::RingClassGroup(const QuadField& K, long p, int n) : K_(K), p_(p), n_(n) {
    if (n < 0) throw ConfigError("negative tower level");
    if (p == 2 || !is_prime(p)) throw ConfigError("the tower needs an odd prime p");
    if (K.split_type(p) == 0) throw ConfigError("p ramified in K is not supported by the tower");
    if (class_number(K.D) != 1) throw ConfigError("the tower is implemented for class number one only");
    pn_ = ipow(Int(p), static_cast<unsigned long>(n));
    if (n == 0) return;
    Int P = p;
    std::vector<std::pair<long, long>> canon;
    for (long a = 0; a < p; ++a)
        for (long b = 0; b < p; ++b) {
            if ((a * a + K.T * a * b + K.N * b * b) % p == 0) continue;
            canon.push_back(delta_canonical({Int(a), Int(b)}));
        }
    std::sort(canon.begin(), canon.end());
    canon.erase(std::unique(canon.begin(), canon.end()), canon.end());
    d_ = static_cast<long>(canon.size());
    auto one = delta_canonical({Int(1), Int(0)});
    for (auto& c : canon) {
        OKRes g{Int(c.first), Int(c.second)}, x = g;
        std::map<std::pair<long, long>, long> logs;
        long ord = 1;
        logs[one] = 0;
        while (delta_canonical(x) != one) {
            logs[delta_canonical(x)] = ord;
            x = mulr(x, g, P);
            ++ord;
        }
        if (ord == d_) {
            delta_log_ = std::move(logs);
            // Teichmueller lift: x^{p^{2n}} is stable modulo p^n
            delta_gen_ = powr(g, ipow(P, 2 * n), pn_);
            break;
        }
    }
    if (delta_log_.empty()) throw VerificationError("Delta is not cyclic");
    g_ = ipow(P, static_cast<unsigned long>(n - 1)).get_si();
}

OKRes RingClassGroup::mulr(const OKRes& a, const OKRes& b, const Int& m) const {
    return reduce_res({a.u * b.u - K_.N * a.v * b.v, a.u * b.v + a.v * b.u + K_.T * a.v * b.v}, m);
}

OKRes RingClassGroup::powr(OKRes a, Int e, const Int& m) const {
    OKRes r{Int(1), Int(0)};
    a = reduce_res(a, m);
    while (e > 0) {
        if (e % 2 == 1) r = mulr(r, a, m);
        a = mulr(a, a, m);
        e /= 2;
    }
    return reduce_res(r, m);
}

std::pair<long, long> RingClassGroup::delta_canonical(const OKRes& x) const {
    Int P = p_;
    std::pair<long, long> best{p_, p_};
    for (auto& z : unit_residues(K_)) {
        OKRes y = mulr(x, z, P);
        for (long c = 1; c < p_; ++c) {
            std::pair<long, long> v{mod(y.u * c, P).get_si(), mod(y.v * c, P).get_si()};
            best = std::min(best, v);
        }
    }
    return best;
}

std::vector<RingClassGroup::Elem> RingClassGroup::elements() const {
    std::vector<Elem> out;
    if (n_ == 0) return {Elem{}};
    for (long i = 0; i < d_; ++i)
        for (long e = 0; e < g_; ++e) out.push_back({i, e});
    return out;
}

RingClassGroup::Elem RingClassGroup::mul(const Elem& x, const Elem& y) const {
    return {(x.i + y.i) % d_, (x.e + y.e) % g_};
}

RingClassGroup::Elem RingClassGroup::inv(const Elem& x) const { return {(d_ - x.i) % d_, (g_ - x.e) % g_}; }

RingClassGroup::Elem RingClassGroup::from_residue(const QuadElem& x) const {
    if (!x.is_integral()) throw ArithError("from_residue needs an integral element");
    if (mod(x.norm().get_num(), Int(p_)) == 0)
        throw ArithError("from_residue needs an element prime to p");
    if (n_ == 0) return {};
    OKRes r = reduce_res({x.u.get_num(), x.v.get_num()}, pn_);
    long i = delta_log_.at(delta_canonical(reduce_res(r, Int(p_))));
    auto inverse = [&](const OKRes& a) {
        Int nm = mod(a.u * a.u + K_.T * a.u * a.v + K_.N * a.v * a.v, pn_);
        Int ni = inv_mod(nm, pn_);
        return reduce_res({(a.u + K_.T * a.v) * ni, -a.v * ni}, pn_);
    };
    OKRes z = mulr(r, powr(inverse(delta_gen_), i, pn_), pn_);
    Int P = p_;
    OKRes omega = powr(z, ipow(P, 2 * n_), pn_);
    OKRes y = mulr(z, inverse(omega), pn_);
    OKRes gamma_inv = inverse({Int(1), Int(p_)});
    for (long e = 0; e < g_; ++e) {
        if (mod(y.v, pn_) == 0) return {i, e};
        y = mulr(y, gamma_inv, pn_);
    }
    throw VerificationError("discrete logarithm in Gamma_n failed");
}

QuadElem RingClassGroup::representative(const Elem& x) const {
    if (n_ == 0) return QuadElem(K_, 1, 0);
    OKRes r = mulr(powr(delta_gen_, x.i, pn_), powr({Int(1), Int(p_)}, x.e, pn_), pn_);
    return QuadElem(K_, Rational(r.u), Rational(r.v));
}

RingClassGroup::Elem RingClassGroup::project(const Elem& x) const {
    if (n_ == 0) throw ConfigError("G_0 has no projection");
    if (n_ == 1) return {};
    return {x.i, x.e % (g_ / p_)};
}

RingClassGroup::Elem RingClassGroup::ideal_class(const QuadElem& pi) const {
    // pi^{-1} = conj(pi) / N(pi) and rationals die in G_n
    return from_residue(pi.conj());
}

std::string RingClassGroup::to_json() const {
    nlohmann::json j;
    j["D_K"] = K_.D;
    j["p"] = p_;
    j["n"] = n_;
    j["order"] = size();
    j["delta_order"] = d_;
    j["gamma_order"] = g_;
    if (n_ > 0) j["delta_generator"] = {to_string(delta_gen_.u), to_string(delta_gen_.v)};
    j["gamma"] = {1, p_};
    return j.dump();
}

// ---------------------------------------------------------------------------
long TowerCharacter::order_modulus() const {
    long w = s >= 2 ? ipow(Int(p), static_cast<unsigned long>(s - 1)).get_si() : 1;
    return std::lcm(d, w);
}

Cyclo TowerCharacter::operator()(const RingClassGroup::Elem& x) const {
    long M = order_modulus();
    long w = s >= 2 ? ipow(Int(p), static_cast<unsigned long>(s - 1)).get_si() : 1;
    long e = (t * x.i % d) * (M / d) + (s >= 2 ? (j * x.e % w) * (M / w) : 0);
    return Cyclo::monomial(M, e, Rational(1));
}

int TowerCharacter::conductor_exponent() const {
    if (s >= 2 && j % p != 0) return s;
    if (t % d != 0) return 1;
    return 0;
}

std::string TowerCharacter::str() const {
    return "chi_" + std::to_string(t) + (s >= 2 ? " nu(p^" + std::to_string(s) + ", " + std::to_string(j) + ")" : "");
}

std::vector<TowerCharacter> wild_characters(const RingClassGroup& G, long t, int s) {
    std::vector<TowerCharacter> out;
    if (s > G.level()) throw ConfigError("conductor exceeds the tower level");
    if (s <= 1) {
        out.push_back({G.delta_order(), t, G.p(), s, 0, 0});
        return out;
    }
    long w = ipow(Int(G.p()), static_cast<unsigned long>(s - 1)).get_si();
    for (long j = 1; j < w; ++j)
        if (j % G.p() != 0) out.push_back({G.delta_order(), t, G.p(), s, j, 0});
    return out;
}

// ---------------------------------------------------------------------------
GrossPoints::GrossPoints(std::shared_ptr<const FormSpace> S, long p, long n_plus)
    : S_(std::move(S)), p_(p), n_plus_(n_plus) {
    const QuadField& K = S_->alg().field();
    long M = S_->order().level;
    if (n_plus % p == 0) throw ConfigError("N+ must be prime to p");
    if (M % n_plus != 0 || M / n_plus > p || (M / n_plus != 1 && M / n_plus != p))
        throw ConfigError("form space level must be N+ or p N+");
    if (K.split_type(p) == 0 || p == 2) throw ConfigError("p must be odd and unramified in K");
    if (class_number(K.D) != 1) throw ConfigError("Gross points are implemented for class number one only");
    for (long q : prime_factors(n_plus))
        if (K.split_type(q) != 1) throw ConfigError("every prime of N+ must split in K");
}

Int GrossPoints::theta_p(int digits) const {
    const QuadField& K = S_->alg().field();
    if (K.split_type(p_) != 1) return 0;
    return theta_root(K, p_, digits);
}

Int GrossPoints::theta_q(long q, int digits) const { return theta_root(S_->alg().field(), q, digits); }

QuadElem GrossPoints::n_plus_generator() const {
    const QuadField& K = S_->alg().field();
    QuadElem g(K, 1, 0);
    for (auto [q, e] : factorize(n_plus_)) {
        long r = theta_root(K, q, 1).get_si();
        std::optional<QuadElem> pi;
        for (long v = -q; v <= q && !pi; ++v)
            for (long u = -q - K.T * q; u <= q + K.T * q && !pi; ++u) {
                QuadElem x(K, u, v);
                if (x.norm() == q && (u + v * r) % q == 0) pi = x;
            }
        if (!pi) throw VerificationError("no generator of the prime above q");
        for (int i = 0; i < e; ++i) g = g * *pi;
    }
    return g;
}

LocalMat GrossPoints::varsigma_p(int n, int digits) const {
    Int pn = ipow(Int(p_), static_cast<unsigned long>(n));
    const QuadField& K = S_->alg().field();
    if (K.split_type(p_) == 1) {
        Int th = theta_p(digits);
        return LocalMat::make(p_, digits, th * pn, -1, pn, 0);
    }
    return LocalMat::make(p_, digits, 0, 1, -pn, 0);
}

LocalMat GrossPoints::varsigma_q(long q, int digits) const {
    const QuadField& K = S_->alg().field();
    Int Q = ipow(Int(q), digits);
    Int r = theta_q(q, digits);
    Int rb = mod(K.T - r, Q);
    Int di = inv_mod(mod(2 * r - K.T, Q), Q);
    return LocalMat::make(q, digits, r * di, rb * di, di, di);
}

std::vector<IdeleFactor> GrossPoints::factors(int n, const QuadElem& u, const std::optional<QuadElem>& pi) const {
    long M = S_->order().level;
    const QuatAlgebra& B = S_->alg();
    std::map<long, int> extra;   // q -> v_q(N(pi))
    if (pi) {
        if (!pi->is_integral() || pi->is_zero()) throw ArithError("translation needs a nonzero integral element");
        Int nm = pi->norm().get_num();
        for (auto [q, e] : factorize(nm.get_si())) {
            if (q == p_ || B.n_minus() % q == 0) throw ArithError("translation must be prime to p N-");
            extra[q] = e;
        }
    }
    std::set<long> primes{p_};
    for (long q : prime_factors(n_plus_)) primes.insert(q);
    for (auto& [q, e] : extra) primes.insert(q);
    std::vector<IdeleFactor> xs;
    for (long q : primes) {
        int eq = M % q == 0 ? valuation(Int(M), q) : 0;
        int t = (q == p_ ? n : 0) + (extra.count(q) ? extra[q] : 0);
        int digits = t + eq + 2;
        LocalMat x = LocalMat::identity(q, digits);
        if (q == p_) x = B.split_at(p_, digits, B.from_K(u)) * varsigma_p(n, digits);
        else if (n_plus_ % q == 0) x = varsigma_q(q, digits);
        if (extra.count(q)) x = B.split_at(q, digits, B.from_K(*pi)) * x;
        xs.push_back({q, x});
    }
    return xs;
}

Lattice GrossPoints::lattice(int n, const QuadElem& u, const std::optional<QuadElem>& pi) const {
    return S_->idele_lattice(S_->order().L, 1, factors(n, u, pi));
}

GrossPoints::Reduced GrossPoints::reduce_lattice(const Lattice& L) const {
    auto [j, alpha] = S_->classes().identify(L);
    return {j, alpha};
}

GrossPoints::Reduced GrossPoints::reduce(int n, const QuadElem& u) const { return reduce_lattice(lattice(n, u)); }

std::vector<QuadNum> GrossPoints::value(int n, const QuadElem& u, const std::vector<QuadNum>& F) const {
    auto red = reduce(n, u);
    return mat_apply(S_->weights().rho(red.alpha), S_->block_of(F, red.cls));
}

Int GrossPoints::embedded_conductor(int n) const {
    const QuatAlgebra& B = S_->alg();
    Lattice L = lattice(n, QuadElem(B.field(), 1, 0));
    Lattice O = left_order(B, L, ideal_norm(S_->order(), L));
    Int bound = ipow(Int(p_), static_cast<unsigned long>(n + 2));
    for (Int c = 1; c <= bound; ++c)
        if (O.contains(QVec{Rational(0), Rational(c), Rational(0), Rational(0)})) return c;
    throw VerificationError("no multiple of theta in the left order");
}

bool GrossPoints::check_optimality(int n) const {
    return embedded_conductor(n) == ipow(Int(p_), static_cast<unsigned long>(n));
}

}  // namespace gt
