#include "gt/quaternion.hpp"

#include <sstream>

#include "json.hpp"

namespace gt {

// ---------------------------------------------------------------------------
// Elements

QuatElem operator+(const QuatElem& x, const QuatElem& y) { return {x.a + y.a, x.b + y.b, x.beta ? x.beta : y.beta}; }
QuatElem operator-(const QuatElem& x, const QuatElem& y) { return {x.a - y.a, x.b - y.b, x.beta ? x.beta : y.beta}; }
QuatElem operator-(const QuatElem& x) { return {-x.a, -x.b, x.beta}; }

// (a + bJ)(c + dJ) = (ac + beta b conj(d)) + (ad + b conj(c)) J
QuatElem operator*(const QuatElem& x, const QuatElem& y) {
    long beta = x.beta ? x.beta : y.beta;
    return {x.a * y.a + x.b * y.b.conj() * Rational(beta), x.a * y.b + x.b * y.a.conj(), beta};
}
QuatElem operator*(const QuatElem& x, const Rational& c) { return {x.a * c, x.b * c, x.beta}; }
bool operator==(const QuatElem& x, const QuatElem& y) { return x.a == y.a && x.b == y.b; }

std::string QuatElem::str() const {
    auto c = coords();
    std::ostringstream os;
    os << "(" << to_string(c[0]) << "," << to_string(c[1]) << "," << to_string(c[2]) << "," << to_string(c[3]) << ")";
    return os.str();
}

// ---------------------------------------------------------------------------
// Local matrices

LocalMat LocalMat::make(long q, int prec, const Int& a, const Int& b, const Int& c, const Int& d) {
    LocalMat m;
    m.q = q;
    m.prec = prec;
    m.e = {a, b, c, d};
    return m.reduced();
}

LocalMat LocalMat::reduced() const {
    LocalMat m = *this;
    Int md = modulus();
    for (auto& x : m.e) x = mod(x, md);
    return m;
}

LocalMat LocalMat::identity(long q, int prec) { return make(q, prec, 1, 0, 0, 1); }

LocalMat LocalMat::adjugate() const { return make(q, prec, e[3], -e[1], -e[2], e[0]); }

LocalMat LocalMat::inverse() const {
    Int d = det();
    Int di = inv_mod(d, modulus());
    return adjugate() * di;
}

LocalMat LocalMat::with_precision(int p2) const {
    if (p2 > prec) throw PrecisionError("cannot raise the precision of a local matrix");
    return make(q, p2, e[0], e[1], e[2], e[3]);
}

bool LocalMat::operator==(const LocalMat& o) const {
    int p = std::min(prec, o.prec);
    Int md = ipow(Int(q), p);
    for (int i = 0; i < 4; ++i)
        if (mod(e[i] - o.e[i], md) != 0) return false;
    return true;
}

LocalMat operator*(const LocalMat& x, const LocalMat& y) {
    int p = std::min(x.prec, y.prec);
    return LocalMat::make(x.q, p, x.e[0] * y.e[0] + x.e[1] * y.e[2], x.e[0] * y.e[1] + x.e[1] * y.e[3],
                          x.e[2] * y.e[0] + x.e[3] * y.e[2], x.e[2] * y.e[1] + x.e[3] * y.e[3]);
}

LocalMat operator+(const LocalMat& x, const LocalMat& y) {
    int p = std::min(x.prec, y.prec);
    return LocalMat::make(x.q, p, x.e[0] + y.e[0], x.e[1] + y.e[1], x.e[2] + y.e[2], x.e[3] + y.e[3]);
}

LocalMat operator*(const LocalMat& x, const Int& c) {
    return LocalMat::make(x.q, x.prec, x.e[0] * c, x.e[1] * c, x.e[2] * c, x.e[3] * c);
}

// ---------------------------------------------------------------------------
// Hilbert symbols

namespace {

struct Split {
    int v;
    Int u;
};

Split split_off(const Int& a, long q) {
    Split s{0, a};
    while (mpz_divisible_ui_p(s.u.get_mpz_t(), q)) {
        mpz_divexact_ui(s.u.get_mpz_t(), s.u.get_mpz_t(), q);
        ++s.v;
    }
    return s;
}

int legendre(const Int& a, long q) {
    Int Q(q);
    return mpz_legendre(a.get_mpz_t(), Q.get_mpz_t());
}

}  // namespace

int hilbert_symbol(const Int& a, const Int& b, long q) {
    if (a == 0 || b == 0) throw ArithError("Hilbert symbol of zero");
    if (q == 0) return (a < 0 && b < 0) ? -1 : 1;
    auto A = split_off(a, q), Bs = split_off(b, q);
    if (q == 2) {
        auto eps = [](const Int& u) { return static_cast<int>(mod((u - 1) / 2, 2).get_si()); };
        auto omega = [](const Int& u) { return static_cast<int>(mod((u * u - 1) / 8, 2).get_si()); };
        int e = eps(A.u) * eps(Bs.u) + A.v * omega(Bs.u) + Bs.v * omega(A.u);
        return (e % 2) ? -1 : 1;
    }
    int s = 1;
    if ((A.v * Bs.v) % 2 == 1 && ((q - 1) / 2) % 2 == 1) s = -s;
    if (Bs.v % 2) s *= legendre(A.u, q);
    if (A.v % 2) s *= legendre(Bs.u, q);
    return s;
}

// Solvability of a x^2 + b y^2 = z^2 over Z_q, decided by a primitive solution
// modulo q^e (e = 3 for odd q, e = 5 for q = 2) after removing square factors;
// Hensel's lemma makes this criterion exact.
int hilbert_symbol_bruteforce(const Int& a0, const Int& b0, long q) {
    if (q == 0) return hilbert_symbol(a0, b0, 0);
    if (q > 100) throw ArithError("brute-force Hilbert symbol limited to q <= 100");
    auto A = split_off(a0, q), Bs = split_off(b0, q);
    Int a = A.u * (A.v % 2 ? q : 1), b = Bs.u * (Bs.v % 2 ? q : 1);
    int e = (q == 2) ? 5 : 3;
    long m = ipow(Int(q), e).get_si();
    std::vector<char> is_sq(m, 0);
    for (long z = 0; z < m; ++z) is_sq[(z * z) % m] = 1;
    long am = mod(a, m).get_si(), bm = mod(b, m).get_si();
    auto test = [&](long x, long y) {
        long v = ((am * ((x * x) % m)) % m + (bm * ((y * y) % m)) % m) % m;
        return is_sq[v] != 0;
    };
    // x a unit: scale to x = 1.
    for (long y = 0; y < m; ++y)
        if (test(1, y)) return 1;
    // x divisible by q, y a unit: scale to y = 1.
    for (long x = 0; x < m; x += q)
        if (test(x, 1)) return 1;
    return -1;
}

RamifiedSet hilbert_ramified_set(const Int& a, const Int& b) {
    RamifiedSet r;
    r.infinite = hilbert_symbol(a, b, 0) == -1;
    std::set<long> primes = {2};
    for (long q : prime_factors(Int(abs(a)).get_si())) primes.insert(q);
    for (long q : prime_factors(Int(abs(b)).get_si())) primes.insert(q);
    for (long q : primes) {
        int h = hilbert_symbol(a, b, q);
        if (q <= 100 && hilbert_symbol_bruteforce(a, b, q) != h)
            throw VerificationError("Hilbert symbol formula disagrees with brute force at q = " + std::to_string(q));
        if (h == -1) r.finite.insert(q);
    }
    if ((r.finite.size() + (r.infinite ? 1 : 0)) % 2 != 0)
        throw VerificationError("Hilbert reciprocity violated");
    return r;
}

void validate_setting(const QuadField& K, long p, long n_plus, long n_minus) {
    if (!is_prime(p)) throw ConfigError("p = " + std::to_string(p) + " is not prime");
    if (n_minus < 2 || !is_squarefree(n_minus))
        throw ConfigError("N- = " + std::to_string(n_minus) + " must be squarefree and > 1");
    if (prime_factors(n_minus).size() % 2 == 0)
        throw ConfigError("N- = " + std::to_string(n_minus) + " must have an odd number of prime factors");
    if (n_plus < 1) throw ConfigError("N+ must be positive");
    if (std::gcd(n_plus, n_minus) != 1) throw ConfigError("N+ and N- must be coprime");
    if ((n_plus * n_minus) % p == 0) throw ConfigError("p must not divide N+ N-");
    for (long q : prime_factors(n_minus))
        if (K.split_type(q) == 1)
            throw ConfigError("prime " + std::to_string(q) + " | N- splits in K = Q(sqrt(-" + std::to_string(K.D) + "))");
    for (long q : prime_factors(n_plus))
        if (K.split_type(q) != 1)
            throw ConfigError("prime " + std::to_string(q) + " | N+ does not split in K = Q(sqrt(-" + std::to_string(K.D) + "))");
}

QuadField auto_field(long n_minus, long n_plus) {
    for (long D = 3; D < 100000; ++D) {
        QuadField K;
        try {
            K = QuadField::make(D);
        } catch (const ArithError&) {
            continue;
        }
        bool ok = true;
        for (long q : prime_factors(n_minus))
            if (K.split_type(q) == 1) ok = false;
        for (long q : prime_factors(n_plus))
            if (K.split_type(q) != 1) ok = false;
        if (ok) return K;
    }
    throw ConfigError("no imaginary quadratic field with the required splitting");
}

long choose_beta(const QuadField& K, long p, long n_plus, long n_minus, long aux_l, long extra) {
    std::set<long> sq;
    for (long n : {p, aux_l, n_plus, extra})
        for (long q : prime_factors(n)) sq.insert(q);
    auto pf = prime_factors(n_minus);
    std::set<long> target(pf.begin(), pf.end());
    for (long q : target)
        if (sq.count(q)) throw ConfigError("a prime of N- is required to be a square prime");
    const long bound = 200000;
    for (long m = 1; m <= bound; ++m) {
        long beta = -m;
        bool ok = true;
        for (long q : sq)
            if (!is_unit_square(Rational(beta), q)) {
                ok = false;
                break;
            }
        if (!ok) continue;
        for (long q : prime_factors(K.D))
            if (beta % q == 0) {
                ok = false;
                break;
            }
        if (!ok) continue;
        auto rs = hilbert_ramified_set(Int(-K.D), Int(beta));
        if (rs.infinite && rs.finite == target) return beta;
    }
    throw ConfigError("no admissible beta found with |beta| <= " + std::to_string(bound));
}

// ---------------------------------------------------------------------------
// Algebra

QuatAlgebra::QuatAlgebra(const QuadField& K, long beta, long n_minus, std::vector<long> square_primes)
    : K_(K), beta_(beta), n_minus_(n_minus), square_primes_(std::move(square_primes)) {
    if (beta >= 0) throw ConfigError("beta must be negative");
    auto rs = hilbert_ramified_set(Int(-K.D), Int(beta));
    auto pf = prime_factors(n_minus);
    if (!rs.infinite || rs.finite != std::set<long>(pf.begin(), pf.end()))
        throw ConfigError("(-D_K, beta) is not ramified exactly at N- and infinity");
    for (long q : square_primes_)
        if (!is_unit_square(Rational(beta), q))
            throw ConfigError("beta is not a unit square at " + std::to_string(q));
    std::sort(square_primes_.begin(), square_primes_.end());
    square_primes_.erase(std::unique(square_primes_.begin(), square_primes_.end()), square_primes_.end());
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            std::array<Rational, 4> ci{0, 0, 0, 0}, cj{0, 0, 0, 0};
            ci[i] = 1;
            cj[j] = 1;
            auto c = (elem(ci) * elem(cj)).coords();
            for (int k = 0; k < 4; ++k) mult_[i][j][k] = c[k].get_num().get_si();
        }
}

std::shared_ptr<const QuatAlgebra> QuatAlgebra::make(const QuadField& K, long p, long n_plus, long n_minus, long aux_l,
                                                     long extra) {
    long beta = choose_beta(K, p, n_plus, n_minus, aux_l, extra);
    std::vector<long> sq;
    for (long n : {p, aux_l, n_plus, extra})
        for (long q : prime_factors(n)) sq.push_back(q);
    return std::make_shared<const QuatAlgebra>(K, beta, n_minus, sq);
}

QuatElem QuatAlgebra::elem(const Rational& c0, const Rational& c1, const Rational& c2, const Rational& c3) const {
    return {QuadElem(K_, c0, c1), QuadElem(K_, c2, c3), beta_};
}

std::array<std::array<long, 4>, 4> QuatAlgebra::norm_form() const {
    std::array<std::array<long, 4>, 4> Q{};
    Q[0][0] = 1;
    Q[0][1] = K_.T;
    Q[1][1] = K_.N;
    Q[2][2] = -beta_;
    Q[2][3] = -beta_ * K_.T;
    Q[3][3] = -beta_ * K_.N;
    return Q;
}

std::array<std::array<long, 4>, 4> QuatAlgebra::trace_gram() const {
    auto Q = norm_form();
    std::array<std::array<long, 4>, 4> G{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) G[i][j] = (i == j) ? 2 * Q[i][i] : (i < j ? Q[i][j] : Q[j][i]);
    return G;
}

bool QuatAlgebra::is_square_prime(long q) const {
    return std::find(square_primes_.begin(), square_primes_.end(), q) != square_primes_.end();
}

Int QuatAlgebra::sqrt_beta(long q, int digits) const {
    if (!is_square_prime(q)) throw ConfigError("sqrt(beta) is only fixed at the square primes");
    return sqrt_mod_prime_power(Int(beta_), q, digits);
}

QuatAlgebra::LocalData QuatAlgebra::compute_local(long q, int digits) const {
    if (n_minus_ % q == 0) throw ConfigError("nonsplit prime " + std::to_string(q));
    LocalData d;
    d.digits = digits;
    d.theta = LocalMat::make(q, digits, K_.T, -K_.N, 1, 0);
    LocalMat Jshape = LocalMat::make(q, digits, -1, K_.T, 0, 1);
    if (is_square_prime(q)) {
        d.J = Jshape * sqrt_beta(q, digits);
        return d;
    }
    // Integral splitting away from the square primes: replace J by J' = cJ with
    // c in O_K such that beta N(c) / q^{2j} is a unit square, and conjugate back.
    int vb = valuation(Int(beta_), q);
    for (long r = 0; r <= 60; ++r)
        for (long x = -r; x <= r; ++x)
            for (long y = -r; y <= r; ++y) {
                if (std::max(std::labs(x), std::labs(y)) != r) continue;
                QuadElem c(K_, x, y);
                Rational nc = c.norm();
                if (nc == 0) continue;
                int vc = valuation(nc, q);
                if (vc > 1 || (vc % 2) != (vb % 2)) continue;
                Rational bp = Rational(beta_) * nc;
                int j = (vb + vc) / 2;
                Rational u = bp / Rational(ipow(Int(q), 2 * j));
                if (!is_unit_square(u, q)) continue;
                int wd = digits + vc + 2;
                Int su = sqrt_mod_prime_power(residue(u, q, wd), q, wd);
                // i_q(J) = i_q(conj c) * q^{j - vc} sqrt(u) / (N(c) / q^vc) * Jshape
                Rational w = nc / Rational(ipow(Int(q), vc));
                Int scal = mod(ipow(Int(q), j - vc) * su * residue(1 / w, q, wd), ipow(Int(q), digits));
                QuadElem cb = c.conj();
                LocalMat icb = LocalMat::make(q, digits, residue(cb.u, q, digits) + K_.T * residue(cb.v, q, digits),
                                              -K_.N * residue(cb.v, q, digits), residue(cb.v, q, digits),
                                              residue(cb.u, q, digits));
                d.J = icb * Jshape * scal;
                return d;
            }
    throw ConfigError("no integral splitting found at q = " + std::to_string(q));
}

std::pair<LocalMat, LocalMat> QuatAlgebra::generators_at(long q, int digits) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(q);
    if (it == cache_.end() || it->second.digits < digits) {
        int d = std::max(digits, it == cache_.end() ? 0 : 2 * it->second.digits);
        cache_[q] = compute_local(q, d);
        it = cache_.find(q);
    }
    return {it->second.theta.with_precision(digits), it->second.J.with_precision(digits)};
}

LocalMat QuatAlgebra::split_coords(long q, int digits, const std::array<Int, 4>& c, const Int& den) const {
    int v = den == 0 ? 0 : valuation(den, q);
    Int w = den / ipow(Int(q), v);
    int wd = digits + v;
    auto [Th, Jm] = generators_at(q, wd);
    LocalMat ThJ = Th * Jm;
    LocalMat r = LocalMat::identity(q, wd) * c[0] + Th * c[1] + Jm * c[2] + ThJ * c[3];
    Int qv = ipow(Int(q), v);
    LocalMat out;
    out.q = q;
    out.prec = digits;
    Int wi = inv_mod(w, ipow(Int(q), digits));
    for (int i = 0; i < 4; ++i) {
        if (mod(r.e[i], qv) != 0) throw ArithError("element is not integral at q = " + std::to_string(q));
        out.e[i] = (r.e[i] / qv) * wi;
    }
    return out.reduced();
}

LocalMat QuatAlgebra::split_at(long q, int digits, const QuatElem& x) const {
    auto cc = x.coords();
    Int den = 1;
    for (auto& r : cc) den = lcm(den, r.get_den());
    std::array<Int, 4> num;
    for (int i = 0; i < 4; ++i) num[i] = cc[i].get_num() * (den / cc[i].get_den());
    return split_coords(q, digits, num, den);
}

std::array<cplx, 4> QuatAlgebra::split_complex(const QuatElem& x) const {
    cplx a = x.a.embed(), b = x.b.embed();
    return {a, b * static_cast<double>(beta_), std::conj(b), std::conj(a)};
}

std::string QuatAlgebra::descriptor_json() const {
    nlohmann::json j;
    j["D_K"] = K_.D;
    j["beta"] = beta_;
    j["n_minus"] = n_minus_;
    j["square_primes"] = square_primes_;
    nlohmann::json sp = nlohmann::json::array();
    {
        std::lock_guard<std::mutex> lock(mu_);
        for (auto& [q, d] : cache_) sp.push_back({{"q", q}, {"digits", d.digits}});
    }
    j["splittings"] = sp;
    return j.dump();
}

}  // namespace gt
