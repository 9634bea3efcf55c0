#include "gt/exact_arith.hpp"

#include <cmath>
#include <mutex>
#include <algorithm>
#include <sstream>

namespace gt {

Rational rat(long num, long den) {
    if (den == 0) throw ArithError("zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Rational rat(const Int& num, const Int& den) {
    if (den == 0) throw ArithError("zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

std::string to_string(const Int& x) { return x.get_str(); }

std::string to_string(const Rational& x) { return x.get_str(); }

Rational rational_from_string(const std::string& s) {
    Rational r;
    if (r.set_str(s, 10) != 0) throw ArithError("malformed rational: " + s);
    if (r.get_den() == 0) throw ArithError("zero denominator: " + s);
    r.canonicalize();
    return r;
}

Int ipow(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

Int mod(const Int& a, const Int& m) {
    Int r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

Int inv_mod(const Int& a, const Int& m) {
    Int r;
    if (m == 1) return 0;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw ArithError("element not invertible modulo " + m.get_str());
    return r;
}

Int powmod(const Int& a, const Int& e, const Int& m) {
    Int r;
    if (e < 0) return powmod(inv_mod(a, m), -e, m);
    mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
    return r;
}

int valuation(const Int& x, long p) {
    if (x == 0) throw ArithError("valuation of zero");
    Int y = x;
    int v = 0;
    while (mpz_divisible_ui_p(y.get_mpz_t(), p)) {
        mpz_divexact_ui(y.get_mpz_t(), y.get_mpz_t(), p);
        ++v;
    }
    return v;
}

int valuation(const Rational& x, long p) {
    if (x == 0) throw ArithError("valuation of zero");
    return valuation(x.get_num(), p) - valuation(x.get_den(), p);
}

bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<std::pair<long, int>> factorize(long n) {
    std::vector<std::pair<long, int>> f;
    if (n < 0) n = -n;
    for (long d = 2; d * d <= n; ++d) {
        if (n % d) continue;
        int e = 0;
        while (n % d == 0) n /= d, ++e;
        f.push_back({d, e});
    }
    if (n > 1) f.push_back({n, 1});
    return f;
}

std::vector<long> prime_factors(long n) {
    std::vector<long> r;
    for (auto& [q, e] : factorize(n)) r.push_back(q);
    return r;
}

bool is_squarefree(long n) {
    for (auto& [q, e] : factorize(n))
        if (e > 1) return false;
    return true;
}

long kronecker(long a, long n) {
    if (n <= 0) throw ArithError("kronecker: n must be positive");
    Int A(a), N(n);
    return mpz_kronecker(A.get_mpz_t(), N.get_mpz_t());
}

long euler_phi(long n) {
    long r = n;
    for (long q : prime_factors(n)) r = r / q * (q - 1);
    return r;
}

std::vector<long> divisors(long n) {
    std::vector<long> d;
    for (long i = 1; i * i <= n; ++i)
        if (n % i == 0) {
            d.push_back(i);
            if (i * i != n) d.push_back(n / i);
        }
    std::sort(d.begin(), d.end());
    return d;
}

Int residue(const Rational& x, long p, int M) {
    Int pm = ipow(Int(p), M);
    if (mpz_divisible_ui_p(x.get_den().get_mpz_t(), p))
        throw ArithError("residue: denominator divisible by p");
    return mod(x.get_num() * inv_mod(x.get_den(), pm), pm);
}

bool is_unit_square(const Rational& a, long p) {
    if (a == 0 || valuation(a, p) != 0) return false;
    Int r = residue(a, p, 3);
    if (p == 2) return mod(r, 8) == 1;
    Int P(p);
    return mpz_legendre(r.get_mpz_t(), P.get_mpz_t()) == 1;
}

Int sqrt_mod_prime_power(const Int& a0, long p, int M) {
    Int pm = ipow(Int(p), M);
    Int a = mod(a0, pm);
    if (p == 2) {
        if (mod(a, 8) != 1 && M >= 3) throw ArithError("not a 2-adic unit square");
        if (mpz_even_p(a.get_mpz_t())) throw ArithError("not a 2-adic unit");
        // Bit-by-bit lift of the root congruent to 1 mod 4.
        Int x = 1;
        for (int k = 3; k < M; ++k) {
            Int mk = ipow(Int(2), k + 1);
            if (mod(x * x - a, mk) != 0) x += ipow(Int(2), k - 1);
        }
        if (M <= 2) return mod(Int(1), pm);
        return mod(x, pm);
    }
    Int P(p);
    Int a1 = mod(a, P);
    if (a1 == 0 || mpz_legendre(a1.get_mpz_t(), P.get_mpz_t()) != 1)
        throw ArithError("not a unit square modulo " + std::to_string(p));
    Int x;
    for (long r = 1; r < p; ++r)
        if (mod(Int(r) * r - a1, P) == 0) {
            x = r;
            break;
        }
    // Newton lifting: x <- x - (x^2 - a)/(2x)
    Int cur = P;
    while (cur < pm) {
        cur = cur * cur;
        if (cur > pm) cur = pm;
        x = mod(x - (x * x - a) * inv_mod(2 * x, cur), cur);
    }
    return mod(x, pm);
}

// ---------------------------------------------------------------------------
QuadField QuadField::make(long D_K) {
    if (D_K <= 0) throw ArithError("D_K must be positive");
    bool fundamental = false;
    if (D_K % 4 == 3) fundamental = is_squarefree(D_K);
    else if (D_K % 4 == 0) {
        long m = D_K / 4;
        fundamental = (m % 4 == 1 || m % 4 == 2) && is_squarefree(m);
    }
    if (!fundamental)
        throw ArithError("-" + std::to_string(D_K) + " is not a fundamental discriminant");
    QuadField K;
    K.D = D_K;
    K.Dprime = (D_K % 2 == 1) ? D_K : D_K / 2;
    K.T = K.Dprime;
    K.N = (K.Dprime * K.Dprime + D_K) / 4;
    return K;
}

int QuadField::units_count() const {
    if (D == 3) return 6;
    if (D == 4) return 4;
    return 2;
}

int QuadField::split_type(long q) const {
    long k = kronecker(-D, q);
    return static_cast<int>(k);
}

QuadElem operator+(const QuadElem& a, const QuadElem& b) { return {a.u + b.u, a.v + b.v, a.T, a.N}; }
QuadElem operator-(const QuadElem& a, const QuadElem& b) { return {a.u - b.u, a.v - b.v, a.T, a.N}; }
QuadElem operator-(const QuadElem& a) { return {-a.u, -a.v, a.T, a.N}; }
QuadElem operator*(const QuadElem& a, const QuadElem& b) {
    long T = a.T ? a.T : b.T, N = a.N ? a.N : b.N;
    return {a.u * b.u - N * a.v * b.v, a.u * b.v + a.v * b.u + T * a.v * b.v, T, N};
}
QuadElem operator*(const QuadElem& a, const Rational& c) { return {a.u * c, a.v * c, a.T, a.N}; }
bool operator==(const QuadElem& a, const QuadElem& b) { return a.u == b.u && a.v == b.v; }

QuadElem QuadElem::inverse() const {
    Rational n = norm();
    if (n == 0) throw ArithError("inverse of zero in K");
    return conj() * (1 / n);
}

cplx QuadElem::embed() const {
    double re = T / 2.0, im = std::sqrt(static_cast<double>(4 * N - T * T)) / 2.0;
    return u.get_d() + v.get_d() * cplx(re, im);
}

std::string QuadElem::str() const { return to_string(u) + "+" + to_string(v) + "*theta"; }

// ---------------------------------------------------------------------------
static long join_d(long d1, long d2) {
    if (d1 == 0) return d2;
    if (d2 == 0 || d1 == d2) return d1;
    throw ArithError("mixing different quadratic fields");
}

QuadNum operator+(const QuadNum& x, const QuadNum& y) { return {x.a + y.a, x.b + y.b, join_d(x.d, y.d)}; }
QuadNum operator-(const QuadNum& x, const QuadNum& y) { return {x.a - y.a, x.b - y.b, join_d(x.d, y.d)}; }
QuadNum operator-(const QuadNum& x) { return {-x.a, -x.b, x.d}; }
QuadNum operator*(const QuadNum& x, const QuadNum& y) {
    long d = join_d(x.d, y.d);
    return {x.a * y.a + x.b * y.b * d, x.a * y.b + x.b * y.a, d};
}
QuadNum operator*(const QuadNum& x, long c) { return {x.a * c, x.b * c, x.d}; }
QuadNum operator/(const QuadNum& x, const QuadNum& y) { return x * y.inverse(); }
bool operator==(const QuadNum& x, const QuadNum& y) { return x.a == y.a && x.b == y.b; }

QuadNum QuadNum::inverse() const {
    Rational n = norm();
    if (n == 0) throw ArithError("inverse of zero in Q(sqrt d)");
    return {a / n, -b / n, d};
}

Int QuadNum::residue(long p, int M, const Int& root_value) const {
    Int pm = ipow(Int(p), M);
    Int r = gt::residue(a, p, M);
    if (b != 0) r += gt::residue(b, p, M) * root_value;
    return mod(r, pm);
}

cplx QuadNum::embed(int sign) const {
    cplx r = d < 0 ? cplx(0, std::sqrt(-static_cast<double>(d))) : cplx(std::sqrt(static_cast<double>(d)), 0);
    return a.get_d() + static_cast<double>(sign) * b.get_d() * r;
}

std::string QuadNum::str() const {
    if (b == 0) return to_string(a);
    return to_string(a) + "+" + to_string(b) + "*sqrt(" + std::to_string(d) + ")";
}

// ---------------------------------------------------------------------------
PadicNum::PadicNum(long p_, int M_, const Int& x) : p(p_), M(M_), r(mod(x, ipow(Int(p_), M_))) {}

PadicNum PadicNum::from_rational(long p_, int M_, const Rational& x) { return {p_, M_, gt::residue(x, p_, M_)}; }

Int PadicNum::modulus() const { return ipow(Int(p), M); }

int PadicNum::valuation() const {
    if (r == 0) return M;
    return gt::valuation(r, p);
}

PadicNum PadicNum::inverse() const {
    if (!is_unit()) throw ArithError("inverse of a non-unit p-adic residue");
    return {p, M, inv_mod(r, modulus())};
}

PadicNum PadicNum::with_precision(int M2) const { return {p, std::min(M, M2), r}; }

static void check_compatible(const PadicNum& x, const PadicNum& y) {
    if (x.p != y.p && x.p != 0 && y.p != 0) throw ArithError("mixing p-adic residues for different primes");
}
static long pick_p(const PadicNum& x, const PadicNum& y) { return x.p ? x.p : y.p; }
static int pick_M(const PadicNum& x, const PadicNum& y) {
    if (!x.p) return y.M;
    if (!y.p) return x.M;
    return std::min(x.M, y.M);
}

PadicNum operator+(const PadicNum& x, const PadicNum& y) {
    check_compatible(x, y);
    return {pick_p(x, y), pick_M(x, y), x.r + y.r};
}
PadicNum operator-(const PadicNum& x, const PadicNum& y) {
    check_compatible(x, y);
    return {pick_p(x, y), pick_M(x, y), x.r - y.r};
}
PadicNum operator-(const PadicNum& x) { return {x.p, x.M, -x.r}; }
PadicNum operator*(const PadicNum& x, const PadicNum& y) {
    check_compatible(x, y);
    return {pick_p(x, y), pick_M(x, y), x.r * y.r};
}
PadicNum operator*(const PadicNum& x, long c) { return {x.p, x.M, x.r * c}; }
bool operator==(const PadicNum& x, const PadicNum& y) {
    if (!x.p || !y.p) return x.r == y.r;
    int M = std::min(x.M, y.M);
    Int pm = ipow(Int(x.p), M);
    return mod(x.r - y.r, pm) == 0;
}

// ---------------------------------------------------------------------------
const std::vector<Int>& cyclotomic_polynomial_ref(long m);

std::vector<Int> cyclotomic_polynomial(long m) { return cyclotomic_polynomial_ref(m); }

const std::vector<Int>& cyclotomic_polynomial_ref(long m) {
    static std::recursive_mutex mu;
    static std::map<long, std::vector<Int>> cache;
    std::lock_guard<std::recursive_mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    // Phi_m = (x^m - 1) / prod_{d | m, d < m} Phi_d, computed by exact division.
    std::vector<Int> num(m + 1, 0);
    num[0] = -1;
    num[m] = 1;
    for (long d : divisors(m)) {
        if (d == m) continue;
        const std::vector<Int>& den = cyclotomic_polynomial_ref(d);
        size_t dn = den.size() - 1;
        std::vector<Int> q(num.size() - dn, 0);
        for (size_t i = num.size(); i-- > dn;) {
            Int lead = num[i];
            q[i - dn] = lead;
            for (size_t j = 0; j <= dn; ++j) num[i - dn + j] -= lead * den[j];
        }
        num = q;
    }
    return cache.emplace(m, num).first->second;
}

std::optional<Rational> cyclo_p_valuation(const Cyclo& x, long p) {
    if (x.is_zero()) return std::nullopt;
    long m = x.m;
    auto f = factorize(m);
    if (m == 1) return Rational(valuation(x.c[0], p));
    if (f.size() != 1 || f[0].first != p) throw ArithError("p-valuation needs a p-power conductor");
    Cyclo nrm = Cyclo::constant(Rational(1));
    for (long a = 1; a < m; ++a)
        if (std::gcd(a, m) == 1) nrm = nrm * x.galois(a);
    if (nrm.m != 1) throw ArithError("norm did not descend to Q");
    return Rational(valuation(nrm.c[0], p)) / Rational(euler_phi(m));
}

cplx embed_complex(const Cyclo& x) {
    cplx s = 0;
    for (size_t i = 0; i < x.c.size(); ++i)
        s += x.c[i].get_d() * std::polar(1.0, 2 * M_PI * static_cast<double>(i) / static_cast<double>(x.m));
    return s;
}

cplx embed_complex(const CycloNum<QuadNum>& x, int root_sign) {
    cplx s = 0;
    for (size_t i = 0; i < x.c.size(); ++i)
        s += x.c[i].embed(root_sign) * std::polar(1.0, 2 * M_PI * static_cast<double>(i) / static_cast<double>(x.m));
    return s;
}

std::string cyclo_str(const Cyclo& x) {
    std::ostringstream os;
    os << "[m=" << x.m << ":";
    for (size_t i = 0; i < x.c.size(); ++i) os << (i ? "," : "") << to_string(x.c[i]);
    os << "]";
    return os.str();
}

}  // namespace gt
