// Exact arithmetic: rationals, imaginary quadratic fields, quadratic number
// fields Q(sqrt d), cyclotomic numbers and truncated p-adic residues.
#pragma once

#include <gmpxx.h>

#include <complex>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gt {

using Int = mpz_class;
using Rational = mpq_class;
using cplx = std::complex<double>;

// Raised for inputs that violate a documented precondition.
struct ArithError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Rational rat(long num, long den = 1);
Rational rat(const Int& num, const Int& den);
std::string to_string(const Int& x);
std::string to_string(const Rational& x);
Rational rational_from_string(const std::string& s);

Int ipow(const Int& base, unsigned long e);
Int mod(const Int& a, const Int& m);            // least nonnegative residue
Int inv_mod(const Int& a, const Int& m);        // throws if not invertible
Int powmod(const Int& a, const Int& e, const Int& m);
int valuation(const Int& x, long p);            // x != 0
int valuation(const Rational& x, long p);       // x != 0
bool is_prime(long n);
std::vector<long> prime_factors(long n);        // distinct, increasing
std::vector<std::pair<long, int>> factorize(long n);
bool is_squarefree(long n);
long kronecker(long a, long n);                 // Kronecker symbol (a/n), n > 0
long euler_phi(long n);
std::vector<long> divisors(long n);
// Reduce a rational a/b with p not dividing b to Z/p^M.
Int residue(const Rational& x, long p, int M);
// Square root of a unit square a modulo p^M (least nonnegative root mod p lifted;
// for p = 2 the root congruent to 1 mod 4 is lifted).  Throws if a is not a
// unit square in Z_p.
Int sqrt_mod_prime_power(const Int& a, long p, int M);
bool is_unit_square(const Rational& a, long p);   // a in (Z_p^x)^2

// ---------------------------------------------------------------------------
// Imaginary quadratic fields K = Q(sqrt(-D_K)) with O_K = Z + Z theta.
struct QuadField {
    long D = 0;        // D_K > 0, -D_K fundamental
    long Dprime = 0;   // D' = D_K (odd) or D_K / 2 (even)
    long T = 0;        // theta + theta-bar
    long N = 0;        // theta * theta-bar
    static QuadField make(long D_K);
    int units_count() const;           // #O_K^x
    int u_K() const { return units_count() / 2; }
    int split_type(long q) const;      // 1 split, -1 inert, 0 ramified
    bool operator==(const QuadField& o) const { return D == o.D; }
};

struct QuadElem {
    Rational u, v;     // u + v theta
    long T = 0, N = 0; // trace and norm of theta
    QuadElem() = default;
    QuadElem(const QuadField& K, Rational u_, Rational v_ = 0)
        : u(std::move(u_)), v(std::move(v_)), T(K.T), N(K.N) {}
    QuadElem(Rational u_, Rational v_, long T_, long N_)
        : u(std::move(u_)), v(std::move(v_)), T(T_), N(N_) {}
    QuadElem conj() const { return {u + v * T, -v, T, N}; }
    Rational norm() const { return u * u + T * u * v + N * v * v; }
    Rational trace() const { return 2 * u + T * v; }
    bool is_zero() const { return u == 0 && v == 0; }
    bool is_integral() const { return u.get_den() == 1 && v.get_den() == 1; }
    QuadElem inverse() const;
    cplx embed() const;   // theta -> (D' + i sqrt(D_K)) / 2
    std::string str() const;
};
QuadElem operator+(const QuadElem& a, const QuadElem& b);
QuadElem operator-(const QuadElem& a, const QuadElem& b);
QuadElem operator-(const QuadElem& a);
QuadElem operator*(const QuadElem& a, const QuadElem& b);
QuadElem operator*(const QuadElem& a, const Rational& c);
bool operator==(const QuadElem& a, const QuadElem& b);

// ---------------------------------------------------------------------------
// Q(sqrt d) for a non-square integer d: elements a + b r with r^2 = d.
struct QuadNum {
    Rational a, b;
    long d = 0;   // 0 means "plain rational", compatible with every d
    QuadNum() = default;
    QuadNum(long x) : a(x) {}
    QuadNum(Rational x) : a(std::move(x)) {}
    QuadNum(Rational x, Rational y, long d_) : a(std::move(x)), b(std::move(y)), d(d_) {
        if (b == 0) d = 0;
    }
    static QuadNum root(long d_) { return {0, 1, d_}; }
    QuadNum conj() const { return {a, -b, d}; }
    Rational norm() const { return a * a - b * b * d; }
    bool is_zero() const { return a == 0 && b == 0; }
    bool is_rational() const { return b == 0; }
    QuadNum inverse() const;
    // image under r -> root_value in Z/p^M
    Int residue(long p, int M, const Int& root_value) const;
    cplx embed(int sign = 1) const;   // r -> sign * sqrt(d) (principal branch)
    std::string str() const;
};
QuadNum operator+(const QuadNum& x, const QuadNum& y);
QuadNum operator-(const QuadNum& x, const QuadNum& y);
QuadNum operator-(const QuadNum& x);
QuadNum operator*(const QuadNum& x, const QuadNum& y);
QuadNum operator/(const QuadNum& x, const QuadNum& y);
QuadNum operator*(const QuadNum& x, long c);
bool operator==(const QuadNum& x, const QuadNum& y);
inline bool operator!=(const QuadNum& x, const QuadNum& y) { return !(x == y); }

// ---------------------------------------------------------------------------
// Residues modulo p^M.  The precision is absolute: x is known modulo p^M.
struct PadicNum {
    long p = 0;
    int M = 0;
    Int r;   // in [0, p^M)
    PadicNum() = default;
    PadicNum(long p_, int M_, const Int& x);
    static PadicNum from_rational(long p_, int M_, const Rational& x);
    Int modulus() const;
    bool is_zero() const { return r == 0; }
    int valuation() const;   // returns M when the residue is 0
    bool is_unit() const { return valuation() == 0; }
    PadicNum inverse() const;   // requires a unit
    PadicNum with_precision(int M2) const;   // M2 <= M
    std::string str() const { return to_string(r); }
};
PadicNum operator+(const PadicNum& x, const PadicNum& y);
PadicNum operator-(const PadicNum& x, const PadicNum& y);
PadicNum operator-(const PadicNum& x);
PadicNum operator*(const PadicNum& x, const PadicNum& y);
PadicNum operator*(const PadicNum& x, long c);
bool operator==(const PadicNum& x, const PadicNum& y);
inline bool operator!=(const PadicNum& x, const PadicNum& y) { return !(x == y); }

// ---------------------------------------------------------------------------
// Cyclotomic numbers.
std::vector<Int> cyclotomic_polynomial(long m);   // coefficients, low degree first

inline Rational operator*(const Rational& x, long c) { return x * Rational(c); }

template <class R>
struct CycloNum {
    long m = 1;               // conductor
    std::vector<R> c;         // length phi(m), power basis of zeta_m

    CycloNum() = default;
    CycloNum(long m_, std::vector<R> coeffs) : m(m_), c(std::move(coeffs)) { reduce_from(c); normalize(); }
    // a * zeta_m^e
    static CycloNum monomial(long m_, long e, const R& a) {
        long ee = ((e % m_) + m_) % m_;
        std::vector<R> v(ee + 1, a - a);
        v[ee] = a;
        return CycloNum(m_, std::move(v));
    }
    static CycloNum constant(const R& a) { return CycloNum(1, {a}); }

    R zero() const { return c[0] - c[0]; }
    bool is_zero() const {
        for (auto& x : c)
            if (!(x == zero())) return false;
        return true;
    }
    // Lift to conductor M (a multiple of m).
    CycloNum lift(long M) const {
        if (M == m) return *this;
        if (M % m != 0) throw ArithError("cyclotomic lift to non-multiple conductor");
        long s = M / m;
        std::vector<R> v(static_cast<size_t>((long)c.size() - 1) * s + 1, zero());
        for (size_t i = 0; i < c.size(); ++i) v[i * s] = c[i];
        CycloNum r;
        r.m = M;
        r.c = std::move(v);
        r.reduce_from(r.c);
        return r;
    }
    // sigma_a: zeta -> zeta^a
    CycloNum galois(long a) const {
        long aa = ((a % m) + m) % m;
        std::vector<R> v(m, zero());
        for (size_t i = 0; i < c.size(); ++i) v[(aa * (long)i) % m] = v[(aa * (long)i) % m] + c[i];
        return CycloNum(m, std::move(v));
    }

    // Power-basis coefficients at conductor m after reducing a polynomial.
    void reduce_from(std::vector<R> poly) {
        const auto& phi = cyclotomic_polynomial(m);
        size_t deg = phi.size() - 1;
        R z = poly.empty() ? R() : poly[0] - poly[0];
        // first fold exponents modulo m
        if ((long)poly.size() > m) {
            std::vector<R> f(m, z);
            for (size_t i = 0; i < poly.size(); ++i) f[i % m] = f[i % m] + poly[i];
            poly = std::move(f);
        }
        for (size_t i = poly.size(); i-- > deg;) {
            if (poly[i] == z) continue;
            R lead = poly[i];
            for (size_t j = 0; j <= deg; ++j) {
                long cj = phi[j].get_si();
                if (cj != 0) poly[i - deg + j] = poly[i - deg + j] - lead * cj;
            }
        }
        poly.resize(deg, z);
        c = std::move(poly);
    }
    // Eager conductor lowering for prime-power conductors.
    void normalize() {
        for (;;) {
            if (m == 1) return;
            auto f = factorize(m);
            if (f.size() != 1) return;
            long p = f[0].first;
            bool ok = true;
            for (size_t i = 0; i < c.size() && ok; ++i)
                if (i % p != 0 && !(c[i] == zero())) ok = false;
            if (!ok) return;
            // Check the element really lies in Q(zeta_{m/p}): coefficients at p | i
            // with i < phi(m) already give the canonical form there when p^2 | m;
            // for m = p the element is c[0] (a constant).
            std::vector<R> v;
            for (size_t i = 0; i < c.size(); i += p) v.push_back(c[i]);
            long m2 = m / p;
            CycloNum low;
            low.m = m2;
            low.c = v;
            low.reduce_from(v);
            if (!(low.lift(m).c == c)) return;
            m = m2;
            c = low.c;
        }
    }
};

template <class R>
long common_conductor(const CycloNum<R>& x, const CycloNum<R>& y) {
    long g = std::gcd(x.m, y.m);
    return x.m / g * y.m;
}
template <class R>
CycloNum<R> operator+(const CycloNum<R>& x, const CycloNum<R>& y) {
    long M = common_conductor(x, y);
    auto a = x.lift(M), b = y.lift(M);
    for (size_t i = 0; i < a.c.size(); ++i) a.c[i] = a.c[i] + b.c[i];
    a.normalize();
    return a;
}
template <class R>
CycloNum<R> operator-(const CycloNum<R>& x) {
    auto a = x;
    for (auto& v : a.c) v = a.zero() - v;
    return a;
}
template <class R>
CycloNum<R> operator-(const CycloNum<R>& x, const CycloNum<R>& y) { return x + (-y); }
template <class R>
CycloNum<R> operator*(const CycloNum<R>& x, const CycloNum<R>& y) {
    long M = common_conductor(x, y);
    auto a = x.lift(M), b = y.lift(M);
    std::vector<R> prod(a.c.size() + b.c.size() - 1, a.zero());
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == a.zero()) continue;
        for (size_t j = 0; j < b.c.size(); ++j) prod[i + j] = prod[i + j] + a.c[i] * b.c[j];
    }
    CycloNum<R> r;
    r.m = M;
    r.reduce_from(std::move(prod));
    r.normalize();
    return r;
}
template <class R>
CycloNum<R> operator*(const CycloNum<R>& x, const R& s) {
    auto a = x;
    for (auto& v : a.c) v = v * s;
    a.normalize();
    return a;
}
template <class R>
bool operator==(const CycloNum<R>& x, const CycloNum<R>& y) {
    long M = common_conductor(x, y);
    return x.lift(M).c == y.lift(M).c;
}

using Cyclo = CycloNum<Rational>;

// ord_p on Q(zeta_{p^r}) normalised by ord_p(p) = 1; nullopt for zero.
std::optional<Rational> cyclo_p_valuation(const Cyclo& x, long p);
// complex image under zeta_m -> exp(2 pi i / m)
cplx embed_complex(const Cyclo& x);
cplx embed_complex(const CycloNum<QuadNum>& x, int root_sign = 1);
std::string cyclo_str(const Cyclo& x);

}  // namespace gt
