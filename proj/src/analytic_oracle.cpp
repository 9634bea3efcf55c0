#include "gt/analytic_oracle.hpp"

#include "gt/errors.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace gt {

namespace {

const double PI = 3.14159265358979323846;

std::vector<long> smallest_prime_factor(long X) {
    std::vector<long> spf(X + 1, 0);
    for (long i = 2; i <= X; ++i)
        if (spf[i] == 0)
            for (long j = i; j <= X; j += i)
                if (spf[j] == 0) spf[j] = i;
    return spf;
}

// Series 1 / E(T) up to T^deg for a local Euler polynomial E with E(0) = 1.
std::vector<cplx> invert_local(const std::vector<cplx>& E, int deg) {
    std::vector<cplx> c(deg + 1, 0.0);
    c[0] = 1.0;
    for (int j = 1; j <= deg; ++j) {
        cplx s = 0;
        for (int i = 1; i < static_cast<int>(E.size()) && i <= j; ++i) s -= E[i] * c[j - i];
        c[j] = s;
    }
    return c;
}

// Multiplicative extension of local series c_q (indexed by exponent) to n <= X.
std::vector<cplx> multiplicative(long X, const std::function<std::vector<cplx>(long q, int deg)>& local) {
    auto spf = smallest_prime_factor(X);
    std::vector<cplx> b(X + 1, 0.0);
    if (X >= 1) b[1] = 1.0;
    std::map<long, std::vector<cplx>> cache;
    for (long n = 2; n <= X; ++n) {
        long q = spf[n], m = n;
        int e = 0;
        while (m % q == 0) m /= q, ++e;
        auto it = cache.find(q);
        if (it == cache.end()) {
            int deg = 0;
            for (long t = 1; t <= X / q; t *= q) ++deg;
            it = cache.emplace(q, local(q, deg)).first;
        }
        b[n] = it->second[e] * b[m];
    }
    return b;
}

long ipow(long a, int e) {
    long r = 1;
    for (int i = 0; i < e; ++i) r *= a;
    return r;
}

bool squarefree(long n) {
    for (auto& [q, e] : factorize(n))
        if (e > 1) return false;
    return true;
}

// Mellin-Barnes kernel on the line Re u = c, discretized by the trapezoid rule.
struct Kernel {
    double c = 2, h = 0.2;
    std::vector<cplx> g;   // gamma(s + u_j) / gamma(s) / u_j

    Kernel(const std::vector<double>& mu, double s) {
        double decay = PI * static_cast<double>(mu.size()) / 4;   // |gamma(s + c + it)| ~ exp(-decay |t|)
        double tmax = 60.0 / decay + 8;
        auto lg = [&](cplx z) {
            cplx r = 0;
            for (double m : mu) r += -(z + m) / 2.0 * std::log(PI) + log_gamma((z + m) / 2.0);
            return r;
        };
        cplx l0 = lg(cplx(s, 0));
        for (double t = 0; t <= tmax; t += h) {
            cplx u(c, t);
            g.push_back(std::exp(lg(s + u) - l0) / u);
        }
    }
    double operator()(double y) const {
        double ly = std::log(y);
        cplx rot = std::exp(cplx(0, -h * ly)), w = 1.0;
        double acc = 0.5 * g[0].real();
        for (size_t j = 1; j < g.size(); ++j) {
            w *= rot;
            acc += (g[j] * w).real();
        }
        return acc * h / PI * std::exp(-c * ly);
    }
};

double kernel_cutoff(const Kernel& V, double target) {
    double y = 0.25;
    while (std::abs(V(y)) > target || std::abs(V(2 * y)) > target) {
        y *= 1.5;
        if (y > 1e6) throw PrecisionError("approximate functional equation kernel does not decay");
    }
    return y;
}

}  // namespace

// ---------------------------------------------------------------------------
cplx log_gamma(cplx z) {
    cplx shift = 0;
    while (z.real() < 12) {
        shift += std::log(z);
        z += 1.0;
    }
    static const double B[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730, 7.0 / 6, -3617.0 / 510};
    cplx r = (z - 0.5) * std::log(z) - z + 0.5 * std::log(2 * PI);
    cplx zp = z, z2 = z * z;
    for (int n = 1; n <= 8; ++n) {
        r += B[n - 1] / (2.0 * n * (2 * n - 1)) / zp;
        zp *= z2;
    }
    return r - shift;
}

// ---------------------------------------------------------------------------
long NewformData::coefficient(long n) const {
    if (n < 1 || n > bound()) throw ConfigError("coefficient index outside the computed range");
    return a[n];
}

int NewformData::root_number() const {
    int s = (k / 2) % 2 == 0 ? 1 : -1;
    for (auto& [q, e] : eps) s *= e;
    return s;
}

NewformData newform_from_primes(long N, int k, const std::function<long(long)>& a_prime, long X) {
    if (k < 2 || k % 2) throw ConfigError("weight must be even and at least 2");
    NewformData f;
    f.N = N;
    f.k = k;
    for (auto& [q, e] : factorize(N)) {
        if (e > 1) continue;
        long aq = a_prime(q);
        long s = ipow(q, (k - 2) / 2);
        if (aq != s && aq != -s) throw ConfigError("a_q for q || N must be +-q^{(k-2)/2}");
        f.eps[q] = aq == s ? -1 : 1;
    }
    auto spf = smallest_prime_factor(X);
    f.a.assign(X + 1, 0);
    if (X >= 1) f.a[1] = 1;
    for (long n = 2; n <= X; ++n) {
        long q = spf[n], m = n;
        int e = 0;
        while (m % q == 0) m /= q, ++e;
        if (m > 1) {
            f.a[n] = f.a[n / m] * f.a[m];
            continue;
        }
        if (e == 1) {
            f.a[n] = a_prime(q);
            continue;
        }
        long chi = N % q == 0 ? 0 : ipow(q, k - 1);
        f.a[n] = f.a[q] * f.a[n / q] - chi * f.a[n / q / q];
    }
    return f;
}

std::vector<long> eta_product(const std::vector<std::pair<long, int>>& factors, long X) {
    long shift = 0;
    for (auto [d, e] : factors) shift += d * e;
    if (shift != 24) throw ConfigError("eta product must have q-shift exactly 1");
    std::vector<long> c(X + 1, 0);
    if (X >= 1) c[1] = 1;
    for (auto [d, e] : factors)
        for (int rep = 0; rep < e; ++rep)
            for (long s = d; s <= X; s += d)
                for (long i = X; i >= s; --i) c[i] -= c[i - s];
    return c;
}

bool hecke_consistent(const NewformData& f) {
    long X = f.bound();
    for (long m = 2; m <= X; ++m)
        for (long n = 2; m * n <= X; ++n)
            if (std::gcd(m, n) == 1 && f.a[m * n] != f.a[m] * f.a[n]) return false;
    for (long q = 2; q * q <= X; ++q) {
        if (!is_prime(q)) continue;
        long chi = f.N % q == 0 ? 0 : ipow(q, f.k - 1);
        for (long t = q * q; t <= X; t *= q)
            if (f.a[t] != f.a[q] * f.a[t / q] - chi * f.a[t / q / q]) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
Rational weighted_class_number(long D) {
    if (D >= 0 || (((D % 4) + 4) % 4 > 1)) throw ConfigError("not a negative discriminant");
    long h = 0;
    long A = -D;
    for (long a = 1; 3 * a * a <= A; ++a)
        for (long b = -a + 1; b <= a; ++b) {
            long num = b * b - D;
            if (num % (4 * a) != 0) continue;
            long c = num / (4 * a);
            if (c < a) continue;
            if (a == c && b < 0) continue;
            if (std::gcd(std::gcd(a, std::labs(b)), c) != 1) continue;
            ++h;
        }
    if (D == -3) return rat(h, 3);
    if (D == -4) return rat(h, 2);
    return Rational(h);
}

Rational eichler_selberg_trace(long N, int k, long n) {
    if (!squarefree(N)) throw ConfigError("trace formula implemented for squarefree level");
    if (std::gcd(n, N) != 1) throw ConfigError("trace formula needs gcd(n, N) = 1");
    if (k < 2 || k % 2) throw ConfigError("weight must be even and at least 2");
    long psi = N;
    for (auto& [q, e] : factorize(N)) psi = psi / q * (q + 1);
    long omega = static_cast<long>(factorize(N).size());
    Rational tr = 0;
    // identity term
    long r = static_cast<long>(std::llround(std::sqrt(static_cast<double>(n))));
    if (r * r == n) tr += rat(k - 1, 12) * Rational(psi) * Rational(ipow(r, k - 2));
    // elliptic terms
    Rational ell = 0;
    for (long t = 0; t * t < 4 * n; ++t) {
        // u_{k-1} for rho + rhobar = t, rho rhobar = n
        Int u0 = 0, u1 = 1;
        for (int j = 1; j < k - 1; ++j) {
            Int u2 = Int(t) * u1 - Int(n) * u0;
            u0 = u1;
            u1 = u2;
        }
        long Delta = t * t - 4 * n;
        Rational inner = 0;
        for (long f = 1; f * f <= -Delta; ++f) {
            if (Delta % (f * f) != 0) continue;
            long d = Delta / (f * f);
            long d4 = ((d % 4) + 4) % 4;
            if (d4 != 0 && d4 != 1) continue;
            if (std::gcd(f, N) != 1) throw ConfigError("trace formula: conductor f meets the level");
            long roots = 0;
            for (long x = 0; x < N; ++x)
                if (((x * x - t * x + n) % N + N) % N == 0) ++roots;
            inner += weighted_class_number(d) * Rational(roots);
        }
        ell += Rational(u1) * inner * Rational(t == 0 ? 1 : 2);
    }
    tr -= ell / 2;
    // hyperbolic terms
    Rational hyp = 0;
    for (long d = 1; d <= n; ++d)
        if (n % d == 0) hyp += Rational(ipow(std::min(d, n / d), k - 1));
    tr -= hyp * Rational(ipow(2, static_cast<int>(omega))) / 2;
    if (k == 2) {
        long s = 0;
        for (long t = 1; t <= n; ++t)
            if (n % t == 0 && std::gcd(N, n / t) == 1) s += t;
        tr += Rational(s);
    }
    return tr;
}

// ---------------------------------------------------------------------------
double afe_kernel(const std::vector<double>& mu, double s, double y) { return Kernel(mu, s)(y); }

std::string LValue::to_json() const {
    std::ostringstream o;
    o.precision(17);
    o << "{\"value\": " << value.real() << ", \"value_imag\": " << value.imag() << ", \"error_estimate\": " << error_estimate
      << ", \"cutoff\": " << cutoff << ", \"root_number\": " << root_number.real() << "}";
    return o.str();
}

LValue evaluate_l(const LSeries& L, double s, double tol, std::optional<int> eps, double cutoff_scale) {
    Kernel V1(L.mu, s), V2(L.mu, 1 - s);
    const double xs[] = {1.0, 1.25, 0.8};
    double sq = std::sqrt(L.conductor);
    double target = tol * 1e-3;
    double y1 = kernel_cutoff(V1, target) * cutoff_scale, y2 = kernel_cutoff(V2, target) * cutoff_scale;
    long X = static_cast<long>(std::ceil(std::max(y1 * 1.25, y2 / 0.8) * sq)) + 2;
    auto b = L.coefficients(X);
    // prefactor Q^{1/2 - s} gamma(1 - s) / gamma(s)
    cplx lg = 0;
    for (double m : L.mu) lg += log_gamma((1 - s + m) / 2.0) - log_gamma((s + m) / 2.0);
    // pi^{-(1 - s + mu)/2} / pi^{-(s + mu)/2} = pi^{(2s - 1)/2} per factor
    double lp = (0.5 - s) * std::log(L.conductor) + static_cast<double>(L.mu.size()) * (2 * s - 1) / 2 * std::log(PI);
    double pref = std::exp(lp + lg.real());
    cplx phase = std::exp(cplx(0, lg.imag()));
    auto sums = [&](double x) {
        cplx S1 = 0, S2 = 0;
        for (long n = 1; n <= X; ++n) {
            if (b[n] == 0.0) continue;
            double dn = static_cast<double>(n);
            double v1 = n / (x * sq) > y1 ? 0 : V1(n / (x * sq));
            double v2 = n * x / sq > y2 ? 0 : V2(n * x / sq);
            S1 += b[n] * std::pow(dn, -s) * v1;
            S2 += std::conj(b[n]) * std::pow(dn, s - 1) * v2;
        }
        return std::pair<cplx, cplx>{S1, S2 * pref * phase};
    };
    auto [a1, a2] = sums(xs[0]);
    auto [c1, c2] = sums(xs[1]);
    auto [d1, d2] = sums(xs[2]);
    cplx e;
    if (eps) {
        e = static_cast<double>(*eps);
    } else {
        cplx den = c2 - a2;
        if (std::abs(den) < 1e-12 * (std::abs(a2) + 1e-300))
            throw PrecisionError("root number not determined by the functional equation");
        e = (a1 - c1) / den;
        if (std::abs(std::abs(e) - 1) > std::max(1e-4, 100 * tol))
            throw PrecisionError("numerical root number is not of absolute value 1: " + std::to_string(std::abs(e)));
        if (std::abs(e - 1.0) < 1e-3) e = 1.0;
        if (std::abs(e + 1.0) < 1e-3) e = -1.0;
    }
    LValue r;
    r.value = a1 + e * a2;
    cplx v2 = c1 + e * c2, v3 = d1 + e * d2;
    r.error_estimate = std::max(std::abs(r.value - v2), std::abs(r.value - v3));
    r.cutoff = X;
    r.root_number = e;
    if (r.error_estimate > std::max(tol, 1e-15) * std::max(1.0, std::abs(r.value)))
        throw PrecisionError("L-value self-consistency " + std::to_string(r.error_estimate) + " above tolerance");
    return r;
}

// ---------------------------------------------------------------------------
LSeries modular_l_series(const NewformData& f) {
    LSeries L;
    L.label = "L(f, s)";
    L.conductor = static_cast<double>(f.N);
    double a = (f.k - 1) / 2.0;
    L.mu = {a, a + 1};
    L.coefficients = [f](long X) {
        if (X > f.bound()) throw PrecisionError("not enough Fourier coefficients: need " + std::to_string(X));
        std::vector<cplx> b(X + 1, 0.0);
        for (long n = 1; n <= X; ++n) b[n] = f.a[n] / std::pow(static_cast<double>(n), (f.k - 1) / 2.0);
        return b;
    };
    return L;
}

LSeries twisted_l_series(const NewformData& f, long D) {
    if (std::gcd(f.N, D) != 1) throw ConfigError("twist needs gcd(N, D) = 1");
    LSeries L = modular_l_series(f);
    L.label = "L(f x eta, s)";
    L.conductor = static_cast<double>(f.N) * D * D;
    auto base = L.coefficients;
    L.coefficients = [base, D](long X) {
        auto b = base(X);
        for (long n = 1; n <= X; ++n) b[n] *= static_cast<double>(kronecker(-D, n));
        return b;
    };
    return L;
}

LSeries adjoint_l_series(const NewformData& f) {
    if (!squarefree(f.N)) throw ConfigError("adjoint L-function implemented for squarefree level");
    LSeries L;
    L.label = "L(s, Ad)";
    L.conductor = static_cast<double>(f.N) * f.N;
    L.mu = {1.0, static_cast<double>(f.k - 1), static_cast<double>(f.k)};
    L.coefficients = [f](long X) {
        if (X > f.bound()) throw PrecisionError("not enough Fourier coefficients: need " + std::to_string(X));
        return multiplicative(X, [&](long q, int deg) {
            double dq = static_cast<double>(q);
            if (f.N % q == 0) return invert_local({1.0, -1.0 / dq}, deg);
            double au2 = static_cast<double>(f.a[q]) * f.a[q] / std::pow(dq, f.k - 1);
            return invert_local({1.0, -(au2 - 1), au2 - 1, -1.0}, deg);
        });
    };
    return L;
}

IdealCharacter IdealCharacter::trivial() {
    IdealCharacter c;
    c.value = [](const QuadElem&) { return cplx(1, 0); };
    return c;
}

QuadElem prime_generator(const QuadField& K, long q) {
    if (K.split_type(q) < 0) throw ConfigError("prime is inert in K");
    // u^2 + T u v + N v^2 = q: discriminant in u is (T^2 - 4N) v^2 + 4q = 4q - D v^2
    for (long v = 1; K.D * v * v <= 4 * q; ++v) {
        long disc = 4 * q - K.D * v * v;
        long r = static_cast<long>(std::llround(std::sqrt(static_cast<double>(disc))));
        for (long rr = std::max(0L, r - 1); rr <= r + 1; ++rr)
            if (rr * rr == disc && (rr - K.T * v) % 2 == 0) return QuadElem(K, (rr - K.T * v) / 2, v);
    }
    throw ConfigError("no generator of norm q (class number > 1?)");
}

std::vector<cplx> dirichlet_coeffs(const NewformData& f, const QuadField& K, const IdealCharacter& chi, long X) {
    if (X > f.bound()) throw PrecisionError("not enough Fourier coefficients: need " + std::to_string(X));
    if (std::gcd(f.N, K.D) != 1) throw ConfigError("base change implemented for gcd(N, D_K) = 1");
    if (chi.conductor_exponent > 0 && f.N % chi.p == 0) throw ConfigError("character ramified at a prime of N");
    return multiplicative(X, [&](long q, int deg) {
        double dq = static_cast<double>(q);
        double aq = static_cast<double>(f.a[q]);
        double w = f.N % q == 0 ? 0.0 : std::pow(dq, f.k - 1);
        auto gl2 = [&](cplx c) { return std::vector<cplx>{1.0, -aq * c, w * c * c}; };
        if (chi.conductor_exponent > 0 && q == chi.p) return invert_local({1.0}, deg);
        int st = K.split_type(q);
        if (st < 0) return invert_local({1.0, 0.0, -(aq * aq - 2 * w), 0.0, w * w}, deg);
        QuadElem pi = prime_generator(K, q);
        if (st == 0) return invert_local(gl2(chi.value(pi)), deg);
        auto e1 = gl2(chi.value(pi)), e2 = gl2(chi.value(pi.conj()));
        std::vector<cplx> e(5, 0.0);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) e[i + j] += e1[i] * e2[j];
        return invert_local(e, deg);
    });
}

LSeries base_change_l_series(const NewformData& f, const QuadField& K, const IdealCharacter& chi) {
    LSeries L;
    L.label = "L(f/K, chi, s)";
    double a = (f.k - 1) / 2.0;
    L.mu = {a, a + 1, a, a + 1};
    double pc = chi.conductor_exponent > 0 ? std::pow(static_cast<double>(chi.p), 4.0 * chi.conductor_exponent) : 1.0;
    L.conductor = static_cast<double>(f.N) * f.N * K.D * K.D * pc;
    L.coefficients = [f, K, chi](long X) {
        auto b = dirichlet_coeffs(f, K, chi, X);
        for (long n = 1; n <= X; ++n) b[n] /= std::pow(static_cast<double>(n), (f.k - 1) / 2.0);
        return b;
    };
    return L;
}

LValue central_value(const NewformData& f, const QuadField& K, const IdealCharacter& chi, double tol) {
    return evaluate_l(base_change_l_series(f, K, chi), 0.5, tol);
}

// ---------------------------------------------------------------------------
double local_norm(const NewformData& f, long q) {
    if (q == 0) return std::pow(2.0, -f.k - 1);
    if (f.N % q != 0) return 1.0;
    if (f.N % (q * q) == 0) throw ConfigError("local norm at q^2 | N not available");
    return f.eps.at(q) / (1.0 + 1.0 / q);
}

PeterssonData petersson_norm_numeric(const NewformData& f, long n_minus, double tol) {
    if (f.N % n_minus != 0) throw ConfigError("N^- must divide N");
    PeterssonData P;
    P.adjoint_finite = evaluate_l(adjoint_l_series(f), 1.0, tol, 1);
    double fact = 1;
    for (int i = 2; i < f.k; ++i) fact *= i;
    P.adjoint_complete = P.adjoint_finite.value.real() * std::pow(2.0, 1 - f.k) * std::pow(PI, -f.k - 1) * fact;
    double corr = 1;
    for (auto& [q, e] : factorize(f.N / n_minus)) corr *= (1.0 + 1.0 / q) * local_norm(f, q) / f.eps.at(q);
    P.norm = static_cast<double>(f.N) * P.adjoint_complete / std::pow(2.0, f.k) * corr;
    return P;
}

}  // namespace gt
