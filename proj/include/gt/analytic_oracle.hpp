// Complex-analytic side: Dirichlet coefficients of L(f/K, chi, s), central
// values through a smoothed approximate functional equation, L(1, Ad) and the
// Petersson norm, root numbers, and independent coefficient oracles (eta
// products, the Eichler-Selberg trace formula).
//
// L-functions are handled in the unitary normalization: an L-series is given
// by coefficients b_n, a conductor Q and archimedean shifts mu_j, with
// Lambda(s) = Q^{s/2} prod_j Gamma_R(s + mu_j) L(s) = eps conj(Lambda)(1 - s).
#pragma once

#include "gt/exact_arith.hpp"

#include <functional>
#include <map>
#include <optional>

namespace gt {

cplx log_gamma(cplx z);

// ---------------------------------------------------------------------------
struct NewformData {
    long N = 1;
    int k = 2;
    std::vector<long> a;          // a[n] for 1 <= n <= bound(); a[0] unused
    std::map<long, int> eps;      // eps(pi_q) = -q^{(2-k)/2} a_q for q || N
    long bound() const { return static_cast<long>(a.size()) - 1; }
    long coefficient(long n) const;
    // sign of the functional equation of L(f, s): (-1)^{k/2} prod_{q | N} eps_q
    int root_number() const;
};
// All a_n (n <= X) from the prime coefficients by multiplicativity and the
// Hecke recursion a_{q^{e+1}} = a_q a_{q^e} - chi_0(q) q^{k-1} a_{q^{e-1}}.
NewformData newform_from_primes(long N, int k, const std::function<long(long)>& a_prime, long X);
// q-expansion of prod_i eta(d_i z)^{e_i} when the q-shift is exactly 1.
std::vector<long> eta_product(const std::vector<std::pair<long, int>>& factors, long X);
// Multiplicativity and the prime-power recursion on the stored range.
bool hecke_consistent(const NewformData& f);

// Trace of T_n on S_k(Gamma_0(N)) (N squarefree, gcd(n, N) = 1).
Rational eichler_selberg_trace(long N, int k, long n);
// Weighted class number H(D) = h(D) / (w(D)/2) of discriminant D < 0.
Rational weighted_class_number(long D);

// ---------------------------------------------------------------------------
struct LSeries {
    std::string label;
    double conductor = 1;
    std::vector<double> mu;   // shifts of Gamma_R factors
    // unitary coefficients b_1..b_X for a requested X (index 0 unused)
    std::function<std::vector<cplx>(long)> coefficients;
};
struct LValue {
    cplx value;
    double error_estimate = 0;
    long cutoff = 0;
    cplx root_number{1, 0};
    std::string to_json() const;
};
// Smoothed AFE at real s.  The root number is solved from two different
// splittings of the functional equation (or fixed if given) and must come out
// of absolute value 1; the error estimate compares further splittings.
// Throws PrecisionError if the requested tolerance is not reached.
// cutoff_scale > 1 sums further than the tolerance requires (convergence checks).
LValue evaluate_l(const LSeries& L, double s, double tol = 1e-10, std::optional<int> eps = std::nullopt,
                  double cutoff_scale = 1.0);
// V_s(y) = (1 / 2 pi i) int_(2) gamma(s + u) / gamma(s) y^{-u} du / u.
double afe_kernel(const std::vector<double>& mu, double s, double y);

LSeries modular_l_series(const NewformData& f);
// f (x) eta for the quadratic character of discriminant -D (gcd(N, D) = 1).
LSeries twisted_l_series(const NewformData& f, long D);
// Symmetric square (adjoint) of f, N squarefree.
LSeries adjoint_l_series(const NewformData& f);

// A finite-order character of the ideals of K = Q(sqrt(-D)) (h_K = 1),
// given on generators; ramified exactly at the primes above p when
// conductor_exponent > 0 (conductor p^s O_K).
struct IdealCharacter {
    long p = 0;
    int conductor_exponent = 0;
    std::function<cplx(const QuadElem&)> value;
    static IdealCharacter trivial();
};
// A generator of norm q (q split or ramified in K).
QuadElem prime_generator(const QuadField& K, long q);
// Classical-normalization coefficients b_n, n <= X, of L(f/K, chi, s).
std::vector<cplx> dirichlet_coeffs(const NewformData& f, const QuadField& K, const IdealCharacter& chi, long X);
LSeries base_change_l_series(const NewformData& f, const QuadField& K, const IdealCharacter& chi);
// L(f/K, chi, k/2).
LValue central_value(const NewformData& f, const QuadField& K, const IdealCharacter& chi, double tol = 1e-10);

// ---------------------------------------------------------------------------
// Local norms: 1 for q not dividing N, eps(pi_q) / (1 + 1/q) for q || N
// (unramified special), 2^{-k-1} at infinity (q = 0).
double local_norm(const NewformData& f, long q);
struct PeterssonData {
    LValue adjoint_finite;       // L(1, Ad pi) without the archimedean factor
    double adjoint_complete = 0; // times L(1, Ad pi_infinity) = 2^{1-k} pi^{-k-1} (k-1)!
    double norm = 0;             // ||f||_{Gamma_0(N)}
};
// ||f|| = N L(1, Ad pi) 2^{-k} prod_{q | N_B} (1 + 1/q) ||phi||_q / eps(pi_q),
// N_B = N / N^-.
PeterssonData petersson_norm_numeric(const NewformData& f, long n_minus, double tol = 1e-9);

}  // namespace gt
