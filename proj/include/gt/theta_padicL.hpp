// Theta elements Theta_n^{[m]}(f^dagger) in K(sqrt d)[G_n], branch projection,
// character evaluation, the p-adic multiplier e_p, congruences, the
// functional equation and finite-level mu / lambda invariants.
//
// Coefficients are exact elements of K (x) Q(sqrt d) (Q(sqrt d) holds the
// U_p-eigenvalue alpha_p); the common factor sqrt(beta)^{-m} of weight m is
// kept apart and only enters through the p-adic and complex embeddings.
#pragma once

#include "gt/cm_tower.hpp"

namespace gt {

// u + v theta with u, v in Q(sqrt d).
struct KQ {
    QuadNum u, v;
    long T = 0, N = 0;
    KQ() = default;
    KQ(long x) : u(x) {}
    KQ(QuadNum u_, QuadNum v_, long T_, long N_) : u(std::move(u_)), v(std::move(v_)), T(T_), N(N_) {}
    static KQ from_K(const QuadElem& x) { return {QuadNum(x.u), QuadNum(x.v), x.T, x.N}; }
    bool is_zero() const { return u.is_zero() && v.is_zero(); }
    std::string str() const;
};
KQ operator+(const KQ& x, const KQ& y);
KQ operator-(const KQ& x, const KQ& y);
KQ operator-(const KQ& x);
KQ operator*(const KQ& x, const KQ& y);
KQ operator*(const KQ& x, long c);
KQ operator*(const KQ& x, const QuadNum& c);
bool operator==(const KQ& x, const KQ& y);
// theta -> (D' + i sqrt(D_K)) / 2, sqrt d -> root_sign * sqrt(d)
cplx embed_complex(const KQ& x, const QuadField& K, int root_sign = 1);
cplx embed_complex(const CycloNum<KQ>& x, const QuadField& K, int root_sign = 1);

// Weight-structure coordinates over Q(sqrt d) to coefficients in K (x) Q(sqrt d).
std::vector<KQ> to_K_coefficients(const WeightStructure& W, const std::vector<QuadNum>& x, const QuadField& K);

// ---------------------------------------------------------------------------
struct ThetaElement {
    std::shared_ptr<const RingClassGroup> group;
    int n = 0;
    int m = 0;
    int k = 2;
    long beta = 0;
    QuadNum alpha;                 // U_p-eigenvalue (unitary normalization)
    std::vector<KQ> coeffs;        // indexed by group->index; sqrt(beta)^{-m} omitted

    const KQ& coeff(const RingClassGroup::Elem& x) const { return coeffs[group->index(x)]; }
    KQ augmentation() const;
    ThetaElement project() const;                          // to G_{n-1}
    ThetaElement star() const;                             // sigma -> sigma^{-1}
    ThetaElement shift(const RingClassGroup::Elem& tau) const;   // Theta * tau
    ThetaElement scaled(const KQ& c) const;
    bool operator==(const ThetaElement& o) const { return coeffs == o.coeffs && n == o.n && m == o.m; }
    std::string to_json() const;
};

// Theta_n^{[m]}(f^dagger) = alpha^{-n} sum_[a] phi^{[m]dagger}(x_n(a)) (abar_p/a_p)^m [a]_n,
// for the U_p-eigenform fdag on the level p N^+ space of gp.
ThetaElement theta_element(const AutoForm& fdag, const GrossPoints& gp, int n, int m = 0);
// The same element from the new form f of level N^+ through the regularized
// point P_n^dagger = alpha^{-n} P_n - alpha^{-n-1} P_{n-1} (p not dividing N).
ThetaElement theta_element_regularized(const AutoForm& f, const GrossPoints& gp_new, const QuadNum& alpha, int n,
                                       int m = 0);

// ---------------------------------------------------------------------------
// p-adic reduction through iota_p: theta -> theta_p (split p) or kept as the
// pair (a, b) of a + b theta in O_K (x) Z_p (non-split p); sqrt d -> the root
// making A_p a unit; sqrt(beta) -> the root used by i_p.
struct PadicContext {
    long p = 0;
    int M = 0;
    int guard = 0;   // extra p-adic digits available for clearing denominators
    bool split = false;
    Int theta_p, sqrt_d, sqrt_beta;
    long d = 0;
    // (a, b) modulo p^M; b = 0 for split p.  Throws PrecisionError if the
    // element is not integral.
    std::pair<Int, Int> reduce(const KQ& x, int sqrt_beta_power = 0) const;
    int valuation(const std::pair<Int, Int>& r) const;   // M for zero
};
PadicContext padic_context(const GrossPoints& gp, const UnitRoot& ur, int M);

// Coefficients of Theta reduced modulo p^M, sqrt(beta)^{-m} included.
std::vector<std::pair<Int, Int>> reduce_theta(const ThetaElement& th, const PadicContext& ctx);

struct CongruenceReport {
    bool ok = true;
    bool integral = true;
    std::string counterexample;
};
// Theta_n^{[m]} = Theta_n^{[0]} mod p^n for all -k/2 < m < k/2, and integrality.
CongruenceReport congruence_check(const std::vector<ThetaElement>& by_weight, const PadicContext& ctx);

// ---------------------------------------------------------------------------
// chi_t-branch: coefficients on Gamma_n (index e) with values in K(sqrt d)(zeta_d).
struct BranchTheta {
    int n = 0;
    long p = 0;
    long t = 0, d = 1;
    std::vector<CycloNum<KQ>> coeffs;
};
BranchTheta branch_project(const ThetaElement& th, long t);
// sum_e coeff(e) nu(gamma^e); ConfigError when the conductor exceeds the level.
CycloNum<KQ> evaluate(const BranchTheta& b, const TowerCharacter& nu);
// sum_sigma coeff(sigma) chi(sigma) directly on G_n.
CycloNum<KQ> evaluate(const ThetaElement& th, const TowerCharacter& chi);

struct MuLambda {
    int mu = 0;       // minimal valuation (M when zero to precision)
    int lambda = -1;  // first degree of a coefficient of valuation mu in Z_p[[T]], T = gamma - 1
    bool zero = false;
};
// p-adic branch of the theta element (chi_t values via the Teichmueller
// character; requires d | p - 1).
std::vector<std::pair<Int, Int>> padic_branch(const ThetaElement& th, long t, const PadicContext& ctx);
MuLambda mu_lambda(const std::vector<std::pair<Int, Int>>& branch, const PadicContext& ctx);

// ---------------------------------------------------------------------------
// e_p(pi, chi): split_type as in QuadField::split_type.
QuadNum e_p_multiplier(const QuadNum& alpha, int split_type, bool chi_ramified,
                       const QuadNum& chi_p = QuadNum(1), const QuadNum& chi_pbar = QuadNum(1));

// epsilon(pi_q) for q | N: -q^{(2-k)/2} c_q for q || N from the U_q / W_q
// eigenvalue on the quaternionic side.
int local_sign(const AutoForm& f, long q);
// epsilon' = (-1)^{r_0 + k/2} prod_{q not dividing p D_K} epsilon(pi_q).
int functional_equation_sign(const AutoForm& f, long p);
// For every prime q not dividing N^- at which beta has odd valuation (such q
// split in K), the element t in K of norm q with J^{-1} in t Q_q^x R_q^x.
// Right translation by J then moves Gross points by the classes [t].
std::vector<QuadElem> j_translations(const GrossPoints& gp);
struct FunctionalEquationReport {
    bool ok = false;
    int eps = 0;
    RingClassGroup::Elem sigma_nplus;
    RingClassGroup::Elem sigma_beta;   // product of [t] over j_translations
    std::string detail;
};
// Theta^* = eps Theta sigma_{N+}^{-1} sigma_beta^{-1}, exactly.
FunctionalEquationReport functional_equation_check(const ThetaElement& th, const GrossPoints& gp, int eps);

// ---------------------------------------------------------------------------
struct InterpolationData {
    int k = 2, m = 0, s = 0;
    long p = 0;
    long D_K = 0;
    int u_K = 1;
    int ord_p_N = 0;
    cplx e_p{1, 0};
    cplx A_p{1, 0};
    int eps_p = 1;
    std::vector<cplx> ram_factors;   // eps(pi_q) chi_t(frak q) for q | (D_K, N^-)
    cplx chi_nplus{1, 0};
};
// Right-hand side of the interpolation formula for chi_hat(Theta)^2.
cplx interpolation_rhs(const InterpolationData& data, double L_value, double period);
// (ST): eps(pi_q) chi_t(frak q) = -1 for q | (D_K, N^-).
bool st_condition(const InterpolationData& data);

}  // namespace gt
