// Weight modules L_k = Sym^{k-2}, the action rho_k, the invariant pairing,
// quaternionic modular forms on Cl(R), Brandt/Hecke operators, eigenforms
// and p-stabilization.
//
// A form f is stored by its values f(g_i) at the idelic representatives of the
// right ideal classes I_i = g_i R^ cap B.  Values live in L_k(K) and transform
// by f(alpha g u) = rho_k(i_K(alpha)) f(g).  The action of B^x preserves a
// Q-form of L_k(K) (the fixed points of P -> rho_k(w^{-1}) conj(P) with
// w = [[0, beta], [1, 0]]), so all Hecke matrices are rational.
#pragma once

#include "gt/ideal_classes.hpp"
#include "gt/linalg.hpp"

namespace gt {

// ---------------------------------------------------------------------------
// Coefficient vectors on the basis v_m = X^{r-m} Y^{r+m}, r = (k-2)/2, are
// indexed by the Y-exponent r + m.
inline int weight_r(int k) { return (k - 2) / 2; }
void check_weight(int k);

// Matrix of rho_k(g) for g = [[a, b], [c, d]]; det_inv_r = det(g)^{-r}.
// Column j is the image of v_{j-r}.
template <class R>
std::vector<std::vector<R>> rho_matrix(int k, const R& a, const R& b, const R& c, const R& d, const R& det_inv_r,
                                       const R& zero, const R& one) {
    int r = weight_r(k), n = k - 1;
    // powers of the linear forms aX + cY and bX + dY, coefficient index = Y-exponent
    auto power = [&](const R& x, const R& y, int e) {
        std::vector<R> p{one};
        for (int i = 0; i < e; ++i) {
            std::vector<R> q(p.size() + 1, zero);
            for (size_t j = 0; j < p.size(); ++j) {
                q[j] = q[j] + p[j] * x;
                q[j + 1] = q[j + 1] + p[j] * y;
            }
            p = std::move(q);
        }
        return p;
    };
    std::vector<std::vector<R>> M(n, std::vector<R>(n, zero));
    for (int j = 0; j < n; ++j) {
        int m = j - r;
        auto u = power(a, c, r - m);
        auto v = power(b, d, r + m);
        for (size_t s = 0; s < u.size(); ++s)
            for (size_t t = 0; t < v.size(); ++t) M[s + t][j] = M[s + t][j] + u[s] * v[t] * det_inv_r;
    }
    return M;
}

// Rational specialization used by rho_act.
QMat rho_rational(int k, const Rational& a, const Rational& b, const Rational& c, const Rational& d);
RVec rho_act(int k, const std::array<Rational, 4>& g, const RVec& P);

// Pairing coefficient: <v_m, v_{-m}> = (-1)^{r+m} (r+m)! (r-m)! / (k-2)!.
Rational pair_coefficient(int k, int m);
template <class R>
R pair_k(int k, const std::vector<R>& P, const std::vector<R>& Q) {
    int r = weight_r(k);
    R s = P[0] - P[0];
    for (int m = -r; m <= r; ++m) s = s + P[r + m] * Q[r - m] * pair_coefficient(k, m);
    return s;
}

// ---------------------------------------------------------------------------
// The Q-form of L_k(K).  Rational coordinates: [x_0, x_1, y_1, ..., x_r, y_r]
// with c_m = x_m + y_m theta (m > 0), c_{-m} = (-1)^r beta^m conj(c_m), and
// c_0 = x_0 (r even) or x_0 * delta (r odd).
class WeightStructure {
   public:
    WeightStructure(AlgebraPtr B, int k);
    int weight() const { return k_; }
    int dim() const { return k_ - 1; }
    std::vector<QuadElem> to_K(const RVec& x) const;
    RVec from_K(const std::vector<QuadElem>& c) const;   // requires a fixed vector
    // rho_k(i_K(alpha)) in rational coordinates.
    QMat rho(const QVec& alpha) const;
    // <e_i, e_j>_k (rational).
    const QMat& gram() const { return gram_; }
    Rational pair(const RVec& x, const RVec& y) const;
    std::vector<std::vector<QuadElem>> rho_K(const QVec& alpha) const;

   private:
    AlgebraPtr B_;
    int k_;
    std::vector<std::vector<QuadElem>> basis_;   // K-coordinates of the rational basis
    QMat gram_;
};

// ---------------------------------------------------------------------------
// An integral local matrix x_q at a prime q (determinant q^t times a unit).
struct IdeleFactor {
    long q;
    LocalMat x;
};

class FormSpace {
   public:
    FormSpace(ClassSet cs, int k);
    const ClassSet& classes() const { return cs_; }
    const EichlerOrder& order() const { return cs_.R; }
    const QuatAlgebra& alg() const { return *cs_.R.B; }
    const EichlerOrder& maximal() const { return rmax_; }
    const WeightStructure& weights() const { return ws_; }
    int weight() const { return k_; }
    size_t h() const { return cs_.size(); }
    size_t block() const { return static_cast<size_t>(k_ - 1); }
    size_t full_dim() const { return h() * block(); }
    // Columns span M_k(R): vectors with F(i) fixed by Gamma_i.
    const QMat& invariant_basis() const { return inv_; }
    size_t dimension() const { return inv_.empty() ? 0 : inv_[0].size(); }

    // Lattice g x R^ cap B for the idele g attached to the right ideal I of
    // some Eichler order inside the maximal order (I trivial at the primes of
    // xs and of the level), right multiplied by the two-sided prime of norm q
    // for each q | ramified.
    Lattice idele_lattice(const Lattice& I, long ramified,
                          const std::vector<IdeleFactor>& xs) const;
    // (j, alpha) with idele_lattice(...) = alpha I_j.
    std::pair<size_t, QVec> locate(const Lattice& I, long ramified,
                                   const std::vector<IdeleFactor>& xs) const;
    // f(g x) given the full coordinate vector F of f.
    template <class R>
    std::vector<R> value_at(const std::vector<R>& F, const Lattice& I, long ramified,
                            const std::vector<IdeleFactor>& xs) const {
        auto [j, alpha] = locate(I, ramified, xs);
        return mat_apply(ws_.rho(alpha), block_of(F, j));
    }
    template <class R>
    std::vector<R> block_of(const std::vector<R>& F, size_t j) const {
        return std::vector<R>(F.begin() + j * block(), F.begin() + (j + 1) * block());
    }

    // Petersson-type pairing sum_i <F(g_i), G(g_i tau)>_k / #Gamma_i.
    Rational petersson(const RVec& F, const RVec& G) const;
    // Same without the Atkin-Lehner twist.
    Rational plain_pairing(const RVec& F, const RVec& G) const;
    // Full-coordinate matrix of right translation by tau^{N_B}.
    const QMat& atkin_lehner() const;

   private:
    ClassSet cs_;
    EichlerOrder rmax_;
    int k_;
    WeightStructure ws_;
    QMat inv_;
    mutable std::once_flag tau_once_;
    mutable QMat tau_;
};

struct HeckeOperator {
    std::string label;   // "T_q" or "U_q"
    long q = 0;
    int k = 2;
    QMat matrix;         // classical normalization, full coordinates
    std::string to_json() const;
};

// Brandt matrix by enumerating elements of I_i I_j^{-1} of norm q N(I_i)/N(I_j)
// (valid for every q not dividing the level).
HeckeOperator brandt_theta(const FormSpace& S, long q);
// The same operator by enumerating sublattices x R^ (q+1 cosets for T_q, q
// cosets [[q, x], [0, 1]] for U_q); needs class representatives trivial at q.
HeckeOperator brandt_cosets(const FormSpace& S, long q);
// T_q for q not dividing the level (theta method), U_q for q | level.
HeckeOperator hecke_operator(const FormSpace& S, long q);
// Unitary-normalized U_p = p^{-(k-2)/2} * classical.
QMat unitary(const HeckeOperator& T);
// Restriction of an operator to the invariant subspace (d x d).
QMat restrict_to_forms(const FormSpace& S, const QMat& T);

// ---------------------------------------------------------------------------
struct UnitRoot {
    long p = 0;
    int k = 2;
    Rational a_p;
    QuadNum A;        // unit root of X^2 - a_p X + p^{k-1}
    QuadNum alpha;    // A p^{1 - k/2}
    long d = 0;       // discriminant a_p^2 - 4 p^{k-1} (0 if it is a square)
    Int sqrt_d(int M) const;   // the p-adic square root picked by the unit-root choice
    Int A_mod(int M) const;
    Int alpha_mod(int M) const;
};
UnitRoot unit_root(long p, int k, const Rational& a_p);

struct AutoForm {
    std::shared_ptr<const FormSpace> space;
    std::vector<QuadNum> values;               // full coordinates
    std::map<long, Rational> eigenvalues;      // classical a_q used to cut it out
    bool lambda_normalized = false;
    std::optional<UnitRoot> stabilization;     // set for p-stabilized forms
    RVec rational_values() const;              // requires rational values
    std::string to_json() const;
};

// Simultaneous eigenvector for the given (q, a_q) (classical normalization),
// scaled to coprime integers with positive first nonzero entry.
AutoForm eigenform(std::shared_ptr<const FormSpace> S, const std::vector<std::pair<long, Rational>>& target);
// Dimension of the joint eigenspace of the given (q, a_q) in M_k(R).
size_t eigenspace_dimension(const FormSpace& S, const std::vector<std::pair<long, Rational>>& target);
// Rational eigenvalues of T_q on M_k(R) with multiplicity.
std::vector<Rational> rational_spectrum(const FormSpace& S, const HeckeOperator& T);

// f^dagger = f - alpha^{-1} rho(diag(1, p)) f on the level-pM space; f itself
// when p | level.  pspace is the form space of level p * level(f).
AutoForm p_stabilize(const AutoForm& f, long p, std::shared_ptr<const FormSpace> pspace);

// Unitary U_p applied to a vector over Q(sqrt d).
std::vector<QuadNum> apply_Up(const FormSpace& S, long p, const std::vector<QuadNum>& F);

}  // namespace gt
