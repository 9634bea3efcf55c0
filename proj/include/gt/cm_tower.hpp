// The anticyclotomic tower: ring class groups G_n of O_n = Z + p^n O_K, the
// splitting G_n = Delta x Gamma_n, the matrices varsigma^{(n)}, Gross points
// x_n(a) and their reduction to ideal-class coordinates, and characters.
//
// Supported: h_K = 1, p odd and unramified in K.  G_n is presented as
// (O_K / p^n)^x / ((Z / p^n)^x * O_K^x); the idele class [a]_n of an idele
// supported at p is the class of a_p.
#pragma once

#include "gt/forms_hecke.hpp"

namespace gt {

long class_number(long D_K);

// Residues of O_K modulo p^n: u + v theta.
struct OKRes {
    Int u, v;
};

class RingClassGroup {
   public:
    struct Elem {
        long i = 0;   // exponent of the Delta generator
        long e = 0;   // exponent of gamma = 1 + p theta
        bool operator==(const Elem& o) const { return i == o.i && e == o.e; }
        bool operator<(const Elem& o) const { return i < o.i || (i == o.i && e < o.e); }
    };

    RingClassGroup(const QuadField& K, long p, int n);
    const QuadField& field() const { return K_; }
    long p() const { return p_; }
    int level() const { return n_; }
    long delta_order() const { return d_; }
    long gamma_order() const { return g_; }
    size_t size() const { return static_cast<size_t>(n_ == 0 ? 1 : d_ * g_); }
    std::vector<Elem> elements() const;
    size_t index(const Elem& x) const { return static_cast<size_t>(x.i * g_ + x.e); }
    Elem mul(const Elem& x, const Elem& y) const;
    Elem inv(const Elem& x) const;
    Elem identity() const { return {}; }

    // Class of the idele equal to x at p (x in O_K prime to p) and 1 elsewhere.
    Elem from_residue(const QuadElem& x) const;
    // Canonical u in O_K (coordinates in [0, p^n)) with [u at p]_n = x.
    QuadElem representative(const Elem& x) const;
    // Image in G_{n-1} (n >= 1).
    Elem project(const Elem& x) const;
    // [a]_n for the idele a that is a generator pi of the prime-to-p ideal
    // (pi) at the primes dividing it (and 1 elsewhere); equals the class of
    // pi^{-1} at p.
    Elem ideal_class(const QuadElem& pi) const;
    std::string to_json() const;

   private:
    QuadField K_;
    long p_;
    int n_;
    long d_ = 1, g_ = 1;
    Int pn_;                       // p^n
    OKRes delta_gen_;              // Teichmueller lift of the Delta generator mod p^n
    std::map<std::pair<long, long>, long> delta_log_;   // canonical residue mod p -> exponent

    OKRes mulr(const OKRes& a, const OKRes& b, const Int& m) const;
    OKRes powr(OKRes a, Int e, const Int& m) const;
    std::pair<long, long> delta_canonical(const OKRes& x) const;
};

// Characters chi_t nu of G_n: chi_t(delta_gen) = zeta_d^t, nu(gamma) = zeta_{p^{s-1}}^j.
struct TowerCharacter {
    long d = 1;       // #Delta
    long t = 0;
    long p = 0;
    int s = 0;        // wild conductor exponent (nu trivial when s <= 1)
    long j = 0;
    int m = 0;        // weight (m, -m)
    long order_modulus() const;   // lcm(d, p^{s-1})
    CycloNum<Rational> operator()(const RingClassGroup::Elem& x) const;
    // conductor exponent of chi_t nu as a character of the tower
    int conductor_exponent() const;
    std::string str() const;
};
std::vector<TowerCharacter> wild_characters(const RingClassGroup& G, long t, int s);

// ---------------------------------------------------------------------------
// Gross points on the class set of the form space S (level p^{n_p} N^+).
class GrossPoints {
   public:
    GrossPoints(std::shared_ptr<const FormSpace> S, long p, long n_plus);
    const FormSpace& space() const { return *S_; }
    long p() const { return p_; }
    long n_plus() const { return n_plus_; }
    // The p-adic image of theta (a root of X^2 - T X + N) fixing the prime
    // frak p | p for split p; 0 if p is not split.
    Int theta_p(int digits) const;
    // Root of X^2 - T X + N in Z_q fixing frak q | N^+.
    Int theta_q(long q, int digits) const;
    // Generator of frak N^+ = prod frak q (h_K = 1).
    QuadElem n_plus_generator() const;

    LocalMat varsigma_p(int n, int digits) const;
    LocalMat varsigma_q(long q, int digits) const;

    // Lattice t x_n(a) R^ cap B for the idele a = u at p (1 elsewhere) and
    // t = pi at the primes dividing N(pi) (1 elsewhere); pi is prime to p N^-.
    Lattice lattice(int n, const QuadElem& u, const std::optional<QuadElem>& pi = std::nullopt) const;
    struct Reduced {
        size_t cls;    // x_n(a) = alpha g_cls u', u' in R^x
        QVec alpha;
    };
    Reduced reduce(int n, const QuadElem& u) const;
    Reduced reduce_lattice(const Lattice& L) const;
    // f(x_n(a)) in rational weight coordinates, for the full coordinate
    // vector F of f over Q(sqrt d).
    std::vector<QuadNum> value(int n, const QuadElem& u, const std::vector<QuadNum>& F) const;
    // O_n = K cap (left order of x_n(1) R^): returns c with K cap O = Z + c theta Z.
    Int embedded_conductor(int n) const;
    bool check_optimality(int n) const;

   private:
    std::shared_ptr<const FormSpace> S_;
    long p_;
    long n_plus_;
    std::vector<IdeleFactor> factors(int n, const QuadElem& u, const std::optional<QuadElem>& pi) const;
};

}  // namespace gt
