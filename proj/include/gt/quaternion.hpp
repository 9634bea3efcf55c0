// The definite quaternion algebra B = K + KJ (J^2 = beta, J t = conj(t) J)
// ramified exactly at N^- and infinity, together with the fixed local
// splittings i_q : B_q -> M_2(Q_q) for q not dividing N^-.
#pragma once

#include "gt/errors.hpp"
#include "gt/exact_arith.hpp"

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <set>

namespace gt {

// Element a + bJ.  Coordinates in the basis {1, theta, J, theta J}.
struct QuatElem {
    QuadElem a, b;
    long beta = 0;
    QuatElem() = default;
    QuatElem(QuadElem a_, QuadElem b_, long beta_) : a(std::move(a_)), b(std::move(b_)), beta(beta_) {}
    Rational reduced_trace() const { return a.trace(); }
    Rational reduced_norm() const { return a.norm() - Rational(beta) * b.norm(); }
    QuatElem conj() const { return {a.conj(), -b, beta}; }
    std::array<Rational, 4> coords() const { return {a.u, a.v, b.u, b.v}; }
    bool is_zero() const { return a.is_zero() && b.is_zero(); }
    std::string str() const;
};
QuatElem operator+(const QuatElem& x, const QuatElem& y);
QuatElem operator-(const QuatElem& x, const QuatElem& y);
QuatElem operator-(const QuatElem& x);
QuatElem operator*(const QuatElem& x, const QuatElem& y);
QuatElem operator*(const QuatElem& x, const Rational& c);
bool operator==(const QuatElem& x, const QuatElem& y);

// 2x2 matrix over Z/q^prec.
struct LocalMat {
    long q = 0;
    int prec = 0;
    std::array<Int, 4> e;   // row-major a, b, c, d
    Int modulus() const { return ipow(Int(q), prec); }
    LocalMat reduced() const;
    Int det() const { return mod(e[0] * e[3] - e[1] * e[2], modulus()); }
    Int trace() const { return mod(e[0] + e[3], modulus()); }
    static LocalMat identity(long q, int prec);
    static LocalMat make(long q, int prec, const Int& a, const Int& b, const Int& c, const Int& d);
    LocalMat adjugate() const;
    LocalMat inverse() const;   // requires unit determinant
    LocalMat with_precision(int p2) const;
    bool operator==(const LocalMat& o) const;
};
LocalMat operator*(const LocalMat& x, const LocalMat& y);
LocalMat operator+(const LocalMat& x, const LocalMat& y);
LocalMat operator*(const LocalMat& x, const Int& c);

// Hilbert symbol (a, b)_q; q = 0 denotes the real place.
int hilbert_symbol(const Int& a, const Int& b, long q);
int hilbert_symbol_bruteforce(const Int& a, const Int& b, long q);   // q <= 100
struct RamifiedSet {
    std::set<long> finite;
    bool infinite = false;
    bool operator==(const RamifiedSet& o) const { return finite == o.finite && infinite == o.infinite; }
};
RamifiedSet hilbert_ramified_set(const Int& a, const Int& b);

// Smallest |beta| (beta < 0) such that beta is a unit square at every prime of
// p * l * N^+ * extra, a unit at the primes of D_K, and (-D_K, beta) ramifies
// exactly at N^- and infinity.
long choose_beta(const QuadField& K, long p, long n_plus, long n_minus, long aux_l, long extra = 1);
// Smallest D_K such that every prime of n_minus is non-split in Q(sqrt(-D_K))
// and every prime of n_plus splits.
QuadField auto_field(long n_minus, long n_plus = 1);
// Checks the ramification and splitting hypotheses on (K, p, N^+, N^-).
void validate_setting(const QuadField& K, long p, long n_plus, long n_minus);

class QuatAlgebra {
   public:
    QuatAlgebra(const QuadField& K, long beta, long n_minus, std::vector<long> square_primes);
    // Convenience constructor running choose_beta.
    static std::shared_ptr<const QuatAlgebra> make(const QuadField& K, long p, long n_plus, long n_minus, long aux_l, long extra = 1);

    const QuadField& field() const { return K_; }
    long beta() const { return beta_; }
    long n_minus() const { return n_minus_; }
    const std::vector<long>& square_primes() const { return square_primes_; }

    QuatElem elem(const Rational& c0, const Rational& c1, const Rational& c2, const Rational& c3) const;
    QuatElem elem(const std::array<Rational, 4>& c) const { return elem(c[0], c[1], c[2], c[3]); }
    QuatElem one() const { return elem(1, 0, 0, 0); }
    QuatElem theta() const { return elem(0, 1, 0, 0); }
    QuatElem J() const { return elem(0, 0, 1, 0); }
    QuatElem from_K(const QuadElem& t) const { return {t, QuadElem(K_, 0, 0), beta_}; }

    // Norm form coefficients: N(c) = sum_{i<=j} Q[i][j] c_i c_j with integers.
    std::array<std::array<long, 4>, 4> norm_form() const;
    // Gram matrix of the bilinear form T(x conj(y)) on the coordinate basis.
    std::array<std::array<long, 4>, 4> trace_gram() const;
    // Structure constants: e_i e_j = sum_k mult[i][j][k] e_k.
    const std::array<std::array<std::array<long, 4>, 4>, 4>& mult_table() const { return mult_; }

    // sqrt(beta) in Z_q (q in the square set) modulo q^digits.
    Int sqrt_beta(long q, int digits) const;
    // Images of theta and J under i_q, modulo q^digits.
    std::pair<LocalMat, LocalMat> generators_at(long q, int digits) const;
    // i_q(x) for x with q-integral image; throws otherwise.
    LocalMat split_at(long q, int digits, const QuatElem& x) const;
    // i_q of the integer coordinate vector c, divided by den (power of q allowed
    // when the result is integral).
    LocalMat split_coords(long q, int digits, const std::array<Int, 4>& c, const Int& den = 1) const;
    // Complex splitting i_K(a + bJ) = [[a, b beta], [conj b, conj a]].
    std::array<cplx, 4> split_complex(const QuatElem& x) const;

    bool is_square_prime(long q) const;
    std::string descriptor_json() const;

   private:
    QuadField K_;
    long beta_;
    long n_minus_;
    std::vector<long> square_primes_;
    std::array<std::array<std::array<long, 4>, 4>, 4> mult_{};
    struct LocalData {
        int digits = 0;
        LocalMat theta, J;
    };
    mutable std::mutex mu_;
    mutable std::map<long, LocalData> cache_;
    LocalData compute_local(long q, int digits) const;
};

using AlgebraPtr = std::shared_ptr<const QuatAlgebra>;

}  // namespace gt
