// Full-rank Z-lattices in B = Q^4 (coordinates w.r.t. {1, theta, J, theta J}),
// stored as an integer Hermite normal form together with a common denominator,
// plus short-vector enumeration for the reduced norm.
#pragma once

#include "gt/quaternion.hpp"

#include <functional>

namespace gt {

using QVec = std::array<Rational, 4>;
using IVec = std::array<Int, 4>;
using IMat4 = std::array<IVec, 4>;

QVec qvec(const QuatElem& x);
QuatElem qelem(const QuatAlgebra& B, const QVec& v);
QVec qmul(const QuatAlgebra& B, const QVec& x, const QVec& y);
QVec qconj(const QuatAlgebra& B, const QVec& x);
Rational qnorm(const QuatAlgebra& B, const QVec& x);
Rational qtrace(const QuatAlgebra& B, const QVec& x);

struct Lattice {
    IMat4 rows;   // upper-triangular HNF, positive pivots
    Int den = 1;  // lattice = den^{-1} * rowspan(rows)

    static Lattice from_generators(const std::vector<QVec>& gens);
    static Lattice from_int_rows(const std::vector<IVec>& rows, const Int& den);
    QVec basis(int i) const;
    std::vector<QVec> basis_vectors() const;
    // Integer coordinates of x in the basis, if x lies in the lattice.
    std::optional<IVec> coords(const QVec& x) const;
    bool contains(const QVec& x) const { return coords(x).has_value(); }
    bool contains(const Lattice& o) const;
    Rational covolume() const;   // |det| of the basis in coordinates
    Lattice scaled(const Rational& c) const;
    Lattice operator+(const Lattice& o) const;
    bool operator==(const Lattice& o) const { return den == o.den && rows == o.rows; }
    bool operator<(const Lattice& o) const;
    std::string str() const;
};

Lattice lattice_product(const QuatAlgebra& B, const Lattice& L1, const Lattice& L2);
Lattice lattice_conj(const QuatAlgebra& B, const Lattice& L);
Lattice left_multiply(const QuatAlgebra& B, const QVec& x, const Lattice& L);

// Sublattice {x in L : sum_i a_i c_i(x) = 0 mod Q}, where c(x) are the
// coordinates of x in the basis of L and a is given modulo Q.
Lattice sublattice_condition(const Lattice& L, const IVec& a, const Int& Q);

// A local condition on y in L: entry (r, c) of X * i_q(y) must vanish mod q^t.
struct LocalCondition {
    long q;
    int t;
    LocalMat X;   // precision >= t
    int r, c;
};
Lattice impose(const QuatAlgebra& B, const Lattice& L, const LocalCondition& cond);
Lattice impose_all(const QuatAlgebra& B, Lattice L, const std::vector<LocalCondition>& conds);

// Integral Gram matrix of the trace form: c^T G c = 2 N(x) * scale.
struct NormGram {
    std::array<std::array<long long, 4>, 4> G{};
    Rational scale = 1;
};
NormGram norm_gram(const QuatAlgebra& B, const Lattice& L);

// Calls f(c, v) for every nonzero coefficient vector c (w.r.t. the lattice
// basis) with v = c^T G c <= vmax, where G is norm_gram(B, L).G.
void enumerate_short(const NormGram& ng, long long vmax,
                     const std::function<void(const std::array<long, 4>&, long long)>& f);

// All elements of L with reduced norm exactly equal to n.
std::vector<QVec> elements_of_norm(const QuatAlgebra& B, const Lattice& L, const Rational& n);
// Counts of elements with N(x) = j * unit for j = 1..count.
std::vector<long> norm_counts(const QuatAlgebra& B, const Lattice& L, const Rational& unit, int count);

}  // namespace gt
