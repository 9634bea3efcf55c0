// Eichler orders R_M of B, right ideal classes Cl(R), unit groups and the
// mass formula used to certify the class enumeration.
#pragma once

#include "gt/lattice.hpp"

namespace gt {

struct EichlerOrder {
    AlgebraPtr B;
    long level = 1;
    Lattice L;
    Rational reduced_discriminant() const;
    const QuatAlgebra& alg() const { return *B; }
};

// Reduced discriminant of the lattice L (which must be an order).
Rational reduced_discriminant(const QuatAlgebra& B, const Lattice& L);
bool is_order(const QuatAlgebra& B, const Lattice& L);

EichlerOrder maximal_order(AlgebraPtr B);
// Eichler order of level M inside the maximal order: i_q(R) is the upper
// triangular-mod-q^e order at each q^e || M.
EichlerOrder eichler_order(AlgebraPtr B, long M);
EichlerOrder eichler_order(const EichlerOrder& maximal, long M);

// Sum over classes of 1/#Gamma with Gamma = (unit group)/{+-1}.
Rational eichler_mass(long n_minus, long M);

Rational ideal_norm(const EichlerOrder& R, const Lattice& I);
Lattice left_order(const QuatAlgebra& B, const Lattice& I, const Rational& normI);
Lattice right_order(const QuatAlgebra& B, const Lattice& I, const Rational& normI);
bool is_right_ideal(const EichlerOrder& R, const Lattice& I);

struct ClassSet {
    EichlerOrder R;
    long neighbor_prime = 0;
    std::vector<Lattice> reps;
    std::vector<Rational> norms;
    std::vector<std::vector<QVec>> units;     // O_l(I_i)^x, including -1
    std::vector<long> gamma_orders;           // #units / 2  (modulo the centre)
    std::vector<std::vector<long>> invariants;

    size_t size() const { return reps.size(); }
    Rational mass() const;
    // Finds (i, gamma) with J = gamma * I_i.
    std::pair<size_t, QVec> identify(const Lattice& J) const;
    std::optional<QVec> connecting_element(const Lattice& J, size_t i) const;
    std::string to_json() const;
};

// Enumerates Cl(R) through the q-neighbour graph for the smallest prime q not
// dividing N^- * M * avoid; termination is certified by the mass formula.
ClassSet right_class_set(const EichlerOrder& R, long avoid = 1);

// All right R-ideals J inside I with N(J) = q N(I) (q prime to N^-).
std::vector<Lattice> sub_ideals(const EichlerOrder& R, const Lattice& I, const Rational& normI, long q);

std::vector<QVec> unit_group(const QuatAlgebra& B, const Lattice& order);

}  // namespace gt
