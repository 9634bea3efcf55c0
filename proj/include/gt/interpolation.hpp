// Comparison of character evaluations of theta elements with central L-values.
//
// The evaluation chi(Theta) lies in K(sqrt d)(zeta_m); the identification
// with the p-adic avatar is a choice of embedding, so comparisons run over
// all complex embeddings (sign of sqrt d, complex conjugation on K, and
// zeta_m -> zeta_m^a), and succeed when one embedding matches.
#pragma once

#include "gt/analytic_oracle.hpp"
#include "gt/theta_padicL.hpp"

namespace gt {

// The tower character as a character of ideals of K (via [pi]_n = ideal_class(pi)).
IdealCharacter ideal_character(const TowerCharacter& chi, const RingClassGroup& G);

struct Embedding {
    int root_sign = 1;    // sqrt d -> root_sign * sqrt(d)
    bool conj_K = false;  // theta -> theta-bar
    long galois = 1;      // zeta_M -> zeta_M^galois
    long M = 1;
    std::string str() const;
};
std::vector<Embedding> embeddings(long M);
cplx embed(const CycloNum<KQ>& x, const QuadField& K, const Embedding& e);

struct RatioReport {
    bool ok = false;
    double analytic = 0;          // L(chi_1) / L(chi_2)
    double best_rel_error = 1e300;
    Embedding best;
    std::vector<double> algebraic; // |chi_1(Theta)|^2 / |chi_2(Theta)|^2 per embedding
    std::string detail;
};
// Period-free comparison of two characters of equal conductor on Theta.
RatioReport ratio_check(const ThetaElement& th, const TowerCharacter& chi1, const TowerCharacter& chi2,
                        const LValue& L1, const LValue& L2, double tol);

// Constants of the interpolation formula for chi on the instance, in the
// embedding e (which fixes the complex A_p, e_p and chi(frak N+)).
InterpolationData interpolation_data(const ThetaElement& th, const TowerCharacter& chi, const GrossPoints& gp,
                                     const UnitRoot& ur, const NewformData& f, long n_minus, const Embedding& e);

struct AbsoluteReport {
    bool ok = false;
    double period = 0;             // Omega_{pi, N^-}
    double petersson = 0;          // ||f||_{Gamma_0(N)}
    Rational pairing;              // <f, f> on the quaternionic side
    double best_rel_error = 1e300; // | |chi(Theta)|^2 - |RHS| | / |RHS|
    Embedding best;
    cplx lhs, rhs;
    std::vector<double> ratios;    // |chi(Theta)|^2 / |RHS| per embedding
    std::string detail;
    // true when some embedding gives |chi(Theta)|^2 = c |RHS| to relative tolerance tol
    bool matches_multiple(double c, double tol) const;
};
// Omega = 4^{k-1} pi^k ||f|| / <f, f>, and |chi(Theta)|^2 against |RHS|.
AbsoluteReport absolute_check(const ThetaElement& th, const TowerCharacter& chi, const GrossPoints& gp,
                              const UnitRoot& ur, const NewformData& f, long n_minus, const Rational& pairing,
                              const LValue& L, double petersson, double tol);

}  // namespace gt
