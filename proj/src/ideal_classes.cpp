#include "gt/ideal_classes.hpp"

#include <deque>
#include <set>

#include "json.hpp"

namespace gt {

namespace {

Rational det4(std::array<std::array<Rational, 4>, 4> m) {
    Rational d = 1;
    for (int c = 0; c < 4; ++c) {
        int piv = -1;
        for (int r = c; r < 4; ++r)
            if (m[r][c] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) return 0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            d = -d;
        }
        d *= m[c][c];
        for (int r = c + 1; r < 4; ++r) {
            Rational f = m[r][c] / m[c][c];
            for (int k = c; k < 4; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return d;
}

bool rational_sqrt(const Rational& x, Rational& out) {
    Int n = x.get_num(), d = x.get_den();
    if (n < 0) return false;
    Int sn = sqrt(n), sd = sqrt(d);
    if (sn * sn != n || sd * sd != d) return false;
    out = Rational(sn, sd);
    return true;
}

bool is_integral_elem(const QuatAlgebra& B, const QVec& x) {
    return qnorm(B, x).get_den() == 1 && qtrace(B, x).get_den() == 1;
}

}  // namespace

Rational reduced_discriminant(const QuatAlgebra& B, const Lattice& L) {
    auto b = L.basis_vectors();
    std::array<std::array<Rational, 4>, 4> G;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) G[i][j] = qtrace(B, qmul(B, b[i], qconj(B, b[j])));
    Rational d = abs(det4(G));
    Rational s;
    if (!rational_sqrt(d, s)) throw ArithError("discriminant is not a square");
    return s;
}

bool is_order(const QuatAlgebra& B, const Lattice& L) {
    auto b = L.basis_vectors();
    if (!L.contains(B.one().coords())) return false;
    for (auto& x : b)
        for (auto& y : b)
            if (!L.contains(qmul(B, x, y))) return false;
    return true;
}

Rational EichlerOrder::reduced_discriminant() const { return gt::reduced_discriminant(*B, L); }

EichlerOrder maximal_order(AlgebraPtr Bp) {
    const QuatAlgebra& B = *Bp;
    const QuadField& K = B.field();
    Lattice L = Lattice::from_generators({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
    long dl = K.D * std::labs(B.beta());
    for (long q : prime_factors(dl)) {
        if (B.n_minus() % q == 0) continue;
        int t = valuation(Int(dl), q);
        std::vector<LocalCondition> conds;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) conds.push_back({q, t, LocalMat::identity(q, t), r, c});
        L = impose_all(B, L, conds).scaled(Rational(1, ipow(Int(q), t)));
    }
    // Ramified primes: enlarge by integral elements of q^{-1} L until the
    // discriminant has valuation one.
    for (long q : prime_factors(B.n_minus())) {
        for (;;) {
            Rational d = reduced_discriminant(B, L);
            if (valuation(d, q) <= 1) break;
            auto bv = L.basis_vectors();
            bool grown = false;
            long total = 1;
            for (int i = 0; i < 4; ++i) total *= q;
            for (long idx = 1; idx < total && !grown; ++idx) {
                long r = idx;
                QVec x{0, 0, 0, 0};
                for (int i = 0; i < 4; ++i) {
                    long ci = r % q;
                    r /= q;
                    for (int k = 0; k < 4; ++k) x[k] += bv[i][k] * Rational(ci, q);
                }
                if (!is_integral_elem(B, x)) continue;
                // ring closure of L + Zx
                std::vector<QVec> gens = bv;
                gens.push_back(x);
                Lattice N = Lattice::from_generators(gens);
                bool ok = true;
                for (int it = 0; it < 20; ++it) {
                    Lattice P = lattice_product(B, N, N) + N;
                    if (P == N) break;
                    N = P;
                    for (auto& y : N.basis_vectors())
                        if (!is_integral_elem(B, y)) ok = false;
                    if (!ok) break;
                }
                if (ok && is_order(B, N)) {
                    L = N;
                    grown = true;
                }
            }
            if (!grown) throw VerificationError("could not enlarge the order at a ramified prime");
        }
    }
    EichlerOrder R{Bp, 1, L};
    if (!is_order(B, L)) throw VerificationError("maximal order construction did not produce an order");
    if (R.reduced_discriminant() != Rational(B.n_minus()))
        throw VerificationError("maximal order has wrong discriminant " + to_string(R.reduced_discriminant()));
    return R;
}

EichlerOrder eichler_order(const EichlerOrder& Rmax, long M) {
    const QuatAlgebra& B = *Rmax.B;
    if (std::gcd(M, B.n_minus()) != 1) throw ConfigError("level M must be prime to N-");
    Lattice L = Rmax.L;
    for (auto& [q, e] : factorize(M)) {
        LocalCondition c{q, e, LocalMat::identity(q, e), 1, 0};
        L = impose(B, L, c);
    }
    EichlerOrder R{Rmax.B, M, L};
    if (!is_order(B, L)) throw VerificationError("Eichler order construction failed");
    if (R.reduced_discriminant() != Rational(B.n_minus() * M))
        throw VerificationError("Eichler order has wrong discriminant");
    return R;
}

EichlerOrder eichler_order(AlgebraPtr B, long M) { return eichler_order(maximal_order(B), M); }

Rational eichler_mass(long n_minus, long M) {
    Rational m(1, 12);
    for (long q : prime_factors(n_minus)) m *= (q - 1);
    for (auto& [q, e] : factorize(M)) {
        Int qe = ipow(Int(q), e);
        m *= Rational(qe) * Rational(q + 1, q);
    }
    m.canonicalize();
    return m;
}

Rational ideal_norm(const EichlerOrder& R, const Lattice& I) {
    Rational r = I.covolume() / R.L.covolume();
    Rational s;
    if (!rational_sqrt(r, s)) throw ArithError("index of ideal is not a square");
    return s;
}

Lattice left_order(const QuatAlgebra& B, const Lattice& I, const Rational& normI) {
    return lattice_product(B, I, lattice_conj(B, I)).scaled(1 / normI);
}

Lattice right_order(const QuatAlgebra& B, const Lattice& I, const Rational& normI) {
    return lattice_product(B, lattice_conj(B, I), I).scaled(1 / normI);
}

bool is_right_ideal(const EichlerOrder& R, const Lattice& I) {
    const auto& B = *R.B;
    for (auto& x : I.basis_vectors())
        for (auto& y : R.L.basis_vectors())
            if (!I.contains(qmul(B, x, y))) return false;
    return true;
}

std::vector<QVec> unit_group(const QuatAlgebra& B, const Lattice& order) {
    return elements_of_norm(B, order, 1);
}

std::vector<Lattice> sub_ideals(const EichlerOrder& R, const Lattice& I, const Rational& normI, long q) {
    const auto& B = *R.B;
    auto bv = I.basis_vectors();
    auto rv = R.L.basis_vectors();
    std::set<Lattice> seen;
    std::vector<Lattice> out;
    long total = q * q * q * q;
    for (long idx = 1; idx < total; ++idx) {
        long r = idx;
        std::array<long, 4> c;
        for (int i = 0; i < 4; ++i) c[i] = r % q, r /= q;
        QVec a{0, 0, 0, 0};
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < 4; ++k) a[k] += bv[i][k] * c[i];
        Rational rel = qnorm(B, a) / normI;
        if (rel.get_den() != 1 || mpz_divisible_ui_p(rel.get_num().get_mpz_t(), q) == 0) continue;
        std::vector<QVec> gens;
        for (auto& y : rv) gens.push_back(qmul(B, a, y));
        for (auto& y : bv) {
            QVec z = y;
            for (auto& w : z) w *= q;
            gens.push_back(z);
        }
        Lattice J = Lattice::from_generators(gens);
        if (seen.insert(J).second) out.push_back(J);
    }
    return out;
}

Rational ClassSet::mass() const {
    Rational m = 0;
    for (long g : gamma_orders) m += Rational(1, g);
    m.canonicalize();
    return m;
}

namespace {

std::vector<long> class_invariants(const QuatAlgebra& B, const Lattice& I, const Rational& n) {
    return norm_counts(B, I, n, 4);
}

}  // namespace

std::optional<QVec> ClassSet::connecting_element(const Lattice& J, size_t i) const {
    const auto& B = *R.B;
    Rational nJ = ideal_norm(R, J);
    Lattice C = lattice_product(B, J, lattice_conj(B, reps[i])).scaled(1 / norms[i]);
    auto els = elements_of_norm(B, C, nJ / norms[i]);
    if (els.empty()) return std::nullopt;
    return els.front();
}

std::pair<size_t, QVec> ClassSet::identify(const Lattice& J) const {
    const auto& B = *R.B;
    Rational nJ = ideal_norm(R, J);
    auto inv = class_invariants(B, J, nJ);
    for (size_t i = 0; i < reps.size(); ++i) {
        if (inv != invariants[i]) continue;
        auto g = connecting_element(J, i);
        if (g) return {i, *g};
    }
    throw VerificationError("ideal does not belong to any enumerated class");
}

ClassSet right_class_set(const EichlerOrder& R, long avoid) {
    const auto& B = *R.B;
    ClassSet cs;
    cs.R = R;
    long q = 2;
    while ((B.n_minus() * R.level * avoid) % q == 0 || !is_prime(q)) ++q;
    cs.neighbor_prime = q;
    Rational target = eichler_mass(B.n_minus(), R.level);

    auto add = [&](const Lattice& I, const Rational& n) {
        cs.reps.push_back(I);
        cs.norms.push_back(n);
        auto U = unit_group(B, left_order(B, I, n));
        cs.gamma_orders.push_back(static_cast<long>(U.size()) / 2);
        cs.units.push_back(std::move(U));
        cs.invariants.push_back(class_invariants(B, I, n));
    };
    add(R.L, 1);
    std::deque<size_t> frontier{0};
    while (!frontier.empty() && cs.mass() != target) {
        size_t i = frontier.front();
        frontier.pop_front();
        for (auto& J : sub_ideals(R, cs.reps[i], cs.norms[i], q)) {
            Rational nJ = cs.norms[i] * q;
            auto inv = class_invariants(B, J, nJ);
            bool found = false;
            for (size_t k = 0; k < cs.reps.size() && !found; ++k)
                if (inv == cs.invariants[k] && cs.connecting_element(J, k)) found = true;
            if (!found) {
                add(J, nJ);
                frontier.push_back(cs.reps.size() - 1);
                if (cs.mass() == target) break;
            }
        }
    }
    if (cs.mass() != target)
        throw VerificationError("class enumeration mass " + to_string(cs.mass()) + " differs from " +
                                to_string(target));
    return cs;
}

std::string ClassSet::to_json() const {
    const auto& B = *R.B;
    nlohmann::json j;
    j["algebra"] = nlohmann::json::parse(B.descriptor_json());
    j["level"] = R.level;
    j["neighbor_prime"] = neighbor_prime;
    auto lat = [&](const Lattice& L) {
        nlohmann::json a = nlohmann::json::array();
        for (auto& v : L.basis_vectors()) {
            QuatElem x = B.elem(v);
            a.push_back({x.a.str(), x.b.str()});
        }
        return a;
    };
    j["order"] = lat(R.L);
    nlohmann::json cl = nlohmann::json::array();
    for (size_t i = 0; i < reps.size(); ++i)
        cl.push_back({{"basis", lat(reps[i])},
                      {"norm", to_string(norms[i])},
                      {"gamma_order_mod_center", gamma_orders[i]},
                      {"unit_count", units[i].size()}});
    j["classes"] = cl;
    j["mass"] = to_string(mass());
    return j.dump(2);
}

}  // namespace gt
