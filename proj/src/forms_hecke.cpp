#include "gt/forms_hecke.hpp"

#include "json.hpp"

namespace gt {

void check_weight(int k) {
    if (k < 2 || k % 2 != 0) throw ConfigError("weight must be an even integer >= 2");
}

QMat rho_rational(int k, const Rational& a, const Rational& b, const Rational& c, const Rational& d) {
    check_weight(k);
    Rational det = a * d - b * c;
    if (det == 0) throw ArithError("rho_k: matrix is not invertible");
    Rational dr = 1;
    for (int i = 0; i < weight_r(k); ++i) dr /= det;
    return rho_matrix<Rational>(k, a, b, c, d, dr, Rational(0), Rational(1));
}

RVec rho_act(int k, const std::array<Rational, 4>& g, const RVec& P) {
    return rho_rational(k, g[0], g[1], g[2], g[3]) * P;
}

Rational pair_coefficient(int k, int m) {
    int r = weight_r(k);
    auto fact = [](int n) {
        Int f = 1;
        for (int i = 2; i <= n; ++i) f *= i;
        return f;
    };
    Rational c(fact(r + m) * fact(r - m), fact(2 * r));
    c.canonicalize();
    return ((r + m) % 2 == 0) ? c : Rational(-c);
}

// ---------------------------------------------------------------------------

WeightStructure::WeightStructure(AlgebraPtr B, int k) : B_(std::move(B)), k_(k) {
    check_weight(k);
    const QuadField& K = B_->field();
    int r = weight_r(k), n = k - 1;
    QuadElem zero(K, 0), one(K, 1), theta(K, 0, 1);
    QuadElem delta(K, -K.T, 2);   // 2 theta - T = sqrt(-D_K)
    long sign = (r % 2 == 0) ? 1 : -1;
    auto vec = [&]() { return std::vector<QuadElem>(n, zero); };
    {
        auto e = vec();
        e[r] = (r % 2 == 0) ? one : delta;
        basis_.push_back(e);
    }
    Rational bm = 1;
    for (int m = 1; m <= r; ++m) {
        bm *= B_->beta();
        Rational s = bm * sign;
        auto e1 = vec(), e2 = vec();
        e1[r + m] = one;
        e1[r - m] = one * s;
        e2[r + m] = theta;
        e2[r - m] = theta.conj() * s;
        basis_.push_back(e1);
        basis_.push_back(e2);
    }
    gram_ = zero_matrix(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            QuadElem g = pair_k(k, basis_[i], basis_[j]);
            if (g.v != 0) throw VerificationError("pairing is not rational on the rational structure");
            gram_[i][j] = g.u;
        }
}

std::vector<QuadElem> WeightStructure::to_K(const RVec& x) const {
    const QuadField& K = B_->field();
    std::vector<QuadElem> out(k_ - 1, QuadElem(K, 0));
    for (size_t j = 0; j < basis_.size(); ++j) {
        if (x[j] == 0) continue;
        for (size_t i = 0; i < out.size(); ++i) out[i] = out[i] + basis_[j][i] * x[j];
    }
    return out;
}

RVec WeightStructure::from_K(const std::vector<QuadElem>& c) const {
    int r = weight_r(k_);
    RVec x(k_ - 1, Rational(0));
    if (r % 2 == 0) {
        if (c[r].v != 0) throw ArithError("vector is not in the rational structure");
        x[0] = c[r].u;
    } else {
        x[0] = c[r].v / 2;
        if (c[r].u != Rational(-B_->field().T) * x[0]) throw ArithError("vector is not in the rational structure");
    }
    for (int m = 1; m <= r; ++m) {
        x[2 * m - 1] = c[r + m].u;
        x[2 * m] = c[r + m].v;
    }
    if (!(to_K(x) == c)) throw ArithError("vector is not in the rational structure");
    return x;
}

std::vector<std::vector<QuadElem>> WeightStructure::rho_K(const QVec& alpha) const {
    const QuadField& K = B_->field();
    QuatElem x = B_->elem(alpha);
    Rational det = x.reduced_norm();
    Rational dr = 1;
    for (int i = 0; i < weight_r(k_); ++i) dr /= det;
    QuadElem a = x.a, b = x.b * Rational(B_->beta()), c = x.b.conj(), d = x.a.conj();
    return rho_matrix<QuadElem>(k_, a, b, c, d, QuadElem(K, dr), QuadElem(K, 0), QuadElem(K, 1));
}

QMat WeightStructure::rho(const QVec& alpha) const {
    int n = k_ - 1;
    if (n == 1) return {{Rational(1)}};
    auto M = rho_K(alpha);
    const QuadField& K = B_->field();
    QMat out = zero_matrix(n, n);
    for (int j = 0; j < n; ++j) {
        std::vector<QuadElem> w(n, QuadElem(K, 0));
        for (int i = 0; i < n; ++i)
            for (int l = 0; l < n; ++l) w[i] = w[i] + M[i][l] * basis_[j][l];
        RVec col = from_K(w);
        for (int i = 0; i < n; ++i) out[i][j] = col[i];
    }
    return out;
}

Rational WeightStructure::pair(const RVec& x, const RVec& y) const {
    Rational s = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        for (size_t j = 0; j < y.size(); ++j)
            if (y[j] != 0 && gram_[i][j] != 0) s += x[i] * gram_[i][j] * y[j];
    }
    return s;
}

// ---------------------------------------------------------------------------

FormSpace::FormSpace(ClassSet cs, int k)
    : cs_(std::move(cs)), rmax_(maximal_order(cs_.R.B)), k_(k), ws_(cs_.R.B, k) {
    if (!rmax_.L.contains(cs_.R.L)) throw VerificationError("Eichler order is not inside the maximal order");
    size_t n = block();
    std::vector<QMat> cols;   // per-class invariant bases
    size_t total = 0;
    for (size_t i = 0; i < h(); ++i) {
        QMat basis;
        if (n == 1) {
            basis = identity_matrix(1);
        } else {
            std::vector<QMat> eqs;
            for (auto& u : cs_.units[i]) eqs.push_back(ws_.rho(u) - identity_matrix(n));
            basis = kernel(vstack(eqs), n);
        }
        total += basis.empty() ? 0 : basis[0].size();
        cols.push_back(basis);
    }
    inv_ = zero_matrix(full_dim(), total);
    size_t c = 0;
    for (size_t i = 0; i < h(); ++i) {
        size_t d = cols[i].empty() ? 0 : cols[i][0].size();
        for (size_t a = 0; a < d; ++a, ++c)
            for (size_t r = 0; r < n; ++r) inv_[i * n + r][c] = cols[i][r][a];
    }
}

Lattice FormSpace::idele_lattice(const Lattice& I, long ramified,
                                 const std::vector<IdeleFactor>& xs) const {
    const QuatAlgebra& B = alg();
    Lattice L = lattice_product(B, I, rmax_.L);
    for (long q : prime_factors(ramified)) {
        if (B.n_minus() % q != 0) throw ConfigError("two-sided prime requested at an unramified prime");
        Rational n = ideal_norm(rmax_, L);
        auto subs = sub_ideals(rmax_, L, n, q);
        if (subs.size() != 1) throw VerificationError("expected a unique two-sided prime multiple");
        L = subs.front();
    }
    long M = cs_.R.level;
    std::set<long> primes;
    for (long q : prime_factors(M)) primes.insert(q);
    for (auto& f : xs) primes.insert(f.q);
    for (long q : primes) {
        int e = (M % q == 0) ? valuation(Int(M), q) : 0;
        const IdeleFactor* f = nullptr;
        for (auto& g : xs)
            if (g.q == q) f = &g;
        LocalMat X = LocalMat::identity(q, e + 1);
        int t = 0;
        if (f) {
            Int det = f->x.det();
            if (det == 0) throw PrecisionError("local factor determinant vanishes to working precision");
            t = valuation(det, q);
            if (f->x.prec < t + e + 1) throw PrecisionError("local factor given to insufficient precision");
            X = f->x.adjugate();
        }
        std::vector<LocalCondition> conds;
        if (t > 0)
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) conds.push_back({q, t, X, r, c});
        if (t + e > 0) conds.push_back({q, t + e, X, 1, 0});
        L = impose_all(B, L, conds);
    }
    return L;
}

std::pair<size_t, QVec> FormSpace::locate(const Lattice& I, long ramified,
                                          const std::vector<IdeleFactor>& xs) const {
    return cs_.identify(idele_lattice(I, ramified, xs));
}

const QMat& FormSpace::atkin_lehner() const {
    std::call_once(tau_once_, [this] {
        const QuatAlgebra& B = alg();
        long ram = 1;
        for (long q : prime_factors(B.n_minus()))
            if (valuation(Int(B.beta()), q) % 2 != 0) ram *= q;
        long M = cs_.R.level;
        std::vector<IdeleFactor> xs;
        for (long q : prime_factors(M)) {
            int e = valuation(Int(M), q);
            xs.push_back({q, LocalMat::make(q, 2 * e + 1, 0, 1, -M, 0)});
        }
        size_t n = block();
        tau_ = zero_matrix(full_dim(), full_dim());
        for (size_t i = 0; i < h(); ++i) {
            auto [j, alpha] = locate(cs_.reps[i], ram, xs);
            QMat r = ws_.rho(alpha);
            for (size_t a = 0; a < n; ++a)
                for (size_t b = 0; b < n; ++b) tau_[i * n + a][j * n + b] = r[a][b];
        }
    });
    return tau_;
}

Rational FormSpace::plain_pairing(const RVec& F, const RVec& G) const {
    Rational s = 0;
    for (size_t i = 0; i < h(); ++i)
        s += ws_.pair(block_of(F, i), block_of(G, i)) / Rational(cs_.gamma_orders[i]);
    return s;
}

Rational FormSpace::petersson(const RVec& F, const RVec& G) const { return plain_pairing(F, atkin_lehner() * G); }

// ---------------------------------------------------------------------------

namespace {

Int classical_factor(long q, int k) { return ipow(Int(q), weight_r(k)); }

void add_block(QMat& T, size_t i, size_t j, size_t n, const QMat& blk, const Rational& c) {
    for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b)
            if (blk[a][b] != 0) T[i * n + a][j * n + b] += c * blk[a][b];
}

std::string op_label(const FormSpace& S, long q) {
    return ((S.order().level * S.alg().n_minus()) % q == 0 ? "U_" : "T_") + std::to_string(q);
}

}  // namespace

HeckeOperator brandt_theta(const FormSpace& S, long q) {
    if (!is_prime(q)) throw ConfigError("Hecke operators are indexed by primes");
    if (S.order().level % q == 0) throw ConfigError("theta method needs q prime to the level");
    const QuatAlgebra& B = S.alg();
    const ClassSet& cs = S.classes();
    size_t n = S.block();
    HeckeOperator T{op_label(S, q), q, S.weight(), zero_matrix(S.full_dim(), S.full_dim())};
    Rational cf(classical_factor(q, S.weight()));
    for (size_t i = 0; i < S.h(); ++i)
        for (size_t j = 0; j < S.h(); ++j) {
            Lattice C = lattice_product(B, cs.reps[i], lattice_conj(B, cs.reps[j])).scaled(1 / cs.norms[j]);
            Rational target = Rational(q) * cs.norms[i] / cs.norms[j];
            auto els = elements_of_norm(B, C, target);
            if (els.empty()) continue;
            Rational w = cf / Rational(static_cast<long>(cs.units[j].size()));
            if (n == 1) {
                T.matrix[i][j] += w * Rational(static_cast<long>(els.size()));
                continue;
            }
            QMat sum = zero_matrix(n, n);
            for (auto& a : els) sum = sum + S.weights().rho(a);
            add_block(T.matrix, i, j, n, sum, w);
        }
    return T;
}

HeckeOperator brandt_cosets(const FormSpace& S, long q) {
    if (!is_prime(q)) throw ConfigError("Hecke operators are indexed by primes");
    const ClassSet& cs = S.classes();
    if (q == cs.neighbor_prime) throw ConfigError("class representatives are not trivial at the neighbour prime");
    long M = S.order().level;
    size_t n = S.block();
    HeckeOperator T{op_label(S, q), q, S.weight(), zero_matrix(S.full_dim(), S.full_dim())};
    Rational cf(classical_factor(q, S.weight()));
    bool ramified = S.alg().n_minus() % q == 0;
    int e = (M % q == 0) ? valuation(Int(M), q) : 0;
    std::vector<std::vector<IdeleFactor>> cosets;
    if (ramified) {
        cosets.push_back({});
    } else {
        for (long x = 0; x < q; ++x) cosets.push_back({{q, LocalMat::make(q, e + 2, q, x, 0, 1)}});
        if (e == 0) cosets.push_back({{q, LocalMat::make(q, 2, 1, 0, 0, q)}});
    }
    for (size_t i = 0; i < S.h(); ++i)
        for (auto& xs : cosets) {
            auto [j, alpha] = S.locate(cs.reps[i], ramified ? q : 1, xs);
            add_block(T.matrix, i, j, n, S.weights().rho(alpha), cf);
        }
    return T;
}

HeckeOperator hecke_operator(const FormSpace& S, long q) {
    if (S.order().level % q == 0) return brandt_cosets(S, q);
    return brandt_theta(S, q);
}

QMat unitary(const HeckeOperator& T) { return Rational(1, classical_factor(T.q, T.k)) * T.matrix; }

QMat restrict_to_forms(const FormSpace& S, const QMat& T) {
    const QMat& V = S.invariant_basis();
    return solve_in_span(V, T * V);
}

std::string HeckeOperator::to_json() const {
    nlohmann::json j;
    j["label"] = label;
    j["q"] = q;
    j["weight"] = k;
    j["normalization"] = "classical";
    j["matrix"] = nlohmann::json::parse(matrix_json(matrix));
    return j.dump(2);
}

std::vector<Rational> rational_spectrum(const FormSpace& S, const HeckeOperator& T) {
    QMat A = restrict_to_forms(S, T.matrix);
    // eigenvalues of T_q on M_k are algebraic integers of absolute value at
    // most 1 + q^{k-1}
    Int bound = ipow(Int(T.q), T.k - 1) + 1;
    return integer_roots(charpoly(A), bound.get_si());
}

// ---------------------------------------------------------------------------

Int UnitRoot::sqrt_d(int M) const {
    if (d == 0) return 0;
    Int s = sqrt_mod_prime_power(Int(d), p, M + 1);
    Int mod_ = ipow(Int(p), M + 1);
    // the sign is fixed by asking (a_p + s)/2 to be a unit
    Int a = residue(a_p, p, M + 1);
    Int A2 = mod(a + s, mod_);
    if (p == 2 ? mod(A2, 4) == 0 : mod(A2, p) == 0) s = mod(-s, mod_);
    return mod(s, ipow(Int(p), M));
}

Int UnitRoot::A_mod(int M) const {
    Int pm = ipow(Int(p), M);
    if (d == 0) return residue(A.a, p, M);
    Int s = sqrt_d(M + 1);
    Int a = residue(a_p, p, M + 1);
    Int twoA = mod(a + s, ipow(Int(p), M + 1));
    if (p == 2) return mod(twoA / 2, pm);
    return mod(twoA * inv_mod(2, pm), pm);
}

UnitRoot unit_root(long p, int k, const Rational& a_p) {
    check_weight(k);
    if (a_p.get_den() != 1) throw ConfigError("a_p must be an integer");
    if (mod(a_p.get_num(), p) == 0)
        throw ConfigError("no unit root: a_p is divisible by p (the ordinarity hypothesis ord_p(alpha_p) = (2-k)/2 fails)");
    UnitRoot u;
    u.p = p;
    u.k = k;
    u.a_p = a_p;
    Int disc = a_p.get_num() * a_p.get_num() - 4 * ipow(Int(p), k - 1);
    Rational pk = Rational(1, ipow(Int(p), weight_r(k)));
    pk.canonicalize();
    Int sq = sqrt(abs(disc));
    if (disc >= 0 && sq * sq == disc) {
        Rational r1 = rat(a_p.get_num() + sq, 2), r2 = rat(a_p.get_num() - sq, 2);
        u.A = QuadNum(valuation(r1, p) == 0 ? r1 : r2);
        u.d = 0;
    } else {
        if (!disc.fits_slong_p()) throw ConfigError("discriminant too large");
        u.d = disc.get_si();
        // A = (a + r)/2 with r the square root chosen p-adically in sqrt_d
        u.A = QuadNum(a_p / 2, Rational(1, 2), u.d);
    }
    u.alpha = u.A * QuadNum(pk);
    return u;
}

RVec AutoForm::rational_values() const {
    RVec out;
    for (auto& v : values) {
        if (!v.is_rational()) throw ArithError("form has irrational values");
        out.push_back(v.a);
    }
    return out;
}

std::string AutoForm::to_json() const {
    nlohmann::json j;
    j["weight"] = space->weight();
    j["level"] = space->order().level;
    j["n_minus"] = space->alg().n_minus();
    j["classes"] = space->h();
    nlohmann::json vals = nlohmann::json::array();
    for (size_t i = 0; i < space->h(); ++i) {
        nlohmann::json b = nlohmann::json::array();
        for (auto& v : space->block_of(values, i)) b.push_back(v.str());
        vals.push_back(b);
    }
    j["values"] = vals;
    nlohmann::json ev = nlohmann::json::object();
    for (auto& [q, a] : eigenvalues) ev[std::to_string(q)] = to_string(a);
    j["eigenvalues"] = ev;
    j["normalization"] = lambda_normalized ? "lambda" : "raw";
    if (stabilization) {
        j["p"] = stabilization->p;
        j["alpha"] = stabilization->alpha.str();
    }
    return j.dump(2);
}

namespace {

QMat eigenspace_basis(const FormSpace& S, const std::vector<std::pair<long, Rational>>& target) {
    size_t d = S.dimension();
    std::vector<QMat> eqs;
    for (auto& [q, a] : target) {
        QMat A = restrict_to_forms(S, hecke_operator(S, q).matrix);
        for (size_t i = 0; i < d; ++i) A[i][i] -= a;
        eqs.push_back(A);
    }
    return eqs.empty() ? identity_matrix(d) : kernel(vstack(eqs), d);
}

}  // namespace

size_t eigenspace_dimension(const FormSpace& S, const std::vector<std::pair<long, Rational>>& target) {
    QMat ker = eigenspace_basis(S, target);
    return ker.empty() ? 0 : ker[0].size();
}

AutoForm eigenform(std::shared_ptr<const FormSpace> S, const std::vector<std::pair<long, Rational>>& target) {
    size_t d = S->dimension();
    QMat ker = eigenspace_basis(*S, target);
    size_t dim = ker.empty() ? 0 : ker[0].size();
    if (dim != 1)
        throw ConfigError("target eigenvalues cut out a space of dimension " + std::to_string(dim) + ", expected 1");
    RVec c(d);
    for (size_t i = 0; i < d; ++i) c[i] = ker[i][0];
    RVec F = primitive_integral(S->invariant_basis() * c);
    AutoForm f;
    f.space = S;
    for (auto& x : F) f.values.push_back(QuadNum(x));
    for (auto& [q, a] : target) f.eigenvalues[q] = a;
    f.lambda_normalized = true;
    return f;
}

std::vector<QuadNum> apply_Up(const FormSpace& S, long p, const std::vector<QuadNum>& F) {
    long M = S.order().level;
    if (M % p != 0) throw ConfigError("U_p needs p | level");
    int e = valuation(Int(M), p);
    std::vector<QuadNum> out;
    for (size_t i = 0; i < S.h(); ++i) {
        std::vector<QuadNum> acc(S.block(), QuadNum(0));
        for (long x = 0; x < p; ++x) {
            auto v = S.value_at(F, S.classes().reps[i], 1,
                                {{p, LocalMat::make(p, e + 2, p, x, 0, 1)}});
            for (size_t a = 0; a < acc.size(); ++a) acc[a] = acc[a] + v[a];
        }
        out.insert(out.end(), acc.begin(), acc.end());
    }
    return out;
}

AutoForm p_stabilize(const AutoForm& f, long p, std::shared_ptr<const FormSpace> pspace) {
    const FormSpace& S = *f.space;
    long M = S.order().level;
    if (S.alg().n_minus() % p == 0) throw ConfigError("p must not divide N-");
    if (M % p == 0) return f;
    if (pspace->order().level != p * M || pspace->weight() != S.weight())
        throw ConfigError("p-stabilization needs the form space of level p * M");
    Rational ap;
    if (f.eigenvalues.count(p)) {
        ap = f.eigenvalues.at(p);
    } else {
        auto Tp = hecke_operator(S, p);
        auto img = mat_apply(Tp.matrix, f.values);
        bool found = false;
        for (size_t i = 0; i < img.size() && !found; ++i)
            if (!f.values[i].is_zero()) {
                QuadNum r = img[i] / f.values[i];
                if (!r.is_rational()) throw ArithError("T_p eigenvalue is not rational");
                ap = r.a;
                found = true;
            }
    }
    UnitRoot ur = unit_root(p, S.weight(), ap);
    QuadNum inv_alpha = QuadNum(1) / ur.alpha;
    AutoForm g;
    g.space = pspace;
    const ClassSet& pc = pspace->classes();
    for (size_t i = 0; i < pspace->h(); ++i) {
        auto v1 = S.value_at(f.values, pc.reps[i], 1, {});
        auto v2 = S.value_at(f.values, pc.reps[i], 1, {{p, LocalMat::make(p, 2, 1, 0, 0, p)}});
        for (size_t a = 0; a < v1.size(); ++a) g.values.push_back(v1[a] - inv_alpha * v2[a]);
    }
    g.eigenvalues = f.eigenvalues;
    g.eigenvalues.erase(p);
    g.stabilization = ur;
    return g;
}

}  // namespace gt
