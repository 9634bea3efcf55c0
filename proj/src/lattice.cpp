#include "gt/lattice.hpp"

#include <cmath>
#include <sstream>

namespace gt {

QVec qvec(const QuatElem& x) { return x.coords(); }

QuatElem qelem(const QuatAlgebra& B, const QVec& v) { return B.elem(v); }

QVec qmul(const QuatAlgebra& B, const QVec& x, const QVec& y) {
    const auto& m = B.mult_table();
    QVec r{0, 0, 0, 0};
    for (int i = 0; i < 4; ++i) {
        if (x[i] == 0) continue;
        for (int j = 0; j < 4; ++j) {
            if (y[j] == 0) continue;
            Rational p = x[i] * y[j];
            for (int k = 0; k < 4; ++k)
                if (m[i][j][k]) r[k] += p * m[i][j][k];
        }
    }
    return r;
}

QVec qconj(const QuatAlgebra& B, const QVec& x) {
    long T = B.field().T;
    return {x[0] + T * x[1], -x[1], -x[2], -x[3]};
}

Rational qnorm(const QuatAlgebra& B, const QVec& x) {
    auto Q = B.norm_form();
    Rational r = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j)
            if (Q[i][j]) r += Q[i][j] * x[i] * x[j];
    return r;
}

Rational qtrace(const QuatAlgebra& B, const QVec& x) { return 2 * x[0] + B.field().T * x[1]; }

// ---------------------------------------------------------------------------

namespace {

// Row-style Hermite normal form of an integer matrix with 4 columns and rank 4.
IMat4 hnf(std::vector<IVec> rows) {
    size_t n = rows.size();
    size_t r = 0;
    for (int j = 0; j < 4; ++j) {
        for (;;) {
            // find the row >= r with the smallest nonzero |entry| in column j
            size_t best = n;
            for (size_t i = r; i < n; ++i)
                if (rows[i][j] != 0 && (best == n || abs(rows[i][j]) < abs(rows[best][j]))) best = i;
            if (best == n) throw ArithError("lattice generators do not have full rank");
            std::swap(rows[r], rows[best]);
            bool done = true;
            for (size_t i = r + 1; i < n; ++i) {
                if (rows[i][j] == 0) continue;
                Int t;
                mpz_fdiv_q(t.get_mpz_t(), rows[i][j].get_mpz_t(), rows[r][j].get_mpz_t());
                for (int c = 0; c < 4; ++c) rows[i][c] -= t * rows[r][c];
                if (rows[i][j] != 0) done = false;
            }
            if (done) break;
        }
        if (rows[r][j] < 0)
            for (int c = 0; c < 4; ++c) rows[r][c] = -rows[r][c];
        for (size_t i = 0; i < r; ++i) {
            Int t;
            mpz_fdiv_q(t.get_mpz_t(), rows[i][j].get_mpz_t(), rows[r][j].get_mpz_t());
            if (t != 0)
                for (int c = 0; c < 4; ++c) rows[i][c] -= t * rows[r][c];
        }
        ++r;
    }
    IMat4 out;
    for (int i = 0; i < 4; ++i) out[i] = rows[i];
    return out;
}

}  // namespace

Lattice Lattice::from_int_rows(const std::vector<IVec>& rows, const Int& den) {
    Lattice L;
    L.rows = hnf(rows);
    Int g = den;
    for (auto& r : L.rows)
        for (auto& x : r) g = gcd(g, x);
    L.den = den / g;
    for (auto& r : L.rows)
        for (auto& x : r) x /= g;
    return L;
}

Lattice Lattice::from_generators(const std::vector<QVec>& gens) {
    Int D = 1;
    for (auto& v : gens)
        for (auto& x : v) D = lcm(D, x.get_den());
    std::vector<IVec> rows;
    for (auto& v : gens) {
        IVec r;
        for (int i = 0; i < 4; ++i) r[i] = v[i].get_num() * (D / v[i].get_den());
        rows.push_back(r);
    }
    return from_int_rows(rows, D);
}

QVec Lattice::basis(int i) const {
    QVec v;
    for (int c = 0; c < 4; ++c) {
        v[c] = Rational(rows[i][c], den);
        v[c].canonicalize();
    }
    return v;
}

std::vector<QVec> Lattice::basis_vectors() const { return {basis(0), basis(1), basis(2), basis(3)}; }

std::optional<IVec> Lattice::coords(const QVec& x) const {
    // x * den = c * rows, rows upper triangular
    std::array<Rational, 4> t;
    for (int i = 0; i < 4; ++i) t[i] = x[i] * Rational(den);
    IVec c;
    for (int j = 0; j < 4; ++j) {
        Rational cj = t[j] / Rational(rows[j][j]);
        if (cj.get_den() != 1) return std::nullopt;
        c[j] = cj.get_num();
        for (int k = j; k < 4; ++k) t[k] -= Rational(c[j] * rows[j][k]);
    }
    return c;
}

bool Lattice::contains(const Lattice& o) const {
    for (int i = 0; i < 4; ++i)
        if (!contains(o.basis(i))) return false;
    return true;
}

Rational Lattice::covolume() const {
    Int d = 1;
    for (int i = 0; i < 4; ++i) d *= rows[i][i];
    Rational r(d, ipow(den, 4));
    r.canonicalize();
    return r;
}

Lattice Lattice::scaled(const Rational& c) const {
    std::vector<QVec> g;
    for (int i = 0; i < 4; ++i) {
        auto v = basis(i);
        for (auto& x : v) x *= c;
        g.push_back(v);
    }
    return from_generators(g);
}

Lattice Lattice::operator+(const Lattice& o) const {
    auto g = basis_vectors();
    for (auto& v : o.basis_vectors()) g.push_back(v);
    return from_generators(g);
}

bool Lattice::operator<(const Lattice& o) const {
    if (den != o.den) return den < o.den;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (rows[i][j] != o.rows[i][j]) return rows[i][j] < o.rows[i][j];
    return false;
}

std::string Lattice::str() const {
    std::ostringstream os;
    os << "1/" << den << "[";
    for (int i = 0; i < 4; ++i) {
        os << (i ? ";" : "");
        for (int j = 0; j < 4; ++j) os << (j ? "," : "") << rows[i][j];
    }
    os << "]";
    return os.str();
}

Lattice lattice_product(const QuatAlgebra& B, const Lattice& L1, const Lattice& L2) {
    std::vector<QVec> g;
    auto b1 = L1.basis_vectors(), b2 = L2.basis_vectors();
    for (auto& x : b1)
        for (auto& y : b2) g.push_back(qmul(B, x, y));
    return Lattice::from_generators(g);
}

Lattice lattice_conj(const QuatAlgebra& B, const Lattice& L) {
    std::vector<QVec> g;
    for (auto& x : L.basis_vectors()) g.push_back(qconj(B, x));
    return Lattice::from_generators(g);
}

Lattice left_multiply(const QuatAlgebra& B, const QVec& x, const Lattice& L) {
    std::vector<QVec> g;
    for (auto& y : L.basis_vectors()) g.push_back(qmul(B, x, y));
    return Lattice::from_generators(g);
}

Lattice sublattice_condition(const Lattice& L, const IVec& a0, const Int& Q) {
    std::vector<IVec> bv(L.rows.begin(), L.rows.end());
    std::array<Int, 4> av;
    for (int i = 0; i < 4; ++i) av[i] = mod(a0[i], Q);
    for (;;) {
        int best = -1, nz = 0;
        for (int i = 0; i < 4; ++i)
            if (av[i] != 0) {
                ++nz;
                if (best < 0 || abs(av[i]) < abs(av[best])) best = i;
            }
        if (nz == 0) return L;
        if (nz == 1) {
            Int g = gcd(av[best], Q);
            Int s = Q / g;
            for (auto& x : bv[best]) x *= s;
            return Lattice::from_int_rows(bv, L.den);
        }
        for (int i = 0; i < 4; ++i) {
            if (i == best || av[i] == 0) continue;
            Int t;
            mpz_fdiv_q(t.get_mpz_t(), av[i].get_mpz_t(), av[best].get_mpz_t());
            av[i] -= t * av[best];
            for (int c = 0; c < 4; ++c) bv[i][c] -= t * bv[best][c];
        }
    }
}

Lattice impose(const QuatAlgebra& B, const Lattice& L, const LocalCondition& cond) {
    IVec a;
    for (int i = 0; i < 4; ++i) {
        LocalMat m = B.split_coords(cond.q, cond.t, L.rows[i], L.den);
        LocalMat y = cond.X.with_precision(cond.t) * m;
        a[i] = y.e[2 * cond.r + cond.c];
    }
    return sublattice_condition(L, a, ipow(Int(cond.q), cond.t));
}

Lattice impose_all(const QuatAlgebra& B, Lattice L, const std::vector<LocalCondition>& conds) {
    for (auto& c : conds) L = impose(B, L, c);
    return L;
}

// ---------------------------------------------------------------------------

NormGram norm_gram(const QuatAlgebra& B, const Lattice& L) {
    auto G0 = B.trace_gram();
    std::array<std::array<Int, 4>, 4> G;
    Int g = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            Int s = 0;
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b)
                    if (G0[a][b]) s += L.rows[i][a] * G0[a][b] * L.rows[j][b];
            G[i][j] = s;
            g = gcd(g, s);
        }
    // 2 N(x) den^2 = c^T G c ; divide through by g
    NormGram ng;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            Int v = G[i][j] / g;
            if (!v.fits_slong_p()) throw PrecisionError("Gram matrix entries too large");
            ng.G[i][j] = v.get_si();
        }
    // c^T G' c = 2 N(x) den^2 / g
    ng.scale = Rational(L.den * L.den, g);
    ng.scale.canonicalize();
    return ng;
}

namespace {

using Mat4ll = std::array<std::array<long long, 4>, 4>;

// Exact LLL on a positive definite integral Gram matrix. Returns the unimodular
// transform U (columns are new basis vectors in old coordinates).
std::array<std::array<long, 4>, 4> lll(const Mat4ll& G0) {
    std::array<std::array<Int, 4>, 4> U{};
    for (int i = 0; i < 4; ++i) U[i][i] = 1;
    auto gram = [&](int a, int b) {
        Int s = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) s += U[i][a] * Int(static_cast<long>(G0[i][j])) * U[j][b];
        return Rational(s);
    };
    const Rational delta(3, 4);
    int k = 1;
    int guard = 0;
    while (k < 4) {
        if (++guard > 100000) break;
        std::array<std::array<Rational, 4>, 4> mu{};
        std::array<Rational, 4> Bs{};
        auto gs = [&]() {
            for (int i = 0; i < 4; ++i) {
                for (int j = 0; j < i; ++j) {
                    Rational s = gram(i, j);
                    for (int l = 0; l < j; ++l) s -= mu[j][l] * mu[i][l] * Bs[l];
                    mu[i][j] = s / Bs[j];
                }
                Rational s = gram(i, i);
                for (int l = 0; l < i; ++l) s -= mu[i][l] * mu[i][l] * Bs[l];
                Bs[i] = s;
            }
        };
        gs();
        for (int j = k - 1; j >= 0; --j) {
            Rational m = mu[k][j];
            // nearest integer
            Int r;
            Rational twice = m * 2 + 1;
            mpz_fdiv_q(r.get_mpz_t(), twice.get_num().get_mpz_t(), Int(twice.get_den() * 2).get_mpz_t());
            if (r != 0) {
                for (int i = 0; i < 4; ++i) U[i][k] -= r * U[i][j];
                gs();
            }
        }
        if (Bs[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * Bs[k - 1])
            ++k;
        else {
            for (int i = 0; i < 4; ++i) std::swap(U[i][k], U[i][k - 1]);
            k = std::max(k - 1, 1);
        }
    }
    std::array<std::array<long, 4>, 4> out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if (!U[i][j].fits_slong_p()) throw PrecisionError("LLL transform overflow");
            out[i][j] = U[i][j].get_si();
        }
    return out;
}

}  // namespace

void enumerate_short(const NormGram& ng, long long vmax,
                     const std::function<void(const std::array<long, 4>&, long long)>& f) {
    if (vmax <= 0) return;
    auto U = lll(ng.G);
    Mat4ll G;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            __int128 s = 0;
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) s += (__int128)U[i][a] * ng.G[i][j] * U[j][b];
            G[a][b] = static_cast<long long>(s);
        }
    // Cholesky-type decomposition Q(x) = sum_i q[i][i] (x_i + sum_{j>i} q[i][j] x_j)^2
    long double q[4][4];
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) q[i][j] = static_cast<long double>(G[i][j]);
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            q[j][i] = q[i][j];
            q[i][j] = q[i][j] / q[i][i];
        }
        for (int k = i + 1; k < 4; ++k)
            for (int l = k; l < 4; ++l) q[k][l] -= q[k][i] * q[i][l];
    }
    long x[4] = {0, 0, 0, 0};
    const long double tol = 1e-9L * static_cast<long double>(vmax) + 1e-6L;
    std::array<long, 4> out;
    std::function<void(int, long double)> rec = [&](int i, long double rem) {
        long double c = 0;
        for (int j = i + 1; j < 4; ++j) c -= q[i][j] * x[j];
        long double r = std::sqrt(std::max(rem + tol, 0.0L) / q[i][i]);
        long lo = static_cast<long>(std::ceil(c - r)), hi = static_cast<long>(std::floor(c + r));
        for (long xi = lo; xi <= hi; ++xi) {
            long double d = xi - c;
            long double t = q[i][i] * d * d;
            if (t > rem + tol) continue;
            x[i] = xi;
            if (i == 0) {
                __int128 v = 0;
                for (int a = 0; a < 4; ++a)
                    for (int b = 0; b < 4; ++b) v += (__int128)x[a] * G[a][b] * x[b];
                if (v > 0 && v <= vmax) {
                    for (int a = 0; a < 4; ++a) {
                        long s = 0;
                        for (int b = 0; b < 4; ++b) s += U[a][b] * x[b];
                        out[a] = s;
                    }
                    f(out, static_cast<long long>(v));
                }
            } else
                rec(i - 1, rem - t);
        }
        x[i] = 0;
    };
    rec(3, static_cast<long double>(vmax));
}

std::vector<QVec> elements_of_norm(const QuatAlgebra& B, const Lattice& L, const Rational& n) {
    auto ng = norm_gram(B, L);
    Rational target = 2 * n * Rational(ng.scale);
    std::vector<QVec> out;
    if (target.get_den() != 1) return out;
    if (!target.get_num().fits_slong_p()) throw PrecisionError("norm target too large");
    long long t = target.get_num().get_si();
    auto bv = L.basis_vectors();
    enumerate_short(ng, t, [&](const std::array<long, 4>& c, long long v) {
        if (v != t) return;
        QVec x{0, 0, 0, 0};
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < 4; ++k) x[k] += bv[i][k] * c[i];
        out.push_back(x);
    });
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<long> norm_counts(const QuatAlgebra& B, const Lattice& L, const Rational& unit, int count) {
    auto ng = norm_gram(B, L);
    Rational step = 2 * unit * Rational(ng.scale);
    std::vector<long> cnt(count + 1, 0);
    Rational top = step * count;
    long long vmax = top.get_num().get_si() / top.get_den().get_si();
    enumerate_short(ng, vmax, [&](const std::array<long, 4>&, long long v) {
        Rational j = Rational(static_cast<long>(v)) / step;
        if (j.get_den() == 1 && j.get_num() <= count) cnt[j.get_num().get_si()]++;
    });
    cnt.erase(cnt.begin());
    return cnt;
}

}  // namespace gt
