#include "gt/linalg.hpp"

#include "json.hpp"

namespace gt {

QMat zero_matrix(size_t rows, size_t cols) { return QMat(rows, RVec(cols, Rational(0))); }

QMat identity_matrix(size_t n) {
    QMat m = zero_matrix(n, n);
    for (size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

QMat operator*(const QMat& a, const QMat& b) {
    size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    QMat c = zero_matrix(n, m);
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < k; ++l) {
            if (a[i][l] == 0) continue;
            for (size_t j = 0; j < m; ++j)
                if (b[l][j] != 0) c[i][j] += a[i][l] * b[l][j];
        }
    return c;
}

QMat operator+(const QMat& a, const QMat& b) {
    QMat c = a;
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[i].size(); ++j) c[i][j] += b[i][j];
    return c;
}

QMat operator-(const QMat& a, const QMat& b) {
    QMat c = a;
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[i].size(); ++j) c[i][j] -= b[i][j];
    return c;
}

QMat operator*(const Rational& s, const QMat& a) {
    QMat c = a;
    for (auto& row : c)
        for (auto& x : row) x *= s;
    return c;
}

RVec operator*(const QMat& a, const RVec& v) {
    RVec out(a.size(), Rational(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j)
            if (a[i][j] != 0 && v[j] != 0) out[i] += a[i][j] * v[j];
    return out;
}

RVec operator*(const Rational& c, const RVec& v) {
    RVec out = v;
    for (auto& x : out) x *= c;
    return out;
}

QMat transpose(const QMat& a) {
    if (a.empty()) return {};
    QMat t = zero_matrix(a[0].size(), a.size());
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
    return t;
}

std::vector<size_t> rref(QMat& a) {
    std::vector<size_t> piv;
    if (a.empty()) return piv;
    size_t rows = a.size(), cols = a[0].size(), r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t p = r;
        while (p < rows && a[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[r]);
        Rational inv = 1 / a[r][c];
        for (auto& x : a[r]) x *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            Rational f = a[i][c];
            for (size_t j = c; j < cols; ++j)
                if (a[r][j] != 0) a[i][j] -= f * a[r][j];
        }
        piv.push_back(c);
        ++r;
    }
    return piv;
}

size_t rank(QMat a) { return rref(a).size(); }

QMat kernel(const QMat& a, size_t cols) {
    QMat m = a;
    auto piv = rref(m);
    std::vector<bool> is_piv(cols, false);
    for (auto c : piv) is_piv[c] = true;
    std::vector<size_t> free;
    for (size_t c = 0; c < cols; ++c)
        if (!is_piv[c]) free.push_back(c);
    QMat K = zero_matrix(cols, free.size());
    for (size_t f = 0; f < free.size(); ++f) {
        K[free[f]][f] = 1;
        for (size_t r = 0; r < piv.size(); ++r) K[piv[r]][f] = -m[r][free[f]];
    }
    return K;
}

QMat vstack(const std::vector<QMat>& parts) {
    QMat out;
    for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

QMat solve_in_span(const QMat& V, const QMat& W) {
    size_t n = V.size(), d = V.empty() ? 0 : V[0].size(), m = W.empty() ? 0 : W[0].size();
    QMat aug = zero_matrix(n, d + m);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < d; ++j) aug[i][j] = V[i][j];
        for (size_t j = 0; j < m; ++j) aug[i][d + j] = W[i][j];
    }
    auto piv = rref(aug);
    if (piv.size() != d) throw ArithError("solve_in_span: dependent columns or inconsistent system");
    for (size_t j = 0; j < d; ++j)
        if (piv[j] != j) throw ArithError("solve_in_span: dependent columns");
    for (size_t r = d; r < n; ++r)
        for (size_t j = 0; j < m; ++j)
            if (aug[r][d + j] != 0) throw ArithError("solve_in_span: target not in span");
    QMat X = zero_matrix(d, m);
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < m; ++j) X[i][j] = aug[i][d + j];
    return X;
}

std::vector<Rational> charpoly(const QMat& a) {
    // Faddeev-LeVerrier
    size_t n = a.size();
    std::vector<Rational> c(n + 1, Rational(0));
    c[n] = 1;
    QMat M = zero_matrix(n, n);
    for (size_t k = 1; k <= n; ++k) {
        QMat AM = a * M;
        for (size_t i = 0; i < n; ++i) AM[i][i] += c[n - k + 1];
        M = AM;
        QMat AMk = a * M;
        Rational tr = 0;
        for (size_t i = 0; i < n; ++i) tr += AMk[i][i];
        c[n - k] = -tr / Rational(static_cast<long>(k));
    }
    return c;
}

namespace {

Rational eval(const std::vector<Rational>& p, const Rational& x) {
    Rational s = 0;
    for (size_t i = p.size(); i-- > 0;) s = s * x + p[i];
    return s;
}

std::vector<Rational> deflate(const std::vector<Rational>& p, const Rational& r) {
    std::vector<Rational> q(p.size() - 1);
    Rational carry = 0;
    for (size_t i = p.size(); i-- > 1;) {
        carry = carry * r + p[i];
        q[i - 1] = carry;
    }
    return q;
}

}  // namespace

std::vector<Rational> integer_roots(std::vector<Rational> p, long bound) {
    std::vector<Rational> roots;
    while (p.size() > 1 && p.back() == 0) p.pop_back();
    for (long x = -bound; x <= bound && p.size() > 1; ++x) {
        Rational rx(x);
        while (p.size() > 1 && eval(p, rx) == 0) {
            roots.push_back(rx);
            p = deflate(p, rx);
        }
    }
    return roots;
}

RVec primitive_integral(const RVec& v) {
    Int L = 1;
    for (auto& x : v) L = lcm(L, x.get_den());
    Int g = 0;
    std::vector<Int> z;
    for (auto& x : v) {
        z.push_back(x.get_num() * (L / x.get_den()));
        g = gcd(g, z.back());
    }
    if (g == 0) throw ArithError("primitive_integral: zero vector");
    int sign = 1;
    for (auto& x : z)
        if (x != 0) {
            sign = x > 0 ? 1 : -1;
            break;
        }
    RVec out;
    for (auto& x : z) out.push_back(Rational(Int(sign * x / g)));
    return out;
}

std::string matrix_json(const QMat& a) {
    nlohmann::json j = nlohmann::json::array();
    for (auto& row : a) {
        nlohmann::json r = nlohmann::json::array();
        for (auto& x : row) r.push_back(to_string(x));
        j.push_back(r);
    }
    return j.dump();
}

}  // namespace gt
