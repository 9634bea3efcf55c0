// Dense exact linear algebra over Q (row-major std::vector matrices).
#pragma once

#include "gt/exact_arith.hpp"

#include <vector>

namespace gt {

using RVec = std::vector<Rational>;
using QMat = std::vector<RVec>;

QMat zero_matrix(size_t rows, size_t cols);
QMat identity_matrix(size_t n);
QMat operator*(const QMat& a, const QMat& b);
QMat operator+(const QMat& a, const QMat& b);
QMat operator-(const QMat& a, const QMat& b);
QMat operator*(const Rational& c, const QMat& a);
RVec operator*(const QMat& a, const RVec& v);
RVec operator*(const Rational& c, const RVec& v);
QMat transpose(const QMat& a);
size_t rank(QMat a);
// Reduced row echelon form in place; returns pivot columns.
std::vector<size_t> rref(QMat& a);
// Basis of {x : a x = 0}, as columns of the returned matrix (cols x dim).
QMat kernel(const QMat& a, size_t cols);
// Stack matrices vertically.
QMat vstack(const std::vector<QMat>& parts);
// Solve V X = W for X when the columns of V are independent and W lies in
// their span; throws otherwise.
QMat solve_in_span(const QMat& V, const QMat& W);
// Characteristic polynomial (coefficients, low degree first, monic).
std::vector<Rational> charpoly(const QMat& a);
// Integer roots in [-bound, bound] of a rational polynomial, with multiplicity.
std::vector<Rational> integer_roots(std::vector<Rational> poly, long bound);

// Scale a nonzero vector to coprime integers with positive first nonzero entry.
RVec primitive_integral(const RVec& v);

template <class R>
std::vector<R> mat_apply(const QMat& a, const std::vector<R>& v) {
    std::vector<R> out(a.size(), R(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j)
            if (a[i][j] != 0) out[i] = out[i] + v[j] * R(a[i][j]);
    return out;
}

std::string matrix_json(const QMat& a);

}  // namespace gt
