#pragma once

#include <random>

#include "dgforge/complex.hpp"
#include "dgforge/linalg.hpp"

namespace testsupport {

using namespace dgforge;

inline Matrix random_matrix(std::mt19937& rng, Field f, int rows, int cols, int density_pct = 60)
{
    std::uniform_int_distribution<int> pct(0, 99);
    std::uniform_int_distribution<long> val(-3, 3);
    Matrix m(rows, cols, f);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            if (pct(rng) < density_pct)
                m.add_to(i, j, Scalar(f, val(rng)));
    return m;
}

inline Matrix random_invertible(std::mt19937& rng, Field f, int n)
{
    while (true) {
        Matrix m = random_matrix(rng, f, n, n, 70);
        if (rank(m) == n)
            return m;
    }
}

inline Matrix inverse(const Matrix& m)
{
    return *solve(m, Matrix::identity(m.rows(), m.field()));
}

// Random complex on [lo, lo + len - 1]: a direct sum of interval pieces
// in a random basis.
inline Complex random_complex(std::mt19937& rng, Field f, int lo, int len, int max_piece = 2)
{
    std::uniform_int_distribution<int> piece(0, max_piece);
    std::vector<int> h(len), b(len);
    for (int i = 0; i < len; ++i) {
        h[i] = piece(rng);
        b[i] = i + 1 < len ? piece(rng) : 0;
    }
    std::vector<int> dims(len);
    for (int i = 0; i < len; ++i)
        dims[i] = h[i] + b[i] + (i > 0 ? b[i - 1] : 0);
    // basis of degree i: [incoming b_{i-1} | homology h_i | outgoing b_i]
    std::vector<Matrix> basis, inv;
    for (int i = 0; i < len; ++i) {
        basis.push_back(random_invertible(rng, f, dims[i]));
        inv.push_back(inverse(basis.back()));
    }
    std::vector<Matrix> diffs;
    for (int i = 0; i + 1 < len; ++i) {
        Matrix d(dims[i + 1], dims[i], f);
        for (int k = 0; k < b[i]; ++k)
            d.set(k, (i > 0 ? b[i - 1] : 0) + h[i] + k, Scalar::one(f));
        diffs.push_back(basis[i + 1] * d * inv[i]);
    }
    return Complex(f, lo, dims, diffs);
}

// Random degree-0 chain map: a random element of Z^0 of the hom complex.
inline ChainMap random_chain_map(std::mt19937& rng, ComplexPtr m, ComplexPtr n)
{
    Field f = m->field();
    HomComplex h = hom_complex(*m, *n);
    std::vector<Matrix> comps;
    int lo = m->lo(), hi = m->hi();
    if (h.complex.dim(0) == 0) {
        for (int i = lo; i <= hi; ++i)
            comps.emplace_back(n->dim(i), m->dim(i), f);
        return ChainMap(m, n, lo, comps);
    }
    Matrix z = kernel_basis(h.complex.diff(0));
    SparseVec elt(f);
    std::uniform_int_distribution<long> val(-2, 2);
    for (int c = 0; c < z.cols(); ++c)
        elt.axpy(Scalar(f, val(rng)), z.column(c));
    for (int i = lo; i <= hi; ++i) {
        Matrix blk = h.block(elt, 0, i);
        if (blk.rows() == 0 && blk.cols() == 0)
            blk = Matrix(n->dim(i), m->dim(i), f);
        comps.push_back(blk);
    }
    return ChainMap(m, n, lo, comps);
}

inline std::vector<Field> test_fields()
{
    return {Field::prime(2), Field::prime(3), Field::prime(7), Field::rationals()};
}

} // namespace testsupport
