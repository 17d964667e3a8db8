#pragma once

#include <optional>
#include <vector>

#include "dgforge/matrix.hpp"

namespace dgforge {

// Reduced row echelon form. Pivots are the leftmost nonzero columns and the
// form is unique, so every basis derived from it is reproducible.
struct Echelon {
    std::vector<int> pivots; // pivot column of each row of `rref`
    Matrix rref;             // rank x cols
};

Echelon row_echelon(const Matrix& m);
int rank(const Matrix& m);
// Columns form a basis of the null space; one column per non-pivot column.
Matrix kernel_basis(const Matrix& m);
// Some x with m * x = b, or nullopt when inconsistent.
std::optional<Matrix> solve(const Matrix& m, const Matrix& b);
// Columns extending the (independent) columns of `sub` to a basis of k^n.
Matrix complement_basis(const Matrix& sub, int ambient_dim);
// Indices of the greedy leftmost maximal independent set of columns.
std::vector<int> pivot_columns(const Matrix& m);

// Incrementally built span with provenance: every inserted vector carries a
// tag, and vectors in the span can be expressed in terms of the tags.
class SpanReducer {
public:
    SpanReducer(Field f, int dim) : field_(f), dim_(dim), lead_row_(dim, -1) {}

    Field field() const { return field_; }
    int dim() const { return dim_; }
    int rank() const { return static_cast<int>(rows_.size()); }

    // Inserts v with the given tag; returns false (and stores nothing) when
    // v already lies in the span.
    bool insert(const SparseVec& v, int tag);
    bool contains(const SparseVec& v) const;
    // Coefficients over tags with v = sum coeff[tag] * inserted(tag).
    std::optional<SparseVec> express(const SparseVec& v) const;

private:
    // Reduces v in place; `combo` accumulates the subtracted tag combination.
    void reduce(SparseVec& v, SparseVec* combo) const;

    struct Row {
        SparseVec vec;   // leading coefficient 1
        SparseVec combo; // vec = sum combo[tag] * inserted(tag)
    };
    Field field_;
    int dim_;
    std::vector<int> lead_row_;
    std::vector<Row> rows_;
};

} // namespace dgforge
