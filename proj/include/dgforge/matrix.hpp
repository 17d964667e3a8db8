#pragma once

#include <string>
#include <vector>

#include "dgforge/sparse_vec.hpp"

namespace dgforge {

struct Entry {
    int row;
    int col;
    Scalar value;
};

// Sparse matrix over one field, stored row-major. No explicit zeros.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, Field f);
    static Matrix identity(int n, Field f);
    static Matrix zero(int rows, int cols, Field f) { return Matrix(rows, cols, f); }
    // Every entry must carry field `f`; mixed tags raise FieldMismatch.
    static Matrix from_entries(int rows, int cols, Field f, const std::vector<Entry>& entries);
    static Matrix from_ints(Field f, const std::vector<std::vector<long>>& rows);
    static Matrix from_columns(int rows, Field f, const std::vector<SparseVec>& columns);
    static Matrix from_rows(int cols, Field f, std::vector<SparseVec> rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Field field() const { return field_; }
    bool is_zero() const;
    std::size_t nonzeros() const;
    double density() const;

    Scalar at(int r, int c) const;
    void set(int r, int c, const Scalar& v);
    void add_to(int r, int c, const Scalar& v);
    const SparseVec& row(int r) const { return data_[r]; }
    SparseVec column(int c) const;
    std::vector<SparseVec> columns() const;
    std::vector<Entry> entries() const;

    Matrix transpose() const;
    SparseVec apply(const SparseVec& v) const;
    Matrix operator*(const Matrix& o) const;
    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    Matrix operator-() const;
    Matrix scaled(const Scalar& c) const;

    // Columns [c0, c0 + n).
    Matrix column_block(int c0, int n) const;
    Matrix row_block(int r0, int n) const;
    static Matrix hstack(const Matrix& a, const Matrix& b);
    static Matrix vstack(const Matrix& a, const Matrix& b);
    // Adds `block` into this matrix with its top-left corner at (r0, c0).
    void place(int r0, int c0, const Matrix& block);

    friend bool operator==(const Matrix& a, const Matrix& b);
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

    std::string to_string() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    Field field_;
    std::vector<SparseVec> data_;
};

} // namespace dgforge
