#include "dgforge/matrix.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "dgforge/error.hpp"

namespace dgforge {

Matrix::Matrix(int rows, int cols, Field f) : rows_(rows), cols_(cols), field_(f), data_(rows, SparseVec(f))
{
    if (rows < 0 || cols < 0)
        throw DimensionMismatch("negative matrix shape");
}

Matrix Matrix::identity(int n, Field f)
{
    Matrix m(n, n, f);
    for (int i = 0; i < n; ++i)
        m.data_[i].add(i, Scalar::one(f));
    return m;
}

Matrix Matrix::from_entries(int rows, int cols, Field f, const std::vector<Entry>& entries)
{
    Matrix m(rows, cols, f);
    for (const auto& e : entries) {
        if (e.value.field() != f)
            throw FieldMismatch("entry (" + std::to_string(e.row) + "," + std::to_string(e.col) + ") is over " +
                                e.value.field().name() + ", matrix over " + f.name());
        m.add_to(e.row, e.col, e.value);
    }
    return m;
}

Matrix Matrix::from_ints(Field f, const std::vector<std::vector<long>>& rows)
{
    int r = static_cast<int>(rows.size());
    int c = r ? static_cast<int>(rows[0].size()) : 0;
    Matrix m(r, c, f);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(rows[i].size()) != c)
            throw DimensionMismatch("ragged rows");
        for (int j = 0; j < c; ++j)
            m.data_[i].add(j, Scalar(f, rows[i][j]));
    }
    return m;
}

Matrix Matrix::from_columns(int rows, Field f, const std::vector<SparseVec>& columns)
{
    Matrix m(rows, static_cast<int>(columns.size()), f);
    for (int j = 0; j < static_cast<int>(columns.size()); ++j) {
        if (columns[j].field() != f)
            throw FieldMismatch();
        for (const auto& t : columns[j].terms()) {
            if (t.index >= rows)
                throw DimensionMismatch("column entry out of range");
            m.data_[t.index].add(j, t.coeff);
        }
    }
    return m;
}

Matrix Matrix::from_rows(int cols, Field f, std::vector<SparseVec> rows)
{
    Matrix m(0, cols, f);
    m.rows_ = static_cast<int>(rows.size());
    for (auto& r : rows) {
        if (r.field() != f)
            throw FieldMismatch();
        if (r.max_index() >= cols)
            throw DimensionMismatch("row entry out of range");
    }
    m.data_ = std::move(rows);
    return m;
}

bool Matrix::is_zero() const
{
    for (const auto& r : data_)
        if (!r.is_zero())
            return false;
    return true;
}

std::size_t Matrix::nonzeros() const
{
    std::size_t n = 0;
    for (const auto& r : data_)
        n += r.size();
    return n;
}

double Matrix::density() const
{
    if (rows_ == 0 || cols_ == 0)
        return 0.0;
    return static_cast<double>(nonzeros()) / (static_cast<double>(rows_) * cols_);
}

Scalar Matrix::at(int r, int c) const
{
    return data_.at(r).coeff(c);
}

void Matrix::set(int r, int c, const Scalar& v)
{
    add_to(r, c, v - at(r, c));
}

void Matrix::add_to(int r, int c, const Scalar& v)
{
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
        throw DimensionMismatch("entry (" + std::to_string(r) + "," + std::to_string(c) + ") outside " +
                                std::to_string(rows_) + "x" + std::to_string(cols_));
    data_[r].add(c, v);
}

SparseVec Matrix::column(int c) const
{
    std::vector<Term> out;
    for (int i = 0; i < rows_; ++i) {
        const auto& row = data_[i].terms();
        auto it = std::lower_bound(row.begin(), row.end(), c, [](const Term& t, int j) { return t.index < j; });
        if (it != row.end() && it->index == c)
            out.push_back({i, it->coeff});
    }
    return SparseVec::from_terms(field_, std::move(out));
}

std::vector<SparseVec> Matrix::columns() const
{
    std::vector<std::vector<Term>> cols(cols_);
    for (int i = 0; i < rows_; ++i)
        for (const auto& t : data_[i].terms())
            cols[t.index].push_back({i, t.coeff});
    std::vector<SparseVec> out;
    out.reserve(cols_);
    for (auto& c : cols)
        out.push_back(SparseVec::from_terms(field_, std::move(c)));
    return out;
}

std::vector<Entry> Matrix::entries() const
{
    std::vector<Entry> out;
    for (int i = 0; i < rows_; ++i)
        for (const auto& t : data_[i].terms())
            out.push_back({i, t.index, t.coeff});
    return out;
}

Matrix Matrix::transpose() const
{
    return from_rows(rows_, field_, columns());
}

SparseVec Matrix::apply(const SparseVec& v) const
{
    if (v.field() != field_)
        throw FieldMismatch();
    if (v.max_index() >= cols_)
        throw DimensionMismatch("vector longer than matrix width");
    std::vector<Term> out;
    if (v.is_zero())
        return SparseVec(field_);
    const auto& vt = v.terms();
    int vlo = vt.front().index, vhi = vt.back().index;
    for (int i = 0; i < rows_; ++i) {
        const auto& row = data_[i].terms();
        if (row.empty() || row.back().index < vlo || row.front().index > vhi)
            continue;
        std::optional<Scalar> acc;
        auto a = row.begin();
        auto b = vt.begin();
        while (a != row.end() && b != vt.end()) {
            if (a->index < b->index)
                ++a;
            else if (b->index < a->index)
                ++b;
            else {
                if (acc)
                    *acc += a->coeff * b->coeff;
                else
                    acc = a->coeff * b->coeff;
                ++a;
                ++b;
            }
        }
        if (acc && !acc->is_zero())
            out.push_back({i, *acc});
    }
    return SparseVec::from_terms(field_, std::move(out));
}

Matrix Matrix::operator*(const Matrix& o) const
{
    if (field_ != o.field_)
        throw FieldMismatch();
    if (cols_ != o.rows_)
        throw DimensionMismatch(std::to_string(rows_) + "x" + std::to_string(cols_) + " * " +
                                std::to_string(o.rows_) + "x" + std::to_string(o.cols_));
    Matrix out(rows_, o.cols_, field_);
    for (int i = 0; i < rows_; ++i)
        for (const auto& t : data_[i].terms())
            out.data_[i].axpy(t.coeff, o.data_[t.index]);
    return out;
}

Matrix Matrix::operator+(const Matrix& o) const
{
    if (field_ != o.field_)
        throw FieldMismatch();
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw DimensionMismatch("matrix sum shapes differ");
    Matrix out = *this;
    for (int i = 0; i < rows_; ++i)
        out.data_[i] += o.data_[i];
    return out;
}

Matrix Matrix::operator-(const Matrix& o) const
{
    return *this + (-o);
}

Matrix Matrix::operator-() const
{
    return scaled(-Scalar::one(field_));
}

Matrix Matrix::scaled(const Scalar& c) const
{
    Matrix out(rows_, cols_, field_);
    for (int i = 0; i < rows_; ++i)
        out.data_[i] = data_[i].scaled(c);
    return out;
}

Matrix Matrix::column_block(int c0, int n) const
{
    if (c0 < 0 || n < 0 || c0 + n > cols_)
        throw DimensionMismatch("column block out of range");
    Matrix out(rows_, n, field_);
    for (int i = 0; i < rows_; ++i)
        for (const auto& t : data_[i].terms())
            if (t.index >= c0 && t.index < c0 + n)
                out.data_[i].add(t.index - c0, t.coeff);
    return out;
}

Matrix Matrix::row_block(int r0, int n) const
{
    if (r0 < 0 || n < 0 || r0 + n > rows_)
        throw DimensionMismatch("row block out of range");
    Matrix out(n, cols_, field_);
    for (int i = 0; i < n; ++i)
        out.data_[i] = data_[r0 + i];
    return out;
}

Matrix Matrix::hstack(const Matrix& a, const Matrix& b)
{
    if (a.field_ != b.field_)
        throw FieldMismatch();
    if (a.rows_ != b.rows_)
        throw DimensionMismatch("hstack row counts differ");
    Matrix out(a.rows_, a.cols_ + b.cols_, a.field_);
    out.place(0, 0, a);
    out.place(0, a.cols_, b);
    return out;
}

Matrix Matrix::vstack(const Matrix& a, const Matrix& b)
{
    if (a.field_ != b.field_)
        throw FieldMismatch();
    if (a.cols_ != b.cols_)
        throw DimensionMismatch("vstack column counts differ");
    Matrix out(a.rows_ + b.rows_, a.cols_, a.field_);
    out.place(0, 0, a);
    out.place(a.rows_, 0, b);
    return out;
}

void Matrix::place(int r0, int c0, const Matrix& block)
{
    if (block.field_ != field_)
        throw FieldMismatch();
    if (r0 < 0 || c0 < 0 || r0 + block.rows_ > rows_ || c0 + block.cols_ > cols_)
        throw DimensionMismatch("block placement out of range");
    for (int i = 0; i < block.rows_; ++i)
        for (const auto& t : block.data_[i].terms())
            data_[r0 + i].add(c0 + t.index, t.coeff);
}

bool operator==(const Matrix& a, const Matrix& b)
{
    return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::string Matrix::to_string() const
{
    std::ostringstream os;
    for (int i = 0; i < rows_; ++i) {
        os << "[";
        for (int j = 0; j < cols_; ++j)
            os << (j ? " " : "") << at(i, j).to_string();
        os << "]\n";
    }
    return os.str();
}

} // namespace dgforge
