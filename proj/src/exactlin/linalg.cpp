#include "dgforge/linalg.hpp"

#include <algorithm>
#include <functional>
#include <queue>

#include "dgforge/error.hpp"

namespace dgforge {

namespace {

// Above this fill ratio elimination switches to dense rows.
constexpr double kDenseThreshold = 0.25;

struct FpOps {
    using E = std::uint32_t;
    std::uint32_t p;
    E zero() const { return 0; }
    E one() const { return 1; }
    bool is_zero(E a) const { return a == 0; }
    E add(E a, E b) const { return static_cast<E>((std::uint64_t(a) + b) % p); }
    E sub(E a, E b) const { return static_cast<E>((std::uint64_t(a) + p - b) % p); }
    E mul(E a, E b) const { return static_cast<E>(std::uint64_t(a) * b % p); }
    E inv(E a) const
    {
        std::uint64_t r = 1, base = a, e = p - 2;
        while (e) {
            if (e & 1)
                r = r * base % p;
            base = base * base % p;
            e >>= 1;
        }
        return static_cast<E>(r);
    }
    E from(const Scalar& s) const { return s.residue(); }
    Scalar to(Field f, E a) const { return Scalar(f, static_cast<long>(a)); }
};

struct QOps {
    using E = mpq_class;
    E zero() const { return 0; }
    E one() const { return 1; }
    bool is_zero(const E& a) const { return sgn(a) == 0; }
    E add(const E& a, const E& b) const { return a + b; }
    E sub(const E& a, const E& b) const { return a - b; }
    E mul(const E& a, const E& b) const { return a * b; }
    E inv(const E& a) const { return 1 / a; }
    E from(const Scalar& s) const { return s.rational(); }
    Scalar to(Field f, const E& a) const { return Scalar(f, a); }
};

template <class Ops>
class Eliminator {
public:
    using E = typename Ops::E;
    using Row = std::vector<std::pair<int, E>>;

    Eliminator(Ops ops, int cols) : ops_(ops), cols_(cols), pivot_of_(cols, -1), acc_(cols, ops.zero()), mark_(cols, 0) {}

    // Reduces `row` against the current pivots; inserts the remainder as a
    // new pivot row. Returns true when the rank grew.
    bool insert(const Row& row)
    {
        Row rem = reduce(row);
        if (rem.empty())
            return false;
        E inv = ops_.inv(rem.front().second);
        for (auto& t : rem)
            t.second = ops_.mul(t.second, inv);
        pivot_of_[rem.front().first] = static_cast<int>(rows_.size());
        rows_.push_back(std::move(rem));
        return true;
    }

    int rank() const { return static_cast<int>(rows_.size()); }

    // Full back-substitution; returns rows sorted by pivot column.
    std::vector<Row> reduced()
    {
        std::vector<int> order(rows_.size());
        for (std::size_t i = 0; i < order.size(); ++i)
            order[i] = static_cast<int>(i);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return rows_[a].front().first < rows_[b].front().first; });
        // Process from the rightmost pivot so that rows used for elimination
        // are already fully reduced.
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            Row& r = rows_[*it];
            int lead = r.front().first;
            pivot_of_[lead] = -1;
            r = reduce(r);
            pivot_of_[lead] = *it;
        }
        std::vector<Row> out;
        out.reserve(order.size());
        for (int i : order)
            out.push_back(rows_[i]);
        return out;
    }

private:
    Row reduce(const Row& row)
    {
        std::priority_queue<int, std::vector<int>, std::greater<int>> heap;
        for (const auto& t : row) {
            acc_[t.first] = ops_.add(acc_[t.first], t.second);
            if (!mark_[t.first]) {
                mark_[t.first] = 1;
                heap.push(t.first);
            }
        }
        Row out;
        while (!heap.empty()) {
            int c = heap.top();
            heap.pop();
            mark_[c] = 0;
            E v = acc_[c];
            acc_[c] = ops_.zero();
            if (ops_.is_zero(v))
                continue;
            int pr = pivot_of_[c];
            if (pr < 0) {
                out.emplace_back(c, v);
                continue;
            }
            const Row& p = rows_[pr];
            for (std::size_t k = 1; k < p.size(); ++k) {
                int cc = p[k].first;
                acc_[cc] = ops_.sub(acc_[cc], ops_.mul(v, p[k].second));
                if (!mark_[cc]) {
                    mark_[cc] = 1;
                    heap.push(cc);
                }
            }
        }
        return out;
    }

    Ops ops_;
    int cols_;
    std::vector<int> pivot_of_;
    std::vector<Row> rows_;
    std::vector<E> acc_;
    std::vector<char> mark_;
};

template <class Ops>
std::vector<typename Eliminator<Ops>::Row> dense_rref(Ops ops, const std::vector<typename Eliminator<Ops>::Row>& in,
                                                      int cols, bool full)
{
    using E = typename Ops::E;
    std::vector<std::vector<E>> a(in.size(), std::vector<E>(cols, ops.zero()));
    for (std::size_t i = 0; i < in.size(); ++i)
        for (const auto& t : in[i])
            a[i][t.first] = t.second;
    std::size_t r = 0;
    std::vector<int> pivots;
    for (int c = 0; c < cols && r < a.size(); ++c) {
        std::size_t p = r;
        while (p < a.size() && ops.is_zero(a[p][c]))
            ++p;
        if (p == a.size())
            continue;
        std::swap(a[p], a[r]);
        E inv = ops.inv(a[r][c]);
        for (int j = c; j < cols; ++j)
            a[r][j] = ops.mul(a[r][j], inv);
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i == r || ops.is_zero(a[i][c]))
                continue;
            if (!full && i < r)
                continue;
            E f = a[i][c];
            for (int j = c; j < cols; ++j)
                if (!ops.is_zero(a[r][j]))
                    a[i][j] = ops.sub(a[i][j], ops.mul(f, a[r][j]));
        }
        pivots.push_back(c);
        ++r;
    }
    std::vector<typename Eliminator<Ops>::Row> out(r);
    for (std::size_t i = 0; i < r; ++i)
        for (int j = 0; j < cols; ++j)
            if (!ops.is_zero(a[i][j]))
                out[i].emplace_back(j, a[i][j]);
    return out;
}

template <class Ops>
std::vector<typename Eliminator<Ops>::Row> to_rows(Ops ops, const Matrix& m)
{
    std::vector<typename Eliminator<Ops>::Row> rows(m.rows());
    for (int i = 0; i < m.rows(); ++i)
        for (const auto& t : m.row(i).terms())
            rows[i].emplace_back(t.index, ops.from(t.coeff));
    return rows;
}

template <class Ops>
Echelon echelon_with(Ops ops, const Matrix& m)
{
    auto rows = to_rows(ops, m);
    std::vector<typename Eliminator<Ops>::Row> red;
    if (m.density() > kDenseThreshold) {
        red = dense_rref(ops, rows, m.cols(), true);
    } else {
        Eliminator<Ops> el(ops, m.cols());
        for (const auto& r : rows)
            el.insert(r);
        red = el.reduced();
    }
    Echelon e{{}, Matrix(static_cast<int>(red.size()), m.cols(), m.field())};
    for (std::size_t i = 0; i < red.size(); ++i) {
        e.pivots.push_back(red[i].front().first);
        for (const auto& t : red[i])
            e.rref.add_to(static_cast<int>(i), t.first, ops.to(m.field(), t.second));
    }
    return e;
}

template <class Ops>
int rank_with(Ops ops, const Matrix& m)
{
    auto rows = to_rows(ops, m);
    if (m.density() > kDenseThreshold)
        return static_cast<int>(dense_rref(ops, rows, m.cols(), false).size());
    Eliminator<Ops> el(ops, m.cols());
    for (const auto& r : rows)
        el.insert(r);
    return el.rank();
}

} // namespace

Echelon row_echelon(const Matrix& m)
{
    if (m.field().is_rational())
        return echelon_with(QOps{}, m);
    return echelon_with(FpOps{m.field().characteristic()}, m);
}

int rank(const Matrix& m)
{
    if (m.rows() == 0 || m.cols() == 0)
        return 0;
    // Eliminate along the shorter side.
    if (m.rows() > 4 * m.cols())
        return rank(m.transpose());
    if (m.field().is_rational())
        return rank_with(QOps{}, m);
    return rank_with(FpOps{m.field().characteristic()}, m);
}

Matrix kernel_basis(const Matrix& m)
{
    Echelon e = row_echelon(m);
    std::vector<char> is_pivot(m.cols(), 0);
    for (int p : e.pivots)
        is_pivot[p] = 1;
    std::vector<SparseVec> cols;
    Field f = m.field();
    for (int c = 0; c < m.cols(); ++c) {
        if (is_pivot[c])
            continue;
        SparseVec v = SparseVec::unit(f, c);
        for (int i = 0; i < e.rref.rows(); ++i) {
            Scalar s = e.rref.at(i, c);
            if (!s.is_zero())
                v.add(e.pivots[i], -s);
        }
        cols.push_back(std::move(v));
    }
    return Matrix::from_columns(m.cols(), f, cols);
}

std::optional<Matrix> solve(const Matrix& m, const Matrix& b)
{
    if (m.field() != b.field())
        throw FieldMismatch();
    if (m.rows() != b.rows())
        throw DimensionMismatch("solve: " + std::to_string(m.rows()) + " rows vs rhs " + std::to_string(b.rows()));
    Echelon e = row_echelon(Matrix::hstack(m, b));
    Matrix x(m.cols(), b.cols(), m.field());
    for (int i = 0; i < e.rref.rows(); ++i) {
        int p = e.pivots[i];
        if (p >= m.cols())
            return std::nullopt;
        for (const auto& t : e.rref.row(i).terms())
            if (t.index >= m.cols())
                x.add_to(p, t.index - m.cols(), t.coeff);
    }
    return x;
}

Matrix complement_basis(const Matrix& sub, int ambient_dim)
{
    if (sub.rows() != ambient_dim)
        throw DimensionMismatch("complement_basis: vectors of length " + std::to_string(sub.rows()) +
                                " in ambient dimension " + std::to_string(ambient_dim));
    Echelon e = row_echelon(sub.transpose());
    if (static_cast<int>(e.pivots.size()) != sub.cols())
        throw DependentColumns("complement_basis: input columns are dependent (rank " +
                               std::to_string(e.pivots.size()) + " of " + std::to_string(sub.cols()) + ")");
    std::vector<char> is_pivot(ambient_dim, 0);
    for (int p : e.pivots)
        is_pivot[p] = 1;
    std::vector<SparseVec> cols;
    for (int j = 0; j < ambient_dim; ++j)
        if (!is_pivot[j])
            cols.push_back(SparseVec::unit(sub.field(), j));
    return Matrix::from_columns(ambient_dim, sub.field(), cols);
}

std::vector<int> pivot_columns(const Matrix& m)
{
    return row_echelon(m).pivots;
}

void SpanReducer::reduce(SparseVec& v, SparseVec* combo) const
{
    std::size_t pos = 0;
    while (pos < v.terms().size()) {
        const Term& t = v.terms()[pos];
        int r = t.index < dim_ ? lead_row_[t.index] : -1;
        if (r < 0) {
            ++pos;
            continue;
        }
        Scalar c = t.coeff;
        v.axpy(-c, rows_[r].vec);
        if (combo)
            combo->axpy(c, rows_[r].combo);
    }
}

bool SpanReducer::insert(const SparseVec& v, int tag)
{
    if (v.field() != field_)
        throw FieldMismatch();
    if (v.max_index() >= dim_)
        throw DimensionMismatch("SpanReducer: vector outside ambient space");
    SparseVec w = v;
    SparseVec combo(field_);
    reduce(w, &combo);
    if (w.is_zero())
        return false;
    // w = v - combo  =>  w = e_tag - combo in tag coordinates
    SparseVec prov = -combo;
    prov.add(tag, Scalar::one(field_));
    Scalar inv = w.terms().front().coeff.inverse();
    int lead = w.terms().front().index;
    lead_row_[lead] = static_cast<int>(rows_.size());
    rows_.push_back({w.scaled(inv), prov.scaled(inv)});
    return true;
}

bool SpanReducer::contains(const SparseVec& v) const
{
    SparseVec w = v;
    reduce(w, nullptr);
    return w.is_zero();
}

std::optional<SparseVec> SpanReducer::express(const SparseVec& v) const
{
    if (v.field() != field_)
        throw FieldMismatch();
    SparseVec w = v;
    SparseVec combo(field_);
    reduce(w, &combo);
    if (!w.is_zero())
        return std::nullopt;
    return combo;
}

} // namespace dgforge
