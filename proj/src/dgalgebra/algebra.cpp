#include <algorithm>
#include <random>
#include <sstream>

#include "dgforge/dgalgebra.hpp"
#include "dgforge/error.hpp"

namespace dgforge {

StructureTable::StructureTable(int rows, int cols, Field f) : cols_(cols), zero_(f), rows_(rows) {}

const SparseVec& StructureTable::at(int i, int j) const
{
    const auto& r = rows_[i];
    auto it = std::lower_bound(r.begin(), r.end(), j, [](const auto& e, int c) { return e.first < c; });
    if (it == r.end() || it->first != j)
        return zero_;
    return it->second;
}

void StructureTable::set(int i, int j, SparseVec v)
{
    if (i < 0 || i >= rows() || j < 0 || j >= cols_)
        throw DimensionMismatch("structure constant index (" + std::to_string(i) + "," + std::to_string(j) + ")");
    auto& r = rows_[i];
    auto it = std::lower_bound(r.begin(), r.end(), j, [](const auto& e, int c) { return e.first < c; });
    bool present = it != r.end() && it->first == j;
    if (v.is_zero()) {
        if (present)
            r.erase(it);
    } else if (present) {
        it->second = std::move(v);
    } else {
        r.insert(it, {j, std::move(v)});
    }
}

GradedBasis::GradedBasis(std::vector<int> degrees) : degrees_(std::move(degrees)), local_(degrees_.size())
{
    if (degrees_.empty())
        return;
    lo_ = *std::min_element(degrees_.begin(), degrees_.end());
    hi_ = *std::max_element(degrees_.begin(), degrees_.end());
    by_degree_.resize(hi_ - lo_ + 1);
    for (int i = 0; i < size(); ++i) {
        auto& bucket = by_degree_[degrees_[i] - lo_];
        local_[i] = static_cast<int>(bucket.size());
        bucket.push_back(i);
    }
}

int GradedBasis::dim(int n) const
{
    return static_cast<int>(in_degree(n).size());
}

const std::vector<int>& GradedBasis::in_degree(int n) const
{
    static const std::vector<int> empty;
    if (n < lo_ || n > hi_)
        return empty;
    return by_degree_[n - lo_];
}

SparseVec GradedBasis::to_local(const SparseVec& v, int n) const
{
    return v.remapped([&](int i) { return degrees_[i] == n ? local_[i] : -1; });
}

SparseVec GradedBasis::to_global(const SparseVec& v, int n) const
{
    const auto& idx = in_degree(n);
    return v.remapped([&](int i) { return idx[i]; });
}

int GradedBasis::degree_of(const SparseVec& v) const
{
    if (v.is_zero())
        throw VerificationError("degree of the zero vector");
    int d = degrees_[v.terms().front().index];
    for (const auto& t : v.terms())
        if (degrees_[t.index] != d)
            throw VerificationError("inhomogeneous vector");
    return d;
}

Complex GradedBasis::complex(Field f, const std::vector<SparseVec>& diff, Certification cert) const
{
    if (size() == 0)
        return Complex(f, 0, {}, {}, cert);
    std::vector<int> dims;
    std::vector<Matrix> diffs;
    for (int n = lo_; n <= hi_; ++n)
        dims.push_back(dim(n));
    for (int n = lo_; n <= hi_; ++n) {
        std::vector<SparseVec> cols;
        for (int i : in_degree(n)) {
            for (const auto& t : diff[i].terms())
                if (degrees_[t.index] != n + 1)
                    throw VerificationError("differential of basis element " + std::to_string(i) +
                                            " does not raise degree by one");
            cols.push_back(to_local(diff[i], n + 1));
        }
        diffs.push_back(Matrix::from_columns(dim(n + 1), f, cols));
    }
    return Complex(f, lo_, std::move(dims), std::move(diffs), cert);
}

namespace {

bool exhaustive(Verify mode, long long work)
{
    if (mode == Verify::full)
        return true;
    if (mode == Verify::sampled)
        return false;
    return work <= 2000000;
}

} // namespace

DgAlgebra::DgAlgebra(Field f, std::vector<BasisElement> basis, StructureTable mult, SparseVec unit,
                     std::vector<SparseVec> diff, Verify mode)
    : field_(f), basis_(std::move(basis)), mult_(std::move(mult)), unit_(std::move(unit)), diff_(std::move(diff))
{
    int n = dim();
    std::vector<int> degs;
    for (const auto& b : basis_)
        degs.push_back(b.degree);
    grading_ = GradedBasis(degs);
    if (mult_.rows() != n || mult_.cols() != n)
        throw DimensionMismatch("multiplication table shape");
    if (diff_.empty())
        diff_.assign(n, SparseVec(f));
    if (static_cast<int>(diff_.size()) != n)
        throw DimensionMismatch("differential table size");
    if (unit_.field() != f)
        throw FieldMismatch();
    // the zero ring is allowed, with 1 = 0
    if (n > 0 && (unit_.is_zero() || grading_.degree_of(unit_) != 0))
        throw VerificationError("unit must be a nonzero element of degree 0");
    for (int i = 0; i < n; ++i)
        for (const auto& [j, v] : mult_.row(i)) {
            if (v.field() != f)
                throw FieldMismatch();
            if (grading_.degree_of(v) != degree(i) + degree(j))
                throw VerificationError("product " + basis_[i].name + "*" + basis_[j].name + " has the wrong degree");
        }
    complex_ = grading_.complex(f, diff_);

    for (int i = 0; i < n; ++i) {
        SparseVec e = SparseVec::unit(f, i);
        if (multiply(unit_, e) != e || multiply(e, unit_) != e)
            throw VerificationError("unit fails on " + basis_[i].name);
    }
    if (!differentiate(unit_).is_zero())
        throw VerificationError("d(1) != 0");

    exhaustive_ = exhaustive(mode, static_cast<long long>(n) * n * n);
    auto assoc = [&](const SparseVec& a, const SparseVec& b, const SparseVec& c) {
        if (multiply(multiply(a, b), c) != multiply(a, multiply(b, c)))
            throw VerificationError("associativity fails on (" + describe(a) + ", " + describe(b) + ", " + describe(c) +
                                    ")");
    };
    auto leibniz = [&](int i, const SparseVec& a, const SparseVec& b) {
        SparseVec lhs = differentiate(multiply(a, b));
        SparseVec rhs = multiply(differentiate(a), b) + multiply(a, differentiate(b)).scaled(sign(f, i));
        if (lhs != rhs)
            throw VerificationError("Leibniz rule fails on (" + describe(a) + ", " + describe(b) + ")");
    };
    if (exhaustive_) {
        for (int i = 0; i < n; ++i)
            for (const auto& [j, ij] : mult_.row(i)) {
                SparseVec a = SparseVec::unit(f, i), b = SparseVec::unit(f, j);
                for (int k = 0; k < n; ++k) {
                    SparseVec c = SparseVec::unit(f, k);
                    if (multiply(ij, c) != multiply(a, multiply(b, c)))
                        assoc(a, b, c);
                }
            }
        // triples whose first product vanishes still need a(bc) = 0
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (!mult_.at(i, j).is_zero())
                    continue;
                for (const auto& [k, jk] : mult_.row(j))
                    if (!multiply(SparseVec::unit(f, i), jk).is_zero())
                        assoc(SparseVec::unit(f, i), SparseVec::unit(f, j), SparseVec::unit(f, k));
            }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                leibniz(degree(i), SparseVec::unit(f, i), SparseVec::unit(f, j));
    } else {
        std::mt19937 rng(1);
        std::uniform_int_distribution<int> idx(0, n - 1);
        for (int trial = 0; trial < 512; ++trial) {
            SparseVec a = SparseVec::unit(f, idx(rng)), b = SparseVec::unit(f, idx(rng)),
                      c = SparseVec::unit(f, idx(rng));
            assoc(a, b, c);
            leibniz(degree(a.terms()[0].index), a, b);
        }
        for (int trial = 0; trial < 64; ++trial) {
            // random homogeneous combinations
            int da = degree(idx(rng)), db = degree(idx(rng)), dc = degree(idx(rng));
            auto pick = [&](int d) {
                SparseVec v(f);
                const auto& in = grading_.in_degree(d);
                std::uniform_int_distribution<int> li(0, static_cast<int>(in.size()) - 1);
                std::uniform_int_distribution<long> val(1, 5);
                for (int k = 0; k < 6; ++k)
                    v.add(in[li(rng)], Scalar(f, val(rng)));
                return v;
            };
            SparseVec a = pick(da), b = pick(db), c = pick(dc);
            assoc(a, b, c);
            if (!a.is_zero())
                leibniz(da, a, b);
        }
    }
}

int DgAlgebra::index_of(const std::string& name) const
{
    for (int i = 0; i < dim(); ++i)
        if (basis_[i].name == name)
            return i;
    throw VerificationError("unknown basis element '" + name + "'");
}

SparseVec DgAlgebra::multiply(const SparseVec& a, const SparseVec& b) const
{
    std::vector<Term> acc;
    for (const auto& ta : a.terms())
        for (const auto& tb : b.terms()) {
            const SparseVec& p = mult_.at(ta.index, tb.index);
            if (p.is_zero())
                continue;
            Scalar c = ta.coeff * tb.coeff;
            for (const auto& t : p.terms())
                acc.push_back({t.index, c * t.coeff});
        }
    return SparseVec::from_terms(field_, std::move(acc));
}

SparseVec DgAlgebra::differentiate(const SparseVec& a) const
{
    std::vector<Term> acc;
    for (const auto& ta : a.terms())
        for (const auto& t : diff_[ta.index].terms())
            acc.push_back({t.index, ta.coeff * t.coeff});
    return SparseVec::from_terms(field_, std::move(acc));
}

bool DgAlgebra::ordinary() const
{
    if (grading_.lo() != 0 || grading_.hi() != 0)
        return false;
    for (const auto& d : diff_)
        if (!d.is_zero())
            return false;
    return true;
}

std::string DgAlgebra::describe(const SparseVec& v) const
{
    if (v.is_zero())
        return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& t : v.terms()) {
        if (!first)
            out << " + ";
        first = false;
        if (!t.coeff.is_one())
            out << t.coeff.to_string() << "*";
        out << basis_[t.index].name;
    }
    return out.str();
}

DgAlgebra opposite(const DgAlgebra& a)
{
    Field f = a.field();
    int n = a.dim();
    StructureTable t(n, n, f);
    for (int i = 0; i < n; ++i)
        for (const auto& [j, v] : a.table().row(i))
            t.set(j, i, v.scaled(sign(f, a.degree(i) * a.degree(j))));
    std::vector<BasisElement> basis;
    std::vector<SparseVec> diff;
    for (int i = 0; i < n; ++i) {
        basis.push_back(a.basis(i));
        diff.push_back(a.diff(i));
    }
    return DgAlgebra(f, basis, t, a.unit(), diff);
}

void OrdinaryAlgebraPresentation::validate() const
{
    DgAlgebra a = embed_ordinary(*this);
    if (ideal.empty())
        return;
    int n = static_cast<int>(names.size());
    SpanReducer span(field, n);
    for (std::size_t i = 0; i < ideal.size(); ++i)
        span.insert(ideal[i], static_cast<int>(i));
    for (const auto& v : ideal)
        for (int b = 0; b < n; ++b) {
            SparseVec e = SparseVec::unit(field, b);
            if (!span.contains(a.multiply(v, e)))
                throw VerificationError("ideal is not closed under right multiplication: (" + a.describe(v) + ")*" +
                                        names[b]);
            if (!span.contains(a.multiply(e, v)))
                throw VerificationError("ideal is not closed under left multiplication: " + names[b] + "*(" +
                                        a.describe(v) + ")");
        }
}

Matrix OrdinaryAlgebraPresentation::ideal_basis() const
{
    int n = static_cast<int>(names.size());
    if (ideal.empty())
        return Matrix(n, 0, field);
    Matrix span = Matrix::from_columns(n, field, ideal);
    return row_echelon(span.transpose()).rref.transpose();
}

DgAlgebra embed_ordinary(const OrdinaryAlgebraPresentation& p)
{
    std::vector<BasisElement> basis;
    for (const auto& n : p.names)
        basis.push_back({n, 0});
    return DgAlgebra(p.field, basis, p.mult, p.unit);
}

} // namespace dgforge
