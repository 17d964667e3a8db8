#include "dgforge/complex.hpp"

#include <algorithm>
#include <functional>

#include "dgforge/error.hpp"

namespace dgforge {

Window::Window(int lo_, int hi_, int margin_) : lo(lo_), hi(hi_), margin(margin_)
{
    if (lo > hi)
        throw WindowError("window lo " + std::to_string(lo) + " exceeds hi " + std::to_string(hi));
    if (margin < 0)
        throw WindowError("negative window margin");
}

Certification Certification::shifted(int s) const
{
    if (complete)
        return *this;
    return {lo - s, hi - s, false};
}

Certification intersect(const Certification& a, const Certification& b)
{
    if (a.complete)
        return b;
    if (b.complete)
        return a;
    return {std::max(a.lo, b.lo), std::min(a.hi, b.hi), false};
}

Complex::Complex(Field f, int lo, std::vector<int> dims, std::vector<Matrix> diffs, Certification cert)
    : field_(f), lo_(lo), dims_(std::move(dims)), diffs_(std::move(diffs)), cert_(cert)
{
    if (diffs_.size() > dims_.size())
        throw DimensionMismatch("more differentials than pieces");
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        if (dims_[i] < 0)
            throw DimensionMismatch("negative dimension");
        int next = i + 1 < dims_.size() ? dims_[i + 1] : 0;
        if (i < diffs_.size()) {
            const Matrix& d = diffs_[i];
            if (d.field() != f)
                throw FieldMismatch("differential over " + d.field().name());
            if (d.rows() != next || d.cols() != dims_[i])
                throw DimensionMismatch("differential at degree " + std::to_string(lo + static_cast<int>(i)) +
                                        " has shape " + std::to_string(d.rows()) + "x" + std::to_string(d.cols()));
        } else {
            diffs_.emplace_back(next, dims_[i], f);
        }
    }
    for (std::size_t i = 0; i + 1 < diffs_.size(); ++i)
        if (!(diffs_[i + 1] * diffs_[i]).is_zero())
            throw VerificationError("d^2 != 0 at degree " + std::to_string(lo + static_cast<int>(i)));
}

Complex Complex::concentrated(Field f, int degree, int dim)
{
    return Complex(f, degree, {dim}, {});
}

int Complex::dim(int n) const
{
    if (n < lo_ || n > hi())
        return 0;
    return dims_[n - lo_];
}

int Complex::total_dim() const
{
    int s = 0;
    for (int d : dims_)
        s += d;
    return s;
}

Matrix Complex::diff(int n) const
{
    if (n < lo_ || n > hi())
        return Matrix(dim(n + 1), dim(n), field_);
    return diffs_[n - lo_];
}

Complex Complex::with_cert(Certification c) const
{
    Complex out = *this;
    out.cert_ = c;
    return out;
}

bool operator==(const Complex& a, const Complex& b)
{
    if (a.field_ != b.field_)
        return false;
    int lo = std::min(a.lo(), b.lo()), hi = std::max(a.hi(), b.hi());
    for (int n = lo; n <= hi; ++n)
        if (a.dim(n) != b.dim(n) || a.diff(n) != b.diff(n))
            return false;
    return true;
}

ChainMap::ChainMap(ComplexPtr source, ComplexPtr target, int lo, std::vector<Matrix> components)
    : source_(std::move(source)), target_(std::move(target)), lo_(lo), components_(std::move(components))
{
    Field f = source_->field();
    if (target_->field() != f)
        throw FieldMismatch();
    for (std::size_t i = 0; i < components_.size(); ++i) {
        int n = lo + static_cast<int>(i);
        const Matrix& m = components_[i];
        if (m.rows() != target_->dim(n) || m.cols() != source_->dim(n))
            throw DimensionMismatch("chain map component at degree " + std::to_string(n));
    }
    int a = std::min(source_->lo(), target_->lo()) - 1;
    int b = std::max(source_->hi(), target_->hi()) + 1;
    for (int n = a; n <= b; ++n)
        if (target_->diff(n) * at(n) != at(n + 1) * source_->diff(n))
            throw VerificationError("chain map does not commute with differentials at degree " + std::to_string(n));
}

ChainMap ChainMap::zero(ComplexPtr source, ComplexPtr target)
{
    return ChainMap(std::move(source), std::move(target), 0, {});
}

ChainMap ChainMap::identity(ComplexPtr c)
{
    std::vector<Matrix> comps;
    for (int n = c->lo(); n <= c->hi(); ++n)
        comps.push_back(Matrix::identity(c->dim(n), c->field()));
    int lo = c->lo();
    return ChainMap(c, c, lo, std::move(comps));
}

Matrix ChainMap::at(int n) const
{
    int i = n - lo_;
    if (i < 0 || i >= static_cast<int>(components_.size()))
        return Matrix(target_->dim(n), source_->dim(n), source_->field());
    return components_[i];
}

ChainMap ChainMap::compose_after(const ChainMap& first) const
{
    if (first.target().field() != source().field())
        throw FieldMismatch();
    int lo = std::min(first.source().lo(), target().lo());
    int hi = std::max(first.source().hi(), target().hi());
    std::vector<Matrix> comps;
    for (int n = lo; n <= hi; ++n) {
        if (first.target().dim(n) != source().dim(n))
            throw DimensionMismatch("composition through mismatched complexes");
        comps.push_back(at(n) * first.at(n));
    }
    return ChainMap(first.source_, target_, lo, std::move(comps));
}

Complex shift(const Complex& c, int s)
{
    std::vector<int> dims;
    std::vector<Matrix> diffs;
    Scalar sg = sign(c.field(), s);
    for (int n = c.lo(); n <= c.hi(); ++n) {
        dims.push_back(c.dim(n));
        diffs.push_back(c.diff(n).scaled(sg));
    }
    return Complex(c.field(), c.lo() - s, std::move(dims), std::move(diffs), c.cert().shifted(s));
}

namespace {

// Block complex with pieces top^n + bottom^n and differential
// [[a, f], [0, b]] assembled per degree.
Complex block_complex(Field f, int lo, int hi, const std::function<int(int)>& dim_top,
                      const std::function<int(int)>& dim_bottom, const std::function<Matrix(int)>& d_top,
                      const std::function<Matrix(int)>& d_bottom, const std::function<Matrix(int)>& link,
                      Certification cert)
{
    std::vector<int> dims;
    std::vector<Matrix> diffs;
    for (int n = lo; n <= hi; ++n) {
        int t0 = dim_top(n), b0 = dim_bottom(n), t1 = dim_top(n + 1), b1 = dim_bottom(n + 1);
        dims.push_back(t0 + b0);
        Matrix d(t1 + b1, t0 + b0, f);
        d.place(0, 0, d_top(n));
        d.place(0, t0, link(n));
        d.place(t1, t0, d_bottom(n));
        diffs.push_back(std::move(d));
    }
    return Complex(f, lo, std::move(dims), std::move(diffs), cert);
}

} // namespace

Complex direct_sum(const Complex& a, const Complex& b)
{
    if (a.field() != b.field())
        throw FieldMismatch();
    Field f = a.field();
    int lo = std::min(a.lo(), b.lo()), hi = std::max(a.hi(), b.hi());
    return block_complex(
        f, lo, hi, [&](int n) { return a.dim(n); }, [&](int n) { return b.dim(n); },
        [&](int n) { return a.diff(n); }, [&](int n) { return b.diff(n); },
        [&](int n) { return Matrix(a.dim(n + 1), b.dim(n), f); }, intersect(a.cert(), b.cert()));
}

ConeResult cone(const ChainMap& fm)
{
    const Complex& m = fm.source();
    const Complex& n = fm.target();
    Field f = m.field();
    int lo = std::min(n.lo(), m.lo() - 1), hi = std::max(n.hi(), m.hi() - 1);
    auto c = std::make_shared<Complex>(block_complex(
        f, lo, hi, [&](int k) { return n.dim(k); }, [&](int k) { return m.dim(k + 1); },
        [&](int k) { return n.diff(k); }, [&](int k) { return -m.diff(k + 1); },
        [&](int k) { return fm.at(k + 1); }, intersect(n.cert(), m.cert().shifted(1))));
    auto np = fm.target_ptr();
    auto m1 = std::make_shared<Complex>(shift(m, 1));
    std::vector<Matrix> inc, proj;
    for (int k = lo; k <= hi; ++k) {
        Matrix i(c->dim(k), n.dim(k), f);
        i.place(0, 0, Matrix::identity(n.dim(k), f));
        inc.push_back(std::move(i));
        Matrix p(m.dim(k + 1), c->dim(k), f);
        p.place(0, n.dim(k), Matrix::identity(m.dim(k + 1), f));
        proj.push_back(std::move(p));
    }
    return {*c, ChainMap(np, c, lo, std::move(inc)), ChainMap(c, m1, lo, std::move(proj))};
}

ConeResult cocone(const ChainMap& fm)
{
    const Complex& m = fm.source();
    const Complex& n = fm.target();
    Field f = m.field();
    int lo = std::min(n.lo() + 1, m.lo()), hi = std::max(n.hi() + 1, m.hi());
    auto c = std::make_shared<Complex>(block_complex(
        f, lo, hi, [&](int k) { return n.dim(k - 1); }, [&](int k) { return m.dim(k); },
        [&](int k) { return -n.diff(k - 1); }, [&](int k) { return m.diff(k); }, [&](int k) { return fm.at(k); },
        intersect(n.cert().shifted(-1), m.cert())));
    auto nm1 = std::make_shared<Complex>(shift(n, -1));
    auto mp = fm.source_ptr();
    std::vector<Matrix> inc, proj;
    for (int k = lo; k <= hi; ++k) {
        Matrix i(c->dim(k), n.dim(k - 1), f);
        i.place(0, 0, Matrix::identity(n.dim(k - 1), f));
        inc.push_back(std::move(i));
        Matrix p(m.dim(k), c->dim(k), f);
        p.place(0, n.dim(k - 1), Matrix::identity(m.dim(k), f));
        proj.push_back(std::move(p));
    }
    return {*c, ChainMap(nm1, c, lo, std::move(inc)), ChainMap(c, mp, lo, std::move(proj))};
}

namespace {

// Degree t of Hom(m, n) is faithful when every contributing pair of
// degrees is faithful and the ideal contributing range is finite.
bool hom_faithful(const Complex& m, const Complex& n, int t)
{
    const Certification& cm = m.cert();
    const Certification& cn = n.cert();
    if (cm.complete && cn.complete)
        return true;
    if (cn.complete) {
        // i ranges over [n.lo - t, n.hi - t]; all must be faithful in m
        for (int j = n.lo(); j <= n.hi(); ++j)
            if (n.dim(j) > 0 && !cm.faithful(j - t))
                return false;
        return true;
    }
    if (cm.complete) {
        for (int i = m.lo(); i <= m.hi(); ++i)
            if (m.dim(i) > 0 && !cn.faithful(i + t))
                return false;
        return true;
    }
    return false;
}

} // namespace

Matrix HomComplex::block(const SparseVec& element, int t, int i) const
{
    Field f = complex.field();
    int k = t - layout.lo;
    if (k < 0 || k >= static_cast<int>(layout.blocks.size()))
        throw DimensionMismatch("hom element degree outside complex");
    for (const auto& b : layout.blocks[k]) {
        if (b.source_degree != i)
            continue;
        Matrix out(b.rows, b.cols, f);
        for (const auto& term : element.terms()) {
            int local = term.index - b.offset;
            if (local >= 0 && local < b.rows * b.cols)
                out.add_to(local / b.cols, local % b.cols, term.coeff);
        }
        return out;
    }
    return Matrix(0, 0, f);
}

HomComplex hom_complex(const Complex& m, const Complex& n)
{
    if (m.field() != n.field())
        throw FieldMismatch();
    Field f = m.field();
    int lo = n.lo() - m.hi(), hi = n.hi() - m.lo();
    HomComplex out;
    out.layout.lo = lo;
    std::vector<int> dims;
    for (int t = lo; t <= hi; ++t) {
        std::vector<HomLayout::Block> blocks;
        int off = 0;
        for (int i = m.lo(); i <= m.hi(); ++i) {
            int r = n.dim(i + t), c = m.dim(i);
            if (r == 0 || c == 0)
                continue;
            blocks.push_back({i, off, r, c});
            off += r * c;
        }
        out.layout.blocks.push_back(std::move(blocks));
        dims.push_back(off);
    }
    auto find = [&](int t, int i) -> const HomLayout::Block* {
        int k = t - lo;
        if (k < 0 || k >= static_cast<int>(out.layout.blocks.size()))
            return nullptr;
        for (const auto& b : out.layout.blocks[k])
            if (b.source_degree == i)
                return &b;
        return nullptr;
    };
    std::vector<Matrix> diffs;
    for (int t = lo; t <= hi; ++t) {
        int next = t + 1 <= hi ? dims[t + 1 - lo] : 0;
        Matrix d(next, dims[t - lo], f);
        Scalar sg = sign(f, t);
        for (const auto& b : out.layout.blocks[t - lo]) {
            int i = b.source_degree;
            // d_n o f : Hom(m^i, n^{i+t}) -> Hom(m^i, n^{i+t+1})
            if (const auto* tb = find(t + 1, i)) {
                Matrix dn = n.diff(i + t);
                for (int r = 0; r < b.rows; ++r)
                    for (int c = 0; c < b.cols; ++c) {
                        SparseVec col = dn.column(r);
                        for (const auto& e : col.terms())
                            d.add_to(tb->offset + e.index * tb->cols + c, b.offset + r * b.cols + c, e.coeff);
                    }
            }
            // -(-1)^t f o d_m : Hom(m^i, n^{i+t}) -> Hom(m^{i-1}, n^{i+t})
            if (const auto* tb = find(t + 1, i - 1)) {
                Matrix dm = m.diff(i - 1);
                for (int r = 0; r < b.rows; ++r)
                    for (int c = 0; c < b.cols; ++c) {
                        const SparseVec& row = dm.row(c);
                        for (const auto& e : row.terms())
                            d.add_to(tb->offset + r * tb->cols + e.index, b.offset + r * b.cols + c, -sg * e.coeff);
                    }
            }
        }
        diffs.push_back(std::move(d));
    }
    out.complex = Complex(f, lo, std::move(dims), std::move(diffs), hom_certification(m, n, lo, hi));
    return out;
}

Certification hom_certification(const Complex& m, const Complex& n, int lo, int hi)
{
    if (m.cert().complete && n.cert().complete)
        return Certification::everywhere();
    int clo = 1, chi = 0;
    for (int t = lo - 1; t <= hi + 1; ++t) {
        if (!hom_faithful(m, n, t))
            continue;
        if (clo > chi) {
            clo = chi = t;
        } else if (t == chi + 1) {
            chi = t;
        }
    }
    return Certification::range(clo, chi);
}

Cohomology cohomology(const Complex& c, int n, Certify mode)
{
    if (mode == Certify::strict && !c.certified_at(n))
        throw WindowError("cohomology at degree " + std::to_string(n) + " is outside the certified range");
    Field f = c.field();
    Cohomology h;
    h.degree_ = n;
    h.differential_ = c.diff(n);
    h.cycles_ = kernel_basis(h.differential_);
    int dim = c.dim(n);
    h.reducer_ = std::make_shared<SpanReducer>(f, dim);
    Matrix incoming = c.diff(n - 1);
    auto bcols = incoming.columns();
    for (std::size_t j = 0; j < bcols.size(); ++j)
        if (h.reducer_->insert(bcols[j], -1 - static_cast<int>(j)))
            ++h.boundary_rank_;
    std::vector<SparseVec> reps;
    for (const auto& z : h.cycles_.columns())
        if (h.reducer_->insert(z, static_cast<int>(reps.size())))
            reps.push_back(z);
    h.reps_ = Matrix::from_columns(dim, f, reps);
    return h;
}

int cohomology_dim(const Complex& c, int n, Certify mode)
{
    if (mode == Certify::strict && !c.certified_at(n))
        throw WindowError("cohomology at degree " + std::to_string(n) + " is outside the certified range");
    return c.dim(n) - rank(c.diff(n)) - rank(c.diff(n - 1));
}

std::optional<Cohomology::Lift> Cohomology::lift(const SparseVec& z) const
{
    if (!differential_.apply(z).is_zero())
        return std::nullopt;
    auto combo = reducer_->express(z);
    if (!combo)
        throw VerificationError("cycle not spanned by boundaries and representatives");
    Lift l{SparseVec(z.field()), z};
    for (const auto& t : combo->terms()) {
        if (t.index < 0)
            continue;
        l.coeffs.add(t.index, t.coeff);
        l.coboundary.axpy(-t.coeff, reps_.column(t.index));
    }
    return l;
}

bool Cohomology::is_boundary(const SparseVec& z) const
{
    auto l = lift(z);
    return l && l->coeffs.is_zero();
}

Matrix cohomology_map(const ChainMap& f, const Cohomology& source, const Cohomology& target)
{
    Field fl = f.source().field();
    Matrix comp = f.at(source.degree());
    std::vector<SparseVec> cols;
    for (const auto& r : source.representatives().columns()) {
        auto l = target.lift(comp.apply(r));
        if (!l)
            throw VerificationError("image of a cycle is not a cycle");
        cols.push_back(l->coeffs);
    }
    return Matrix::from_columns(target.dim(), fl, cols);
}

Totalization totalize(const std::vector<Complex>& terms, const std::vector<ChainMap>& deltas, int first_index,
                      const std::optional<ChainMap>& lambda)
{
    if (terms.empty())
        throw DimensionMismatch("totalize: empty tower");
    if (deltas.size() + 1 != terms.size())
        throw DimensionMismatch("totalize: need one map between each pair of consecutive terms");
    Field f = terms[0].field();
    int count = static_cast<int>(terms.size());
    for (int k = 0; k + 1 < count; ++k) {
        const ChainMap& d = deltas[k];
        for (int deg = std::min(terms[k].lo(), terms[k + 1].lo()); deg <= std::max(terms[k].hi(), terms[k + 1].hi());
             ++deg)
            if (d.source().dim(deg) != terms[k].dim(deg) || d.target().dim(deg) != terms[k + 1].dim(deg))
                throw DimensionMismatch("totalize: map " + std::to_string(first_index + k) + " is not composable");
        if (k + 2 < count) {
            const ChainMap& e = deltas[k + 1];
            for (int deg = terms[k].lo(); deg <= terms[k].hi(); ++deg)
                if (!(e.at(deg) * d.at(deg)).is_zero())
                    throw VerificationError("totalize: consecutive composite nonzero at degree " + std::to_string(deg));
        }
    }
    // block index b = 0 .. count-1 corresponds to J^{n + count - 1 - b}
    auto shift_of = [&](int k) { return k; }; // J^{n+k} sits shifted by -k
    int lo = terms[0].lo(), hi = terms[0].hi();
    Certification cert = terms[0].cert();
    for (int k = 0; k < count; ++k) {
        lo = std::min(lo, terms[k].lo() + shift_of(k));
        hi = std::max(hi, terms[k].hi() + shift_of(k));
        cert = intersect(cert, terms[k].cert().shifted(-k));
    }
    Totalization out;
    out.first_index = first_index;
    out.offsets.assign(count, std::vector<int>(hi - lo + 2, 0));
    std::vector<int> dims;
    for (int deg = lo; deg <= hi + 1; ++deg) {
        int off = 0;
        for (int b = 0; b < count; ++b) {
            int k = count - 1 - b;
            out.offsets[k][deg - lo] = off;
            off += terms[k].dim(deg - k);
        }
        if (deg <= hi)
            dims.push_back(off);
    }
    Scalar pre = sign(f, first_index);
    std::vector<Matrix> diffs;
    for (int deg = lo; deg <= hi; ++deg) {
        int rows = deg + 1 <= hi ? dims[deg + 1 - lo] : 0;
        Matrix d(rows, dims[deg - lo], f);
        for (int k = 0; k < count; ++k) {
            int src = out.offsets[k][deg - lo];
            // diagonal (-1)^{k} d_{J^{n+k}} on J^{n+k}[-k]
            Matrix dk = terms[k].diff(deg - k).scaled(pre * sign(f, k));
            if (dk.rows() > 0 && dk.cols() > 0)
                d.place(out.offsets[k][deg + 1 - lo], src, dk);
            if (k + 1 < count) {
                Matrix dl = deltas[k].at(deg - k).scaled(pre);
                if (dl.rows() > 0 && dl.cols() > 0)
                    d.place(out.offsets[k + 1][deg + 1 - lo], src, dl);
            }
        }
        diffs.push_back(std::move(d));
    }
    out.total = Complex(f, lo, std::move(dims), std::move(diffs), cert);
    if (lambda) {
        const Complex& m = lambda->source();
        auto mp = lambda->source_ptr();
        auto tp = std::make_shared<Complex>(out.total);
        std::vector<Matrix> comps;
        int alo = std::min(lo, m.lo()), ahi = std::max(hi, m.hi());
        for (int deg = alo; deg <= ahi; ++deg) {
            Matrix c(out.total.dim(deg), m.dim(deg), f);
            if (deg >= lo && deg <= hi && m.dim(deg) > 0 && terms[0].dim(deg) > 0)
                c.place(out.offsets[0][deg - lo], 0, lambda->at(deg));
            comps.push_back(std::move(c));
        }
        out.augmentation = ChainMap(mp, tp, alo, std::move(comps));
    }
    return out;
}

} // namespace dgforge
