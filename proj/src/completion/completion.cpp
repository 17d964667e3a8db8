#include "dgforge/completion.hpp"

#include <algorithm>

#include "dgforge/error.hpp"

namespace dgforge {

namespace {

void require_ordinary(const DgAlgebra& r, const char* what)
{
    if (!r.ordinary())
        throw VerificationError(std::string(what) + " needs an ordinary algebra");
}

Matrix span_basis(const Matrix& m)
{
    std::vector<SparseVec> cols;
    for (int j : pivot_columns(m))
        cols.push_back(m.column(j));
    return Matrix::from_columns(m.rows(), m.field(), cols);
}

bool in_span(const Matrix& span, const SparseVec& v)
{
    if (v.is_zero())
        return true;
    return solve(span, Matrix::from_columns(span.rows(), v.field(), {v})).has_value();
}

} // namespace

IdealPowers ideal_powers(const DgAlgebra& r, const Matrix& a_span, int n_max)
{
    require_ordinary(r, "ideal_powers");
    if (a_span.rows() != r.dim())
        throw DimensionMismatch("ideal span has the wrong length");
    Field f = r.field();
    Matrix a = span_basis(a_span);
    std::vector<SparseVec> av = a.columns();
    for (const auto& v : av)
        for (int b = 0; b < r.dim(); ++b) {
            SparseVec e = SparseVec::unit(f, b);
            SparseVec left = r.multiply(e, v), right = r.multiply(v, e);
            if (!in_span(a, left))
                throw VerificationError("ideal is not two-sided: " + r.basis(b).name + " * (" + r.describe(v) +
                                        ") = " + r.describe(left) + " leaves the span");
            if (!in_span(a, right))
                throw VerificationError("ideal is not two-sided: (" + r.describe(v) + ") * " + r.basis(b).name +
                                        " = " + r.describe(right) + " leaves the span");
        }
    IdealPowers out;
    out.powers.push_back(a);
    if (a.cols() == 0)
        out.nilpotency_index = 1;
    for (int n = 2; n <= n_max && !out.nilpotency_index; ++n) {
        std::vector<SparseVec> prods;
        for (const auto& u : out.powers.back().columns())
            for (const auto& v : av)
                prods.push_back(r.multiply(u, v));
        out.powers.push_back(span_basis(Matrix::from_columns(r.dim(), f, prods)));
        if (out.powers.back().cols() == 0)
            out.nilpotency_index = n;
    }
    return out;
}

QuotientAlgebra quotient_algebra(AlgebraPtr r, const Matrix& ideal)
{
    require_ordinary(*r, "quotient_algebra");
    Field f = r->field();
    int n = r->dim();
    Matrix i = span_basis(ideal);
    // basis vectors of R completing a basis of I
    SpanReducer span(f, n);
    for (const auto& v : i.columns())
        span.insert(v, 0);
    std::vector<int> chosen;
    for (int b = 0; b < n; ++b)
        if (span.insert(SparseVec::unit(f, b), 1))
            chosen.push_back(b);
    int q = static_cast<int>(chosen.size());
    std::vector<SparseVec> secs;
    for (int b : chosen)
        secs.push_back(SparseVec::unit(f, b));
    QuotientAlgebra out;
    out.section = Matrix::from_columns(n, f, secs);
    // coordinates over [section | I], keep the section part
    Matrix full = Matrix::hstack(out.section, i);
    Matrix inv = *solve(full, Matrix::identity(n, f));
    out.projection = inv.row_block(0, q);
    std::vector<BasisElement> basis;
    for (int b : chosen)
        basis.push_back({r->basis(b).name, 0});
    StructureTable mt(q, q, f);
    for (int x = 0; x < q; ++x)
        for (int y = 0; y < q; ++y)
            mt.set(x, y, out.projection.apply(r->product(chosen[x], chosen[y])));
    out.algebra = std::make_shared<const DgAlgebra>(f, basis, mt, out.projection.apply(r->unit()),
                                                    std::vector<SparseVec>{}, Verify::full);
    // the projection is multiplicative
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            SparseVec lhs = out.projection.apply(r->product(x, y));
            SparseVec rhs = out.algebra->multiply(out.projection.column(x), out.projection.column(y));
            if (lhs != rhs)
                throw VerificationError("quotient by a subspace that is not an ideal at " + r->basis(x).name + " * " +
                                        r->basis(y).name);
        }
    return out;
}

Matrix AdicTower::phi(int m, int n) const
{
    if (n < 1 || m < n || m > size())
        throw DimensionMismatch("phi(m, n) needs 1 <= n <= m <= " + std::to_string(size()));
    return stages[n - 1].projection * stages[m - 1].section;
}

AdicTower adic_tower(AlgebraPtr r, const Matrix& a_span, int n_max)
{
    IdealPowers pw = ideal_powers(*r, a_span, n_max + 1);
    AdicTower t;
    t.base = r;
    t.ideal = pw.powers[0];
    int count = static_cast<int>(pw.powers.size());
    for (int n = 1; n <= n_max && n <= count; ++n) {
        t.stages.push_back(quotient_algebra(r, pw.powers[n - 1]));
        bool same = n < count ? pw.dim(n) == pw.dim(n + 1) : pw.dim(n) == 0;
        if (same) {
            t.stabilized_at = n;
            break;
        }
    }
    Field f = r->field();
    for (int m = 1; m <= t.size(); ++m) {
        if (t.phi(m, m) != Matrix::identity(t.stages[m - 1].algebra->dim(), f))
            throw VerificationError("phi(n, n) is not the identity at n = " + std::to_string(m));
        for (int n = 1; n <= m; ++n) {
            if (t.phi(m, n) * t.stages[m - 1].projection != t.stages[n - 1].projection)
                throw VerificationError("projections are not coherent at " + std::to_string(m) + ", " + std::to_string(n));
            for (int l = m; l <= t.size(); ++l)
                if (t.phi(m, n) * t.phi(l, m) != t.phi(l, n))
                    throw VerificationError("phi does not compose at " + std::to_string(l) + ", " + std::to_string(m) +
                                            ", " + std::to_string(n));
        }
    }
    return t;
}

InverseLimit inverse_limit(const AdicTower& t)
{
    if (!t.stabilized_at)
        throw WindowError("limit not computable at this depth: the tower has not stabilized by stage " +
                          std::to_string(t.size()));
    InverseLimit out;
    out.stage = *t.stabilized_at;
    out.algebra = t.stages[out.stage - 1].algebra;
    out.comp = t.stages[out.stage - 1].projection;
    for (int n = 1; n <= t.size(); ++n)
        out.projections.push_back(t.phi(out.stage, n));
    return out;
}

KoszulComplex koszul_complex(AlgebraPtr r, const std::vector<SparseVec>& elements)
{
    require_ordinary(*r, "koszul_complex");
    Field f = r->field();
    for (const auto& a : elements)
        for (int b = 0; b < r->dim(); ++b) {
            SparseVec e = SparseVec::unit(f, b);
            if (r->multiply(a, e) != r->multiply(e, a))
                throw VerificationError("Koszul element " + r->describe(a) + " is not central: it does not commute with " +
                                        r->basis(b).name);
        }
    int k = static_cast<int>(elements.size());
    if (k > 16)
        throw CapExceeded("Koszul complex on more than 16 elements");
    std::vector<unsigned> subsets;
    for (unsigned s = 0; s < (1u << k); ++s)
        subsets.push_back(s);
    std::stable_sort(subsets.begin(), subsets.end(), [](unsigned x, unsigned y) {
        int px = __builtin_popcount(x), py = __builtin_popcount(y);
        return px != py ? px < py : x < y;
    });
    std::vector<int> index(1u << k);
    for (std::size_t i = 0; i < subsets.size(); ++i)
        index[subsets[i]] = static_cast<int>(i);
    int na = r->dim();
    std::vector<BasisElement> gens;
    std::vector<SparseVec> diffs;
    for (unsigned s : subsets) {
        std::string name = "e";
        if (s == 0)
            name += "0";
        for (int i = 0; i < k; ++i)
            if (s & (1u << i))
                name += std::to_string(i + 1);
        gens.push_back({name, -__builtin_popcount(s)});
        SparseVec d(f);
        int j = 0;
        for (int i = 0; i < k; ++i) {
            if (!(s & (1u << i)))
                continue;
            int g = index[s & ~(1u << i)];
            d.axpy(sign(f, j), elements[i].remapped([&](int a) { return g * na + a; }));
            ++j;
        }
        diffs.push_back(std::move(d));
    }
    KoszulComplex out;
    out.base = r;
    out.elements = elements;
    out.module = std::make_shared<const DgModule>(DgModule::free(r, gens, diffs));
    return out;
}

std::vector<SparseVec> ideal_generators(const DgAlgebra& r, const Matrix& a_span)
{
    Field f = r.field();
    std::vector<SparseVec> out;
    SpanReducer generated(f, r.dim());
    for (const auto& v : span_basis(a_span).columns()) {
        if (generated.contains(v))
            continue;
        out.push_back(v);
        for (int x = 0; x < r.dim(); ++x)
            for (int y = 0; y < r.dim(); ++y)
                generated.insert(r.multiply(r.multiply(SparseVec::unit(f, x), v), SparseVec::unit(f, y)), 0);
    }
    return out;
}

Verdict CompletionReport::verdict() const
{
    std::vector<Verdict> vs{quotient.verdict};
    if (koszul)
        vs.push_back(koszul->verdict);
    if (h0_isomorphic && !*h0_isomorphic)
        return Verdict::not_iso;
    for (Verdict v : vs)
        if (v == Verdict::not_iso)
            return Verdict::not_iso;
    for (Verdict v : vs)
        if (v == Verdict::inconclusive_window)
            return Verdict::inconclusive_window;
    return Verdict::iso;
}

namespace {

CompletionSide run_side(const std::string& name, AlgebraPtr r, ModulePtr j, const InverseLimit& limit,
                        const BidualityOptions& options)
{
    CompletionSide side;
    side.j_name = name;
    side.j = j;
    BidualityContext ctx = make_context(r, j, options);
    side.bic = bicommutator(ctx, BicTarget{limit.algebra, limit.comp});
    side.verdict = side.bic.verdict();
    return side;
}

// iota_2 iota_1^{-1} is an algebra isomorphism between the two H^0 algebras
bool same_h0(const BicResult& a, const BicResult& b)
{
    if (!a.h0_algebra || !b.h0_algebra || !a.unit_injective || !a.unit_surjective || !b.unit_injective ||
        !b.unit_surjective)
        return false;
    const Matrix& ia = a.unit_matrix;
    const Matrix& ib = b.unit_matrix;
    if (ia.rows() != ib.rows() || ia.cols() != ib.cols())
        return false;
    Field f = ia.field();
    Matrix phi = ib * *solve(ia, Matrix::identity(ia.rows(), f));
    int n = ia.rows();
    if (phi.apply(a.h0_algebra->unit()) != b.h0_algebra->unit())
        return false;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (phi.apply(a.h0_algebra->product(x, y)) != b.h0_algebra->multiply(phi.column(x), phi.column(y)))
                return false;
    return true;
}

} // namespace

CompletionReport completion_theorem_check(AlgebraPtr r, const Matrix& a_span, CompletionOptions options)
{
    require_ordinary(*r, "completion_theorem_check");
    IdealPowers pw = ideal_powers(*r, a_span, options.n_max);
    if (!pw.nilpotency_index)
        throw VerificationError("completion_theorem_check needs a nilpotent ideal; a^" + std::to_string(options.n_max) +
                                " is not zero");
    CompletionReport rep;
    rep.notes.push_back("nilpotent ideal (index " + std::to_string(*pw.nilpotency_index) +
                        "): the completion is R itself and the torsion hypotheses hold by inspection");
    rep.tower = adic_tower(r, a_span, options.n_max);
    rep.limit = inverse_limit(rep.tower);
    ModulePtr reg = std::make_shared<const DgModule>(regular_module(r));
    ModulePtr quotient = quotient_module(reg, pw.powers[0]).quotient;
    if (quotient->dim() == 0)
        throw VerificationError("a = R: J = R/a is zero");
    rep.quotient = run_side("R/a", r, quotient, rep.limit, options.bic);
    std::vector<SparseVec> gens = ideal_generators(*r, pw.powers[0]);
    try {
        KoszulComplex k = koszul_complex(r, gens);
        std::string name = "K(R; ";
        for (std::size_t i = 0; i < gens.size(); ++i)
            name += (i ? ", " : "") + r->describe(gens[i]);
        rep.koszul = run_side(name + ")", r, k.module, rep.limit, options.bic);
    } catch (const VerificationError& e) {
        rep.koszul_note = e.what();
    }
    if (rep.koszul)
        rep.h0_isomorphic = same_h0(rep.quotient.bic, rep.koszul->bic);
    return rep;
}

} // namespace dgforge
