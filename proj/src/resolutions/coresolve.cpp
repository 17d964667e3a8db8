#include "dgforge/error.hpp"
#include "dgforge/resolutions.hpp"

namespace dgforge {

namespace {

// Rows of `m` (a global-basis matrix) in degree `rdeg`, columns in degree `cdeg`.
Matrix local_block(const Matrix& m, const GradedBasis& rows, int rdeg, const GradedBasis& cols, int cdeg)
{
    std::vector<SparseVec> out;
    for (int c : cols.in_degree(cdeg))
        out.push_back(rows.to_local(m.column(c), rdeg));
    return Matrix::from_columns(rows.dim(rdeg), m.field(), out);
}

} // namespace

ModuleMap lift_through(const ModuleMap& phi, const ModuleMap& q)
{
    const DgModule& p = phi.source();
    const DgModule& qm = q.source();
    if (!p.is_free())
        throw VerificationError("lift_through needs a semi-free source");
    if (phi.degree() != 0 || q.degree() != 0)
        throw VerificationError("lift_through handles degree-0 maps");
    Field f = p.field();
    int na = p.algebra()->dim();
    const GradedBasis& qg = qm.grading();
    const GradedBasis& ng = q.target().grading();
    std::vector<SparseVec> psi(p.generator_count(), SparseVec(f));
    for (int g = 0; g < p.generator_count(); ++g) {
        int e = p.generator(g).degree;
        // psi(d g)
        std::vector<Term> acc;
        for (const auto& t : p.generator_diff(g).terms()) {
            int g0 = t.index / na;
            if (g0 >= g)
                throw VerificationError("generator differentials are not ordered");
            for (const auto& x : qm.act(psi[g0], SparseVec::unit(f, t.index % na)).terms())
                acc.push_back({x.index, t.coeff * x.coeff});
        }
        SparseVec dimage = SparseVec::from_terms(f, std::move(acc));
        SparseVec want = phi.apply(p.generator_vector(g));
        if (qg.dim(e) == 0) {
            if (!dimage.is_zero() || !want.is_zero())
                throw WindowError("cannot lift generator " + p.generator(g).name + ": target is zero there");
            continue;
        }
        Matrix sys = Matrix::vstack(qm.complex().diff(e), local_block(q.matrix(), ng, e, qg, e));
        SparseVec rhs = qg.to_local(dimage, e + 1);
        for (const auto& t : ng.to_local(want, e).terms())
            rhs.add(qg.dim(e + 1) + t.index, t.coeff);
        auto sol = solve(sys, Matrix::from_columns(sys.rows(), f, {rhs}));
        if (!sol)
            throw WindowError("cannot lift generator " + p.generator(g).name + " of degree " + std::to_string(e));
        psi[g] = qg.to_global(sol->column(0), e);
    }
    std::vector<SparseVec> cols;
    for (int g = 0; g < p.generator_count(); ++g)
        for (int a = 0; a < na; ++a)
            cols.push_back(qm.act(psi[g], SparseVec::unit(f, a)));
    return ModuleMap(phi.source_ptr(), q.source_ptr(), Matrix::from_columns(qm.dim(), f, cols), 0, true);
}

ModuleMap lift_map(const ModuleMap& f, const SemiFreeResolution& source, const SemiFreeResolution& target)
{
    return lift_through(f.compose_after(source.augmentation), target.augmentation);
}

DgModule dual_module(AlgebraPtr r)
{
    if (!r->ordinary())
        throw VerificationError("dual_module needs an ordinary algebra");
    Field f = r->field();
    int n = r->dim();
    std::vector<BasisElement> basis;
    for (int i = 0; i < n; ++i)
        basis.push_back({"D" + r->basis(i).name, 0});
    // f_i . e_j = sum_k [e_i](e_j e_k) f_k
    StructureTable t(n, n, f);
    std::vector<std::vector<Term>> acc(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (const auto& e : r->product(j, k).terms())
                acc[static_cast<std::size_t>(e.index) * n + j].push_back({k, e.coeff});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            t.set(i, j, SparseVec::from_terms(f, acc[static_cast<std::size_t>(i) * n + j]));
    return DgModule(r, basis, {}, t);
}

namespace {

bool plain_degree_zero(const DgModule& m)
{
    for (int i = 0; i < m.dim(); ++i)
        if (m.degree(i) != 0 || !m.diff(i).is_zero())
            return false;
    return true;
}

ModulePtr copies_of(const ModulePtr& j, int k)
{
    ModulePtr out = j;
    for (int c = 1; c < k; ++c)
        out = std::make_shared<const DgModule>(direct_sum_module(*out, *j));
    return out;
}

} // namespace

CoresolutionTower coresolve_by(ModulePtr m, ModulePtr j, int length)
{
    if (!plain_degree_zero(*m) || !plain_degree_zero(*j))
        throw VerificationError("coresolve_by needs modules in degree 0 with zero differential");
    if (m->algebra() != j->algebra())
        throw VerificationError("coresolve_by: modules over different algebras");
    Field f = m->field();
    CoresolutionTower t;
    t.module = m;
    t.j = j;
    t.cokernels.push_back(m);
    for (int i = 0; i <= length; ++i) {
        ModulePtr mi = t.cokernels.back();
        if (mi->dim() == 0)
            break;
        ModuleHom h = module_hom_complex(mi, j);
        int nb = h.complex().dim(0);
        Matrix stacked(0, mi->dim(), f);
        int r = 0;
        while (r < mi->dim()) {
            int best = r;
            Matrix pick;
            for (int b = 0; b < nb; ++b) {
                Matrix trial = Matrix::vstack(stacked, h.matrix(0, SparseVec::unit(f, b)));
                int tr = rank(trial);
                if (tr > best) {
                    best = tr;
                    pick = std::move(trial);
                }
            }
            if (best == r)
                break;
            stacked = std::move(pick);
            r = best;
        }
        if (r < mi->dim()) {
            Matrix ker = kernel_basis(stacked);
            SparseVec v = ker.column(0);
            std::string what;
            for (const auto& term : v.terms())
                what += (what.empty() ? "" : " + ") + term.coeff.to_string() + "*" + mi->name(term.index);
            throw VerificationError("J does not cogenerate: " + what + " is killed by every map into J");
        }
        int k = stacked.rows() / j->dim();
        ModulePtr ji = copies_of(j, k);
        ModuleMap lambda(mi, ji, stacked);
        ModuleQuotient quo = quotient_module(ji, stacked);
        if (i > 0)
            t.delta.push_back(lambda.compose_after(t.rho.back()));
        t.terms.push_back(ji);
        t.copies.push_back(k);
        t.lambda.push_back(lambda);
        t.rho.push_back(quo.projection);
        t.sections.push_back(quo.section);
        t.cokernels.push_back(quo.quotient);
    }
    return t;
}

ModuleTotalization totalize_tower(const CoresolutionTower& t, int n)
{
    if (n < 0 || n > t.length())
        throw WindowError("tower has no stage " + std::to_string(n));
    const DgModule& m = *t.module;
    AlgebraPtr alg = m.algebra();
    Field f = m.field();
    int na = alg->dim();
    ModuleTotalization out;
    out.offsets.assign(n + 1, 0);
    int dim = 0;
    for (int k = n; k >= 0; --k) {
        out.offsets[k] = dim;
        dim += t.terms[k]->dim();
    }
    std::vector<BasisElement> basis(dim);
    std::vector<SparseVec> diff(dim, SparseVec(f));
    StructureTable action(dim, na, f);
    for (int k = n; k >= 0; --k) {
        const DgModule& jk = *t.terms[k];
        int off = out.offsets[k];
        Scalar s = sign(f, k);
        auto shifted = [&](const SparseVec& v, int o) { return v.remapped([&](int i) { return i + o; }); };
        for (int i = 0; i < jk.dim(); ++i) {
            basis[off + i] = {"J" + std::to_string(k) + ":" + jk.name(i), jk.degree(i) + k};
            SparseVec d = shifted(jk.diff(i), off).scaled(s);
            if (k < n)
                d += shifted(t.delta[k].apply(SparseVec::unit(f, i)), out.offsets[k + 1]);
            diff[off + i] = std::move(d);
            for (int a = 0; a < na; ++a)
                action.set(off + i, a, shifted(jk.act(i, a), off));
        }
    }
    out.total = std::make_shared<const DgModule>(alg, basis, diff, action);
    Matrix aug(dim, m.dim(), f);
    aug.place(out.offsets[0], 0, t.lambda[0].matrix());
    out.augmentation = ModuleMap(t.module, out.total, aug);
    return out;
}

ModuleMap tower_projection(const CoresolutionTower& t, const ModuleTotalization& upper, const ModuleTotalization& lower)
{
    int n = static_cast<int>(lower.offsets.size()) - 1;
    if (static_cast<int>(upper.offsets.size()) != n + 2)
        throw DimensionMismatch("tower_projection needs consecutive stages");
    Field f = t.module->field();
    Matrix p(lower.total->dim(), upper.total->dim(), f);
    for (int k = 0; k <= n; ++k)
        p.place(lower.offsets[k], upper.offsets[k], Matrix::identity(t.terms[k]->dim(), f));
    return ModuleMap(upper.total, lower.total, p);
}

} // namespace dgforge
