#include <algorithm>
#include <functional>
#include <random>

#include "dgforge/biduality.hpp"
#include "dgforge/error.hpp"

namespace dgforge {

namespace {

// A Hom complex flattened degree by degree (the layout used by end_dga).
struct Flat {
    std::vector<int> degree;
    std::vector<int> local;
    GradedBasis grading;
    explicit Flat(const Complex& c)
    {
        for (int t = c.lo(); t <= c.hi(); ++t)
            for (int k = 0; k < c.dim(t); ++k) {
                degree.push_back(t);
                local.push_back(k);
            }
        grading = GradedBasis(degree);
    }
    int size() const { return static_cast<int>(degree.size()); }
    SparseVec global(int t, const SparseVec& v) const { return grading.to_global(v, t); }
};

ModulePtr hom_module(const Complex& c, const Flat& fl, AlgebraPtr alg, const std::string& prefix,
                     const std::function<SparseVec(int, int)>& act, const Certification& cert)
{
    Field f = alg->field();
    int n = fl.size();
    std::vector<BasisElement> basis;
    std::vector<SparseVec> diff;
    StructureTable table(n, alg->dim(), f);
    for (int i = 0; i < n; ++i) {
        int t = fl.degree[i];
        basis.push_back({prefix + std::to_string(i), t});
        diff.push_back(fl.global(t + 1, c.diff(t).column(fl.local[i])));
        for (int a = 0; a < alg->dim(); ++a) {
            SparseVec v = act(i, a);
            if (!v.is_zero())
                table.set(i, a, std::move(v));
        }
    }
    DgModule m(alg, basis, diff, table);
    return std::make_shared<const DgModule>(m.with_cert(intersect(m.cert(), cert)));
}

std::vector<Matrix> basis_matrices(const ModuleHom& h, const Flat& fl)
{
    Field f = h.source().field();
    std::vector<Matrix> out;
    for (int i = 0; i < fl.size(); ++i)
        out.push_back(h.matrix(fl.degree[i], SparseVec::unit(f, fl.local[i])));
    return out;
}

// Certified degrees of Hom(N, P) from the faithful range of N, for P bounded
// in [p_lo, p_hi]: Hom^t reads N^s for s in [p_lo - t, p_hi - t].
Certification hom_into_bounded(const Certification& n, int p_lo, int p_hi)
{
    if (n.complete)
        return Certification::everywhere();
    if (n.empty())
        return Certification::none();
    const long inf = Certification{}.hi;
    long lo = n.hi >= inf ? -inf : static_cast<long>(p_hi) - n.hi;
    long hi = n.lo <= -inf ? inf : static_cast<long>(p_lo) - n.lo;
    lo = std::max(lo, -inf);
    hi = std::min(hi, inf);
    return Certification::range(static_cast<int>(lo), static_cast<int>(hi));
}

bool faithful_around(const Certification& c, int n)
{
    return c.faithful(n - 1) && c.faithful(n) && c.faithful(n + 1);
}

std::vector<SparseVec> h0_basis(const DgAlgebra& a)
{
    Field f = a.field();
    std::vector<SparseVec> out;
    if (a.ordinary()) {
        for (int i = 0; i < a.dim(); ++i)
            out.push_back(SparseVec::unit(f, i));
        return out;
    }
    Cohomology h = cohomology(a.complex(), 0, Certify::relaxed);
    for (int c = 0; c < h.dim(); ++c)
        out.push_back(a.grading().to_global(h.representatives().column(c), 0));
    return out;
}

} // namespace

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::iso:
        return "iso";
    case Verdict::not_iso:
        return "not-iso";
    case Verdict::inconclusive_window:
        return "inconclusive-window";
    }
    return "?";
}

BidualityContext make_context(AlgebraPtr base, ModulePtr j, BidualityOptions options)
{
    if (j->algebra() != base)
        throw VerificationError("J is not a module over the base algebra");
    if (j->dim() == 0)
        throw VerificationError("J is zero");
    BidualityContext ctx;
    ctx.base = base;
    ctx.j_module = j;
    ctx.options = options;
    Window w(-options.depth, std::max(0, j->grading().hi()));
    bool plain = base->ordinary() && j->grading().lo() == j->grading().hi();
    if (plain && basis_idempotents(*base).size() > 1)
        ctx.p_res = projective_resolve(j, w);
    else
        ctx.p_res = semifree_resolve(j, w, options.minimal);
    ctx.p_resolves_j = ctx.p_res.exact.complete;
    ctx.p = ctx.p_res.p;
    long endo_dim = 0;
    for (int t = ctx.p->grading().lo(); t <= ctx.p->grading().hi(); ++t)
        for (int u = ctx.p->grading().lo(); u <= ctx.p->grading().hi(); ++u)
            endo_dim += static_cast<long>(ctx.p->complex().dim(t)) * ctx.p->complex().dim(u);
    // a bound for dim Hom_A(P, P); free P gives generators x dim P
    if (ctx.p->is_free())
        endo_dim = static_cast<long>(ctx.p->generator_count()) * ctx.p->dim();
    if (endo_dim > options.max_endo_dim)
        throw CapExceeded("End(P) would have dimension " + std::to_string(endo_dim) + " > " +
                          std::to_string(options.max_endo_dim) + "; lower the depth");
    ctx.end = end_dga(ctx.p);
    ctx.endo = ctx.end.endo;
    ctx.p_over_e = ctx.end.p_over_e;
    Flat fl(ctx.end.hom.complex());
    ctx.e_matrices = basis_matrices(ctx.end.hom, fl);

    // (x.a).e = (-1)^{|a||e|} (x.e).a
    Field f = base->field();
    const DgModule& pa = *ctx.p;
    const DgModule& pe = *ctx.p_over_e;
    int np = pa.dim(), na = base->dim(), ne = ctx.endo->dim();
    auto check = [&](int x, int a, int e) {
        SparseVec lhs = pe.act(pa.act(x, a), SparseVec::unit(f, e));
        SparseVec rhs = pa.act(pe.act(x, e), SparseVec::unit(f, a)).scaled(sign(f, base->degree(a) * ctx.endo->degree(e)));
        if (lhs != rhs)
            throw VerificationError("A- and E-actions on P do not commute at " + pa.name(x) + ", " +
                                    base->basis(a).name + ", " + ctx.endo->basis(e).name);
    };
    if (static_cast<long>(np) * na * ne <= 200000) {
        for (int x = 0; x < np; ++x)
            for (int a = 0; a < na; ++a)
                for (int e = 0; e < ne; ++e)
                    check(x, a, e);
    } else {
        std::mt19937 rng(0x5eed);
        for (int s = 0; s < 4000; ++s)
            check(static_cast<int>(rng() % np), static_cast<int>(rng() % na), static_cast<int>(rng() % ne));
    }
    return ctx;
}

Dual dualize(const BidualityContext& ctx, ModulePtr m)
{
    if (m->algebra() != ctx.base)
        throw VerificationError("dualize: module over a different algebra");
    Dual out;
    out.res = semifree_resolve(m, ctx.options.window, ctx.options.minimal);
    out.hom = module_hom_complex(out.res.p, ctx.p);
    const Complex& c = out.hom.complex();
    Flat fl(c);
    out.matrices = basis_matrices(out.hom, fl);
    const DgModule& pm = *out.res.p;
    Field f = ctx.base->field();
    std::vector<std::vector<SparseVec>> gen_images(fl.size());
    for (int i = 0; i < fl.size(); ++i)
        for (int g = 0; g < pm.generator_count(); ++g)
            gen_images[i].push_back(out.matrices[i].apply(pm.generator_vector(g)));
    auto act = [&](int i, int e) {
        int te = ctx.endo->degree(e);
        int t = fl.degree[i] + te;
        bool any = false;
        std::vector<SparseVec> img;
        for (const auto& v : gen_images[i]) {
            img.push_back(ctx.e_matrices[e].apply(v));
            any = any || !img.back().is_zero();
        }
        if (!any)
            return SparseVec(f);
        SparseVec local = out.hom.coords_free(t, [&](int g) { return img[g]; });
        return fl.global(t, local).scaled(sign(f, fl.degree[i] * te));
    };
    out.cert = intersect(c.cert(), rhom_certification(out.res, *ctx.p));
    out.module = hom_module(c, fl, ctx.endo, "f", act, out.cert);
    return out;
}

Codual codualize(const BidualityContext& ctx, ModulePtr n)
{
    if (n->algebra() != ctx.endo)
        throw VerificationError("codualize: module over a different algebra");
    Codual out;
    ResolveLimits lim;
    lim.max_stages = ctx.options.stages;
    out.res = semifree_resolve(n, ctx.options.window, false, lim);
    out.hom = module_hom_complex(out.res.p, ctx.p_over_e);
    const Complex& c = out.hom.complex();
    Flat fl(c);
    out.matrices = basis_matrices(out.hom, fl);
    const DgModule& q = *out.res.p;
    Field f = ctx.base->field();
    std::vector<std::vector<SparseVec>> gen_images(fl.size());
    for (int i = 0; i < fl.size(); ++i)
        for (int g = 0; g < q.generator_count(); ++g)
            gen_images[i].push_back(out.matrices[i].apply(q.generator_vector(g)));
    auto act = [&](int i, int a) {
        int t = fl.degree[i] + ctx.base->degree(a);
        bool any = false;
        std::vector<SparseVec> img;
        for (const auto& v : gen_images[i]) {
            img.push_back(ctx.p->act(v, SparseVec::unit(f, a)));
            any = any || !img.back().is_zero();
        }
        if (!any)
            return SparseVec(f);
        return fl.global(t, out.hom.coords_free(t, [&](int g) { return img[g]; }));
    };
    const GradedBasis& pg = ctx.p->grading();
    out.cert = intersect(intersect(c.cert(), rhom_certification(out.res, *ctx.p_over_e)),
                         hom_into_bounded(n->cert(), pg.lo(), pg.hi()));
    out.module = hom_module(c, fl, ctx.base, "h", act, out.cert);
    return out;
}

Bidual biduality_map(const BidualityContext& ctx, ModulePtr m)
{
    Bidual b{dualize(ctx, m), {}, {}, {}};
    b.s = codualize(ctx, b.d.module);
    const DgModule& pm = *b.d.res.p;
    const DgModule& dm = *b.d.module;
    const DgModule& q = *b.s.res.p;
    const ModuleMap& aug = b.s.res.augmentation;
    Field f = ctx.base->field();
    std::vector<SparseVec> aug_gen;
    for (int g = 0; g < q.generator_count(); ++g)
        aug_gen.push_back(aug.apply(q.generator_vector(g)));
    std::vector<SparseVec> cols;
    for (int x = 0; x < pm.dim(); ++x) {
        int tx = pm.degree(x);
        SparseVec local = b.s.hom.coords_free(tx, [&](int g) {
            SparseVec out(f);
            for (const auto& term : aug_gen[g].terms())
                out.axpy(term.coeff * sign(f, tx * dm.degree(term.index)), b.d.matrices[term.index].column(x));
            return out;
        });
        cols.push_back(b.s.module->grading().to_global(local, tx));
    }
    b.epsilon = ModuleMap(b.d.res.p, b.s.module, Matrix::from_columns(b.s.module->dim(), f, cols), 0, true);
    b.cert = intersect(b.d.res.exact, b.s.cert);
    return b;
}

ModuleMap bidual_morphism(const BidualityContext& ctx, const ModuleMap& f, const Bidual& source, const Bidual& target)
{
    Field fl = ctx.base->field();
    // P_M -> P_M'
    ModuleMap fhat = lift_map(f, source.d.res, target.d.res);
    // D(fhat) : D(M') -> D(M), g |-> g o fhat
    const DgModule& pm = *source.d.res.p;
    const DgModule& dm2 = *target.d.module;
    std::vector<SparseVec> fgen;
    for (int g = 0; g < pm.generator_count(); ++g)
        fgen.push_back(fhat.apply(pm.generator_vector(g)));
    std::vector<SparseVec> cols;
    for (int i = 0; i < dm2.dim(); ++i) {
        int t = dm2.degree(i);
        SparseVec local = source.d.hom.coords_free(t, [&](int g) { return target.d.matrices[i].apply(fgen[g]); });
        cols.push_back(source.d.module->grading().to_global(local, t));
    }
    ModuleMap df(target.d.module, source.d.module, Matrix::from_columns(source.d.module->dim(), fl, cols), 0, true);
    // Q' -> Q over E
    ModuleMap phi = lift_through(df.compose_after(target.s.res.augmentation), source.s.res.augmentation);
    // S(f) : h |-> h o phi
    const DgModule& q2 = *target.s.res.p;
    std::vector<SparseVec> pgen;
    for (int g = 0; g < q2.generator_count(); ++g)
        pgen.push_back(phi.apply(q2.generator_vector(g)));
    const DgModule& sm = *source.s.module;
    std::vector<SparseVec> scols;
    for (int i = 0; i < sm.dim(); ++i) {
        int t = sm.degree(i);
        SparseVec local = target.s.hom.coords_free(t, [&](int g) { return source.s.matrices[i].apply(pgen[g]); });
        scols.push_back(target.s.module->grading().to_global(local, t));
    }
    return ModuleMap(source.s.module, target.s.module, Matrix::from_columns(target.s.module->dim(), fl, scols), 0,
                     true);
}

QisReport cohomology_iso(const ChainMap& f, int lo, int hi, const Certification& cert)
{
    QisReport out;
    bool all = true;
    for (int n = lo; n <= hi; ++n) {
        if (!faithful_around(cert, n) || !f.source().certified_at(n) || !f.target().certified_at(n))
            continue;
        Cohomology s = cohomology(f.source(), n, Certify::relaxed);
        Cohomology t = cohomology(f.target(), n, Certify::relaxed);
        DegreeRow row{n, s.dim(), t.dim(), rank(cohomology_map(f, s, t))};
        all = all && row.iso();
        out.rows.push_back(row);
    }
    if (out.rows.empty())
        out.verdict = Verdict::inconclusive_window;
    else
        out.verdict = all ? Verdict::iso : Verdict::not_iso;
    return out;
}

QisReport epsilon_check(const BidualityContext& ctx, const Bidual& b)
{
    return cohomology_iso(b.epsilon.chain_map(), ctx.options.window.lo, ctx.options.window.hi, b.cert);
}

QisReport counit_check(const BidualityContext& ctx, ModulePtr n)
{
    if (n->algebra() != ctx.endo || !ordered_free(*n))
        throw VerificationError("counit_check needs a finite free E-module with ordered generators");
    Codual c = codualize(ctx, n);
    Dual d = dualize(ctx, c.module);
    const DgModule& pd = *d.res.p; // P over A resolving D'(N)
    Field f = ctx.base->field();
    std::vector<SparseVec> aug_gen;
    for (int h = 0; h < pd.generator_count(); ++h)
        aug_gen.push_back(d.res.augmentation.apply(pd.generator_vector(h)));
    std::vector<SparseVec> cols;
    for (int y = 0; y < n->dim(); ++y) {
        int ty = n->degree(y);
        SparseVec local = d.hom.coords_free(ty, [&](int h) {
            SparseVec out(f);
            for (const auto& term : aug_gen[h].terms())
                out.axpy(term.coeff, c.matrices[term.index].column(y));
            return out.scaled(sign(f, ty * pd.generator(h).degree));
        });
        cols.push_back(d.module->grading().to_global(local, ty));
    }
    ModuleMap eps(n, d.module, Matrix::from_columns(d.module->dim(), f, cols), 0, true);
    return cohomology_iso(eps.chain_map(), ctx.options.window.lo, ctx.options.window.hi, intersect(c.cert, d.cert));
}

ModulePtr free_shift(const BidualityContext& ctx, int s)
{
    return std::make_shared<const DgModule>(DgModule::free(ctx.endo, {{"E[" + std::to_string(s) + "]", -s}}));
}

ModulePtr free_cone(const ModuleMap& f)
{
    const DgModule& m = f.source();
    const DgModule& n = f.target();
    if (!ordered_free(m) || !ordered_free(n) || f.degree() != 0)
        throw VerificationError("free_cone needs a degree-0 map between ordered free modules");
    Field fl = m.field();
    int na = m.algebra()->dim();
    int shift = n.generator_count() * na;
    std::vector<BasisElement> gens;
    std::vector<SparseVec> diffs;
    for (int g = 0; g < n.generator_count(); ++g) {
        gens.push_back({"N:" + n.generator(g).name, n.generator(g).degree});
        diffs.push_back(n.generator_diff(g));
    }
    for (int g = 0; g < m.generator_count(); ++g) {
        gens.push_back({"M:" + m.generator(g).name, m.generator(g).degree - 1});
        SparseVec d = f.apply(m.generator_vector(g));
        d -= m.generator_diff(g).remapped([&](int i) { return i + shift; });
        diffs.push_back(std::move(d));
    }
    (void)fl;
    return std::make_shared<const DgModule>(DgModule::free(m.algebra(), gens, diffs));
}

AdjunctionReport adjunction_check(const BidualityContext& ctx, ModulePtr n, ModulePtr m)
{
    if (n->algebra() != ctx.endo || !ordered_free(*n))
        throw VerificationError("adjunction_check needs a finite free E-module");
    Dual d = dualize(ctx, m);
    Codual c = codualize(ctx, n);
    ModuleHom left = module_hom_complex(n, d.module);
    ModuleHom right = module_hom_complex(d.res.p, c.module);
    const DgModule& pm = *d.res.p;
    Field f = ctx.base->field();
    AdjunctionReport out;
    out.chain_map = true;
    out.bijective = true;
    const Window& w = ctx.options.window;
    std::map<int, Matrix> phi;
    for (int t = w.lo - 1; t <= w.hi + 1; ++t) {
        int ld = left.complex().dim(t), rd = right.complex().dim(t);
        std::vector<SparseVec> cols;
        for (int u = 0; u < ld; ++u) {
            SparseVec fu = SparseVec::unit(f, u);
            std::vector<SparseVec> fn; // f(n) in D(M), per generator of N
            for (int g = 0; g < n->generator_count(); ++g)
                fn.push_back(left.apply(t, fu, n->generator_vector(g)));
            SparseVec local = right.coords_free(t, [&](int x) {
                int tx = pm.generator(x).degree;
                SparseVec xv = pm.generator_vector(x);
                SparseVec in_dn = c.hom.coords_free(t + tx, [&](int g) {
                    SparseVec val(f);
                    for (const auto& term : fn[g].terms())
                        val.axpy(term.coeff, d.matrices[term.index].apply(xv));
                    return val.scaled(sign(f, tx * n->generator(g).degree));
                });
                return c.module->grading().to_global(in_dn, t + tx);
            });
            cols.push_back(local);
        }
        phi[t] = Matrix::from_columns(rd, f, cols);
        if (t >= w.lo && t <= w.hi) {
            out.dims.push_back({t, ld});
            if (ld != rd || rank(phi[t]) != ld)
                out.bijective = false;
        }
    }
    for (int t = w.lo; t < w.hi; ++t)
        if (phi[t + 1] * left.complex().diff(t) != right.complex().diff(t) * phi[t])
            out.chain_map = false;
    return out;
}

int BicResult::dim(int t) const
{
    auto it = table.find(t);
    return it == table.end() ? 0 : it->second.dim;
}

Verdict BicResult::verdict() const
{
    bool bad = !unit_injective || !unit_surjective || (target_iso && !*target_iso);
    bool missing = false;
    for (const auto& [t, row] : table) {
        if (row.boundary_suspect)
            continue;
        if (!row.certified)
            missing = true;
        else if (t != 0 && row.dim > 0)
            bad = true;
    }
    auto zero = table.find(0);
    if (zero == table.end() || !zero->second.certified)
        return Verdict::inconclusive_window;
    if (bad)
        return Verdict::not_iso;
    return missing ? Verdict::inconclusive_window : Verdict::iso;
}

namespace {

// Hom_E(Q_s, P) for the stage prefixes Q_s of a resolution Q -> P.
struct StageHoms {
    std::vector<ModulePtr> q;
    std::vector<ModuleMap> aug;
    std::vector<ModuleHom> hom;
};

StageHoms stage_homs(const SemiFreeResolution& res, ModulePtr target, int last)
{
    StageHoms out;
    const DgModule& full = *res.p;
    int ne = full.algebra()->dim();
    Field f = full.field();
    for (int s = 0; s <= last; ++s) {
        int count = 0;
        while (count < full.generator_count() && res.generators[count].stage <= s)
            ++count;
        for (int g = count; g < full.generator_count(); ++g)
            if (res.generators[g].stage <= s)
                throw VerificationError("resolution generators are not sorted by stage");
        ModulePtr qs;
        if (count == full.generator_count()) {
            qs = res.p;
        } else {
            std::vector<BasisElement> gens;
            std::vector<SparseVec> diffs;
            for (int g = 0; g < count; ++g) {
                gens.push_back(full.generator(g));
                diffs.push_back(full.generator_diff(g));
            }
            qs = std::make_shared<const DgModule>(DgModule::free(full.algebra(), gens, diffs));
        }
        out.q.push_back(qs);
        out.aug.emplace_back(qs, target, res.augmentation.matrix().column_block(0, count * ne), 0, false);
        out.hom.push_back(module_hom_complex(qs, target));
    }
    (void)f;
    return out;
}

// Inclusion Q_small -> Q_big of stage prefixes.
ModuleMap prefix_inclusion(const ModulePtr& small, const ModulePtr& big)
{
    Field f = small->field();
    Matrix m(big->dim(), small->dim(), f);
    m.place(0, 0, Matrix::identity(small->dim(), f));
    return ModuleMap(small, big, m, 0, false);
}

// Restriction Hom(Q_big, P) -> Hom(Q_small, P) as a chain map.
ChainMap restriction(const ModuleHom& big, const ModuleHom& small)
{
    const Complex& cb = big.complex();
    const Complex& cs = small.complex();
    Field f = cb.field();
    int lo = std::min(cb.lo(), cs.lo()), hi = std::max(cb.hi(), cs.hi());
    const DgModule& qb = big.source();
    std::vector<Matrix> comps;
    for (int t = lo; t <= hi; ++t) {
        std::vector<SparseVec> cols;
        for (int u = 0; u < cb.dim(t); ++u) {
            SparseVec fu = SparseVec::unit(f, u);
            cols.push_back(small.coords_free(t, [&](int g) { return big.apply(t, fu, qb.generator_vector(g)); }));
        }
        comps.push_back(Matrix::from_columns(cs.dim(t), f, cols));
    }
    return ChainMap(std::make_shared<const Complex>(cb), std::make_shared<const Complex>(cs), lo, comps);
}

SparseVec bilinear(const std::vector<std::vector<SparseVec>>& table, const SparseVec& x, const SparseVec& y)
{
    SparseVec out(x.field());
    for (const auto& a : x.terms())
        for (const auto& b : y.terms())
            out.axpy(a.coeff * b.coeff, table[a.index][b.index]);
    return out;
}

} // namespace

BicResult bicommutator(const BidualityContext& ctx, const std::optional<BicTarget>& target)
{
    const Window& w = ctx.options.window;
    Field f = ctx.base->field();
    ResolveLimits lim;
    lim.max_stages = ctx.options.stages;
    SemiFreeResolution q = semifree_resolve(ctx.p_over_e, w, false, lim);
    BicResult out;
    out.resolution_terminated = !q.stopped;
    int last = q.stages;
    out.stages = last;
    if (!out.resolution_terminated && last < 4)
        throw WindowError("the stage limit needs at least 4 stages");
    StageHoms sh = stage_homs(q, ctx.p_over_e, last);
    out.bic_complex = sh.hom[last].complex();

    // restrictions between stages, composed from single steps on demand
    std::vector<ChainMap> step;
    if (!out.resolution_terminated)
        for (int s = 0; s < last; ++s)
            step.push_back(restriction(sh.hom[s + 1], sh.hom[s]));
    std::map<std::pair<int, int>, ChainMap> composites;
    std::function<const ChainMap&(int, int)> to = [&](int from, int into) -> const ChainMap& {
        auto key = std::make_pair(from, into);
        auto it = composites.find(key);
        if (it != composites.end())
            return it->second;
        ChainMap c = from == into + 1 ? step[into] : step[into].compose_after(to(from, into + 1));
        return composites.emplace(key, std::move(c)).first->second;
    };
    std::map<std::pair<int, int>, Cohomology> cohs;
    auto coh = [&](int stage, int t) -> const Cohomology& {
        auto key = std::make_pair(stage, t);
        auto it = cohs.find(key);
        if (it == cohs.end())
            it = cohs.emplace(key, cohomology(sh.hom[stage].complex(), t, Certify::relaxed)).first;
        return it->second;
    };
    auto image = [&](int from, int into, int t) {
        return rank(cohomology_map(to(from, into), coh(from, t), coh(into, t)));
    };

    Certification term_cert = intersect(out.bic_complex.cert(), rhom_certification(q, *ctx.p_over_e));
    for (int t = w.lo; t <= w.hi; ++t) {
        BicDegree row;
        row.degree = t;
        row.boundary_suspect = t >= w.hi - 1;
        if (out.resolution_terminated) {
            row.base = last;
            row.dim = cohomology_dim(out.bic_complex, t, Certify::relaxed);
            row.stable = true;
            row.certified = faithful_around(term_cert, t);
        } else {
            // deepest base whose image has stopped shrinking and does not
            // shrink one stage further down
            row.base = last - 3;
            row.dim = image(last, last - 3, t);
            for (int b = last - 3; b >= 1; --b) {
                int img = image(last, b, t);
                if (img == image(last - 1, b, t) && img == image(last, b - 1, t)) {
                    row.base = b;
                    row.dim = img;
                    row.stable = true;
                    break;
                }
            }
            row.certified = row.stable;
        }
        out.table[t] = row;
    }
    int base = out.table[0].base;
    out.base_stage = base;
    out.higher_vanishing = true;
    out.concentrated = true;
    for (const auto& [t, row] : out.table) {
        if (row.boundary_suspect || t == 0)
            continue;
        bool zero = row.certified && row.dim == 0;
        if (t > 0)
            out.higher_vanishing = out.higher_vanishing && zero;
        out.concentrated = out.concentrated && zero;
    }

    // Degree 0: stable image S inside H^0 Hom(Q_base, P).
    const ModuleHom& hb = sh.hom[base];
    const ModuleHom& hl = sh.hom[last];
    Cohomology h0b = cohomology(hb.complex(), 0, Certify::relaxed);
    Cohomology h0l = cohomology(hl.complex(), 0, Certify::relaxed);
    Matrix r0 = out.resolution_terminated ? Matrix::identity(h0l.dim(), f)
                                          : cohomology_map(to(last, base), h0l, h0b);
    std::vector<int> piv = pivot_columns(r0);
    int k = static_cast<int>(piv.size());
    std::vector<SparseVec> sb_cols;
    for (int c : piv)
        sb_cols.push_back(r0.column(c));
    Matrix sb = Matrix::from_columns(h0b.dim(), f, sb_cols);
    const DgModule& qb = *sh.q[base];
    auto class_in_s = [&](const SparseVec& cocycle) -> std::optional<SparseVec> {
        auto lifted = h0b.lift(cocycle);
        if (!lifted)
            throw VerificationError("not a cocycle of Hom(Q, P)");
        auto x = solve(sb, Matrix::from_columns(sb.rows(), f, {lifted->coeffs}));
        if (!x)
            return std::nullopt;
        return x->column(0);
    };

    // unit: a |-> class of rho_a o aug
    std::vector<SparseVec> h0a = h0_basis(*ctx.base);
    std::vector<SparseVec> unit_cols;
    for (const auto& a : h0a) {
        SparseVec z = hb.coords_free(0, [&](int g) { return ctx.p->act(sh.aug[base].apply(qb.generator_vector(g)), a); });
        auto c = class_in_s(z);
        if (!c)
            throw VerificationError("unit class outside the stable image");
        unit_cols.push_back(*c);
    }
    out.unit_matrix = Matrix::from_columns(k, f, unit_cols);
    int ur = rank(out.unit_matrix);
    out.unit_injective = ur == static_cast<int>(h0a.size());
    out.unit_surjective = ur == k;

    if (k == 0 || !out.table[0].stable) {
        out.h0_note = "degree 0 has not stabilized";
        return out;
    }

    // phi . psi = psi o lift(phi), lift through aug of the last stage
    ModuleMap incl = prefix_inclusion(sh.q[base], sh.q[last]);
    auto product_table = [&](const std::vector<SparseVec>& reps) {
        std::vector<ModuleMap> maps, lifts;
        for (const auto& r : reps) {
            maps.push_back(hl.to_map(0, r));
            lifts.push_back(lift_through(maps.back().compose_after(incl), sh.aug[last]));
        }
        std::vector<std::vector<SparseVec>> table(k, std::vector<SparseVec>(k));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) {
                ModuleMap comp = maps[j].compose_after(lifts[i]);
                SparseVec z = hb.coords_free(0, [&](int g) { return comp.apply(qb.generator_vector(g)); });
                auto c = class_in_s(z);
                if (!c)
                    throw VerificationError("product leaves the stable image");
                table[i][j] = *c;
            }
        return table;
    };
    std::vector<SparseVec> reps;
    for (int c : piv)
        reps.push_back(h0l.representatives().column(c));
    std::vector<std::vector<SparseVec>> table;
    try {
        table = product_table(reps);
    } catch (const WindowError& e) {
        out.h0_note = std::string("products need more stages: ") + e.what();
        return out;
    } catch (const VerificationError& e) {
        out.h0_note = e.what();
        return out;
    }

    // Same classes, representatives moved by coboundaries.
    out.product_well_defined = true;
    const Complex& lc = hl.complex();
    if (lc.dim(-1) > 0) {
        std::mt19937 rng(0x5eed);
        std::vector<SparseVec> moved;
        Matrix d = lc.diff(-1);
        for (const auto& r : reps) {
            SparseVec h(f);
            for (int i = 0; i < lc.dim(-1); ++i)
                h.add(i, Scalar(f, static_cast<long>(rng() % 5) - 2));
            moved.push_back(r + d.apply(h));
        }
        try {
            auto t2 = product_table(moved);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j)
                    if (t2[i][j] != table[i][j])
                        out.product_well_defined = false;
        } catch (const Error&) {
            out.product_well_defined = false;
        }
    }

    SparseVec one(f);
    {
        SparseVec unit_coords(f);
        if (ctx.base->ordinary()) {
            unit_coords = ctx.base->unit();
        } else {
            Cohomology ha = cohomology(ctx.base->complex(), 0, Certify::relaxed);
            unit_coords = ha.lift(ctx.base->grading().to_local(ctx.base->unit(), 0))->coeffs;
        }
        one = out.unit_matrix.apply(unit_coords);
    }
    out.unit_multiplicative = true;
    for (int i = 0; i < k; ++i) {
        SparseVec e = SparseVec::unit(f, i);
        if (bilinear(table, one, e) != e || bilinear(table, e, one) != e)
            out.unit_multiplicative = false;
    }
    auto iota = [&](const SparseVec& a) { return out.unit_matrix.apply(a); };
    if (ctx.base->ordinary()) {
        for (std::size_t a = 0; a < h0a.size(); ++a)
            for (std::size_t b = 0; b < h0a.size(); ++b)
                if (iota(ctx.base->product(static_cast<int>(a), static_cast<int>(b))) !=
                    bilinear(table, iota(h0a[a]), iota(h0a[b])))
                    out.unit_multiplicative = false;
    }

    if (!out.concentrated)
        out.h0_note = "cohomology is not concentrated in degree 0";
    std::vector<BasisElement> h0_basis_names;
    StructureTable mt(k, k, f);
    for (int i = 0; i < k; ++i) {
        h0_basis_names.push_back({"b" + std::to_string(i), 0});
        for (int j = 0; j < k; ++j)
            mt.set(i, j, table[i][j]);
    }
    try {
        out.h0_algebra =
            std::make_shared<const DgAlgebra>(f, h0_basis_names, mt, one, std::vector<SparseVec>{}, Verify::full);
    } catch (const VerificationError& e) {
        out.h0_note = std::string("H^0 product fails the algebra axioms: ") + e.what();
    }

    if (target) {
        const DgAlgebra& tg = *target->algebra;
        const Matrix& comp = target->comp;
        std::string why;
        int n = static_cast<int>(h0a.size());
        if (comp.rows() != tg.dim() || comp.cols() != n || rank(comp) != n || tg.dim() != n)
            why = "comp is not bijective";
        else if (!ctx.base->ordinary())
            why = "target comparison needs an ordinary base";
        else if (comp.apply(ctx.base->unit()) != tg.unit())
            why = "comp is not unital";
        else if (!out.unit_injective || !out.unit_surjective)
            why = "unit is not bijective";
        if (why.empty()) {
            for (int a = 0; a < n && why.empty(); ++a)
                for (int b = 0; b < n && why.empty(); ++b)
                    if (comp.apply(ctx.base->product(a, b)) != tg.multiply(comp.column(a), comp.column(b)))
                        why = "comp is not multiplicative";
        }
        if (why.empty()) {
            Matrix inv = *solve(comp, Matrix::identity(n, f));
            auto theta = [&](const SparseVec& x) { return iota(inv.apply(x)); };
            for (int x = 0; x < n && why.empty(); ++x)
                for (int y = 0; y < n && why.empty(); ++y) {
                    SparseVec ex = SparseVec::unit(f, x), ey = SparseVec::unit(f, y);
                    SparseVec xy = tg.multiply(ex, ey);
                    if (theta(xy) != bilinear(table, theta(ex), theta(ey)))
                        why = "left module maps disagree at " + tg.basis(x).name + ", " + tg.basis(y).name;
                    else if (theta(tg.multiply(ey, ex)) != bilinear(table, theta(ey), theta(ex)))
                        why = "right module maps disagree at " + tg.basis(y).name + ", " + tg.basis(x).name;
                }
            if (why.empty() && theta(tg.unit()) != one)
                why = "units disagree";
        }
        out.target_iso = why.empty();
        out.target_note = why;
    }
    return out;
}

HolimReport holim_tower_check(const BidualityContext& ctx, ModulePtr m, const CoresolutionTower& tower)
{
    if (tower.module != m && tower.module->dim() != m->dim())
        throw VerificationError("tower is not a coresolution of this module");
    if (tower.j->algebra() != ctx.base)
        throw VerificationError("tower and context live over different algebras");
    HolimReport out;
    int len = tower.length();
    out.length = len;
    bool exhausted = tower.cokernels.back()->dim() == 0;
    Bidual sm = biduality_map(ctx, m);
    std::vector<ModuleTotalization> tot;
    std::vector<Bidual> si;
    for (int n = 0; n <= len; ++n) {
        tot.push_back(totalize_tower(tower, n));
        si.push_back(biduality_map(ctx, tot.back().total));
    }
    ChainMap comparison = bidual_morphism(ctx, tot[len].augmentation, sm, si[len]).chain_map();
    std::vector<ChainMap> transitions; // S(I^{n+1}) -> S(I^n)
    for (int n = 0; n < len; ++n)
        transitions.push_back(bidual_morphism(ctx, tower_projection(tower, tot[n + 1], tot[n]), si[n + 1], si[n]).chain_map());

    const Window& w = ctx.options.window;
    int top = exhausted ? w.hi : std::min(w.hi, len - 2);
    bool all = true, any = false, settled = true;
    for (int t = w.lo; t <= top; ++t) {
        // S(I^n) stands for S(M) in degree t once n > t + 1.
        int from = exhausted ? len : std::max(0, t + 1);
        bool certified = faithful_around(sm.s.cert, t) && comparison.source().certified_at(t);
        for (int n = from; n <= len && certified; ++n)
            certified = faithful_around(si[n].s.cert, t) && si[n].s.hom.complex().certified_at(t);
        if (!certified)
            continue;
        Cohomology hs = cohomology(comparison.source(), t, Certify::relaxed);
        Cohomology hl = cohomology(comparison.target(), t, Certify::relaxed);
        bool constant = true;
        for (int n = from; n < len; ++n) {
            Cohomology a = cohomology(transitions[n].source(), t, Certify::relaxed);
            Cohomology b = cohomology(transitions[n].target(), t, Certify::relaxed);
            if (a.dim() != b.dim() || rank(cohomology_map(transitions[n], a, b)) != b.dim())
                constant = false;
        }
        int r = rank(cohomology_map(comparison, hs, hl));
        out.rows[t] = {hs.dim(), hl.dim(), r};
        any = true;
        settled = settled && constant;
        all = all && hs.dim() == hl.dim() && r == hl.dim();
    }
    if (!any || !settled)
        out.verdict = Verdict::inconclusive_window;
    else
        out.verdict = all ? Verdict::iso : Verdict::not_iso;
    return out;
}

} // namespace dgforge
