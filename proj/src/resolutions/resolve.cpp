#include <algorithm>
#include <cstdlib>
#include <limits>
#include <map>
#include <set>

#include "dgforge/error.hpp"
#include "dgforge/resolutions.hpp"

namespace dgforge {

int default_generator_cap()
{
    if (const char* e = std::getenv("DGFORGE_GENCAP")) {
        char* end = nullptr;
        long v = std::strtol(e, &end, 10);
        if (end != e && *end == '\0' && v > 0 && v < (1L << 30))
            return static_cast<int>(v);
    }
    return 512;
}

std::vector<int> SemiFreeResolution::generators_in_degree(int d) const
{
    std::vector<int> out;
    for (int g = 0; g < generator_count(); ++g)
        if (generators[g].degree == d)
            out.push_back(g);
    return out;
}

std::vector<std::pair<int, int>> SemiFreeResolution::degree_table() const
{
    std::vector<std::pair<int, int>> out;
    std::set<int> degs;
    for (const auto& g : generators)
        degs.insert(g.degree);
    for (int d : degs)
        out.push_back({d, static_cast<int>(generators_in_degree(d).size())});
    return out;
}

bool is_augmented_local(const DgAlgebra& a)
{
    if (!a.ordinary() || a.dim() == 0)
        return false;
    Field f = a.field();
    if (a.unit() != SparseVec::unit(f, 0))
        return false;
    int n = a.dim();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if ((i > 0 || j > 0) && !a.product(i, j).coeff(0).is_zero())
                return false;
    // powers of the ideal must reach zero
    std::vector<SparseVec> power;
    for (int i = 1; i < n; ++i)
        power.push_back(SparseVec::unit(f, i));
    int last = n - 1;
    while (!power.empty()) {
        SpanReducer next(f, n);
        std::vector<SparseVec> basis;
        for (const auto& v : power)
            for (int j = 1; j < n; ++j) {
                SparseVec w = a.multiply(v, SparseVec::unit(f, j));
                if (next.insert(w, 0))
                    basis.push_back(w);
            }
        if (static_cast<int>(basis.size()) >= last)
            return false;
        last = static_cast<int>(basis.size());
        power = std::move(basis);
    }
    return true;
}

namespace {

struct Builder {
    AlgebraPtr alg;
    ModulePtr m;
    Field f;
    int na;
    int cap;
    std::vector<BasisElement> gens;
    std::vector<SparseVec> diffs;
    std::vector<SparseVec> images;
    std::vector<ResolutionGenerator> info;

    Builder(ModulePtr m_, int cap_) : alg(m_->algebra()), m(m_), f(m_->field()), na(alg->dim()), cap(cap_) {}

    int add(int degree, int stage, SparseVec d, SparseVec image)
    {
        if (static_cast<int>(gens.size()) >= cap)
            throw CapExceeded("resolution needs more than " + std::to_string(cap) + " generators");
        std::string name = "g" + std::to_string(gens.size());
        gens.push_back({name, degree});
        diffs.push_back(std::move(d));
        images.push_back(std::move(image));
        info.push_back({name, degree, stage});
        return static_cast<int>(gens.size()) - 1;
    }

    SparseVec generator_vector(int g) const
    {
        return alg->unit().remapped([&](int i) { return g * na + i; });
    }

    ModulePtr realize() const { return std::make_shared<const DgModule>(DgModule::free(alg, gens, diffs)); }

    Matrix augmentation(const DgModule& p) const
    {
        std::vector<SparseVec> cols;
        cols.reserve(p.dim());
        for (int g = 0; g < static_cast<int>(gens.size()); ++g)
            for (int a = 0; a < na; ++a)
                cols.push_back(m->act(images[g], SparseVec::unit(f, a)));
        return Matrix::from_columns(m->dim(), f, cols);
    }
};

SparseVec column_of(const Matrix& x, int c) { return x.column(c); }

// H^n(P) -> H^n(M) in representative coordinates.
Matrix induced_map(const Matrix& aug, const DgModule& p, const DgModule& m, const Cohomology& hp,
                   const Cohomology& hm, int n)
{
    Field f = p.field();
    std::vector<SparseVec> cols;
    for (int r = 0; r < hp.dim(); ++r) {
        SparseVec z = p.grading().to_global(column_of(hp.representatives(), r), n);
        SparseVec image = m.grading().to_local(aug.apply(z), n);
        auto l = hm.lift(image);
        if (!l)
            throw VerificationError("augmentation does not commute with the differential");
        cols.push_back(l->coeffs);
    }
    return Matrix::from_columns(hm.dim(), f, cols);
}

struct Cycle {
    int degree;
    SparseVec vec;
};

// A basis of the cocycles of A, degree by degree.
std::vector<Cycle> algebra_cycles(const DgAlgebra& a)
{
    std::vector<Cycle> out;
    const Complex& c = a.complex();
    for (int d = c.lo(); d <= c.hi(); ++d) {
        Matrix z = kernel_basis(c.diff(d));
        for (int k = 0; k < z.cols(); ++k)
            out.push_back({d, a.grading().to_global(z.column(k), d)});
    }
    return out;
}

// Picks classes among `candidates[n]` (columns in representative
// coordinates of coh[n]) until the chosen ones generate every candidate
// under multiplication by cocycles of A; each round takes the candidate
// reaching the most new classes. Returns cocycles of m.
std::vector<Cycle> module_generators(const DgModule& m, const std::map<int, Cohomology>& coh,
                                     const std::map<int, Matrix>& candidates, const std::vector<Cycle>& acycles)
{
    Field f = m.field();
    struct Cand {
        int degree;
        SparseVec coords;
        SparseVec cocycle;
        std::vector<std::pair<int, SparseVec>> reach; // (degree, class) of z a
    };
    std::vector<Cand> cands;
    for (const auto& [n, cand] : candidates) {
        const Cohomology& h = coh.at(n);
        for (int k = 0; k < cand.cols(); ++k) {
            Cand c{n, cand.column(k), SparseVec(f), {}};
            SparseVec zl(f);
            for (const auto& t : c.coords.terms())
                zl.axpy(t.coeff, h.representatives().column(t.index));
            c.cocycle = m.grading().to_global(zl, n);
            for (const auto& a : acycles) {
                auto it = coh.find(n + a.degree);
                if (it == coh.end() || it->second.dim() == 0)
                    continue;
                SparseVec za = m.act(c.cocycle, a.vec);
                if (za.is_zero())
                    continue;
                auto l = it->second.lift(m.grading().to_local(za, n + a.degree));
                if (!l)
                    throw VerificationError("product of cocycles is not a cocycle");
                if (!l->coeffs.is_zero())
                    c.reach.push_back({n + a.degree, l->coeffs});
            }
            cands.push_back(std::move(c));
        }
    }
    std::map<int, SpanReducer> reached;
    for (const auto& [n, h] : coh)
        reached.emplace(n, SpanReducer(f, h.dim()));
    auto gain = [&](const Cand& c) {
        std::map<int, SpanReducer> trial;
        int g = 0;
        for (const auto& [d, v] : c.reach) {
            auto it = trial.find(d);
            if (it == trial.end())
                it = trial.emplace(d, reached.at(d)).first;
            if (it->second.insert(v, 0))
                ++g;
        }
        return g;
    };
    std::vector<Cycle> out;
    std::vector<bool> used(cands.size(), false);
    for (;;) {
        int best = -1, best_gain = 0;
        for (std::size_t k = 0; k < cands.size(); ++k) {
            if (used[k] || reached.at(cands[k].degree).contains(cands[k].coords))
                continue;
            int g = gain(cands[k]);
            if (g > best_gain) {
                best = static_cast<int>(k);
                best_gain = g;
            }
        }
        if (best < 0)
            break;
        used[best] = true;
        out.push_back({cands[best].degree, cands[best].cocycle});
        for (const auto& [d, v] : cands[best].reach)
            reached.at(d).insert(v, 0);
    }
    return out;
}

void stage_zero(Builder& b)
{
    const DgModule& m = *b.m;
    const GradedBasis& mg = m.grading();
    std::map<int, Cohomology> coh;
    std::map<int, Matrix> cand;
    for (int n = mg.lo(); n <= mg.hi(); ++n) {
        Cohomology h = cohomology(m.complex(), n, Certify::relaxed);
        if (h.dim() > 0)
            cand.emplace(n, Matrix::identity(h.dim(), b.f));
        coh.emplace(n, std::move(h));
    }
    for (const auto& z : module_generators(m, coh, cand, algebra_cycles(*b.alg)))
        b.add(z.degree, 0, SparseVec(b.f), z.vec);
    SpanReducer span(b.f, m.dim());
    auto absorb = [&](int g) {
        for (int a = 0; a < b.na; ++a)
            span.insert(m.act(b.images[g], SparseVec::unit(b.f, a)), 0);
    };
    for (int g = 0; g < static_cast<int>(b.gens.size()); ++g)
        absorb(g);
    // disks u -> e_i, w -> d e_i with d u = w keep the cohomology unchanged
    for (int i = 0; i < m.dim(); ++i) {
        if (span.contains(SparseVec::unit(b.f, i)))
            continue;
        int w = b.add(m.degree(i) + 1, 0, SparseVec(b.f), m.diff(i));
        int u = b.add(m.degree(i), 0, b.generator_vector(w), SparseVec::unit(b.f, i));
        absorb(w);
        absorb(u);
    }
}

bool kill_stage(Builder& b, int stage, const Window& window, const std::vector<Cycle>& acycles)
{
    ModulePtr p = b.realize();
    Matrix aug = b.augmentation(*p);
    const Complex& pc = p->complex();
    const Complex& mc = b.m->complex();
    std::map<int, Cohomology> coh;
    std::map<int, Matrix> cand;
    for (int n = pc.lo(); n <= pc.hi(); ++n) {
        if (!window.contains(n - 1))
            continue;
        Cohomology hp = cohomology(pc, n, Certify::relaxed);
        if (hp.dim() > 0) {
            Cohomology hm = cohomology(mc, n, Certify::relaxed);
            Matrix ker = kernel_basis(induced_map(aug, *p, *b.m, hp, hm, n));
            if (ker.cols() > 0)
                cand.emplace(n, std::move(ker));
        }
        coh.emplace(n, std::move(hp));
    }
    if (cand.empty())
        return false;
    for (const auto& z : module_generators(*p, coh, cand, acycles)) {
        int n = z.degree;
        SparseVec target = b.m->grading().to_local(aug.apply(z.vec), n);
        SparseVec y(b.f);
        if (!target.is_zero()) {
            Matrix rhs = Matrix::from_columns(mc.dim(n), b.f, {target});
            auto sol = solve(mc.diff(n - 1), rhs);
            if (!sol)
                throw VerificationError("kernel class of the augmentation does not map to a boundary");
            y = b.m->grading().to_global(sol->column(0), n - 1);
        }
        b.add(n - 1, stage, z.vec, y);
    }
    return true;
}

void minimal_levels(Builder& b, const Window& window, int d0)
{
    const DgModule& m = *b.m;
    Field f = b.f;
    int na = b.na;
    // level 0: complement of M rad
    SpanReducer mrad(f, m.dim());
    for (int i = 0; i < m.dim(); ++i)
        for (int a = 1; a < na; ++a)
            mrad.insert(m.act(i, a), 0);
    for (int i = 0; i < m.dim(); ++i)
        if (mrad.insert(SparseVec::unit(f, i), 1))
            b.add(d0, 0, SparseVec(f), SparseVec::unit(f, i));
    std::vector<int> level;
    for (int g = 0; g < static_cast<int>(b.gens.size()); ++g)
        level.push_back(g);
    for (int k = 1; d0 - k >= window.lo && !level.empty(); ++k) {
        // the map leaving span{(g, a) : g in level}
        std::vector<SparseVec> cols;
        std::vector<int> index;
        for (int g : level)
            for (int a = 0; a < na; ++a) {
                index.push_back(g * na + a);
                SparseVec v(f);
                if (k == 1) {
                    v = m.act(b.images[g], SparseVec::unit(f, a));
                } else {
                    // d(g a) = d(g) a for ordinary A
                    std::vector<Term> acc;
                    for (const auto& t : b.diffs[g].terms())
                        for (const auto& e : b.alg->product(t.index % na, a).terms())
                            acc.push_back({(t.index / na) * na + e.index, t.coeff * e.coeff});
                    v = SparseVec::from_terms(f, std::move(acc));
                }
                cols.push_back(std::move(v));
            }
        int rows = k == 1 ? m.dim() : static_cast<int>(b.gens.size()) * na;
        Matrix map = Matrix::from_columns(rows, f, cols);
        Matrix z = kernel_basis(map);
        if (z.cols() == 0)
            break;
        auto global = [&](const SparseVec& local) { return local.remapped([&](int i) { return index[i]; }); };
        SpanReducer zrad(f, static_cast<int>(b.gens.size()) * na);
        std::vector<SparseVec> zs;
        for (int c = 0; c < z.cols(); ++c)
            zs.push_back(global(z.column(c)));
        for (const auto& v : zs)
            for (int a = 1; a < na; ++a) {
                std::vector<Term> acc;
                for (const auto& t : v.terms())
                    for (const auto& e : b.alg->product(t.index % na, a).terms())
                        acc.push_back({(t.index / na) * na + e.index, t.coeff * e.coeff});
                zrad.insert(SparseVec::from_terms(f, std::move(acc)), 0);
            }
        std::vector<int> next;
        for (const auto& v : zs)
            if (zrad.insert(v, 1))
                next.push_back(b.add(d0 - k, k, v, SparseVec(f)));
        level = std::move(next);
    }
}

bool concentrated_plain(const DgModule& m, int& degree)
{
    if (m.dim() == 0) {
        degree = 0;
        return true;
    }
    if (m.grading().lo() != m.grading().hi())
        return false;
    for (int i = 0; i < m.dim(); ++i)
        if (!m.diff(i).is_zero())
            return false;
    degree = m.grading().lo();
    return true;
}

void finish(SemiFreeResolution& res, const Builder& b)
{
    res.p = b.realize();
    Matrix aug = b.augmentation(*res.p);
    res.augmentation = ModuleMap(res.p, res.module, aug, 0, true);
    res.generators = b.info;
    const Complex& pc = res.p->complex();
    const Complex& mc = res.module->complex();
    int lo = std::min(pc.lo(), mc.lo()) - 1;
    int hi = std::max(pc.hi(), mc.hi()) + 1;
    std::vector<int> defects;
    for (int n = lo; n <= hi; ++n) {
        Cohomology hp = cohomology(pc, n, Certify::relaxed);
        Cohomology hm = cohomology(mc, n, Certify::relaxed);
        if (hp.dim() != hm.dim() || rank(induced_map(aug, *res.p, *res.module, hp, hm, n)) != hm.dim())
            defects.push_back(n);
    }
    if (defects.empty()) {
        res.exact = Certification::everywhere();
        return;
    }
    int top = defects.back();
    res.exact = Certification::range(top + 1, Certification{}.hi);
    if (res.module->algebra()->grading().hi() <= 0)
        res.missing_bound = top - 1;
}

} // namespace

bool ordered_free(const DgModule& m)
{
    if (!m.is_free())
        return false;
    int na = m.algebra()->dim();
    for (int g = 0; g < m.generator_count(); ++g)
        for (const auto& t : m.generator_diff(g).terms())
            if (t.index / na >= g)
                return false;
    return true;
}

SemiFreeResolution identity_resolution(ModulePtr p)
{
    if (!ordered_free(*p))
        throw VerificationError("identity_resolution needs a free module with ordered generator differentials");
    SemiFreeResolution res;
    res.module = p;
    res.p = p;
    res.augmentation = ModuleMap::identity(p);
    for (int g = 0; g < p->generator_count(); ++g)
        res.generators.push_back({p->generator(g).name, p->generator(g).degree, 0});
    res.window = Window(p->grading().lo(), std::max(p->grading().lo(), p->grading().hi()));
    res.exact = Certification::everywhere();
    return res;
}

SemiFreeResolution semifree_resolve(ModulePtr m, Window window, bool minimal, ResolveLimits limits)
{
    if (ordered_free(*m)) {
        SemiFreeResolution res = identity_resolution(m);
        res.window = window;
        if (minimal)
            res.note = "input is already semi-free; returned as is";
        return res;
    }
    SemiFreeResolution res;
    res.module = m;
    res.window = window;
    Builder b(m, limits.cap);
    int d0 = 0;
    if (minimal) {
        if (!is_augmented_local(*m->algebra()))
            res.note = "minimal resolution needs an augmented local ordinary algebra; built a non-minimal one";
        else if (!concentrated_plain(*m, d0))
            res.note = "minimal resolution needs a module in one degree with zero differential; built a non-minimal one";
    }
    if (minimal && res.note.empty()) {
        res.minimal = true;
        minimal_levels(b, window, d0);
    } else {
        stage_zero(b);
        std::vector<Cycle> acycles = algebra_cycles(*m->algebra());
        for (int stage = 1;; ++stage) {
            if (limits.max_stages >= 0 && stage > limits.max_stages) {
                res.stopped = true;
                break;
            }
            if (!kill_stage(b, stage, window, acycles))
                break;
            res.stages = stage;
        }
    }
    finish(res, b);
    return res;
}

Certification rhom_certification(const SemiFreeResolution& res, const DgModule& n)
{
    if (res.exact.complete || n.dim() == 0)
        return Certification::everywhere();
    if (!res.missing_bound)
        return Certification::none();
    return Certification::range(Certification{}.lo, n.grading().lo() - *res.missing_bound - 1);
}

ModuleHom derived_hom(const SemiFreeResolution& res, ModulePtr n)
{
    ModuleHom h = module_hom_complex(res.p, n);
    return h.with_cert(intersect(h.complex().cert(), rhom_certification(res, *n)));
}

} // namespace dgforge
