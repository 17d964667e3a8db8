#include <random>

#include "dgforge/dgalgebra.hpp"
#include "dgforge/error.hpp"

namespace dgforge {

namespace {

bool exhaustive(Verify mode, long long work)
{
    if (mode == Verify::full)
        return true;
    if (mode == Verify::sampled)
        return false;
    return work <= 2000000;
}

// Full action table of any module.
StructureTable action_table(const DgModule& m)
{
    int na = m.algebra()->dim();
    StructureTable t(m.dim(), na, m.field());
    for (int i = 0; i < m.dim(); ++i)
        for (int a = 0; a < na; ++a)
            t.set(i, a, m.act(i, a));
    return t;
}

std::vector<BasisElement> basis_of(const DgModule& m)
{
    std::vector<BasisElement> out;
    for (int i = 0; i < m.dim(); ++i)
        out.push_back({m.name(i), m.degree(i)});
    return out;
}

} // namespace

DgModule::DgModule(AlgebraPtr algebra, std::vector<BasisElement> basis, std::vector<SparseVec> diff,
                   StructureTable action, Verify mode)
    : algebra_(std::move(algebra)), basis_(std::move(basis)), diff_(std::move(diff)), action_(std::move(action))
{
    std::vector<int> degs;
    for (const auto& b : basis_)
        degs.push_back(b.degree);
    grading_ = GradedBasis(degs);
    if (diff_.empty())
        diff_.assign(dim(), SparseVec(field()));
    if (static_cast<int>(diff_.size()) != dim())
        throw DimensionMismatch("module differential table size");
    if (action_.rows() == 0 && action_.cols() == 0)
        action_ = StructureTable(dim(), algebra_->dim(), field());
    if (action_.rows() != dim() || action_.cols() != algebra_->dim())
        throw DimensionMismatch("module action table shape");
    build_complex();
    verify(mode);
}

DgModule DgModule::free(AlgebraPtr algebra, std::vector<BasisElement> generators,
                        std::vector<SparseVec> generator_diffs)
{
    DgModule m;
    m.algebra_ = std::move(algebra);
    m.free_ = true;
    m.generators_ = std::move(generators);
    Field f = m.field();
    int na = m.algebra_->dim();
    int ng = m.generator_count();
    if (generator_diffs.empty())
        generator_diffs.assign(ng, SparseVec(f));
    if (static_cast<int>(generator_diffs.size()) != ng)
        throw DimensionMismatch("one differential per generator required");
    m.generator_diffs_ = std::move(generator_diffs);
    std::vector<int> degs;
    for (int g = 0; g < ng; ++g)
        for (int a = 0; a < na; ++a)
            degs.push_back(m.generators_[g].degree + m.algebra_->degree(a));
    m.grading_ = GradedBasis(degs);
    for (int g = 0; g < ng; ++g) {
        const SparseVec& dg = m.generator_diffs_[g];
        if (dg.max_index() >= m.dim())
            throw DimensionMismatch("generator differential outside the module");
        for (const auto& t : dg.terms())
            if (m.degree(t.index) != m.generators_[g].degree + 1)
                throw VerificationError("differential of generator " + m.generators_[g].name +
                                        " does not raise degree by one");
    }
    // d(g a) = d(g) a + (-1)^{|g|} g d(a)
    m.diff_.assign(m.dim(), SparseVec(f));
    for (int g = 0; g < ng; ++g) {
        Scalar s = sign(f, m.generators_[g].degree);
        for (int a = 0; a < na; ++a) {
            SparseVec v = m.act(m.generator_diffs_[g], SparseVec::unit(f, a));
            for (const auto& t : m.algebra_->diff(a).terms())
                v.add(m.free_index(g, t.index), s * t.coeff);
            m.diff_[m.free_index(g, a)] = std::move(v);
        }
    }
    m.build_complex();
    for (int g = 0; g < ng; ++g)
        if (!m.differentiate(m.generator_diffs_[g]).is_zero())
            throw VerificationError("d^2 != 0 on generator " + m.generators_[g].name);
    return m;
}

void DgModule::build_complex()
{
    complex_ = grading_.complex(field(), diff_);
}

void DgModule::verify(Verify mode) const
{
    Field f = field();
    const DgAlgebra& a = *algebra_;
    int n = dim(), na = a.dim();
    for (int i = 0; i < n; ++i)
        for (const auto& [j, v] : action_.row(i)) {
            if (v.max_index() >= n)
                throw DimensionMismatch("action value outside the module");
            if (grading_.degree_of(v) != degree(i) + a.degree(j))
                throw VerificationError("action " + name(i) + "*" + a.basis(j).name + " has the wrong degree");
        }
    for (int i = 0; i < n; ++i) {
        SparseVec e = SparseVec::unit(f, i);
        if (act(e, a.unit()) != e)
            throw VerificationError("unit does not act as the identity on " + name(i));
    }
    auto check = [&](const SparseVec& m, const SparseVec& x, const SparseVec& y, int dm) {
        if (act(act(m, x), y) != act(m, a.multiply(x, y)))
            throw VerificationError("module associativity fails at " + (m.is_zero() ? std::string("0") : name(m.terms()[0].index)));
        SparseVec lhs = differentiate(act(m, x));
        SparseVec rhs = act(differentiate(m), x) + act(m, a.differentiate(x)).scaled(sign(f, dm));
        if (lhs != rhs)
            throw VerificationError("module Leibniz rule fails at " + (m.is_zero() ? std::string("0") : name(m.terms()[0].index)));
    };
    if (exhaustive(mode, static_cast<long long>(n) * na * na)) {
        for (int i = 0; i < n; ++i)
            for (int x = 0; x < na; ++x)
                for (int y = 0; y < na; ++y)
                    check(SparseVec::unit(f, i), SparseVec::unit(f, x), SparseVec::unit(f, y), degree(i));
    } else {
        std::mt19937 rng(2);
        std::uniform_int_distribution<int> mi(0, n - 1), ai(0, na - 1);
        for (int trial = 0; trial < 2048; ++trial) {
            int i = mi(rng);
            check(SparseVec::unit(f, i), SparseVec::unit(f, ai(rng)), SparseVec::unit(f, ai(rng)), degree(i));
        }
    }
}

std::string DgModule::name(int i) const
{
    if (!free_)
        return basis_[i].name;
    int na = algebra_->dim();
    return generators_[i / na].name + "." + algebra_->basis(i % na).name;
}

SparseVec DgModule::differentiate(const SparseVec& m) const
{
    std::vector<Term> acc;
    for (const auto& tm : m.terms())
        for (const auto& t : diff_[tm.index].terms())
            acc.push_back({t.index, tm.coeff * t.coeff});
    return SparseVec::from_terms(field(), std::move(acc));
}

SparseVec DgModule::act(int m, int a) const
{
    if (!free_)
        return action_.at(m, a);
    int na = algebra_->dim();
    int g = m / na;
    return algebra_->product(m % na, a).remapped([&](int i) { return g * na + i; });
}

SparseVec DgModule::act(const SparseVec& m, const SparseVec& a) const
{
    std::vector<Term> acc;
    int na = algebra_->dim();
    for (const auto& tm : m.terms())
        for (const auto& ta : a.terms()) {
            Scalar c = tm.coeff * ta.coeff;
            if (free_) {
                int g = tm.index / na;
                for (const auto& t : algebra_->product(tm.index % na, ta.index).terms())
                    acc.push_back({g * na + t.index, c * t.coeff});
            } else {
                for (const auto& t : action_.at(tm.index, ta.index).terms())
                    acc.push_back({t.index, c * t.coeff});
            }
        }
    return SparseVec::from_terms(field(), std::move(acc));
}

SparseVec DgModule::generator_vector(int g) const
{
    int na = algebra_->dim();
    return algebra_->unit().remapped([&](int i) { return g * na + i; });
}

DgModule DgModule::with_cert(Certification c) const
{
    DgModule out = *this;
    out.complex_ = complex_.with_cert(c);
    return out;
}

DgModule free_module(AlgebraPtr a, const std::vector<BasisElement>& generators)
{
    return DgModule::free(std::move(a), generators);
}

DgModule regular_module(AlgebraPtr a)
{
    return DgModule::free(std::move(a), {{"1", 0}});
}

ModuleMap::ModuleMap(ModulePtr source, ModulePtr target, Matrix matrix, int degree, bool check)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)), degree_(degree)
{
    if (source_->algebra() != target_->algebra() && source_->algebra()->dim() != target_->algebra()->dim())
        throw VerificationError("module map between modules over different algebras");
    if (matrix_.rows() != target_->dim() || matrix_.cols() != source_->dim())
        throw DimensionMismatch("module map matrix shape");
    if (!check)
        return;
    Field f = source_->field();
    const DgModule& m = *source_;
    const DgModule& n = *target_;
    Scalar s = sign(f, degree);
    for (int i = 0; i < m.dim(); ++i) {
        SparseVec fi = matrix_.column(i);
        for (const auto& t : fi.terms())
            if (n.degree(t.index) != m.degree(i) + degree)
                throw VerificationError("module map is not homogeneous of degree " + std::to_string(degree));
        if (n.differentiate(fi) != matrix_.apply(m.diff(i)).scaled(s))
            throw VerificationError("module map does not commute with the differentials at " + m.name(i));
    }
    int na = m.algebra()->dim();
    auto linear = [&](int i, int a) {
        if (matrix_.apply(m.act(i, a)) != n.act(matrix_.column(i), SparseVec::unit(f, a)))
            throw VerificationError("module map is not linear at " + m.name(i) + "*" + m.algebra()->basis(a).name);
    };
    if (static_cast<long long>(m.dim()) * na <= 200000) {
        for (int i = 0; i < m.dim(); ++i)
            for (int a = 0; a < na; ++a)
                linear(i, a);
    } else {
        std::mt19937 rng(3);
        std::uniform_int_distribution<int> mi(0, m.dim() - 1), ai(0, na - 1);
        for (int trial = 0; trial < 4096; ++trial)
            linear(mi(rng), ai(rng));
    }
}

ModuleMap ModuleMap::identity(ModulePtr m)
{
    int n = m->dim();
    Field f = m->field();
    return ModuleMap(m, m, Matrix::identity(n, f), 0, false);
}

ModuleMap ModuleMap::zero(ModulePtr source, ModulePtr target)
{
    Matrix z(target->dim(), source->dim(), source->field());
    return ModuleMap(std::move(source), std::move(target), std::move(z), 0, false);
}

ModuleMap ModuleMap::compose_after(const ModuleMap& first) const
{
    if (first.target().dim() != source().dim())
        throw DimensionMismatch("composition through mismatched modules");
    return ModuleMap(first.source_, target_, matrix_ * first.matrix_, degree_ + first.degree_, false);
}

ChainMap ModuleMap::chain_map() const
{
    if (degree_ != 0)
        throw VerificationError("chain map requires a degree-0 module map");
    auto src = std::make_shared<const Complex>(source_->complex());
    auto tgt = std::make_shared<const Complex>(target_->complex());
    int lo = std::min(src->lo(), tgt->lo()), hi = std::max(src->hi(), tgt->hi());
    Field f = source_->field();
    std::vector<Matrix> comps;
    for (int n = lo; n <= hi; ++n) {
        std::vector<SparseVec> cols;
        for (int i : source_->grading().in_degree(n))
            cols.push_back(target_->grading().to_local(matrix_.column(i), n));
        comps.push_back(Matrix::from_columns(tgt->dim(n), f, cols));
    }
    return ChainMap(src, tgt, lo, std::move(comps));
}

DgModule shift_module(const DgModule& m, int s)
{
    Field f = m.field();
    Scalar sg = sign(f, s);
    if (m.is_free()) {
        std::vector<BasisElement> gens;
        std::vector<SparseVec> diffs;
        for (int g = 0; g < m.generator_count(); ++g) {
            gens.push_back({m.generator(g).name, m.generator(g).degree - s});
            diffs.push_back(m.generator_diff(g).scaled(sg));
        }
        return DgModule::free(m.algebra(), gens, diffs).with_cert(m.cert().shifted(s));
    }
    std::vector<BasisElement> basis = basis_of(m);
    std::vector<SparseVec> diff;
    for (int i = 0; i < m.dim(); ++i) {
        basis[i].degree -= s;
        diff.push_back(m.diff(i).scaled(sg));
    }
    return DgModule(m.algebra(), basis, diff, action_table(m)).with_cert(m.cert().shifted(s));
}

namespace {

// Block module on top + bottom with differential [[d_top, link], [0, d_bottom]];
// both summands keep their own actions. `link` maps bottom basis to top vectors.
DgModule block_module(const DgModule& top, const DgModule& bottom, const std::vector<BasisElement>& bottom_basis,
                      const std::function<SparseVec(int)>& d_bottom, const std::function<SparseVec(int)>& link,
                      Certification cert)
{
    Field f = top.field();
    int nt = top.dim();
    auto up = [&](const SparseVec& v) { return v.remapped([&](int i) { return i + nt; }); };
    if (top.is_free() && bottom.is_free()) {
        // semi-free presentation; bottom basis (g, a) keeps its algebra index
        std::vector<BasisElement> gens;
        std::vector<SparseVec> diffs;
        for (int g = 0; g < top.generator_count(); ++g) {
            gens.push_back(top.generator(g));
            diffs.push_back(top.generator_diff(g));
        }
        for (int g = 0; g < bottom.generator_count(); ++g) {
            int na = bottom.algebra()->dim();
            gens.push_back({bottom.generator(g).name, bottom_basis[g * na].degree - bottom.algebra()->degree(0)});
            SparseVec gv = bottom.generator_vector(g);
            SparseVec d(f);
            for (const auto& t : gv.terms()) {
                d.axpy(t.coeff, link(t.index));
                d.axpy(t.coeff, up(d_bottom(t.index)));
            }
            diffs.push_back(d);
        }
        return DgModule::free(top.algebra(), gens, diffs).with_cert(cert);
    }
    std::vector<BasisElement> basis = basis_of(top);
    basis.insert(basis.end(), bottom_basis.begin(), bottom_basis.end());
    std::vector<SparseVec> diff;
    for (int i = 0; i < nt; ++i)
        diff.push_back(top.diff(i));
    for (int i = 0; i < bottom.dim(); ++i)
        diff.push_back(link(i) + up(d_bottom(i)));
    int na = top.algebra()->dim();
    StructureTable act(nt + bottom.dim(), na, f);
    for (int i = 0; i < nt; ++i)
        for (int a = 0; a < na; ++a)
            act.set(i, a, top.act(i, a));
    for (int i = 0; i < bottom.dim(); ++i)
        for (int a = 0; a < na; ++a)
            act.set(nt + i, a, up(bottom.act(i, a)));
    return DgModule(top.algebra(), basis, diff, act).with_cert(cert);
}

} // namespace

DgModule direct_sum_module(const DgModule& a, const DgModule& b)
{
    if (a.algebra() != b.algebra())
        throw VerificationError("direct sum of modules over different algebras");
    std::vector<BasisElement> bb = basis_of(b);
    return block_module(
        a, b, bb, [&](int i) { return b.diff(i); }, [&](int) { return SparseVec(a.field()); },
        intersect(a.cert(), b.cert()));
}

ModuleCone cone_module(const ModuleMap& fm)
{
    const DgModule& m = fm.source();
    const DgModule& n = fm.target();
    if (fm.degree() != 0)
        throw VerificationError("cone of a map of nonzero degree");
    std::vector<BasisElement> mb = basis_of(m);
    for (auto& b : mb)
        b.degree -= 1;
    auto c = std::make_shared<const DgModule>(block_module(
        n, m, mb, [&](int i) { return -m.diff(i); }, [&](int i) { return fm.matrix().column(i); },
        intersect(n.cert(), m.cert().shifted(1))));
    Field f = m.field();
    auto m1 = std::make_shared<const DgModule>(shift_module(m, 1));
    Matrix inc(c->dim(), n.dim(), f);
    inc.place(0, 0, Matrix::identity(n.dim(), f));
    Matrix proj(m.dim(), c->dim(), f);
    proj.place(0, n.dim(), Matrix::identity(m.dim(), f));
    return {c, ModuleMap(fm.target_ptr(), c, inc), ModuleMap(c, m1, proj)};
}

ModuleQuotient quotient_module(ModulePtr m, const Matrix& sub)
{
    Field f = m->field();
    int n = m->dim();
    if (sub.rows() != n)
        throw DimensionMismatch("submodule vectors have the wrong length");
    Echelon e = row_echelon(sub.transpose());
    std::vector<char> pivot(n, 0);
    for (int p : e.pivots)
        pivot[p] = 1;
    for (int r = 0; r < e.rref.rows(); ++r)
        m->grading().degree_of(e.rref.row(r));
    auto reduce = [&](SparseVec v) {
        for (int r = 0; r < e.rref.rows(); ++r) {
            Scalar c = v.coeff(e.pivots[r]);
            if (!c.is_zero())
                v.axpy(-c, e.rref.row(r));
        }
        return v;
    };
    auto in_sub = [&](const SparseVec& v) { return reduce(v).is_zero(); };
    int na = m->algebra()->dim();
    for (int r = 0; r < e.rref.rows(); ++r) {
        const SparseVec& v = e.rref.row(r);
        if (!in_sub(m->differentiate(v)))
            throw VerificationError("quotient: subspace is not closed under the differential");
        for (int a = 0; a < na; ++a)
            if (!in_sub(m->act(v, SparseVec::unit(f, a))))
                throw VerificationError("quotient: subspace is not closed under the action");
    }
    std::vector<int> keep, position(n, -1);
    for (int i = 0; i < n; ++i)
        if (!pivot[i]) {
            position[i] = static_cast<int>(keep.size());
            keep.push_back(i);
        }
    auto project = [&](const SparseVec& v) { return reduce(v).remapped([&](int i) { return position[i]; }); };
    std::vector<BasisElement> basis;
    std::vector<SparseVec> diff;
    StructureTable act(static_cast<int>(keep.size()), na, f);
    for (std::size_t k = 0; k < keep.size(); ++k) {
        int i = keep[k];
        basis.push_back({m->name(i), m->degree(i)});
        diff.push_back(project(m->diff(i)));
        for (int a = 0; a < na; ++a)
            act.set(static_cast<int>(k), a, project(m->act(i, a)));
    }
    auto q = std::make_shared<const DgModule>(DgModule(m->algebra(), basis, diff, act).with_cert(m->cert()));
    std::vector<SparseVec> pcols, scols;
    for (int i = 0; i < n; ++i)
        pcols.push_back(project(SparseVec::unit(f, i)));
    for (int i : keep)
        scols.push_back(SparseVec::unit(f, i));
    ModuleMap proj(m, q, Matrix::from_columns(q->dim(), f, pcols));
    return {q, proj, Matrix::from_columns(n, f, scols)};
}

} // namespace dgforge
