#include <algorithm>
#include <functional>

#include "dgforge/error.hpp"
#include "dgforge/resolutions.hpp"

namespace dgforge {

std::vector<SparseVec> basis_idempotents(const DgAlgebra& a)
{
    Field f = a.field();
    std::vector<int> cand;
    for (int i = 0; i < a.dim(); ++i)
        if (a.degree(i) == 0 && a.product(i, i) == SparseVec::unit(f, i))
            cand.push_back(i);
    int n = std::min<int>(static_cast<int>(cand.size()), 16);
    std::vector<unsigned> masks;
    for (unsigned m = 1; m < (1u << n); ++m)
        masks.push_back(m);
    // finest decomposition first
    std::stable_sort(masks.begin(), masks.end(),
                     [](unsigned x, unsigned y) { return __builtin_popcount(x) > __builtin_popcount(y); });
    for (unsigned m : masks) {
        std::vector<int> set;
        for (int k = 0; k < n; ++k)
            if (m & (1u << k))
                set.push_back(cand[k]);
        SparseVec sum(f);
        bool orth = true;
        for (int x : set) {
            sum.add(x, Scalar::one(f));
            for (int y : set)
                if (x != y && !a.product(x, y).is_zero())
                    orth = false;
        }
        if (orth && sum == a.unit()) {
            std::vector<SparseVec> out;
            for (int x : set)
                out.push_back(SparseVec::unit(f, x));
            return out;
        }
    }
    return {a.unit()};
}

namespace {

// e A with a basis of products e b.
struct Corner {
    SparseVec e;
    std::vector<SparseVec> basis; // vectors in A
    Matrix w;                     // the basis as columns
};

Corner corner(const DgAlgebra& a, const SparseVec& e)
{
    Field f = a.field();
    std::vector<SparseVec> prods;
    for (int b = 0; b < a.dim(); ++b)
        prods.push_back(a.multiply(e, SparseVec::unit(f, b)));
    Matrix all = Matrix::from_columns(a.dim(), f, prods);
    Corner c{e, {}, {}};
    for (int j : pivot_columns(all))
        c.basis.push_back(prods[j]);
    c.w = Matrix::from_columns(a.dim(), f, c.basis);
    return c;
}

SparseVec in_corner(const Corner& c, const SparseVec& x)
{
    auto s = solve(c.w, Matrix::from_columns(c.w.rows(), x.field(), {x}));
    if (!s)
        throw VerificationError("product leaves the corner module");
    return s->column(0);
}

// A right-module structure on a vector space given by a callback.
using Action = std::function<SparseVec(const SparseVec&, const SparseVec&)>;

struct Summand {
    int corner;
    SparseVec v; // image of e in the space being covered
};

// Summands e_i A -> T whose images span the submodule K (columns).
std::vector<Summand> cover(const Matrix& k, const std::vector<Corner>& corners, const Action& act, int dim)
{
    Field f = k.field();
    std::vector<SparseVec> kcols = k.columns();
    std::vector<Summand> out;
    SpanReducer covered(f, dim);
    int target = rank(k);
    int have = 0;
    while (have < target) {
        int best_gain = 0;
        Summand best{-1, SparseVec(f)};
        std::vector<SparseVec> best_img;
        for (std::size_t i = 0; i < corners.size(); ++i) {
            std::vector<SparseVec> ke;
            for (const auto& x : kcols)
                ke.push_back(act(x, corners[i].e));
            Matrix kem = Matrix::from_columns(dim, f, ke);
            for (int j : pivot_columns(kem)) {
                std::vector<SparseVec> img;
                for (const auto& w : corners[i].basis)
                    img.push_back(act(ke[j], w));
                SpanReducer trial = covered;
                int gain = 0;
                for (const auto& y : img)
                    if (trial.insert(y, 0))
                        ++gain;
                if (gain > best_gain) {
                    best_gain = gain;
                    best = {static_cast<int>(i), ke[j]};
                    best_img = img;
                }
            }
        }
        if (best_gain == 0)
            throw VerificationError("projective cover made no progress");
        for (const auto& y : best_img)
            covered.insert(y, 0);
        have += best_gain;
        out.push_back(best);
    }
    return out;
}

} // namespace

SemiFreeResolution projective_resolve(ModulePtr m, Window window, int cap)
{
    AlgebraPtr alg = m->algebra();
    const DgAlgebra& a = *alg;
    if (!a.ordinary())
        throw VerificationError("projective_resolve needs an ordinary algebra");
    const GradedBasis& mg = m->grading();
    if (m->dim() == 0 || mg.lo() != mg.hi())
        throw VerificationError("projective_resolve needs a nonzero module concentrated in one degree");
    Field f = a.field();
    int d0 = mg.lo();
    std::vector<Corner> corners;
    for (const auto& e : basis_idempotents(a))
        corners.push_back(corner(a, e));

    struct Level {
        std::vector<Summand> summands;
        std::vector<int> offsets; // first basis index of each summand
        int dim = 0;
        Matrix to_target; // into the previous level (or M)
    };
    std::vector<Level> levels;
    // x in the level, b in A: each summand is e A, acted on by multiplication
    auto level_act = [&](const Level& lv, const SparseVec& x, const SparseVec& b) {
        SparseVec out(f);
        for (const auto& t : x.terms()) {
            std::size_t s = std::upper_bound(lv.offsets.begin(), lv.offsets.end(), t.index) - lv.offsets.begin() - 1;
            const Corner& c = corners[lv.summands[s].corner];
            SparseVec y = in_corner(c, a.multiply(c.basis[t.index - lv.offsets[s]], b));
            out.axpy(t.coeff, y.remapped([&](int i) { return i + lv.offsets[s]; }));
        }
        return out;
    };
    Matrix k = Matrix::identity(m->dim(), f);
    int target_dim = m->dim();
    bool exact = false;
    int count = 0;
    for (int n = 0;; ++n) {
        Action act;
        if (n == 0)
            act = [&](const SparseVec& x, const SparseVec& b) { return m->act(x, b); };
        else
            act = [&, prev = levels.back()](const SparseVec& x, const SparseVec& b) { return level_act(prev, x, b); };
        Level lv;
        lv.summands = cover(k, corners, act, target_dim);
        count += static_cast<int>(lv.summands.size());
        if (count > cap)
            throw CapExceeded("resolution needs more than " + std::to_string(cap) + " generators");
        std::vector<SparseVec> cols;
        for (const auto& s : lv.summands) {
            lv.offsets.push_back(lv.dim);
            for (const auto& w : corners[s.corner].basis)
                cols.push_back(act(s.v, w));
            lv.dim += static_cast<int>(corners[s.corner].basis.size());
        }
        lv.to_target = Matrix::from_columns(target_dim, f, cols);
        k = kernel_basis(lv.to_target);
        target_dim = lv.dim;
        levels.push_back(std::move(lv));
        if (k.cols() == 0) {
            exact = true;
            break;
        }
        if (d0 - n <= window.lo)
            break;
    }

    // P: level n in degree d0 - n, levels stacked in order
    std::vector<int> start;
    int total = 0;
    for (const auto& lv : levels) {
        start.push_back(total);
        total += lv.dim;
    }
    std::vector<BasisElement> basis;
    std::vector<SparseVec> diff;
    StructureTable table(total, a.dim(), f);
    SemiFreeResolution res;
    for (std::size_t n = 0; n < levels.size(); ++n) {
        const Level& lv = levels[n];
        int deg = d0 - static_cast<int>(n);
        for (std::size_t s = 0; s < lv.summands.size(); ++s) {
            std::string name = "e" + std::to_string(lv.summands[s].corner) + "_" + std::to_string(n) + "_" + std::to_string(s);
            res.generators.push_back({name, deg, static_cast<int>(n)});
            const Corner& c = corners[lv.summands[s].corner];
            for (std::size_t w = 0; w < c.basis.size(); ++w) {
                int local = lv.offsets[s] + static_cast<int>(w);
                basis.push_back({name + "." + std::to_string(w), deg});
                SparseVec d(f);
                if (n > 0)
                    d = lv.to_target.column(local).remapped([&](int i) { return i + start[n - 1]; });
                diff.push_back(d);
                for (int b = 0; b < a.dim(); ++b) {
                    SparseVec y = level_act(lv, SparseVec::unit(f, local), SparseVec::unit(f, b));
                    if (!y.is_zero())
                        table.set(start[n] + local, b, y.remapped([&](int i) { return i + start[n]; }));
                }
            }
        }
    }
    res.module = m;
    res.p = std::make_shared<const DgModule>(alg, basis, diff, table);
    Matrix aug(m->dim(), total, f);
    aug.place(0, 0, levels[0].to_target);
    res.augmentation = ModuleMap(res.p, m, aug, 0, true);
    res.window = window;
    res.stages = static_cast<int>(levels.size()) - 1;
    res.note = "projective summands e A over " + std::to_string(corners.size()) + " idempotents";
    int bottom = d0 - res.stages;
    if (exact) {
        res.exact = Certification::everywhere();
    } else {
        res.exact = Certification::range(bottom + 1, Certification{}.hi);
        res.missing_bound = bottom - 1;
    }
    return res;
}

} // namespace dgforge
