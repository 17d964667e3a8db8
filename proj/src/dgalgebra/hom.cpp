#include <map>
#include <set>

#include "dgforge/dgalgebra.hpp"
#include "dgforge/error.hpp"

namespace dgforge {


ModuleHom module_hom_complex(ModulePtr m, ModulePtr n)
{
    if (m->algebra() != n->algebra())
        throw VerificationError("Hom between modules over different algebras");
    Field f = m->field();
    const DgAlgebra& alg = *m->algebra();
    int na = alg.dim();
    ModuleHom h;
    h.source_ = m;
    h.target_ = n;
    h.fast_ = m->is_free();
    if (h.fast_) {
        int ng = m->generator_count();
        int glo = 0, ghi = -1;
        for (int g = 0; g < ng; ++g) {
            int d = m->generator(g).degree;
            if (g == 0 || d < glo)
                glo = d;
            if (g == 0 || d > ghi)
                ghi = d;
        }
        const GradedBasis& nb = n->grading();
        int lo = 0, hi = -1;
        if (ng > 0 && nb.size() > 0) {
            lo = nb.lo() - ghi;
            hi = nb.hi() - glo;
        }
        std::vector<int> dims;
        for (int t = lo; t <= hi; ++t) {
            std::vector<int> off(ng + 1, 0);
            for (int g = 0; g < ng; ++g)
                off[g + 1] = off[g] + nb.dim(m->generator(g).degree + t);
            dims.push_back(off[ng]);
            h.offsets_.push_back(std::move(off));
        }
        // occurrences of (g0, a) in d(g): users[g0] = {(g, a, c)}
        struct Use {
            int g;
            int a;
            Scalar c;
        };
        std::vector<std::vector<Use>> users(ng);
        for (int g = 0; g < ng; ++g)
            for (const auto& t : m->generator_diff(g).terms())
                users[t.index / na].push_back({g, t.index % na, t.coeff});
        std::vector<Matrix> diffs;
        for (int t = lo; t <= hi; ++t) {
            int rows = t + 1 <= hi ? dims[t + 1 - lo] : 0;
            Scalar s = sign(f, t);
            std::vector<SparseVec> cols;
            for (int g0 = 0; g0 < ng; ++g0) {
                int deg = m->generator(g0).degree + t;
                for (int v : nb.in_degree(deg)) {
                    std::vector<Term> acc;
                    if (t + 1 <= hi) {
                        const auto& off1 = h.offsets_[t + 1 - lo];
                        for (const auto& e : n->diff(v).terms())
                            acc.push_back({off1[g0] + nb.local(e.index), e.coeff});
                        for (const auto& u : users[g0]) {
                            // -(-1)^t c (v . a) lands in the block of g
                            for (const auto& e : n->act(v, u.a).terms())
                                acc.push_back({off1[u.g] + nb.local(e.index), -s * u.c * e.coeff});
                        }
                    }
                    cols.push_back(SparseVec::from_terms(f, std::move(acc)));
                }
            }
            diffs.push_back(Matrix::from_columns(rows, f, cols));
        }
        Certification cert = hom_certification(m->complex(), n->complex(), lo, hi);
        h.complex_ = Complex(f, lo, dims, diffs, cert);
        return h;
    }

    h.khom_ = hom_complex(m->complex(), n->complex());
    const Complex& kc = h.khom_.complex;
    int lo = kc.lo(), hi = kc.hi();
    const GradedBasis& mb = m->grading();
    const GradedBasis& nb = n->grading();
    // reverse index of the action: for each global c, the (i, a, coeff) with c in i.a
    std::vector<std::vector<std::tuple<int, int, Scalar>>> hits(m->dim());
    for (int i = 0; i < m->dim(); ++i)
        for (int a = 0; a < na; ++a)
            for (const auto& t : m->act(i, a).terms())
                hits[t.index].emplace_back(i, a, t.coeff);
    for (int t = lo; t <= hi; ++t) {
        // constraint rows keyed by (i, a, target global)
        std::map<long long, int> row_of;
        std::vector<std::vector<Term>> cols;
        for (const auto& b : h.khom_.layout.blocks[t - lo]) {
            const auto& src = mb.in_degree(b.source_degree);
            const auto& tgt = nb.in_degree(b.source_degree + t);
            for (int r = 0; r < b.rows; ++r)
                for (int c = 0; c < b.cols; ++c) {
                    std::vector<Term> col;
                    int cg = src[c], rg = tgt[r];
                    auto key = [&](int i, int a, int x) {
                        long long k = (static_cast<long long>(i) * na + a) * n->dim() + x;
                        auto it = row_of.find(k);
                        if (it != row_of.end())
                            return it->second;
                        int id = static_cast<int>(row_of.size());
                        row_of.emplace(k, id);
                        return id;
                    };
                    // f(i a) contributes coeff * e_rg whenever c appears in i a
                    for (const auto& [i, a, coeff] : hits[cg])
                        col.push_back({key(i, a, rg), coeff});
                    // - f(c) a
                    for (int a = 0; a < na; ++a)
                        for (const auto& e : n->act(rg, a).terms())
                            col.push_back({key(cg, a, e.index), -e.coeff});
                    cols.push_back(std::move(col));
                }
        }
        int nrows = static_cast<int>(row_of.size());
        std::vector<SparseVec> vcols;
        for (auto& c : cols)
            vcols.push_back(SparseVec::from_terms(f, std::move(c)));
        Matrix constraint = Matrix::from_columns(nrows, f, vcols);
        if (constraint.cols() != kc.dim(t))
            constraint = Matrix(nrows, kc.dim(t), f);
        Matrix k = kernel_basis(constraint);
        std::vector<int> free_cols;
        Echelon e = row_echelon(constraint);
        std::vector<char> piv(kc.dim(t), 0);
        for (int p : e.pivots)
            piv[p] = 1;
        for (int c = 0; c < kc.dim(t); ++c)
            if (!piv[c])
                free_cols.push_back(c);
        h.kernels_.push_back(std::move(k));
        h.free_cols_.push_back(std::move(free_cols));
    }
    std::vector<int> dims;
    std::vector<Matrix> diffs;
    for (int t = lo; t <= hi; ++t)
        dims.push_back(h.kernels_[t - lo].cols());
    for (int t = lo; t <= hi; ++t) {
        int rows = t + 1 <= hi ? dims[t + 1 - lo] : 0;
        Matrix image = kc.diff(t) * h.kernels_[t - lo];
        std::vector<SparseVec> cols;
        for (int c = 0; c < image.cols(); ++c) {
            SparseVec col = image.column(c);
            SparseVec coords(f);
            if (t + 1 <= hi) {
                const auto& fc = h.free_cols_[t + 1 - lo];
                for (std::size_t j = 0; j < fc.size(); ++j) {
                    Scalar x = col.coeff(fc[j]);
                    if (!x.is_zero())
                        coords.add(static_cast<int>(j), x);
                }
            }
            cols.push_back(coords);
        }
        diffs.push_back(Matrix::from_columns(rows, f, cols));
    }
    h.complex_ = Complex(f, lo, dims, diffs, kc.cert());
    return h;
}

SparseVec ModuleHom::apply(int t, const SparseVec& f, int m) const
{
    return apply(t, f, SparseVec::unit(source_->field(), m));
}

SparseVec ModuleHom::apply(int t, const SparseVec& f, const SparseVec& m) const
{
    Field fl = source_->field();
    if (f.is_zero() || m.is_zero())
        return SparseVec(fl);
    if (fast_) {
        int lo = complex_.lo();
        if (t < lo || t > complex_.hi())
            return SparseVec(fl);
        const auto& off = offsets_[t - lo];
        int na = source_->algebra()->dim();
        const GradedBasis& nb = target_->grading();
        std::map<int, SparseVec> values; // f(g) per generator, on demand
        std::vector<Term> acc;
        for (const auto& tm : m.terms()) {
            int g = tm.index / na, a = tm.index % na;
            auto it = values.find(g);
            if (it == values.end()) {
                SparseVec local(fl);
                for (const auto& e : f.terms())
                    if (e.index >= off[g] && e.index < off[g + 1])
                        local.add(e.index - off[g], e.coeff);
                it = values.emplace(g, nb.to_global(local, source_->generator(g).degree + t)).first;
            }
            if (it->second.is_zero())
                continue;
            for (const auto& e : target_->act(it->second, SparseVec::unit(fl, a)).terms())
                acc.push_back({e.index, tm.coeff * e.coeff});
        }
        return SparseVec::from_terms(fl, std::move(acc));
    }
    return matrix(t, f).apply(m);
}

Matrix ModuleHom::matrix(int t, const SparseVec& f) const
{
    Field fl = source_->field();
    const DgModule& m = *source_;
    Matrix out(target_->dim(), m.dim(), fl);
    if (fast_) {
        for (int i = 0; i < m.dim(); ++i) {
            SparseVec v = apply(t, f, i);
            for (const auto& e : v.terms())
                out.set(e.index, i, e.coeff);
        }
        return out;
    }
    int lo = complex_.lo();
    if (t < lo || t > complex_.hi() || f.is_zero())
        return out;
    SparseVec kv = kernels_[t - lo].apply(f);
    for (const auto& b : khom_.layout.blocks[t - lo]) {
        Matrix blk = khom_.block(kv, t, b.source_degree);
        const auto& src = m.grading().in_degree(b.source_degree);
        const auto& tgt = target_->grading().in_degree(b.source_degree + t);
        for (const auto& e : blk.entries())
            out.set(tgt[e.row], src[e.col], e.value);
    }
    return out;
}

SparseVec ModuleHom::coords(int t, const std::function<SparseVec(int)>& image) const
{
    Field fl = source_->field();
    int lo = complex_.lo();
    if (t < lo || t > complex_.hi())
        return SparseVec(fl);
    const GradedBasis& nb = target_->grading();
    if (fast_) {
        return coords_free(t, [&](int g) {
            SparseVec val(fl);
            for (const auto& e : source_->generator_vector(g).terms())
                val.axpy(e.coeff, image(e.index));
            return val;
        });
    }
    const GradedBasis& mb = source_->grading();
    SparseVec kv(fl);
    for (const auto& b : khom_.layout.blocks[t - lo]) {
        const auto& src = mb.in_degree(b.source_degree);
        for (int c = 0; c < b.cols; ++c) {
            SparseVec val = image(src[c]);
            for (const auto& e : val.terms()) {
                if (nb.degree(e.index) != b.source_degree + t)
                    throw VerificationError("map is not homogeneous of degree " + std::to_string(t));
                kv.add(b.offset + nb.local(e.index) * b.cols + c, e.coeff);
            }
        }
    }
    SparseVec out(fl);
    const auto& fc = free_cols_[t - lo];
    for (std::size_t j = 0; j < fc.size(); ++j) {
        Scalar x = kv.coeff(fc[j]);
        if (!x.is_zero())
            out.add(static_cast<int>(j), x);
    }
    if (kernels_[t - lo].apply(out) != kv)
        throw VerificationError("map is not linear over the algebra");
    return out;
}

SparseVec ModuleHom::coords_free(int t, const std::function<SparseVec(int)>& generator_image) const
{
    Field fl = source_->field();
    if (!fast_)
        throw VerificationError("generator coordinates need a semi-free source");
    int lo = complex_.lo();
    SparseVec out(fl);
    if (t < lo || t > complex_.hi())
        return out;
    const GradedBasis& nb = target_->grading();
    const auto& off = offsets_[t - lo];
    for (int g = 0; g < source_->generator_count(); ++g) {
        int deg = source_->generator(g).degree + t;
        for (const auto& e : generator_image(g).terms()) {
            if (nb.degree(e.index) != deg)
                throw VerificationError("map is not homogeneous of degree " + std::to_string(t));
            out.add(off[g] + nb.local(e.index), e.coeff);
        }
    }
    return out;
}

ModuleMap ModuleHom::to_map(int t, const SparseVec& f) const
{
    return ModuleMap(source_, target_, matrix(t, f), t, false);
}

ModuleHom ModuleHom::with_cert(Certification c) const
{
    ModuleHom h = *this;
    h.complex_ = complex_.with_cert(c);
    return h;
}

EndResult end_dga(ModulePtr p)
{
    Field f = p->field();
    EndResult out{module_hom_complex(p, p), nullptr, nullptr};
    const ModuleHom& h = out.hom;
    const Complex& c = h.complex();
    std::vector<BasisElement> basis;
    std::vector<int> degree_of;
    std::vector<SparseVec> local_of;
    for (int t = c.lo(); t <= c.hi(); ++t)
        for (int k = 0; k < c.dim(t); ++k) {
            basis.push_back({"e" + std::to_string(basis.size()), t});
            degree_of.push_back(t);
            local_of.push_back(SparseVec::unit(f, k));
        }
    int n = static_cast<int>(basis.size());
    if (n == 0)
        throw VerificationError("endomorphism algebra of the zero module");
    GradedBasis grading([&] {
        std::vector<int> d;
        for (const auto& b : basis)
            d.push_back(b.degree);
        return d;
    }());
    auto global = [&](int t, const SparseVec& local) { return grading.to_global(local, t); };

    // Values of each basis endomorphism on source basis vectors.
    // In the semi-free case only generators carry data.
    int np = p->dim();
    std::vector<Matrix> mats;
    std::vector<std::vector<std::pair<int, SparseVec>>> gen_values(n);
    std::vector<std::set<int>> touches(n);
    std::vector<std::vector<int>> supported_at(p->is_free() ? p->generator_count() : 0);
    int na = p->algebra()->dim();
    if (p->is_free()) {
        for (int e = 0; e < n; ++e) {
            for (int g = 0; g < p->generator_count(); ++g) {
                SparseVec v = h.apply(degree_of[e], local_of[e], p->generator_vector(g));
                if (v.is_zero())
                    continue;
                for (const auto& t : v.terms())
                    touches[e].insert(t.index / na);
                gen_values[e].emplace_back(g, std::move(v));
                supported_at[g].push_back(e);
            }
        }
    } else {
        for (int e = 0; e < n; ++e)
            mats.push_back(h.matrix(degree_of[e], local_of[e]));
    }

    StructureTable mult(n, n, f);
    if (p->is_free()) {
        // a o^op b = (-1)^{|a||b|} b o a, nonzero only if b is supported on a generator a touches
        for (int a = 0; a < n; ++a) {
            std::set<int> partners;
            for (int g : touches[a])
                partners.insert(supported_at[g].begin(), supported_at[g].end());
            for (int b : partners) {
                int t = degree_of[a] + degree_of[b];
                std::map<int, SparseVec> images;
                for (const auto& [g, v] : gen_values[a])
                    images.emplace(g, h.apply(degree_of[b], local_of[b], v));
                SparseVec lc = h.coords_free(t, [&](int g) {
                    auto it = images.find(g);
                    return it == images.end() ? SparseVec(f) : it->second;
                });
                mult.set(a, b, global(t, lc).scaled(sign(f, degree_of[a] * degree_of[b])));
            }
        }
    } else {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                Matrix comp = mats[b] * mats[a];
                if (comp.is_zero())
                    continue;
                int t = degree_of[a] + degree_of[b];
                SparseVec lc = h.coords(t, [&](int idx) { return comp.column(idx); });
                mult.set(a, b, global(t, lc).scaled(sign(f, degree_of[a] * degree_of[b])));
            }
    }
    // unit: the identity endomorphism
    SparseVec unit = global(0, h.coords(0, [&](int idx) { return SparseVec::unit(f, idx); }));
    std::vector<SparseVec> diff;
    for (int e = 0; e < n; ++e)
        diff.push_back(global(degree_of[e] + 1, c.diff(degree_of[e]).column(local_of[e].terms()[0].index)));
    out.endo = std::make_shared<const DgAlgebra>(f, basis, mult, unit, diff);

    // p . e = (-1)^{|p||e|} e(p)
    StructureTable act(np, n, f);
    for (int e = 0; e < n; ++e) {
        if (p->is_free()) {
            for (const auto& [g, v] : gen_values[e])
                for (int a0 = 0; a0 < na; ++a0) {
                    int idx = p->free_index(g, a0);
                    SparseVec val = p->act(v, SparseVec::unit(f, a0));
                    if (!val.is_zero())
                        act.set(idx, e, val.scaled(sign(f, p->degree(idx) * degree_of[e])));
                }
        } else {
            for (int i = 0; i < np; ++i) {
                SparseVec val = mats[e].column(i);
                if (!val.is_zero())
                    act.set(i, e, val.scaled(sign(f, p->degree(i) * degree_of[e])));
            }
        }
    }
    std::vector<BasisElement> pb;
    std::vector<SparseVec> pd;
    for (int i = 0; i < np; ++i) {
        pb.push_back({p->name(i), p->degree(i)});
        pd.push_back(p->diff(i));
    }
    out.p_over_e = std::make_shared<const DgModule>(out.endo, pb, pd, act);
    return out;
}

} // namespace dgforge
