#include "dgforge/oracle.hpp"

#include <algorithm>

#include "dgforge/error.hpp"

namespace dgforge::oracle {

namespace {

std::uint32_t add(std::uint32_t x, std::uint32_t y, int p) { return static_cast<std::uint32_t>((std::uint64_t{x} + y) % p); }
std::uint32_t sub(std::uint32_t x, std::uint32_t y, int p) { return static_cast<std::uint32_t>((std::uint64_t{x} + p - y) % p); }
std::uint32_t mul(std::uint32_t x, std::uint32_t y, int p) { return static_cast<std::uint32_t>(std::uint64_t{x} * y % p); }

std::uint32_t inv(std::uint32_t x, int p)
{
    if (x == 0)
        throw VerificationError("oracle: division by zero");
    std::uint64_t r = 1, b = x;
    for (std::uint64_t e = p - 2; e; e >>= 1, b = b * b % p)
        if (e & 1)
            r = r * b % p;
    return static_cast<std::uint32_t>(r);
}

// Gauss-Jordan in place; returns pivot columns.
std::vector<int> reduce(Mat& m)
{
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < m.cols && r < m.rows; ++c) {
        int s = r;
        while (s < m.rows && m.at(s, c) == 0)
            ++s;
        if (s == m.rows)
            continue;
        if (s != r)
            for (int k = 0; k < m.cols; ++k)
                std::swap(m.at(s, k), m.at(r, k));
        std::uint32_t iv = inv(m.at(r, c), m.p);
        for (int k = 0; k < m.cols; ++k)
            m.at(r, k) = mul(m.at(r, k), iv, m.p);
        for (int i = 0; i < m.rows; ++i) {
            if (i == r || m.at(i, c) == 0)
                continue;
            std::uint32_t f = m.at(i, c);
            for (int k = 0; k < m.cols; ++k)
                m.at(i, k) = sub(m.at(i, k), mul(f, m.at(r, k), m.p), m.p);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

// Incremental row echelon form for independence tests.
struct Echelon {
    int p;
    std::vector<Vec> rows;
    std::vector<int> lead;

    bool add(Vec v)
    {
        for (std::size_t k = 0; k < rows.size(); ++k) {
            std::uint32_t f = v[lead[k]];
            if (f)
                for (std::size_t i = 0; i < v.size(); ++i)
                    v[i] = sub(v[i], mul(f, rows[k][i], p), p);
        }
        auto it = std::find_if(v.begin(), v.end(), [](std::uint32_t x) { return x != 0; });
        if (it == v.end())
            return false;
        int c = static_cast<int>(it - v.begin());
        std::uint32_t iv = inv(v[c], p);
        for (auto& x : v)
            x = mul(x, iv, p);
        for (auto& row : rows) {
            std::uint32_t f = row[c];
            if (f)
                for (std::size_t i = 0; i < v.size(); ++i)
                    row[i] = sub(row[i], mul(f, v[i], p), p);
        }
        rows.push_back(std::move(v));
        lead.push_back(c);
        return true;
    }
};

Vec flatten(const Mat& m) { return m.a; }

Mat unflatten(int p, int n, const Vec& v)
{
    Mat m(p, n, n);
    m.a = v;
    return m;
}

int prime_of(Field f)
{
    if (f.is_rational())
        throw VerificationError("oracle: prime fields only");
    return static_cast<int>(f.characteristic());
}

// Coordinates of target in the span of basis (flattened), or throw.
Vec coords(int p, const std::vector<Vec>& basis, const Vec& target, const char* what)
{
    int len = static_cast<int>(target.size());
    auto x = solve(from_columns(p, len, basis), target);
    if (!x)
        throw VerificationError(std::string("oracle: ") + what + " leaves the span");
    return *x;
}

FiniteAlgebra algebra_of_maps(int p, int n, const std::vector<Mat>& maps)
{
    std::vector<Vec> flat;
    for (const auto& m : maps)
        flat.push_back(flatten(m));
    FiniteAlgebra a;
    a.p = p;
    a.dim = static_cast<int>(maps.size());
    for (int i = 0; i < a.dim; ++i)
        a.names.push_back("f" + std::to_string(i));
    a.mult.assign(a.dim, std::vector<Vec>(a.dim));
    // opposite composition
    for (int x = 0; x < a.dim; ++x)
        for (int y = 0; y < a.dim; ++y)
            a.mult[x][y] = coords(p, flat, flatten(maps[y] * maps[x]), "composite");
    a.unit = coords(p, flat, flatten(Mat::identity(p, n)), "identity");
    a.validate();
    return a;
}

} // namespace

Mat::Mat(int p_, int rows_, int cols_) : p(p_), rows(rows_), cols(cols_), a(static_cast<std::size_t>(rows_) * cols_, 0) {}

Mat Mat::identity(int p, int n)
{
    Mat m(p, n, n);
    for (int i = 0; i < n; ++i)
        m.at(i, i) = 1;
    return m;
}

Vec Mat::column(int c) const
{
    Vec v(rows);
    for (int r = 0; r < rows; ++r)
        v[r] = at(r, c);
    return v;
}

Vec Mat::apply(const Vec& v) const
{
    if (static_cast<int>(v.size()) != cols)
        throw DimensionMismatch("oracle apply");
    Vec out(rows, 0);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            if (v[c])
                out[r] = add(out[r], mul(at(r, c), v[c], p), p);
    return out;
}

bool Mat::is_zero() const
{
    return std::all_of(a.begin(), a.end(), [](std::uint32_t x) { return x == 0; });
}

Mat Mat::operator*(const Mat& o) const
{
    if (cols != o.rows)
        throw DimensionMismatch("oracle product");
    Mat out(p, rows, o.cols);
    for (int r = 0; r < rows; ++r)
        for (int k = 0; k < cols; ++k) {
            std::uint32_t x = at(r, k);
            if (!x)
                continue;
            for (int c = 0; c < o.cols; ++c)
                out.at(r, c) = add(out.at(r, c), mul(x, o.at(k, c), p), p);
        }
    return out;
}

Mat Mat::operator+(const Mat& o) const
{
    if (rows != o.rows || cols != o.cols)
        throw DimensionMismatch("oracle sum");
    Mat out = *this;
    for (std::size_t i = 0; i < a.size(); ++i)
        out.a[i] = add(a[i], o.a[i], p);
    return out;
}

Mat Mat::operator-(const Mat& o) const
{
    if (rows != o.rows || cols != o.cols)
        throw DimensionMismatch("oracle difference");
    Mat out = *this;
    for (std::size_t i = 0; i < a.size(); ++i)
        out.a[i] = sub(a[i], o.a[i], p);
    return out;
}

int rank(Mat m) { return static_cast<int>(reduce(m).size()); }

std::vector<Vec> kernel(Mat m)
{
    auto pivots = reduce(m);
    std::vector<bool> is_pivot(m.cols, false);
    for (int c : pivots)
        is_pivot[c] = true;
    std::vector<Vec> out;
    for (int f = 0; f < m.cols; ++f) {
        if (is_pivot[f])
            continue;
        Vec v(m.cols, 0);
        v[f] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r)
            v[pivots[r]] = sub(0, m.at(static_cast<int>(r), f), m.p);
        out.push_back(std::move(v));
    }
    return out;
}

std::optional<Vec> solve(const Mat& m, const Vec& b)
{
    if (static_cast<int>(b.size()) != m.rows)
        throw DimensionMismatch("oracle solve");
    Mat aug(m.p, m.rows, m.cols + 1);
    for (int r = 0; r < m.rows; ++r) {
        for (int c = 0; c < m.cols; ++c)
            aug.at(r, c) = m.at(r, c);
        aug.at(r, m.cols) = b[r];
    }
    auto pivots = reduce(aug);
    if (!pivots.empty() && pivots.back() == m.cols)
        return std::nullopt;
    Vec x(m.cols, 0);
    for (std::size_t r = 0; r < pivots.size(); ++r)
        x[pivots[r]] = aug.at(static_cast<int>(r), m.cols);
    return x;
}

Mat from_columns(int p, int rows, const std::vector<Vec>& cols)
{
    Mat m(p, rows, static_cast<int>(cols.size()));
    for (int c = 0; c < m.cols; ++c) {
        if (static_cast<int>(cols[c].size()) != rows)
            throw DimensionMismatch("oracle column length");
        for (int r = 0; r < rows; ++r)
            m.at(r, c) = cols[c][r];
    }
    return m;
}

Mat read(const Matrix& m)
{
    Mat out(prime_of(m.field()), m.rows(), m.cols());
    for (const auto& e : m.entries())
        out.at(e.row, e.col) = e.value.residue();
    return out;
}

Vec read(const SparseVec& v, int dim)
{
    Vec out(dim, 0);
    for (const auto& t : v.terms()) {
        if (t.index >= dim)
            throw DimensionMismatch("oracle vector length");
        out[t.index] = t.coeff.residue();
    }
    return out;
}

Vec FiniteAlgebra::product(const Vec& x, const Vec& y) const
{
    Vec out(dim, 0);
    for (int i = 0; i < dim; ++i) {
        if (!x[i])
            continue;
        for (int j = 0; j < dim; ++j) {
            if (!y[j])
                continue;
            std::uint32_t c = mul(x[i], y[j], p);
            for (int k = 0; k < dim; ++k)
                out[k] = add(out[k], mul(c, mult[i][j][k], p), p);
        }
    }
    return out;
}

void FiniteAlgebra::validate() const
{
    auto e = [&](int i) {
        Vec v(dim, 0);
        v[i] = 1;
        return v;
    };
    for (int x = 0; x < dim; ++x) {
        if (product(unit, e(x)) != e(x) || product(e(x), unit) != e(x))
            throw VerificationError("oracle: unit fails on " + names[x]);
        for (int y = 0; y < dim; ++y)
            for (int z = 0; z < dim; ++z)
                if (product(mult[x][y], e(z)) != product(e(x), mult[y][z]))
                    throw VerificationError("oracle: (" + names[x] + " " + names[y] + ") " + names[z] +
                                            " is not associative");
    }
}

FiniteAlgebra finite_algebra(const OrdinaryAlgebraPresentation& pres)
{
    FiniteAlgebra a;
    a.p = prime_of(pres.field);
    a.dim = static_cast<int>(pres.names.size());
    a.names = pres.names;
    a.mult.assign(a.dim, std::vector<Vec>(a.dim));
    for (int x = 0; x < a.dim; ++x)
        for (int y = 0; y < a.dim; ++y)
            a.mult[x][y] = read(pres.mult.at(x, y), a.dim);
    a.unit = read(pres.unit, a.dim);
    a.validate();
    return a;
}

FiniteAlgebra finite_algebra(const DgAlgebra& alg)
{
    if (!alg.ordinary())
        throw VerificationError("oracle: the algebra is not ordinary");
    FiniteAlgebra a;
    a.p = prime_of(alg.field());
    a.dim = alg.dim();
    for (int i = 0; i < a.dim; ++i)
        a.names.push_back(alg.basis(i).name);
    a.mult.assign(a.dim, std::vector<Vec>(a.dim));
    for (int x = 0; x < a.dim; ++x)
        for (int y = 0; y < a.dim; ++y)
            a.mult[x][y] = read(alg.product(x, y), a.dim);
    a.unit = read(alg.unit(), a.dim);
    a.validate();
    return a;
}

OrdinaryAlgebraPresentation presentation(const FiniteAlgebra& a)
{
    Field f = Field::prime(a.p);
    auto vec = [&](const Vec& v) {
        SparseVec out(f);
        for (int i = 0; i < a.dim; ++i)
            if (v[i])
                out.add(i, Scalar(f, static_cast<long>(v[i])));
        return out;
    };
    OrdinaryAlgebraPresentation pres{f, a.names, StructureTable(a.dim, a.dim, f), vec(a.unit), {}};
    for (int x = 0; x < a.dim; ++x)
        for (int y = 0; y < a.dim; ++y)
            pres.mult.set(x, y, vec(a.mult[x][y]));
    pres.validate();
    return pres;
}

bool is_algebra_iso(const FiniteAlgebra& a, const FiniteAlgebra& b, const Mat& f)
{
    if (a.p != b.p || a.dim != b.dim || f.rows != b.dim || f.cols != a.dim || rank(f) != a.dim)
        return false;
    if (f.apply(a.unit) != b.unit)
        return false;
    for (int x = 0; x < a.dim; ++x)
        for (int y = 0; y < a.dim; ++y)
            if (f.apply(a.mult[x][y]) != b.product(f.column(x), f.column(y)))
                return false;
    return true;
}

Mat FiniteModuleTable::act(const Vec& a) const
{
    Mat out(p, dim, dim);
    for (std::size_t x = 0; x < action.size(); ++x) {
        if (!a[x])
            continue;
        for (std::size_t i = 0; i < out.a.size(); ++i)
            out.a[i] = add(out.a[i], mul(a[x], action[x].a[i], p), p);
    }
    return out;
}

void FiniteModuleTable::validate(const FiniteAlgebra& r) const
{
    if (p != r.p || static_cast<int>(action.size()) != r.dim)
        throw VerificationError("oracle: module and algebra do not match");
    if (act(r.unit) != Mat::identity(p, dim))
        throw VerificationError("oracle: the unit does not act as the identity");
    for (int x = 0; x < r.dim; ++x)
        for (int y = 0; y < r.dim; ++y)
            if (action[y] * action[x] != act(r.mult[x][y]))
                throw VerificationError("oracle: action of " + r.names[x] + " " + r.names[y] + " is not a product");
}

FiniteModuleTable module_table(const DgModule& m)
{
    const DgAlgebra& a = *m.algebra();
    if (!a.ordinary())
        throw VerificationError("oracle: the algebra is not ordinary");
    FiniteModuleTable t;
    t.p = prime_of(m.field());
    t.dim = m.dim();
    for (int i = 0; i < t.dim; ++i) {
        if (m.degree(i) != m.degree(0))
            throw VerificationError("oracle: the module is not concentrated in one degree");
        if (!m.diff(i).is_zero())
            throw VerificationError("oracle: the module has a differential");
    }
    for (int x = 0; x < a.dim(); ++x) {
        Mat act(t.p, t.dim, t.dim);
        for (int i = 0; i < t.dim; ++i) {
            Vec col = read(m.act(i, x), t.dim);
            for (int r = 0; r < t.dim; ++r)
                act.at(r, i) = col[r];
        }
        t.action.push_back(std::move(act));
    }
    return t;
}

FiniteModuleTable regular_table(const FiniteAlgebra& r)
{
    FiniteModuleTable t{r.p, r.dim, {}};
    for (int x = 0; x < r.dim; ++x) {
        Mat act(r.p, r.dim, r.dim);
        for (int i = 0; i < r.dim; ++i)
            for (int k = 0; k < r.dim; ++k)
                act.at(k, i) = r.mult[i][x][k];
        t.action.push_back(std::move(act));
    }
    return t;
}

FiniteModuleTable dual_table(const FiniteAlgebra& r)
{
    FiniteModuleTable t{r.p, r.dim, {}};
    for (int x = 0; x < r.dim; ++x) {
        // (d_i . e_x)(e_b) = coefficient of e_i in e_x e_b
        Mat act(r.p, r.dim, r.dim);
        for (int i = 0; i < r.dim; ++i)
            for (int b = 0; b < r.dim; ++b)
                act.at(b, i) = r.mult[x][b][i];
        t.action.push_back(std::move(act));
    }
    return t;
}

FiniteModuleTable direct_sum(const FiniteModuleTable& x, const FiniteModuleTable& y)
{
    if (x.p != y.p || x.action.size() != y.action.size())
        throw DimensionMismatch("oracle direct sum");
    FiniteModuleTable t{x.p, x.dim + y.dim, {}};
    for (std::size_t a = 0; a < x.action.size(); ++a) {
        Mat act(t.p, t.dim, t.dim);
        for (int r = 0; r < x.dim; ++r)
            for (int c = 0; c < x.dim; ++c)
                act.at(r, c) = x.action[a].at(r, c);
        for (int r = 0; r < y.dim; ++r)
            for (int c = 0; c < y.dim; ++c)
                act.at(x.dim + r, x.dim + c) = y.action[a].at(r, c);
        t.action.push_back(std::move(act));
    }
    return t;
}

int default_dim_cap(int p)
{
    int n = 0;
    for (std::uint64_t q = p; q <= 256; q *= p)
        ++n;
    return std::max(n, 1);
}

Centralizer centralizer(const std::vector<Mat>& ops, int p, int n, std::uint64_t enumeration_limit)
{
    Centralizer out;
    int cells = n * n;
    std::uint64_t total = 1;
    bool small = true;
    for (int i = 0; i < cells && small; ++i) {
        total *= static_cast<std::uint64_t>(p);
        small = total <= enumeration_limit;
    }
    if (small) {
        out.enumerated = true;
        Echelon ech{p, {}, {}};
        Mat m(p, n, n);
        for (std::uint64_t k = 0; k < total; ++k) {
            std::uint64_t rest = k;
            for (int i = 0; i < cells; ++i, rest /= p)
                m.a[i] = static_cast<std::uint32_t>(rest % p);
            bool ok = std::all_of(ops.begin(), ops.end(), [&](const Mat& op) { return op * m == m * op; });
            if (!ok)
                continue;
            ++out.commuting;
            if (ech.add(m.a))
                out.basis.push_back(m);
        }
        return out;
    }
    // op M - M op = 0, unknown M(r, c) at r * n + c
    Mat eq(p, static_cast<int>(ops.size()) * cells, cells);
    for (std::size_t o = 0; o < ops.size(); ++o)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                int row = static_cast<int>(o) * cells + i * n + j;
                for (int k = 0; k < n; ++k) {
                    eq.at(row, k * n + j) = add(eq.at(row, k * n + j), ops[o].at(i, k), p);
                    eq.at(row, i * n + k) = sub(eq.at(row, i * n + k), ops[o].at(k, j), p);
                }
            }
    for (const auto& v : kernel(eq))
        out.basis.push_back(unflatten(p, n, v));
    return out;
}

ClassicalEnd classical_endomorphisms(const FiniteAlgebra& r, const FiniteModuleTable& j, OracleOptions options)
{
    j.validate(r);
    int cap = options.dim_cap.value_or(default_dim_cap(r.p));
    if (j.dim > cap)
        throw CapExceeded("oracle: module dimension " + std::to_string(j.dim) + " exceeds the cap " +
                          std::to_string(cap));
    Centralizer c = centralizer(j.action, r.p, j.dim, options.enumeration_limit);
    ClassicalEnd e;
    e.maps = std::move(c.basis);
    e.enumerated = c.enumerated;
    e.algebra = algebra_of_maps(r.p, j.dim, e.maps);
    return e;
}

ClassicalBic classical_bicommutator(const FiniteAlgebra& r, const FiniteModuleTable& j, OracleOptions options)
{
    ClassicalBic b;
    b.e = classical_endomorphisms(r, j, options);
    Centralizer c = centralizer(b.e.maps, r.p, j.dim, options.enumeration_limit);
    b.maps = std::move(c.basis);
    b.enumerated = c.enumerated;
    b.algebra = algebra_of_maps(r.p, j.dim, b.maps);

    std::vector<Vec> flat;
    for (const auto& m : b.maps)
        flat.push_back(flatten(m));
    std::vector<Vec> cols;
    for (int x = 0; x < r.dim; ++x)
        cols.push_back(coords(r.p, flat, flatten(j.action[x]), "right multiplication"));
    b.unit_map = from_columns(r.p, b.algebra.dim, cols);
    int rk = rank(b.unit_map);
    b.unit_injective = rk == r.dim;
    b.unit_surjective = rk == b.algebra.dim;
    b.unit_multiplicative = b.unit_map.apply(r.unit) == b.algebra.unit;
    for (int x = 0; x < r.dim && b.unit_multiplicative; ++x)
        for (int y = 0; y < r.dim && b.unit_multiplicative; ++y)
            b.unit_multiplicative = b.unit_map.apply(r.mult[x][y]) == b.algebra.product(cols[x], cols[y]);
    return b;
}

int RawComplex::total_dim() const
{
    int s = 0;
    for (int d : dims)
        s += d;
    return s;
}

RawComplex raw_complex(const Complex& c)
{
    RawComplex out;
    out.p = prime_of(c.field());
    out.lo = c.lo();
    for (int n = c.lo(); n <= c.hi(); ++n)
        out.dims.push_back(c.dim(n));
    for (int n = c.lo(); n < c.hi(); ++n)
        out.d.push_back(read(c.diff(n)));
    return out;
}

std::map<int, int> direct_cohomology(const RawComplex& c, int cap)
{
    if (c.total_dim() > cap)
        throw CapExceeded("oracle: complex of total dimension " + std::to_string(c.total_dim()) +
                          " exceeds the cap " + std::to_string(cap));
    int len = static_cast<int>(c.dims.size());
    std::vector<int> ranks(len, 0); // rank of the map leaving position i
    for (int i = 0; i < len; ++i) {
        if (i >= static_cast<int>(c.d.size()))
            continue;
        const Mat& d = c.d[i];
        int target = i + 1 < len ? c.dims[i + 1] : 0;
        if (d.cols != c.dims[i] || d.rows != target)
            throw DimensionMismatch("oracle: differential at " + std::to_string(c.lo + i));
        ranks[i] = rank(d);
        if (i + 1 < static_cast<int>(c.d.size()) && !(c.d[i + 1] * d).is_zero())
            throw VerificationError("oracle: d^2 != 0 at " + std::to_string(c.lo + i));
    }
    std::map<int, int> out;
    for (int i = 0; i < len; ++i)
        out[c.lo + i] = c.dims[i] - ranks[i] - (i > 0 ? ranks[i - 1] : 0);
    return out;
}

RawComplex hom_complex(const DgModule& m, const DgModule& n, int cap)
{
    const DgAlgebra& a = *m.algebra();
    if (a.dim() != n.algebra()->dim() || m.field() != n.field())
        throw DimensionMismatch("oracle: modules over different algebras");
    if (m.dim() * n.dim() > cap)
        throw CapExceeded("oracle: Hom of dimensions " + std::to_string(m.dim()) + " x " + std::to_string(n.dim()) +
                          " exceeds the cap " + std::to_string(cap));
    int p = prime_of(m.field());
    int dm = m.dim(), dn = n.dim();

    auto action = [&](const DgModule& mod, int x) {
        Mat act(p, mod.dim(), mod.dim());
        for (int i = 0; i < mod.dim(); ++i) {
            Vec col = read(mod.act(i, x), mod.dim());
            for (int r = 0; r < mod.dim(); ++r)
                act.at(r, i) = col[r];
        }
        return act;
    };
    auto differential = [&](const DgModule& mod) {
        Mat d(p, mod.dim(), mod.dim());
        for (int i = 0; i < mod.dim(); ++i) {
            Vec col = read(mod.diff(i), mod.dim());
            for (int r = 0; r < mod.dim(); ++r)
                d.at(r, i) = col[r];
        }
        return d;
    };
    std::vector<Mat> am, an;
    for (int x = 0; x < a.dim(); ++x) {
        am.push_back(action(m, x));
        an.push_back(action(n, x));
    }
    Mat d_m = differential(m), d_n = differential(n);

    RawComplex out;
    out.p = p;
    if (dm == 0 || dn == 0) {
        out.dims = {0};
        return out;
    }
    int mlo = m.degree(0), mhi = mlo, nlo = n.degree(0), nhi = nlo;
    for (int i = 0; i < dm; ++i) {
        mlo = std::min(mlo, m.degree(i));
        mhi = std::max(mhi, m.degree(i));
    }
    for (int j = 0; j < dn; ++j) {
        nlo = std::min(nlo, n.degree(j));
        nhi = std::max(nhi, n.degree(j));
    }
    out.lo = nlo - mhi;
    int hi = nhi - mlo;

    // per degree: unknown cells (row in N, column in M) and a basis of maps
    std::vector<std::vector<std::pair<int, int>>> cells;
    std::vector<std::vector<Mat>> basis;
    for (int t = out.lo; t <= hi; ++t) {
        std::vector<std::pair<int, int>> cell;
        std::map<std::pair<int, int>, int> index;
        for (int r = 0; r < dn; ++r)
            for (int c = 0; c < dm; ++c)
                if (n.degree(r) == m.degree(c) + t) {
                    index[{r, c}] = static_cast<int>(cell.size());
                    cell.push_back({r, c});
                }
        // (F A_x - B_x F)(r, i) = 0
        std::vector<Vec> rows;
        for (int x = 0; x < a.dim(); ++x)
            for (int r = 0; r < dn; ++r)
                for (int i = 0; i < dm; ++i) {
                    if (n.degree(r) != m.degree(i) + a.degree(x) + t)
                        continue;
                    Vec row(cell.size(), 0);
                    for (int k = 0; k < dm; ++k)
                        if (auto it = index.find({r, k}); it != index.end())
                            row[it->second] = add(row[it->second], am[x].at(k, i), p);
                    for (int k = 0; k < dn; ++k)
                        if (auto it = index.find({k, i}); it != index.end())
                            row[it->second] = sub(row[it->second], an[x].at(r, k), p);
                    rows.push_back(std::move(row));
                }
        std::vector<Mat> maps;
        if (rows.empty()) {
            for (std::size_t u = 0; u < cell.size(); ++u) {
                Mat f(p, dn, dm);
                f.at(cell[u].first, cell[u].second) = 1;
                maps.push_back(std::move(f));
            }
        } else {
            Mat eq(p, static_cast<int>(rows.size()), static_cast<int>(cell.size()));
            for (int r = 0; r < eq.rows; ++r)
                for (int c = 0; c < eq.cols; ++c)
                    eq.at(r, c) = rows[r][c];
            for (const auto& v : kernel(eq)) {
                Mat f(p, dn, dm);
                for (std::size_t u = 0; u < cell.size(); ++u)
                    f.at(cell[u].first, cell[u].second) = v[u];
                maps.push_back(std::move(f));
            }
        }
        out.dims.push_back(static_cast<int>(maps.size()));
        cells.push_back(std::move(cell));
        basis.push_back(std::move(maps));
    }

    for (int t = out.lo; t < hi; ++t) {
        int i = t - out.lo;
        const auto& next = basis[i + 1];
        const auto& cell = cells[i + 1];
        std::vector<Vec> flat;
        for (const auto& f : next) {
            Vec v(cell.size());
            for (std::size_t u = 0; u < cell.size(); ++u)
                v[u] = f.at(cell[u].first, cell[u].second);
            flat.push_back(std::move(v));
        }
        std::vector<Vec> cols;
        for (const auto& f : basis[i]) {
            Mat df = d_n * f;
            Mat fd = f * d_m;
            df = t % 2 == 0 ? df - fd : df + fd;
            Vec v(cell.size());
            for (std::size_t u = 0; u < cell.size(); ++u)
                v[u] = df.at(cell[u].first, cell[u].second);
            // entries outside degree t + 1 cannot occur for homogeneous f
            cols.push_back(flat.empty() ? Vec{} : coords(p, flat, v, "differential of a map"));
            if (flat.empty() && !df.is_zero())
                throw VerificationError("oracle: differential of a map leaves Hom");
        }
        Mat d(p, static_cast<int>(next.size()), static_cast<int>(basis[i].size()));
        for (int c = 0; c < d.cols; ++c)
            for (int r = 0; r < d.rows; ++r)
                d.at(r, c) = cols[c][r];
        out.d.push_back(std::move(d));
    }
    return out;
}

std::vector<int> minimal_betti(const FiniteAlgebra& r, const std::vector<Vec>& rad, const FiniteModuleTable& j,
                               int length)
{
    j.validate(r);
    int p = r.p;
    std::vector<int> out;
    FiniteModuleTable cur = j;
    for (int step = 0; step <= length; ++step) {
        if (cur.dim == 0) {
            out.push_back(0);
            continue;
        }
        Echelon ech{p, {}, {}};
        for (const auto& x : rad) {
            Mat act = cur.act(x);
            for (int i = 0; i < cur.dim; ++i)
                ech.add(act.column(i));
        }
        std::vector<Vec> gens;
        for (int i = 0; i < cur.dim; ++i) {
            Vec e(cur.dim, 0);
            e[i] = 1;
            if (ech.add(e))
                gens.push_back(std::move(e));
        }
        int b = static_cast<int>(gens.size());
        out.push_back(b);
        // R^b -> cur, (g, x) -> g . e_x
        Mat cover(p, cur.dim, b * r.dim);
        for (int g = 0; g < b; ++g)
            for (int x = 0; x < r.dim; ++x) {
                Vec v = cur.action[x].apply(gens[g]);
                for (int k = 0; k < cur.dim; ++k)
                    cover.at(k, g * r.dim + x) = v[k];
            }
        if (rank(cover) != cur.dim)
            throw VerificationError("oracle: generators mod the radical do not cover; the algebra is not local");
        std::vector<Vec> ker = kernel(cover);
        FiniteModuleTable next{p, static_cast<int>(ker.size()), {}};
        for (int x = 0; x < r.dim; ++x) {
            std::vector<Vec> cols;
            for (const auto& k : ker) {
                // (g, y) . e_x = sum_z mult[y][x][z] (g, z)
                Vec w(b * r.dim, 0);
                for (int g = 0; g < b; ++g)
                    for (int y = 0; y < r.dim; ++y) {
                        std::uint32_t c = k[g * r.dim + y];
                        if (!c)
                            continue;
                        for (int z = 0; z < r.dim; ++z)
                            w[g * r.dim + z] = add(w[g * r.dim + z], mul(c, r.mult[y][x][z], p), p);
                    }
                cols.push_back(coords(p, ker, w, "syzygy action"));
            }
            next.action.push_back(from_columns(p, next.dim, cols));
        }
        cur = std::move(next);
    }
    return out;
}

} // namespace dgforge::oracle
