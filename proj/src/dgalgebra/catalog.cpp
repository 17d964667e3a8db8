#include "dgforge/catalog.hpp"

#include "dgforge/error.hpp"

namespace dgforge::catalog {

namespace {

OrdinaryAlgebraPresentation blank(Field f, std::vector<std::string> names)
{
    int n = static_cast<int>(names.size());
    return {f, std::move(names), StructureTable(n, n, f), SparseVec(f), {}};
}

} // namespace

OrdinaryAlgebraPresentation ground_field(Field f)
{
    auto p = blank(f, {"1"});
    p.mult.set(0, 0, SparseVec::unit(f, 0));
    p.unit = SparseVec::unit(f, 0);
    p.validate();
    return p;
}

OrdinaryAlgebraPresentation truncated_polynomial(Field f, int n, int ideal_power)
{
    if (n < 1)
        throw VerificationError("truncated polynomial ring needs n >= 1");
    std::vector<std::string> names{"1"};
    for (int i = 1; i < n; ++i)
        names.push_back(i == 1 ? "x" : "x" + std::to_string(i));
    auto p = blank(f, names);
    for (int i = 0; i < n; ++i)
        for (int j = 0; i + j < n; ++j)
            p.mult.set(i, j, SparseVec::unit(f, i + j));
    p.unit = SparseVec::unit(f, 0);
    for (int i = ideal_power; i < n; ++i)
        p.ideal.push_back(SparseVec::unit(f, i));
    p.validate();
    return p;
}

OrdinaryAlgebraPresentation square_zero(Field f, int r)
{
    std::vector<std::string> names{"1"};
    for (int i = 1; i <= r; ++i)
        names.push_back(r <= 3 ? std::string(1, "xyz"[i - 1]) : "x" + std::to_string(i));
    auto p = blank(f, names);
    for (int i = 0; i <= r; ++i) {
        p.mult.set(0, i, SparseVec::unit(f, i));
        p.mult.set(i, 0, SparseVec::unit(f, i));
    }
    p.unit = SparseVec::unit(f, 0);
    for (int i = 1; i <= r; ++i)
        p.ideal.push_back(SparseVec::unit(f, i));
    p.validate();
    return p;
}

OrdinaryAlgebraPresentation upper_triangular(Field f)
{
    auto p = blank(f, {"e11", "e12", "e22"});
    p.mult.set(0, 0, SparseVec::unit(f, 0));
    p.mult.set(0, 1, SparseVec::unit(f, 1));
    p.mult.set(1, 2, SparseVec::unit(f, 1));
    p.mult.set(2, 2, SparseVec::unit(f, 2));
    p.unit = SparseVec::unit(f, 0) + SparseVec::unit(f, 2);
    p.ideal.push_back(SparseVec::unit(f, 1));
    p.validate();
    return p;
}

OrdinaryAlgebraPresentation matrix_algebra(Field f, int n)
{
    std::vector<std::string> names;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            names.push_back("e" + std::to_string(i) + std::to_string(j));
    auto p = blank(f, names);
    auto idx = [n](int i, int j) { return i * n + j; };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l)
                p.mult.set(idx(i, j), idx(j, l), SparseVec::unit(f, idx(i, l)));
    p.unit = SparseVec(f);
    for (int i = 0; i < n; ++i)
        p.unit.add(idx(i, i), Scalar::one(f));
    p.validate();
    return p;
}

DgModule quotient_by_ideal(AlgebraPtr a, const OrdinaryAlgebraPresentation& p)
{
    auto r = std::make_shared<const DgModule>(regular_module(a));
    return *quotient_module(r, p.ideal_basis()).quotient;
}

DgModule row_module(AlgebraPtr a, int n)
{
    Field f = a->field();
    std::vector<BasisElement> basis;
    for (int i = 1; i <= n; ++i)
        basis.push_back({"v" + std::to_string(i), 0});
    StructureTable act(n, a->dim(), f);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            act.set(i, i * n + j, SparseVec::unit(f, j));
    return DgModule(a, basis, {}, act);
}

} // namespace dgforge::catalog
