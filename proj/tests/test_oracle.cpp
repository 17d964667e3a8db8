#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dgforge/catalog.hpp"
#include "dgforge/error.hpp"
#include "dgforge/oracle.hpp"
#include "dgforge/resolutions.hpp"
#include "support.hpp"

using namespace dgforge;
namespace o = dgforge::oracle;

namespace {

AlgebraPtr algebra(const OrdinaryAlgebraPresentation& p)
{
    return std::make_shared<const DgAlgebra>(embed_ordinary(p));
}

ModulePtr share(DgModule m) { return std::make_shared<const DgModule>(std::move(m)); }

std::vector<OrdinaryAlgebraPresentation> artinian()
{
    Field f2 = Field::prime(2);
    return {catalog::ground_field(f2),
            catalog::truncated_polynomial(f2, 2),
            catalog::truncated_polynomial(Field::prime(3), 3),
            catalog::truncated_polynomial(Field::prime(5), 2),
            catalog::square_zero(f2, 2),
            catalog::upper_triangular(f2),
            catalog::matrix_algebra(f2, 2)};
}

o::FiniteModuleTable residue_table(const OrdinaryAlgebraPresentation& pres)
{
    AlgebraPtr r = algebra(pres);
    return o::module_table(catalog::quotient_by_ideal(r, pres));
}

} // namespace

TEST_CASE("naive elimination")
{
    o::Mat m(3, 2, 3);
    // [1 2 0; 2 1 0] over F_3: rows are dependent
    m.at(0, 0) = 1;
    m.at(0, 1) = 2;
    m.at(1, 0) = 2;
    m.at(1, 1) = 1;
    CHECK(o::rank(m) == 1);
    auto ker = o::kernel(m);
    CHECK(ker.size() == 2);
    for (const auto& v : ker)
        CHECK(m.apply(v) == o::Vec{0, 0});
    CHECK(o::solve(m, {1, 2}).has_value());
    CHECK(!o::solve(m, {1, 0}).has_value());
    CHECK(o::rank(o::Mat::identity(7, 5)) == 5);
}

TEST_CASE("rank agrees with the library on random matrices")
{
    std::mt19937 rng(11);
    for (int p : {2, 3, 5, 7}) {
        Field f = Field::prime(p);
        for (int k = 0; k < 50; ++k) {
            Matrix m = testsupport::random_matrix(rng, f, 1 + k % 6, 1 + (k * 7) % 5);
            CHECK(o::rank(o::read(m)) == rank(m));
        }
    }
}

TEST_CASE("classical endomorphisms")
{
    Field f2 = Field::prime(2);
    SUBCASE("J = R gives E = R")
    {
        for (const auto& pres : artinian()) {
            o::FiniteAlgebra r = o::finite_algebra(pres);
            o::ClassicalEnd e = o::classical_endomorphisms(r, o::regular_table(r));
            CHECK(e.algebra.dim == r.dim);
        }
    }
    SUBCASE("k over F2[x]/(x^2): both linear maps of k are listed, E = F2")
    {
        auto pres = catalog::truncated_polynomial(f2, 2);
        o::FiniteAlgebra r = o::finite_algebra(pres);
        o::Centralizer c = o::centralizer(residue_table(pres).action, 2, 1, 1 << 18);
        CHECK(c.enumerated);
        CHECK(c.commuting == 2);
        CHECK(o::classical_endomorphisms(r, residue_table(pres)).algebra.dim == 1);
    }
    SUBCASE("row module over M2(F2): 16 maps, 2 commute")
    {
        auto pres = catalog::matrix_algebra(f2, 2);
        AlgebraPtr r = algebra(pres);
        o::FiniteModuleTable j = o::module_table(catalog::row_module(r, 2));
        o::Centralizer c = o::centralizer(j.action, 2, 2, 1 << 18);
        CHECK(c.enumerated);
        CHECK(c.commuting == 2);
        CHECK(o::classical_endomorphisms(o::finite_algebra(pres), j).algebra.dim == 1);
    }
    SUBCASE("cap")
    {
        auto pres = catalog::truncated_polynomial(Field::prime(3), 3);
        o::FiniteAlgebra r = o::finite_algebra(pres);
        o::FiniteModuleTable j = o::direct_sum(o::regular_table(r), o::regular_table(r));
        CHECK(o::default_dim_cap(3) == 5);
        CHECK(o::default_dim_cap(2) == 8);
        CHECK_THROWS_AS(o::classical_endomorphisms(r, j), CapExceeded);
        o::OracleOptions wide;
        wide.dim_cap = 6;
        CHECK(o::classical_endomorphisms(r, j, wide).algebra.dim == 4 * 3);
    }
}

TEST_CASE("enumeration and the linear solve find the same centralizer")
{
    for (const auto& pres : artinian()) {
        o::FiniteAlgebra r = o::finite_algebra(pres);
        for (const auto& j : {o::regular_table(r), o::dual_table(r)}) {
            o::Centralizer listed = o::centralizer(j.action, r.p, j.dim, 1 << 18);
            o::Centralizer solved = o::centralizer(j.action, r.p, j.dim, 0);
            REQUIRE(listed.enumerated);
            CHECK(!solved.enumerated);
            CHECK(listed.basis.size() == solved.basis.size());
            // p^dim commuting maps, and each listed map lies in the solved span
            std::uint64_t q = 1;
            for (std::size_t i = 0; i < solved.basis.size(); ++i)
                q *= r.p;
            CHECK(listed.commuting == q);
            std::vector<o::Vec> flat;
            for (const auto& m : solved.basis)
                flat.push_back(m.a);
            for (const auto& m : listed.basis)
                CHECK(o::solve(o::from_columns(r.p, j.dim * j.dim, flat), m.a).has_value());
        }
    }
}

TEST_CASE("classical bicommutator examples")
{
    Field f2 = Field::prime(2);
    SUBCASE("row module over M2(F2): Bic = M2(F2)")
    {
        auto pres = catalog::matrix_algebra(f2, 2);
        o::FiniteAlgebra r = o::finite_algebra(pres);
        o::ClassicalBic b = o::classical_bicommutator(r, o::module_table(catalog::row_module(algebra(pres), 2)));
        CHECK(b.enumerated);
        CHECK(b.algebra.dim == 4);
        CHECK(b.holds());
        CHECK(b.unit_multiplicative);
        CHECK(o::is_algebra_iso(r, b.algebra, b.unit_map));
    }
    SUBCASE("k over F2[x]/(x^2): Bic = F2 and the unit is not injective")
    {
        auto pres = catalog::truncated_polynomial(f2, 2);
        o::FiniteAlgebra r = o::finite_algebra(pres);
        o::ClassicalBic b = o::classical_bicommutator(r, residue_table(pres));
        CHECK(b.algebra.dim == 1);
        CHECK(!b.unit_injective);
        CHECK(b.unit_surjective);
        CHECK(b.unit_multiplicative);
        CHECK(!b.holds());
    }
    SUBCASE("J = D(R) over every bundled artinian algebra")
    {
        for (const auto& pres : artinian()) {
            o::FiniteAlgebra r = o::finite_algebra(pres);
            o::ClassicalBic b = o::classical_bicommutator(r, o::dual_table(r));
            CAPTURE(r.dim);
            CHECK(b.enumerated);
            CHECK(b.holds());
            CHECK(o::is_algebra_iso(r, b.algebra, b.unit_map));
        }
    }
    SUBCASE("D(R) + D(R) over the square-zero algebra, by the linear solve")
    {
        o::FiniteAlgebra r = o::finite_algebra(catalog::square_zero(f2, 2));
        o::ClassicalBic b = o::classical_bicommutator(r, o::direct_sum(o::dual_table(r), o::dual_table(r)));
        CHECK(!b.enumerated);
        CHECK(b.holds());
        CHECK(o::is_algebra_iso(r, b.algebra, b.unit_map));
    }
}

TEST_CASE("module tables")
{
    for (const auto& pres : artinian()) {
        AlgebraPtr a = algebra(pres);
        o::FiniteAlgebra r = o::finite_algebra(pres);
        CHECK(o::module_table(regular_module(a)).action == o::regular_table(r).action);
        CHECK(o::module_table(dual_module(a)).action == o::dual_table(r).action);
        o::dual_table(r).validate(r);
        // round trip through a presentation
        o::FiniteAlgebra back = o::finite_algebra(o::presentation(r));
        CHECK(o::is_algebra_iso(r, back, o::Mat::identity(r.p, r.dim)));
    }
    o::FiniteAlgebra r = o::finite_algebra(catalog::truncated_polynomial(Field::prime(2), 2));
    o::FiniteModuleTable bad = o::regular_table(r);
    bad.action[1] = o::Mat::identity(2, 2);
    CHECK_THROWS_AS(bad.validate(r), VerificationError);
}

TEST_CASE("direct cohomology examples")
{
    Field f3 = Field::prime(3);
    SUBCASE("an acyclic cone")
    {
        auto c = std::make_shared<const Complex>(Complex(f3, 0, {2, 3}, {Matrix::from_ints(f3, {{1, 0}, {0, 1}, {1, 1}})}));
        Complex acyclic = cone(ChainMap::identity(c)).cone;
        for (auto [n, d] : o::direct_cohomology(o::raw_complex(acyclic)))
            CHECK(d == 0);
    }
    SUBCASE("d^2 != 0 and the cap")
    {
        o::RawComplex c;
        c.p = 2;
        c.dims = {1, 1, 1};
        o::Mat one(2, 1, 1);
        one.at(0, 0) = 1;
        c.d = {one, one};
        CHECK_THROWS_AS(o::direct_cohomology(c), VerificationError);
        c.dims = {40, 40};
        c.d = {o::Mat(2, 40, 40)};
        CHECK_THROWS_AS(o::direct_cohomology(c), CapExceeded);
        CHECK(o::direct_cohomology(c, 80).at(0) == 40);
    }
    SUBCASE("the minimal resolution of k over F2[x]/(x^2), augmented, is exact")
    {
        auto pres = catalog::truncated_polynomial(Field::prime(2), 2);
        AlgebraPtr r = algebra(pres);
        ModulePtr k = share(catalog::quotient_by_ideal(r, pres));
        auto res = semifree_resolve(k, Window(-4, 0), true);
        REQUIRE(res.generator_count() == 5);
        // P^{-4} -> ... -> P^0 -> k, then cut off the top kernel
        o::RawComplex aug;
        aug.p = 2;
        aug.lo = -4;
        o::RawComplex p = o::raw_complex(res.p->complex());
        aug.dims = p.dims;
        aug.d = p.d;
        aug.dims.push_back(k->dim());
        o::Mat full = o::read(res.augmentation.matrix());
        const auto& top = res.p->grading().in_degree(0);
        o::Mat eps(2, k->dim(), static_cast<int>(top.size()));
        for (int c = 0; c < eps.cols; ++c)
            for (int r = 0; r < eps.rows; ++r)
                eps.at(r, c) = full.at(r, top[c]);
        aug.d.push_back(eps);
        auto h = o::direct_cohomology(aug);
        // only the bottom degree carries the kernel of the truncation
        CHECK(h.at(-4) == 1);
        for (int n = -3; n <= 1; ++n)
            CHECK(h.at(n) == 0);
    }
}

TEST_CASE("Hom complex oracle")
{
    Field f2 = Field::prime(2);
    auto pres = catalog::truncated_polynomial(f2, 2);
    AlgebraPtr r = algebra(pres);
    ModulePtr k = share(catalog::quotient_by_ideal(r, pres));
    SUBCASE("Hom_R(P, P) for the resolution of k truncated at length 4")
    {
        auto res = semifree_resolve(k, Window(-4, 0), true);
        auto longer = semifree_resolve(k, Window(-5, 0), true);
        auto h = o::direct_cohomology(o::hom_complex(*res.p, *longer.p), 1024);
        for (int i = 0; i <= 3; ++i)
            CHECK(h.at(i) == 1);
        auto hk = o::direct_cohomology(o::hom_complex(*res.p, *k));
        for (int i = 0; i <= 4; ++i)
            CHECK(hk.at(i) == 1);
    }
    SUBCASE("dimensions agree with the library Hom")
    {
        ModulePtr reg = share(regular_module(r));
        ModulePtr dual = share(dual_module(r));
        auto res = semifree_resolve(k, Window(-3, 0), true);
        for (ModulePtr m : {reg, k, dual, res.p})
            for (ModulePtr n : {reg, k, dual, res.p}) {
                o::RawComplex raw = o::hom_complex(*m, *n);
                ModuleHom mh = module_hom_complex(m, n);
                const Complex& lib = mh.complex();
                auto h = o::direct_cohomology(raw, 4096);
                for (auto [t, d] : h) {
                    CHECK(raw.dims[t - raw.lo] == lib.dim(t));
                    CHECK(d == cohomology_dim(lib, t, Certify::relaxed));
                }
            }
    }
    SUBCASE("cap")
    {
        auto res = semifree_resolve(k, Window(-40, 0), true);
        CHECK_THROWS_AS(o::hom_complex(*res.p, *res.p), CapExceeded);
    }
}

TEST_CASE("minimal Betti numbers")
{
    for (auto [p, n] : std::vector<std::pair<int, int>>{{2, 2}, {3, 3}, {5, 2}, {2, 4}}) {
        auto pres = catalog::truncated_polynomial(Field::prime(p), n);
        o::FiniteAlgebra r = o::finite_algebra(pres);
        std::vector<o::Vec> rad;
        for (const auto& v : pres.ideal)
            rad.push_back(o::read(v, r.dim));
        auto betti = o::minimal_betti(r, rad, residue_table(pres), 8);
        CHECK(betti == std::vector<int>(9, 1));
        // R itself is free on one generator
        auto free = o::minimal_betti(r, rad, o::regular_table(r), 3);
        CHECK(free == std::vector<int>{1, 0, 0, 0});
    }
    // the square-zero algebra on two variables: 1, 2, 4, 8
    auto sq = catalog::square_zero(Field::prime(2), 2);
    o::FiniteAlgebra r = o::finite_algebra(sq);
    std::vector<o::Vec> rad;
    for (const auto& v : sq.ideal)
        rad.push_back(o::read(v, r.dim));
    CHECK(o::minimal_betti(r, rad, residue_table(sq), 3) == std::vector<int>{1, 2, 4, 8});
}

TEST_CASE("direct cohomology agrees with the library on random complexes")
{
    std::mt19937 rng(2024);
    for (int p : {2, 3, 5, 7}) {
        Field f = Field::prime(p);
        for (int k = 0; k < 200; ++k) {
            Complex c = testsupport::random_complex(rng, f, -2 + k % 3, 2 + k % 4);
            auto h = o::direct_cohomology(o::raw_complex(c));
            for (int n = c.lo(); n <= c.hi(); ++n)
                CHECK(h.at(n) == cohomology_dim(c, n, Certify::relaxed));
        }
    }
}
