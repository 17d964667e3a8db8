#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dgforge/catalog.hpp"
#include "dgforge/completion.hpp"
#include "dgforge/error.hpp"

using namespace dgforge;

namespace {

AlgebraPtr algebra(const OrdinaryAlgebraPresentation& p)
{
    return std::make_shared<const DgAlgebra>(embed_ordinary(p));
}

int h(const Complex& c, int n) { return cohomology_dim(c, n, Certify::relaxed); }

long binomial(int n, int k)
{
    long out = 1;
    for (int i = 1; i <= k; ++i)
        out = out * (n - k + i) / i;
    return out;
}

// comp is a bijective algebra map R -> T
bool algebra_iso(const DgAlgebra& r, const DgAlgebra& t, const Matrix& comp)
{
    if (comp.rows() != t.dim() || comp.cols() != r.dim() || rank(comp) != r.dim())
        return false;
    if (comp.apply(r.unit()) != t.unit())
        return false;
    for (int x = 0; x < r.dim(); ++x)
        for (int y = 0; y < r.dim(); ++y)
            if (comp.apply(r.product(x, y)) != t.multiply(comp.column(x), comp.column(y)))
                return false;
    return true;
}

} // namespace

TEST_CASE("ideal powers")
{
    Field f2 = Field::prime(2);
    SUBCASE("F2[x]/(x^2), (x)")
    {
        auto pres = catalog::truncated_polynomial(f2, 2);
        AlgebraPtr r = algebra(pres);
        IdealPowers p = ideal_powers(*r, pres.ideal_basis(), 6);
        REQUIRE(p.powers.size() == 2);
        CHECK(p.dim(1) == 1);
        CHECK(p.powers[0].column(0) == SparseVec::unit(f2, r->index_of("x")));
        CHECK(p.dim(2) == 0);
        CHECK(p.nilpotency_index == 2);
    }
    SUBCASE("F3[x]/(x^3), (x)")
    {
        auto pres = catalog::truncated_polynomial(Field::prime(3), 3);
        IdealPowers p = ideal_powers(*algebra(pres), pres.ideal_basis(), 6);
        REQUIRE(p.powers.size() == 3);
        CHECK(p.dim(1) == 2);
        CHECK(p.dim(2) == 1);
        CHECK(p.dim(3) == 0);
        CHECK(p.nilpotency_index == 3);
    }
    SUBCASE("the unit ideal of M2(F2)")
    {
        AlgebraPtr r = algebra(catalog::matrix_algebra(f2, 2));
        IdealPowers p = ideal_powers(*r, Matrix::identity(4, f2), 5);
        REQUIRE(p.powers.size() == 5);
        for (int n = 1; n <= 5; ++n)
            CHECK(p.dim(n) == 4);
        CHECK(!p.nilpotency_index);
    }
    SUBCASE("a one-sided ideal names the product")
    {
        AlgebraPtr r = algebra(catalog::upper_triangular(f2));
        Matrix span = Matrix::from_columns(3, f2, {SparseVec::unit(f2, r->index_of("e11"))});
        try {
            ideal_powers(*r, span, 3);
            FAIL("expected an error");
        } catch (const VerificationError& e) {
            std::string msg = e.what();
            CHECK(msg.find("two-sided") != std::string::npos);
            CHECK(msg.find("e12") != std::string::npos);
        }
    }
}

TEST_CASE("adic towers")
{
    Field f3 = Field::prime(3);
    SUBCASE("F3[x]/(x^3): dims 1, 2, 3 then stable")
    {
        auto pres = catalog::truncated_polynomial(f3, 3);
        AdicTower t = adic_tower(algebra(pres), pres.ideal_basis(), 8);
        REQUIRE(t.size() == 3);
        CHECK(t.stages[0].algebra->dim() == 1);
        CHECK(t.stages[1].algebra->dim() == 2);
        CHECK(t.stages[2].algebra->dim() == 3);
        CHECK(t.stabilized_at == 3);
    }
    SUBCASE("zero ideal: the first stage is R")
    {
        auto pres = catalog::truncated_polynomial(f3, 3);
        AlgebraPtr r = algebra(pres);
        AdicTower t = adic_tower(r, Matrix(3, 0, f3), 8);
        CHECK(t.stabilized_at == 1);
        CHECK(t.stages[0].algebra->dim() == 3);
        CHECK(algebra_iso(*r, *t.stages[0].algebra, t.stages[0].projection));
    }
    SUBCASE("unit ideal: the stages are zero")
    {
        AlgebraPtr r = algebra(catalog::truncated_polynomial(f3, 3));
        AdicTower t = adic_tower(r, Matrix::identity(3, f3), 8);
        CHECK(t.stabilized_at == 1);
        CHECK(t.stages[0].algebra->dim() == 0);
        InverseLimit l = inverse_limit(t);
        CHECK(l.algebra->dim() == 0);
    }
    SUBCASE("coherence of the projections")
    {
        auto pres = catalog::truncated_polynomial(Field::prime(2), 6);
        AdicTower t = adic_tower(algebra(pres), pres.ideal_basis(), 8);
        REQUIRE(t.size() == 6);
        for (int m = 1; m <= t.size(); ++m) {
            CHECK(t.phi(m, m) == Matrix::identity(t.stages[m - 1].algebra->dim(), Field::prime(2)));
            for (int n = 1; n <= m; ++n) {
                CHECK(t.phi(m, n) * t.stages[m - 1].projection == t.stages[n - 1].projection);
                for (int l = m; l <= t.size(); ++l)
                    CHECK(t.phi(m, n) * t.phi(l, m) == t.phi(l, n));
                // phi is an algebra map R/a^m -> R/a^n
                const DgAlgebra& am = *t.stages[m - 1].algebra;
                const DgAlgebra& an = *t.stages[n - 1].algebra;
                Matrix p = t.phi(m, n);
                for (int x = 0; x < am.dim(); ++x)
                    for (int y = 0; y < am.dim(); ++y)
                        CHECK(p.apply(am.product(x, y)) == an.multiply(p.column(x), p.column(y)));
            }
        }
        CHECK_THROWS_AS(t.phi(1, 2), DimensionMismatch);
    }
}

TEST_CASE("inverse limits")
{
    Field f2 = Field::prime(2);
    SUBCASE("nilpotent ideal: the limit is R")
    {
        auto pres = catalog::truncated_polynomial(Field::prime(3), 3);
        AlgebraPtr r = algebra(pres);
        InverseLimit l = inverse_limit(adic_tower(r, pres.ideal_basis(), 8));
        CHECK(l.stage == 3);
        CHECK(algebra_iso(*r, *l.algebra, l.comp));
        CHECK(l.projections.size() == 3);
    }
    SUBCASE("F2[x]/(x^4), (x^2): stages 2, 4")
    {
        auto pres = catalog::truncated_polynomial(f2, 4, 2);
        AlgebraPtr r = algebra(pres);
        AdicTower t = adic_tower(r, pres.ideal_basis(), 8);
        REQUIRE(t.size() == 2);
        CHECK(t.stages[0].algebra->dim() == 2);
        CHECK(t.stages[1].algebra->dim() == 4);
        InverseLimit l = inverse_limit(t);
        CHECK(algebra_iso(*r, *l.algebra, l.comp));
    }
    SUBCASE("a tower that has not stabilized")
    {
        auto pres = catalog::truncated_polynomial(f2, 4);
        AdicTower t = adic_tower(algebra(pres), pres.ideal_basis(), 2);
        CHECK(!t.stabilized_at);
        CHECK_THROWS_WITH_AS(inverse_limit(t), doctest::Contains("not computable at this depth"), WindowError);
    }
}

TEST_CASE("Koszul complexes")
{
    Field f2 = Field::prime(2);
    SUBCASE("one element: R -> R by a")
    {
        auto pres = catalog::truncated_polynomial(f2, 2);
        AlgebraPtr r = algebra(pres);
        SparseVec x = SparseVec::unit(f2, r->index_of("x"));
        KoszulComplex k = koszul_complex(r, {x});
        const Complex& c = k.module->complex();
        CHECK(c.dim(0) == 2);
        CHECK(c.dim(-1) == 2);
        // R/(x) and ann(x)
        CHECK(h(c, 0) == 1);
        CHECK(h(c, -1) == 1);
    }
    SUBCASE("the zero element")
    {
        AlgebraPtr r = algebra(catalog::truncated_polynomial(Field::prime(3), 3));
        KoszulComplex k = koszul_complex(r, {SparseVec(Field::prime(3))});
        CHECK(h(k.module->complex(), 0) == 3);
        CHECK(h(k.module->complex(), -1) == 3);
    }
    SUBCASE("ranks are binomial multiples of dim R")
    {
        auto pres = catalog::truncated_polynomial(f2, 5);
        AlgebraPtr r = algebra(pres);
        std::vector<SparseVec> xs;
        for (const char* name : {"x", "x2", "x3"})
            xs.push_back(SparseVec::unit(f2, r->index_of(name)));
        for (int n = 0; n <= 3; ++n) {
            KoszulComplex k = koszul_complex(r, std::vector<SparseVec>(xs.begin(), xs.begin() + n));
            for (int t = 0; t <= n; ++t)
                CHECK(k.module->complex().dim(-t) == binomial(n, t) * r->dim());
        }
    }
    SUBCASE("two generators of the square-zero ideal")
    {
        auto pres = catalog::square_zero(f2, 2);
        AlgebraPtr r = algebra(pres);
        auto gens = ideal_generators(*r, pres.ideal_basis());
        CHECK(gens.size() == 2);
        KoszulComplex k = koszul_complex(r, gens);
        const Complex& c = k.module->complex();
        // Euler characteristic of a Koszul complex vanishes
        CHECK(h(c, 0) - h(c, -1) + h(c, -2) == 0);
        CHECK(h(c, 0) == 1);
    }
    SUBCASE("a non-central element is named")
    {
        AlgebraPtr r = algebra(catalog::upper_triangular(f2));
        SparseVec e12 = SparseVec::unit(f2, r->index_of("e12"));
        CHECK_THROWS_WITH_AS(koszul_complex(r, {e12}), doctest::Contains("e12"), VerificationError);
    }
}

TEST_CASE("ideal generators")
{
    auto pres = catalog::truncated_polynomial(Field::prime(3), 4);
    AlgebraPtr r = algebra(pres);
    auto gens = ideal_generators(*r, pres.ideal_basis());
    REQUIRE(gens.size() == 1);
    CHECK(gens[0] == SparseVec::unit(Field::prime(3), r->index_of("x")));
}

TEST_CASE("completion theorem check")
{
    SUBCASE("F2[x]/(x^2) and F3[x]/(x^3)")
    {
        for (auto [p, n] : std::vector<std::pair<int, int>>{{2, 2}, {3, 3}}) {
            auto pres = catalog::truncated_polynomial(Field::prime(p), n);
            CompletionReport rep = completion_theorem_check(algebra(pres), pres.ideal_basis());
            CHECK(rep.quotient.verdict == Verdict::iso);
            REQUIRE(rep.koszul);
            CHECK(rep.koszul->verdict == Verdict::iso);
            CHECK(rep.quotient.bic.dim(0) == n);
            CHECK(rep.koszul->bic.dim(0) == n);
            CHECK(rep.h0_isomorphic == true);
            CHECK(rep.verdict() == Verdict::iso);
            CHECK(!rep.notes.empty());
        }
    }
    SUBCASE("zero ideal: Bic over J = R is R")
    {
        auto pres = catalog::truncated_polynomial(Field::prime(2), 3);
        AlgebraPtr r = algebra(pres);
        CompletionReport rep = completion_theorem_check(r, Matrix(3, 0, Field::prime(2)));
        CHECK(rep.limit.algebra->dim() == 3);
        CHECK(rep.quotient.bic.resolution_terminated);
        CHECK(rep.quotient.bic.dim(0) == 3);
        CHECK(rep.verdict() == Verdict::iso);
    }
    SUBCASE("non-commutative base skips the Koszul side")
    {
        auto pres = catalog::upper_triangular(Field::prime(2));
        CompletionReport rep = completion_theorem_check(algebra(pres), pres.ideal_basis());
        CHECK(!rep.koszul);
        CHECK(rep.koszul_note.find("central") != std::string::npos);
        CHECK(rep.quotient.verdict == Verdict::iso);
    }
    SUBCASE("a non-nilpotent ideal is rejected")
    {
        Field f2 = Field::prime(2);
        AlgebraPtr r = algebra(catalog::truncated_polynomial(f2, 2));
        CHECK_THROWS_AS(completion_theorem_check(r, Matrix::identity(2, f2)), VerificationError);
    }
}
