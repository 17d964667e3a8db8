#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dgforge/complex.hpp"
#include "dgforge/error.hpp"
#include "support.hpp"

using namespace dgforge;
using namespace testsupport;

namespace {

ComplexPtr ptr(Complex c) { return std::make_shared<const Complex>(std::move(c)); }

Complex two_term(Field f, int lo, long d)
{
    return Complex(f, lo, {1, 1}, {Matrix::from_ints(f, {{d}})});
}

int total_cohomology(const Complex& c)
{
    int s = 0;
    for (int n = c.lo() - 1; n <= c.hi() + 1; ++n)
        s += cohomology_dim(c, n);
    return s;
}

} // namespace

TEST_CASE("construction rejects d^2 != 0")
{
    Field f = Field::rationals();
    Matrix one = Matrix::from_ints(f, {{1}});
    CHECK_THROWS_AS(Complex(f, 0, {1, 1, 1}, {one, one}), VerificationError);
    CHECK_THROWS_AS(Complex(f, 0, {1, 2}, {one}), DimensionMismatch);
}

TEST_CASE("shift")
{
    Field f = Field::prime(5);
    Complex c = two_term(f, 0, 1);
    CHECK(shift(c, 0) == c);
    Complex k1 = shift(Complex::concentrated(f, 0, 1), 1);
    CHECK(k1.dim(-1) == 1);
    CHECK(k1.dim(0) == 0);
    Complex s = shift(c, 1);
    CHECK(s.lo() == -1);
    CHECK(s.diff(-1) == Matrix::from_ints(f, {{-1}}));
    CHECK(shift(shift(c, 3), -3) == c);
}

TEST_CASE("cone examples")
{
    Field f = Field::prime(2);
    auto k = ptr(Complex::concentrated(f, 0, 1));
    ConeResult id = cone(ChainMap::identity(k));
    CHECK(id.cone.dim(0) == 1);
    CHECK(id.cone.dim(-1) == 1);
    CHECK(total_cohomology(id.cone) == 0);

    ConeResult z = cone(ChainMap::zero(k, k));
    CHECK(z.cone.diff(-1).is_zero());
    CHECK(cohomology_dim(z.cone, 0) == 1);
    CHECK(cohomology_dim(z.cone, -1) == 1);

    ConeResult cc = cocone(ChainMap::identity(k));
    CHECK(total_cohomology(cc.cone) == 0);
    ConeResult cz = cocone(ChainMap::zero(k, k));
    CHECK(cz.cone == direct_sum(shift(*k, -1), *k));
}

TEST_CASE("cocone is the shifted cone up to the sign automorphism diag(-1, 1)")
{
    std::mt19937 rng(11);
    for (Field f : test_fields()) {
        for (int trial = 0; trial < 10; ++trial) {
            auto m = ptr(random_complex(rng, f, 0, 3));
            auto n = ptr(random_complex(rng, f, 0, 3));
            ChainMap g = random_chain_map(rng, m, n);
            Complex a = cocone(g).cone;
            Complex b = shift(cone(g).cone, -1);
            REQUIRE(a.lo() == b.lo());
            REQUIRE(a.hi() == b.hi());
            for (int k = a.lo(); k <= a.hi(); ++k) {
                REQUIRE(a.dim(k) == b.dim(k));
                auto sgn = [&](int deg) {
                    Matrix s = Matrix::identity(a.dim(deg), f);
                    for (int i = 0; i < n->dim(deg - 1); ++i)
                        s.set(i, i, Scalar(f, -1L));
                    return s;
                };
                CHECK(sgn(k + 1) * b.diff(k) == a.diff(k) * sgn(k));
            }
        }
    }
}

TEST_CASE("cohomology examples")
{
    Field f2 = Field::prime(2);
    CHECK(cohomology_dim(Complex::concentrated(f2, 0, 1), 0) == 1);
    Complex c(f2, 0, {1, 1}, {Matrix(1, 1, f2)});
    Cohomology h0 = cohomology(c, 0);
    Cohomology h1 = cohomology(c, 1);
    CHECK(h0.dim() == 1);
    CHECK(h1.dim() == 1);

    Complex acyclic = two_term(Field::rationals(), 0, 2);
    Cohomology a1 = cohomology(acyclic, 1);
    CHECK(a1.dim() == 0);
    CHECK(a1.is_boundary(SparseVec::unit(Field::rationals(), 0)));
}

TEST_CASE("strict cohomology refuses uncertified degrees")
{
    Field f = Field::prime(3);
    Complex c = two_term(f, 0, 1).with_cert(Certification::range(0, 1));
    CHECK_THROWS_AS(cohomology(c, 1), WindowError);
    CHECK_NOTHROW(cohomology(c, 1, Certify::relaxed));
    Complex d = Complex(f, 0, {1, 1, 1}, {Matrix(1, 1, f), Matrix(1, 1, f)}).with_cert(Certification::range(0, 2));
    CHECK(cohomology_dim(d, 1) == 1);
}

TEST_CASE("representative lift decomposes cycles")
{
    std::mt19937 rng(5);
    for (Field f : test_fields()) {
        for (int trial = 0; trial < 20; ++trial) {
            Complex c = random_complex(rng, f, 0, 4, 3);
            for (int n = 0; n <= 3; ++n) {
                Cohomology h = cohomology(c, n);
                CHECK(h.dim() == cohomology_dim(c, n));
                Matrix z = h.cycle_basis();
                std::uniform_int_distribution<long> val(-3, 3);
                SparseVec v(f);
                for (int j = 0; j < z.cols(); ++j)
                    v.axpy(Scalar(f, val(rng)), z.column(j));
                auto l = h.lift(v);
                REQUIRE(l);
                SparseVec back = l->coboundary;
                for (const auto& t : l->coeffs.terms())
                    back.axpy(t.coeff, h.representatives().column(t.index));
                CHECK(back == v);
                Matrix b = Matrix::from_columns(c.dim(n), f, {l->coboundary});
                CHECK(solve(c.diff(n - 1), b).has_value());
                if (c.dim(n) > 0 && !c.diff(n).column(0).is_zero())
                    CHECK_FALSE(h.lift(SparseVec::unit(f, 0)));
            }
        }
    }
}

TEST_CASE("cone long exact sequence rank identity")
{
    std::mt19937 rng(2024);
    for (Field f : test_fields()) {
        for (int trial = 0; trial < 100; ++trial) {
            auto m = ptr(random_complex(rng, f, 0, 3));
            auto n = ptr(random_complex(rng, f, 0, 3));
            ChainMap g = random_chain_map(rng, m, n);
            Complex c = cone(g).cone;
            for (int k = -2; k <= 3; ++k) {
                Cohomology hn = cohomology(*n, k), hm = cohomology(*m, k);
                Cohomology hn1 = cohomology(*n, k + 1), hm1 = cohomology(*m, k + 1);
                int r0 = rank(cohomology_map(g, hm, hn));
                int r1 = rank(cohomology_map(g, hm1, hn1));
                CHECK(cohomology_dim(c, k) - hn.dim() - hm1.dim() + r0 + r1 == 0);
            }
        }
    }
}

TEST_CASE("hom complex examples")
{
    Field f = Field::prime(3);
    Complex k = Complex::concentrated(f, 0, 1);
    Complex kk = hom_complex(k, k).complex;
    CHECK(kk.dim(0) == 1);
    CHECK(kk.total_dim() == 1);
    Complex k1 = hom_complex(shift(k, 1), k).complex;
    CHECK(k1.dim(1) == 1);
    CHECK(k1.total_dim() == 1);

    Complex a = two_term(f, 0, 1), b = two_term(f, -1, 2);
    Complex h = hom_complex(a, b).complex;
    CHECK(total_cohomology(h) == 0);
}

TEST_CASE("hom from the ground field is the identity functor")
{
    std::mt19937 rng(8);
    for (Field f : test_fields()) {
        Complex k = Complex::concentrated(f, 0, 1);
        for (int trial = 0; trial < 10; ++trial) {
            Complex c = random_complex(rng, f, -1, 4);
            Complex h = hom_complex(k, c).complex;
            for (int n = c.lo() - 1; n <= c.hi(); ++n) {
                CHECK(h.dim(n) == c.dim(n));
                CHECK(h.diff(n) == c.diff(n));
            }
        }
    }
}

TEST_CASE("hom between zero-differential complexes")
{
    std::mt19937 rng(9);
    std::uniform_int_distribution<int> piece(0, 2);
    Field f = Field::prime(7);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<int> dm(3), dn(4);
        for (int& d : dm)
            d = piece(rng);
        for (int& d : dn)
            d = piece(rng);
        Complex m(f, -1, dm, {}), n(f, 0, dn, {});
        Complex h = hom_complex(m, n).complex;
        for (int t = -3; t <= 6; ++t) {
            int expect = 0;
            for (int i = -1; i <= 1; ++i)
                expect += m.dim(i) * n.dim(i + t);
            CHECK(cohomology_dim(h, t) == expect);
        }
    }
}

TEST_CASE("hom complex cohomology matches chain maps modulo homotopy")
{
    // H^0 Hom(m, n) over a field is the sum of Hom(H^i m, H^i n).
    std::mt19937 rng(77);
    for (Field f : test_fields()) {
        for (int trial = 0; trial < 10; ++trial) {
            Complex m = random_complex(rng, f, 0, 3), n = random_complex(rng, f, 0, 3);
            Complex h = hom_complex(m, n).complex;
            for (int t = -2; t <= 2; ++t) {
                int expect = 0;
                for (int i = -1; i <= 3; ++i)
                    expect += cohomology_dim(m, i) * cohomology_dim(n, i + t);
                CHECK(cohomology_dim(h, t) == expect);
            }
        }
    }
}

TEST_CASE("two-term totalization equals the cocone")
{
    std::mt19937 rng(31);
    for (Field f : test_fields()) {
        for (int trial = 0; trial < 10; ++trial) {
            auto j0 = ptr(random_complex(rng, f, 0, 3));
            auto j1 = ptr(random_complex(rng, f, 0, 3));
            ChainMap d = random_chain_map(rng, j0, j1);
            Totalization t = totalize({*j0, *j1}, {d}, 0);
            Complex cc = cocone(d).cone;
            for (int k = std::min(t.total.lo(), cc.lo()); k <= std::max(t.total.hi(), cc.hi()); ++k) {
                CHECK(t.total.dim(k) == cc.dim(k));
                CHECK(t.total.diff(k) == cc.diff(k));
            }
            // index 1 flips the prefactor, which changes no cohomology
            Totalization t1 = totalize({*j0, *j1}, {d}, 1);
            for (int k = -1; k <= 4; ++k)
                CHECK(cohomology_dim(t1.total, k) == cohomology_dim(cc, k));
        }
    }
}

TEST_CASE("one-term totalization is the term with augmentation lambda")
{
    Field f = Field::prime(2);
    auto m = ptr(Complex::concentrated(f, 0, 1));
    auto j = ptr(two_term(f, 0, 0));
    ChainMap lambda(m, j, 0, {Matrix::from_ints(f, {{1}})});
    Totalization t = totalize({*j}, {}, 0, lambda);
    CHECK(t.total == *j);
    REQUIRE(t.augmentation);
    CHECK(t.augmentation->at(0) == lambda.at(0));
}

TEST_CASE("totalize rejects nonzero composites")
{
    Field f = Field::rationals();
    auto k = ptr(Complex::concentrated(f, 0, 1));
    ChainMap id = ChainMap::identity(k);
    CHECK_THROWS_AS(totalize({*k, *k, *k}, {id, id}, 0), VerificationError);
    CHECK_THROWS_AS(totalize({*k, *k}, {}, 0), DimensionMismatch);
}
