#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "dgforge/error.hpp"
#include "dgforge/linalg.hpp"

using namespace dgforge;

namespace {

Matrix random_matrix(std::mt19937& rng, Field f, int rows, int cols, int density_pct)
{
    std::uniform_int_distribution<int> pct(0, 99);
    std::uniform_int_distribution<long> val(-3, 3);
    Matrix m(rows, cols, f);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            if (pct(rng) < density_pct)
                m.add_to(i, j, Scalar(f, val(rng)));
    return m;
}

// Size of the row space over F_p by exhaustive enumeration of combinations.
int enumerated_rank(const Matrix& m)
{
    std::uint32_t p = m.field().characteristic();
    std::set<std::vector<std::uint32_t>> span;
    std::vector<std::uint32_t> coeffs(m.rows(), 0);
    while (true) {
        std::vector<std::uint32_t> v(m.cols(), 0);
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j)
                v[j] = static_cast<std::uint32_t>((v[j] + std::uint64_t(coeffs[i]) * m.at(i, j).residue()) % p);
        span.insert(v);
        int k = 0;
        while (k < m.rows() && ++coeffs[k] == p)
            coeffs[k++] = 0;
        if (k == m.rows())
            break;
    }
    int r = 0;
    std::size_t size = span.size();
    while (size > 1) {
        size /= p;
        ++r;
    }
    return r;
}

} // namespace

TEST_CASE("scalar arithmetic stays normalized")
{
    Field q = Field::rationals();
    Scalar a = Scalar::ratio(q, 6, -4);
    CHECK(a.to_string() == "-3/2");
    CHECK((a * Scalar(q, 2L)).to_string() == "-3");
    Field f5 = Field::prime(5);
    CHECK(Scalar(f5, -1L).residue() == 4);
    CHECK((Scalar(f5, 3L) * Scalar(f5, 2L).inverse()).residue() == 4);
    CHECK(Scalar::parse(f5, "1/2").residue() == 3);
    CHECK_THROWS_AS(Scalar(f5, 1L) + Scalar(q, 1L), FieldMismatch);
    CHECK_THROWS(Field::prime(4));
}

TEST_CASE("rank examples")
{
    Field f5 = Field::prime(5);
    CHECK(rank(Matrix::identity(2, f5)) == 2);
    CHECK(rank(Matrix::zero(3, 4, Field::rationals())) == 0);
    CHECK(rank(Matrix::from_ints(Field::rationals(), {{1, 2}, {2, 4}})) == 1);
}

TEST_CASE("mixed field tags are rejected")
{
    Field f2 = Field::prime(2);
    std::vector<Entry> e{{0, 0, Scalar::one(f2)}, {1, 1, Scalar::one(Field::prime(3))}};
    CHECK_THROWS_AS(Matrix::from_entries(2, 2, f2, e), FieldMismatch);
    CHECK_THROWS_AS(solve(Matrix::identity(2, f2), Matrix::identity(2, Field::prime(3))), FieldMismatch);
}

TEST_CASE("kernel examples")
{
    Field f2 = Field::prime(2);
    CHECK(kernel_basis(Matrix::identity(3, f2)).cols() == 0);
    Matrix z = kernel_basis(Matrix::zero(3, 3, f2));
    CHECK(z.cols() == 3);
    CHECK(rank(z) == 3);
    Matrix k = kernel_basis(Matrix::from_ints(f2, {{1, 1}}));
    REQUIRE(k.cols() == 1);
    CHECK(k == Matrix::from_ints(f2, {{1}, {1}}));
}

TEST_CASE("solve examples")
{
    Field q = Field::rationals();
    Matrix b = Matrix::from_ints(q, {{4, 1}, {-2, 7}});
    CHECK(*solve(Matrix::identity(2, q), b) == b);
    auto x = solve(Matrix::from_ints(q, {{2}}), Matrix::from_ints(q, {{3}}));
    REQUIRE(x);
    CHECK(x->at(0, 0) == Scalar::ratio(q, 3, 2));
    CHECK_FALSE(solve(Matrix::from_ints(q, {{1, 0}, {0, 0}}), Matrix::from_ints(q, {{0}, {1}})));
    CHECK_THROWS_AS(solve(Matrix::identity(2, q), Matrix::identity(3, q)), DimensionMismatch);
}

TEST_CASE("complement examples")
{
    Field f2 = Field::prime(2);
    Matrix c = complement_basis(Matrix::from_ints(f2, {{1}, {0}}), 2);
    REQUIRE(c.cols() == 1);
    CHECK(rank(Matrix::hstack(Matrix::from_ints(f2, {{1}, {0}}), c)) == 2);
    CHECK(complement_basis(Matrix(3, 0, f2), 3) == Matrix::identity(3, f2));
    Matrix d = complement_basis(Matrix::from_ints(f2, {{1}, {1}}), 2);
    REQUIRE(d.cols() == 1);
    bool is_e1 = d == Matrix::from_ints(f2, {{1}, {0}});
    bool is_e2 = d == Matrix::from_ints(f2, {{0}, {1}});
    CHECK((is_e1 || is_e2));
    CHECK_THROWS_AS(complement_basis(Matrix::from_ints(f2, {{1, 1}, {0, 0}}), 2), DependentColumns);
}

TEST_CASE("rank-nullity, kernel and transpose invariants on random matrices")
{
    std::mt19937 rng(20261016);
    for (Field f : {Field::prime(2), Field::prime(3), Field::prime(7), Field::rationals()}) {
        for (int trial = 0; trial < 60; ++trial) {
            int r = 1 + trial % 9, c = 1 + (trial * 7) % 11;
            Matrix m = random_matrix(rng, f, r, c, trial % 2 ? 20 : 60);
            Matrix k = kernel_basis(m);
            CHECK(rank(m) + k.cols() == m.cols());
            CHECK((m * k).is_zero());
            CHECK(rank(m) == rank(m.transpose()));
            Matrix b = m * random_matrix(rng, f, c, 2, 50);
            auto x = solve(m, b);
            REQUIRE(x);
            CHECK(m * *x == b);
        }
    }
}

TEST_CASE("sparse and dense elimination give the same reduced form")
{
    std::mt19937 rng(7);
    Field f = Field::prime(3);
    for (int trial = 0; trial < 30; ++trial) {
        Matrix sparse = random_matrix(rng, f, 12, 15, 10);
        // Padding with a dense block pushes the density over the threshold.
        Matrix dense_block = random_matrix(rng, f, 12, 15, 90);
        Matrix stacked = Matrix::vstack(sparse, Matrix(12, 15, f));
        CHECK(row_echelon(stacked).rref == row_echelon(sparse).rref);
        Matrix both = Matrix::vstack(sparse, dense_block);
        CHECK(both.density() > 0.25);
        Matrix via_rows = Matrix::vstack(row_echelon(sparse).rref, dense_block);
        CHECK(row_echelon(both).rref == row_echelon(via_rows).rref);
    }
}

TEST_CASE("rank over F_p agrees with exhaustive row-space enumeration")
{
    std::mt19937 rng(99);
    for (std::uint32_t p : {2u, 3u}) {
        Field f = Field::prime(p);
        for (int trial = 0; trial < 40; ++trial) {
            Matrix m = random_matrix(rng, f, 1 + trial % 5, 1 + trial % 4, 50);
            CHECK(rank(m) == enumerated_rank(m));
        }
    }
}

TEST_CASE("span reducer expresses members through tags")
{
    Field q = Field::rationals();
    SpanReducer sr(q, 3);
    SparseVec a(q), b(q);
    a.add(0, Scalar(q, 1L));
    a.add(1, Scalar(q, 2L));
    b.add(1, Scalar(q, 1L));
    CHECK(sr.insert(a, 10));
    CHECK(sr.insert(b, 20));
    CHECK_FALSE(sr.insert(a + b, 30));
    SparseVec target = a.scaled(Scalar(q, 3L)) - b;
    auto c = sr.express(target);
    REQUIRE(c);
    CHECK(c->coeff(10) == Scalar(q, 3L));
    CHECK(c->coeff(20) == Scalar(q, -1L));
    CHECK_FALSE(sr.express(SparseVec::unit(q, 2)));
}
