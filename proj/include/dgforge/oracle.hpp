#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dgforge/dgalgebra.hpp"

// Brute-force ground truth over prime fields. Nothing here calls into the
// Matrix/linalg code: entries are read out once and everything afterwards is
// dense arithmetic mod p with a plain Gauss-Jordan.
namespace dgforge::oracle {

using Vec = std::vector<std::uint32_t>;

struct Mat {
    int p = 2;
    int rows = 0;
    int cols = 0;
    std::vector<std::uint32_t> a; // row-major

    Mat() = default;
    Mat(int p, int rows, int cols);
    static Mat identity(int p, int n);

    std::uint32_t& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    std::uint32_t at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
    Vec column(int c) const;
    Vec apply(const Vec& v) const;
    bool is_zero() const;

    Mat operator*(const Mat& o) const;
    Mat operator+(const Mat& o) const;
    Mat operator-(const Mat& o) const;
    friend bool operator==(const Mat& x, const Mat& y) { return x.rows == y.rows && x.cols == y.cols && x.a == y.a; }
};

int rank(Mat m);
// Basis of {x : m x = 0}.
std::vector<Vec> kernel(Mat m);
std::optional<Vec> solve(const Mat& m, const Vec& b);
// Columns as a matrix with `rows` rows.
Mat from_columns(int p, int rows, const std::vector<Vec>& cols);

// Reads the entries of a library matrix / vector (prime fields only).
Mat read(const Matrix& m);
Vec read(const SparseVec& v, int dim);

struct FiniteAlgebra {
    int p = 2;
    int dim = 0;
    std::vector<std::string> names;
    std::vector<std::vector<Vec>> mult; // mult[x][y] = e_x e_y
    Vec unit;

    Vec product(const Vec& x, const Vec& y) const;
    // Associativity and the unit; throws VerificationError.
    void validate() const;
};
FiniteAlgebra finite_algebra(const OrdinaryAlgebraPresentation& pres);
FiniteAlgebra finite_algebra(const DgAlgebra& a);
OrdinaryAlgebraPresentation presentation(const FiniteAlgebra& a);

// f is a unital multiplicative bijection a -> b.
bool is_algebra_iso(const FiniteAlgebra& a, const FiniteAlgebra& b, const Mat& f);

// Right module: column i of action[x] holds e_i . e_x, hence
// action[y] * action[x] = action of e_x e_y.
struct FiniteModuleTable {
    int p = 2;
    int dim = 0;
    std::vector<Mat> action;

    Mat act(const Vec& a) const;
    // Throws VerificationError when the action does not respect r.
    void validate(const FiniteAlgebra& r) const;
};
// An ordinary module over an ordinary algebra, concentrated in one degree.
FiniteModuleTable module_table(const DgModule& m);
FiniteModuleTable regular_table(const FiniteAlgebra& r);
// Hom_k(R, k) with (f.a)(b) = f(ab).
FiniteModuleTable dual_table(const FiniteAlgebra& r);
FiniteModuleTable direct_sum(const FiniteModuleTable& x, const FiniteModuleTable& y);

// Largest n with p^n <= 256, so 8 over F_2.
int default_dim_cap(int p);

struct OracleOptions {
    std::optional<int> dim_cap;
    // Centralizers are found by listing all p^(n^2) maps up to this count,
    // and by solving the commutation equations above it.
    std::uint64_t enumeration_limit = std::uint64_t{1} << 18;
};

struct Centralizer {
    std::vector<Mat> basis;
    bool enumerated = false;
    std::uint64_t commuting = 0; // number of commuting maps when enumerated
};
// n x n matrices commuting with every op.
Centralizer centralizer(const std::vector<Mat>& ops, int p, int n, std::uint64_t enumeration_limit);

// E = End_R(J)^op, e1 * e2 = e2 o e1.
struct ClassicalEnd {
    FiniteAlgebra algebra;
    std::vector<Mat> maps;
    bool enumerated = false;
};
ClassicalEnd classical_endomorphisms(const FiniteAlgebra& r, const FiniteModuleTable& j, OracleOptions options = {});

// Bic = End_E(J)^op with unit a -> (m -> m a).
struct ClassicalBic {
    ClassicalEnd e;
    FiniteAlgebra algebra;
    std::vector<Mat> maps;
    bool enumerated = false;
    Mat unit_map; // dim Bic x dim R
    bool unit_injective = false;
    bool unit_surjective = false;
    bool unit_multiplicative = false;
    bool holds() const { return unit_injective && unit_surjective; }
};
ClassicalBic classical_bicommutator(const FiniteAlgebra& r, const FiniteModuleTable& j, OracleOptions options = {});

// d[i] : C^{lo+i} -> C^{lo+i+1}; missing trailing maps are zero.
struct RawComplex {
    int p = 2;
    int lo = 0;
    std::vector<int> dims;
    std::vector<Mat> d;

    int hi() const { return lo + static_cast<int>(dims.size()) - 1; }
    int total_dim() const;
};
RawComplex raw_complex(const Complex& c);

// Cohomology dimension per degree by naive ranks. Throws CapExceeded above
// total dimension `cap`, VerificationError when d^2 != 0.
std::map<int, int> direct_cohomology(const RawComplex& c, int cap = 64);

// Hom_A(M, N) from scratch: degree-t k-linear maps with f(m a) = f(m) a and
// d f = d_N f - (-1)^t f d_M. Throws CapExceeded when dim M * dim N > cap.
RawComplex hom_complex(const DgModule& m, const DgModule& n, int cap = 4096);

// Ranks b_0..b_length of a minimal free resolution of j over a local algebra
// whose radical is spanned by rad.
std::vector<int> minimal_betti(const FiniteAlgebra& r, const std::vector<Vec>& rad, const FiniteModuleTable& j,
                               int length);

} // namespace dgforge::oracle
