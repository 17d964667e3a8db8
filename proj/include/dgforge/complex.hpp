#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "dgforge/linalg.hpp"

namespace dgforge {

// Requested degree range; data is carried on [lo - margin, hi + margin].
struct Window {
    int lo = 0;
    int hi = 0;
    int margin = 0;

    Window() = default;
    Window(int lo_, int hi_, int margin_ = 0);
    int padded_lo() const { return lo - margin; }
    int padded_hi() const { return hi + margin; }
    bool contains(int n) const { return lo <= n && n <= hi; }
};

// Degrees in which a finite complex agrees with the (possibly unbounded)
// object it stands for. A complete complex is exact everywhere.
struct Certification {
    int lo = std::numeric_limits<int>::min() / 4;
    int hi = std::numeric_limits<int>::max() / 4;
    bool complete = true;

    static Certification everywhere() { return {}; }
    static Certification range(int lo, int hi) { return {lo, hi, false}; }
    static Certification none() { return {1, 0, false}; }
    bool faithful(int n) const { return complete || (lo <= n && n <= hi); }
    bool empty() const { return !complete && lo > hi; }
    Certification shifted(int s) const;
    friend Certification intersect(const Certification& a, const Certification& b);
};

// Cochain complex of finite-dimensional spaces, d^n : C^n -> C^{n+1}.
// Pieces outside [lo, hi] are zero.
class Complex {
public:
    Complex() = default;
    // diffs[i] is the differential leaving degree lo + i, of shape
    // dims[i+1] x dims[i]; the last one may be omitted. Verifies d^2 = 0.
    Complex(Field f, int lo, std::vector<int> dims, std::vector<Matrix> diffs,
            Certification cert = Certification::everywhere());

    static Complex zero(Field f) { return Complex(f, 0, {}, {}); }
    static Complex concentrated(Field f, int degree, int dim);

    Field field() const { return field_; }
    int lo() const { return lo_; }
    int hi() const { return lo_ + static_cast<int>(dims_.size()) - 1; }
    int dim(int n) const;
    int total_dim() const;
    // Zero matrix of the right shape outside the stored range.
    Matrix diff(int n) const;
    const Certification& cert() const { return cert_; }
    Complex with_cert(Certification c) const;
    // Cohomology at n is faithful when n-1, n, n+1 are.
    bool certified_at(int n) const { return cert_.faithful(n - 1) && cert_.faithful(n) && cert_.faithful(n + 1); }

    friend bool operator==(const Complex& a, const Complex& b);

private:
    Field field_;
    int lo_ = 0;
    std::vector<int> dims_;
    std::vector<Matrix> diffs_;
    Certification cert_;
};

using ComplexPtr = std::shared_ptr<const Complex>;

// Degree-0 morphism of complexes; verified against both differentials.
class ChainMap {
public:
    ChainMap() = default;
    ChainMap(ComplexPtr source, ComplexPtr target, int lo, std::vector<Matrix> components);
    static ChainMap zero(ComplexPtr source, ComplexPtr target);
    static ChainMap identity(ComplexPtr c);

    const Complex& source() const { return *source_; }
    const Complex& target() const { return *target_; }
    ComplexPtr source_ptr() const { return source_; }
    ComplexPtr target_ptr() const { return target_; }
    // dims_target(n) x dims_source(n); zero outside the stored range.
    Matrix at(int n) const;

    ChainMap compose_after(const ChainMap& first) const; // this o first

private:
    ComplexPtr source_;
    ComplexPtr target_;
    int lo_ = 0;
    std::vector<Matrix> components_;
};

// (c[s])^n = c^{n+s}, differential multiplied by (-1)^s.
Complex shift(const Complex& c, int s);
Complex direct_sum(const Complex& a, const Complex& b);

struct ConeResult {
    Complex cone;
    ChainMap inclusion;  // N -> c(f)        (1, 0)^t
    ChainMap projection; // c(f) -> M[1]     (0, 1)
};

// c(f) = (N + M[1], [[d_N, f], [0, -d_M]]) for f : M -> N.
ConeResult cone(const ChainMap& f);
// cc(f) = (N[-1] + M, [[-d_N, f], [0, d_M]]).
ConeResult cocone(const ChainMap& f);

// Hom over the ground field: degree t piece is the sum over i of
// Hom(m^i, n^{i+t}), each block flattened row-major; d(f) = d f - (-1)^t f d.
struct HomLayout {
    struct Block {
        int source_degree;
        int offset;
        int rows; // dim n^{i+t}
        int cols; // dim m^i
    };
    std::vector<std::vector<Block>> blocks; // indexed by t - lo
    int lo = 0;
};

struct HomComplex {
    Complex complex;
    HomLayout layout;
    // Matrix of a homogeneous element of degree t restricted to source degree i.
    Matrix block(const SparseVec& element, int t, int i) const;
};

HomComplex hom_complex(const Complex& m, const Complex& n);
// Certified degrees of Hom(m, n) among [lo, hi], from the inputs' certifications.
Certification hom_certification(const Complex& m, const Complex& n, int lo, int hi);

enum class Certify { strict, relaxed };

// Cohomology at one degree with chosen representatives.
class Cohomology {
public:
    int degree() const { return degree_; }
    int dim() const { return reps_.cols(); }
    const Matrix& cycle_basis() const { return cycles_; }
    const Matrix& representatives() const { return reps_; }
    // Writes a cycle as (coboundary) + sum coeff_i rep_i; nullopt if z is
    // not a cycle.
    struct Lift {
        SparseVec coeffs;    // over representatives
        SparseVec coboundary; // z - sum coeff_i rep_i, lies in the image of d
    };
    std::optional<Lift> lift(const SparseVec& z) const;
    bool is_boundary(const SparseVec& z) const;

private:
    friend Cohomology cohomology(const Complex&, int, Certify);
    int degree_ = 0;
    Matrix cycles_;
    Matrix reps_;
    int boundary_rank_ = 0;
    std::shared_ptr<SpanReducer> reducer_; // boundaries tagged < 0, reps tagged by index
    Matrix differential_; // d^n, to test the cycle condition
};

Cohomology cohomology(const Complex& c, int n, Certify mode = Certify::strict);
// Just the dimension: dim ker d^n - rank d^{n-1}.
int cohomology_dim(const Complex& c, int n, Certify mode = Certify::strict);

// H^n(f) in representative coordinates.
Matrix cohomology_map(const ChainMap& f, const Cohomology& source, const Cohomology& target);

// Totalization of J^n -> J^{n+1} -> ... -> J^m (each delta a ChainMap between
// consecutive terms, consecutive composites zero). Underlying module
// J^m[-(m-n)] + ... + J^{n+1}[-1] + J^n (blocks in that order), differential
// (-1)^n times the matrix with diagonal (-1)^{k-n} d_{J^k} and delta^k above
// the diagonal.
struct Totalization {
    Complex total;
    int first_index = 0;              // n
    std::vector<std::vector<int>> offsets; // offsets[k - n][degree - total.lo()] of block k
    // pi = (0, ..., 0, lambda)^t when an augmentation lambda: M -> J^n is given.
    std::optional<ChainMap> augmentation;
};

Totalization totalize(const std::vector<Complex>& terms, const std::vector<ChainMap>& deltas, int first_index,
                      const std::optional<ChainMap>& lambda = std::nullopt);

} // namespace dgforge
