#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "dgforge/complex.hpp"

namespace dgforge {

struct BasisElement {
    std::string name;
    int degree = 0;
};

// Bilinear structure constants (i, j) -> vector, storing only nonzero values.
class StructureTable {
public:
    StructureTable() = default;
    StructureTable(int rows, int cols, Field f);
    int rows() const { return static_cast<int>(rows_.size()); }
    int cols() const { return cols_; }
    const SparseVec& at(int i, int j) const;
    void set(int i, int j, SparseVec v);
    // nonzero entries of row i, sorted by column
    const std::vector<std::pair<int, SparseVec>>& row(int i) const { return rows_[i]; }

private:
    int cols_ = 0;
    SparseVec zero_;
    std::vector<std::vector<std::pair<int, SparseVec>>> rows_;
};

// Homogeneous basis with per-degree local numbering.
class GradedBasis {
public:
    GradedBasis() = default;
    explicit GradedBasis(std::vector<int> degrees);
    int size() const { return static_cast<int>(degrees_.size()); }
    int degree(int i) const { return degrees_[i]; }
    int local(int i) const { return local_[i]; }
    int lo() const { return lo_; }
    int hi() const { return hi_; }
    int dim(int n) const;
    const std::vector<int>& in_degree(int n) const;
    // Degree-n components of a global vector, in local coordinates.
    SparseVec to_local(const SparseVec& v, int n) const;
    SparseVec to_global(const SparseVec& v, int n) const;
    // Degree of a nonzero homogeneous vector; throws if inhomogeneous.
    int degree_of(const SparseVec& v) const;
    Complex complex(Field f, const std::vector<SparseVec>& diff, Certification cert = Certification::everywhere()) const;

private:
    std::vector<int> degrees_;
    std::vector<int> local_;
    std::vector<std::vector<int>> by_degree_;
    int lo_ = 0;
    int hi_ = -1;
};

enum class Verify { automatic, full, sampled };

// Finite dimensional dg-algebra: structure constants, unit, differential.
// Construction verifies associativity, unitality, Leibniz and d^2 = 0;
// exhaustively on small algebras, otherwise on 64 seeded random triples.
class DgAlgebra {
public:
    DgAlgebra(Field f, std::vector<BasisElement> basis, StructureTable mult, SparseVec unit,
              std::vector<SparseVec> diff = {}, Verify mode = Verify::automatic);

    Field field() const { return field_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    const BasisElement& basis(int i) const { return basis_[i]; }
    int index_of(const std::string& name) const;
    const GradedBasis& grading() const { return grading_; }
    int degree(int i) const { return basis_[i].degree; }

    const SparseVec& product(int i, int j) const { return mult_.at(i, j); }
    SparseVec multiply(const SparseVec& a, const SparseVec& b) const;
    const StructureTable& table() const { return mult_; }
    const SparseVec& unit() const { return unit_; }
    const SparseVec& diff(int i) const { return diff_[i]; }
    SparseVec differentiate(const SparseVec& a) const;
    const Complex& complex() const { return complex_; }

    bool ordinary() const; // concentrated in degree 0 with zero differential
    bool verified_exhaustively() const { return exhaustive_; }
    std::string describe(const SparseVec& v) const;

private:
    Field field_;
    std::vector<BasisElement> basis_;
    GradedBasis grading_;
    StructureTable mult_;
    SparseVec unit_;
    std::vector<SparseVec> diff_;
    Complex complex_;
    bool exhaustive_ = true;
};

using AlgebraPtr = std::shared_ptr<const DgAlgebra>;

// mult^op(a, b) = (-1)^{|a||b|} mult(b, a)
DgAlgebra opposite(const DgAlgebra& a);

// An ordinary finite dimensional algebra with an optional two-sided ideal.
struct OrdinaryAlgebraPresentation {
    Field field;
    std::vector<std::string> names;
    StructureTable mult;
    SparseVec unit;
    std::vector<SparseVec> ideal; // spanning set, may be empty

    // Checks associativity, unit and that the ideal is two-sided.
    void validate() const;
    // Basis of the ideal as columns (rref-deterministic).
    Matrix ideal_basis() const;
};

DgAlgebra embed_ordinary(const OrdinaryAlgebraPresentation& p);

// Right dg-module. Either given explicitly by an action table, or free on
// homogeneous generators with basis (g, a) at index g * dim A + a.
class DgModule {
public:
    DgModule(AlgebraPtr algebra, std::vector<BasisElement> basis, std::vector<SparseVec> diff, StructureTable action,
             Verify mode = Verify::automatic);
    // Free graded module on the generators with d(g) = generator_diffs[g]
    // (vectors in this module's basis).
    static DgModule free(AlgebraPtr algebra, std::vector<BasisElement> generators,
                         std::vector<SparseVec> generator_diffs = {});

    const AlgebraPtr& algebra() const { return algebra_; }
    Field field() const { return algebra_->field(); }
    int dim() const { return grading_.size(); }
    int degree(int i) const { return grading_.degree(i); }
    std::string name(int i) const;
    const GradedBasis& grading() const { return grading_; }
    const Complex& complex() const { return complex_; }
    const SparseVec& diff(int i) const { return diff_[i]; }
    SparseVec differentiate(const SparseVec& m) const;
    SparseVec act(int m, int a) const;
    SparseVec act(const SparseVec& m, const SparseVec& a) const;

    bool is_free() const { return free_; }
    int generator_count() const { return static_cast<int>(generators_.size()); }
    const BasisElement& generator(int g) const { return generators_[g]; }
    const SparseVec& generator_diff(int g) const { return generator_diffs_[g]; }
    int free_index(int g, int a) const { return g * algebra_->dim() + a; }
    SparseVec generator_vector(int g) const; // (g, 1)

    const Certification& cert() const { return complex_.cert(); }
    DgModule with_cert(Certification c) const;

private:
    DgModule() = default;
    void build_complex();
    void verify(Verify mode) const;

    AlgebraPtr algebra_;
    bool free_ = false;
    std::vector<BasisElement> basis_; // explicit case
    std::vector<BasisElement> generators_;
    std::vector<SparseVec> generator_diffs_;
    GradedBasis grading_;
    std::vector<SparseVec> diff_;
    StructureTable action_;
    Complex complex_;
};

using ModulePtr = std::shared_ptr<const DgModule>;

DgModule free_module(AlgebraPtr a, const std::vector<BasisElement>& generators);
// The algebra as a right module over itself.
DgModule regular_module(AlgebraPtr a);

// Homogeneous module map of degree t given on global bases; verified to be
// a cycle (d f = (-1)^t f d) and A-linear f(m a) = f(m) a.
class ModuleMap {
public:
    ModuleMap() = default;
    ModuleMap(ModulePtr source, ModulePtr target, Matrix matrix, int degree = 0, bool check = true);
    static ModuleMap identity(ModulePtr m);
    static ModuleMap zero(ModulePtr source, ModulePtr target);

    const DgModule& source() const { return *source_; }
    const DgModule& target() const { return *target_; }
    const ModulePtr& source_ptr() const { return source_; }
    const ModulePtr& target_ptr() const { return target_; }
    const Matrix& matrix() const { return matrix_; }
    int degree() const { return degree_; }
    SparseVec apply(const SparseVec& m) const { return matrix_.apply(m); }
    ModuleMap compose_after(const ModuleMap& first) const;
    // Degree-0 maps only.
    ChainMap chain_map() const;

private:
    ModulePtr source_;
    ModulePtr target_;
    Matrix matrix_;
    int degree_ = 0;
};

// Hom_A(M, N) as a complex whose elements can be evaluated.
class ModuleHom {
public:
    const Complex& complex() const { return complex_; }
    const DgModule& source() const { return *source_; }
    const DgModule& target() const { return *target_; }
    bool semifree_source() const { return fast_; }
    // f has local coordinates in degree t of complex().
    SparseVec apply(int t, const SparseVec& f, const SparseVec& m) const;
    SparseVec apply(int t, const SparseVec& f, int m) const;
    // Coordinates of the A-linear degree-t map m -> image(m); only values on
    // generators are read in the semi-free case.
    SparseVec coords(int t, const std::function<SparseVec(int)>& image) const;
    // Semi-free source only: the map is given by its values on generators.
    SparseVec coords_free(int t, const std::function<SparseVec(int)>& generator_image) const;
    // Full matrix of a degree-t element on global bases.
    Matrix matrix(int t, const SparseVec& f) const;
    ModuleMap to_map(int t, const SparseVec& f) const;
    ModuleHom with_cert(Certification c) const;

private:
    friend ModuleHom module_hom_complex(ModulePtr m, ModulePtr n);
    ModulePtr source_;
    ModulePtr target_;
    Complex complex_;
    bool fast_ = false;
    // semi-free source: offsets_[t - lo][g] into degree-t coordinates
    std::vector<std::vector<int>> offsets_;
    // general: k-linear hom layout and equivariant kernel per degree
    HomComplex khom_;
    std::vector<Matrix> kernels_;
    std::vector<std::vector<int>> free_cols_;
};

ModuleHom module_hom_complex(ModulePtr m, ModulePtr n);

// E = End_A(P)^op and P as a right E-module via p.e = (-1)^{|p||e|} e(p).
struct EndResult {
    ModuleHom hom; // Hom_A(P, P); basis of E is the basis of hom.complex()
    AlgebraPtr endo;
    ModulePtr p_over_e;
    // global E index <-> (degree, local index in hom.complex())
    SparseVec to_global(int t, const SparseVec& local) const { return endo->grading().to_global(local, t); }
};

EndResult end_dga(ModulePtr p);

// Module constructions: shift (no action sign), direct sum, cone of a
// degree-0 map, quotient by a dg-submodule.
DgModule shift_module(const DgModule& m, int s);
DgModule direct_sum_module(const DgModule& a, const DgModule& b);

struct ModuleCone {
    ModulePtr cone;
    ModuleMap inclusion;  // N -> c(f)
    ModuleMap projection; // c(f) -> M[1]
};
ModuleCone cone_module(const ModuleMap& f);

struct ModuleQuotient {
    ModulePtr quotient;
    ModuleMap projection;
    Matrix section; // columns: chosen preimages of quotient basis vectors
};
// `sub` columns span a dg-submodule (checked).
ModuleQuotient quotient_module(ModulePtr m, const Matrix& sub);

} // namespace dgforge
