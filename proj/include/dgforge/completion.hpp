#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dgforge/biduality.hpp"

namespace dgforge {

// Bases (as columns in R) of a, a^2, ..., stopping at n_max or at the first
// zero power. Throws VerificationError naming a product that leaves the span
// when a is not a two-sided ideal. R must be ordinary.
struct IdealPowers {
    std::vector<Matrix> powers; // powers[n - 1] spans a^n
    std::optional<int> nilpotency_index; // least N with a^N = 0
    int dim(int n) const { return powers[n - 1].cols(); }
};
IdealPowers ideal_powers(const DgAlgebra& r, const Matrix& a_span, int n_max);

// R/I with basis the standard basis vectors of R outside I (greedy, lowest
// index first) and the projection R -> R/I.
struct QuotientAlgebra {
    AlgebraPtr algebra;
    Matrix projection; // dim R/I x dim R
    Matrix section;    // dim R x dim R/I, the chosen basis vectors
};
QuotientAlgebra quotient_algebra(AlgebraPtr r, const Matrix& ideal);

struct AdicTower {
    AlgebraPtr base;
    Matrix ideal;
    std::vector<QuotientAlgebra> stages; // stages[n - 1] = R/a^n
    std::optional<int> stabilized_at;    // least n with a^n = a^{n+1}
    int size() const { return static_cast<int>(stages.size()); }
    // R/a^m -> R/a^n for m >= n
    Matrix phi(int m, int n) const;
};
// Stages up to n_max, or up to the stabilization index when that comes
// first. Coherence of the projections is checked.
AdicTower adic_tower(AlgebraPtr r, const Matrix& a_span, int n_max);

struct InverseLimit {
    AlgebraPtr algebra;              // the last stage once stable
    int stage = 0;
    Matrix comp;                     // R -> limit
    std::vector<Matrix> projections; // limit -> R/a^n, n = 1..size
};
// Throws WindowError when the tower has not stabilized.
InverseLimit inverse_limit(const AdicTower& t);

// K(R; a_1..a_r): free on e_S for S a subset of {1..r}, degree -|S|, with
// d e_S = sum_j (-1)^{j-1} e_{S - s_j} a_{s_j} over S = {s_1 < ... < s_k}.
// Generators are ordered by |S|, then by the bit pattern of S.
struct KoszulComplex {
    AlgebraPtr base;
    std::vector<SparseVec> elements;
    ModulePtr module;
};
// Throws VerificationError naming an element that is not central.
KoszulComplex koszul_complex(AlgebraPtr r, const std::vector<SparseVec>& elements);

// Ideal generators of a, picked greedily from the columns of a_span.
std::vector<SparseVec> ideal_generators(const DgAlgebra& r, const Matrix& a_span);

struct CompletionOptions {
    BidualityOptions bic;
    int n_max = 8;
};

struct CompletionSide {
    std::string j_name;
    ModulePtr j;
    BicResult bic;
    Verdict verdict = Verdict::inconclusive_window;
};

struct CompletionReport {
    AdicTower tower;
    InverseLimit limit;
    CompletionSide quotient;              // J = R/a
    std::optional<CompletionSide> koszul; // J = K(R; generators of a)
    std::string koszul_note;              // why the Koszul side was skipped
    // H^0(Bic) for the two J choices, compared through the units
    std::optional<bool> h0_isomorphic;
    std::vector<std::string> notes;
    Verdict verdict() const;
};
// Needs R ordinary and a nilpotent (VerificationError otherwise).
CompletionReport completion_theorem_check(AlgebraPtr r, const Matrix& a_span, CompletionOptions options = {});

} // namespace dgforge
