#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dgforge/resolutions.hpp"

namespace dgforge {

struct BidualityOptions {
    // J is replaced by P -> J built down to degree -depth: semi-free, or
    // projective over idempotent corners when the base is ordinary with a
    // nontrivial idempotent basis set. When J has no finite resolution P is
    // a perfect truncation of it.
    int depth = 3;
    bool minimal = true;
    // E-side window: resolution degrees over E and the range of every
    // reported cohomology table.
    Window window{-6, 6};
    // Killing stages of the E-side resolutions that do not terminate.
    int stages = 7;
    // make_context throws CapExceeded when E = End(P) is larger than this.
    int max_endo_dim = 400;
};

// P -> J over the base algebra A, E = End_A(P)^op, and P as an E-module.
// The A- and E-actions on P commute (checked).
struct BidualityContext {
    AlgebraPtr base;
    ModulePtr j_module;
    SemiFreeResolution p_res;
    ModulePtr p;          // over A
    AlgebraPtr endo;      // E
    ModulePtr p_over_e;   // same basis as p
    EndResult end;
    std::vector<Matrix> e_matrices; // basis element i of E as a map P -> P
    BidualityOptions options;
    // P resolves J outright; otherwise Bic is computed for the perfect P.
    bool p_resolves_j = false;
};

BidualityContext make_context(AlgebraPtr base, ModulePtr j, BidualityOptions options = {});

// D(M) = Hom_A(P_M, P) with E acting by f.e = (-1)^{|f||e|} e o f.
struct Dual {
    SemiFreeResolution res; // P_M -> M over A
    ModuleHom hom;
    ModulePtr module;       // over E; basis degree by degree as in hom.complex()
    std::vector<Matrix> matrices; // basis element i as a map P_M -> P
    Certification cert;
};
Dual dualize(const BidualityContext& ctx, ModulePtr m);

// D'(N) = Hom_E(Q_N, P) with A acting by (h.a)(q) = h(q).a.
struct Codual {
    SemiFreeResolution res; // Q_N -> N over E
    ModuleHom hom;
    ModulePtr module;       // over A
    std::vector<Matrix> matrices; // basis element i as a map Q_N -> P
    Certification cert;
};
Codual codualize(const BidualityContext& ctx, ModulePtr n);

// S(M) = D'D(M) with the evaluation eps: P_M -> S(M),
// eps(x)(f) = (-1)^{|x||f|} f(x).
struct Bidual {
    Dual d;
    Codual s;
    ModuleMap epsilon;
    // Degrees where H(P_M) = H(M) and S(M) is faithful.
    Certification cert;
};
Bidual biduality_map(const BidualityContext& ctx, ModulePtr m);

// S(f) : S(M) -> S(M') for f : M -> M', through lifts to the resolutions.
ModuleMap bidual_morphism(const BidualityContext& ctx, const ModuleMap& f, const Bidual& source, const Bidual& target);

struct DegreeRow {
    int degree = 0;
    int source_dim = 0;
    int target_dim = 0;
    int rank = 0;
    bool iso() const { return source_dim == target_dim && rank == target_dim; }
};

enum class Verdict { iso, not_iso, inconclusive_window };
std::string to_string(Verdict v);

struct QisReport {
    Verdict verdict = Verdict::inconclusive_window;
    std::vector<DegreeRow> rows; // certified degrees only
};

// H(f) in the degrees of [lo, hi] where both complexes are certified and
// `cert` is faithful at n-1, n, n+1.
QisReport cohomology_iso(const ChainMap& f, int lo, int hi, const Certification& cert);

// eps_M: P_M -> S(M) on cohomology, within the context window.
QisReport epsilon_check(const BidualityContext& ctx, const Bidual& b);

// eps'_N: N -> D D'(N) for N free over E with ordered generators (a
// perfect module given by its generators and differentials).
QisReport counit_check(const BidualityContext& ctx, ModulePtr n);

// Free E-modules for counit checks: E[s], and the cone of a map between
// free modules, again free.
ModulePtr free_shift(const BidualityContext& ctx, int s);
ModulePtr free_cone(const ModuleMap& f);

// Hom_E(N, D M) -> Hom_A(P_M, D'N), f |-> (x |-> (n |-> (-1)^{|x||n|} f(n)(x))),
// for N free over E. Reports whether it is a bijective chain map in every
// degree of the window.
struct AdjunctionReport {
    bool chain_map = false;
    bool bijective = false;
    std::vector<std::pair<int, int>> dims; // degree, dimension on both sides
};
AdjunctionReport adjunction_check(const BidualityContext& ctx, ModulePtr n, ModulePtr m);

// Target of the algebra comparison: an algebra T with an algebra map
// comp : H^0(A) -> T (matrix dim T x dim H^0(A), on the H^0(A) basis used
// by the unit).
struct BicTarget {
    AlgebraPtr algebra;
    Matrix comp;
};

struct BicDegree {
    int degree = 0;
    int dim = 0;
    bool stable = false;    // the limit over stages has settled
    bool certified = false;
    bool boundary_suspect = false;
    int base = 0;           // stage the limit was read in
};

// Bic_A(J) = REnd_E(P)^op. Over E that is not connective the resolution
// Q -> P does not terminate; Q_s denotes the part built in s stages and
// H^t(Bic) is the limit of H^t Hom_E(Q_s, P), read off as the image of
// the last stage inside the deepest base stage b where that image equals
// the image of the stage before last and of stage b - 1.
struct BicResult {
    Complex bic_complex; // Hom_E(Q_last, P)
    std::map<int, BicDegree> table;
    int stages = 0;
    int base_stage = 0;
    bool resolution_terminated = false;
    std::string scheme = "projective";

    Matrix unit_matrix; // H^0(A) -> H^0(Bic), on the stable-image basis
    bool unit_injective = false;
    bool unit_surjective = false;
    bool higher_vanishing = false; // H^t = 0 for certified 1 <= t (non-suspect)
    bool concentrated = false;     // H^t = 0 for every certified t != 0

    AlgebraPtr h0_algebra;     // null when products could not be formed
    std::string h0_note;       // why it was skipped
    bool unit_multiplicative = false;
    bool product_well_defined = false;

    std::optional<bool> target_iso;
    std::string target_note;

    int dim(int t) const;
    Verdict verdict() const;
};

BicResult bicommutator(const BidualityContext& ctx, const std::optional<BicTarget>& target = std::nullopt);

// S(M) against the limit of S(I^n) over the totalizations of the tower.
struct HolimReport {
    Verdict verdict = Verdict::inconclusive_window;
    int length = 0;
    // degree -> (dim H^t S(M), dim of the limit, rank of the comparison)
    std::map<int, std::tuple<int, int, int>> rows;
};
HolimReport holim_tower_check(const BidualityContext& ctx, ModulePtr m, const CoresolutionTower& tower);

} // namespace dgforge
