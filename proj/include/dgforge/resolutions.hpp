#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dgforge/dgalgebra.hpp"

namespace dgforge {

// 512 unless DGFORGE_GENCAP is set to a positive integer.
int default_generator_cap();

struct ResolutionGenerator {
    std::string name;
    int degree = 0;
    int stage = 0;
};

// Semi-free P with a surjective augmentation P -> M. Generators are ordered
// so that d(g) only involves earlier generators.
struct SemiFreeResolution {
    ModulePtr module;
    ModulePtr p;
    ModuleMap augmentation;
    std::vector<ResolutionGenerator> generators;
    Window window;
    bool minimal = false;
    std::string note; // why a requested minimal resolution fell back, if it did
    int stages = 0;   // killing stages run after stage 0
    bool stopped = false; // max_stages reached with classes still to kill

    // Degrees in which H(P) -> H(M) was checked bijective. Complete when
    // the augmentation is a quasi-isomorphism outright.
    Certification exact;
    // Degrees of generators still missing are at most this (connective
    // algebras only); nullopt when P is a genuine resolution or no bound is known.
    std::optional<int> missing_bound;

    int generator_count() const { return static_cast<int>(generators.size()); }
    std::vector<int> generators_in_degree(int d) const;
    // Counts per generator degree, lowest degree first.
    std::vector<std::pair<int, int>> degree_table() const;
};

// Cone-killing resolution: generators mapping onto cocycle representatives
// and onto module generators, then generators of degree in
// [window.lo, window.hi] killing the kernel of H(P) -> H(M) until none is
// left there. With `minimal` over an ordinary local algebra and a module
// concentrated in one degree with zero differential, builds the minimal
// resolution instead; otherwise falls back and says so in `note`.
struct ResolveLimits {
    int cap = default_generator_cap();
    // Stop after this many killing stages (negative: no limit). Stopping
    // this way is not an error; `stages` and `exact` record how far it got.
    int max_stages = -1;
};

// A module that is already free on generators whose differentials only
// reach earlier generators is returned as its own resolution (identity
// augmentation, no stages).
SemiFreeResolution semifree_resolve(ModulePtr m, Window window, bool minimal = false, ResolveLimits limits = {});

// p itself with the identity augmentation; p must be free with ordered
// generator differentials.
SemiFreeResolution identity_resolution(ModulePtr p);
bool ordered_free(const DgModule& m);

// Pairwise orthogonal idempotent basis elements summing to the unit, the
// finest such set; just the unit when there is none.
std::vector<SparseVec> basis_idempotents(const DgAlgebra& a);

// Projective resolution of an ordinary module concentrated in one degree:
// level n sits in degree d0 - n and is a sum of corners e A over
// basis_idempotents, chosen greedily by rank gain. P is not free in general;
// `generators` lists the corners (stage = level). Levels stop at window.lo.
SemiFreeResolution projective_resolve(ModulePtr m, Window window, int cap = default_generator_cap());

// Degrees t in which Hom_A(P, N) computes RHom_A(M, N), given the
// resolution's exactness data.
Certification rhom_certification(const SemiFreeResolution& res, const DgModule& n);

// Hom_A(P, N) with the certification attached to its complex.
ModuleHom derived_hom(const SemiFreeResolution& res, ModulePtr n);

// Given a semi-free source P (generators ordered as above), a map phi: P -> N
// of degree 0 and a surjection q: Q -> N with acyclic kernel in the
// relevant degrees, returns psi: P -> Q with q psi = phi. Throws WindowError
// when some generator cannot be lifted.
ModuleMap lift_through(const ModuleMap& phi, const ModuleMap& q);

// Resolution map P_M -> P_M' covering f: M -> M'.
ModuleMap lift_map(const ModuleMap& f, const SemiFreeResolution& source, const SemiFreeResolution& target);

// Hom_k(R, k) with (f.a)(b) = f(ab), for ordinary R. Basis element i is the
// functional dual to basis element i of R.
DgModule dual_module(AlgebraPtr r);

// True when the algebra is ordinary, the unit is basis element 0 and the
// remaining basis elements span a nilpotent two-sided ideal.
bool is_augmented_local(const DgAlgebra& a);

// M -> J^0 -> J^1 -> ... with J^i a finite direct sum of copies of J.
// M^0 = M; lambda^i : M^i -> J^i injective; rho^i : J^i -> M^{i+1} the
// cokernel, with a linear section; delta^i = lambda^{i+1} rho^i.
struct CoresolutionTower {
    ModulePtr module;
    ModulePtr j;
    std::vector<ModulePtr> terms;     // J^0 .. J^length
    std::vector<int> copies;          // number of J summands in J^i
    std::vector<ModulePtr> cokernels; // M^0 = M, M^1, ..., M^{length+1}
    std::vector<ModuleMap> lambda;    // M^i -> J^i
    std::vector<ModuleMap> rho;       // J^i -> M^{i+1}
    std::vector<Matrix> sections;     // rho^i sections (linear, M^{i+1} -> J^i)
    std::vector<ModuleMap> delta;     // J^i -> J^{i+1}
    int length() const { return static_cast<int>(terms.size()) - 1; }
};

// Requires m and j ordinary modules concentrated in degree 0 (zero
// differential). Each embedding stacks basis maps of Hom_A(M^i, J), taking
// the largest rank gain each time (lowest index on ties); throws VerificationError
// naming a vector killed by every map when J does not cogenerate.
// Stops early once a cokernel vanishes.
CoresolutionTower coresolve_by(ModulePtr m, ModulePtr j, int length);

// Totalization I^[0,n] of the tower with the augmentation M -> I^[0,n],
// both as A-modules.
struct ModuleTotalization {
    ModulePtr total;
    ModuleMap augmentation;
    // offsets[k] = index of the first basis vector of the J^k block
    std::vector<int> offsets;
};
ModuleTotalization totalize_tower(const CoresolutionTower& t, int n);
// I^[0,n+1] -> I^[0,n] forgetting the top block.
ModuleMap tower_projection(const CoresolutionTower& t, const ModuleTotalization& upper, const ModuleTotalization& lower);

} // namespace dgforge
