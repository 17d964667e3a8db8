#pragma once

#include "dgforge/dgalgebra.hpp"

// Small algebras used across tests, acceptance runs and the bundled corpus.
namespace dgforge::catalog {

OrdinaryAlgebraPresentation ground_field(Field f);
// k[x]/(x^n) with ideal (x^ideal_power); basis 1, x, x2, ...
OrdinaryAlgebraPresentation truncated_polynomial(Field f, int n, int ideal_power = 1);
// k[x_1..x_r]/(x_i x_j) with the radical as ideal.
OrdinaryAlgebraPresentation square_zero(Field f, int r);
// Upper triangular 2x2 matrices e11, e12, e22 with ideal span(e12).
OrdinaryAlgebraPresentation upper_triangular(Field f);
// Full matrix algebra with units e<i><j>, no ideal.
OrdinaryAlgebraPresentation matrix_algebra(Field f, int n);

// R as a right module over embed_ordinary(R), and R/I for I = the ideal.
DgModule quotient_by_ideal(AlgebraPtr a, const OrdinaryAlgebraPresentation& p);
// The simple module k^n over M_n(k), as row vectors: v_i . e_ij = v_j.
DgModule row_module(AlgebraPtr a, int n);

} // namespace dgforge::catalog
