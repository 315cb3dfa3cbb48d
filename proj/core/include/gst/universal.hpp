#ifndef GST_UNIVERSAL_HPP
#define GST_UNIVERSAL_HPP

#include "gst/mpoly.hpp"
#include "gst/witt.hpp"

namespace gst {

// Universal Witt structure polynomials in Z[x_0..x_{n-1}, y_0..y_{n-1}]
// (variable i is x_i, variable n+i is y_i).  Solved once per (p, n, kind) by
// ghost-equation elimination over Q, certified integral, and cached.

enum class WittOpKind { Sum, Prod };

struct UniversalPolys {
    long p = 2;
    int n = 0;
    WittOpKind kind = WittOpKind::Sum;
    std::vector<ZPoly> polys; // polys[m] = S_m or P_m
};

const UniversalPolys& universal_sum_polys(long p, int n);
const UniversalPolys& universal_prod_polys(long p, int n);

// the m-th ghost polynomial w_m(x_0..x_m) as a polynomial in nv variables
// starting at variable offset
ZPoly ghost_poly(long p, int nv, int offset, int m);

// w_m(x) + w_m(y) resp. w_m(x) * w_m(y) in 2n variables
ZPoly ghost_op_target(long p, int n, int m, WittOpKind kind);

// Dwork's integrality certificate for the (p, n) universal polynomials of
// the given kind: verifies symbolically that g_m - psi(g_{m-1}) has all
// coefficients divisible by p^m, psi being the Frobenius lift x_i -> x_i^p.
// This certifies integrality of the ghost preimage without materializing it.
bool dwork_certificate(long p, int n, WittOpKind kind, int* fail_index = nullptr);

// exact symbolic verification that w_m(S_0..S_m) equals the ghost target for
// every m < n; the defining property of the universal polynomials
bool verify_ghost_identity(const UniversalPolys& up);

// evaluate the universal polynomials on integer Witt coordinates (an
// independent route to witt_add/witt_mul, used for cross-validation)
WittZ eval_universal(const UniversalPolys& up, const WittZ& x, const WittZ& y);

} // namespace gst

#endif
