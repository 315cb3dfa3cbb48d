#ifndef GST_WITT_HPP
#define GST_WITT_HPP

#include "gst/unram.hpp"

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <vector>

namespace gst {

// p-typical Witt vectors.  Arithmetic is computed through ghost components:
// over a torsion-free ring the ghost map is injective and the preimage of a
// ghost vector is recovered by exact division, so no universal polynomials
// need to be materialized.  Coordinates over W_N(F_q) are handled by lifting
// to the torsion-free cover Z[x]/(F) of the Galois ring, computing there, and
// reducing back; this is legitimate because every Witt operation is given by
// integral polynomials in the coordinates.

enum class VMode { Truncate, Extend };

struct GhostCongruenceError : std::runtime_error {
    int index; // first ghost index where the Dwork congruence fails
    explicit GhostCongruenceError(int i)
        : std::runtime_error("ghost sequence violates the Dwork congruence at index " +
                             std::to_string(i)),
          index(i) {}
};

// ---------------------------------------------------------------------------
// Witt vectors over Z

struct WittZ {
    long p = 2;
    std::vector<mpz_class> a;
    int len() const { return static_cast<int>(a.size()); }
    bool operator==(const WittZ& o) const { return p == o.p && a == o.a; }
};

std::vector<mpz_class> ghost(const WittZ& w);
// exact ghost preimage; throws std::domain_error if g is not a ghost vector
WittZ from_ghost(long p, const std::vector<mpz_class>& g);
WittZ witt_add(const WittZ& x, const WittZ& y);
WittZ witt_sub(const WittZ& x, const WittZ& y);
WittZ witt_mul(const WittZ& x, const WittZ& y);
WittZ witt_neg(const WittZ& x);
WittZ witt_scalar_p(const WittZ& x);                       // multiplication by p
WittZ frobenius(const WittZ& x);                           // length n -> n-1
WittZ verschiebung(const WittZ& x, VMode mode = VMode::Truncate);
WittZ teichmuller_z(long p, const mpz_class& x, int n);

// Dwork lifting over Z (Frobenius lift psi = identity): validates the
// congruence g_{m+1} = psi(g_m) mod p^{m+1} first, reporting the failing
// index, then solves the ghost equations exactly.
WittZ dwork_lift(long p, const std::vector<mpz_class>& g);

// ---------------------------------------------------------------------------
// Witt vectors with coordinates in W_N(F_q) (in particular F_q itself, N = 1)

struct WittU {
    const UnramRing* R = nullptr;
    std::vector<UnramElem> a;
    int len() const { return static_cast<int>(a.size()); }
    bool operator==(const WittU& o) const { return R == o.R && a == o.a; }
};

WittU witt_zero(const UnramRing& R, int n);
WittU witt_add(const WittU& x, const WittU& y);
WittU witt_sub(const WittU& x, const WittU& y);
WittU witt_mul(const WittU& x, const WittU& y);
WittU witt_neg(const WittU& x);
WittU witt_scalar_p(const WittU& x);
// coordinatewise p-th power; requires char p coordinates (N = 1)
WittU frobenius_charp(const WittU& x);
WittU verschiebung(const WittU& x, VMode mode = VMode::Truncate);
WittU teichmuller(const UnramRing& R, const UnramElem& x, int n);

// ---------------------------------------------------------------------------
// The isomorphism W_N(F_q) (Witt coordinates over F_q) <-> Galois ring

// a has length N with coordinates in F_q = W_1(F_q); returns an element of
// W_N(F_q): sum_i p^i tau(sigma^{-i}(a_i)).
UnramElem witt_to_unram(const WittU& a, const UnramRing& target);
// inverse digit extraction
WittU unram_to_witt(const UnramElem& x, const UnramRing& source);

} // namespace gst

#endif
