#ifndef GST_GAMMA_HPP
#define GST_GAMMA_HPP

#include "gst/dieudonne.hpp"

namespace gst {

// Finitely generated abelian groups with an automorphism: the action of the
// q-power Frobenius generating Gal(F_qbar / F_q) on a discrete module.
// Torsion is kept in primary form; each primary component reuses the chain
// ring machinery over Z/l^N = unram_ring(l, 1, N).

struct GammaPrimary {
    long ell = 2;
    FinMod M;   // over unram_ring(ell, 1, max divisor)
    ModMap phi; // automorphism, twist 0
};

struct GammaModule {
    long rank = 0;                            // free part Z^rank
    std::vector<std::vector<long>> phi_free;  // automorphism of Z^rank (det +-1)
    std::vector<GammaPrimary> parts;          // torsion, sorted by ell

    bool is_zero() const { return rank == 0 && parts.empty(); }
    bool is_finite() const { return rank == 0; }
    long torsion_order_log(long ell) const; // sum of divisors at ell
    std::vector<long> cyclic_orders() const; // prime-power orders, sorted
};

GammaModule gamma_zero();
GammaModule gamma_free(long rank, std::vector<std::vector<long>> phi);
// Z/n with the multiplication-by-u automorphism (u coprime to n)
GammaModule gamma_cyclic(long n, long u = 1);
GammaModule gamma_dsum(const GammaModule& A, const GammaModule& B);
bool gamma_eq_structure(const GammaModule& A, const GammaModule& B); // orders+rank only

// Tor_1^Z(M1, M2) with the diagonal action
GammaModule tor_diag(const GammaModule& M1, const GammaModule& M2);
// full tensor product with the diagonal action (used by the char-0 formulas)
GammaModule tensor_diag(const GammaModule& M1, const GammaModule& M2);
// kill the p-primary component
GammaModule invert_p(const GammaModule& M, long p);
// Hom(A, B) for finite A, with the conjugation action g.f = g_B o f o g_A^{-1}
GammaModule hom_conj(const GammaModule& A, const GammaModule& B);
// the prime-to-p torsion part (pi_0 of the multiplicative group k[M])
GammaModule pi0_mult(const GammaModule& M, long p);
// Hom^c(pi0, M2) with conjugation; pi0 must be finite
GammaModule mult_tensor_piece(const GammaModule& pi0, const GammaModule& M2);
// Z[1/p] (x) M1 * M2: the multiplicative-multiplicative summand
GammaModule mult_mult_tensor(const GammaModule& M1, const GammaModule& M2, long p);

// fixed points ker(phi - 1) as a plain abelian group
struct AbGroup {
    long rank = 0;
    std::vector<long> cyclic; // prime-power orders, sorted descending per prime
    bool is_zero() const { return rank == 0 && cyclic.empty(); }
};
AbGroup fixed_points(const GammaModule& M);

// isomorphism of Gamma-modules (structure + conjugate actions)
Trilean gamma_isomorphic(const GammaModule& A, const GammaModule& B);

// build from a Dieudonne-pairing solution space over F_p
GammaModule gamma_from_pairing(long p, const std::vector<int>& divisors,
                               const std::vector<std::vector<u64>>& frobenius);

std::string describe(const GammaModule& M);

} // namespace gst

#endif
