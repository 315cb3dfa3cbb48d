#ifndef GST_UNRAM_HPP
#define GST_UNRAM_HPP

#include "gst/zp.hpp"

#include <memory>
#include <vector>

namespace gst {

// The Galois ring W_N(F_q), q = p^d: the unramified extension of Z/p^N of
// degree d, realized as (Z/p^N)[x]/(f) for the Teichmueller modulus f, the
// monic degree-d divisor of x^(q-1) - 1 lifting a fixed irreducible
// polynomial over F_p.  The class x of the variable is a Teichmueller unit,
// so the Frobenius automorphism sigma is exactly xi |-> xi^p and sigma^d = id.
//
// Elements are coefficient vectors of length d with entries in [0, p^N).

class UnramRing;

struct UnramElem {
    std::vector<u64> c;
    bool operator==(const UnramElem& o) const { return c == o.c; }
};

class UnramRing {
public:
    // Construction goes through the registry `unram_ring(p, d, N)` below so
    // that rings are shared and embeddings can be cached.
    UnramRing(long p, int d, int N);

    long p() const { return pp_.p; }
    int d() const { return d_; }
    int N() const { return pp_.N; }
    u64 q() const { return q_; }
    const PrimePower& pp() const { return pp_; }
    const std::vector<u64>& modulus() const { return f_; }

    UnramElem zero() const { return UnramElem{std::vector<u64>(d_, 0)}; }
    UnramElem one() const;
    UnramElem xi() const; // class of x; a Teichmueller unit generating the ring
    UnramElem from_int(i64 n) const;

    bool is_zero(const UnramElem& a) const;
    UnramElem add(const UnramElem& a, const UnramElem& b) const;
    UnramElem sub(const UnramElem& a, const UnramElem& b) const;
    UnramElem neg(const UnramElem& a) const;
    UnramElem mul(const UnramElem& a, const UnramElem& b) const;
    UnramElem mul_scalar(u64 s, const UnramElem& a) const;
    UnramElem pow(const UnramElem& a, u64 e) const;

    // min p-adic valuation over coefficients; val(0) = N
    int val(const UnramElem& a) const;
    bool is_unit(const UnramElem& a) const { return val(a) == 0; }
    UnramElem inv(const UnramElem& a) const;
    UnramElem div_pk(const UnramElem& a, int k) const; // exact division by p^k
    UnramElem mul_pk(const UnramElem& a, int k) const;
    UnramElem reduce_mod_pk(const UnramElem& a, int k) const;

    // Frobenius sigma^t (t may be negative; sigma has order d).
    UnramElem sigma(const UnramElem& a, int t = 1) const;

    // Residue ring W_1(F_q) = F_q (this ring itself when N = 1).
    const UnramRing& residue_ring() const;
    UnramElem residue(const UnramElem& a) const;          // element of residue ring
    UnramElem teichmuller(const UnramElem& rbar) const;   // multiplicative lift F_q -> W_N(F_q)

    // All q elements of the residue field, in a fixed order.
    std::vector<UnramElem> residue_elements() const;

    bool same_ring(const UnramRing& o) const {
        return pp_ == o.pp_ && d_ == o.d_ && f_ == o.f_;
    }

private:
    PrimePower pp_;
    int d_;
    u64 q_;
    std::vector<u64> f_;                 // monic, length d+1
    std::vector<std::vector<u64>> xpow_; // x^d .. x^(2d-2) reduced mod f
    UnramElem sigma_xi_;                 // sigma(xi) = xi^p mod f
    std::vector<UnramElem> sigma_xi_pows_; // sigma^j(xi) for j = 0..d-1
    mutable std::shared_ptr<const UnramRing> residue_;

    std::vector<u64> reduce_poly(std::vector<u64> v) const;
};

// Shared registry (first-writer-wins, safe for concurrent initialization).
const UnramRing& unram_ring(long p, int d, int N);

// W(k) -> W(k') for k = F_{p^d} inside k' = F_{p^(d*m)} at equal precision:
// xi of the small ring is sent to a root of the small modulus in the big ring
// (found on residue fields, then Hensel lifted).  sigma commutes with the
// embedding.
class UnramEmbedding {
public:
    UnramEmbedding(const UnramRing& small, const UnramRing& big);
    const UnramRing& small() const { return *small_; }
    const UnramRing& big() const { return *big_; }
    UnramElem apply(const UnramElem& a) const;

private:
    const UnramRing* small_;
    const UnramRing* big_;
    std::vector<UnramElem> xi_pows_; // images of xi^0..xi^(d-1)
};

const UnramEmbedding& unram_embedding(const UnramRing& small, const UnramRing& big);

} // namespace gst

#endif
