#ifndef GST_MODULE_HPP
#define GST_MODULE_HPP

#include "gst/matrix.hpp"

#include <string>

namespace gst {

// Finite-length modules over W = W_N(F_q) in elementary-divisor form
// M = (+)_i W/p^{e_i}, together with sigma^t-semilinear maps between them.
// Everything reduces to chain-ring linear algebra through the scaled
// embedding of M into the free module (W/p^N)^rank (generator i scaled by
// p^{N-e_i}).

struct FinMod {
    const UnramRing* R = nullptr;
    std::vector<int> e; // divisors, each in [1, N]

    FinMod() = default;
    FinMod(const UnramRing& ring, std::vector<int> divisors) : R(&ring), e(std::move(divisors)) {
        for (int d : e)
            if (d < 1 || d > ring.N())
                throw std::invalid_argument("FinMod: divisor out of range");
    }
    int rank() const { return static_cast<int>(e.size()); }
    bool is_zero() const { return e.empty(); }
    long length() const {
        long s = 0;
        for (int d : e) s += d;
        return s;
    }
    int max_exp() const {
        int m = 0;
        for (int d : e) m = std::max(m, d);
        return m;
    }
    std::vector<int> sorted_divisors() const {
        auto v = e;
        std::sort(v.rbegin(), v.rend());
        return v;
    }
    bool same_divisors(const FinMod& o) const {
        return R == o.R && sorted_divisors() == o.sorted_divisors();
    }
};

using UVec = std::vector<UnramElem>;

// canonical representative: entry i reduced mod p^{e_i}
UVec reduce_vec(const FinMod& M, UVec v);
UVec zero_vec(const FinMod& M);
UVec basis_vec(const FinMod& M, int i);
UVec add_vec(const FinMod& M, const UVec& a, const UVec& b);
UVec sub_vec(const FinMod& M, const UVec& a, const UVec& b);
UVec scal_vec(const FinMod& M, const UnramElem& c, const UVec& a);
UVec sigma_vec(const FinMod& M, const UVec& a, int t);
bool is_zero_vec(const FinMod& M, const UVec& a);

// x |-> A * sigma^twist(x); entries A[i][j] taken mod p^{e_tgt[i]}, with the
// well-definedness constraint val(A[i][j]) >= e_tgt[i] - e_src[j]
struct ModMap {
    FinMod src, tgt;
    int twist = 0;
    UMat A;

    ModMap() = default;
    ModMap(FinMod s, FinMod t, int tw, UMat m);

    UVec apply(const UVec& x) const;
};

ModMap zero_map(const FinMod& src, const FinMod& tgt, int twist = 0);
ModMap identity_map(const FinMod& M);
ModMap scalar_map(const FinMod& M, const UnramElem& c); // multiplication by c
ModMap p_power_map(const FinMod& M, int k);              // multiplication by p^k
ModMap compose(const ModMap& f, const ModMap& g);        // f after g
ModMap map_add(const ModMap& f, const ModMap& g);
ModMap map_sub(const ModMap& f, const ModMap& g);
bool map_eq(const ModMap& f, const ModMap& g);
bool map_is_zero(const ModMap& f);

// free-model translation
UVec to_free(const FinMod& M, const UVec& x);   // scale by p^{N-e_i}
UVec from_free(const FinMod& M, const UVec& v); // exact unscale
UMat map_free(const ModMap& f);                 // matrix on scaled coordinates

struct SubModule {
    FinMod sub;
    ModMap incl; // sub -> ambient, injective
};

struct QuotModule {
    FinMod quot;
    ModMap proj; // ambient -> quot, surjective
};

SubModule kernel(const ModMap& f);
SubModule image(const ModMap& f);
QuotModule cokernel(const ModMap& f);
// quotient of M by the submodule generated by the given (abstract) vectors
QuotModule quotient(const FinMod& M, const std::vector<UVec>& rel_gens);
// submodule of M generated by the given vectors
SubModule submodule(const FinMod& M, const std::vector<UVec>& gens);

// pull x back along an injective map j (x must lie in the image)
UVec preimage(const ModMap& j, const UVec& x);
// factor f through a surjection q: returns g with f = g o q (requires
// ker q <= ker f)
ModMap factor_through(const QuotModule& q, const ModMap& f);
// restrict f: M -> M to a submodule (requires f(sub) <= sub)
ModMap restrict_map(const ModMap& f, const SubModule& s);

// direct sums
FinMod direct_sum(const FinMod& A, const FinMod& B);
ModMap inclusion_left(const FinMod& A, const FinMod& B);
ModMap inclusion_right(const FinMod& A, const FinMod& B);
ModMap sum_map(const ModMap& f, const ModMap& g); // f (+) g

// -- canonical bifunctors ----------------------------------------------------
// generator (i, j) has index i * rank(L) + j and order p^{min(e_i, f_j)}

FinMod tensor_mod(const FinMod& M, const FinMod& L);
ModMap tensor_map(const ModMap& f, const ModMap& g); // requires equal twists

FinMod tor_mod(const FinMod& M, const FinMod& L);
ModMap tor_map(const ModMap& f, const ModMap& g); // requires equal twists
// realization of the canonical Tor generators inside (+)_i L
ModMap tor_embedding(const FinMod& M, const FinMod& L);

FinMod hom_mod(const FinMod& M, const FinMod& L);
// Hom(alpha, beta): Hom(M, L) -> Hom(M', L'), phi -> beta o phi o alpha,
// for linear alpha: M' -> M and beta: L -> L'
ModMap hom_map(const ModMap& alpha, const ModMap& beta);
// the actual homomorphism M -> L encoded by an element of hom_mod(M, L)
ModMap hom_element(const FinMod& M, const FinMod& L, const UVec& h);

FinMod ext_mod(const FinMod& M, const FinMod& L);
ModMap ext_map(const ModMap& alpha, const ModMap& beta);

// chain-map lift of f through the diagonal resolutions (the matrix
// f~_1 with f~_1[i][j] = A[i][j] * p^{e_src[j]-e_tgt[i]})
UMat resolution_lift(const ModMap& f);

std::string describe(const FinMod& M);

} // namespace gst

#endif
