#ifndef GST_ZSOLVE_HPP
#define GST_ZSOLVE_HPP

#include "gst/module.hpp"

namespace gst {

// Solver for sigma-twisted linear systems.  A condition is a sum of terms
// x |-> L * sigma^t(x); such maps are not W-linear for t != 0, but sigma
// fixes Z/p^N, so every condition is Z/p^N-linear and the solution set is
// computed exactly by expanding W-coordinates over the xi-basis into
// d coordinates over Z/p^N and taking one kernel.

struct ZTerm {
    UMat L;
    int twist = 0;
};

struct ZCondition {
    FinMod tgt;
    std::vector<ZTerm> terms; // sum of terms must vanish in tgt
};

struct ZSolutionSpace {
    FinMod src;                  // ambient module the unknowns live in
    const UnramRing* zp = nullptr; // the coefficient ring Z/p^N (d = 1)
    std::vector<int> z_divisors; // structure of the solution group (+) Z/p^{k}
    std::vector<UVec> basis;     // generators realizing the decomposition
    std::vector<std::vector<UnramElem>> scaled_basis; // internal: scaled Z model

    long z_length() const {
        long s = 0;
        for (int d : z_divisors) s += d;
        return s;
    }
    bool is_zero() const { return z_divisors.empty(); }
};

ZSolutionSpace zsolve(const FinMod& src, const std::vector<ZCondition>& conds);

// coordinates (mod p^{z_divisors[k]}) of each element in the solution basis;
// throws if an element is not in the solution group
std::vector<std::vector<u64>> express_in_basis(const ZSolutionSpace& S,
                                               const std::vector<UVec>& elts);

// multiplication-by-w and sigma^t as d x d matrices over Z/p^N in the
// xi-basis (used for the expansion; exposed for reuse)
UMat mult_matrix_z(const UnramRing& R, const UnramElem& w);
UMat sigma_matrix_z(const UnramRing& R, int t);

} // namespace gst

#endif
