#ifndef GST_BOXTENSOR_HPP
#define GST_BOXTENSOR_HPP

#include "gst/dieudonne.hpp"

namespace gst {

// Tensor products of Dieudonne modules.
//
// The unipotent tensor K (*) L is computed in the sequence model: an element
// is a finitely supported sequence (x_0, ..., x_{B-1}) in K * L recording
// f(V^i) for an F-linear f on the truncation of R spanned by {V^i, F^j},
// subject to
//     F_{K*L} x_{i+1} = p x_i,
//     (1*F) x_{i+1} = (V*1) x_i,
//     (F*1) x_{i+1} = (1*V) x_i,
// with x_B = 0.  The R-action is right multiplication, (r'.f)(r) = f(r r'),
// so V shifts the sequence down and F acts by (Ff)_0 = F x_0, (Ff)_i = p x_{i-1}.
// The partial operators are the presentation-level maps on the canonical Tor
// generators; the convention is validated against the oracle, the duality
// cross-check and the catalog examples.

struct BoxastResult {
    DieudonneModule module;
    int bound = 0;
    bool stabilized = false;
    std::vector<long> growth; // W-length of the solution space at bounds 1..B
};

BoxastResult boxast_u(const DieudonneModule& K, const DieudonneModule& L, int bound);

// brute force over the truncation of R spanned by {V^i, F^j : i, j < B}: the
// same system plus the conditions obtained from the basis elements F^j, which
// the sequence model leaves implicit.  Anti-drift oracle for boxast_u.
DieudonneModule boxast_u_oracle(const DieudonneModule& K, const DieudonneModule& L, int bound);

// truncated connected tensor of covariant modules:
// (R (x)_V (M1 (x) M2)) / (F (x) x (x) Vy - 1 (x) Fx (x) y,
//                          F (x) Vx (x) y - 1 (x) x (x) Fy)  mod F^B
struct BoxcResult {
    DieudonneModule module;
    int bound = 0;
};

BoxcResult boxc_trunc(const DieudonneModule& M1, const DieudonneModule& M2, int bound);

// Dieudonne pairings M1 x M2 -> CW(F_{q^m}) at the finite level W_e(F_{q^m}),
// realized as W(k')/p^e with F = sigma', V = p sigma'^{-1}.  The solution
// space is an abelian p-group with the action of Gal(F_{q^m}/F_q).
struct PairingSpace {
    int level_m = 1;
    int exponent_e = 1;
    std::vector<int> divisors;            // p-exponents of the group, descending
    std::vector<std::vector<u64>> frobenius; // action of the q-power Frobenius
    long z_length() const {
        long s = 0;
        for (int d : divisors) s += d;
        return s;
    }
    bool is_zero() const { return divisors.empty(); }
};

struct PairingExponentTooSmall : std::runtime_error {
    int suggested_e;
    explicit PairingExponentTooSmall(int e)
        : std::runtime_error("pairing level exponent too small; retry with e = " +
                             std::to_string(e)),
          suggested_e(e) {}
};

PairingSpace dieudonne_pairings(const DieudonneModule& M1, const DieudonneModule& M2,
                                int level_m, int exponent_e);

// the etale part of the tensor of two connected(-dual) inputs: pairing spaces
// of the stabilized V-power kernels of the covariant modules, one level per
// field extension F_{q^m}, m = 1..level_cap
struct EtaleTower {
    std::vector<PairingSpace> levels;
    std::vector<bool> v_kernel_stabilized; // per input tower
    bool stabilized = false;               // levels stopped growing
};

EtaleTower etale_part_tensor(const DieudonneModule& Cov1, const DieudonneModule& Cov2,
                             int level_cap);

// V^n-kernel of a Dieudonne module as a Dieudonne module (with restricted F, V)
DieudonneModule v_power_kernel(const DieudonneModule& D, int n);

} // namespace gst

#endif
