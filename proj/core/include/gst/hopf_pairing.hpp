#ifndef GST_HOPF_PAIRING_HPP
#define GST_HOPF_PAIRING_HPP

#include "gst/universal.hpp"

namespace gst {

// The pairing polynomials of the universal map iota on truncated Witt Hopf
// algebras.  The symbol algebra of the tensor square is Z[(x_{ij})] with
// x_{ij} = x_i (x) x_j in bidegree (p^i, p^j); a bilinear symbol x^I (x) y^J
// is rewritten into the generators through the two bilinearity relations and
// the counit relations, using the Witt coaddition.

// coaddition data for Z[x_0..x_{n-1}]: Delta(x_m) = S_m(x (x) 1, 1 (x) x),
// returned as polynomials in 2n variables (primed block first)
struct WittCoaddition {
    long p = 2;
    int n = 0;
    std::vector<ZPoly> delta; // delta[m] = S_m(x', x'')
};
WittCoaddition witt_coaddition(long p, int n);

enum class ReduceOrder { LeftFirst, RightFirst };

class BoxAAlgebra {
public:
    BoxAAlgebra(long p, int n);

    long p() const { return p_; }
    int n() const { return n_; }
    // variable index of x_{ij} in the n^2-variable ring
    int var(int i, int j) const { return i * n_ + j; }

    // normal form of the bilinear symbol x^I (x) y^J; I and J are exponent
    // vectors of length n
    ZPoly reduce(const Mono& I, const Mono& J, ReduceOrder order = ReduceOrder::LeftFirst);

    // the image of the m-th ghost element: sum p^{i+j} (x_i^{p^{m-i}} (x) y_j^{p^{m-j}})
    ZPoly ghost_box(int m, ReduceOrder order = ReduceOrder::LeftFirst);

private:
    long p_;
    int n_;
    WittCoaddition co_;
    std::map<std::pair<Mono, Mono>, ZPoly> memo_left_, memo_right_;

    ZPoly delta_power(const Mono& J); // Delta(y^J) in 2n variables
    std::map<Mono, ZPoly> delta_memo_;
};

// bidegree of a monomial in the x_{ij} generators
std::pair<long, long> bidegree(long p, int n, const Mono& m);
bool is_bihomogeneous(long p, int n, const ZPoly& f, long degx, long degy);

// P_1, ..., P_n with P_m = iota(x_{m-1}), each in its own m^2-variable ring
// (variable (i,j) has index i*m + j).  Solved by ghost elimination over Q and
// certified integral; a non-integral solution aborts.
struct PairingPolys {
    long p = 2;
    int n = 0;
    std::vector<ZPoly> P; // P[m-1] = P_m in m^2 variables
};
PairingPolys iota_polys(long p, int n, int degree_cap = 3);

// Eq-(pn) structure: P_m = x_{m-1,m-1} + Q((x_{ij})_{i,j <= m-2})
bool leading_term_structure(const PairingPolys& pp, int m);

// V-shift identity: P_{m+1}((x_{i-1,j-1})) = P_m (indices < 0 drop to 0)
bool v_shift_identity(const PairingPolys& pp, int m);

// congruence of Lemma polyconverge: after re-indexing both polynomials into
// the window (i, j) <= 0 anchored at the top-right corner,
//   P_{n+1} = P_n  mod  J_{1,r}^s + J_{r,1}^s,
// where J_{r,s} = (x_{-i,-j} : i >= r, j >= s)
bool check_congruence(const PairingPolys& pp, int n, int r, int s);

// the bound of the lemma: congruence guaranteed for n >= this value
int congruence_bound(long p, int r, int s);

// diff-stable textual dump (sorted monomial list)
std::string dump_pairing_poly(const PairingPolys& pp, int m);

} // namespace gst

#endif
