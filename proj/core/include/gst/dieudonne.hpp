#ifndef GST_DIEUDONNE_HPP
#define GST_DIEUDONNE_HPP

#include "gst/zsolve.hpp"

#include <optional>

namespace gst {

// Finite-length Dieudonne modules: a module over W_N(F_q) with a sigma-
// semilinear F (twist +1) and a sigma^{-1}-semilinear V (twist -1) subject
// to FV = VF = p.

struct DieudonneModule {
    FinMod M;
    ModMap F; // twist +1
    ModMap V; // twist -1

    bool is_zero() const { return M.is_zero(); }
    const UnramRing& ring() const { return *M.R; }
};

// nullopt when valid; otherwise a description of the first violated relation
std::optional<std::string> validate(const DieudonneModule& D);

DieudonneModule dd_zero(const UnramRing& R);
DieudonneModule dd_make(FinMod M, ModMap F, ModMap V);
DieudonneModule dsum(const DieudonneModule& A, const DieudonneModule& B);

// -- catalog -------------------------------------------------------------

// D(alpha_{p^r}) = k[F]/(F^r), V = 0
DieudonneModule d_alpha(const UnramRing& R, int r);
// D(Z/p^m) = W_m(k), F = sigma, V = p sigma^{-1}
DieudonneModule d_const(const UnramRing& R, int m);
// D(mu_{p^m}) = W_m(k), F = p sigma, V = sigma^{-1}
DieudonneModule d_mu(const UnramRing& R, int m);
// D(W_m[F^n]) = R/(R V^m + R F^n), presented on the monomial basis
// V^{m-1}, ..., V, 1, F, ..., F^{n-1}
DieudonneModule d_wittker(const UnramRing& R, int m, int n);

// -- structure ------------------------------------------------------------

bool f_bijective(const DieudonneModule& D);
bool f_nilpotent(const DieudonneModule& D);
bool v_bijective(const DieudonneModule& D);
bool v_nilpotent(const DieudonneModule& D);

// (etale, connected): F bijective resp. nilpotent on the parts
std::pair<DieudonneModule, DieudonneModule> fitting_split_F(const DieudonneModule& D);
// (multiplicative, unipotent): V bijective resp. nilpotent
std::pair<DieudonneModule, DieudonneModule> fitting_split_V(const DieudonneModule& D);

// K * L: Tor of the underlying modules с the diagonal F (twist +1)
struct StarModule {
    FinMod M;
    ModMap F;
};
StarModule star(const DieudonneModule& K, const DieudonneModule& L);

// Matlis duality I(M) = Hom_W(M, CW(k)): at exponent p^e the co-Witt module
// CW(k)[p^e] is W/p^e with the plain action, so I(M) has the same divisors
// and F_I = sigma o (-) o V, V_I = sigma^{-1} o (-) o F on dual bases.
DieudonneModule matlis_dual(const DieudonneModule& D);
// Cartier duality on finite group schemes computed at the module level;
// identical to matlis_dual, exposed under the group-theoretic name.
DieudonneModule cartier_dual(const DieudonneModule& D);

// base change along F_{q} -> F_{q^m}
DieudonneModule base_change(const DieudonneModule& D, int m);

// -- isomorphism testing ----------------------------------------------------

enum class Trilean { Yes, No, Undecided };

struct IsoOptions {
    std::size_t enum_cap = 1u << 18; // exhaustive search cap on |intertwiner space|
    int samples = 4000;              // random fallback
};

Trilean is_isomorphic(const DieudonneModule& A, const DieudonneModule& B,
                      const IsoOptions& opt = {});

std::string describe(const DieudonneModule& D);

} // namespace gst

#endif
