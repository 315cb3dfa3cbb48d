#include "gst/gamma.hpp"

#include <algorithm>
#include <gmpxx.h>
#include <map>
#include <sstream>

namespace gst {

namespace {

std::vector<std::pair<long, int>> factorize(long n) {
    std::vector<std::pair<long, int>> out;
    for (long q = 2; q * q <= n; ++q) {
        if (n % q) continue;
        int e = 0;
        while (n % q == 0) {
            n /= q;
            ++e;
        }
        out.emplace_back(q, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

// move a primary part to the ring of precision N (entries are unchanged)
GammaPrimary rebase(const GammaPrimary& P, int N) {
    const UnramRing& R = unram_ring(P.ell, 1, N);
    FinMod M(R, P.M.e);
    UMat A(R, P.phi.A.rows, P.phi.A.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j)
            A.at(i, j) = R.from_int(static_cast<i64>(P.phi.A.at(i, j).c[0]));
    return GammaPrimary{P.ell, M, ModMap(M, M, 0, std::move(A))};
}

void check_automorphism(const GammaPrimary& P) {
    SmithResult s = smith(P.phi.A);
    for (int e : s.exps)
        if (e != 0) throw std::invalid_argument("GammaModule: action is not an automorphism");
}

GammaPrimary primary_dsum(const GammaPrimary& A, const GammaPrimary& B) {
    int N = std::max(A.M.R->N(), B.M.R->N());
    GammaPrimary a = rebase(A, N), b = rebase(B, N);
    return GammaPrimary{A.ell, direct_sum(a.M, b.M), sum_map(a.phi, b.phi)};
}

std::vector<std::vector<long>> identity_int(long n) {
    std::vector<std::vector<long>> I(static_cast<size_t>(n), std::vector<long>(static_cast<size_t>(n), 0));
    for (long i = 0; i < n; ++i) I[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
    return I;
}

// integer matrix inverse for automorphisms of Z^rank (det +-1), by adjugate
std::vector<std::vector<long>> int_inverse(const std::vector<std::vector<long>>& A) {
    size_t n = A.size();
    if (n == 0) return {};
    if (n == 1) {
        if (A[0][0] != 1 && A[0][0] != -1)
            throw std::invalid_argument("phi_free is not invertible over Z");
        return {{A[0][0]}};
    }
    // Gauss-Jordan over Q, verified integral
    std::vector<std::vector<mpq_class>> W(n, std::vector<mpq_class>(2 * n, 0));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) W[i][j] = A[i][j];
        W[i][n + i] = 1;
    }
    for (size_t c = 0; c < n; ++c) {
        size_t piv = c;
        while (piv < n && W[piv][c] == 0) ++piv;
        if (piv == n) throw std::invalid_argument("phi_free singular");
        std::swap(W[c], W[piv]);
        mpq_class inv = 1 / W[c][c];
        for (auto& x : W[c]) x *= inv;
        for (size_t r = 0; r < n; ++r) {
            if (r == c || W[r][c] == 0) continue;
            mpq_class f = W[r][c];
            for (size_t j = 0; j < 2 * n; ++j) W[r][j] -= f * W[c][j];
        }
    }
    std::vector<std::vector<long>> inv(n, std::vector<long>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            if (W[i][n + j].get_den() != 1)
                throw std::invalid_argument("phi_free inverse is not integral");
            inv[i][j] = static_cast<long>(W[i][n + j].get_num().get_si());
        }
    return inv;
}

} // namespace

long GammaModule::torsion_order_log(long ell) const {
    for (const auto& P : parts)
        if (P.ell == ell) return P.M.length();
    return 0;
}

std::vector<long> GammaModule::cyclic_orders() const {
    std::vector<long> out;
    for (const auto& P : parts)
        for (int e : P.M.e) out.push_back(static_cast<long>(pow_u64(static_cast<u64>(P.ell), static_cast<u64>(e))));
    std::sort(out.begin(), out.end());
    return out;
}

GammaModule gamma_zero() { return GammaModule{}; }

GammaModule gamma_free(long rank, std::vector<std::vector<long>> phi) {
    GammaModule M;
    M.rank = rank;
    M.phi_free = phi.empty() ? identity_int(rank) : std::move(phi);
    (void)int_inverse(M.phi_free); // must be an automorphism
    return M;
}

GammaModule gamma_cyclic(long n, long u) {
    if (n < 0) n = -n;
    GammaModule M;
    if (n == 0) return gamma_free(1, {});
    if (n == 1) return M;
    for (auto [ell, e] : factorize(n)) {
        const UnramRing& R = unram_ring(ell, 1, e);
        FinMod Mod(R, {e});
        UMat A(R, 1, 1);
        A.at(0, 0) = R.from_int(u);
        GammaPrimary P{ell, Mod, ModMap(Mod, Mod, 0, std::move(A))};
        check_automorphism(P);
        M.parts.push_back(std::move(P));
    }
    std::sort(M.parts.begin(), M.parts.end(),
              [](const GammaPrimary& a, const GammaPrimary& b) { return a.ell < b.ell; });
    return M;
}

GammaModule gamma_dsum(const GammaModule& A, const GammaModule& B) {
    GammaModule M;
    M.rank = A.rank + B.rank;
    // block diagonal free action
    M.phi_free = identity_int(M.rank);
    for (long i = 0; i < A.rank; ++i)
        for (long j = 0; j < A.rank; ++j)
            M.phi_free[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                A.phi_free[static_cast<size_t>(i)][static_cast<size_t>(j)];
    for (long i = 0; i < B.rank; ++i)
        for (long j = 0; j < B.rank; ++j)
            M.phi_free[static_cast<size_t>(A.rank + i)][static_cast<size_t>(A.rank + j)] =
                B.phi_free[static_cast<size_t>(i)][static_cast<size_t>(j)];
    std::map<long, GammaPrimary> byp;
    for (const auto& P : A.parts) byp.emplace(P.ell, P);
    for (const auto& P : B.parts) {
        auto it = byp.find(P.ell);
        if (it == byp.end())
            byp.emplace(P.ell, P);
        else
            it->second = primary_dsum(it->second, P);
    }
    for (auto& [ell, P] : byp) M.parts.push_back(std::move(P));
    return M;
}

bool gamma_eq_structure(const GammaModule& A, const GammaModule& B) {
    return A.rank == B.rank && A.cyclic_orders() == B.cyclic_orders();
}

GammaModule tor_diag(const GammaModule& M1, const GammaModule& M2) {
    GammaModule out;
    for (const auto& P1 : M1.parts)
        for (const auto& P2 : M2.parts) {
            if (P1.ell != P2.ell) continue;
            int N = std::max(P1.M.R->N(), P2.M.R->N());
            GammaPrimary a = rebase(P1, N), b = rebase(P2, N);
            FinMod T = tor_mod(a.M, b.M);
            if (T.is_zero()) continue;
            ModMap phi = tor_map(a.phi, b.phi);
            out.parts.push_back(GammaPrimary{P1.ell, T, phi});
        }
    std::sort(out.parts.begin(), out.parts.end(),
              [](const GammaPrimary& a, const GammaPrimary& b) { return a.ell < b.ell; });
    return out;
}

GammaModule tensor_diag(const GammaModule& M1, const GammaModule& M2) {
    GammaModule out;
    out.rank = M1.rank * M2.rank;
    // Kronecker product of the free actions
    out.phi_free = identity_int(out.rank);
    for (long i = 0; i < M1.rank; ++i)
        for (long j = 0; j < M1.rank; ++j)
            for (long k = 0; k < M2.rank; ++k)
                for (long l = 0; l < M2.rank; ++l)
                    out.phi_free[static_cast<size_t>(i * M2.rank + k)]
                                [static_cast<size_t>(j * M2.rank + l)] =
                        M1.phi_free[static_cast<size_t>(i)][static_cast<size_t>(j)] *
                        M2.phi_free[static_cast<size_t>(k)][static_cast<size_t>(l)];
    std::map<long, GammaPrimary> byp;
    auto add_part = [&](GammaPrimary P) {
        if (P.M.is_zero()) return;
        auto it = byp.find(P.ell);
        if (it == byp.end())
            byp.emplace(P.ell, std::move(P));
        else
            it->second = primary_dsum(it->second, P);
    };
    // torsion (x) torsion
    for (const auto& P1 : M1.parts)
        for (const auto& P2 : M2.parts) {
            if (P1.ell != P2.ell) continue;
            int N = std::max(P1.M.R->N(), P2.M.R->N());
            GammaPrimary a = rebase(P1, N), b = rebase(P2, N);
            add_part(GammaPrimary{P1.ell, tensor_mod(a.M, b.M), tensor_map(a.phi, b.phi)});
        }
    // free (x) torsion and torsion (x) free: copies of the torsion part with
    // the Kronecker action
    auto free_tensor = [&](long rank, const std::vector<std::vector<long>>& phiF,
                           const GammaPrimary& P, bool free_on_left) {
        if (rank == 0) return;
        const UnramRing& R = *P.M.R;
        std::vector<int> divs;
        for (long c = 0; c < rank; ++c) divs.insert(divs.end(), P.M.e.begin(), P.M.e.end());
        FinMod M(R, divs);
        int rt = P.M.rank();
        UMat A(R, M.rank(), M.rank());
        for (long i = 0; i < rank; ++i)
            for (long j = 0; j < rank; ++j) {
                i64 c = phiF[static_cast<size_t>(i)][static_cast<size_t>(j)];
                if (c == 0) continue;
                for (int a = 0; a < rt; ++a)
                    for (int b = 0; b < rt; ++b) {
                        UnramElem v = R.mul_scalar(
                            R.pp().reduce_signed(c), P.phi.A.at(a, b));
                        A.at(static_cast<int>(i) * rt + a, static_cast<int>(j) * rt + b) =
                            R.add(A.at(static_cast<int>(i) * rt + a,
                                       static_cast<int>(j) * rt + b),
                                  v);
                    }
            }
        (void)free_on_left;
        add_part(GammaPrimary{P.ell, M, ModMap(M, M, 0, std::move(A))});
    };
    for (const auto& P : M2.parts) free_tensor(M1.rank, M1.phi_free, P, true);
    for (const auto& P : M1.parts) free_tensor(M2.rank, M2.phi_free, P, false);
    for (auto& [ell, P] : byp) out.parts.push_back(std::move(P));
    std::sort(out.parts.begin(), out.parts.end(),
              [](const GammaPrimary& a, const GammaPrimary& b) { return a.ell < b.ell; });
    return out;
}

GammaModule invert_p(const GammaModule& M, long p) {
    GammaModule out;
    out.rank = M.rank;
    out.phi_free = M.phi_free;
    for (const auto& P : M.parts)
        if (P.ell != p) out.parts.push_back(P);
    return out;
}

GammaModule hom_conj(const GammaModule& A, const GammaModule& B) {
    if (!A.is_finite())
        throw std::invalid_argument("hom_conj: source must be finite");
    GammaModule out;
    for (const auto& PA : A.parts)
        for (const auto& PB : B.parts) {
            if (PA.ell != PB.ell) continue;
            int N = std::max(PA.M.R->N(), PB.M.R->N());
            GammaPrimary a = rebase(PA, N), b = rebase(PB, N);
            FinMod H = hom_mod(a.M, b.M);
            if (H.is_zero()) continue;
            // conjugation: f -> phi_B o f o phi_A^{-1}
            auto inv = solve(a.phi.A, UMat::identity(*a.M.R, a.M.rank()));
            if (!inv) throw std::logic_error("hom_conj: action not invertible");
            ModMap phiAinv(a.M, a.M, 0, *inv);
            ModMap action = hom_map(phiAinv, b.phi);
            out.parts.push_back(GammaPrimary{PA.ell, H, action});
        }
    std::sort(out.parts.begin(), out.parts.end(),
              [](const GammaPrimary& x, const GammaPrimary& y) { return x.ell < y.ell; });
    return out;
}

GammaModule pi0_mult(const GammaModule& M, long p) {
    GammaModule out;
    for (const auto& P : M.parts)
        if (P.ell != p) out.parts.push_back(P);
    return out;
}

GammaModule mult_tensor_piece(const GammaModule& pi0, const GammaModule& M2) {
    if (pi0.is_zero()) return gamma_zero();
    return hom_conj(pi0, M2);
}

GammaModule mult_mult_tensor(const GammaModule& M1, const GammaModule& M2, long p) {
    return invert_p(tor_diag(M1, M2), p);
}

AbGroup fixed_points(const GammaModule& M) {
    AbGroup out;
    // free part: integer kernel of (phi - 1), rank over Q
    if (M.rank > 0) {
        size_t n = static_cast<size_t>(M.rank);
        std::vector<std::vector<mpq_class>> W(n, std::vector<mpq_class>(n));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                W[i][j] = M.phi_free[i][j] - (i == j ? 1 : 0);
        // rank by elimination
        size_t rank = 0;
        for (size_t c = 0; c < n && rank < n; ++c) {
            size_t piv = rank;
            while (piv < n && W[piv][c] == 0) ++piv;
            if (piv == n) continue;
            std::swap(W[rank], W[piv]);
            for (size_t r = rank + 1; r < n; ++r) {
                if (W[r][c] == 0) continue;
                mpq_class f = W[r][c] / W[rank][c];
                for (size_t j = c; j < n; ++j) W[r][j] -= f * W[rank][j];
            }
            ++rank;
        }
        out.rank = M.rank - static_cast<long>(rank);
    }
    for (const auto& P : M.parts) {
        ModMap delta = map_sub(P.phi, identity_map(P.M));
        SubModule K = kernel(delta);
        for (int e : K.sub.sorted_divisors())
            out.cyclic.push_back(static_cast<long>(pow_u64(static_cast<u64>(P.ell), static_cast<u64>(e))));
    }
    std::sort(out.cyclic.begin(), out.cyclic.end(), std::greater<>());
    return out;
}

Trilean gamma_isomorphic(const GammaModule& A, const GammaModule& B) {
    if (!gamma_eq_structure(A, B)) return Trilean::No;
    // free part: compare matrices (conjugacy over GL_n(Z) is only decided for
    // rank <= 1 and for identical matrices)
    if (A.rank != B.rank) return Trilean::No;
    if (A.rank >= 1) {
        if (A.rank == 1) {
            if (A.phi_free[0][0] != B.phi_free[0][0]) return Trilean::No;
        } else if (A.phi_free != B.phi_free) {
            return Trilean::Undecided;
        }
    }
    for (const auto& PA : A.parts) {
        const GammaPrimary* pb = nullptr;
        for (const auto& PB : B.parts)
            if (PB.ell == PA.ell) pb = &PB;
        if (!pb) return Trilean::No;
        int N = std::max(PA.M.R->N(), pb->M.R->N());
        GammaPrimary a = rebase(PA, N), b = rebase(*pb, N);
        // wrap the actions as Dieudonne-style modules with V = 0 to reuse the
        // sigma-twisted intertwiner machinery (twists are 0 here: d = 1)
        const UnramRing& R = *a.M.R;
        DieudonneModule DA{a.M, ModMap(a.M, a.M, 1, a.phi.A), zero_map(a.M, a.M, -1)};
        DieudonneModule DB{b.M, ModMap(b.M, b.M, 1, b.phi.A), zero_map(b.M, b.M, -1)};
        (void)R;
        Trilean t = is_isomorphic(DA, DB);
        if (t != Trilean::Yes) return t;
    }
    return Trilean::Yes;
}

GammaModule gamma_from_pairing(long p, const std::vector<int>& divisors,
                               const std::vector<std::vector<u64>>& frobenius) {
    GammaModule out;
    if (divisors.empty()) return out;
    int N = *std::max_element(divisors.begin(), divisors.end());
    const UnramRing& R = unram_ring(p, 1, N);
    FinMod M(R, divisors);
    UMat A(R, M.rank(), M.rank());
    for (int j = 0; j < M.rank(); ++j)
        for (int i = 0; i < M.rank(); ++i)
            A.at(i, j) = R.from_int(static_cast<i64>(frobenius[static_cast<size_t>(j)][static_cast<size_t>(i)]));
    GammaPrimary P{p, M, ModMap(M, M, 0, std::move(A))};
    check_automorphism(P);
    out.parts.push_back(std::move(P));
    return out;
}

std::string describe(const GammaModule& M) {
    if (M.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    if (M.rank > 0) {
        os << "Z^" << M.rank;
        first = false;
    }
    for (long n : M.cyclic_orders()) {
        if (!first) os << " + ";
        os << "Z/" << n;
        first = false;
    }
    return os.str();
}

} // namespace gst
