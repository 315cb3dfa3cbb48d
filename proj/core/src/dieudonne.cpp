#include "gst/dieudonne.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace gst {

std::optional<std::string> validate(const DieudonneModule& D) {
    if (D.is_zero()) return std::nullopt;
    if (D.F.twist != 1) return "F must have twist +1";
    if (D.V.twist != -1) return "V must have twist -1";
    ModMap p = p_power_map(D.M, 1);
    ModMap fv = compose(D.F, D.V);
    if (!map_is_zero(map_sub(fv, ModMap(D.M, D.M, 0, p.A))))
        return "FV != p";
    ModMap vf = compose(D.V, D.F);
    if (!map_is_zero(map_sub(vf, ModMap(D.M, D.M, 0, p.A))))
        return "VF != p";
    return std::nullopt;
}

DieudonneModule dd_zero(const UnramRing& R) {
    FinMod M(R, {});
    return DieudonneModule{M, zero_map(M, M, 1), zero_map(M, M, -1)};
}

DieudonneModule dd_make(FinMod M, ModMap F, ModMap V) {
    DieudonneModule D{std::move(M), std::move(F), std::move(V)};
    if (auto err = validate(D)) throw std::invalid_argument("dd_make: " + *err);
    return D;
}

DieudonneModule dsum(const DieudonneModule& A, const DieudonneModule& B) {
    if (A.is_zero()) return B;
    if (B.is_zero()) return A;
    return DieudonneModule{direct_sum(A.M, B.M), sum_map(A.F, B.F), sum_map(A.V, B.V)};
}

DieudonneModule d_alpha(const UnramRing& R, int r) {
    if (r < 0) throw std::invalid_argument("d_alpha: r >= 0 required");
    if (r == 0) return dd_zero(R);
    FinMod M(R, std::vector<int>(static_cast<size_t>(r), 1));
    UMat F(R, r, r);
    for (int i = 0; i + 1 < r; ++i) F.at(i + 1, i) = R.one();
    return dd_make(M, ModMap(M, M, 1, std::move(F)), zero_map(M, M, -1));
}

DieudonneModule d_const(const UnramRing& R, int m) {
    if (m < 0) throw std::invalid_argument("d_const: m >= 0 required");
    if (m == 0) return dd_zero(R);
    if (m > R.N()) throw std::invalid_argument("d_const: m exceeds the ring precision N");
    FinMod M(R, {m});
    UMat F(R, 1, 1), V(R, 1, 1);
    F.at(0, 0) = R.one();
    V.at(0, 0) = R.from_int(R.p());
    return dd_make(M, ModMap(M, M, 1, std::move(F)), ModMap(M, M, -1, std::move(V)));
}

DieudonneModule d_mu(const UnramRing& R, int m) {
    if (m < 0) throw std::invalid_argument("d_mu: m >= 0 required");
    if (m == 0) return dd_zero(R);
    if (m > R.N()) throw std::invalid_argument("d_mu: m exceeds the ring precision N");
    FinMod M(R, {m});
    UMat F(R, 1, 1), V(R, 1, 1);
    F.at(0, 0) = R.from_int(R.p());
    V.at(0, 0) = R.one();
    return dd_make(M, ModMap(M, M, 1, std::move(F)), ModMap(M, M, -1, std::move(V)));
}

DieudonneModule d_wittker(const UnramRing& R, int m, int n) {
    if (m < 0 || n < 0) throw std::invalid_argument("d_wittker: m, n >= 0 required");
    if (m == 0 || n == 0) return dd_zero(R);
    // basis g_0 = 1, g_i = V^i (1 <= i < m), h_j = F^j (1 <= j < n);
    // ord(g_i) = p^{min(m-i, n)}, ord(h_j) = p^{min(n-j, m)}
    std::vector<int> e;
    e.push_back(std::min(m, n));
    for (int i = 1; i < m; ++i) e.push_back(std::min(m - i, n));
    for (int j = 1; j < n; ++j) e.push_back(std::min(n - j, m));
    for (int dv : e)
        if (dv > R.N()) throw std::invalid_argument("d_wittker: precision N too small");
    FinMod M(R, e);
    auto gi = [&](int i) { return i; };
    auto hj = [&](int j) { return m - 1 + j; };
    UMat F(R, M.rank(), M.rank()), V(R, M.rank(), M.rank());
    if (n > 1) F.at(hj(1), gi(0)) = R.one();
    for (int i = 1; i < m; ++i) F.at(gi(i - 1), gi(i)) = R.from_int(R.p());
    for (int j = 1; j + 1 < n; ++j) F.at(hj(j + 1), hj(j)) = R.one();
    for (int i = 0; i + 1 < m; ++i) V.at(gi(i + 1), gi(i)) = R.one();
    if (n > 1) V.at(gi(0), hj(1)) = R.from_int(R.p());
    for (int j = 2; j < n; ++j) V.at(hj(j - 1), hj(j)) = R.from_int(R.p());
    return dd_make(M, ModMap(M, M, 1, std::move(F)), ModMap(M, M, -1, std::move(V)));
}

namespace {

int stabilization_steps(const DieudonneModule& D) {
    return static_cast<int>(D.M.length()) * D.ring().d() + 1;
}

ModMap iterate(const ModMap& f, int s) {
    ModMap r = identity_map(f.src);
    for (int i = 0; i < s; ++i) r = compose(f, r);
    return r;
}

std::pair<DieudonneModule, DieudonneModule> fitting_split(const DieudonneModule& D,
                                                          const ModMap& op) {
    if (D.is_zero()) return {D, D};
    int s = stabilization_steps(D);
    ModMap ops = iterate(op, s);
    SubModule E = image(ops);
    SubModule C = kernel(ops);
    auto restrict_part = [&](const SubModule& S) {
        return dd_make(S.sub, restrict_map(D.F, S), restrict_map(D.V, S));
    };
    return {restrict_part(E), restrict_part(C)};
}

} // namespace

bool f_bijective(const DieudonneModule& D) {
    return D.is_zero() || kernel(D.F).sub.is_zero();
}
bool f_nilpotent(const DieudonneModule& D) {
    if (D.is_zero()) return true;
    return map_is_zero(iterate(D.F, stabilization_steps(D)));
}
bool v_bijective(const DieudonneModule& D) {
    return D.is_zero() || kernel(D.V).sub.is_zero();
}
bool v_nilpotent(const DieudonneModule& D) {
    if (D.is_zero()) return true;
    return map_is_zero(iterate(D.V, stabilization_steps(D)));
}

std::pair<DieudonneModule, DieudonneModule> fitting_split_F(const DieudonneModule& D) {
    return fitting_split(D, D.F);
}

std::pair<DieudonneModule, DieudonneModule> fitting_split_V(const DieudonneModule& D) {
    return fitting_split(D, D.V);
}

StarModule star(const DieudonneModule& K, const DieudonneModule& L) {
    return StarModule{tor_mod(K.M, L.M), tor_map(K.F, L.F)};
}

DieudonneModule matlis_dual(const DieudonneModule& D) {
    if (D.is_zero()) return D;
    const UnramRing& R = D.ring();
    FinMod I = D.M; // same divisors, dual basis
    int r = I.rank();
    UMat FI(R, r, r), VI(R, r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            int sh = I.e[static_cast<size_t>(j)] - I.e[static_cast<size_t>(i)];
            UnramElem fv = R.sigma(D.V.A.at(i, j), 1);
            UnramElem vv = R.sigma(D.F.A.at(i, j), -1);
            FI.at(j, i) = sh >= 0 ? R.mul_pk(fv, sh) : R.div_pk(fv, -sh);
            VI.at(j, i) = sh >= 0 ? R.mul_pk(vv, sh) : R.div_pk(vv, -sh);
        }
    return dd_make(I, ModMap(I, I, 1, std::move(FI)), ModMap(I, I, -1, std::move(VI)));
}

DieudonneModule cartier_dual(const DieudonneModule& D) { return matlis_dual(D); }

DieudonneModule base_change(const DieudonneModule& D, int m) {
    const UnramRing& R = D.ring();
    if (m == 1) return D;
    const UnramRing& S = unram_ring(R.p(), R.d() * m, R.N());
    const UnramEmbedding& eps = unram_embedding(R, S);
    FinMod M(S, D.M.e);
    auto lift_mat = [&](const UMat& A) {
        UMat B(S, A.rows, A.cols);
        for (int i = 0; i < A.rows; ++i)
            for (int j = 0; j < A.cols; ++j) B.at(i, j) = eps.apply(A.at(i, j));
        return B;
    };
    return dd_make(M, ModMap(M, M, 1, lift_mat(D.F.A)), ModMap(M, M, -1, lift_mat(D.V.A)));
}

namespace {

std::vector<std::vector<int>> iso_invariants(const DieudonneModule& D) {
    std::vector<std::vector<int>> inv;
    inv.push_back(D.M.sorted_divisors());
    std::vector<ModMap> words;
    words.push_back(D.F);
    words.push_back(D.V);
    words.push_back(compose(D.F, D.F));
    words.push_back(compose(D.V, D.V));
    words.push_back(compose(D.F, compose(D.F, D.F)));
    words.push_back(compose(D.V, compose(D.V, D.V)));
    for (const auto& w : words) {
        inv.push_back(kernel(w).sub.sorted_divisors());
        inv.push_back(image(w).sub.sorted_divisors());
    }
    return inv;
}

bool is_invertible(const UMat& A) {
    if (A.rows != A.cols) return false;
    SmithResult s = smith(A);
    for (int e : s.exps)
        if (e != 0) return false;
    return true;
}

} // namespace

Trilean is_isomorphic(const DieudonneModule& A, const DieudonneModule& B,
                      const IsoOptions& opt) {
    if (A.is_zero() && B.is_zero()) return Trilean::Yes;
    if (A.M.sorted_divisors() != B.M.sorted_divisors()) return Trilean::No;
    if (A.is_zero() != B.is_zero()) return Trilean::No;
    if (iso_invariants(A) != iso_invariants(B)) return Trilean::No;

    const UnramRing& R = A.ring();
    // unknown X in Hom_W(M_A, M_B) with X F_A = F_B sigma(X) and
    // X V_A = V_B sigma^{-1}(X); X[i][a] = u[a*rb+i] p^{(eB_i - eA_a)^+}
    FinMod H = hom_mod(A.M, B.M);
    int ra = A.M.rank(), rb = B.M.rank();

    FinMod T(R, [&] {
        std::vector<int> te;
        for (int i = 0; i < rb; ++i)
            for (int j = 0; j < ra; ++j) te.push_back(B.M.e[static_cast<size_t>(i)]);
        return te;
    }());

    auto left_term = [&](const UMat& WA) {
        // (X * WA)[i][j] = sum_a u[a*rb+i] p^{(eB_i-eA_a)^+} WA[a][j]
        UMat L(R, rb * ra, H.rank());
        for (int i = 0; i < rb; ++i)
            for (int j = 0; j < ra; ++j)
                for (int a = 0; a < ra; ++a) {
                    int sh = std::max(B.M.e[static_cast<size_t>(i)] - A.M.e[static_cast<size_t>(a)], 0);
                    L.at(i * ra + j, a * rb + i) =
                        R.add(L.at(i * ra + j, a * rb + i), R.mul_pk(WA.at(a, j), sh));
                }
        return L;
    };
    auto right_term = [&](const UMat& WB) {
        // (WB * sigma^t(X))[i][j] = sum_b WB[i][b] sigma^t(u[j*rb+b]) p^{(eB_b-eA_j)^+}
        UMat L(R, rb * ra, H.rank());
        for (int i = 0; i < rb; ++i)
            for (int j = 0; j < ra; ++j)
                for (int b = 0; b < rb; ++b) {
                    int sh = std::max(B.M.e[static_cast<size_t>(b)] - A.M.e[static_cast<size_t>(j)], 0);
                    L.at(i * ra + j, j * rb + b) =
                        R.add(L.at(i * ra + j, j * rb + b), R.mul_pk(WB.at(i, b), sh));
                }
        return L;
    };

    std::vector<ZCondition> conds;
    conds.push_back(ZCondition{T, {ZTerm{left_term(A.F.A), 0}, ZTerm{mat_neg(right_term(B.F.A)), 1}}});
    conds.push_back(ZCondition{T, {ZTerm{left_term(A.V.A), 0}, ZTerm{mat_neg(right_term(B.V.A)), -1}}});
    ZSolutionSpace sols = zsolve(H, conds);

    auto test = [&](const UVec& u) { return is_invertible(hom_element(A.M, B.M, u).A); };

    double log_count = 0;
    for (int dlog : sols.z_divisors) log_count += dlog * std::log2(static_cast<double>(R.p()));
    if (log_count <= std::log2(static_cast<double>(opt.enum_cap))) {
        std::vector<u64> bound;
        for (int dv : sols.z_divisors)
            bound.push_back(pow_u64(static_cast<u64>(R.p()), static_cast<u64>(dv)));
        std::vector<u64> cnt(bound.size(), 0);
        while (true) {
            UVec x = zero_vec(H);
            for (size_t k = 0; k < cnt.size(); ++k)
                if (cnt[k])
                    x = add_vec(H, x, scal_vec(H, R.from_int(static_cast<i64>(cnt[k])), sols.basis[k]));
            if (test(x)) return Trilean::Yes;
            size_t k = 0;
            while (k < cnt.size()) {
                if (++cnt[k] < bound[k]) break;
                cnt[k] = 0;
                ++k;
            }
            if (k >= cnt.size()) break;
        }
        return Trilean::No;
    }
    std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
    for (int it = 0; it < opt.samples; ++it) {
        UVec x = zero_vec(H);
        for (size_t k = 0; k < sols.basis.size(); ++k) {
            u64 c = rng() % pow_u64(static_cast<u64>(R.p()), static_cast<u64>(sols.z_divisors[k]));
            if (c) x = add_vec(H, x, scal_vec(H, R.from_int(static_cast<i64>(c)), sols.basis[k]));
        }
        if (test(x)) return Trilean::Yes;
    }
    return Trilean::Undecided;
}

std::string describe(const DieudonneModule& D) {
    std::ostringstream os;
    os << describe(D.M);
    return os.str();
}

} // namespace gst
