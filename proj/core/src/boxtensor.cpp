#include "gst/boxtensor.hpp"

namespace gst {

namespace {

UnramElem shift_exact(const UnramRing& R, const UnramElem& x, int k) {
    return k >= 0 ? R.mul_pk(x, k) : R.div_pk(x, -k);
}

int pos(int x) { return x > 0 ? x : 0; }

// partial operator on the canonical Tor generators: copywise application of
// g on the L-side; inherits g's twist
UMat tor_partial_right(const FinMod& MK, const ModMap& g) {
    const UnramRing& R = *MK.R;
    const FinMod& L = g.src;
    int rK = MK.rank(), rL = L.rank();
    UMat B(R, rK * rL, rK * rL);
    for (int i = 0; i < rK; ++i)
        for (int j = 0; j < rL; ++j) {
            int up = pos(L.e[static_cast<size_t>(j)] - MK.e[static_cast<size_t>(i)]);
            for (int k = 0; k < rL; ++k) {
                int down = pos(L.e[static_cast<size_t>(k)] - MK.e[static_cast<size_t>(i)]);
                UnramElem v = R.mul_pk(g.A.at(k, j), up);
                B.at(i * rL + k, i * rL + j) = shift_exact(R, v, -down);
            }
        }
    return B;
}

// partial operator from the K-side map through its resolution lift; the
// presentation-level map carries no coordinate twist
UMat tor_partial_left(const ModMap& f, const FinMod& L) {
    const UnramRing& R = *L.R;
    const FinMod& MK = f.src;
    int rK = MK.rank(), rL = L.rank();
    UMat lift = resolution_lift(f);
    UMat B(R, rK * rL, rK * rL);
    for (int i = 0; i < rK; ++i)
        for (int j = 0; j < rL; ++j) {
            int up = pos(L.e[static_cast<size_t>(j)] - MK.e[static_cast<size_t>(i)]);
            for (int i2 = 0; i2 < rK; ++i2) {
                int down = pos(L.e[static_cast<size_t>(j)] - MK.e[static_cast<size_t>(i2)]);
                UnramElem v = R.mul_pk(lift.at(i2, i), up);
                B.at(i2 * rL + j, i * rL + j) = shift_exact(R, v, -down);
            }
        }
    return B;
}

// sequence ambient (+)_{i<B} T with plain W-action (untwisted coordinates)
FinMod sequence_ambient(const FinMod& T, int B) {
    std::vector<int> e;
    for (int i = 0; i < B; ++i) e.insert(e.end(), T.e.begin(), T.e.end());
    return FinMod(*T.R, e);
}

// F on sequences in untwisted coordinates: (Fy)_0 = F_T y_0, (Fy)_i = p sigma(y_{i-1})
ModMap sequence_F(const StarModule& T, int B) {
    const UnramRing& R = *T.M.R;
    FinMod amb = sequence_ambient(T.M, B);
    int r = T.M.rank();
    UMat A(R, amb.rank(), amb.rank());
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) A.at(i, j) = T.F.A.at(i, j);
    for (int lvl = 1; lvl < B; ++lvl)
        for (int i = 0; i < r; ++i)
            A.at(lvl * r + i, (lvl - 1) * r + i) = R.from_int(R.p());
    return ModMap(amb, amb, 1, std::move(A));
}

// V on sequences: (Vy)_i = sigma^{-1}(y_{i+1})
ModMap sequence_V(const StarModule& T, int B) {
    const UnramRing& R = *T.M.R;
    FinMod amb = sequence_ambient(T.M, B);
    int r = T.M.rank();
    UMat A(R, amb.rank(), amb.rank());
    for (int lvl = 0; lvl + 1 < B; ++lvl)
        for (int i = 0; i < r; ++i) A.at(lvl * r + i, (lvl + 1) * r + i) = R.one();
    return ModMap(amb, amb, -1, std::move(A));
}

struct SequenceConditions {
    FinMod amb;                 // untwisted coordinates
    std::vector<ZCondition> conds; // expressed on the twisted coordinates x
};

// the defining system on the twisted coordinates x_0..x_{B-1}, with x_B = 0
std::vector<ZCondition> sequence_system(const DieudonneModule& K, const DieudonneModule& L,
                                        const StarModule& T, int B) {
    const UnramRing& R = *T.M.R;
    int r = T.M.rank();
    FinMod amb = sequence_ambient(T.M, B);
    UMat B1F = tor_partial_right(K.M, L.F);
    UMat B1V = tor_partial_right(K.M, L.V);
    UMat BV1 = tor_partial_left(K.V, L.M);
    UMat BF1 = tor_partial_left(K.F, L.M);

    auto level_block = [&](const UMat& Op, int lvl) {
        // Op acting on the x_{lvl} block, as a matrix amb -> T
        UMat Lm(R, r, amb.rank());
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) Lm.at(i, lvl * r + j) = Op.at(i, j);
        return Lm;
    };

    std::vector<ZCondition> conds;
    UMat pI = mat_scalar(UMat::identity(R, r), R.from_int(R.p()));
    for (int i = 0; i < B; ++i) {
        // (1) F_T x_{i+1} - p x_i = 0
        {
            std::vector<ZTerm> terms;
            if (i + 1 < B) terms.push_back(ZTerm{level_block(T.F.A, i + 1), 1});
            terms.push_back(ZTerm{mat_neg(level_block(pI, i)), 0});
            conds.push_back(ZCondition{T.M, std::move(terms)});
        }
        // (2) (1*F) x_{i+1} - (V*1) x_i = 0
        {
            std::vector<ZTerm> terms;
            if (i + 1 < B) terms.push_back(ZTerm{level_block(B1F, i + 1), 1});
            terms.push_back(ZTerm{mat_neg(level_block(BV1, i)), 0});
            conds.push_back(ZCondition{T.M, std::move(terms)});
        }
        // (3) (F*1) x_{i+1} - (1*V) x_i = 0
        {
            std::vector<ZTerm> terms;
            if (i + 1 < B) terms.push_back(ZTerm{level_block(BF1, i + 1), 0});
            terms.push_back(ZTerm{mat_neg(level_block(B1V, i)), -1});
            conds.push_back(ZCondition{T.M, std::move(terms)});
        }
    }
    return conds;
}

// untwist solutions (y_i = sigma^i(x_i)) and extract the W-structure with
// the restricted F and V
DieudonneModule solutions_to_module(const DieudonneModule& K, const DieudonneModule& L,
                                    const StarModule& T, int B, const ZSolutionSpace& sols) {
    const UnramRing& R = *T.M.R;
    FinMod amb = sequence_ambient(T.M, B);
    int r = T.M.rank();
    std::vector<UVec> ys;
    for (const auto& x : sols.basis) {
        UVec y = x;
        for (int lvl = 0; lvl < B; ++lvl)
            for (int i = 0; i < r; ++i)
                y[static_cast<size_t>(lvl * r + i)] = R.sigma(x[static_cast<size_t>(lvl * r + i)], lvl);
        ys.push_back(std::move(y));
    }
    SubModule S = submodule(amb, ys);
    // the solution set must be a W-submodule; its W-length times d matches
    // the Z-length of the solution group
    if (S.sub.length() * R.d() != sols.z_length())
        throw std::logic_error("boxast_u: solution set is not W-stable");
    if (S.sub.is_zero()) return dd_zero(R);
    ModMap F = restrict_map(sequence_F(T, B), S);
    ModMap V = restrict_map(sequence_V(T, B), S);
    (void)K;
    (void)L;
    return dd_make(S.sub, F, V);
}

ZSolutionSpace solve_sequences(const DieudonneModule& K, const DieudonneModule& L,
                               const StarModule& T, int B) {
    FinMod amb = sequence_ambient(T.M, B);
    return zsolve(amb, sequence_system(K, L, T, B));
}

} // namespace

BoxastResult boxast_u(const DieudonneModule& K, const DieudonneModule& L, int bound) {
    if (bound < 1) throw std::invalid_argument("boxast_u: bound must be >= 1");
    const UnramRing& R = K.ring();
    BoxastResult out;
    out.bound = bound;
    StarModule T = star(K, L);
    if (T.M.is_zero()) {
        out.module = dd_zero(R);
        out.stabilized = true;
        out.growth.assign(static_cast<size_t>(bound), 0);
        return out;
    }
    std::vector<ZSolutionSpace> spaces;
    for (int b = 1; b <= bound + 1; ++b) spaces.push_back(solve_sequences(K, L, T, b));
    for (int b = 1; b <= bound; ++b) {
        long zl = spaces[static_cast<size_t>(b - 1)].z_length();
        out.growth.push_back(zl / R.d());
    }
    out.module = solutions_to_module(K, L, T, bound, spaces[static_cast<size_t>(bound - 1)]);
    // stabilized iff the bound-(B+1) solutions are exactly the bound-B ones:
    // same group structure and every basis solution vanishes at the top level
    const ZSolutionSpace& next = spaces[static_cast<size_t>(bound)];
    bool stab = next.z_divisors == spaces[static_cast<size_t>(bound - 1)].z_divisors;
    if (stab) {
        int r = T.M.rank();
        for (const auto& x : next.basis)
            for (int i = 0; i < r; ++i)
                if (!R.is_zero(R.reduce_mod_pk(x[static_cast<size_t>(bound * r + i)],
                                               T.M.e[static_cast<size_t>(i)])))
                    stab = false;
    }
    out.stabilized = stab;
    return out;
}

DieudonneModule boxast_u_oracle(const DieudonneModule& K, const DieudonneModule& L, int bound) {
    if (bound < 1) throw std::invalid_argument("boxast_u_oracle: bound must be >= 1");
    const UnramRing& R = K.ring();
    StarModule T = star(K, L);
    if (T.M.is_zero()) return dd_zero(R);
    int r = T.M.rank();
    FinMod amb = sequence_ambient(T.M, bound);
    std::vector<ZCondition> conds = sequence_system(K, L, T, bound);

    // extra conditions from the basis elements F^j of the truncation,
    // j = 1..B-1, all constraining x_0:
    //   (1*F)(p F_T^{j-1} x_0) = (V*1)(F_T^j x_0)
    //   (F*1)(p F_T^{j-1} x_0) = (1*V)(F_T^j x_0)
    UMat B1F = tor_partial_right(K.M, L.F);
    UMat B1V = tor_partial_right(K.M, L.V);
    UMat BV1 = tor_partial_left(K.V, L.M);
    UMat BF1 = tor_partial_left(K.F, L.M);
    auto on_x0 = [&](const UMat& Op) {
        UMat Lm(R, r, amb.rank());
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) Lm.at(i, j) = Op.at(i, j);
        return Lm;
    };
    // compose concrete twisted operators: (L1, t1) after (L2, t2)
    auto comp = [&](const UMat& L1, int t1, const UMat& L2, int t2) {
        return std::make_pair(mat_mul(L1, sigma_mat(L2, t1)), t1 + t2);
    };
    UMat Fj = UMat::identity(R, r); // F_T^j with twist j
    for (int j = 1; j < bound; ++j) {
        UMat Fj1 = Fj; // F^{j-1}, twist j-1
        Fj = mat_mul(T.F.A, sigma_mat(Fj1, 1));
        UMat pFj1 = mat_scalar(Fj1, R.from_int(R.p()));
        {
            auto [l, t] = comp(B1F, 1, pFj1, j - 1);
            auto [rr, rt] = comp(BV1, 0, Fj, j);
            conds.push_back(ZCondition{T.M, {ZTerm{on_x0(l), t}, ZTerm{mat_neg(on_x0(rr)), rt}}});
        }
        {
            auto [l, t] = comp(BF1, 0, pFj1, j - 1);
            auto [rr, rt] = comp(B1V, -1, Fj, j);
            conds.push_back(ZCondition{T.M, {ZTerm{on_x0(l), t}, ZTerm{mat_neg(on_x0(rr)), rt}}});
        }
    }
    ZSolutionSpace sols = zsolve(amb, conds);
    return solutions_to_module(K, L, T, bound, sols);
}

BoxcResult boxc_trunc(const DieudonneModule& M1, const DieudonneModule& M2, int bound) {
    if (bound < 1) throw std::invalid_argument("boxc_trunc: bound must be >= 1");
    const UnramRing& R = M1.ring();
    BoxcResult out;
    out.bound = bound;
    FinMod Z = tensor_mod(M1.M, M2.M);
    if (Z.is_zero()) {
        out.module = dd_zero(R);
        return out;
    }
    ModMap VZ = tensor_map(M1.V, M2.V); // diagonal V, twist -1
    int r = Z.rank();
    FinMod amb = sequence_ambient(Z, bound);

    // relations, in untwisted coordinates u_j = sigma^j(level-j content)
    std::vector<UVec> rels;
    // (ii) level j+1: sigma^{j+1}(V_Z z_c); level j: -p z_c
    for (int j = 0; j + 1 < bound; ++j)
        for (int c = 0; c < r; ++c) {
            UVec v = zero_vec(amb);
            for (int i = 0; i < r; ++i)
                v[static_cast<size_t>((j + 1) * r + i)] = R.sigma(VZ.A.at(i, c), j + 1);
            v[static_cast<size_t>(j * r + c)] = R.neg(R.from_int(R.p()));
            rels.push_back(std::move(v));
        }
    // (iii) truncated relation at the top: p * (level B-1) = 0
    for (int c = 0; c < r; ++c) {
        UVec v = zero_vec(amb);
        v[static_cast<size_t>((bound - 1) * r + c)] = R.from_int(R.p());
        rels.push_back(std::move(v));
    }
    // Dieudonne-pairing relations F (x) x (x) Vy - 1 (x) Fx (x) y and
    // F (x) Vx (x) y - 1 (x) x (x) Fy, shifted by F^c
    int r1 = M1.M.rank(), r2 = M2.M.rank();
    auto tensor_col = [&](const UMat& Acol1, int c1, const UMat& Acol2, int c2) {
        // (A1 e_{c1}) (x) (A2 e_{c2}) as a vector in Z
        UVec v(static_cast<size_t>(r), R.zero());
        for (int a = 0; a < Acol1.rows; ++a)
            for (int b = 0; b < Acol2.rows; ++b)
                v[static_cast<size_t>(a * r2 + b)] = R.mul(Acol1.at(a, c1), Acol2.at(b, c2));
        return v;
    };
    UMat I1 = UMat::identity(R, r1), I2 = UMat::identity(R, r2);
    for (int c = 0; c < bound; ++c) {
        for (int a = 0; a < r1; ++a)
            for (int b = 0; b < r2; ++b) {
                // gen1: F^{c+1} (x) (e_a (x) V f_b) - F^c (x) (F e_a (x) f_b)
                {
                    UVec v = zero_vec(amb);
                    if (c + 1 < bound) {
                        UVec hi = tensor_col(I1, a, M2.V.A, b);
                        for (int i = 0; i < r; ++i)
                            v[static_cast<size_t>((c + 1) * r + i)] = R.sigma(hi[static_cast<size_t>(i)], c + 1);
                    }
                    UVec lo = tensor_col(M1.F.A, a, I2, b);
                    for (int i = 0; i < r; ++i)
                        v[static_cast<size_t>(c * r + i)] =
                            R.sub(v[static_cast<size_t>(c * r + i)], R.sigma(lo[static_cast<size_t>(i)], c));
                    rels.push_back(std::move(v));
                }
                // gen2: F^{c+1} (x) (V e_a (x) f_b) - F^c (x) (e_a (x) F f_b)
                {
                    UVec v = zero_vec(amb);
                    if (c + 1 < bound) {
                        UVec hi = tensor_col(M1.V.A, a, I2, b);
                        for (int i = 0; i < r; ++i)
                            v[static_cast<size_t>((c + 1) * r + i)] = R.sigma(hi[static_cast<size_t>(i)], c + 1);
                    }
                    UVec lo = tensor_col(I1, a, M2.F.A, b);
                    for (int i = 0; i < r; ++i)
                        v[static_cast<size_t>(c * r + i)] =
                            R.sub(v[static_cast<size_t>(c * r + i)], R.sigma(lo[static_cast<size_t>(i)], c));
                    rels.push_back(std::move(v));
                }
            }
    }

    QuotModule Q = quotient(amb, rels);
    if (Q.quot.is_zero()) {
        out.module = dd_zero(R);
        return out;
    }

    // F: level shift up (untwisted: (Fu)_{j+1} = sigma(u_j)), top level dies
    UMat FA(R, amb.rank(), amb.rank());
    for (int j = 0; j + 1 < bound; ++j)
        for (int i = 0; i < r; ++i) FA.at((j + 1) * r + i, j * r + i) = R.one();
    ModMap Famb(amb, amb, 1, std::move(FA));
    // V: (Vu)_j = p sigma^{-1}(u_{j+1}), plus V_Z on level 0
    UMat VA(R, amb.rank(), amb.rank());
    for (int j = 0; j + 1 < bound; ++j)
        for (int i = 0; i < r; ++i) VA.at(j * r + i, (j + 1) * r + i) = R.from_int(R.p());
    for (int i = 0; i < r; ++i)
        for (int c = 0; c < r; ++c) VA.at(i, c) = R.add(VA.at(i, c), VZ.A.at(i, c));
    ModMap Vamb(amb, amb, -1, std::move(VA));

    ModMap FQ = factor_through(Q, compose(Q.proj, Famb));
    ModMap VQ = factor_through(Q, compose(Q.proj, Vamb));
    out.module = dd_make(Q.quot, FQ, VQ);
    return out;
}

DieudonneModule v_power_kernel(const DieudonneModule& D, int n) {
    if (D.is_zero()) return D;
    ModMap Vn = identity_map(D.M);
    for (int i = 0; i < n; ++i) Vn = compose(D.V, Vn);
    SubModule K = kernel(Vn);
    if (K.sub.is_zero()) return dd_zero(D.ring());
    return dd_make(K.sub, restrict_map(D.F, K), restrict_map(D.V, K));
}

PairingSpace dieudonne_pairings(const DieudonneModule& M1, const DieudonneModule& M2,
                                int level_m, int exponent_e) {
    const UnramRing& R = M1.ring();
    PairingSpace out;
    out.level_m = level_m;
    out.exponent_e = exponent_e;
    if (M1.is_zero() || M2.is_zero()) return out;

    // required exponent: the p-exponent of M1 * M2
    int e_needed = 0;
    for (int a : M1.M.e)
        for (int b : M2.M.e) e_needed = std::max(e_needed, std::min(a, b));
    if (exponent_e < e_needed) throw PairingExponentTooSmall(e_needed);

    const UnramRing& Rsmall_e = unram_ring(R.p(), R.d(), exponent_e);
    const UnramRing& Rbig = unram_ring(R.p(), R.d() * level_m, exponent_e);
    const UnramEmbedding& eps = unram_embedding(Rsmall_e, Rbig);
    auto embed = [&](const UnramElem& w) {
        // coefficient transport across precisions: the Teichmueller modulus
        // lifts are compatible mod p^min, and the ambiguity is killed by the
        // pairing orders
        UnramElem v = Rsmall_e.zero();
        for (int i = 0; i < R.d(); ++i)
            v.c[static_cast<size_t>(i)] = w.c[static_cast<size_t>(i)] % Rsmall_e.pp().mod;
        return eps.apply(v);
    };

    int r1 = M1.M.rank(), r2 = M2.M.rank();
    // unknowns phi_{(a,b)} in W(F_{q^m})/p^{min(e1_a, e2_b, e)}
    std::vector<int> udiv;
    for (int a = 0; a < r1; ++a)
        for (int b = 0; b < r2; ++b)
            udiv.push_back(std::min({M1.M.e[static_cast<size_t>(a)],
                                     M2.M.e[static_cast<size_t>(b)], exponent_e}));
    FinMod U(Rbig, udiv);
    FinMod T(Rbig, std::vector<int>(static_cast<size_t>(r1 * r2), exponent_e));

    // left application of a small-ring matrix on the first resp. second slot
    auto slot1 = [&](const UMat& A) {
        // phi(A e_a (x) f_b) = sum_{a'} eps(A[a'][a]) phi_{(a', b)}
        UMat Lm(Rbig, r1 * r2, r1 * r2);
        for (int a = 0; a < r1; ++a)
            for (int b = 0; b < r2; ++b)
                for (int a2 = 0; a2 < r1; ++a2)
                    Lm.at(a * r2 + b, a2 * r2 + b) = embed(A.at(a2, a));
        return Lm;
    };
    auto slot2 = [&](const UMat& A) {
        UMat Lm(Rbig, r1 * r2, r1 * r2);
        for (int a = 0; a < r1; ++a)
            for (int b = 0; b < r2; ++b)
                for (int b2 = 0; b2 < r2; ++b2)
                    Lm.at(a * r2 + b, a * r2 + b2) = embed(A.at(b2, b));
        return Lm;
    };
    UMat Id = UMat::identity(Rbig, r1 * r2);
    UMat pId = mat_scalar(Id, Rbig.from_int(Rbig.p()));

    std::vector<ZCondition> conds;
    // (1) phi(V x, V y) = p sigma^{-1} phi(x, y)
    conds.push_back(ZCondition{
        T,
        {ZTerm{mat_mul(slot1(M1.V.A), slot2(M2.V.A)), 0}, ZTerm{mat_neg(pId), -1}}});
    // (2) phi(F x, y) = sigma phi(x, V y)
    conds.push_back(
        ZCondition{T, {ZTerm{slot1(M1.F.A), 0}, ZTerm{mat_neg(slot2(M2.V.A)), 1}}});
    // (3) phi(x, F y) = sigma phi(V x, y)
    conds.push_back(
        ZCondition{T, {ZTerm{slot2(M2.F.A), 0}, ZTerm{mat_neg(slot1(M1.V.A)), 1}}});

    ZSolutionSpace sols = zsolve(U, conds);
    out.divisors = sols.z_divisors;
    if (sols.basis.empty()) return out;

    // Frobenius of Gal(F_{q^m}/F_q) acts by post-composition with sigma^d
    std::vector<UVec> imgs;
    for (const auto& b : sols.basis) {
        UVec y = b;
        for (auto& x : y) x = Rbig.sigma(x, R.d());
        imgs.push_back(reduce_vec(U, y));
    }
    out.frobenius = express_in_basis(sols, imgs);
    return out;
}

EtaleTower etale_part_tensor(const DieudonneModule& Cov1, const DieudonneModule& Cov2,
                             int level_cap) {
    EtaleTower tower;
    // stabilized V-power kernels
    int n1 = static_cast<int>(Cov1.M.length()) + 1;
    int n2 = static_cast<int>(Cov2.M.length()) + 1;
    DieudonneModule K1 = v_power_kernel(Cov1, n1);
    DieudonneModule K2 = v_power_kernel(Cov2, n2);
    tower.v_kernel_stabilized = {
        K1.M.sorted_divisors() == v_power_kernel(Cov1, n1 + 1).M.sorted_divisors(),
        K2.M.sorted_divisors() == v_power_kernel(Cov2, n2 + 1).M.sorted_divisors()};
    int e = 1;
    for (int a : K1.M.e)
        for (int b : K2.M.e) e = std::max(e, std::min(a, b));
    for (int m = 1; m <= level_cap; ++m)
        tower.levels.push_back(K1.is_zero() || K2.is_zero()
                                   ? PairingSpace{m, e, {}, {}}
                                   : dieudonne_pairings(K1, K2, m, e));
    tower.stabilized = tower.levels.size() >= 2 &&
                       tower.levels.back().divisors ==
                           tower.levels[tower.levels.size() - 2].divisors;
    return tower;
}

} // namespace gst
