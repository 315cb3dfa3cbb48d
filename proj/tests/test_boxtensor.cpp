#include <doctest.h>

#include "gst/boxtensor.hpp"

#include <random>

using namespace gst;

TEST_CASE("boxast_u: alpha_p (x) alpha_p grows with the bound") {
    const UnramRing& R = unram_ring(2, 1, 2);
    DieudonneModule A = d_alpha(R, 1);
    for (int B : {1, 2, 4}) {
        BoxastResult res = boxast_u(A, A, B);
        CHECK(res.module.M.length() == B);
        CHECK_FALSE(res.stabilized);
        // V shifts, F = 0, and V is nilpotent on the output
        CHECK(map_is_zero(res.module.F));
        CHECK(v_nilpotent(res.module));
        // growth profile rank(b) = b
        for (int b = 1; b <= B; ++b) CHECK(res.growth[static_cast<size_t>(b - 1)] == b);
    }
    // over F_4 as well
    const UnramRing& R4 = unram_ring(2, 2, 2);
    BoxastResult res4 = boxast_u(d_alpha(R4, 1), d_alpha(R4, 1), 3);
    CHECK(res4.module.M.length() == 3);
    CHECK_FALSE(res4.stabilized);
}

TEST_CASE("boxast_u: d_const (x) d_const is the unit-like rank-1 module") {
    for (auto [p, d] : {std::pair<long, int>{2, 1}, {3, 1}, {2, 2}}) {
        const UnramRing& R = unram_ring(p, d, 2);
        BoxastResult res = boxast_u(d_const(R, 1), d_const(R, 1), 4);
        CHECK(res.module.M.sorted_divisors() == std::vector<int>{1});
        CHECK(res.stabilized);
        CHECK(f_bijective(res.module));
        CHECK(map_is_zero(res.module.V));
    }
}

TEST_CASE("boxast_u: zero absorbing, mixed const/mu vanishes") {
    const UnramRing& R = unram_ring(2, 1, 3);
    CHECK(boxast_u(dd_zero(R), d_alpha(R, 2), 4).module.is_zero());
    // D(Z/p) (*) D(mu_p): the unipotent part of Z/p (x) mu_p is 0
    BoxastResult res = boxast_u(d_const(R, 1), d_mu(R, 1), 4);
    CHECK(res.module.is_zero());
    CHECK(res.stabilized);
}

TEST_CASE("boxast_u equals the truncation oracle on catalog pairs") {
    const UnramRing& R = unram_ring(2, 1, 3);
    std::vector<DieudonneModule> mods = {d_alpha(R, 1), d_alpha(R, 2), d_const(R, 1),
                                         d_const(R, 2), d_mu(R, 1),    d_wittker(R, 2, 1),
                                         d_wittker(R, 1, 2)};
    for (const auto& K : mods)
        for (const auto& L : mods) {
            for (int B : {1, 3}) {
                BoxastResult a = boxast_u(K, L, B);
                DieudonneModule b = boxast_u_oracle(K, L, B);
                REQUIRE(a.module.M.sorted_divisors() == b.M.sorted_divisors());
                CHECK(is_isomorphic(a.module, b) == Trilean::Yes);
            }
        }
}

TEST_CASE("boxast_u symmetry") {
    const UnramRing& R = unram_ring(2, 1, 3);
    std::vector<DieudonneModule> mods = {d_alpha(R, 2), d_const(R, 2), d_mu(R, 1),
                                         d_wittker(R, 2, 2)};
    for (const auto& K : mods)
        for (const auto& L : mods) {
            BoxastResult kl = boxast_u(K, L, 4);
            BoxastResult lk = boxast_u(L, K, 4);
            CHECK(kl.module.M.sorted_divisors() == lk.module.M.sorted_divisors());
            CHECK(is_isomorphic(kl.module, lk.module) == Trilean::Yes);
            CHECK(kl.stabilized == lk.stabilized);
        }
}

TEST_CASE("projection pi: f -> f(1) is bijective when F is bijective on K") {
    // for K = d_const(m), the solution space maps isomorphically onto K * L
    const UnramRing& R = unram_ring(2, 1, 3);
    for (const auto& L : {d_alpha(R, 2), d_const(R, 2), d_wittker(R, 2, 1)}) {
        DieudonneModule K = d_const(R, 2);
        BoxastResult res = boxast_u(K, L, 5);
        CHECK(res.stabilized);
        CHECK(res.module.M.length() == star(K, L).M.length());
    }
}

TEST_CASE("boxc_trunc: alpha_p case gives k[[F]]/F^B") {
    const UnramRing& R = unram_ring(2, 1, 2);
    DieudonneModule A = d_alpha(R, 1); // = covariant module of alpha_p: k, F=V=0
    for (int B = 1; B <= 6; ++B) {
        BoxcResult res = boxc_trunc(A, A, B);
        CHECK(res.module.M.length() == B);
        CHECK(res.module.M.sorted_divisors() == std::vector<int>(static_cast<size_t>(B), 1));
        CHECK(map_is_zero(res.module.V));
        CHECK(f_nilpotent(res.module));
    }
    CHECK(boxc_trunc(dd_zero(R), A, 3).module.is_zero());
}

TEST_CASE("duality: boxast_u(K, L) = I(boxc_trunc(I(K), I(L))) at matching bounds") {
    const UnramRing& R = unram_ring(2, 1, 3);
    std::vector<DieudonneModule> mods = {d_alpha(R, 1), d_alpha(R, 2), d_const(R, 1),
                                         d_mu(R, 1),    d_const(R, 2), d_wittker(R, 2, 1)};
    for (const auto& K : mods)
        for (const auto& L : mods) {
            for (int B : {2, 4}) {
                BoxastResult lhs = boxast_u(K, L, B);
                BoxcResult rhs = boxc_trunc(matlis_dual(K), matlis_dual(L), B);
                DieudonneModule dual = matlis_dual(rhs.module);
                REQUIRE(lhs.module.M.sorted_divisors() == dual.M.sorted_divisors());
                CHECK(is_isomorphic(lhs.module, dual) == Trilean::Yes);
            }
        }
}

TEST_CASE("dieudonne pairings: alpha_p case has F_p-dimension d*m") {
    for (auto [p, d] : {std::pair<long, int>{2, 1}, {2, 2}, {3, 1}}) {
        const UnramRing& R = unram_ring(p, d, 2);
        DieudonneModule A = d_alpha(R, 1); // covariant module of alpha_p
        for (int m = 1; m <= 3; ++m) {
            PairingSpace P = dieudonne_pairings(A, A, m, 1);
            CHECK(P.divisors == std::vector<int>(static_cast<size_t>(d * m), 1));
        }
    }
    // zero inputs
    const UnramRing& R = unram_ring(2, 1, 2);
    CHECK(dieudonne_pairings(dd_zero(R), d_alpha(R, 1), 2, 1).is_zero());
}

TEST_CASE("dieudonne pairings: exponent bound is enforced with a hint") {
    const UnramRing& R = unram_ring(2, 1, 3);
    DieudonneModule C = matlis_dual(d_const(R, 3));
    try {
        (void)dieudonne_pairings(C, C, 1, 1);
        FAIL("expected PairingExponentTooSmall");
    } catch (const PairingExponentTooSmall& e) {
        CHECK(e.suggested_e == 3);
    }
}

namespace {

// brute-force enumeration of Dieudonne pairings for p = 2, d = 1: tables
// phi_{ab} extended Z-bilinearly and checked pointwise on all module elements
long enumerate_pairings(const DieudonneModule& M1, const DieudonneModule& M2, int m, int e) {
    const UnramRing& R = M1.ring();
    REQUIRE(R.d() == 1);
    const UnramRing& Rbig = unram_ring(R.p(), m, e);
    int r1 = M1.M.rank(), r2 = M2.M.rank();
    std::vector<u64> cap;
    for (int a = 0; a < r1; ++a)
        for (int b = 0; b < r2; ++b)
            cap.push_back(pow_u64(static_cast<u64>(R.p()),
                                  static_cast<u64>(std::min({M1.M.e[static_cast<size_t>(a)],
                                                             M2.M.e[static_cast<size_t>(b)], e}))));
    // enumerate all module elements of M as integer coordinate vectors
    auto all_elems = [&](const FinMod& M) {
        std::vector<std::vector<u64>> out;
        std::vector<u64> cur(static_cast<size_t>(M.rank()), 0);
        std::vector<u64> bound;
        for (int i = 0; i < M.rank(); ++i)
            bound.push_back(pow_u64(static_cast<u64>(R.p()),
                                    static_cast<u64>(M.e[static_cast<size_t>(i)])));
        while (true) {
            out.push_back(cur);
            size_t k = 0;
            while (k < cur.size() && ++cur[k] == bound[k]) cur[k++] = 0;
            if (k == cur.size()) break;
        }
        return out;
    };
    auto elems1 = all_elems(M1.M), elems2 = all_elems(M2.M);
    auto as_vec = [&](const FinMod& M, const std::vector<u64>& c) {
        UVec v = zero_vec(M);
        for (size_t i = 0; i < c.size(); ++i) v[i] = R.from_int(static_cast<i64>(c[i]));
        return reduce_vec(M, v);
    };
    auto phi_eval = [&](const std::vector<u64>& table, const std::vector<u64>& x,
                        const std::vector<u64>& y) {
        UnramElem acc = Rbig.zero();
        for (int a = 0; a < r1; ++a)
            for (int b = 0; b < r2; ++b) {
                u64 coeff = x[static_cast<size_t>(a)] * y[static_cast<size_t>(b)] % Rbig.pp().mod;
                acc = Rbig.add(acc, Rbig.mul_scalar(coeff,
                                                    Rbig.from_int(0)).c.empty()
                                        ? Rbig.zero()
                                        : Rbig.zero());
                (void)coeff;
            }
        (void)table;
        return acc;
    };
    (void)phi_eval;
    // direct table enumeration
    std::vector<u64> table(cap.size(), 0);
    long count = 0;
    auto get_coords = [&](const UVec& v, const FinMod& M) {
        std::vector<u64> c;
        for (int i = 0; i < M.rank(); ++i) c.push_back(v[static_cast<size_t>(i)].c[0]);
        return c;
    };
    auto eval_table = [&](const std::vector<u64>& t, const std::vector<u64>& x,
                          const std::vector<u64>& y) {
        UnramElem acc = Rbig.zero();
        std::vector<UnramElem> phis;
        for (size_t k = 0; k < t.size(); ++k) phis.push_back(Rbig.from_int(static_cast<i64>(t[k])));
        // phi_{ab} is realized as t_{ab} * theta_{ab} for a fixed basis theta
        // chosen below by the caller; here theta_{ab} enumerates all of Rbig,
        // so the table stores the ring element index directly.
        (void)phis;
        for (int a = 0; a < r1; ++a)
            for (int b = 0; b < r2; ++b) {
                u64 idx = t[static_cast<size_t>(a * r2 + b)];
                // decode idx as an element of Rbig (coefficient vector)
                UnramElem w = Rbig.zero();
                u64 mres = Rbig.pp().mod;
                u64 rem = idx;
                for (int c = 0; c < Rbig.d(); ++c) {
                    w.c[static_cast<size_t>(c)] = rem % mres;
                    rem /= mres;
                }
                u64 coeff = x[static_cast<size_t>(a)] * y[static_cast<size_t>(b)];
                acc = Rbig.add(acc, Rbig.mul_scalar(coeff, w));
            }
        return acc;
    };
    // table entry (a, b) enumerates elements of Rbig of order <= cap via
    // idx < cap_{ab}^{d(Rbig)}: enumerate each coefficient mod cap
    std::vector<u64> bound;
    for (size_t k = 0; k < cap.size(); ++k) {
        u64 bnd = 1;
        for (int c = 0; c < Rbig.d(); ++c) bnd *= cap[k];
        bound.push_back(bnd);
    }
    std::vector<u64> idx(cap.size(), 0);
    auto decode = [&](size_t k) {
        UnramElem w = Rbig.zero();
        u64 rem = idx[k];
        for (int c = 0; c < Rbig.d(); ++c) {
            u64 digit = rem % cap[k];
            rem /= cap[k];
            // scale into the top of Z/p^e so the order is at most cap
            w.c[static_cast<size_t>(c)] =
                digit * (Rbig.pp().mod / cap[k]) % Rbig.pp().mod;
        }
        return w;
    };
    while (true) {
        // build phi table
        std::vector<UnramElem> phi;
        for (size_t k = 0; k < cap.size(); ++k) phi.push_back(decode(k));
        auto phi_of = [&](const std::vector<u64>& x, const std::vector<u64>& y) {
            UnramElem acc = Rbig.zero();
            for (int a = 0; a < r1; ++a)
                for (int b = 0; b < r2; ++b)
                    acc = Rbig.add(acc, Rbig.mul_scalar(x[static_cast<size_t>(a)] *
                                                            y[static_cast<size_t>(b)],
                                                        phi[static_cast<size_t>(a * r2 + b)]));
            return acc;
        };
        bool ok = true;
        for (const auto& xc : elems1) {
            if (!ok) break;
            UVec x = as_vec(M1.M, xc);
            UVec Vx = M1.V.apply(x), Fx = M1.F.apply(x);
            auto vxc = get_coords(Vx, M1.M), fxc = get_coords(Fx, M1.M);
            for (const auto& yc : elems2) {
                UVec y = as_vec(M2.M, yc);
                UVec Vy = M2.V.apply(y), Fy = M2.F.apply(y);
                auto vyc = get_coords(Vy, M2.M), fyc = get_coords(Fy, M2.M);
                // (1) phi(Vx, Vy) = p sigma^{-1} phi(x, y)
                UnramElem lhs = phi_of(vxc, vyc);
                UnramElem rhs = Rbig.mul_pk(Rbig.sigma(phi_of(xc, yc), -1), 1);
                if (!(lhs == rhs)) { ok = false; break; }
                // (2) phi(Fx, y) = sigma phi(x, Vy)
                lhs = phi_of(fxc, yc);
                rhs = Rbig.sigma(phi_of(xc, vyc), 1);
                if (!(lhs == rhs)) { ok = false; break; }
                // (3) phi(x, Fy) = sigma phi(Vx, y)
                lhs = phi_of(xc, fyc);
                rhs = Rbig.sigma(phi_of(vxc, yc), 1);
                if (!(lhs == rhs)) { ok = false; break; }
            }
        }
        if (ok) ++count;
        size_t k = 0;
        while (k < idx.size() && ++idx[k] == bound[k]) idx[k++] = 0;
        if (k == idx.size() || idx.empty()) break;
    }
    return count;
}

} // namespace

TEST_CASE("dieudonne pairings agree with brute-force enumeration (p=2, d=1)") {
    const UnramRing& R = unram_ring(2, 1, 2);
    std::vector<DieudonneModule> mods = {d_alpha(R, 1), matlis_dual(d_const(R, 1)),
                                         matlis_dual(d_const(R, 2)), d_alpha(R, 2)};
    for (const auto& M1 : mods)
        for (const auto& M2 : mods) {
            int e = 1;
            for (int a : M1.M.e)
                for (int b : M2.M.e) e = std::max(e, std::min(a, b));
            for (int m = 1; m <= 2; ++m) {
                PairingSpace P = dieudonne_pairings(M1, M2, m, e);
                long expect = enumerate_pairings(M1, M2, m, e);
                long got = 1;
                for (int dv : P.divisors)
                    got *= static_cast<long>(pow_u64(2, static_cast<u64>(dv)));
                CHECK(got == expect);
            }
        }
}

TEST_CASE("etale tower: alpha_p (x) alpha_p grows as d*m, const case stabilizes") {
    const UnramRing& R = unram_ring(2, 1, 2);
    DieudonneModule A = d_alpha(R, 1);
    EtaleTower t = etale_part_tensor(A, A, 3);
    for (int m = 1; m <= 3; ++m)
        CHECK(t.levels[static_cast<size_t>(m - 1)].divisors ==
              std::vector<int>(static_cast<size_t>(m), 1));
    CHECK_FALSE(t.stabilized);

    // the covariant modules of the duals of Z/p have V bijective: kernels 0
    DieudonneModule C = matlis_dual(d_const(R, 1));
    EtaleTower t2 = etale_part_tensor(C, C, 3);
    for (const auto& lvl : t2.levels) CHECK(lvl.is_zero());
    CHECK(t2.stabilized);

    EtaleTower t0 = etale_part_tensor(dd_zero(R), A, 2);
    for (const auto& lvl : t0.levels) CHECK(lvl.is_zero());
}
