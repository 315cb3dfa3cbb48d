#include <doctest.h>

#include "gst/groupscheme.hpp"

#include <json.hpp>

using namespace gst;

TEST_CASE("catalog constructors") {
    SchemeConfig cfg{2, 1, 3, 4};
    GroupScheme mu4 = gs_mu(cfg, 4);
    CHECK(mu4.unipotent.is_zero());
    CHECK(mu4.mult.cyclic_orders() == std::vector<long>{4});
    CHECK(mu4.mult_avatar.M.sorted_divisors() == std::vector<int>{2});
    CHECK(v_bijective(mu4.mult_avatar));

    // Z/6 at p=2: unipotent etale Z/2 plus multiplicative Z/3 with the
    // cyclotomic (q = 2) action
    GroupScheme z6 = gs_constant(cfg, 6);
    CHECK(z6.unipotent.M.sorted_divisors() == std::vector<int>{1});
    CHECK(f_bijective(z6.unipotent));
    CHECK(z6.mult.cyclic_orders() == std::vector<long>{3});
    CHECK(z6.mult.parts[0].phi.A.at(0, 0).c[0] == 2);

    GroupScheme gm = gs_gm(cfg);
    CHECK(gm.mult.rank == 1);
    CHECK(gm.unipotent.is_zero());

    GroupScheme ga = gs_ga(cfg);
    CHECK(ga.unip_is_tower());
    CHECK(ga.unip_tower.size() == 4);

    CHECK_THROWS_AS((void)gs_alpha(cfg, 6), std::invalid_argument);
}

TEST_CASE("etale points of unipotent parts") {
    SchemeConfig cfg{2, 1, 3, 4};
    // Z/p^m: constant group, points Z/p^m with trivial action, stable at level 1
    EtalePoints pts = etale_points(gs_constant(cfg, 8).unipotent, 3);
    CHECK(pts.points.cyclic_orders() == std::vector<long>{8});
    CHECK(pts.stabilized);
    CHECK(fixed_points(pts.points).cyclic == std::vector<long>{8});
    // alpha_p is connected: no points
    CHECK(etale_points(gs_alpha(cfg, 2).unipotent, 3).points.is_zero());
}

TEST_CASE("tensor: mu_p (x) mu_p = 0 over F_p") {
    for (long p : {2L, 3L, 5L}) {
        SchemeConfig cfg{p, 1, 2, 3};
        TensorReport r = tensor(gs_mu(cfg, p), gs_mu(cfg, p), TensorConfig{4, 2});
        CHECK(r.all_zero());
    }
}

TEST_CASE("tensor: mu_n (x) mu_n = Z/n geometrically, n prime to p") {
    SchemeConfig cfg{2, 1, 2, 3};
    for (long n : {3L, 5L}) {
        TensorReport r = tensor(gs_mu(cfg, n), gs_mu(cfg, n), TensorConfig{4, 2});
        CHECK(r.unip.result.module.is_zero());
        CHECK(r.hom_12.module.is_zero());
        CHECK(r.hom_21.module.is_zero());
        // the Tor summand is cyclic of order n: geometrically the constant Z/n
        CHECK(r.tor_piece.module.cyclic_orders() == std::vector<long>{n});
    }
}

TEST_CASE("tensor: Z/p (x) mu_p = mu_p, catalog identified") {
    for (long p : {2L, 3L}) {
        for (int d : {1, 2}) {
            SchemeConfig cfg{p, d, 2, 3};
            TensorReport r = tensor(gs_constant(cfg, p), gs_mu(cfg, p), TensorConfig{4, 2});
            CHECK(r.unip.result.module.is_zero());
            CHECK(r.tor_piece.module.is_zero());
            CHECK(r.hom_21.module.is_zero());
            CHECK(r.hom_12.module.cyclic_orders() == std::vector<long>{p});
            CHECK(r.hom_12.identification == "mu_" + std::to_string(p));
            for (const auto& lvl : r.pairing.levels) CHECK(lvl.is_zero());
        }
    }
}

TEST_CASE("tensor: gm (x) G = 0 for every catalog G") {
    SchemeConfig cfg{2, 1, 3, 3};
    std::vector<GroupScheme> catalog = {gs_mu(cfg, 2),        gs_mu(cfg, 4),  gs_mu(cfg, 3),
                                        gs_constant(cfg, 2),  gs_constant(cfg, 6),
                                        gs_alpha(cfg, 2),     gs_alpha(cfg, 4),
                                        gs_witt_kernel(cfg, 2, 2), gs_gm(cfg), gs_ga(cfg)};
    GroupScheme gm = gs_gm(cfg);
    for (const auto& G : catalog) {
        TensorReport r1 = tensor(gm, G, TensorConfig{3, 2});
        TensorReport r2 = tensor(G, gm, TensorConfig{3, 2});
        CHECK(r1.all_zero());
        CHECK(r2.all_zero());
    }
}

TEST_CASE("tensor: alpha_p (x) alpha_p has the G_a-dual profile and the k-bar pairing tower") {
    SchemeConfig cfg{2, 1, 2, 3};
    TensorReport r = tensor(gs_alpha(cfg, 2), gs_alpha(cfg, 2), TensorConfig{5, 3});
    // unipotent: non-stabilizing, rank(B) = B
    CHECK_FALSE(r.unip.result.stabilized);
    for (int b = 1; b <= 5; ++b) CHECK(r.unip.result.growth[static_cast<size_t>(b - 1)] == b);
    // pairing summand: dimension d*m at level m
    for (int m = 1; m <= 3; ++m)
        CHECK(r.pairing.levels[static_cast<size_t>(m - 1)].cyclic_orders() ==
              std::vector<long>(static_cast<size_t>(m), 2));
    CHECK_FALSE(r.pairing.tower.stabilized);
    // other summands vanish
    CHECK(r.tor_piece.module.is_zero());
    CHECK(r.hom_12.module.is_zero());
    CHECK(r.hom_21.module.is_zero());
}

TEST_CASE("tensor: Z/p (x) Z/p = Z/p carried by the unipotent summand") {
    SchemeConfig cfg{2, 1, 2, 3};
    TensorReport r = tensor(gs_constant(cfg, 2), gs_constant(cfg, 2), TensorConfig{4, 2});
    CHECK(r.unip.result.stabilized);
    CHECK(r.unip.identification == "D(Z/p^1)");
    CHECK(r.tor_piece.module.is_zero());
    CHECK(r.hom_12.module.is_zero());
    CHECK(r.hom_21.module.is_zero());
    for (const auto& lvl : r.pairing.levels) CHECK(lvl.is_zero());
}

TEST_CASE("tensor symmetry on sample pairs") {
    SchemeConfig cfg{2, 1, 3, 3};
    std::vector<GroupScheme> cat = {gs_mu(cfg, 4), gs_constant(cfg, 6), gs_alpha(cfg, 4),
                                    gs_witt_kernel(cfg, 2, 1)};
    for (const auto& A : cat)
        for (const auto& B : cat) {
            TensorReport ab = tensor(A, B, TensorConfig{3, 2});
            TensorReport ba = tensor(B, A, TensorConfig{3, 2});
            CHECK(ab.unip.result.module.M.sorted_divisors() ==
                  ba.unip.result.module.M.sorted_divisors());
            CHECK(gamma_eq_structure(ab.tor_piece.module, ba.tor_piece.module));
            CHECK(gamma_eq_structure(ab.hom_12.module, ba.hom_21.module));
            CHECK(gamma_eq_structure(ab.hom_21.module, ba.hom_12.module));
            REQUIRE(ab.pairing.levels.size() == ba.pairing.levels.size());
            for (size_t m = 0; m < ab.pairing.levels.size(); ++m)
                CHECK(gamma_eq_structure(ab.pairing.levels[m], ba.pairing.levels[m]));
        }
}

TEST_CASE("char-0 formulas") {
    // unit law of the Hopf tensor: (Z, 0) is the unit
    GammaModule Z = gamma_free(1, {{1}});
    GammaModule M = gamma_cyclic(6, 5);
    auto [m1, d1] = char0_tensor_hopf(Z, 0, M, 3);
    CHECK(gamma_isomorphic(m1, M) == Trilean::Yes);
    CHECK(d1 == 3);
    // affine tensor annihilates (Z, 0)
    auto [m2, d2] = char0_tensor_affine(Z, 0, M, 3);
    CHECK(m2.is_zero());
    CHECK(d2 == 0);
    // the three H_1/H_2 examples: H_1 = (0, 1), H_2 = (Z^sigma, 0)
    GammaModule Zs = gamma_free(1, {{-1}});
    auto [h11m, h11d] = char0_tensor_hopf(gamma_zero(), 1, gamma_zero(), 1);
    CHECK(h11m.is_zero());
    CHECK(h11d == 1); // H_1 (x) H_1 = H_1
    auto [h22m, h22d] = char0_tensor_hopf(Zs, 0, Zs, 0);
    CHECK(h22m.rank == 1);
    CHECK(h22m.phi_free[0][0] == 1); // Z with trivial action: k[Z]
    CHECK(h22d == 0);
    auto [h12m, h12d] = char0_tensor_hopf(gamma_zero(), 1, Zs, 0);
    CHECK(h12m.is_zero());
    CHECK(h12d == 1); // H_1 (x) H_2 = H_1
    // affine: ((Z/2,0), (Z/2,1)) -> (Z/2, 0)
    auto [a1m, a1d] = char0_tensor_affine(gamma_cyclic(2), 0, gamma_cyclic(2), 1);
    CHECK(a1m.cyclic_orders() == std::vector<long>{2});
    CHECK(a1d == 0);
    auto [a2m, a2d] = char0_tensor_affine(gamma_zero(), 1, gamma_zero(), 1);
    CHECK(a2m.is_zero());
    CHECK(a2d == 1);
}

TEST_CASE("report rendering: JSON round trip and text identification") {
    SchemeConfig cfg{2, 1, 2, 3};
    TensorReport r = tensor(gs_constant(cfg, 2), gs_mu(cfg, 2), TensorConfig{4, 2});
    std::string txt = render_report_text(r);
    CHECK(txt.find("mu_2") != std::string::npos);
    std::string js = render_report_json(r);
    auto parsed = nlohmann::json::parse(js);
    CHECK(parsed["schema"] == "gstensor.tensor_report/1");
    CHECK(parsed["hom_12"]["cyclic"][0] == 2);
    // reproducible byte-for-byte
    CHECK(render_report_json(tensor(gs_constant(cfg, 2), gs_mu(cfg, 2), TensorConfig{4, 2})) == js);
    // empty report prints 0
    TensorReport z = tensor(gs_gm(cfg), gs_mu(cfg, 2), TensorConfig{4, 2});
    CHECK(render_report_text(z).find("  0\n") != std::string::npos);
}
