#include "gst/groupscheme.hpp"

#include <json.hpp>

#include <map>

#include <sstream>

namespace gst {

namespace {

long v_p(long n, long p) {
    long v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

const UnramRing& scheme_ring(const SchemeConfig& cfg, int needed) {
    int N = cfg.precision > 0 ? cfg.precision : std::max(needed, 2);
    if (N < needed)
        throw std::invalid_argument("precision N too small for this group scheme");
    return unram_ring(cfg.p, cfg.d, N);
}

} // namespace

GroupScheme gs_mu(const SchemeConfig& cfg, long n) {
    if (n < 1) throw std::invalid_argument("mu(n): n >= 1 required");
    long v = v_p(n, cfg.p);
    const UnramRing& R = scheme_ring(cfg, static_cast<int>(std::max(v, 1L)));
    GroupScheme G;
    G.name = "mu(" + std::to_string(n) + ")";
    G.p = cfg.p;
    G.d = cfg.d;
    G.ring_ = &R;
    G.unipotent = dd_zero(R);
    G.mult = gamma_cyclic(n, 1); // group-ring character module: trivial action
    G.mult_avatar = v > 0 ? d_mu(R, static_cast<int>(v)) : dd_zero(R);
    return G;
}

GroupScheme gs_constant(const SchemeConfig& cfg, long n) {
    if (n < 1) throw std::invalid_argument("Z/(n): n >= 1 required");
    long v = v_p(n, cfg.p);
    long m = n / static_cast<long>(pow_u64(static_cast<u64>(cfg.p), static_cast<u64>(v)));
    const UnramRing& R = scheme_ring(cfg, static_cast<int>(std::max(v, 1L)));
    GroupScheme G;
    G.name = "Z/(" + std::to_string(n) + ")";
    G.p = cfg.p;
    G.d = cfg.d;
    G.ring_ = &R;
    G.unipotent = v > 0 ? d_const(R, static_cast<int>(v)) : dd_zero(R);
    // prime-to-p part is multiplicative with the cyclotomic action zeta -> zeta^q
    long q = static_cast<long>(R.q());
    G.mult = m > 1 ? gamma_cyclic(m, q % m) : gamma_zero();
    G.mult_avatar = dd_zero(R);
    return G;
}

GroupScheme gs_alpha(const SchemeConfig& cfg, long order) {
    long r = 0, o = order;
    while (o > 1) {
        if (o % cfg.p != 0)
            throw std::invalid_argument("alpha(n): n must be a power of the base prime");
        o /= cfg.p;
        ++r;
    }
    if (order < static_cast<long>(cfg.p))
        throw std::invalid_argument("alpha(n): n must be a positive power of p");
    const UnramRing& R = scheme_ring(cfg, 1);
    GroupScheme G;
    G.name = "alpha(" + std::to_string(order) + ")";
    G.p = cfg.p;
    G.d = cfg.d;
    G.ring_ = &R;
    G.unipotent = d_alpha(R, static_cast<int>(r));
    return G;
}

GroupScheme gs_witt_kernel(const SchemeConfig& cfg, int m, int n) {
    const UnramRing& R = scheme_ring(cfg, std::max(1, std::min(m, n)));
    GroupScheme G;
    G.name = "W(" + std::to_string(m) + "," + std::to_string(n) + ")";
    G.p = cfg.p;
    G.d = cfg.d;
    G.ring_ = &R;
    G.unipotent = d_wittker(R, m, n);
    return G;
}

GroupScheme gs_gm(const SchemeConfig& cfg) {
    const UnramRing& R = scheme_ring(cfg, 1);
    GroupScheme G;
    G.name = "gm";
    G.p = cfg.p;
    G.d = cfg.d;
    G.ring_ = &R;
    G.unipotent = dd_zero(R);
    G.mult = gamma_free(1, {{1}}); // G_m is split over F_q
    G.mult_avatar = dd_zero(R);
    return G;
}

GroupScheme gs_ga(const SchemeConfig& cfg) {
    const UnramRing& R = scheme_ring(cfg, 1);
    GroupScheme G;
    G.name = "ga";
    G.p = cfg.p;
    G.d = cfg.d;
    G.ring_ = &R;
    for (int r = 1; r <= cfg.tower_cap; ++r) G.unip_tower.push_back(d_alpha(R, r));
    G.unipotent = G.unip_tower.back();
    return G;
}

EtalePoints etale_points(const DieudonneModule& D, int level_cap) {
    EtalePoints out;
    DieudonneModule E = fitting_split_F(D).first;
    if (E.is_zero()) return out;
    const UnramRing& R = E.ring();
    auto level_points = [&](int m) {
        DieudonneModule Em = base_change(E, m);
        const UnramRing& S = Em.ring();
        // ker(F - 1): A_F sigma(x) - x = 0
        std::vector<ZCondition> conds;
        UMat I = UMat::identity(S, Em.M.rank());
        conds.push_back(ZCondition{Em.M, {ZTerm{Em.F.A, 1}, ZTerm{mat_neg(I), 0}}});
        ZSolutionSpace sols = zsolve(Em.M, conds);
        // Frobenius of Gal(F_{q^m}/F_q) acts by sigma^d on coordinates
        GammaModule gm;
        if (!sols.z_divisors.empty()) {
            std::vector<UVec> imgs;
            for (const auto& b : sols.basis) {
                UVec y = b;
                for (auto& x : y) x = S.sigma(x, R.d());
                imgs.push_back(reduce_vec(Em.M, y));
            }
            gm = gamma_from_pairing(R.p(), sols.z_divisors, express_in_basis(sols, imgs));
        }
        return gm;
    };
    GammaModule prev = level_points(1);
    out.points = prev;
    out.level = 1;
    out.stabilized = true;
    for (int m = 2; m <= level_cap; ++m) {
        GammaModule cur = level_points(m);
        if (cur.cyclic_orders() != prev.cyclic_orders()) {
            out.points = cur;
            out.level = m;
            out.stabilized = false;
            prev = cur;
        }
    }
    return out;
}

bool TensorReport::all_zero() const {
    return unip.result.module.is_zero() && tor_piece.module.is_zero() &&
           hom_12.module.is_zero() && hom_21.module.is_zero() &&
           [&] {
               for (const auto& lvl : pairing.tower.levels)
                   if (!lvl.is_zero()) return false;
               return true;
           }();
}

bool TensorReport::fully_stabilized() const {
    return unip.result.stabilized && unip.tower_stabilized && pairing.tower.stabilized;
}

TensorReport tensor(const GroupScheme& G1, const GroupScheme& G2, const TensorConfig& cfg) {
    if (G1.p != G2.p || G1.d != G2.d)
        throw std::invalid_argument("tensor: group schemes over different base fields");
    TensorReport rep;
    rep.g1 = G1.name;
    rep.g2 = G2.name;
    rep.p = G1.p;
    rep.d = G1.d;
    rep.cfg = cfg;
    long q = static_cast<long>(pow_u64(static_cast<u64>(G1.p), static_cast<u64>(G1.d)));

    // unipotent summand: D(G1^u) (*)^u D(G2^u)
    auto levels1 = G1.unip_is_tower() ? G1.unip_tower : std::vector<DieudonneModule>{G1.unipotent};
    auto levels2 = G2.unip_is_tower() ? G2.unip_tower : std::vector<DieudonneModule>{G2.unipotent};
    if (G1.unip_is_tower() || G2.unip_is_tower()) {
        for (size_t i = 0; i < std::max(levels1.size(), levels2.size()); ++i) {
            const DieudonneModule& a = levels1[std::min(i, levels1.size() - 1)];
            const DieudonneModule& b = levels2[std::min(i, levels2.size() - 1)];
            rep.unip.tower.push_back(boxast_u(a, b, cfg.bound));
        }
        rep.unip.result = rep.unip.tower.back();
        rep.unip.tower_stabilized =
            rep.unip.tower.size() >= 2 &&
            rep.unip.tower.back().module.M.sorted_divisors() ==
                rep.unip.tower[rep.unip.tower.size() - 2].module.M.sorted_divisors();
    } else {
        rep.unip.result = boxast_u(G1.unipotent, G2.unipotent, cfg.bound);
    }
    rep.unip.identification =
        rep.unip.result.stabilized ? identify_dieudonne(rep.unip.result.module) : "";

    // multiplicative summands
    rep.tor_piece.module = mult_mult_tensor(G1.mult, G2.mult, G1.p);
    rep.tor_piece.identification = identify_mult(rep.tor_piece.module, G1.p, q);

    EtalePoints pi1 = etale_points(G1.unipotent, cfg.levels);
    EtalePoints pi2 = etale_points(G2.unipotent, cfg.levels);
    rep.hom_12.module = mult_tensor_piece(pi1.points, G2.mult);
    rep.hom_12.identification = identify_mult(rep.hom_12.module, G1.p, q);
    rep.hom_21.module = mult_tensor_piece(pi2.points, G1.mult);
    rep.hom_21.identification = identify_mult(rep.hom_21.module, G1.p, q);

    // pairing summand on the duals of the unipotent parts
    rep.pairing.tower =
        etale_part_tensor(G1.unipotent.is_zero() ? G1.unipotent : matlis_dual(G1.unipotent),
                          G2.unipotent.is_zero() ? G2.unipotent : matlis_dual(G2.unipotent),
                          cfg.levels);
    for (const auto& lvl : rep.pairing.tower.levels)
        rep.pairing.levels.push_back(
            lvl.is_zero() ? gamma_zero()
                          : gamma_from_pairing(G1.p, lvl.divisors, lvl.frobenius));
    if (!rep.pairing.levels.empty())
        rep.pairing.identification = identify_mult(rep.pairing.levels.back(), G1.p, q);
    return rep;
}

std::pair<GammaModule, long> char0_tensor_hopf(const GammaModule& M1, long dimV1,
                                               const GammaModule& M2, long dimV2) {
    GammaModule M = tensor_diag(M1, M2);
    long dim = M1.rank * dimV2 + M2.rank * dimV1 + dimV1 * dimV2;
    return {M, dim};
}

std::pair<GammaModule, long> char0_tensor_affine(const GammaModule& M1, long dimV1,
                                                 const GammaModule& M2, long dimV2) {
    return {tor_diag(M1, M2), dimV1 * dimV2};
}

std::string identify_dieudonne(const DieudonneModule& D) {
    if (D.is_zero()) return "0";
    const UnramRing& R = D.ring();
    long len = D.M.length();
    std::vector<std::pair<std::string, DieudonneModule>> cat;
    for (int r = 1; r <= len; ++r)
        if (r == len) cat.emplace_back("D(alpha_{p^" + std::to_string(r) + "})", d_alpha(R, r));
    for (int m = 1; m <= std::min<long>(len, R.N()); ++m)
        if (m == len) {
            cat.emplace_back("D(Z/p^" + std::to_string(m) + ")", d_const(R, m));
            cat.emplace_back("D(mu_{p^" + std::to_string(m) + "})", d_mu(R, m));
        }
    for (int m = 1; m <= len; ++m)
        for (int n = 1; n <= len; ++n)
            if (static_cast<long>(m) * n == len && std::min(m, n) <= R.N() && (m > 1 || n > 1))
                cat.emplace_back("D(W_" + std::to_string(m) + "[F^" + std::to_string(n) + "])",
                                 d_wittker(R, m, n));
    for (const auto& [name, C] : cat)
        if (is_isomorphic(D, C) == Trilean::Yes) return name;
    // direct sums of two catalog pieces
    std::vector<std::pair<std::string, DieudonneModule>> small;
    for (int r = 1; r < len; ++r) small.emplace_back("D(alpha_{p^" + std::to_string(r) + "})", d_alpha(R, r));
    for (int m = 1; m <= std::min<long>(len - 1, R.N()); ++m) {
        small.emplace_back("D(Z/p^" + std::to_string(m) + ")", d_const(R, m));
        small.emplace_back("D(mu_{p^" + std::to_string(m) + "})", d_mu(R, m));
    }
    for (size_t i = 0; i < small.size(); ++i)
        for (size_t j = i; j < small.size(); ++j) {
            if (small[i].second.M.length() + small[j].second.M.length() != len) continue;
            if (is_isomorphic(D, dsum(small[i].second, small[j].second)) == Trilean::Yes)
                return small[i].first + " + " + small[j].first;
        }
    return "";
}

std::string identify_mult(const GammaModule& M, long p, long q) {
    if (M.is_zero()) return "0";
    if (M.rank != 0) return "";
    auto orders = M.cyclic_orders();
    long n = 1;
    for (long o : orders) n *= o;
    // one cyclic factor per prime <=> cyclic of order n
    std::map<long, int> seen;
    for (const auto& P : M.parts)
        seen[P.ell] += static_cast<int>(P.M.e.size());
    for (auto& [ell, cnt] : seen)
        if (cnt > 1) return "";
    if (gamma_isomorphic(M, gamma_cyclic(n, 1)) == Trilean::Yes) return "mu_" + std::to_string(n);
    if (gamma_isomorphic(M, gamma_cyclic(n, q % n)) == Trilean::Yes)
        return "Z/" + std::to_string(n) + " (constant)";
    (void)p;
    return "";
}

namespace {

nlohmann::ordered_json gamma_json(const GammaModule& M) {
    nlohmann::ordered_json j;
    j["rank"] = M.rank;
    j["cyclic"] = M.cyclic_orders();
    nlohmann::ordered_json fr = nlohmann::ordered_json::array();
    for (const auto& P : M.parts) {
        nlohmann::ordered_json mat = nlohmann::ordered_json::array();
        for (int i = 0; i < P.phi.A.rows; ++i) {
            nlohmann::ordered_json row = nlohmann::ordered_json::array();
            for (int jj = 0; jj < P.phi.A.cols; ++jj) row.push_back(P.phi.A.at(i, jj).c[0]);
            mat.push_back(row);
        }
        fr.push_back({{"prime", P.ell}, {"matrix", mat}});
    }
    j["frobenius"] = fr;
    return j;
}

nlohmann::ordered_json dd_json(const DieudonneModule& D) {
    nlohmann::ordered_json j;
    j["divisors"] = D.M.e;
    auto mat_json = [&](const ModMap& f) {
        nlohmann::ordered_json m;
        m["twist"] = f.twist;
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (int i = 0; i < f.A.rows; ++i) {
            nlohmann::ordered_json row = nlohmann::ordered_json::array();
            for (int jj = 0; jj < f.A.cols; ++jj) row.push_back(f.A.at(i, jj).c);
            rows.push_back(row);
        }
        m["matrix"] = rows;
        return m;
    };
    j["F"] = mat_json(D.F);
    j["V"] = mat_json(D.V);
    return j;
}

std::string gamma_text(const GammaModule& M, const std::string& ident) {
    std::string s = describe(M);
    if (!ident.empty() && ident != "0") s += "  [" + ident + "]";
    return s;
}

} // namespace

std::string render_report_text(const TensorReport& r) {
    std::ostringstream os;
    os << "tensor(" << r.g1 << ", " << r.g2 << ") over F_" << pow_u64(static_cast<u64>(r.p), static_cast<u64>(r.d))
       << "  (bound B=" << r.cfg.bound << ", levels m<=" << r.cfg.levels << ")\n";
    if (r.all_zero()) {
        os << "  0\n";
        return os.str();
    }
    os << "  unipotent summand: ";
    if (r.unip.result.module.is_zero())
        os << "0";
    else {
        os << describe(r.unip.result.module.M);
        if (!r.unip.identification.empty()) os << "  [" << r.unip.identification << "]";
    }
    if (!r.unip.result.stabilized) {
        os << "  NON-STABILIZING, growth profile:";
        for (long g : r.unip.result.growth) os << " " << g;
    }
    os << "\n";
    os << "  multiplicative summands:\n";
    os << "    Tor piece:           " << gamma_text(r.tor_piece.module, r.tor_piece.identification) << "\n";
    os << "    Hom(pi0(G1^u), M2):  " << gamma_text(r.hom_12.module, r.hom_12.identification) << "\n";
    os << "    Hom(pi0(G2^u), M1):  " << gamma_text(r.hom_21.module, r.hom_21.identification) << "\n";
    os << "    pairing piece:       ";
    bool any = false;
    for (size_t m = 0; m < r.pairing.levels.size(); ++m) {
        if (m) os << "; ";
        os << "F_{q^" << (m + 1) << "}: " << describe(r.pairing.levels[m]);
        if (!r.pairing.levels[m].is_zero()) any = true;
    }
    if (!any) os << " 0 at all levels";
    os << (r.pairing.tower.stabilized ? "  (stabilized)" : "  (NON-STABILIZING tower)");
    os << "\n";
    return os.str();
}

std::string render_report_json(const TensorReport& r) {
    nlohmann::ordered_json j;
    j["schema"] = "gstensor.tensor_report/1";
    j["inputs"] = {{"g1", r.g1}, {"g2", r.g2}, {"p", r.p}, {"d", r.d}};
    j["config"] = {{"bound", r.cfg.bound}, {"levels", r.cfg.levels}};
    nlohmann::ordered_json u;
    u["module"] = dd_json(r.unip.result.module);
    u["stabilized"] = r.unip.result.stabilized;
    u["growth"] = r.unip.result.growth;
    u["identification"] = r.unip.identification;
    if (!r.unip.tower.empty()) {
        nlohmann::ordered_json tw = nlohmann::ordered_json::array();
        for (const auto& lvl : r.unip.tower) tw.push_back(dd_json(lvl.module));
        u["tower"] = tw;
        u["tower_stabilized"] = r.unip.tower_stabilized;
    }
    j["unipotent"] = u;
    j["tor_piece"] = gamma_json(r.tor_piece.module);
    j["tor_piece"]["identification"] = r.tor_piece.identification;
    j["hom_12"] = gamma_json(r.hom_12.module);
    j["hom_12"]["identification"] = r.hom_12.identification;
    j["hom_21"] = gamma_json(r.hom_21.module);
    j["hom_21"]["identification"] = r.hom_21.identification;
    nlohmann::ordered_json pl = nlohmann::ordered_json::array();
    for (const auto& lvl : r.pairing.levels) pl.push_back(gamma_json(lvl));
    j["pairing_levels"] = pl;
    j["pairing_stabilized"] = r.pairing.tower.stabilized;
    j["all_zero"] = r.all_zero();
    return j.dump(2);
}

} // namespace gst
