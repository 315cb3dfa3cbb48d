#include "gst/universal.hpp"

#include <map>
#include <mutex>
#include <tuple>

namespace gst {

std::size_t& mpoly_term_budget() {
    static std::size_t budget = 3'000'000;
    return budget;
}

ZPoly ghost_poly(long p, int nv, int offset, int m) {
    ZPoly w(nv);
    mpz_class pi = 1;
    for (int i = 0; i <= m; ++i) {
        mpz_class e;
        mpz_ui_pow_ui(e.get_mpz_t(), static_cast<unsigned long>(p),
                      static_cast<unsigned long>(m - i));
        ZPoly t = ZPoly::var(nv, offset + i, static_cast<std::uint32_t>(e.get_ui()));
        t.scale(pi);
        w += t;
        pi *= p;
    }
    return w;
}

ZPoly ghost_op_target(long p, int n, int m, WittOpKind kind) {
    ZPoly wx = ghost_poly(p, 2 * n, 0, m);
    ZPoly wy = ghost_poly(p, 2 * n, n, m);
    return kind == WittOpKind::Sum ? wx + wy : wx * wy;
}

namespace {

UniversalPolys solve(long p, int n, WittOpKind kind) {
    UniversalPolys up;
    up.p = p;
    up.n = n;
    up.kind = kind;
    std::vector<QPoly> sol;
    mpz_class pm = 1;
    for (int m = 0; m < n; ++m) {
        QPoly acc = to_qpoly(ghost_op_target(p, n, m, kind));
        mpz_class pi = 1;
        for (int i = 0; i < m; ++i) {
            unsigned long e;
            {
                mpz_class pe;
                mpz_ui_pow_ui(pe.get_mpz_t(), static_cast<unsigned long>(p),
                              static_cast<unsigned long>(m - i));
                e = pe.get_ui();
            }
            QPoly t = sol[static_cast<size_t>(i)].pow(e);
            t.scale(mpq_class(pi));
            acc -= t;
            pi *= p;
        }
        acc = div_scalar(acc, mpq_class(pm));
        if (!is_integral(acc))
            throw std::logic_error("universal polynomial solve: integrality failed (p=" +
                                   std::to_string(p) + ", m=" + std::to_string(m) + ")");
        sol.push_back(acc);
        up.polys.push_back(to_zpoly_exact(acc));
        pm *= p;
    }
    return up;
}

std::map<std::tuple<long, int, int>, UniversalPolys> g_cache;
std::mutex g_cache_mutex;

const UniversalPolys& cached(long p, int n, WittOpKind kind) {
    if (!is_prime_u64(static_cast<u64>(p)))
        throw std::invalid_argument("universal polynomials: p must be prime");
    if (n < 1) throw std::invalid_argument("universal polynomials: n must be >= 1");
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto key = std::make_tuple(p, n, static_cast<int>(kind));
    auto it = g_cache.find(key);
    if (it == g_cache.end()) it = g_cache.emplace(key, solve(p, n, kind)).first;
    return it->second;
}

} // namespace

const UniversalPolys& universal_sum_polys(long p, int n) { return cached(p, n, WittOpKind::Sum); }
const UniversalPolys& universal_prod_polys(long p, int n) { return cached(p, n, WittOpKind::Prod); }

bool dwork_certificate(long p, int n, WittOpKind kind, int* fail_index) {
    for (int m = 1; m < n; ++m) {
        ZPoly gm = ghost_op_target(p, n, m, kind);
        ZPoly prev = ghost_op_target(p, n, m - 1, kind).raise_vars(static_cast<std::uint32_t>(p));
        ZPoly diff = gm - prev;
        mpz_class pm;
        mpz_ui_pow_ui(pm.get_mpz_t(), static_cast<unsigned long>(p),
                      static_cast<unsigned long>(m));
        try {
            (void)div_exact(diff, pm);
        } catch (const std::domain_error&) {
            if (fail_index) *fail_index = m;
            return false;
        }
    }
    return true;
}

bool verify_ghost_identity(const UniversalPolys& up) {
    // w_m(S_0..S_m) == ghost target, computed symbolically over Z
    for (int m = 0; m < up.n; ++m) {
        ZPoly acc(2 * up.n);
        mpz_class pi = 1;
        for (int i = 0; i <= m; ++i) {
            mpz_class pe;
            mpz_ui_pow_ui(pe.get_mpz_t(), static_cast<unsigned long>(up.p),
                          static_cast<unsigned long>(m - i));
            ZPoly t = up.polys[static_cast<size_t>(i)].pow(pe.get_ui());
            t.scale(pi);
            acc += t;
            pi *= up.p;
        }
        if (!(acc == ghost_op_target(up.p, up.n, m, up.kind))) return false;
    }
    return true;
}

WittZ eval_universal(const UniversalPolys& up, const WittZ& x, const WittZ& y) {
    if (x.p != up.p || y.p != up.p || x.len() != up.n || y.len() != up.n)
        throw std::invalid_argument("eval_universal: shape mismatch");
    std::vector<mpz_class> vars;
    vars.reserve(static_cast<size_t>(2 * up.n));
    for (const auto& c : x.a) vars.push_back(c);
    for (const auto& c : y.a) vars.push_back(c);
    WittZ r{up.p, {}};
    for (const auto& poly : up.polys) {
        mpz_class acc = 0;
        for (const auto& [m, c] : poly.terms) {
            mpz_class t = c;
            for (size_t i = 0; i < m.size(); ++i) {
                if (m[i] == 0) continue;
                mpz_class powv;
                mpz_pow_ui(powv.get_mpz_t(), vars[i].get_mpz_t(), m[i]);
                t *= powv;
            }
            acc += t;
        }
        r.a.push_back(acc);
    }
    return r;
}

} // namespace gst
