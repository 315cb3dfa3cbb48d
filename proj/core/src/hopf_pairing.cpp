#include "gst/hopf_pairing.hpp"

namespace gst {

WittCoaddition witt_coaddition(long p, int n) {
    WittCoaddition co;
    co.p = p;
    co.n = n;
    const UniversalPolys& up = universal_sum_polys(p, n);
    co.delta = up.polys; // S_m(x', x'') with the primed block in vars 0..n-1
    return co;
}

BoxAAlgebra::BoxAAlgebra(long p, int n) : p_(p), n_(n), co_(witt_coaddition(p, n)) {}

namespace {

long weight(long p, const Mono& I) {
    long w = 0;
    long pw = 1;
    for (size_t i = 0; i < I.size(); ++i) {
        w += static_cast<long>(I[i]) * pw;
        pw *= p;
    }
    return w;
}

bool is_zero_mono(const Mono& I) {
    for (auto e : I)
        if (e) return false;
    return true;
}

} // namespace

ZPoly BoxAAlgebra::delta_power(const Mono& J) {
    auto it = delta_memo_.find(J);
    if (it != delta_memo_.end()) return it->second;
    ZPoly r = ZPoly::constant(2 * n_, 1);
    for (int j = 0; j < n_; ++j)
        for (std::uint32_t e = 0; e < J[static_cast<size_t>(j)]; ++e)
            r = r * co_.delta[static_cast<size_t>(j)];
    delta_memo_.emplace(J, r);
    return r;
}

ZPoly BoxAAlgebra::reduce(const Mono& I, const Mono& J, ReduceOrder order) {
    auto& memo = order == ReduceOrder::LeftFirst ? memo_left_ : memo_right_;
    auto key = std::make_pair(I, J);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;

    int nv = n_ * n_;
    ZPoly out(nv);
    std::uint32_t szI = 0, szJ = 0;
    for (auto e : I) szI += e;
    for (auto e : J) szJ += e;

    if (szI == 0) {
        // j(1 (x) y^J) = counit
        out = ZPoly::constant(nv, is_zero_mono(J) ? 1 : 0);
    } else if (szJ == 0) {
        out = ZPoly::constant(nv, 0); // szI >= 1 here
    } else if (szI == 1 && szJ == 1) {
        int i = 0, j = 0;
        for (int k = 0; k < n_; ++k) {
            if (I[static_cast<size_t>(k)]) i = k;
            if (J[static_cast<size_t>(k)]) j = k;
        }
        out = ZPoly::var(nv, var(i, j));
    } else {
        bool split_left = szI >= 2;
        if (szI >= 2 && szJ >= 2 && order == ReduceOrder::RightFirst) split_left = false;
        if (szI == 1) split_left = false;
        if (split_left) {
            // x^I = x_{i0} * x^{I'}; j(x_{i0} x^{I'} (x) y^J) =
            //   sum j(x_{i0} (x) (y^J)') j(x^{I'} (x) (y^J)'')
            int i0 = 0;
            for (int k = 0; k < n_; ++k)
                if (I[static_cast<size_t>(k)]) {
                    i0 = k;
                    break;
                }
            Mono I1(static_cast<size_t>(n_), 0);
            I1[static_cast<size_t>(i0)] = 1;
            Mono I2 = I;
            --I2[static_cast<size_t>(i0)];
            ZPoly D = delta_power(J);
            for (const auto& [m, c] : D.terms) {
                Mono T1(m.begin(), m.begin() + n_);
                Mono T2(m.begin() + n_, m.end());
                ZPoly t = reduce(I1, T1, order) * reduce(I2, T2, order);
                t.scale(c);
                out += t;
            }
        } else {
            // y^J = y_{j0} * y^{J'}; j(x^I (x) y_{j0} y^{J'}) =
            //   sum j((x^I)' (x) y_{j0}) j((x^I)'' (x) y^{J'})
            int j0 = 0;
            for (int k = 0; k < n_; ++k)
                if (J[static_cast<size_t>(k)]) {
                    j0 = k;
                    break;
                }
            Mono J1(static_cast<size_t>(n_), 0);
            J1[static_cast<size_t>(j0)] = 1;
            Mono J2 = J;
            --J2[static_cast<size_t>(j0)];
            ZPoly D = delta_power(I);
            for (const auto& [m, c] : D.terms) {
                Mono T1(m.begin(), m.begin() + n_);
                Mono T2(m.begin() + n_, m.end());
                ZPoly t = reduce(T1, J1, order) * reduce(T2, J2, order);
                t.scale(c);
                out += t;
            }
        }
    }
    memo.emplace(std::move(key), out);
    return out;
}

ZPoly BoxAAlgebra::ghost_box(int m, ReduceOrder order) {
    int nv = n_ * n_;
    ZPoly acc(nv);
    mpz_class pi = 1;
    for (int i = 0; i <= m; ++i) {
        mpz_class pj = 1;
        for (int j = 0; j <= m; ++j) {
            Mono I(static_cast<size_t>(n_), 0), J(static_cast<size_t>(n_), 0);
            mpz_class ei, ej;
            mpz_ui_pow_ui(ei.get_mpz_t(), static_cast<unsigned long>(p_),
                          static_cast<unsigned long>(m - i));
            mpz_ui_pow_ui(ej.get_mpz_t(), static_cast<unsigned long>(p_),
                          static_cast<unsigned long>(m - j));
            I[static_cast<size_t>(i)] = static_cast<std::uint32_t>(ei.get_ui());
            J[static_cast<size_t>(j)] = static_cast<std::uint32_t>(ej.get_ui());
            ZPoly t = reduce(I, J, order);
            t.scale(pi * pj);
            acc += t;
            pj *= p_;
        }
        pi *= p_;
    }
    return acc;
}

std::pair<long, long> bidegree(long p, int n, const Mono& m) {
    long dx = 0, dy = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::uint32_t e = m[static_cast<size_t>(i * n + j)];
            if (!e) continue;
            dx += static_cast<long>(e) * static_cast<long>(pow_u64(static_cast<u64>(p), static_cast<u64>(i)));
            dy += static_cast<long>(e) * static_cast<long>(pow_u64(static_cast<u64>(p), static_cast<u64>(j)));
        }
    return {dx, dy};
}

bool is_bihomogeneous(long p, int n, const ZPoly& f, long degx, long degy) {
    for (const auto& [m, c] : f.terms) {
        auto [dx, dy] = bidegree(p, n, m);
        if (dx != degx || dy != degy) return false;
    }
    return true;
}

namespace {

// re-embed a polynomial from an a^2-variable ring into the b^2-variable ring
// (b >= a), shifting the (i, j) grid by (off, off)
ZPoly embed_grid(const ZPoly& f, int a, int b, int off) {
    ZPoly r(b * b);
    for (const auto& [m, c] : f.terms) {
        Mono mm(static_cast<size_t>(b * b), 0);
        for (int i = 0; i < a; ++i)
            for (int j = 0; j < a; ++j) {
                std::uint32_t e = m[static_cast<size_t>(i * a + j)];
                if (e) mm[static_cast<size_t>((i + off) * b + (j + off))] = e;
            }
        r.terms.emplace(std::move(mm), c);
    }
    return r;
}

} // namespace

PairingPolys iota_polys(long p, int n, int degree_cap) {
    if (n < 1) throw std::invalid_argument("iota_polys: n >= 1 required");
    if (n > degree_cap)
        throw std::invalid_argument(
            "iota_polys: n exceeds the degree cap (raise degree_cap explicitly at your own "
            "memory's risk)");
    PairingPolys pp;
    pp.p = p;
    pp.n = n;
    BoxAAlgebra box(p, n);
    // solve the ghost-triangular system in the full n^2-variable ring
    std::vector<QPoly> sol; // iota(x_0), ..., in n^2 vars
    mpz_class pm = 1;
    for (int m = 0; m < n; ++m) {
        QPoly acc = to_qpoly(box.ghost_box(m));
        mpz_class divisor;
        mpz_ui_pow_ui(divisor.get_mpz_t(), static_cast<unsigned long>(p),
                      static_cast<unsigned long>(m));
        acc = div_scalar(acc, mpq_class(divisor)); // target is (w_m box w_m) / p^m
        mpz_class pi = 1;
        for (int i = 0; i < m; ++i) {
            mpz_class pe;
            mpz_ui_pow_ui(pe.get_mpz_t(), static_cast<unsigned long>(p),
                          static_cast<unsigned long>(m - i));
            QPoly t = sol[static_cast<size_t>(i)].pow(pe.get_ui());
            t.scale(mpq_class(pi));
            acc -= t;
            pi *= p;
        }
        acc = div_scalar(acc, mpq_class(pm));
        if (!is_integral(acc))
            throw std::logic_error("iota_polys: non-integral solution (rewriting bug)");
        sol.push_back(acc);
        pm *= p;
    }
    // repackage P_m into its own m^2-variable ring
    for (int m = 1; m <= n; ++m) {
        ZPoly big = to_zpoly_exact(sol[static_cast<size_t>(m - 1)]);
        ZPoly small(m * m);
        for (const auto& [mono, c] : big.terms) {
            Mono mm(static_cast<size_t>(m * m), 0);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    std::uint32_t e = mono[static_cast<size_t>(i * n + j)];
                    if (!e) continue;
                    if (i >= m || j >= m)
                        throw std::logic_error("iota_polys: P_m uses a variable beyond its grid");
                    mm[static_cast<size_t>(i * m + j)] = e;
                }
            small.terms.emplace(std::move(mm), c);
        }
        pp.P.push_back(std::move(small));
    }
    return pp;
}

bool leading_term_structure(const PairingPolys& pp, int m) {
    const ZPoly& P = pp.P[static_cast<size_t>(m - 1)];
    Mono lead(static_cast<size_t>(m * m), 0);
    lead[static_cast<size_t>((m - 1) * m + (m - 1))] = 1;
    auto it = P.terms.find(lead);
    if (it == P.terms.end() || it->second != 1) return false;
    for (const auto& [mono, c] : P.terms) {
        if (mono == lead) continue;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                if (mono[static_cast<size_t>(i * m + j)] && (i > m - 2 || j > m - 2)) return false;
    }
    return true;
}

bool v_shift_identity(const PairingPolys& pp, int m) {
    // P_{m+1}((x_{i-1,j-1})) with negative indices sent to 0 equals P_m
    const ZPoly& big = pp.P[static_cast<size_t>(m)];
    int b = m + 1;
    ZPoly shifted(m * m);
    for (const auto& [mono, c] : big.terms) {
        Mono mm(static_cast<size_t>(m * m), 0);
        bool dead = false;
        for (int i = 0; i < b && !dead; ++i)
            for (int j = 0; j < b; ++j) {
                std::uint32_t e = mono[static_cast<size_t>(i * b + j)];
                if (!e) continue;
                if (i == 0 || j == 0) {
                    dead = true;
                    break;
                }
                mm[static_cast<size_t>((i - 1) * m + (j - 1))] = e;
            }
        if (!dead) shifted.add_term(mm, c);
    }
    return shifted == pp.P[static_cast<size_t>(m - 1)];
}

bool check_congruence(const PairingPolys& pp, int n, int r, int s) {
    // window re-indexing: position (i, j) of P_k maps to (i - k + 1, j - k + 1)
    const ZPoly& Pn = pp.P[static_cast<size_t>(n - 1)];
    const ZPoly& Pn1 = pp.P[static_cast<size_t>(n)];
    // grid position (gi, gj) of the (n+1)-grid represents the window
    // coordinate (gi - n, gj - n); P_n is anchored at the same top-right
    // corner, so it embeds with offset 1
    int b = n + 1;
    ZPoly diff = Pn1 - embed_grid(Pn, n, b, 1);
    for (const auto& [mono, c] : diff.terms) {
        (void)c;
        // multiplicity in J_{1,r} and in J_{r,1}, window coords (-i, -j) with
        // grid (gi, gj) |-> i = b - 1 - gi, j = b - 1 - gj
        long m1 = 0, m2 = 0;
        for (int gi = 0; gi < b; ++gi)
            for (int gj = 0; gj < b; ++gj) {
                std::uint32_t e = mono[static_cast<size_t>(gi * b + gj)];
                if (!e) continue;
                int wi = b - 1 - gi, wj = b - 1 - gj;
                if (wi >= 1 && wj >= r) m1 += e;
                if (wi >= r && wj >= 1) m2 += e;
            }
        if (m1 < s && m2 < s) return false;
    }
    return true;
}

int congruence_bound(long p, int r, int s) {
    if (s < p) return r;
    // ceil(r + (s - p) / (p - 1))
    int num = s - static_cast<int>(p);
    int den = static_cast<int>(p) - 1;
    return r + (num + den - 1) / den;
}

std::string dump_pairing_poly(const PairingPolys& pp, int m) {
    std::vector<std::string> names;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            names.push_back("x" + std::to_string(i) + std::to_string(j));
    return pp.P[static_cast<size_t>(m - 1)].dump(names);
}

} // namespace gst
