#include "gst/witt.hpp"

#include <cassert>

namespace gst {

namespace {

mpz_class mpz_pow(const mpz_class& b, unsigned long e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

mpz_class p_power(long p, int k) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
    return r;
}

// -- torsion-free cover Z[x]/(F) of an UnramRing ----------------------------

struct Cover {
    const UnramRing* R;
    std::vector<mpz_class> F; // monic, degree d

    using Elem = std::vector<mpz_class>;

    explicit Cover(const UnramRing& ring) : R(&ring) {
        const auto& f = ring.modulus();
        F.assign(f.begin(), f.end());
    }

    int d() const { return R->d(); }

    Elem zero() const { return Elem(static_cast<size_t>(d()), 0); }
    Elem from_int(long n) const {
        Elem e = zero();
        e[0] = n;
        return e;
    }
    Elem add(Elem a, const Elem& b) const {
        for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
        return a;
    }
    Elem sub(Elem a, const Elem& b) const {
        for (size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
        return a;
    }
    Elem neg(Elem a) const {
        for (auto& c : a) c = -c;
        return a;
    }
    Elem mul(const Elem& a, const Elem& b) const {
        int dd = d();
        std::vector<mpz_class> prod(static_cast<size_t>(2 * dd - 1), 0);
        for (int i = 0; i < dd; ++i) {
            if (a[static_cast<size_t>(i)] == 0) continue;
            for (int j = 0; j < dd; ++j)
                prod[static_cast<size_t>(i + j)] +=
                    a[static_cast<size_t>(i)] * b[static_cast<size_t>(j)];
        }
        for (int k = 2 * dd - 2; k >= dd; --k) {
            if (prod[static_cast<size_t>(k)] == 0) continue;
            mpz_class lead = prod[static_cast<size_t>(k)];
            for (int i = 0; i <= dd; ++i)
                prod[static_cast<size_t>(k - dd + i)] -= lead * F[static_cast<size_t>(i)];
        }
        prod.resize(static_cast<size_t>(dd));
        return prod;
    }
    Elem mul_int(Elem a, const mpz_class& s) const {
        for (auto& c : a) c *= s;
        return a;
    }
    Elem div_p_exact(Elem a, long p) const {
        mpz_class q, r, zp(p);
        for (auto& c : a) {
            mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), c.get_mpz_t(), zp.get_mpz_t());
            if (r != 0) throw std::domain_error("Witt cover: ghost solve not divisible by p");
            c = q;
        }
        return a;
    }
    Elem pow(const Elem& a, unsigned long e) const {
        Elem r = from_int(1), base = a;
        while (e) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }
    Elem lift(const UnramElem& x) const {
        Elem e = zero();
        for (int i = 0; i < d(); ++i)
            e[static_cast<size_t>(i)] = mpz_class(static_cast<unsigned long>(x.c[static_cast<size_t>(i)]));
        return e;
    }
    UnramElem push(const Elem& x) const {
        UnramElem e = R->zero();
        long m = static_cast<long>(R->pp().mod);
        for (int i = 0; i < d(); ++i) {
            mpz_class r = x[static_cast<size_t>(i)] % m;
            if (r < 0) r += m;
            e.c[static_cast<size_t>(i)] = r.get_ui();
        }
        return e;
    }
};

// -- generic ghost machinery over a torsion-free ring -----------------------

template <class Ring>
std::vector<typename Ring::Elem> ghost_t(const Ring& R, long p,
                                         const std::vector<typename Ring::Elem>& a) {
    int n = static_cast<int>(a.size());
    std::vector<typename Ring::Elem> g;
    g.reserve(static_cast<size_t>(n));
    for (int m = 0; m < n; ++m) {
        typename Ring::Elem w = R.zero();
        mpz_class pi = 1;
        for (int i = 0; i <= m; ++i) {
            unsigned long e = p_power(p, m - i).get_ui();
            w = R.add(std::move(w), R.mul_int(R.pow(a[static_cast<size_t>(i)], e), pi));
            pi *= p;
        }
        g.push_back(std::move(w));
    }
    return g;
}

template <class Ring>
std::vector<typename Ring::Elem> from_ghost_t(const Ring& R, long p,
                                              const std::vector<typename Ring::Elem>& g) {
    int n = static_cast<int>(g.size());
    std::vector<typename Ring::Elem> a;
    a.reserve(static_cast<size_t>(n));
    for (int m = 0; m < n; ++m) {
        typename Ring::Elem acc = g[static_cast<size_t>(m)];
        mpz_class pi = 1;
        for (int i = 0; i < m; ++i) {
            unsigned long e = p_power(p, m - i).get_ui();
            acc = R.sub(std::move(acc), R.mul_int(R.pow(a[static_cast<size_t>(i)], e), pi));
            pi *= p;
        }
        for (int k = 0; k < m; ++k) acc = R.div_p_exact(std::move(acc), p);
        a.push_back(std::move(acc));
    }
    return a;
}

struct ZIntRing {
    using Elem = mpz_class;
    Elem zero() const { return 0; }
    Elem add(Elem a, const Elem& b) const { return a + b; }
    Elem sub(Elem a, const Elem& b) const { return a - b; }
    Elem mul_int(Elem a, const mpz_class& s) const { return a * s; }
    Elem pow(const Elem& a, unsigned long e) const { return mpz_pow(a, e); }
    Elem div_p_exact(Elem a, long p) const {
        mpz_class q, r;
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), mpz_class(p).get_mpz_t());
        if (r != 0) throw std::domain_error("ghost solve over Z: not divisible by p");
        return q;
    }
};

void check_same(const WittZ& x, const WittZ& y) {
    if (x.p != y.p || x.len() != y.len())
        throw std::invalid_argument("WittZ: prime or length mismatch");
}

void check_same(const WittU& x, const WittU& y) {
    if (x.R != y.R || x.len() != y.len())
        throw std::invalid_argument("WittU: ring or length mismatch");
}

} // namespace

// -- Z ------------------------------------------------------------------------

std::vector<mpz_class> ghost(const WittZ& w) { return ghost_t(ZIntRing{}, w.p, w.a); }

WittZ from_ghost(long p, const std::vector<mpz_class>& g) {
    return WittZ{p, from_ghost_t(ZIntRing{}, p, g)};
}

WittZ witt_add(const WittZ& x, const WittZ& y) {
    check_same(x, y);
    auto gx = ghost(x), gy = ghost(y);
    for (size_t i = 0; i < gx.size(); ++i) gx[i] += gy[i];
    return from_ghost(x.p, gx);
}

WittZ witt_sub(const WittZ& x, const WittZ& y) {
    check_same(x, y);
    auto gx = ghost(x), gy = ghost(y);
    for (size_t i = 0; i < gx.size(); ++i) gx[i] -= gy[i];
    return from_ghost(x.p, gx);
}

WittZ witt_mul(const WittZ& x, const WittZ& y) {
    check_same(x, y);
    auto gx = ghost(x), gy = ghost(y);
    for (size_t i = 0; i < gx.size(); ++i) gx[i] *= gy[i];
    return from_ghost(x.p, gx);
}

WittZ witt_neg(const WittZ& x) {
    auto g = ghost(x);
    for (auto& v : g) v = -v;
    return from_ghost(x.p, g);
}

WittZ witt_scalar_p(const WittZ& x) {
    auto g = ghost(x);
    for (auto& v : g) v *= x.p;
    return from_ghost(x.p, g);
}

WittZ frobenius(const WittZ& x) {
    if (x.len() == 0) return WittZ{x.p, {}};
    // ghost(F a)_m = w_{m+1}(a)
    auto g = ghost(x);
    g.erase(g.begin());
    return from_ghost(x.p, g);
}

WittZ verschiebung(const WittZ& x, VMode mode) {
    WittZ r{x.p, {}};
    r.a.push_back(0);
    for (const auto& c : x.a) r.a.push_back(c);
    if (mode == VMode::Truncate && !x.a.empty()) r.a.resize(x.a.size());
    return r;
}

WittZ teichmuller_z(long p, const mpz_class& x, int n) {
    WittZ r{p, std::vector<mpz_class>(static_cast<size_t>(n), 0)};
    if (n > 0) r.a[0] = x;
    return r;
}

WittZ dwork_lift(long p, const std::vector<mpz_class>& g) {
    // psi = id is a Frobenius lift on Z; the preimage exists iff
    // g_{m+1} = g_m mod p^{m+1} for all m.
    for (size_t m = 0; m + 1 < g.size(); ++m) {
        mpz_class diff = g[m + 1] - g[m];
        if (diff % p_power(p, static_cast<int>(m) + 1) != 0)
            throw GhostCongruenceError(static_cast<int>(m) + 1);
    }
    return from_ghost(p, g);
}

// -- W_N(F_q) coordinates ------------------------------------------------------

WittU witt_zero(const UnramRing& R, int n) {
    return WittU{&R, std::vector<UnramElem>(static_cast<size_t>(n), R.zero())};
}

namespace {

enum class BinOp { Add, Sub, Mul };

WittU cover_binop(const WittU& x, const WittU& y, BinOp op) {
    Cover C(*x.R);
    std::vector<Cover::Elem> xa, ya;
    for (const auto& c : x.a) xa.push_back(C.lift(c));
    for (const auto& c : y.a) ya.push_back(C.lift(c));
    long p = x.R->p();
    auto gx = ghost_t(C, p, xa);
    auto gy = ghost_t(C, p, ya);
    for (size_t i = 0; i < gx.size(); ++i) {
        switch (op) {
            case BinOp::Add: gx[i] = C.add(std::move(gx[i]), gy[i]); break;
            case BinOp::Sub: gx[i] = C.sub(std::move(gx[i]), gy[i]); break;
            case BinOp::Mul: gx[i] = C.mul(gx[i], gy[i]); break;
        }
    }
    auto za = from_ghost_t(C, p, gx);
    WittU r{x.R, {}};
    for (const auto& z : za) r.a.push_back(C.push(z));
    return r;
}

} // namespace

WittU witt_add(const WittU& x, const WittU& y) {
    check_same(x, y);
    return cover_binop(x, y, BinOp::Add);
}

WittU witt_sub(const WittU& x, const WittU& y) {
    check_same(x, y);
    return cover_binop(x, y, BinOp::Sub);
}

WittU witt_mul(const WittU& x, const WittU& y) {
    check_same(x, y);
    return cover_binop(x, y, BinOp::Mul);
}

WittU witt_neg(const WittU& x) { return witt_sub(witt_zero(*x.R, x.len()), x); }

WittU witt_scalar_p(const WittU& x) {
    Cover C(*x.R);
    std::vector<Cover::Elem> xa;
    for (const auto& c : x.a) xa.push_back(C.lift(c));
    auto g = ghost_t(C, x.R->p(), xa);
    for (auto& v : g) v = C.mul_int(std::move(v), x.R->p());
    auto za = from_ghost_t(C, x.R->p(), g);
    WittU r{x.R, {}};
    for (const auto& z : za) r.a.push_back(C.push(z));
    return r;
}

WittU frobenius_charp(const WittU& x) {
    if (x.R->N() != 1)
        throw std::domain_error("frobenius_charp: coordinates must be in characteristic p");
    WittU r{x.R, {}};
    for (const auto& c : x.a) r.a.push_back(x.R->pow(c, static_cast<u64>(x.R->p())));
    return r;
}

WittU verschiebung(const WittU& x, VMode mode) {
    WittU r{x.R, {}};
    r.a.push_back(x.R->zero());
    for (const auto& c : x.a) r.a.push_back(c);
    if (mode == VMode::Truncate) r.a.resize(x.a.size(), x.R->zero());
    return r;
}

WittU teichmuller(const UnramRing& R, const UnramElem& x, int n) {
    WittU r = witt_zero(R, n);
    if (n > 0) r.a[0] = x;
    return r;
}

UnramElem witt_to_unram(const WittU& a, const UnramRing& target) {
    if (a.R->p() != target.p() || a.R->d() != target.d() || a.R->N() != 1 ||
        a.len() != target.N())
        throw std::invalid_argument("witt_to_unram: expects length-N coordinates in F_q");
    UnramElem acc = target.zero();
    for (int i = 0; i < a.len(); ++i) {
        UnramElem digit = a.R->sigma(a.a[static_cast<size_t>(i)], -i);
        UnramElem t = target.teichmuller(digit);
        acc = target.add(acc, target.mul_pk(t, i));
    }
    return acc;
}

WittU unram_to_witt(const UnramElem& x, const UnramRing& source) {
    const UnramRing& k = source.residue_ring();
    WittU r = witt_zero(k, source.N());
    UnramElem cur = x;
    for (int i = 0; i < source.N(); ++i) {
        UnramElem digit = source.residue(cur);
        r.a[static_cast<size_t>(i)] = k.sigma(digit, i);
        cur = source.div_pk(source.sub(cur, source.teichmuller(digit)), 1);
    }
    return r;
}

} // namespace gst
