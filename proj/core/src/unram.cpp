#include "gst/unram.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <mutex>
#include <tuple>

namespace gst {

namespace {

// Dense polynomial helpers over Z/m (u64 coefficients, little-endian).
using Poly = std::vector<u64>;

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mul(const Poly& a, const Poly& b, u64 m) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + a[i] * b[j]) % m;
    }
    trim(r);
    return r;
}

Poly poly_sub(Poly a, const Poly& b, u64 m) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + m - b[i] % m) % m;
    trim(a);
    return a;
}

// remainder of a modulo monic g
Poly poly_rem(Poly a, const Poly& g, u64 m) {
    trim(a);
    size_t dg = g.size() - 1;
    while (a.size() > dg) {
        u64 lead = a.back();
        size_t shift = a.size() - 1 - dg;
        if (lead != 0)
            for (size_t i = 0; i <= dg; ++i)
                a[shift + i] = (a[shift + i] + m - lead * g[i] % m) % m;
        a.pop_back();
        trim(a);
        if (a.size() <= dg) break;
    }
    trim(a);
    return a;
}

// exact quotient a / g for monic g (requires g | a)
Poly poly_quo_exact(Poly a, const Poly& g, u64 m) {
    trim(a);
    size_t dg = g.size() - 1;
    if (a.size() <= dg) {
        trim(a);
        if (!a.empty()) throw std::logic_error("poly_quo_exact: not divisible");
        return {};
    }
    Poly q(a.size() - dg, 0);
    while (a.size() > dg) {
        u64 lead = a.back();
        size_t shift = a.size() - 1 - dg;
        q[shift] = lead;
        for (size_t i = 0; i <= dg; ++i)
            a[shift + i] = (a[shift + i] + m - lead * g[i] % m) % m;
        trim(a);
    }
    if (!a.empty()) throw std::logic_error("poly_quo_exact: remainder nonzero");
    return q;
}

Poly poly_powmod(Poly base, u64 exp, const Poly& g, u64 m) {
    Poly r{1};
    base = poly_rem(std::move(base), g, m);
    while (exp) {
        if (exp & 1) r = poly_rem(poly_mul(r, base, m), g, m);
        base = poly_rem(poly_mul(base, base, m), g, m);
        exp >>= 1;
    }
    return r;
}

Poly poly_gcd(Poly a, Poly b, u64 p) {
    PrimePower fp(static_cast<long>(p), 1);
    trim(a);
    trim(b);
    while (!b.empty()) {
        // make b monic
        u64 inv = fp.inv(b.back());
        for (auto& c : b) c = c * inv % p;
        a = poly_rem(std::move(a), b, p);
        std::swap(a, b);
    }
    return a;
}

// extended euclid over F_p: returns (g, u, v) monic g with u a + v b = g
std::tuple<Poly, Poly, Poly> poly_xgcd(Poly a, Poly b, u64 p) {
    Poly r0 = a, r1 = b;
    Poly s0{1}, s1{}, t0{}, t1{1};
    PrimePower fp(static_cast<long>(p), 1);
    trim(r0);
    trim(r1);
    while (!r1.empty()) {
        // divide r0 by r1 (r1 not nec monic): normalize
        u64 inv = fp.inv(r1.back());
        Poly r1m = r1;
        for (auto& c : r1m) c = c * inv % p;
        // quotient of r0 by r1m
        Poly rem = r0;
        Poly q(rem.size() > r1m.size() - 1 ? rem.size() - (r1m.size() - 1) : 0, 0);
        size_t dg = r1m.size() - 1;
        while (rem.size() > dg) {
            u64 lead = rem.back();
            size_t shift = rem.size() - 1 - dg;
            q[shift] = (q[shift] + lead) % p;
            for (size_t i = 0; i <= dg; ++i)
                rem[shift + i] = (rem[shift + i] + p - lead * r1m[i] % p) % p;
            trim(rem);
        }
        // scale q by inv (since we divided by r1m = inv*r1): r0 = q*r1m + rem = (q*inv)*r1 + rem
        for (auto& c : q) c = c * inv % p;
        Poly s2 = poly_sub(s0, poly_mul(q, s1, p), p);
        Poly t2 = poly_sub(t0, poly_mul(q, t1, p), p);
        r0 = std::move(r1);
        r1 = std::move(rem);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    // normalize gcd monic
    if (!r0.empty()) {
        u64 inv = fp.inv(r0.back());
        for (auto& c : r0) c = c * inv % p;
        for (auto& c : s0) c = c * inv % p;
        for (auto& c : t0) c = c * inv % p;
    }
    return {r0, s0, t0};
}

bool is_irreducible(const Poly& f, long p) {
    // f monic of degree d over F_p: irreducible iff x^(p^d) = x mod f and
    // gcd(x^(p^(d/l)) - x, f) = 1 for every prime l | d.
    size_t d = f.size() - 1;
    u64 up = static_cast<u64>(p);
    Poly x{0, 1};
    Poly xp = poly_powmod(x, pow_u64(up, d), f, up);
    Poly diff = poly_sub(xp, x, up);
    if (!diff.empty()) return false;
    for (size_t l = 2; l <= d; ++l) {
        if (d % l != 0) continue;
        bool lprime = true;
        for (size_t t = 2; t * t <= l; ++t)
            if (l % t == 0) lprime = false;
        if (!lprime) continue;
        Poly xe = poly_powmod(x, pow_u64(up, d / l), f, up);
        Poly g = poly_gcd(f, poly_sub(xe, x, up), up);
        if (g.size() != 1) return false;
    }
    return true;
}

// Smallest (lex on coefficient vectors) monic irreducible of degree d over
// F_p with nonzero constant term.  Deterministic, so ring construction is
// reproducible across runs.
Poly find_irreducible(long p, int d) {
    u64 up = static_cast<u64>(p);
    if (d == 1) return Poly{up - 1, 1}; // x - 1: xi = 1, sigma = id
    std::vector<u64> coef(static_cast<size_t>(d), 0);
    coef[0] = 1;
    while (true) {
        Poly f(coef.begin(), coef.end());
        f.push_back(1);
        if (f[0] != 0 && is_irreducible(f, p)) return f;
        // increment
        int i = 0;
        while (i < d) {
            if (++coef[static_cast<size_t>(i)] < up) break;
            coef[static_cast<size_t>(i)] = 0;
            ++i;
        }
        if (i == d) throw std::logic_error("find_irreducible: search exhausted");
    }
}

// Hensel: lift the factorization x^(q-1) - 1 = fbar * gbar over F_p to
// Z/p^N, one power of p at a time.  Returns the lifted monic f.
Poly hensel_lift_factor(const Poly& fbar, long p, int d, int N) {
    u64 up = static_cast<u64>(p);
    u64 q1 = pow_u64(up, static_cast<u64>(d)) - 1;
    PrimePower pn(p, N);
    u64 m = pn.mod;

    auto h_mod = [&](u64 mm) {
        Poly h(static_cast<size_t>(q1 + 1), 0);
        h[0] = mm - 1;
        h[static_cast<size_t>(q1)] = 1;
        return h;
    };

    Poly gbar = poly_quo_exact(h_mod(up), fbar, up);
    auto [g0, u, v] = poly_xgcd(fbar, gbar, up);
    if (g0.size() != 1) throw std::logic_error("hensel: factors not coprime");

    // current lifts mod p^k
    Poly f(fbar), g(gbar);
    u64 pk = up;
    for (int k = 1; k < N; ++k) {
        u64 pk1 = pk * up;
        // e = (h - f g)/p^k mod p
        Poly prod = poly_mul(f, g, pk1);
        Poly h = h_mod(pk1);
        Poly e = poly_sub(h, prod, pk1);
        for (auto& c : e) {
            if (c % pk != 0) throw std::logic_error("hensel: defect not divisible");
            c = (c / pk) % up;
        }
        trim(e);
        // df = v e mod fbar; dg = (e - df gbar)/fbar over F_p
        Poly df = poly_rem(poly_mul(v, e, up), fbar, up);
        Poly dg = poly_quo_exact(poly_sub(e, poly_mul(df, gbar, up), up), fbar, up);
        f.resize(static_cast<size_t>(d) + 1, 0);
        for (size_t i = 0; i < df.size(); ++i) f[i] = (f[i] + pk * df[i]) % pk1;
        g.resize(static_cast<size_t>(q1) + 1 - static_cast<size_t>(d), 0);
        for (size_t i = 0; i < dg.size(); ++i) g[i] = (g[i] + pk * dg[i]) % pk1;
        pk = pk1;
    }
    // final sanity: f g = h mod p^N and f monic
    Poly prod = poly_mul(f, g, m);
    Poly h = h_mod(m);
    if (poly_sub(h, prod, m) != Poly{})
        throw std::logic_error("hensel: lift failed");
    if (f.back() != 1) throw std::logic_error("hensel: lift not monic");
    return f;
}

} // namespace

UnramRing::UnramRing(long p, int d, int N) : pp_(p, N), d_(d) {
    if (d < 1) throw std::invalid_argument("UnramRing: d must be >= 1");
    q_ = pow_u64(static_cast<u64>(p), static_cast<u64>(d));
    if (q_ > (1ull << 22)) throw std::invalid_argument("UnramRing: q too large");

    Poly fbar = find_irreducible(p, d);
    f_ = (N == 1) ? fbar : hensel_lift_factor(fbar, p, d, N);

    // x^d .. x^(2d-2) mod f
    xpow_.resize(static_cast<size_t>(std::max(0, d - 1)));
    Poly cur(f_.begin(), f_.end() - 1); // x^d = -(lower part)
    for (auto& c : cur) c = pp_.neg(c);
    for (int k = 0; k < d - 1; ++k) {
        cur.resize(static_cast<size_t>(d), 0);
        xpow_[static_cast<size_t>(k)] = cur;
        // multiply by x
        Poly nxt(static_cast<size_t>(d) + 1, 0);
        for (int i = 0; i < d; ++i) nxt[static_cast<size_t>(i) + 1] = cur[static_cast<size_t>(i)];
        nxt = poly_rem(std::move(nxt), f_, pp_.mod);
        nxt.resize(static_cast<size_t>(d), 0);
        cur = std::move(nxt);
    }

    // sigma(xi) = xi^p (exact automorphism for the Teichmueller modulus)
    Poly sx = poly_powmod(Poly{0, 1}, static_cast<u64>(p), f_, pp_.mod);
    sx.resize(static_cast<size_t>(d), 0);
    sigma_xi_ = UnramElem{sx};

    sigma_xi_pows_.resize(static_cast<size_t>(d));
    sigma_xi_pows_[0] = xi();
    for (int j = 1; j < d; ++j) {
        // sigma^j(xi) = (sigma^(j-1)(xi))^p
        sigma_xi_pows_[static_cast<size_t>(j)] =
            pow(sigma_xi_pows_[static_cast<size_t>(j - 1)], static_cast<u64>(p));
    }
    // sanity: sigma^d = id
    UnramElem sd = pow(sigma_xi_pows_[static_cast<size_t>(d - 1)], static_cast<u64>(p));
    assert(sd == xi());
    (void)sd;
}

std::vector<u64> UnramRing::reduce_poly(std::vector<u64> v) const {
    v = poly_rem(std::move(v), f_, pp_.mod);
    v.resize(static_cast<size_t>(d_), 0);
    return v;
}

UnramElem UnramRing::one() const {
    UnramElem e = zero();
    e.c[0] = 1 % pp_.mod;
    return e;
}

UnramElem UnramRing::xi() const {
    UnramElem e = zero();
    if (d_ == 1)
        e.c[0] = 1 % pp_.mod;
    else
        e.c[1] = 1;
    return e;
}

UnramElem UnramRing::from_int(i64 n) const {
    UnramElem e = zero();
    e.c[0] = pp_.reduce_signed(n);
    return e;
}

bool UnramRing::is_zero(const UnramElem& a) const {
    for (u64 c : a.c)
        if (c != 0) return false;
    return true;
}

UnramElem UnramRing::add(const UnramElem& a, const UnramElem& b) const {
    UnramElem r = a;
    for (int i = 0; i < d_; ++i) r.c[static_cast<size_t>(i)] = pp_.add(r.c[static_cast<size_t>(i)], b.c[static_cast<size_t>(i)]);
    return r;
}

UnramElem UnramRing::sub(const UnramElem& a, const UnramElem& b) const {
    UnramElem r = a;
    for (int i = 0; i < d_; ++i) r.c[static_cast<size_t>(i)] = pp_.sub(r.c[static_cast<size_t>(i)], b.c[static_cast<size_t>(i)]);
    return r;
}

UnramElem UnramRing::neg(const UnramElem& a) const {
    UnramElem r = a;
    for (auto& c : r.c) c = pp_.neg(c);
    return r;
}

UnramElem UnramRing::mul(const UnramElem& a, const UnramElem& b) const {
    std::vector<u64> prod(2 * static_cast<size_t>(d_) - 1, 0);
    for (int i = 0; i < d_; ++i) {
        u64 ai = a.c[static_cast<size_t>(i)];
        if (ai == 0) continue;
        for (int j = 0; j < d_; ++j)
            prod[static_cast<size_t>(i + j)] =
                (prod[static_cast<size_t>(i + j)] + ai * b.c[static_cast<size_t>(j)]) % pp_.mod;
    }
    // fold powers >= d via precomputed table
    UnramElem r = zero();
    for (int i = 0; i < d_; ++i) r.c[static_cast<size_t>(i)] = prod[static_cast<size_t>(i)];
    for (int k = d_; k <= 2 * d_ - 2; ++k) {
        u64 c = prod[static_cast<size_t>(k)];
        if (c == 0) continue;
        const auto& xp = xpow_[static_cast<size_t>(k - d_)];
        for (int i = 0; i < d_; ++i)
            r.c[static_cast<size_t>(i)] = (r.c[static_cast<size_t>(i)] + c * xp[static_cast<size_t>(i)]) % pp_.mod;
    }
    return r;
}

UnramElem UnramRing::mul_scalar(u64 s, const UnramElem& a) const {
    UnramElem r = a;
    s %= pp_.mod;
    for (auto& c : r.c) c = c * s % pp_.mod;
    return r;
}

UnramElem UnramRing::pow(const UnramElem& a, u64 e) const {
    UnramElem r = one(), base = a;
    while (e) {
        if (e & 1) r = mul(r, base);
        base = mul(base, base);
        e >>= 1;
    }
    return r;
}

int UnramRing::val(const UnramElem& a) const {
    int v = pp_.N;
    for (u64 c : a.c) v = std::min(v, pp_.val(c));
    return v;
}

UnramElem UnramRing::inv(const UnramElem& a) const {
    if (!is_unit(a)) throw std::domain_error("UnramRing::inv: not a unit");
    // inverse mod p by Fermat in F_q, then Newton lifting
    UnramElem w = pow(a, q_ - 2); // inverse modulo p
    int prec = 1;
    while (prec < pp_.N) {
        // w <- w (2 - a w)
        UnramElem aw = mul(a, w);
        UnramElem t = sub(from_int(2), aw);
        w = mul(w, t);
        prec *= 2;
    }
    return w;
}

UnramElem UnramRing::div_pk(const UnramElem& a, int k) const {
    UnramElem r = a;
    u64 pk = pow_u64(static_cast<u64>(pp_.p), static_cast<u64>(k));
    for (auto& c : r.c) {
        if (c % pk != 0) throw std::domain_error("UnramRing::div_pk: not divisible");
        c /= pk;
    }
    return r;
}

UnramElem UnramRing::mul_pk(const UnramElem& a, int k) const {
    u64 pk = pow_u64(static_cast<u64>(pp_.p), static_cast<u64>(std::min(k, pp_.N)));
    return mul_scalar(pk % pp_.mod, a);
}

UnramElem UnramRing::reduce_mod_pk(const UnramElem& a, int k) const {
    u64 pk = pow_u64(static_cast<u64>(pp_.p), static_cast<u64>(std::min(k, pp_.N)));
    UnramElem r = a;
    for (auto& c : r.c) c %= pk;
    return r;
}

UnramElem UnramRing::sigma(const UnramElem& a, int t) const {
    int tt = ((t % d_) + d_) % d_;
    if (tt == 0) return a;
    // sigma^t(sum c_j xi^j) = sum c_j (sigma^t(xi))^j
    const UnramElem& sx = sigma_xi_pows_[static_cast<size_t>(tt)];
    UnramElem r = zero(), xp = one();
    for (int j = 0; j < d_; ++j) {
        if (j > 0) xp = mul(xp, sx);
        if (a.c[static_cast<size_t>(j)] != 0)
            r = add(r, mul_scalar(a.c[static_cast<size_t>(j)], xp));
    }
    return r;
}

const UnramRing& UnramRing::residue_ring() const {
    if (pp_.N == 1) return *this;
    if (!residue_) residue_ = std::make_shared<const UnramRing>(pp_.p, d_, 1);
    return *residue_;
}

UnramElem UnramRing::residue(const UnramElem& a) const {
    UnramElem r = a;
    for (auto& c : r.c) c %= static_cast<u64>(pp_.p);
    return r;
}

UnramElem UnramRing::teichmuller(const UnramElem& rbar) const {
    // lift coefficients and raise to q^(N-1): the limit of z^(q^k)
    UnramElem z = rbar;
    for (auto& c : z.c) c %= pp_.mod;
    for (int k = 0; k < pp_.N - 1; ++k) z = pow(z, q_);
    return z;
}

std::vector<UnramElem> UnramRing::residue_elements() const {
    const UnramRing& rr = residue_ring();
    std::vector<UnramElem> out;
    out.reserve(static_cast<size_t>(q_));
    std::vector<u64> cur(static_cast<size_t>(d_), 0);
    u64 up = static_cast<u64>(pp_.p);
    while (true) {
        out.push_back(UnramElem{cur});
        int i = 0;
        while (i < d_) {
            if (++cur[static_cast<size_t>(i)] < up) break;
            cur[static_cast<size_t>(i)] = 0;
            ++i;
        }
        if (i == d_) break;
    }
    (void)rr;
    return out;
}

namespace {
std::map<std::tuple<long, int, int>, std::shared_ptr<const UnramRing>> g_ring_registry;
std::mutex g_ring_mutex;
std::map<std::pair<const UnramRing*, const UnramRing*>, std::shared_ptr<const UnramEmbedding>> g_embed_registry;
std::mutex g_embed_mutex;
} // namespace

const UnramRing& unram_ring(long p, int d, int N) {
    std::lock_guard<std::mutex> lock(g_ring_mutex);
    auto key = std::make_tuple(p, d, N);
    auto it = g_ring_registry.find(key);
    if (it == g_ring_registry.end())
        it = g_ring_registry.emplace(key, std::make_shared<const UnramRing>(p, d, N)).first;
    return *it->second;
}

UnramEmbedding::UnramEmbedding(const UnramRing& small, const UnramRing& big)
    : small_(&small), big_(&big) {
    if (small.p() != big.p() || small.N() != big.N() || big.d() % small.d() != 0)
        throw std::invalid_argument("UnramEmbedding: incompatible rings");
    // find a residue root of the small modulus in the big residue field
    const UnramRing& rbig = big.residue_ring();
    const auto& f = small.modulus();
    UnramElem root_bar;
    bool found = false;
    for (const auto& z : big.residue_elements()) {
        UnramElem acc = rbig.zero(), zp = rbig.one();
        for (size_t i = 0; i < f.size(); ++i) {
            if (i > 0) zp = rbig.mul(zp, z);
            acc = rbig.add(acc, rbig.mul_scalar(f[i] % static_cast<u64>(big.p()), zp));
        }
        if (rbig.is_zero(acc)) {
            root_bar = z;
            found = true;
            break;
        }
    }
    if (!found) throw std::logic_error("UnramEmbedding: no residue root");
    // Newton-lift the root in the big ring: z <- z - f(z)/f'(z)
    UnramElem z = root_bar;
    auto eval = [&](const UnramElem& x, bool deriv) {
        // Horner on f or f'
        UnramElem acc = big.zero();
        if (!deriv) {
            for (size_t i = f.size(); i-- > 0;) {
                acc = big.mul(acc, x);
                acc = big.add(acc, big.mul_scalar(f[i], big.one()));
            }
        } else {
            for (size_t i = f.size(); i-- > 1;) {
                acc = big.mul(acc, x);
                acc = big.add(acc, big.mul_scalar(f[i] * static_cast<u64>(i) % big.pp().mod, big.one()));
            }
        }
        return acc;
    };
    // simple fixed iteration count: precision doubles each step
    int prec = 1;
    while (prec < big.N()) {
        UnramElem fz = eval(z, false);
        UnramElem dz = eval(z, true);
        z = big.sub(z, big.mul(fz, big.inv(dz)));
        prec *= 2;
    }
    if (!big.is_zero(eval(z, false)))
        throw std::logic_error("UnramEmbedding: Newton lift failed");
    xi_pows_.resize(static_cast<size_t>(small.d()));
    xi_pows_[0] = big.one();
    for (int j = 1; j < small.d(); ++j)
        xi_pows_[static_cast<size_t>(j)] = big.mul(xi_pows_[static_cast<size_t>(j - 1)], z);
}

UnramElem UnramEmbedding::apply(const UnramElem& a) const {
    UnramElem r = big_->zero();
    for (int j = 0; j < small_->d(); ++j)
        if (a.c[static_cast<size_t>(j)] != 0)
            r = big_->add(r, big_->mul_scalar(a.c[static_cast<size_t>(j)], xi_pows_[static_cast<size_t>(j)]));
    return r;
}

const UnramEmbedding& unram_embedding(const UnramRing& small, const UnramRing& big) {
    std::lock_guard<std::mutex> lock(g_embed_mutex);
    auto key = std::make_pair(&small, &big);
    auto it = g_embed_registry.find(key);
    if (it == g_embed_registry.end())
        it = g_embed_registry.emplace(key, std::make_shared<const UnramEmbedding>(small, big)).first;
    return *it->second;
}

} // namespace gst
