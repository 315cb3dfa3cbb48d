#ifndef GST_MPOLY_HPP
#define GST_MPOLY_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace gst {

// Sparse multivariate polynomials with exact coefficients, ordered graded-lex
// so printed/dumped forms are deterministic.

using Mono = std::vector<std::uint32_t>;

struct MonoLess {
    bool operator()(const Mono& a, const Mono& b) const {
        std::uint64_t da = 0, db = 0;
        for (auto e : a) da += e;
        for (auto e : b) db += e;
        if (da != db) return da < db;
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }
};

class PolyBudgetExceeded : public std::runtime_error {
public:
    explicit PolyBudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Process-wide cap on term counts produced by multiplication; computations
// that would materialize larger polynomials fail loudly instead of thrashing.
std::size_t& mpoly_term_budget();

template <class C>
class MPoly {
public:
    int nvars = 0;
    std::map<Mono, C, MonoLess> terms;

    MPoly() = default;
    explicit MPoly(int nv) : nvars(nv) {}

    static MPoly zero(int nv) { return MPoly(nv); }
    static MPoly constant(int nv, const C& c) {
        MPoly r(nv);
        if (c != 0) r.terms.emplace(Mono(static_cast<size_t>(nv), 0), c);
        return r;
    }
    static MPoly var(int nv, int i, std::uint32_t e = 1) {
        MPoly r(nv);
        Mono m(static_cast<size_t>(nv), 0);
        m[static_cast<size_t>(i)] = e;
        r.terms.emplace(std::move(m), C(1));
        return r;
    }

    bool is_zero() const { return terms.empty(); }

    void add_term(const Mono& m, const C& c) {
        if (c == 0) return;
        auto it = terms.find(m);
        if (it == terms.end()) {
            terms.emplace(m, c);
        } else {
            it->second += c;
            if (it->second == 0) terms.erase(it);
        }
    }

    MPoly& operator+=(const MPoly& o) {
        check_arity(o);
        for (const auto& [m, c] : o.terms) add_term(m, c);
        return *this;
    }
    MPoly& operator-=(const MPoly& o) {
        check_arity(o);
        for (const auto& [m, c] : o.terms) add_term(m, C(-c));
        return *this;
    }
    friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
    friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }

    friend MPoly operator*(const MPoly& a, const MPoly& b) {
        a.check_arity(b);
        MPoly r(a.nvars);
        Mono m(static_cast<size_t>(a.nvars), 0);
        for (const auto& [ma, ca] : a.terms) {
            for (const auto& [mb, cb] : b.terms) {
                for (size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
                r.add_term(m, ca * cb);
            }
            if (r.terms.size() > mpoly_term_budget())
                throw PolyBudgetExceeded("polynomial term budget exceeded in multiplication");
        }
        return r;
    }

    MPoly& operator*=(const MPoly& o) { return *this = *this * o; }

    MPoly operator-() const {
        MPoly r(nvars);
        for (const auto& [m, c] : terms) r.terms.emplace(m, C(-c));
        return r;
    }

    void scale(const C& s) {
        if (s == 0) {
            terms.clear();
            return;
        }
        for (auto& [m, c] : terms) c *= s;
    }

    MPoly pow(std::uint64_t e) const {
        MPoly r = constant(nvars, C(1));
        MPoly base = *this;
        while (e) {
            if (e & 1) r = r * base;
            e >>= 1;
            if (e) base = base * base;
        }
        return r;
    }

    // substitute x_i -> x_i^k (the Frobenius-lift substitution used by Dwork
    // certification)
    MPoly raise_vars(std::uint32_t k) const {
        MPoly r(nvars);
        for (const auto& [m, c] : terms) {
            Mono mm = m;
            for (auto& e : mm) e *= k;
            r.terms.emplace(std::move(mm), c);
        }
        return r;
    }

    // generic substitution: vars[i] supplies the value of x_i in any ring
    // with +,*,zero via the provided callbacks
    template <class T>
    T eval(const std::vector<T>& vars, const T& zero, const T& one,
           std::function<T(const T&, const T&)> add,
           std::function<T(const T&, const T&)> mul,
           std::function<T(const C&)> lift) const {
        T acc = zero;
        for (const auto& [m, c] : terms) {
            T t = lift(c);
            for (size_t i = 0; i < m.size(); ++i)
                for (std::uint32_t e = 0; e < m[i]; ++e) t = mul(t, vars[i]);
            acc = add(acc, t);
        }
        (void)one;
        return acc;
    }

    bool operator==(const MPoly& o) const { return nvars == o.nvars && terms == o.terms; }

    // diff-stable dump: sorted monomial list "coeff*x0^e0*x1^e1" with the
    // order fixed by the graded-lex comparator
    std::string dump(const std::vector<std::string>& names) const {
        std::ostringstream os;
        bool first = true;
        for (const auto& [m, c] : terms) {
            if (!first) os << " + ";
            first = false;
            os << c;
            for (size_t i = 0; i < m.size(); ++i) {
                if (m[i] == 0) continue;
                os << "*" << names[i];
                if (m[i] > 1) os << "^" << m[i];
            }
        }
        if (first) os << "0";
        return os.str();
    }

private:
    void check_arity(const MPoly& o) const {
        if (nvars != o.nvars) throw std::invalid_argument("MPoly: arity mismatch");
    }
};

using ZPoly = MPoly<mpz_class>;
using QPoly = MPoly<mpq_class>;

inline QPoly to_qpoly(const ZPoly& f) {
    QPoly r(f.nvars);
    for (const auto& [m, c] : f.terms) r.terms.emplace(m, mpq_class(c));
    return r;
}

// exact conversion; throws if some coefficient is non-integral
inline ZPoly to_zpoly_exact(const QPoly& f) {
    ZPoly r(f.nvars);
    for (const auto& [m, c] : f.terms) {
        if (c.get_den() != 1)
            throw std::domain_error("to_zpoly_exact: non-integral coefficient");
        r.terms.emplace(m, c.get_num());
    }
    return r;
}

inline bool is_integral(const QPoly& f) {
    for (const auto& [m, c] : f.terms)
        if (c.get_den() != 1) return false;
    return true;
}

// divide every coefficient by s, exactly for Z-polys (throws otherwise)
inline ZPoly div_exact(const ZPoly& f, const mpz_class& s) {
    ZPoly r(f.nvars);
    for (const auto& [m, c] : f.terms) {
        mpz_class q, rem;
        mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), c.get_mpz_t(), s.get_mpz_t());
        if (rem != 0) throw std::domain_error("div_exact: not divisible");
        r.terms.emplace(m, q);
    }
    return r;
}

inline QPoly div_scalar(const QPoly& f, const mpq_class& s) {
    QPoly r(f.nvars);
    for (const auto& [m, c] : f.terms) r.terms.emplace(m, mpq_class(c / s));
    return r;
}

} // namespace gst

#endif
