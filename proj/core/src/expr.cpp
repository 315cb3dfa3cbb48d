#include "gst/expr.hpp"

#include <json.hpp>

#include <cctype>
#include <sstream>

namespace gst {

namespace {

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    Expr parse() {
        Expr e = expr();
        skip_ws();
        if (peek() == '@') {
            ++pos_;
            field(e);
        }
        skip_ws();
        if (pos_ != s_.size()) throw ParseError("trailing input", col());
        return e;
    }

private:
    const std::string& s_;
    size_t pos_ = 0;

    int col() const { return static_cast<int>(pos_) + 1; }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    void expect(char c) {
        if (peek() != c)
            throw ParseError(std::string("expected '") + c + "'", col());
        ++pos_;
    }
    bool try_word(const std::string& w) {
        skip_ws();
        if (s_.compare(pos_, w.size(), w) != 0) return false;
        // identifiers must not continue
        size_t end = pos_ + w.size();
        if (end < s_.size() &&
            (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_'))
            return false;
        pos_ = end;
        return true;
    }
    long integer() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) throw ParseError("expected an integer", col());
        return std::stol(s_.substr(start, pos_ - start));
    }
    void field(Expr& e) {
        skip_ws();
        if (!try_word("F")) throw ParseError("expected field annotation F(p,d)", col());
        expect('(');
        long p = integer();
        expect(',');
        long d = integer();
        expect(')');
        e.has_field = true;
        e.field_p = p;
        e.field_d = static_cast<int>(d);
    }

    Expr unary(Expr::Kind k) {
        Expr e;
        e.kind = k;
        expect('(');
        e.lhs = std::make_unique<Expr>(expr());
        maybe_inner_field(*e.lhs);
        expect(')');
        return e;
    }

    void maybe_inner_field(Expr& e) {
        if (peek() == '@') {
            ++pos_;
            field(e);
        }
    }

    Expr expr() {
        skip_ws();
        if (try_word("tensor")) {
            Expr e;
            e.kind = Expr::Kind::Tensor;
            expect('(');
            e.lhs = std::make_unique<Expr>(expr());
            maybe_inner_field(*e.lhs);
            expect(',');
            e.rhs = std::make_unique<Expr>(expr());
            maybe_inner_field(*e.rhs);
            expect(')');
            return e;
        }
        if (try_word("dual")) return unary(Expr::Kind::Dual);
        if (try_word("matlis")) return unary(Expr::Kind::Matlis);
        if (try_word("split_u_m")) return unary(Expr::Kind::SplitUM);
        if (try_word("split_et_c")) return unary(Expr::Kind::SplitEtC);
        if (try_word("mu")) {
            Expr e;
            e.kind = Expr::Kind::Mu;
            expect('(');
            e.a = integer();
            expect(')');
            return e;
        }
        if (try_word("Z")) {
            Expr e;
            e.kind = Expr::Kind::Const;
            expect('/');
            expect('(');
            e.a = integer();
            expect(')');
            return e;
        }
        if (try_word("alpha")) {
            Expr e;
            e.kind = Expr::Kind::Alpha;
            expect('(');
            e.a = integer();
            expect(')');
            return e;
        }
        if (try_word("W")) {
            Expr e;
            e.kind = Expr::Kind::WittKer;
            expect('(');
            e.a = integer();
            expect(',');
            e.b = integer();
            expect(')');
            return e;
        }
        if (try_word("gm")) {
            Expr e;
            e.kind = Expr::Kind::Gm;
            return e;
        }
        if (try_word("ga")) {
            Expr e;
            e.kind = Expr::Kind::Ga;
            return e;
        }
        throw ParseError("unknown identifier", col());
    }
};

void collect_fields(const Expr& e, std::vector<std::pair<long, int>>& out) {
    if (e.has_field) out.emplace_back(e.field_p, e.field_d);
    if (e.lhs) collect_fields(*e.lhs, out);
    if (e.rhs) collect_fields(*e.rhs, out);
}

int needed_precision(const Expr& e, long p) {
    auto vp = [&](long n) {
        int v = 0;
        while (n % p == 0 && n > 1) {
            n /= p;
            ++v;
        }
        return v;
    };
    int need = 1;
    switch (e.kind) {
        case Expr::Kind::Mu:
        case Expr::Kind::Const: need = std::max(1, vp(e.a)); break;
        case Expr::Kind::WittKer: need = std::max(1, static_cast<int>(std::min(e.a, e.b))); break;
        default: break;
    }
    if (e.lhs) need = std::max(need, needed_precision(*e.lhs, p));
    if (e.rhs) need = std::max(need, needed_precision(*e.rhs, p));
    return need;
}

GroupScheme eval_scheme(const Expr& e, const SchemeConfig& cfg) {
    switch (e.kind) {
        case Expr::Kind::Mu: return gs_mu(cfg, e.a);
        case Expr::Kind::Const: return gs_constant(cfg, e.a);
        case Expr::Kind::Alpha: return gs_alpha(cfg, e.a);
        case Expr::Kind::WittKer:
            return gs_witt_kernel(cfg, static_cast<int>(e.a), static_cast<int>(e.b));
        case Expr::Kind::Gm: return gs_gm(cfg);
        case Expr::Kind::Ga: return gs_ga(cfg);
        case Expr::Kind::Dual: {
            // Cartier duality on the finite catalog: mu <-> Z/, alpha(p^r) <-> W(r,1),
            // W(m,n) <-> W(n,m)
            const Expr& in = *e.lhs;
            switch (in.kind) {
                case Expr::Kind::Mu: return gs_constant(cfg, in.a);
                case Expr::Kind::Const: return gs_mu(cfg, in.a);
                case Expr::Kind::Alpha: {
                    long r = 0, o = in.a;
                    while (o > 1) {
                        o /= cfg.p;
                        ++r;
                    }
                    return gs_witt_kernel(cfg, static_cast<int>(r), 1);
                }
                case Expr::Kind::WittKer:
                    return gs_witt_kernel(cfg, static_cast<int>(in.b), static_cast<int>(in.a));
                default:
                    throw std::invalid_argument("dual: argument must be a finite catalog group");
            }
        }
        default: throw std::invalid_argument("expression does not evaluate to a group scheme");
    }
}

nlohmann::ordered_json dd_dump_json(const DieudonneModule& D) {
    nlohmann::ordered_json j;
    j["divisors"] = D.M.e;
    auto mat = [&](const ModMap& f) {
        nlohmann::ordered_json m;
        m["twist"] = f.twist;
        auto rows = nlohmann::ordered_json::array();
        for (int i = 0; i < f.A.rows; ++i) {
            auto row = nlohmann::ordered_json::array();
            for (int jj = 0; jj < f.A.cols; ++jj) row.push_back(f.A.at(i, jj).c);
            rows.push_back(row);
        }
        m["matrix"] = rows;
        return m;
    };
    j["F"] = mat(D.F);
    j["V"] = mat(D.V);
    return j;
}

std::string dd_dump_text(const std::string& label, const DieudonneModule& D) {
    std::ostringstream os;
    os << label << ": " << describe(D.M);
    std::string id = identify_dieudonne(D);
    if (!id.empty() && id != "0") os << "  [" << id << "]";
    os << "\n";
    return os.str();
}

} // namespace

Expr parse_expr(const std::string& input) { return Parser(input).parse(); }

std::string render_expr(const Expr& e) {
    std::ostringstream os;
    switch (e.kind) {
        case Expr::Kind::Mu: os << "mu(" << e.a << ")"; break;
        case Expr::Kind::Const: os << "Z/(" << e.a << ")"; break;
        case Expr::Kind::Alpha: os << "alpha(" << e.a << ")"; break;
        case Expr::Kind::WittKer: os << "W(" << e.a << "," << e.b << ")"; break;
        case Expr::Kind::Gm: os << "gm"; break;
        case Expr::Kind::Ga: os << "ga"; break;
        case Expr::Kind::Tensor:
            os << "tensor(" << render_expr(*e.lhs) << "," << render_expr(*e.rhs) << ")";
            break;
        case Expr::Kind::Dual: os << "dual(" << render_expr(*e.lhs) << ")"; break;
        case Expr::Kind::Matlis: os << "matlis(" << render_expr(*e.lhs) << ")"; break;
        case Expr::Kind::SplitUM: os << "split_u_m(" << render_expr(*e.lhs) << ")"; break;
        case Expr::Kind::SplitEtC: os << "split_et_c(" << render_expr(*e.lhs) << ")"; break;
    }
    if (e.has_field) os << " @ F(" << e.field_p << "," << e.field_d << ")";
    return os.str();
}

EvalResult evaluate(const Expr& e, const EvalConfig& cfg) {
    std::vector<std::pair<long, int>> fields;
    collect_fields(e, fields);
    if (fields.empty())
        throw std::invalid_argument("missing field annotation @ F(p,d)");
    for (size_t i = 1; i < fields.size(); ++i)
        if (fields[i] != fields[0])
            throw std::invalid_argument("conflicting field annotations");
    SchemeConfig scfg;
    scfg.p = fields[0].first;
    scfg.d = fields[0].second;
    scfg.tower_cap = cfg.tower_cap;
    scfg.precision = cfg.precision > 0 ? cfg.precision : needed_precision(e, scfg.p);

    EvalResult out;
    if (e.kind == Expr::Kind::Tensor) {
        GroupScheme a = eval_scheme(*e.lhs, scfg);
        GroupScheme b = eval_scheme(*e.rhs, scfg);
        TensorConfig tc{cfg.bound, cfg.levels};
        TensorReport rep = tensor(a, b, tc);
        out.type = EvalResult::Type::Report;
        out.text = render_report_text(rep);
        out.json = render_report_json(rep);
        out.nonstabilizing = !rep.fully_stabilized();
        return out;
    }
    if (e.kind == Expr::Kind::Matlis) {
        GroupScheme g = eval_scheme(*e.lhs, scfg);
        DieudonneModule D = g.unipotent.is_zero() && !g.mult_avatar.is_zero()
                                ? matlis_dual(g.mult_avatar)
                                : matlis_dual(g.unipotent);
        out.type = EvalResult::Type::ModuleDump;
        out.text = dd_dump_text("matlis dual", D);
        out.json = dd_dump_json(D).dump(2);
        return out;
    }
    if (e.kind == Expr::Kind::SplitUM || e.kind == Expr::Kind::SplitEtC) {
        GroupScheme g = eval_scheme(*e.lhs, scfg);
        nlohmann::ordered_json j;
        std::ostringstream os;
        if (e.kind == Expr::Kind::SplitUM) {
            os << "unipotent part: " << describe(g.unipotent.M) << "\n";
            os << "multiplicative part: " << describe(g.mult) << "\n";
            j["unipotent"] = dd_dump_json(g.unipotent);
            j["multiplicative"] = {{"cyclic", g.mult.cyclic_orders()}, {"rank", g.mult.rank}};
        } else {
            auto [et, conn] = fitting_split_F(g.unipotent);
            os << "unipotent etale part: " << describe(et.M) << "\n";
            os << "unipotent connected part: " << describe(conn.M) << "\n";
            os << "multiplicative etale part: " << describe(pi0_mult(g.mult, g.p)) << "\n";
            os << "multiplicative connected part: " << describe(g.mult_avatar.M) << "\n";
            j["unipotent_etale"] = dd_dump_json(et);
            j["unipotent_connected"] = dd_dump_json(conn);
            j["mult_etale_cyclic"] = pi0_mult(g.mult, g.p).cyclic_orders();
            j["mult_connected"] = dd_dump_json(g.mult_avatar);
        }
        out.type = EvalResult::Type::ModuleDump;
        out.text = os.str();
        out.json = j.dump(2);
        return out;
    }
    // plain scheme (or dual of one): dump its parts
    GroupScheme g = eval_scheme(e, scfg);
    std::ostringstream os;
    os << g.name << " over F_" << pow_u64(static_cast<u64>(g.p), static_cast<u64>(g.d)) << "\n";
    os << dd_dump_text("unipotent Dieudonne module", g.unipotent);
    os << "multiplicative character module: " << describe(g.mult) << "\n";
    if (!g.mult_avatar.is_zero())
        os << dd_dump_text("p-primary multiplicative avatar", g.mult_avatar);
    nlohmann::ordered_json j;
    j["name"] = g.name;
    j["p"] = g.p;
    j["d"] = g.d;
    j["unipotent"] = dd_dump_json(g.unipotent);
    j["multiplicative"] = {{"cyclic", g.mult.cyclic_orders()}, {"rank", g.mult.rank}};
    j["mult_avatar"] = dd_dump_json(g.mult_avatar);
    out.type = EvalResult::Type::SchemeDump;
    out.text = os.str();
    out.json = j.dump(2);
    return out;
}

} // namespace gst
