#include <doctest.h>

#include "gst/expr.hpp"

using namespace gst;

TEST_CASE("parser accepts the documented forms") {
    CHECK(parse_expr("tensor(mu(4), mu(4)) @ F(2,1)").kind == Expr::Kind::Tensor);
    CHECK(parse_expr("tensor(alpha(2), alpha(2)) @ F(2,2)").kind == Expr::Kind::Tensor);
    CHECK(parse_expr("  W ( 2 , 3 )@F(3,1)").kind == Expr::Kind::WittKer);
    CHECK(parse_expr("Z/(6) @ F(2,1)").kind == Expr::Kind::Const);
    CHECK(parse_expr("dual(alpha(2)) @ F(2,1)").kind == Expr::Kind::Dual);
    CHECK(parse_expr("gm @ F(5,1)").kind == Expr::Kind::Gm);
}

TEST_CASE("parser errors carry positions") {
    // "mu()" -> arity error at column 4
    try {
        (void)parse_expr("mu()");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.column == 4);
    }
    CHECK_THROWS_AS((void)parse_expr("frobnicate(2)"), ParseError);
    CHECK_THROWS_AS((void)parse_expr("mu(2") , ParseError);
    CHECK_THROWS_AS((void)parse_expr("tensor(mu(2) mu(2))"), ParseError);
}

TEST_CASE("print/parse round trip") {
    for (const char* s :
         {"tensor(mu(4),mu(4)) @ F(2,1)", "dual(W(2,1)) @ F(2,1)", "split_u_m(Z/(6)) @ F(2,1)",
          "matlis(mu(4)) @ F(2,1)", "tensor(ga,alpha(2)) @ F(2,1)", "split_et_c(Z/(12)) @ F(2,1)"}) {
        Expr e = parse_expr(s);
        std::string r = render_expr(e);
        Expr e2 = parse_expr(r);
        CHECK(render_expr(e2) == r);
    }
}

TEST_CASE("field annotations: required and consistent") {
    EvalConfig cfg;
    CHECK_THROWS_AS((void)evaluate(parse_expr("mu(2)"), cfg), std::invalid_argument);
    CHECK_THROWS_AS(
        (void)evaluate(parse_expr("tensor(mu(2) @ F(2,1), mu(2) @ F(3,1))"), cfg),
        std::invalid_argument);
    // consistent inner annotations are fine
    EvalResult r = evaluate(parse_expr("tensor(mu(2) @ F(2,1), mu(2) @ F(2,1))"), cfg);
    CHECK(r.type == EvalResult::Type::Report);
}

TEST_CASE("evaluate: the documented examples") {
    EvalConfig cfg;
    cfg.bound = 4;
    cfg.levels = 2;
    // mu_2 (x) mu_2 = 0
    EvalResult r1 = evaluate(parse_expr("tensor(mu(2), mu(2)) @ F(2,1)"), cfg);
    CHECK(r1.text.find("  0\n") != std::string::npos);
    CHECK_FALSE(r1.nonstabilizing);
    // Z/2 (x) mu_2 = mu_2
    EvalResult r2 = evaluate(parse_expr("tensor(Z/(2), mu(2)) @ F(2,1)"), cfg);
    CHECK(r2.text.find("mu_2") != std::string::npos);
    // dual(alpha(2)) is self-dual: the dump shows the alpha_p module
    EvalResult r3 = evaluate(parse_expr("dual(alpha(2)) @ F(2,1)"), cfg);
    CHECK(r3.type == EvalResult::Type::SchemeDump);
    CHECK(r3.text.find("W/p^1") != std::string::npos);
    CHECK(r3.text.find("alpha") != std::string::npos);
    // alpha (x) alpha does not stabilize
    EvalResult r4 = evaluate(parse_expr("tensor(alpha(2), alpha(2)) @ F(2,1)"), cfg);
    CHECK(r4.nonstabilizing);
    // matlis(mu(4)): I(D(mu_4)) = D(Z/4)
    EvalResult r5 = evaluate(parse_expr("matlis(mu(4)) @ F(2,1)"), cfg);
    CHECK(r5.text.find("D(Z/p^2)") != std::string::npos);
    // split of Z/12 at p=2: unipotent Z/4 etale, multiplicative Z/3
    EvalResult r6 = evaluate(parse_expr("split_et_c(Z/(12)) @ F(2,1)"), cfg);
    CHECK(r6.text.find("unipotent etale part: W/p^2") != std::string::npos);
    CHECK(r6.text.find("multiplicative etale part: Z/3") != std::string::npos);
}
