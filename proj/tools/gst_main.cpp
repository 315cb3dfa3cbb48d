#include "gst/expr.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"gstensor: tensor products of commutative affine group schemes over finite "
                 "fields, through Dieudonne and Galois modules"};
    std::string expression;
    int trunc = 8;
    int levels = 3;
    bool json = false;
    bool profile = false;
    app.add_option("expression", expression,
                   "expression, e.g. \"tensor(mu(4), mu(4)) @ F(2,1)\"; reads stdin when omitted");
    app.add_option("--trunc", trunc, "truncation bound B for the unipotent tensor")
        ->default_val(8);
    app.add_option("--levels", levels, "field levels F_{q^m} for the pairing summand")
        ->default_val(3);
    app.add_flag("--json", json, "emit the JSON report");
    app.add_flag("--profile", profile, "emit growth profiles");
    CLI11_PARSE(app, argc, argv);

    if (expression.empty()) {
        std::getline(std::cin, expression);
        if (expression.empty()) {
            std::cerr << "error: no expression given\n";
            return 1;
        }
    }

    gst::EvalConfig cfg;
    cfg.bound = trunc;
    cfg.levels = levels;
    cfg.profile = profile;
    if (const char* pe = std::getenv("DK_PRECISION")) cfg.precision = std::atoi(pe);

    try {
        gst::Expr ast = gst::parse_expr(expression);
        gst::EvalResult res = gst::evaluate(ast, cfg);
        std::cout << (json ? res.json : res.text);
        if (json) std::cout << "\n";
        if (res.nonstabilizing) {
            std::cerr << "verdict: non-stabilizing within the configured caps\n";
            return 2;
        }
        return 0;
    } catch (const gst::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
