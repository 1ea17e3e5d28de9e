#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "jetinv/jet.hpp"

using namespace jetinv;

namespace {
Expr S(const std::string& name) { return Expr::from_symbol(name); }
Expr I(long v) { return Expr::from_int(v); }
}  // namespace

TEST_CASE("coordinate naming convention") {
    CHECK(fiber_name({0, 0}) == "z");
    CHECK(fiber_name({1, 0}) == "z_y");
    CHECK(fiber_name({0, 1}) == "z_u");
    CHECK(fiber_name({2, 1}) == "z_yyu");
    CHECK(fiber_name({1, 2}) == "z_yuu");

    CHECK(parse_fiber_name("z") == MultiIndex{0, 0});
    CHECK(parse_fiber_name("z_yyu") == MultiIndex{2, 1});
    CHECK_FALSE(parse_fiber_name("z_uy").has_value());  // letters must come y-first
    CHECK_FALSE(parse_fiber_name("z_q").has_value());
    CHECK_FALSE(parse_fiber_name("zy").has_value());
    CHECK_FALSE(parse_fiber_name("z_").has_value());
}

TEST_CASE("context enumerates the right chart") {
    for (int k = 0; k <= 5; ++k) {
        JetContext ctx(k);
        const int expected = (k + 2) * (k + 1) / 2;
        CHECK(static_cast<int>(ctx.fiber_coordinates().size()) == expected);
        CHECK(static_cast<int>(ctx.coordinates().size()) == expected + 2);
    }
    JetContext ctx(2);
    auto coords = ctx.fiber_coordinates();
    CHECK(coords == std::vector<std::string>{"z", "z_y", "z_u", "z_yy", "z_yu", "z_uu"});
}

TEST_CASE("total derivatives") {
    JetContext ctx(2, {"H"});
    Expr z = S("z"), zu = S("z_u"), h0 = S("H_0"), h1 = S("H_1");

    SECTION("coordinate shift") {
        CHECK(total_derivative(z, 'y', ctx) == S("z_y"));
    }
    SECTION("product rule across coordinates") {
        CHECK(total_derivative(z * zu, 'u', ctx) == zu.pow(2) + z * S("z_uu"));
    }
    SECTION("towers shift under the u-derivative only") {
        CHECK(total_derivative(h0 * zu, 'u', ctx) == h1 * zu + h0 * S("z_uu"));
        CHECK(total_derivative(h0 * zu, 'y', ctx) == h0 * S("z_yu"));
    }
    SECTION("tower depth is bounded") {
        JetContext shallow(2, {"H"}, 1);
        Expr e = S("H_1") * zu;
        CHECK_THROWS_AS(total_derivative(e, 'u', shallow), TowerExhausted);
    }
}

TEST_CASE("total derivatives commute") {
    JetContext ctx(4);
    std::mt19937_64 gen(52);
    const std::vector<std::string> names = {"z", "z_y", "z_u", "z_yu", "y", "u"};
    for (int trial = 0; trial < 25; ++trial) {
        Expr e = I(1);
        for (int i = 0; i < 4; ++i) {
            Expr s = S(names[gen() % names.size()]);
            e = (gen() % 2) ? e * s : e + s;
        }
        Expr yu = total_derivative(total_derivative(e, 'y', ctx), 'u', ctx);
        Expr uy = total_derivative(total_derivative(e, 'u', ctx), 'y', ctx);
        CHECK(yu == uy);
    }
}

TEST_CASE("total derivative raises the jet order by one") {
    JetContext ctx(3);
    Expr e = S("z_yu") * S("z") + S("z_uu");
    REQUIRE(jet_order(e) == 2);
    CHECK(jet_order(total_derivative(e, 'y', ctx)) == 3);
    CHECK(jet_order(total_derivative(e, 'u', ctx)) == 3);
}

TEST_CASE("chain consistency with restriction to a section") {
    // f = y^2 u, partials computed by hand
    Expr y = S("y"), u = S("u");
    std::map<std::string, Expr> restriction = {
        {"z", y.pow(2) * u},    {"z_y", I(2) * y * u}, {"z_u", y.pow(2)},
        {"z_yy", I(2) * u},     {"z_yu", I(2) * y},    {"z_uu", Expr()},
        {"z_yyy", Expr()},      {"z_yyu", I(2)},       {"z_yuu", Expr()},
        {"z_uuu", Expr()},
    };
    JetContext ctx(2);
    Expr e = S("z") * S("z_y") + S("z_u").pow(2);
    Expr lhs = total_derivative(e, 'y', ctx).substituted(restriction);
    Expr rhs = e.substituted(restriction).derivative("y");
    CHECK(lhs == rhs);
}

TEST_CASE("points assign every coordinate") {
    JetContext ctx(1);
    std::map<std::string, double> vals = {{"y", 1}, {"u", 2}, {"z", 3}, {"z_y", 4}, {"z_u", 5}};
    CHECK_NOTHROW(JetPoint(ctx, vals));
    vals.erase("z_u");
    CHECK_THROWS_AS(JetPoint(ctx, vals), UnassignedSymbol);
}

TEST_CASE("evaluation at points") {
    JetContext ctx(2);
    std::map<std::string, double> vals;
    for (const auto& name : ctx.coordinates()) vals[name] = 1.0;

    SECTION("direct value") {
        vals["z_yy"] = 3.0;
        JetPoint p(ctx, vals);
        CHECK(evaluate(S("z_yy") * S("z") / S("z_y").pow(2), p) == 3.0);
    }
    SECTION("singular hyperplane raises") {
        vals["z_u"] = 0.0;
        JetPoint p(ctx, vals);
        CHECK_THROWS_AS(evaluate(S("z") / S("z_u"), p), DivisionByZeroAtPoint);
    }
    SECTION("quotient evaluated exactly, converted last") {
        vals["z"] = 2.0;
        vals["z_y"] = 3.0;
        vals["z_u"] = 5.0;
        vals["z_yu"] = 7.0;
        JetPoint p(ctx, vals);
        Expr j22 = S("z_yu") * S("z") / (S("z_y") * S("z_u"));
        // 7*2/(3*5) = 14/15, checked exactly before the double conversion
        CHECK(j22.evaluate_exact(p.exact_values()) == rat(14, 15));
        CHECK(evaluate(j22, p) == Catch::Approx(14.0 / 15.0).epsilon(1e-15));
    }
}

TEST_CASE("tower helpers") {
    JetContext ctx(2, {"H", "alpha"});
    CHECK(ctx.tower_member("H_2") == std::make_pair(std::string("H"), 2));
    CHECK(ctx.tower_member("alpha_0") == std::make_pair(std::string("alpha"), 0));
    CHECK_FALSE(ctx.tower_member("beta_1").has_value());
    CHECK_FALSE(ctx.tower_member("H_x").has_value());
    CHECK(ctx.classify("z_yu") == SymbolKind::fiber);
    CHECK(ctx.classify("y") == SymbolKind::base);
    CHECK(ctx.classify("H_0") == SymbolKind::tower);
    CHECK(ctx.classify("lambda") == SymbolKind::constant);
}
