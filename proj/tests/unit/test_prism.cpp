#include <doctest.h>

#include <random>

#include "parley/mc/build.hpp"
#include "parley/prism/constants.hpp"
#include "parley/prism/parser.hpp"
#include "parley/prism/printer.hpp"
#include "parley/prism/typecheck.hpp"
#include "../support/corpus.hpp"

using namespace parley;
using namespace parley::prism;

namespace {

const char* kMinimal = "dtmc module M x:[0..1] init 0; [a] x=0 -> 1.0:(x'=1); endmodule";

Model robot() { return parse_file(testing::corpus_dir() + "/robot_small.prism"); }

bool has_message(const std::vector<Diagnostic>& ds, const std::string& needle) {
    for (const auto& d : ds) {
        if (d.message.find(needle) != std::string::npos) return true;
    }
    return false;
}

} // namespace

TEST_CASE("parse minimal model") {
    Model m = parse(kMinimal);
    REQUIRE(m.modules.size() == 1);
    CHECK(m.modules[0].variables.size() == 1);
    CHECK(m.modules[0].commands.size() == 1);
    CHECK(m.modules[0].commands[0].action == "a");
    CHECK(m.modules[0].commands[0].updates[0].probability == Expr::real(1.0));
}

TEST_CASE("parse robot layout") {
    Model m = robot();
    REQUIRE(m.modules.size() == 3);
    CHECK(m.modules[0].name == "Robot");
    CHECK(m.modules[1].name == "Adaptation_MAPE_Controller");
    CHECK(m.modules[2].name == "Knowledge");
    REQUIRE(m.rewards.size() == 1);
    CHECK(m.rewards[0].name == "cost");
    CHECK(m.modules[0].commands[0].updates.size() == 4);
    CHECK(m.modules[1].commands[0].updates[0].assignments.empty());
}

TEST_CASE("unsupported constructs") {
    try {
        parse("mdp module M x:[0..1] init 0; endmodule");
        FAIL("expected UnsupportedConstruct");
    } catch (const UnsupportedConstruct& e) {
        CHECK(e.construct() == "mdp");
    }
    CHECK_THROWS_AS(parse("ctmc module M x:[0..1]; endmodule"), UnsupportedConstruct);
    CHECK_THROWS_AS(parse("dtmc formula f = 1; module M x:[0..1]; endmodule"), UnsupportedConstruct);
    CHECK_THROWS_AS(parse("dtmc module M x:[0..1]; endmodule rewards \"r\" true : 1; endrewards"), UnsupportedConstruct);
    CHECK_THROWS_AS(parse("dtmc module M x:[0..1]; endmodule module N = M [x=y] endmodule"), UnsupportedConstruct);
}

TEST_CASE("syntax errors carry positions") {
    try {
        parse("dtmc\nmodule M\n  x : [0..1] init 0;\n  [a] x=0 -> (x'=1)\nendmodule");
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.line() == 5);
        CHECK(e.col() == 1);
    }
    CHECK_THROWS_AS(parse("dtmc module M x:[0..1]; [a] x=0 -> (x'=x/0); endmodule"), SyntaxError);
    CHECK_THROWS_AS(parse("dtmc module M x:[0..1]; [a] x=0 -> (x'=1) endmodule"), SyntaxError);
    CHECK_THROWS_AS(parse("dtmc bogus"), SyntaxError);
    CHECK_THROWS_AS(parse("dtmc module M x:[0..1]; [a] x=0 -> (x'=1); endmodule @"), SyntaxError);
}

TEST_CASE("comments are ignored") {
    Model a = parse("dtmc // c\nmodule M // d\n x:[0..1] init 0; // e\n [a] x=0 -> (x'=1);\nendmodule\n");
    Model b = parse("dtmc module M x:[0..1] init 0; [a] x=0 -> (x'=1); endmodule");
    CHECK(a == b);
}

TEST_CASE("round trip on the corpus") {
    auto files = testing::corpus_files();
    REQUIRE(files.size() >= 5);
    for (const auto& f : files) {
        CAPTURE(f.string());
        Model m = parse(testing::read_file(f));
        std::string printed = print(m);
        Model again = parse(printed);
        CHECK(again == m);
        CHECK(print(again) == printed);
    }
}

TEST_CASE("printer output") {
    std::string out = print(robot());
    CHECK(out.find("\nrewards \"cost\"\n") != std::string::npos);
    Model m = parse("dtmc const int decision_0_0; module M x:[0..3] init decision_0_0; endmodule");
    CHECK(print(m).find("const int decision_0_0;\n") != std::string::npos);
    CHECK(print(parse_expression("(a+b)*c")) == "(a+b)*c");
    CHECK(print(parse_expression("a-(b-c)")) == "a-(b-c)");
    CHECK(print(parse_expression("!(a & b) | c")) == "!(a & b) | c");
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1.0");
}

TEST_CASE("expression precedence") {
    CHECK(parse_expression("1+2*3") == Expr::binary(ExprKind::Add, Expr::integer(1),
                                                    Expr::binary(ExprKind::Mul, Expr::integer(2), Expr::integer(3))));
    CHECK(parse_expression("a | b & c") ==
          Expr::binary(ExprKind::Or, Expr::ident("a"), Expr::binary(ExprKind::And, Expr::ident("b"), Expr::ident("c"))));
    CHECK(parse_expression("-3") == Expr::integer(-3));
    CHECK(parse_expression("min(1, 2, 3)").args.size() == 3);
}

namespace {

Expr random_expr(std::mt19937_64& rng, int depth, bool boolean) {
    std::uniform_int_distribution<int> pick(0, 9);
    if (depth == 0) {
        if (boolean) {
            switch (pick(rng) % 3) {
                case 0: return Expr::boolean(pick(rng) % 2 == 0);
                case 1: return Expr::ident("b");
                default: return Expr::binary(ExprKind::Le, Expr::ident("x"), Expr::integer(pick(rng) - 4));
            }
        }
        switch (pick(rng) % 4) {
            case 0: return Expr::integer(pick(rng) - 4);
            case 1: return Expr::real(std::uniform_real_distribution<double>(-5, 5)(rng));
            case 2: return Expr::ident("x");
            default: return Expr::ident("y");
        }
    }
    if (boolean) {
        static const ExprKind rel[] = {ExprKind::Lt, ExprKind::Le, ExprKind::Gt, ExprKind::Ge, ExprKind::Eq, ExprKind::Ne};
        switch (pick(rng) % 4) {
            case 0: return Expr::unary(ExprKind::Not, random_expr(rng, depth - 1, true));
            case 1: return Expr::binary(ExprKind::And, random_expr(rng, depth - 1, true), random_expr(rng, depth - 1, true));
            case 2: return Expr::binary(ExprKind::Or, random_expr(rng, depth - 1, true), random_expr(rng, depth - 1, true));
            default: return Expr::binary(rel[pick(rng) % 6], random_expr(rng, depth - 1, false), random_expr(rng, depth - 1, false));
        }
    }
    static const ExprKind arith[] = {ExprKind::Add, ExprKind::Sub, ExprKind::Mul, ExprKind::Div};
    int k = pick(rng);
    if (k == 0) {
        Expr inner = random_expr(rng, depth - 1, false);
        if (inner.is_literal()) return inner;
        return Expr::unary(ExprKind::Neg, std::move(inner));
    }
    if (k == 1) {
        return Expr::call(pick(rng) % 2 ? ExprKind::Min : ExprKind::Max,
                          {random_expr(rng, depth - 1, false), random_expr(rng, depth - 1, false)});
    }
    Expr rhs = random_expr(rng, depth - 1, false);
    ExprKind op = arith[pick(rng) % 4];
    if (op == ExprKind::Div && rhs.is_literal()) op = ExprKind::Mul;
    return Expr::binary(op, random_expr(rng, depth - 1, false), std::move(rhs));
}

} // namespace

TEST_CASE("property: printed expressions reparse to the same tree") {
    std::mt19937_64 rng(12345);
    for (int i = 0; i < 2000; ++i) {
        Expr e = random_expr(rng, 1 + i % 5, i % 2 == 0);
        std::string text = print(e);
        CAPTURE(text);
        CHECK(parse_expression(text) == e);
    }
}

TEST_CASE("typecheck") {
    CHECK(typecheck(parse(kMinimal)).empty());
    CHECK(typecheck(robot()).empty());

    auto range = typecheck(parse("dtmc module M x:[0..1] init 0; [a] x=0 -> (x'=2); endmodule"));
    REQUIRE(range.size() == 1);
    CHECK(has_message(range, "outside range"));

    auto clash = typecheck(parse("dtmc module M x:[0..1]; endmodule module N x:[0..1]; endmodule"));
    CHECK(has_message(clash, "clashes"));

    CHECK(has_message(typecheck(parse("dtmc module M x:[0..1]; [a] y=0 -> (x'=1); endmodule")), "unknown identifier"));
    CHECK(has_message(typecheck(parse("dtmc module M x:[0..1]; [a] x -> (x'=1); endmodule")), "guard must be bool"));
    CHECK(has_message(typecheck(parse("dtmc module M x:[0..1]; b:bool; [a] true -> (b'=1); endmodule")), "assigned a int"));
    CHECK(has_message(typecheck(parse("dtmc module M x:[0..1]; endmodule module N [a] true -> (x'=1); endmodule")),
                      "cannot be assigned here"));
    CHECK(has_message(typecheck(parse("dtmc module M x:[0..1] init 3; endmodule")), "initial value"));
    CHECK(has_message(typecheck(parse("dtmc module M x:[2..1]; endmodule")), "empty range"));
    CHECK(has_message(typecheck(parse("dtmc const double d; module M x:[0..1]; endmodule")), "must be of kind int"));
    CHECK(has_message(typecheck(parse("dtmc module M x:[0..1]; [a] true -> 0.5:(x'=1) + 0.6:(x'=0); endmodule")),
                      "sum to"));
    CHECK(has_message(typecheck(parse("dtmc module M x:[0..1]; [a] true -> (x'=1) + 0.5:(x'=0); endmodule")),
                      "probability missing"));
    CHECK(has_message(typecheck(parse("dtmc module M x:[0..1]; [a] true -> (x'=1); endmodule rewards \"r\" [a] true : -1; endrewards")),
                      "negative"));
    CHECK(has_message(typecheck(parse("dtmc")), "no modules"));
}

TEST_CASE("typecheck output is ordered by position") {
    const char* src =
        "dtmc\n"
        "module M\n"
        "  x : [0..1] init 5;\n"
        "  [a] q=0 -> (x'=7);\n"
        "endmodule\n";
    auto ds = typecheck(parse(src));
    REQUIRE(ds.size() >= 3);
    for (std::size_t i = 1; i < ds.size(); ++i) {
        CHECK(std::make_pair(ds[i - 1].line, ds[i - 1].col) <= std::make_pair(ds[i].line, ds[i].col));
    }
    CHECK(typecheck(parse(src)) == ds);
    CHECK(format_diagnostic(ds[0], "m.prism").rfind("m.prism:3:", 0) == 0);
}

TEST_CASE("bind_constants") {
    Model m = robot();
    CHECK(bind_constants(m, {}) == m);
    Model bound = bind_constants(m, {{"c", 2}});
    CHECK(bound.find_constant("c")->value == Expr::integer(2));
    CHECK_NOTHROW(mc::build(bound));
    CHECK_THROWS_AS(bind_constants(m, {{"nope", 1}}), UnknownConstant);
    CHECK_THROWS_AS(bind_constants(m, {{"c", 2.5}}), KindMismatch);

    Model param = parse_file(testing::corpus_dir() + "/sync_urc.prism");
    REQUIRE(param.unbound_constants().size() == 2);
    Model one = bind_constants(param, {{"decision_0", 2}});
    CHECK(one.unbound_constants() == std::vector<std::string>{"decision_1"});
}

TEST_CASE("constant evaluation") {
    Model m = parse("dtmc const int a = b + 1; const int b = 2; const double h = a / 4; const int k; "
                    "module M x:[0..a]; endmodule");
    auto v = evaluate_constants(m);
    CHECK(v.at("a") == 3);
    CHECK(v.at("h") == doctest::Approx(0.75));
    CHECK(v.count("k") == 0);
}
