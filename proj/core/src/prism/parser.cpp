#include "parley/prism/parser.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <fmt/format.h>

#include "lexer.hpp"

namespace parley::prism {

SyntaxError::SyntaxError(int line, int col, std::string message, std::string file)
    : ModelError(file.empty() ? fmt::format("{}:{}: error: {}", line, col, message)
                              : fmt::format("{}:{}:{}: error: {}", file, line, col, message)),
      line_(line), col_(col), message_(std::move(message)), file_(std::move(file)) {}

UnsupportedConstruct::UnsupportedConstruct(std::string construct, int line, int col)
    : ModelError(fmt::format("{}:{}: error: unsupported construct '{}'", line, col, construct)),
      construct_(std::move(construct)), line_(line), col_(col) {}

namespace {

using detail::Tok;
using detail::Token;

const std::unordered_set<std::string> kUnsupportedModelTypes = {
    "mdp", "ctmc", "pta", "ma", "smg", "pomdp", "popta", "nondeterministic", "stochastic", "probabilistic"};

const std::unordered_set<std::string> kUnsupportedKeywords = {
    "formula", "global", "init", "endinit", "system", "endsystem", "player", "endplayer", "invariant", "observables"};

const std::unordered_set<std::string> kReserved = {
    "dtmc",  "const",  "int",     "double",     "bool",  "module", "endmodule", "init",   "rewards", "endrewards",
    "label", "true",   "false",   "min",        "max",   "formula", "global",   "system", "endsystem", "endinit"};

class Parser {
public:
    explicit Parser(std::string_view text) : tokens_(detail::tokenize(text)) {}

    Model parse_model() {
        Model model;
        const Token& head = peek();
        if (head.kind != Tok::Ident) fail(head, "expected model type 'dtmc'");
        if (kUnsupportedModelTypes.count(head.text)) throw UnsupportedConstruct(head.text, head.pos.line, head.pos.col);
        if (head.text != "dtmc") fail(head, fmt::format("expected model type 'dtmc', found '{}'", head.text));
        next();
        model.model_kind = "dtmc";

        while (peek().kind != Tok::End) {
            const Token& t = peek();
            if (t.kind != Tok::Ident) fail(t, fmt::format("unexpected {}", detail::describe(t.kind)));
            if (t.text == "const") {
                model.constants.push_back(parse_constant());
            } else if (t.text == "module") {
                model.modules.push_back(parse_module());
            } else if (t.text == "rewards") {
                model.rewards.push_back(parse_rewards());
            } else if (t.text == "label") {
                model.labels.push_back(parse_label());
            } else if (kUnsupportedKeywords.count(t.text) || kUnsupportedModelTypes.count(t.text)) {
                throw UnsupportedConstruct(t.text, t.pos.line, t.pos.col);
            } else {
                fail(t, fmt::format("unknown keyword '{}'", t.text));
            }
        }
        return model;
    }

    Expr parse_standalone_expression() {
        Expr e = parse_expr();
        if (peek().kind != Tok::End) fail(peek(), "trailing input after expression");
        return e;
    }

private:
    std::vector<Token> tokens_;
    std::size_t cur_ = 0;

    const Token& peek(std::size_t off = 0) const {
        std::size_t idx = cur_ + off;
        return idx < tokens_.size() ? tokens_[idx] : tokens_.back();
    }
    const Token& next() {
        const Token& t = tokens_[cur_];
        if (cur_ + 1 < tokens_.size()) ++cur_;
        return t;
    }
    [[noreturn]] static void fail(const Token& t, const std::string& msg) {
        throw SyntaxError(t.pos.line, t.pos.col, msg);
    }
    const Token& expect(Tok kind, const char* context) {
        const Token& t = peek();
        if (t.kind != kind) {
            fail(t, fmt::format("expected {} {}, found {}", detail::describe(kind), context,
                                t.kind == Tok::End ? "end of input" : "'" + t.text + "'"));
        }
        return next();
    }
    bool accept(Tok kind) {
        if (peek().kind == kind) {
            next();
            return true;
        }
        return false;
    }
    bool is_keyword(const char* word, std::size_t off = 0) const {
        const Token& t = peek(off);
        return t.kind == Tok::Ident && t.text == word;
    }
    void expect_keyword(const char* word) {
        if (!is_keyword(word)) fail(peek(), fmt::format("expected '{}'", word));
        next();
    }
    std::string expect_name(const char* context) {
        const Token& t = expect(Tok::Ident, context);
        if (kReserved.count(t.text)) fail(t, fmt::format("'{}' is a reserved word", t.text));
        return t.text;
    }

    ConstantDecl parse_constant() {
        ConstantDecl decl;
        decl.pos = next().pos;  // const
        const Token& kind = peek();
        if (is_keyword("int")) {
            decl.kind = ConstKind::Int;
        } else if (is_keyword("double")) {
            decl.kind = ConstKind::Double;
        } else if (is_keyword("bool")) {
            throw UnsupportedConstruct("const bool", kind.pos.line, kind.pos.col);
        } else {
            fail(kind, "expected 'int' or 'double' after 'const'");
        }
        next();
        decl.name = expect_name("for constant name");
        if (accept(Tok::Assign)) decl.value = parse_expr();
        expect(Tok::Semi, "after constant declaration");
        return decl;
    }

    ModuleDef parse_module() {
        ModuleDef mod;
        mod.pos = next().pos;  // module
        mod.name = expect_name("for module name");
        if (peek().kind == Tok::Assign) throw UnsupportedConstruct("module renaming", peek().pos.line, peek().pos.col);
        while (!is_keyword("endmodule")) {
            const Token& t = peek();
            if (t.kind == Tok::End) fail(t, fmt::format("missing 'endmodule' for module '{}'", mod.name));
            if (t.kind == Tok::LBracket) {
                mod.commands.push_back(parse_command());
            } else if (t.kind == Tok::Ident && peek(1).kind == Tok::Colon) {
                if (!mod.commands.empty()) fail(t, "variable declarations must precede commands");
                mod.variables.push_back(parse_variable());
            } else if (t.kind == Tok::Ident && kUnsupportedKeywords.count(t.text)) {
                throw UnsupportedConstruct(t.text, t.pos.line, t.pos.col);
            } else {
                fail(t, fmt::format("expected variable declaration or command, found '{}'", t.text));
            }
        }
        next();  // endmodule
        return mod;
    }

    VariableDecl parse_variable() {
        VariableDecl var;
        var.pos = peek().pos;
        var.name = expect_name("for variable name");
        expect(Tok::Colon, "after variable name");
        if (is_keyword("bool")) {
            next();
            var.kind = VarKind::Bool;
        } else {
            expect(Tok::LBracket, "for variable range");
            var.kind = VarKind::Int;
            var.low = parse_expr();
            expect(Tok::DotDot, "in variable range");
            var.high = parse_expr();
            expect(Tok::RBracket, "closing variable range");
        }
        if (is_keyword("init")) {
            next();
            var.init = parse_expr();
        }
        expect(Tok::Semi, "after variable declaration");
        return var;
    }

    Command parse_command() {
        Command cmd;
        cmd.pos = expect(Tok::LBracket, "opening action label").pos;
        if (peek().kind == Tok::Ident) cmd.action = expect_name("for action label");
        expect(Tok::RBracket, "closing action label");
        cmd.guard = parse_expr();
        expect(Tok::Arrow, "after guard");
        cmd.updates.push_back(parse_update());
        while (accept(Tok::Plus)) cmd.updates.push_back(parse_update());
        expect(Tok::Semi, "after command");
        return cmd;
    }

    bool at_assignment() const {
        return peek().kind == Tok::LParen && peek(1).kind == Tok::Ident && peek(2).kind == Tok::Prime;
    }

    bool at_true_update() const {
        return is_keyword("true") && (peek(1).kind == Tok::Semi || peek(1).kind == Tok::Plus);
    }

    Update parse_update() {
        Update up;
        if (!at_assignment() && !at_true_update()) {
            up.probability = parse_expr();
            expect(Tok::Colon, "after update probability");
        }
        if (is_keyword("true")) {
            next();
            return up;
        }
        up.assignments.push_back(parse_assignment());
        while (accept(Tok::And)) up.assignments.push_back(parse_assignment());
        return up;
    }

    Assignment parse_assignment() {
        Assignment a;
        a.pos = expect(Tok::LParen, "opening assignment").pos;
        a.variable = expect_name("for assigned variable");
        expect(Tok::Prime, "after assigned variable");
        expect(Tok::Assign, "in assignment");
        a.value = parse_expr();
        expect(Tok::RParen, "closing assignment");
        return a;
    }

    RewardStruct parse_rewards() {
        RewardStruct rs;
        rs.pos = next().pos;  // rewards
        if (peek().kind == Tok::String) rs.name = next().text;
        while (!is_keyword("endrewards")) {
            const Token& t = peek();
            if (t.kind == Tok::End) fail(t, "missing 'endrewards'");
            if (t.kind != Tok::LBracket) throw UnsupportedConstruct("state rewards", t.pos.line, t.pos.col);
            RewardItem item;
            item.pos = next().pos;
            if (peek().kind == Tok::Ident) item.action = expect_name("for reward action");
            expect(Tok::RBracket, "closing reward action");
            item.guard = parse_expr();
            expect(Tok::Colon, "after reward guard");
            item.value = parse_expr();
            expect(Tok::Semi, "after reward item");
            rs.items.push_back(std::move(item));
        }
        next();
        return rs;
    }

    LabelDef parse_label() {
        LabelDef label;
        label.pos = next().pos;  // label
        label.name = expect(Tok::String, "for label name").text;
        expect(Tok::Assign, "after label name");
        label.expr = parse_expr();
        expect(Tok::Semi, "after label");
        return label;
    }

    // Precedence, loosest first: | & ! relational +- */ unary-minus.
    Expr parse_expr() {
        if (peek().kind == Tok::Question) throw UnsupportedConstruct("conditional expression", peek().pos.line, peek().pos.col);
        Expr e = parse_or();
        if (peek().kind == Tok::Question) throw UnsupportedConstruct("conditional expression", peek().pos.line, peek().pos.col);
        return e;
    }

    Expr parse_or() {
        Expr lhs = parse_and();
        while (peek().kind == Tok::Or) {
            SourcePos pos = next().pos;
            lhs = Expr::binary(ExprKind::Or, std::move(lhs), parse_and(), pos);
        }
        return lhs;
    }

    Expr parse_and() {
        Expr lhs = parse_not();
        while (peek().kind == Tok::And) {
            SourcePos pos = next().pos;
            lhs = Expr::binary(ExprKind::And, std::move(lhs), parse_not(), pos);
        }
        return lhs;
    }

    Expr parse_not() {
        if (peek().kind == Tok::Not) {
            SourcePos pos = next().pos;
            return Expr::unary(ExprKind::Not, parse_not(), pos);
        }
        return parse_relational();
    }

    Expr parse_relational() {
        Expr lhs = parse_additive();
        ExprKind kind;
        switch (peek().kind) {
            case Tok::Assign: kind = ExprKind::Eq; break;
            case Tok::Ne: kind = ExprKind::Ne; break;
            case Tok::Lt: kind = ExprKind::Lt; break;
            case Tok::Le: kind = ExprKind::Le; break;
            case Tok::Gt: kind = ExprKind::Gt; break;
            case Tok::Ge: kind = ExprKind::Ge; break;
            default: return lhs;
        }
        SourcePos pos = next().pos;
        return Expr::binary(kind, std::move(lhs), parse_additive(), pos);
    }

    Expr parse_additive() {
        Expr lhs = parse_multiplicative();
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            // `p: (x'=1) + q: ...` separates updates; stop before an assignment.
            if (peek().kind == Tok::Plus && peek(1).kind == Tok::LParen && peek(2).kind == Tok::Ident &&
                peek(3).kind == Tok::Prime) {
                break;
            }
            const Token& op = next();
            ExprKind kind = op.kind == Tok::Plus ? ExprKind::Add : ExprKind::Sub;
            lhs = Expr::binary(kind, std::move(lhs), parse_multiplicative(), op.pos);
        }
        return lhs;
    }

    Expr parse_multiplicative() {
        Expr lhs = parse_unary();
        while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
            const Token& op = next();
            Expr rhs = parse_unary();
            if (op.kind == Tok::Slash) {
                bool zero = (rhs.kind == ExprKind::IntLit && rhs.int_value == 0) ||
                            (rhs.kind == ExprKind::DoubleLit && rhs.double_value == 0.0);
                if (zero) fail(op, "division by zero literal");
                lhs = Expr::binary(ExprKind::Div, std::move(lhs), std::move(rhs), op.pos);
            } else {
                lhs = Expr::binary(ExprKind::Mul, std::move(lhs), std::move(rhs), op.pos);
            }
        }
        return lhs;
    }

    Expr parse_unary() {
        if (peek().kind == Tok::Minus) {
            SourcePos pos = next().pos;
            Expr operand = parse_unary();
            // Negative literals are literals, so printing them round-trips.
            if (operand.kind == ExprKind::IntLit) return Expr::integer(-operand.int_value, pos);
            if (operand.kind == ExprKind::DoubleLit) return Expr::real(-operand.double_value, pos);
            return Expr::unary(ExprKind::Neg, std::move(operand), pos);
        }
        return parse_primary();
    }

    Expr parse_primary() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::Int: {
                next();
                std::int64_t v = 0;
                auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
                if (ec != std::errc{}) fail(t, "integer literal out of range");
                return Expr::integer(v, t.pos);
            }
            case Tok::Double: {
                next();
                return Expr::real(std::stod(t.text), t.pos);
            }
            case Tok::LParen: {
                next();
                Expr e = parse_expr();
                expect(Tok::RParen, "closing parenthesis");
                return e;
            }
            case Tok::Ident: {
                if (t.text == "true" || t.text == "false") {
                    next();
                    return Expr::boolean(t.text == "true", t.pos);
                }
                if ((t.text == "min" || t.text == "max") && peek(1).kind == Tok::LParen) {
                    next();
                    next();
                    std::vector<Expr> args;
                    args.push_back(parse_expr());
                    while (accept(Tok::Comma)) args.push_back(parse_expr());
                    expect(Tok::RParen, "closing function call");
                    if (args.size() < 2) fail(t, fmt::format("{} needs at least two arguments", t.text));
                    return Expr::call(t.text == "min" ? ExprKind::Min : ExprKind::Max, std::move(args), t.pos);
                }
                if (peek(1).kind == Tok::LParen) throw UnsupportedConstruct("function '" + t.text + "'", t.pos.line, t.pos.col);
                if (kReserved.count(t.text)) fail(t, fmt::format("unexpected keyword '{}'", t.text));
                next();
                return Expr::ident(t.text, t.pos);
            }
            case Tok::String:
                throw UnsupportedConstruct("label reference", t.pos.line, t.pos.col);
            default:
                fail(t, fmt::format("expected expression, found {}", t.kind == Tok::End ? "end of input" : "'" + t.text + "'"));
        }
    }
};

} // namespace

Model parse(std::string_view text) {
    Parser parser(text);
    return parser.parse_model();
}

Expr parse_expression(std::string_view text) {
    Parser parser(text);
    return parser.parse_standalone_expression();
}

Model parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError(fmt::format("{}: cannot open file", path));
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse(buf.str());
    } catch (const SyntaxError& e) {
        throw SyntaxError(e.line(), e.col(), e.message(), path);
    }
}

} // namespace parley::prism
