#pragma once

// Abstract syntax for the PRISM-language subset used to describe
// discrete-time Markov chains: constants, modules with bounded integer and
// boolean variables, guarded probabilistic commands (optionally
// synchronised by an action label), action rewards and labels.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace parley::prism {

/// 1-based source location. Positions never take part in structural
/// equality, so two ASTs compare equal regardless of where they came from.
struct SourcePos {
    int line = 0;
    int col = 0;

    friend constexpr bool operator==(const SourcePos&, const SourcePos&) noexcept { return true; }
};

enum class ExprKind {
    IntLit,
    DoubleLit,
    BoolLit,
    Ident,
    Not,
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    And,
    Or,
    Min,
    Max,
};

struct Expr {
    ExprKind kind = ExprKind::BoolLit;
    std::int64_t int_value = 0;
    double double_value = 0.0;
    bool bool_value = false;
    std::string name;        // Ident
    std::vector<Expr> args;  // operands; Min/Max take two or more
    SourcePos pos;

    bool operator==(const Expr&) const = default;

    static Expr integer(std::int64_t v, SourcePos pos = {});
    static Expr real(double v, SourcePos pos = {});
    static Expr boolean(bool v, SourcePos pos = {});
    static Expr ident(std::string name, SourcePos pos = {});
    static Expr unary(ExprKind kind, Expr operand, SourcePos pos = {});
    static Expr binary(ExprKind kind, Expr lhs, Expr rhs, SourcePos pos = {});
    static Expr call(ExprKind kind, std::vector<Expr> args, SourcePos pos = {});

    [[nodiscard]] bool is_literal() const noexcept {
        return kind == ExprKind::IntLit || kind == ExprKind::DoubleLit || kind == ExprKind::BoolLit;
    }
};

// Convenience builders used by the model emitters.
Expr operator&&(Expr lhs, Expr rhs);
Expr operator||(Expr lhs, Expr rhs);
Expr operator!(Expr operand);
Expr eq(Expr lhs, Expr rhs);

enum class ConstKind { Int, Double };

struct ConstantDecl {
    std::string name;
    ConstKind kind = ConstKind::Int;
    std::optional<Expr> value;  // unset: a parameter
    SourcePos pos;

    bool operator==(const ConstantDecl&) const = default;
};

enum class VarKind { Int, Bool };

struct VariableDecl {
    std::string name;
    VarKind kind = VarKind::Int;
    std::optional<Expr> low;  // Int only
    std::optional<Expr> high;
    std::optional<Expr> init;  // unset: low bound / false
    SourcePos pos;

    bool operator==(const VariableDecl&) const = default;
};

struct Assignment {
    std::string variable;
    Expr value;
    SourcePos pos;

    bool operator==(const Assignment&) const = default;
};

struct Update {
    std::optional<Expr> probability;  // unset: 1
    std::vector<Assignment> assignments;  // empty: `true`

    bool operator==(const Update&) const = default;
};

struct Command {
    std::string action;  // empty: unsynchronised
    Expr guard;
    std::vector<Update> updates;
    SourcePos pos;

    bool operator==(const Command&) const = default;
};

struct ModuleDef {
    std::string name;
    std::vector<VariableDecl> variables;
    std::vector<Command> commands;
    SourcePos pos;

    bool operator==(const ModuleDef&) const = default;
};

struct RewardItem {
    std::string action;
    Expr guard;
    Expr value;
    SourcePos pos;

    bool operator==(const RewardItem&) const = default;
};

struct RewardStruct {
    std::string name;
    std::vector<RewardItem> items;
    SourcePos pos;

    bool operator==(const RewardStruct&) const = default;
};

struct LabelDef {
    std::string name;
    Expr expr;
    SourcePos pos;

    bool operator==(const LabelDef&) const = default;
};

struct Model {
    std::string model_kind = "dtmc";
    std::vector<ConstantDecl> constants;
    std::vector<ModuleDef> modules;
    std::vector<LabelDef> labels;
    std::vector<RewardStruct> rewards;

    bool operator==(const Model&) const = default;

    [[nodiscard]] const ConstantDecl* find_constant(std::string_view name) const;
    [[nodiscard]] ConstantDecl* find_constant(std::string_view name);
    [[nodiscard]] const ModuleDef* find_module(std::string_view name) const;
    /// Module index and variable declaration, or nullptr.
    [[nodiscard]] const VariableDecl* find_variable(std::string_view name, int* module_index = nullptr) const;
    /// Unbound constants in declaration order.
    [[nodiscard]] std::vector<std::string> unbound_constants() const;
    /// Every distinct non-empty action label, in first-use order.
    [[nodiscard]] std::vector<std::string> action_labels() const;
};

} // namespace parley::prism
