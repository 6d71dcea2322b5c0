#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "hybrid/rational.hpp"
#include "hybrid/regions.hpp"

namespace hybrid {

/// Immutable arithmetic over rationals, parameters and the variable `x`.
class ScalarExpr {
  public:
    enum class Kind { Constant, Parameter, Variable, Negate, Add, Subtract, Multiply, Divide };

    static ScalarExpr constant(Rational value);
    static ScalarExpr parameter(std::string name);
    static ScalarExpr variable();
    static ScalarExpr unary(Kind kind, ScalarExpr operand);
    static ScalarExpr binary(Kind kind, ScalarExpr lhs, ScalarExpr rhs);

    /// Grammar: sum := product (('+'|'-') product)*, product := unary (('*'|'/') unary)*,
    /// unary := '-' unary | atom, atom := rational | identifier | '(' sum ')'.
    /// The identifier `x` is the variable; every other identifier is a parameter.
    static ScalarExpr parse(std::string_view text);

    Kind kind() const { return node_->kind; }

    /// Throws ValuationError for a missing parameter, DimensionError when `x`
    /// is needed but absent, ArithmeticError on division by zero.
    Rational eval(const std::optional<Rational>& x, const Valuation& v) const;

    std::set<std::string> parameters() const;
    bool uses_variable() const;

    bool operator==(const ScalarExpr& other) const;

    friend std::string to_string(const ScalarExpr& e);

  private:
    struct Node {
        Kind kind;
        Rational value;
        std::string name;
        std::shared_ptr<const Node> lhs, rhs;
    };
    explicit ScalarExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    std::shared_ptr<const Node> node_;
};

std::string to_string(const ScalarExpr& e);

} // namespace hybrid
