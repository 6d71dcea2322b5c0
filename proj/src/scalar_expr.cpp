#include "hybrid/scalar_expr.hpp"

#include <cctype>
#include <stdexcept>

#include "hybrid/error.hpp"

namespace hybrid {

ScalarExpr ScalarExpr::constant(Rational value) {
    return ScalarExpr(std::make_shared<const Node>(Node{Kind::Constant, std::move(value), {}, nullptr, nullptr}));
}

ScalarExpr ScalarExpr::parameter(std::string name) {
    return ScalarExpr(std::make_shared<const Node>(Node{Kind::Parameter, 0, std::move(name), nullptr, nullptr}));
}

ScalarExpr ScalarExpr::variable() {
    return ScalarExpr(std::make_shared<const Node>(Node{Kind::Variable, 0, "x", nullptr, nullptr}));
}

ScalarExpr ScalarExpr::unary(Kind kind, ScalarExpr operand) {
    return ScalarExpr(std::make_shared<const Node>(Node{kind, 0, {}, operand.node_, nullptr}));
}

ScalarExpr ScalarExpr::binary(Kind kind, ScalarExpr lhs, ScalarExpr rhs) {
    return ScalarExpr(std::make_shared<const Node>(Node{kind, 0, {}, lhs.node_, rhs.node_}));
}

Rational ScalarExpr::eval(const std::optional<Rational>& x, const Valuation& v) const {
    const Node& n = *node_;
    switch (n.kind) {
    case Kind::Constant:
        return n.value;
    case Kind::Parameter:
        return v.at(n.name);
    case Kind::Variable:
        if (!x)
            throw DimensionError("body uses x but the point is not one-dimensional");
        return *x;
    case Kind::Negate:
        return -ScalarExpr(n.lhs).eval(x, v);
    default:
        break;
    }
    Rational a = ScalarExpr(n.lhs).eval(x, v);
    Rational b = ScalarExpr(n.rhs).eval(x, v);
    switch (n.kind) {
    case Kind::Add:
        return a + b;
    case Kind::Subtract:
        return a - b;
    case Kind::Multiply:
        return a * b;
    default:
        if (b == 0)
            throw ArithmeticError("division by zero");
        return a / b;
    }
}

std::set<std::string> ScalarExpr::parameters() const {
    std::set<std::string> out;
    if (node_->kind == Kind::Parameter)
        out.insert(node_->name);
    for (const auto& child : {node_->lhs, node_->rhs})
        if (child)
            out.merge(ScalarExpr(child).parameters());
    return out;
}

bool ScalarExpr::uses_variable() const {
    if (node_->kind == Kind::Variable)
        return true;
    for (const auto& child : {node_->lhs, node_->rhs})
        if (child && ScalarExpr(child).uses_variable())
            return true;
    return false;
}

bool ScalarExpr::operator==(const ScalarExpr& other) const {
    const Node& a = *node_;
    const Node& b = *other.node_;
    if (a.kind != b.kind || a.value != b.value || a.name != b.name)
        return false;
    if (bool(a.lhs) != bool(b.lhs) || bool(a.rhs) != bool(b.rhs))
        return false;
    if (a.lhs && !(ScalarExpr(a.lhs) == ScalarExpr(b.lhs)))
        return false;
    return !a.rhs || ScalarExpr(a.rhs) == ScalarExpr(b.rhs);
}

namespace {

int precedence(ScalarExpr::Kind k) {
    switch (k) {
    case ScalarExpr::Kind::Add:
    case ScalarExpr::Kind::Subtract:
        return 1;
    case ScalarExpr::Kind::Multiply:
    case ScalarExpr::Kind::Divide:
        return 2;
    case ScalarExpr::Kind::Negate:
        return 3;
    default:
        return 4;
    }
}

class BodyParser {
  public:
    explicit BodyParser(std::string_view s) : s_(s) {}

    ScalarExpr parse() {
        ScalarExpr e = sum();
        skip();
        if (pos_ != s_.size())
            fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

  private:
    using Kind = ScalarExpr::Kind;

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }
    char peek() {
        skip();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    [[noreturn]] void fail(const std::string& what) {
        throw ParseError(1, pos_ + 1, what);
    }

    ScalarExpr sum() {
        ScalarExpr e = product();
        while (peek() == '+' || peek() == '-') {
            Kind k = s_[pos_++] == '+' ? Kind::Add : Kind::Subtract;
            e = ScalarExpr::binary(k, e, product());
        }
        return e;
    }

    ScalarExpr product() {
        ScalarExpr e = unary();
        while (peek() == '*' || peek() == '/') {
            Kind k = s_[pos_++] == '*' ? Kind::Multiply : Kind::Divide;
            e = ScalarExpr::binary(k, e, unary());
        }
        return e;
    }

    ScalarExpr unary() {
        if (peek() == '-') {
            ++pos_;
            ScalarExpr operand = unary();
            if (operand.kind() == Kind::Constant)
                return ScalarExpr::constant(-operand.eval(std::nullopt, Valuation{}));
            return ScalarExpr::unary(Kind::Negate, operand);
        }
        return atom();
    }

    ScalarExpr atom() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            ScalarExpr e = sum();
            if (peek() != ')')
                fail("expected ')'");
            ++pos_;
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t start = pos_;
            auto digits = [&] {
                while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
                    ++pos_;
            };
            digits();
            // `3/4` without spaces is a rational literal; `3 / 4` is a division.
            if (pos_ + 1 < s_.size() && s_[pos_] == '/' && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
                ++pos_;
                digits();
            }
            return ScalarExpr::constant(parse_rational(s_.substr(start, pos_ - start)));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            std::string name(s_.substr(start, pos_ - start));
            return name == "x" ? ScalarExpr::variable() : ScalarExpr::parameter(name);
        }
        fail(c ? "unexpected '" + std::string(1, c) + "'" : "unexpected end of input");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

} // namespace

ScalarExpr ScalarExpr::parse(std::string_view text) { return BodyParser(text).parse(); }

std::string to_string(const ScalarExpr& e) {
    using Kind = ScalarExpr::Kind;
    const auto& n = *e.node_;
    switch (n.kind) {
    case Kind::Constant:
        if (n.value < 0)
            return "(" + to_string(n.value) + ")";
        return to_string(n.value);
    case Kind::Parameter:
    case Kind::Variable:
        return n.name;
    case Kind::Negate: {
        ScalarExpr child(n.lhs);
        std::string inner = to_string(child);
        return precedence(child.kind()) < precedence(Kind::Negate) ? "-(" + inner + ")" : "-" + inner;
    }
    default:
        break;
    }
    ScalarExpr lhs(n.lhs), rhs(n.rhs);
    int p = precedence(n.kind);
    std::string l = to_string(lhs);
    std::string r = to_string(rhs);
    if (precedence(lhs.kind()) < p)
        l = "(" + l + ")";
    // Right operands of - and / need parentheses at equal precedence.
    bool tight = n.kind == Kind::Subtract || n.kind == Kind::Divide;
    if (precedence(rhs.kind()) < p || (tight && precedence(rhs.kind()) == p))
        r = "(" + r + ")";
    const char* op = n.kind == Kind::Add ? " + " : n.kind == Kind::Subtract ? " - " : n.kind == Kind::Multiply ? "*" : " / ";
    return l + op + r;
}

} // namespace hybrid
