#include "hybrid/workspace.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <sstream>

#include "hybrid/calculus.hpp"
#include "hybrid/error.hpp"

namespace hybrid {

std::vector<Point> SampleSpec::expand() const {
    std::vector<Point> out;
    switch (kind) {
    case Kind::Grid:
        for (std::int64_t i = 0; i < count; ++i)
            out.push_back(Point{Rational(lo + (hi - lo) * i / count)});
        break;
    case Kind::Cells:
        for (std::int64_t i = row_lo; i <= row_hi; ++i)
            for (std::int64_t j = col_lo; j <= col_hi; ++j)
                out.push_back(Point{Rational(i), Rational(j)});
        break;
    case Kind::List:
        out = points;
        break;
    }
    return out;
}

std::string to_string(const SampleSpec& s) {
    switch (s.kind) {
    case SampleSpec::Kind::Grid:
        return "grid(" + to_string(s.lo) + ", " + to_string(s.hi) + ", " + std::to_string(s.count) + ")";
    case SampleSpec::Kind::Cells:
        return "cells(" + std::to_string(s.row_lo) + ".." + std::to_string(s.row_hi) + ", " + std::to_string(s.col_lo) +
               ".." + std::to_string(s.col_hi) + ")";
    case SampleSpec::Kind::List:
        break;
    }
    std::string out = "{";
    for (std::size_t i = 0; i < s.points.size(); ++i)
        out += (i ? ", " : "") + to_string(s.points[i]);
    return out + "}";
}

namespace {

template <class Map>
const typename Map::mapped_type& lookup(const Map& m, const std::string& name, const char* kind) {
    auto it = m.find(name);
    if (it == m.end())
        throw Error(std::string("no ") + kind + " named '" + name + "'");
    return it->second;
}

} // namespace

bool Workspace::has_param(const std::string& name) const {
    return std::find(params.begin(), params.end(), name) != params.end();
}

const RegionAtom& Workspace::region(const std::string& n) const { return lookup(regions, n, "region"); }
const FunctionAtom& Workspace::function(const std::string& n) const { return lookup(functions, n, "function"); }
const GeneralisedPartition& Workspace::partition(const std::string& n) const {
    return lookup(partitions, n, "partition");
}
const HybridExpr& Workspace::expr(const std::string& n) const { return lookup(exprs, n, "expression"); }
const Valuation& Workspace::valuation(const std::string& n) const { return lookup(valuations, n, "valuation"); }
const SampleSpec& Workspace::sample(const std::string& n) const { return lookup(samples, n, "sample"); }
const SymbolicBlockMatrix& Workspace::matrix(const std::string& n) const { return lookup(matrices, n, "matrix"); }
const SymbolicSpline& Workspace::spline(const std::string& n) const { return lookup(splines, n, "spline"); }

SymbolicHybridSet Workspace::set(const std::string& n) const {
    if (auto it = regions.find(n); it != regions.end())
        return SymbolicHybridSet(it->second);
    return lookup(sets, n, "region or set");
}

namespace {

struct Token {
    enum class Kind { Ident, Number, Punct, End };
    Kind kind;
    std::string text;
    std::size_t col;
    bool glued; // no whitespace before
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

class Line {
  public:
    Line(std::string_view text, std::size_t lineno, const Workspace& ws) : text_(text), line_(lineno), ws_(ws) {
        tokenize();
    }

    [[noreturn]] void fail(const std::string& what, std::size_t col) const { throw ParseError(line_, col, what); }
    [[noreturn]] void fail(const std::string& what) const { fail(what, cur().col); }

    const Token& cur() const { return toks_[pos_]; }
    const Token& next_tok() const { return toks_[std::min(pos_ + 1, toks_.size() - 1)]; }
    bool at_end() const { return cur().kind == Token::Kind::End; }
    std::size_t line() const { return line_; }
    const std::string_view text() const { return text_; }

    bool is(std::string_view p) const { return cur().kind == Token::Kind::Punct && cur().text == p; }
    bool is_word(std::string_view w) const { return cur().kind == Token::Kind::Ident && cur().text == w; }

    bool accept(std::string_view p) {
        if (!is(p))
            return false;
        ++pos_;
        return true;
    }
    void expect(std::string_view p) {
        if (!accept(p))
            fail("expected '" + std::string(p) + "'" + found());
    }
    bool accept_word(std::string_view w) {
        if (!is_word(w))
            return false;
        ++pos_;
        return true;
    }
    void expect_word(std::string_view w) {
        if (!accept_word(w))
            fail("expected '" + std::string(w) + "'" + found());
    }
    std::string ident() {
        if (cur().kind != Token::Kind::Ident)
            fail("expected a name" + found());
        return toks_[pos_++].text;
    }
    void expect_end() {
        if (!at_end())
            fail("unexpected '" + cur().text + "'");
    }
    std::string found() const { return at_end() ? " at end of line" : ", found '" + cur().text + "'"; }

    // `-3/2`, `0.25`
    Rational rational() {
        bool neg = accept("-");
        if (cur().kind != Token::Kind::Number)
            fail("expected a number" + found());
        Rational r = parse_rational(toks_[pos_++].text);
        return neg ? Rational(-r) : r;
    }

    std::int64_t integer() {
        std::size_t col = cur().col;
        Rational r = rational();
        if (!is_integer(r))
            fail("expected an integer", col);
        return static_cast<std::int64_t>(numerator(r));
    }

    // param ± constants, or a constant
    ParamExpr param_expr() {
        std::optional<std::string> param;
        Rational offset = 0;
        bool first = true;
        while (true) {
            int sign = 1;
            if (accept("-"))
                sign = -1;
            else if (!first && !accept("+"))
                break;
            else if (first)
                accept("+");
            std::size_t col = cur().col;
            if (cur().kind == Token::Kind::Ident) {
                std::string name = ident();
                if (param || sign < 0)
                    fail("an endpoint is one parameter plus a constant", col);
                if (!ws_.has_param(name))
                    fail("unresolved name '" + name + "'", col);
                param = name;
            } else if (cur().kind == Token::Kind::Number) {
                offset += sign * parse_rational(toks_[pos_++].text);
            } else {
                fail("expected a parameter or number" + found());
            }
            first = false;
        }
        return param ? ParamExpr(*param, offset) : ParamExpr(offset);
    }

    Point point() {
        Point p;
        if (accept("(")) {
            p.push_back(rational());
            while (accept(","))
                p.push_back(rational());
            expect(")");
        } else {
            p.push_back(rational());
        }
        return p;
    }

    // [c*]NAME {± [c*]NAME} or 0
    SymbolicHybridSet lincomb() {
        SymbolicHybridSet out;
        if (cur().kind == Token::Kind::Number && cur().text == "0" && !next_is_star()) {
            ++pos_;
            return out;
        }
        bool first = true;
        while (true) {
            std::int64_t sign = 1;
            if (accept("-"))
                sign = -1;
            else if (!first && !accept("+"))
                break;
            std::int64_t coeff = 1;
            if (cur().kind == Token::Kind::Number) {
                coeff = integer();
                expect("*");
            }
            std::size_t col = cur().col;
            std::string name = ident();
            SymbolicHybridSet term;
            try {
                term = ws_.set(name);
            } catch (const Error&) {
                fail("unresolved name '" + name + "'", col);
            }
            try {
                out += (sign * coeff) * term;
            } catch (const Error& e) {
                fail(e.what(), col);
            }
            first = false;
        }
        return out;
    }

    FunctionAtom function_ref() {
        std::size_t col = cur().col;
        std::string name = ident();
        // segment atoms are named like S{a,c}
        if (is("{") && cur().glued) {
            name += "{";
            ++pos_;
            while (!is("}")) {
                if (at_end())
                    fail("unterminated '{'");
                name += toks_[pos_++].text;
            }
            ++pos_;
            name += "}";
        }
        auto it = ws_.functions.find(name);
        if (it == ws_.functions.end())
            fail("unresolved name '" + name + "'", col);
        return it->second;
    }

    FreeWord word() {
        FreeWord w;
        auto one = [&] {
            FunctionAtom f = function_ref();
            std::int64_t e = 1;
            if (accept("^"))
                e = integer();
            w.add(f, e);
        };
        if (accept("[")) {
            one();
            while (accept(","))
                one();
            expect("]");
        } else {
            one();
        }
        return w;
    }

    StarOp star() {
        std::string name;
        std::size_t col = cur().col;
        if (cur().kind == Token::Kind::Punct || cur().kind == Token::Kind::Ident)
            name = toks_[pos_++].text;
        auto s = StarOp::builtin(name);
        if (!s)
            fail("unknown star operation '" + name + "'", col);
        return *s;
    }

    std::size_t pos() const { return pos_; }

  private:
    bool next_is_star() const { return next_tok().kind == Token::Kind::Punct && next_tok().text == "*"; }

    void tokenize() {
        std::size_t i = 0;
        while (true) {
            std::size_t start = i;
            while (i < text_.size() && std::isspace(static_cast<unsigned char>(text_[i])))
                ++i;
            bool glued = i == start;
            if (i >= text_.size() || text_[i] == '#') {
                toks_.push_back({Token::Kind::End, "", i + 1, glued});
                return;
            }
            char c = text_[i];
            std::size_t b = i;
            if (ident_start(c)) {
                while (i < text_.size() && ident_char(text_[i]))
                    ++i;
                toks_.push_back({Token::Kind::Ident, std::string(text_.substr(b, i - b)), b + 1, glued});
            } else if (digit(c)) {
                while (i < text_.size() && digit(text_[i]))
                    ++i;
                if (i + 1 < text_.size() && (text_[i] == '/' || text_[i] == '.') && digit(text_[i + 1])) {
                    ++i;
                    while (i < text_.size() && digit(text_[i]))
                        ++i;
                }
                toks_.push_back({Token::Kind::Number, std::string(text_.substr(b, i - b)), b + 1, glued});
            } else if (c == '.' && i + 1 < text_.size() && text_[i + 1] == '.') {
                i += 2;
                toks_.push_back({Token::Kind::Punct, "..", b + 1, glued});
            } else if (std::string_view("=,()[]{};^+-*/<>|").find(c) != std::string_view::npos) {
                ++i;
                toks_.push_back({Token::Kind::Punct, std::string(1, c), b + 1, glued});
            } else {
                fail("unexpected character '" + std::string(1, c) + "'", b + 1);
            }
        }
    }

    std::string_view text_;
    std::size_t line_;
    const Workspace& ws_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

class Parser {
  public:
    Workspace ws;

    void statement(Line& l) {
        if (l.at_end())
            return;
        std::size_t col = l.cur().col;
        std::string kw = l.ident();
        try {
            if (kw == "param")
                param(l);
            else if (kw == "region")
                region(l);
            else if (kw == "fn")
                function(l);
            else if (kw == "set")
                set(l);
            else if (kw == "partition")
                partition(l);
            else if (kw == "expr")
                expr(l);
            else if (kw == "valuation")
                valuation(l);
            else if (kw == "sample")
                sample(l);
            else if (kw == "matrix")
                matrix(l);
            else if (kw == "spline")
                spline(l);
            else
                l.fail("unknown declaration '" + kw + "'", col);
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            l.fail(e.what(), col);
        }
    }

  private:
    using Kind = Workspace::Kind;

    template <class Map>
    std::string fresh(Line& l, const Map& m, const char* kind) {
        std::size_t col = l.cur().col;
        std::string name = l.ident();
        if (m.count(name))
            l.fail(std::string("duplicate ") + kind + " '" + name + "'", col);
        return name;
    }

    void param(Line& l) {
        do {
            std::size_t col = l.cur().col;
            std::string name = l.ident();
            if (ws.has_param(name))
                l.fail("duplicate parameter '" + name + "'", col);
            ws.params.push_back(name);
            ws.order.emplace_back(Kind::Param, name);
        } while (!l.at_end());
    }

    Shape shape(Line& l) {
        if (l.accept_word("interval")) {
            Interval1D i;
            if (l.accept("["))
                i.lo_closed = true;
            else if (l.accept("("))
                i.lo_closed = false;
            else
                l.fail("expected '[' or '('" + l.found());
            i.lo = l.param_expr();
            l.expect(",");
            i.hi = l.param_expr();
            if (l.accept("]"))
                i.hi_closed = true;
            else if (l.accept(")"))
                i.hi_closed = false;
            else
                l.fail("expected ']' or ')'" + l.found());
            return i;
        }
        if (l.accept_word("rect")) {
            GridRect g;
            l.expect("(");
            g.row_lo = l.param_expr();
            l.expect("..");
            g.row_hi = l.param_expr();
            l.expect(",");
            g.col_lo = l.param_expr();
            l.expect("..");
            g.col_hi = l.param_expr();
            l.expect(")");
            return g;
        }
        if (l.accept_word("universe"))
            return UniverseShape{};
        if (l.accept_word("points")) {
            FinitePointSet f;
            l.expect("{");
            if (!l.accept("}")) {
                do
                    f.points.push_back(l.point());
                while (l.accept(","));
                l.expect("}");
            }
            return f;
        }
        l.fail("expected interval, rect, universe or points" + l.found());
    }

    void region(Line& l) {
        std::string name = fresh(l, ws.regions, "region");
        if (ws.sets.count(name))
            l.fail("'" + name + "' is already a set");
        l.expect("=");
        Shape s = shape(l);
        l.expect_end();
        ws.regions.emplace(name, RegionAtom{name, std::move(s)});
        ws.order.emplace_back(Kind::Region, name);
    }

    void function(Line& l) {
        std::string name = fresh(l, ws.functions, "function");
        if (l.accept_word("opaque")) {
            l.expect_end();
            ws.functions.emplace(name, FunctionAtom::opaque(name));
        } else {
            if (l.accept("(")) {
                l.expect_word("x");
                l.expect(")");
            }
            if (!l.is("="))
                l.fail("expected '=' or 'opaque'" + l.found());
            std::size_t col = l.cur().col;
            std::string_view body = l.text().substr(col);
            if (auto hash = body.find('#'); hash != std::string_view::npos)
                body = body.substr(0, hash);
            FunctionAtom f;
            f.name = name;
            try {
                f.body = ScalarExpr::parse(body);
            } catch (const ParseError& e) {
                std::string msg = e.what();
                l.fail(msg.substr(msg.find(' ') + 1), col + e.column());
            }
            for (const auto& p : f.body->parameters())
                if (!ws.has_param(p))
                    l.fail("unresolved name '" + p + "'", col + 1 + body.find(p));
            ws.functions.emplace(name, std::move(f));
        }
        ws.order.emplace_back(Kind::Function, name);
    }

    void set(Line& l) {
        std::string name = fresh(l, ws.sets, "set");
        if (ws.regions.count(name))
            l.fail("'" + name + "' is already a region");
        l.expect("=");
        SymbolicHybridSet s = l.lincomb();
        l.expect_end();
        ws.sets.emplace(name, std::move(s));
        ws.order.emplace_back(Kind::Set, name);
    }

    void partition(Line& l) {
        std::string name = fresh(l, ws.partitions, "partition");
        l.expect("=");
        l.expect("[");
        std::vector<SymbolicHybridSet> pieces;
        do
            pieces.push_back(l.lincomb());
        while (l.accept(","));
        l.expect("]");
        l.expect_word("over");
        std::size_t col = l.cur().col;
        std::string u = l.ident();
        if (!ws.regions.count(u))
            l.fail("unresolved name '" + u + "'", col);
        bool assumed = l.accept_word("assumed");
        l.expect_end();
        ws.partitions.emplace(name, make_partition(name, ws.regions.at(u), std::move(pieces), assumed));
        ws.order.emplace_back(Kind::Partition, name);
    }

    void items(Line& l, std::vector<HybridTerm>& terms, const std::optional<StarOp>& star) {
        if (l.is(")"))
            return;
        do {
            if (l.accept_word("term")) {
                l.expect("(");
                FreeWord w = l.word();
                l.expect(",");
                SymbolicHybridSet r = l.lincomb();
                l.expect(")");
                if (w.empty())
                    l.fail("a term needs a non-empty word");
                terms.emplace_back(std::move(w), std::move(r));
                continue;
            }
            std::size_t col = l.cur().col;
            std::string name = l.ident();
            auto it = ws.exprs.find(name);
            if (it == ws.exprs.end())
                l.fail("unresolved name '" + name + "'", col);
            const HybridExpr& e = it->second;
            if (!(e.star() == star))
                l.fail("expression '" + name + "' has a different join", col);
            terms.insert(terms.end(), e.terms().begin(), e.terms().end());
        } while (l.accept(","));
    }

    HybridExpr expression(Line& l) {
        if (l.accept_word("join")) {
            l.expect("(");
            std::vector<HybridTerm> terms;
            items(l, terms, std::nullopt);
            l.expect(")");
            return HybridExpr::join_of(std::move(terms));
        }
        if (l.accept_word("mjoin")) {
            l.expect("(");
            StarOp s = l.star();
            std::vector<HybridTerm> terms;
            if (l.accept(","))
                items(l, terms, s);
            l.expect(")");
            return marked_join(s, std::move(terms));
        }
        if (l.accept_word("pstar")) {
            l.expect("(");
            StarOp s = l.star();
            std::vector<HybridExpr> ops;
            while (l.accept(",")) {
                std::size_t col = l.cur().col;
                std::string name = l.ident();
                if (!ws.exprs.count(name))
                    l.fail("unresolved name '" + name + "'", col);
                ops.push_back(ws.exprs.at(name));
            }
            l.expect_word("over");
            std::vector<GeneralisedPartition> parts;
            do {
                std::size_t col = l.cur().col;
                std::string name = l.ident();
                if (!ws.partitions.count(name))
                    l.fail("unresolved name '" + name + "'", col);
                parts.push_back(ws.partitions.at(name));
            } while (l.accept(","));
            std::optional<ChoiceMatrix> c;
            if (l.accept_word("using")) {
                l.expect_word("rows");
                l.expect("(");
                std::vector<std::vector<std::int64_t>> rows(1);
                while (!l.accept(")")) {
                    if (l.accept(";"))
                        rows.emplace_back();
                    else
                        rows.back().push_back(l.integer());
                }
                std::string text;
                for (const auto& r : rows) {
                    for (auto x : r)
                        text += std::to_string(x) + " ";
                    text += "\n";
                }
                c = parse_choice_matrix(text);
            }
            l.expect(")");
            Refinement r = c ? common_strict_refinement(parts, *c) : common_strict_refinement(parts);
            return pointwise_star(s, ops, r);
        }
        std::size_t col = l.cur().col;
        std::string name = l.ident();
        if (!ws.exprs.count(name))
            l.fail("unresolved name '" + name + "'", col);
        return ws.exprs.at(name);
    }

    void expr(Line& l) {
        std::string name = fresh(l, ws.exprs, "expression");
        l.expect("=");
        HybridExpr e = expression(l);
        l.expect_end();
        ws.exprs.emplace(name, std::move(e));
        ws.order.emplace_back(Kind::Expr, name);
    }

    void valuation(Line& l) {
        std::string name = fresh(l, ws.valuations, "valuation");
        l.expect("=");
        l.expect("{");
        Valuation v;
        if (!l.accept("}")) {
            do {
                std::size_t col = l.cur().col;
                std::string p = l.ident();
                if (!ws.has_param(p))
                    l.fail("unresolved name '" + p + "'", col);
                if (v.contains(p))
                    l.fail("parameter '" + p + "' assigned twice", col);
                l.expect("=");
                v.set(p, l.rational());
            } while (l.accept(","));
            l.expect("}");
        }
        l.expect_end();
        ws.valuations.emplace(name, std::move(v));
        ws.order.emplace_back(Kind::Valuation, name);
    }

    void sample(Line& l) {
        std::string name = fresh(l, ws.samples, "sample");
        l.expect("=");
        SampleSpec s;
        if (l.accept_word("grid")) {
            s.kind = SampleSpec::Kind::Grid;
            l.expect("(");
            s.lo = l.rational();
            l.expect(",");
            s.hi = l.rational();
            l.expect(",");
            std::size_t col = l.cur().col;
            s.count = l.integer();
            if (s.count < 1)
                l.fail("a grid needs at least one point", col);
            l.expect(")");
        } else if (l.accept_word("cells")) {
            s.kind = SampleSpec::Kind::Cells;
            l.expect("(");
            s.row_lo = l.integer();
            l.expect("..");
            s.row_hi = l.integer();
            l.expect(",");
            s.col_lo = l.integer();
            l.expect("..");
            s.col_hi = l.integer();
            l.expect(")");
        } else {
            l.expect("{");
            if (!l.accept("}")) {
                do
                    s.points.push_back(l.point());
                while (l.accept(","));
                l.expect("}");
            }
        }
        l.expect_end();
        ws.samples.emplace(name, std::move(s));
        ws.order.emplace_back(Kind::Sample, name);
    }

    void own_region(Line& l, const RegionAtom& r, std::size_t col) {
        auto it = ws.regions.find(r.name);
        if (it != ws.regions.end()) {
            if (!(it->second == r))
                l.fail("region '" + r.name + "' is already declared with a different shape", col);
            return;
        }
        if (ws.sets.count(r.name))
            l.fail("'" + r.name + "' is already a set", col);
        ws.regions.emplace(r.name, r);
    }

    void own_function(Line& l, const FunctionAtom& f, std::size_t col) {
        if (ws.functions.count(f.name))
            l.fail("duplicate function '" + f.name + "'", col);
        ws.functions.emplace(f.name, f);
    }

    void matrix(Line& l) {
        std::string name = fresh(l, ws.matrices, "matrix");
        l.expect("=");
        l.expect_word("blocks");
        l.expect("(");
        ParamExpr n = l.param_expr();
        l.expect(",");
        ParamExpr m = l.param_expr();
        l.expect(";");
        auto param_name = [&] {
            std::size_t col = l.cur().col;
            std::string p = l.ident();
            if (!ws.has_param(p))
                l.fail("unresolved name '" + p + "'", col);
            return p;
        };
        std::string h = param_name();
        l.expect(",");
        std::string k = param_name();
        l.expect(";");
        std::vector<std::string> regions, symbols;
        std::vector<std::size_t> cols;
        for (int b = 0; b < 4; ++b) {
            if (b)
                l.expect(",");
            cols.push_back(l.cur().col);
            regions.push_back(l.ident());
            symbols.push_back(l.accept("=") ? l.ident() : regions.back());
        }
        l.expect(")");
        l.expect_end();
        SymbolicBlockMatrix mat = block_matrix_2x2(name, n, m, h, k, {regions[0], regions[1], regions[2], regions[3]},
                                                   BlockNames{symbols[0], symbols[1], symbols[2], symbols[3]});
        for (std::size_t b = 0; b < 4; ++b) {
            own_region(l, mat.blocks[b].region, cols[b]);
            own_function(l, mat.blocks[b].symbol, cols[b]);
        }
        ws.matrices.emplace(name, std::move(mat));
        ws.order.emplace_back(Kind::Matrix, name);
    }

    void spline(Line& l) {
        std::string name = fresh(l, ws.splines, "spline");
        l.expect("=");
        l.expect_word("knots");
        l.expect("(");
        std::vector<ParamExpr> knots;
        do
            knots.push_back(l.param_expr());
        while (l.accept(","));
        l.expect(")");
        l.expect_word("over");
        std::size_t ucol = l.cur().col;
        std::string u = l.ident();
        l.expect_word("pieces");
        l.expect("(");
        std::vector<std::string> pieces;
        std::vector<std::size_t> cols;
        do {
            cols.push_back(l.cur().col);
            pieces.push_back(l.ident());
        } while (l.accept(","));
        l.expect(")");
        l.expect_end();
        SymbolicSpline s = make_spline(name, std::move(knots), pieces, u);
        own_region(l, s.universe, ucol);
        for (std::size_t i = 0; i < s.pieces.size(); ++i) {
            own_region(l, s.pieces[i], cols[i]);
            own_function(l, s.segments[i], cols[i]);
        }
        ws.splines.emplace(name, std::move(s));
        ws.order.emplace_back(Kind::Spline, name);
    }
};

std::string word_text(const FreeWord& w) {
    auto one = [](const FreeWord::Entry& e) {
        return e.exponent == 1 ? e.atom.name : e.atom.name + "^" + std::to_string(e.exponent);
    };
    if (w.entries().size() == 1 && w.entries()[0].exponent == 1)
        return w.entries()[0].atom.name;
    std::string out = "[";
    for (std::size_t i = 0; i < w.entries().size(); ++i)
        out += (i ? ", " : "") + one(w.entries()[i]);
    return out + "]";
}

std::string expr_text(const HybridExpr& e) {
    std::string out;
    if (e.op() == HybridExpr::Op::Join)
        out = "join(";
    else
        out = "mjoin(" + e.star()->name + (e.terms().empty() ? "" : ", ");
    for (std::size_t i = 0; i < e.terms().size(); ++i)
        out += (i ? ", " : "") + std::string("term(") + word_text(e.terms()[i].value) + ", " +
               to_string(e.terms()[i].region) + ")";
    return out + ")";
}

} // namespace

Workspace parse_workspace(std::string_view text) {
    Parser p;
    std::size_t lineno = 0;
    while (!text.empty()) {
        ++lineno;
        auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        Line l(line, lineno, p.ws);
        p.statement(l);
        if (nl == std::string_view::npos)
            break;
        text.remove_prefix(nl + 1);
    }
    return std::move(p.ws);
}

std::string print_workspace(const Workspace& ws) {
    std::ostringstream out;
    using Kind = Workspace::Kind;
    for (std::size_t i = 0; i < ws.order.size(); ++i) {
        const auto& [kind, name] = ws.order[i];
        switch (kind) {
        case Kind::Param: {
            out << "param " << name;
            while (i + 1 < ws.order.size() && ws.order[i + 1].first == Kind::Param)
                out << " " << ws.order[++i].second;
            break;
        }
        case Kind::Region:
            out << "region " << name << " = " << to_string(ws.regions.at(name).shape);
            break;
        case Kind::Function: {
            const FunctionAtom& f = ws.functions.at(name);
            if (f.body)
                out << "fn " << name << "(x) = " << to_string(*f.body);
            else
                out << "fn " << name << " opaque";
            break;
        }
        case Kind::Set:
            out << "set " << name << " = " << to_string(ws.sets.at(name));
            break;
        case Kind::Partition: {
            const GeneralisedPartition& p = ws.partitions.at(name);
            out << "partition " << name << " = [";
            for (std::size_t k = 0; k < p.pieces.size(); ++k)
                out << (k ? ", " : "") << to_string(p.pieces[k]);
            out << "] over " << p.universe.name << (p.assumed ? " assumed" : "");
            break;
        }
        case Kind::Expr:
            out << "expr " << name << " = " << expr_text(ws.exprs.at(name));
            break;
        case Kind::Valuation: {
            out << "valuation " << name << " = {";
            bool first = true;
            for (const auto& [p, v] : ws.valuations.at(name).values()) {
                out << (first ? "" : ", ") << p << " = " << to_string(v);
                first = false;
            }
            out << "}";
            break;
        }
        case Kind::Sample:
            out << "sample " << name << " = " << to_string(ws.samples.at(name));
            break;
        case Kind::Matrix: {
            const SymbolicBlockMatrix& m = ws.matrices.at(name);
            const auto& a = std::get<GridRect>(m.blocks[0].region.shape);
            out << "matrix " << name << " = blocks(" << to_string(m.rows) << ", " << to_string(m.cols) << "; "
                << to_string(a.row_hi) << ", " << to_string(a.col_hi) << "; ";
            for (std::size_t b = 0; b < m.blocks.size(); ++b) {
                out << (b ? ", " : "") << m.blocks[b].region.name;
                if (m.blocks[b].symbol.name != m.blocks[b].region.name)
                    out << "=" << m.blocks[b].symbol.name;
            }
            out << ")";
            break;
        }
        case Kind::Spline: {
            const SymbolicSpline& s = ws.splines.at(name);
            out << "spline " << name << " = knots(";
            for (std::size_t k = 0; k < s.knots.size(); ++k)
                out << (k ? ", " : "") << to_string(s.knots[k]);
            out << ") over " << s.universe.name << " pieces(";
            for (std::size_t k = 0; k < s.pieces.size(); ++k)
                out << (k ? ", " : "") << s.pieces[k].name;
            out << ")";
            break;
        }
        }
        out << "\n";
    }
    return out.str();
}

Valuation parse_valuation(std::string_view text, const Workspace& ws) {
    std::string wrapped(text);
    auto first = wrapped.find_first_not_of(" \t");
    if (first == std::string::npos || wrapped[first] != '{')
        wrapped = "{" + wrapped + "}";
    Parser p;
    p.ws.params = ws.params;
    std::string line = "valuation cli = " + wrapped;
    Line l(line, 1, p.ws);
    p.statement(l);
    return p.ws.valuations.at("cli");
}

} // namespace hybrid
