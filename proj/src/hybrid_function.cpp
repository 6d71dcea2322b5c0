#include "hybrid/hybrid_function.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>

#include "hybrid/checked.hpp"
#include "hybrid/error.hpp"

namespace hybrid {

Rational value_at(const FunctionAtom& f, const Point& p, const Valuation& v) {
    if (!f.body)
        throw OpacityError("function atom '" + f.name + "' is opaque");
    std::optional<Rational> x;
    if (p.size() == 1)
        x = p.front();
    return f.body->eval(x, v);
}

void FreeWord::add(const FunctionAtom& atom, std::int64_t exponent) {
    if (exponent == 0)
        return;
    auto it = std::find_if(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.atom.name == atom.name; });
    if (it == entries_.end()) {
        entries_.push_back({atom, exponent});
        return;
    }
    if (!(it->atom == atom))
        throw DomainError("conflicting definitions of function atom '" + atom.name + "'");
    it->exponent = checked_add(it->exponent, exponent);
    if (it->exponent == 0)
        entries_.erase(it);
}

std::int64_t FreeWord::exponent(const std::string& name) const {
    for (const auto& e : entries_)
        if (e.atom.name == name)
            return e.exponent;
    return 0;
}

FreeWord& FreeWord::operator+=(const FreeWord& o) {
    for (const auto& e : o.entries_)
        add(e.atom, e.exponent);
    return *this;
}

bool FreeWord::operator==(const FreeWord& o) const {
    if (entries_.size() != o.entries_.size())
        return false;
    for (const auto& e : entries_) {
        auto it = std::find_if(o.entries_.begin(), o.entries_.end(),
                               [&](const Entry& f) { return f.atom.name == e.atom.name; });
        if (it == o.entries_.end() || it->exponent != e.exponent || !(it->atom == e.atom))
            return false;
    }
    return true;
}

FreeWord operator+(FreeWord a, const FreeWord& b) { return a += b; }

FreeWord operator*(std::int64_t n, const FreeWord& w) {
    FreeWord r;
    if (n == 0)
        return r;
    for (const auto& e : w.entries())
        r.add(e.atom, checked_mul(n, e.exponent));
    return r;
}

namespace {

std::string trimmed(const std::string& s) {
    auto b = s.find_first_not_of(' ');
    auto e = s.find_last_not_of(' ');
    return b == std::string::npos ? s : s.substr(b, e - b + 1);
}

std::string atom_power(const std::string& name, std::int64_t exponent) {
    return exponent == 1 ? name : name + "^" + std::to_string(exponent);
}

} // namespace

std::string to_string(const FreeWord& w, std::string_view separator) {
    std::string out;
    for (const auto& e : w.entries()) {
        if (!out.empty())
            out += separator;
        out += atom_power(e.atom.name, e.exponent);
    }
    return out.empty() ? "e" : out;
}

HybridTerm::HybridTerm(FreeWord w, SymbolicHybridSet r) : value(std::move(w)), region(std::move(r)) {
    if (value.empty())
        throw ContractError("a hybrid term needs a non-empty value word");
}

StarOp StarOp::plus() {
    StarOp s;
    s.name = "+";
    s.symbol = " + ";
    s.combine = [](const Rational& a, const Rational& b) { return Rational(a + b); };
    s.unit = Rational(0);
    s.inverse = [](const Rational& a) { return Rational(-a); };
    return s;
}

StarOp StarOp::times() {
    StarOp s;
    s.name = "*";
    s.symbol = " * ";
    s.combine = [](const Rational& a, const Rational& b) { return Rational(a * b); };
    s.unit = Rational(1);
    return s;
}

StarOp StarOp::merge() {
    StarOp s;
    s.name = "merge";
    s.symbol = " ⋈ ";
    s.idempotent = true;
    return s;
}

StarOp StarOp::max() {
    StarOp s;
    s.name = "max";
    s.symbol = " max ";
    s.combine = [](const Rational& a, const Rational& b) { return a < b ? b : a; };
    s.idempotent = true;
    return s;
}

StarOp StarOp::min() {
    StarOp s;
    s.name = "min";
    s.symbol = " min ";
    s.combine = [](const Rational& a, const Rational& b) { return b < a ? b : a; };
    s.idempotent = true;
    return s;
}

std::optional<StarOp> StarOp::builtin(std::string_view name) {
    if (name == "+")
        return plus();
    if (name == "*")
        return times();
    if (name == "merge")
        return merge();
    if (name == "max")
        return max();
    if (name == "min")
        return min();
    return std::nullopt;
}

HybridExpr HybridExpr::join_of(std::vector<HybridTerm> terms) {
    HybridExpr e;
    e.terms_ = std::move(terms);
    return e;
}

HybridExpr HybridExpr::marked_of(StarOp star, std::vector<HybridTerm> terms) {
    HybridExpr e;
    e.op_ = Op::MarkedJoin;
    e.star_ = std::move(star);
    e.terms_ = std::move(terms);
    return e;
}

HybridExpr join(const HybridExpr& a, const HybridExpr& b) {
    if (a.op() != HybridExpr::Op::Join || b.op() != HybridExpr::Op::Join)
        throw ContractError("join takes unmarked operands; use marked_join for marked expressions");
    std::vector<HybridTerm> terms = a.terms();
    terms.insert(terms.end(), b.terms().begin(), b.terms().end());
    return reduce_formally(HybridExpr::join_of(std::move(terms)));
}

HybridExpr join(const HybridTerm& a, const HybridTerm& b) {
    return join(HybridExpr::join_of({a}), HybridExpr::join_of({b}));
}
HybridExpr join(const HybridExpr& a, const HybridTerm& b) { return join(a, HybridExpr::join_of({b})); }
HybridExpr join(const HybridTerm& a, const HybridExpr& b) { return join(HybridExpr::join_of({a}), b); }

HybridExpr marked_join(const StarOp& star, std::vector<HybridTerm> terms) {
    if (!star.associative_commutative)
        throw ContractError("star '" + star.name + "' is not declared associative and commutative");
    return HybridExpr::marked_of(star, std::move(terms));
}

HybridExpr reduce_formally(const HybridExpr& e) {
    std::vector<HybridTerm> merged;
    for (const auto& t : e.terms()) {
        auto it = std::find_if(merged.begin(), merged.end(), [&](const HybridTerm& m) { return m.value == t.value; });
        if (it == merged.end())
            merged.push_back(t);
        else
            it->region += t.region;
    }
    std::erase_if(merged, [](const HybridTerm& t) { return t.region.empty(); });
    if (e.op() == HybridExpr::Op::MarkedJoin)
        return HybridExpr::marked_of(*e.star(), std::move(merged));
    return HybridExpr::join_of(std::move(merged));
}

bool same_terms(const HybridExpr& a, const HybridExpr& b) {
    if (a.op() != b.op() || a.star() != b.star() || a.terms().size() != b.terms().size())
        return false;
    std::vector<bool> used(b.terms().size(), false);
    for (const auto& t : a.terms()) {
        bool found = false;
        for (std::size_t i = 0; i < b.terms().size(); ++i) {
            if (!used[i] && b.terms()[i] == t) {
                used[i] = found = true;
                break;
            }
        }
        if (!found)
            return false;
    }
    return true;
}

bool FormalValue::operator==(const FormalValue& o) const {
    if (scalar != o.scalar || residue.size() != o.residue.size())
        return false;
    FreeWord a, b;
    for (const auto& e : residue)
        a.add(e.atom, e.exponent);
    for (const auto& e : o.residue)
        b.add(e.atom, e.exponent);
    return a == b;
}

std::string to_string(const FormalValue& v, std::string_view separator) {
    std::string out;
    for (const auto& e : v.residue) {
        if (!out.empty())
            out += separator;
        out += atom_power(e.atom.name, e.exponent);
    }
    if (v.scalar) {
        if (!out.empty())
            out += separator;
        out += to_string(*v.scalar);
    }
    return out.empty() ? "e" : out;
}

namespace {

constexpr std::int64_t kMaxFoldExponent = 1'000'000;

struct Reduction {
    FreeWord word;
    std::int64_t multiplicity = 0;
};

Reduction reduce_at(const HybridExpr& e, const Point& p, const Valuation& v) {
    Reduction r;
    for (const auto& t : e.terms()) {
        std::int64_t m = multiplicity(t.region, p, v);
        r.multiplicity = checked_add(r.multiplicity, m);
        if (m != 0)
            r.word += m * t.value;
    }
    return r;
}

EvalOutcome eval_join(Reduction r, const Point& p, const Valuation& v) {
    EvalOutcome out;
    out.reduced = std::move(r.word);
    // Group surviving atoms by the value they take at p; opaque atoms are
    // only known to equal themselves.
    std::vector<std::pair<FormalValue, std::int64_t>> graph;
    for (const auto& e : out.reduced.entries()) {
        FormalValue value;
        if (e.atom.body)
            value.scalar = value_at(e.atom, p, v);
        else
            value.residue.push_back({e.atom, 1});
        auto it = std::find_if(graph.begin(), graph.end(), [&](const auto& g) { return g.first == value; });
        if (it == graph.end())
            graph.emplace_back(std::move(value), e.exponent);
        else
            it->second = checked_add(it->second, e.exponent);
    }
    std::erase_if(graph, [](const auto& g) { return g.second == 0; });
    if (graph.empty())
        return out;
    if (graph.size() == 1) {
        out.kind = EvalOutcome::Kind::Value;
        out.value = graph.front().first;
        out.multiplicity = graph.front().second;
        return out;
    }
    out.kind = EvalOutcome::Kind::Relation;
    out.relation = std::move(graph);
    return out;
}

Rational power(const StarOp& star, const Rational& x, std::int64_t k) {
    if (star.idempotent)
        return x;
    Rational base = k < 0 ? star.inverse(x) : x;
    std::int64_t n = k < 0 ? -k : k;
    Rational acc = base;
    for (std::int64_t i = 1; i < n; ++i)
        acc = star.combine(acc, base);
    return acc;
}

EvalOutcome eval_marked(const StarOp& star, Reduction r, const Point& p, const Valuation& v) {
    EvalOutcome out;
    out.reduced = std::move(r.word);
    out.multiplicity = r.multiplicity;
    for (const auto& e : out.reduced.entries()) {
        if (e.exponent == 1)
            continue;
        bool allowed = e.exponent < 0 ? star.has_inverse() : star.idempotent || star.has_inverse();
        if (!allowed)
            throw NonEvaluable("exponent " + std::to_string(e.exponent) + " of '" + e.atom.name +
                               "' cannot be evaluated: star '" + star.name + "' has no inverse");
        if (std::abs(e.exponent) > kMaxFoldExponent)
            throw NonEvaluable("exponent of '" + e.atom.name + "' too large to fold");
    }
    std::optional<Rational> folded;
    for (const auto& e : out.reduced.entries()) {
        std::int64_t k = star.idempotent && e.exponent > 0 ? 1 : e.exponent;
        if (e.atom.body && star.combine) {
            Rational term = power(star, value_at(e.atom, p, v), k);
            folded = folded ? star.combine(*folded, term) : term;
        } else {
            out.value.residue.push_back({e.atom, k});
        }
    }
    // Unit law: a folded unit next to a formal residue contributes nothing.
    if (folded && !(star.unit && *folded == *star.unit && !out.value.residue.empty()))
        out.value.scalar = folded;
    out.kind = EvalOutcome::Kind::Value;
    return out;
}

} // namespace

EvalOutcome eval(const HybridExpr& e, const Point& p, const Valuation& v) {
    Reduction r = reduce_at(e, p, v);
    if (r.word.empty()) {
        EvalOutcome out;
        out.multiplicity = r.multiplicity;
        return out;
    }
    if (e.op() == HybridExpr::Op::Join)
        return eval_join(std::move(r), p, v);
    return eval_marked(*e.star(), std::move(r), p, v);
}

std::string word_separator(const HybridExpr& e) {
    return e.op() == HybridExpr::Op::MarkedJoin ? e.star()->symbol : std::string("·");
}

std::string to_string(const EvalOutcome& o, std::string_view separator) {
    switch (o.kind) {
    case EvalOutcome::Kind::Undefined:
        return "undefined";
    case EvalOutcome::Kind::Value: {
        std::string s = to_string(o.value, separator);
        if (o.multiplicity != 1)
            s += " (multiplicity " + std::to_string(o.multiplicity) + ")";
        return s;
    }
    case EvalOutcome::Kind::Relation:
        break;
    }
    std::string s = "relation {";
    for (std::size_t i = 0; i < o.relation.size(); ++i) {
        if (i)
            s += ", ";
        s += to_string(o.relation[i].first, separator) + "^" + std::to_string(o.relation[i].second);
    }
    return s + "}";
}

bool is_reducible(const HybridExpr& e, const Valuation& v, std::span<const Point> sample) {
    for (const auto& p : sample) {
        EvalOutcome o = eval(e, p, v);
        if (o.kind == EvalOutcome::Kind::Relation)
            return false;
        if (o.kind == EvalOutcome::Kind::Value && o.multiplicity != 1)
            return false;
    }
    return true;
}

HybridSet hybrid_graph(const HybridExpr& e, const Valuation& v, std::span<const Point> sample, bool evaluate) {
    HybridSet graph;
    std::set<Point> seen;
    for (const auto& p : sample) {
        if (!seen.insert(p).second)
            continue;
        for (const auto& t : e.terms()) {
            std::int64_t m = multiplicity(t.region, p, v);
            if (m == 0)
                continue;
            for (const auto& w : t.value.entries()) {
                std::string value = evaluate ? to_string(value_at(w.atom, p, v)) : w.atom.name;
                graph.add(Element(Element(p), value), checked_mul(m, w.exponent));
            }
        }
    }
    return graph;
}

std::string to_string(const HybridExpr& e) {
    if (e.empty())
        return "∅";
    std::string sep = word_separator(e);
    std::string joiner = e.op() == HybridExpr::Op::Join ? " ⊛ " : " ⊛[" + trimmed(e.star()->symbol) + "] ";
    std::string out;
    for (const auto& t : e.terms()) {
        if (!out.empty())
            out += joiner;
        std::string w = to_string(t.value, sep);
        if (t.value.entries().size() > 1 || t.value.entries().front().exponent != 1)
            w = "(" + w + ")";
        out += w + "^{" + to_string(t.region) + "}";
    }
    return out;
}

} // namespace hybrid
