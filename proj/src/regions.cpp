#include "hybrid/regions.hpp"

#include "hybrid/checked.hpp"
#include "hybrid/error.hpp"

namespace hybrid {

const Rational& Valuation::at(const std::string& name) const {
    auto it = values_.find(name);
    if (it == values_.end())
        throw ValuationError("parameter '" + name + "' has no value");
    return it->second;
}

Rational ParamExpr::eval(const Valuation& v) const {
    if (!param)
        return offset;
    return v.at(*param) + offset;
}

std::string to_string(const ParamExpr& e) {
    if (!e.param)
        return to_string(e.offset);
    if (e.offset == 0)
        return *e.param;
    if (e.offset > 0)
        return *e.param + "+" + to_string(e.offset);
    return *e.param + "-" + to_string(Rational(-e.offset));
}

std::string to_string(const Shape& s) {
    struct Visitor {
        std::string operator()(const Interval1D& i) const {
            return std::string("interval") + (i.lo_closed ? "[" : "(") + to_string(i.lo) + ", " + to_string(i.hi) +
                   (i.hi_closed ? "]" : ")");
        }
        std::string operator()(const GridRect& g) const {
            return "rect(" + to_string(g.row_lo) + ".." + to_string(g.row_hi) + ", " + to_string(g.col_lo) + ".." +
                   to_string(g.col_hi) + ")";
        }
        std::string operator()(const UniverseShape&) const { return "universe"; }
        std::string operator()(const FinitePointSet& f) const {
            std::string out = "points{";
            for (std::size_t i = 0; i < f.points.size(); ++i) {
                if (i)
                    out += ", ";
                out += to_string(f.points[i]);
            }
            return out + "}";
        }
    };
    return std::visit(Visitor{}, s);
}

std::set<std::string> parameters(const RegionAtom& r) {
    std::set<std::string> out;
    auto note = [&](const ParamExpr& e) {
        if (e.param)
            out.insert(*e.param);
    };
    if (const auto* i = std::get_if<Interval1D>(&r.shape)) {
        note(i->lo);
        note(i->hi);
    } else if (const auto* g = std::get_if<GridRect>(&r.shape)) {
        note(g->row_lo);
        note(g->row_hi);
        note(g->col_lo);
        note(g->col_hi);
    }
    return out;
}

int indicator(const RegionAtom& r, const Point& p, const Valuation& v) {
    struct Visitor {
        const RegionAtom& r;
        const Point& p;
        const Valuation& v;

        int operator()(const Interval1D& i) const {
            if (p.size() != 1)
                throw DimensionError("interval '" + r.name + "' needs a 1-d point, got " + to_string(p));
            Rational lo = i.lo.eval(v);
            Rational hi = i.hi.eval(v);
            const Rational& x = p.front();
            bool above = i.lo_closed ? lo <= x : lo < x;
            bool below = i.hi_closed ? x <= hi : x < hi;
            return above && below ? 1 : 0;
        }
        int operator()(const GridRect& g) const {
            if (p.size() != 2)
                throw DimensionError("rect '" + r.name + "' needs a 2-d point, got " + to_string(p));
            Rational rl = g.row_lo.eval(v), rh = g.row_hi.eval(v);
            Rational cl = g.col_lo.eval(v), ch = g.col_hi.eval(v);
            if (!is_integer(p[0]) || !is_integer(p[1]))
                return 0;
            return rl <= p[0] && p[0] <= rh && cl <= p[1] && p[1] <= ch ? 1 : 0;
        }
        int operator()(const UniverseShape&) const { return 1; }
        int operator()(const FinitePointSet& f) const {
            for (const auto& q : f.points)
                if (q == p)
                    return 1;
            return 0;
        }
    };
    return std::visit(Visitor{r, p, v}, r.shape);
}

void SymbolicHybridSet::add(const RegionAtom& atom, std::int64_t coeff) {
    if (coeff == 0)
        return;
    auto [it, inserted] = entries_.try_emplace(atom.name, Entry{atom, coeff});
    if (inserted)
        return;
    if (!(it->second.atom == atom))
        throw DomainError("conflicting definitions of region atom '" + atom.name + "'");
    it->second.coeff = checked_add(it->second.coeff, coeff);
    if (it->second.coeff == 0)
        entries_.erase(it);
}

std::int64_t SymbolicHybridSet::coefficient(const std::string& name) const {
    auto it = entries_.find(name);
    return it == entries_.end() ? 0 : it->second.coeff;
}

std::optional<RegionAtom> SymbolicHybridSet::single_atom() const {
    if (entries_.size() == 1 && entries_.begin()->second.coeff == 1)
        return entries_.begin()->second.atom;
    return std::nullopt;
}

SymbolicHybridSet& SymbolicHybridSet::operator+=(const SymbolicHybridSet& o) {
    for (const auto& [name, e] : o.entries_)
        add(e.atom, e.coeff);
    return *this;
}

SymbolicHybridSet& SymbolicHybridSet::operator-=(const SymbolicHybridSet& o) {
    for (const auto& [name, e] : o.entries_)
        add(e.atom, checked_neg(e.coeff));
    return *this;
}

SymbolicHybridSet operator+(SymbolicHybridSet a, const SymbolicHybridSet& b) { return a += b; }
SymbolicHybridSet operator-(SymbolicHybridSet a, const SymbolicHybridSet& b) { return a -= b; }
SymbolicHybridSet operator-(const SymbolicHybridSet& a) { return SymbolicHybridSet{} - a; }

SymbolicHybridSet operator*(std::int64_t n, const SymbolicHybridSet& a) {
    SymbolicHybridSet r;
    if (n == 0)
        return r;
    for (const auto& [name, e] : a.entries())
        r.add(e.atom, checked_mul(n, e.coeff));
    return r;
}

std::string to_string(const SymbolicHybridSet& s) {
    if (s.empty())
        return "0";
    std::string out;
    auto emit = [&](const SymbolicHybridSet::Entry& e) {
        std::int64_t c = e.coeff;
        if (out.empty()) {
            if (c < 0)
                out += "-";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        std::uint64_t mag = c < 0 ? 0 - static_cast<std::uint64_t>(c) : static_cast<std::uint64_t>(c);
        if (mag != 1)
            out += std::to_string(mag) + "*";
        out += e.atom.name;
    };
    for (const auto& [name, e] : s.entries())
        if (e.coeff > 0)
            emit(e);
    for (const auto& [name, e] : s.entries())
        if (e.coeff < 0)
            emit(e);
    return out;
}

std::int64_t multiplicity(const SymbolicHybridSet& s, const Point& p, const Valuation& v) {
    std::int64_t total = 0;
    for (const auto& [name, e] : s.entries())
        if (indicator(e.atom, p, v))
            total = checked_add(total, e.coeff);
    return total;
}

HybridSet instantiate(const SymbolicHybridSet& s, const Valuation& v, std::span<const Point> sample,
                      std::string universe) {
    HybridSet h(std::move(universe));
    std::set<Point> seen;
    for (const auto& p : sample)
        if (seen.insert(p).second)
            h.add(Element(p), multiplicity(s, p, v));
    return h;
}

} // namespace hybrid
