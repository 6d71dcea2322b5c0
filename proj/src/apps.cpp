#include "hybrid/apps.hpp"

#include <algorithm>

#include "hybrid/error.hpp"

namespace hybrid {

RegionAtom SymbolicBlockMatrix::universe() const { return {"U", GridRect{1, rows, 1, cols}}; }

GeneralisedPartition SymbolicBlockMatrix::partition() const {
    std::vector<SymbolicHybridSet> pieces;
    for (const auto& b : blocks)
        pieces.emplace_back(b.region);
    return make_partition(name, universe(), std::move(pieces), true);
}

HybridExpr SymbolicBlockMatrix::expression() const {
    std::vector<HybridTerm> terms;
    for (const auto& b : blocks)
        terms.emplace_back(b.symbol, SymbolicHybridSet(b.region));
    return HybridExpr::join_of(std::move(terms));
}

SymbolicBlockMatrix block_matrix_2x2(std::string name, ParamExpr n, ParamExpr m, const std::string& h,
                                     const std::string& k, const BlockNames& regions,
                                     const std::optional<BlockNames>& symbols) {
    const BlockNames& sym = symbols ? *symbols : regions;
    ParamExpr h1(h, 1), k1(k, 1);
    SymbolicBlockMatrix out{std::move(name), n, m, {}};
    out.blocks.push_back({{regions.a, GridRect{1, h, 1, k}}, FunctionAtom::opaque(sym.a)});
    out.blocks.push_back({{regions.b, GridRect{h1, n, 1, k}}, FunctionAtom::opaque(sym.b)});
    out.blocks.push_back({{regions.c, GridRect{1, h, k1, m}}, FunctionAtom::opaque(sym.c)});
    out.blocks.push_back({{regions.d, GridRect{h1, n, k1, m}}, FunctionAtom::opaque(sym.d)});
    return out;
}

HybridExpr matrix_sum(std::span<const SymbolicBlockMatrix> ms) {
    if (ms.empty())
        throw ContractError("matrix_sum needs at least one matrix");
    std::vector<GeneralisedPartition> parts;
    std::vector<HybridExpr> exprs;
    for (const auto& m : ms) {
        if (!(m.rows == ms.front().rows) || !(m.cols == ms.front().cols))
            throw DimensionError("matrix " + m.name + " is " + to_string(m.rows) + "×" + to_string(m.cols) +
                                 " but " + ms.front().name + " is " + to_string(ms.front().rows) + "×" +
                                 to_string(ms.front().cols));
        parts.push_back(m.partition());
        exprs.push_back(m.expression());
    }
    return pointwise_star(StarOp::plus(), exprs, common_strict_refinement(parts));
}

HybridExpr matrix_add(const SymbolicBlockMatrix& m1, const SymbolicBlockMatrix& m2) {
    std::vector<SymbolicBlockMatrix> ms{m1, m2};
    return matrix_sum(ms);
}

EvalOutcome matrix_eval_cell(const HybridExpr& e, std::int64_t i, std::int64_t j, const Valuation& v) {
    return eval(e, Point{Rational(i), Rational(j)}, v);
}

GeneralisedPartition SymbolicSpline::partition() const {
    std::vector<SymbolicHybridSet> ps;
    for (const auto& p : pieces)
        ps.emplace_back(p);
    return make_partition(name, universe, std::move(ps), true);
}

HybridExpr SymbolicSpline::expression() const {
    std::vector<HybridTerm> terms;
    for (std::size_t i = 0; i < pieces.size(); ++i)
        terms.emplace_back(segments[i], SymbolicHybridSet(pieces[i]));
    return HybridExpr::join_of(std::move(terms));
}

SymbolicSpline make_spline(std::string name, std::vector<ParamExpr> knots, std::vector<std::string> piece_names,
                           std::string universe_name) {
    if (knots.size() < 2)
        throw ContractError("a spline needs at least two knots");
    if (piece_names.size() + 1 != knots.size())
        throw ContractError("spline " + name + " has " + std::to_string(knots.size()) + " knots but " +
                            std::to_string(piece_names.size()) + " pieces");
    SymbolicSpline s;
    s.name = std::move(name);
    s.universe = {std::move(universe_name), Interval1D{knots.front(), knots.back(), true, true}};
    const std::size_t n = piece_names.size();
    for (std::size_t i = 0; i < n; ++i) {
        bool last = i + 1 == n;
        s.pieces.push_back({piece_names[i], Interval1D{knots[i], knots[i + 1], true, last}});
        FunctionAtom seg = FunctionAtom::opaque(s.name + "{" + to_string(knots[i]) + "," + to_string(knots[i + 1]) + "}");
        seg.knots = KnotPair{knots[i], knots[i + 1]};
        s.segments.push_back(std::move(seg));
    }
    s.knots = std::move(knots);
    return s;
}

HybridExpr spline_merge(const SymbolicSpline& s, const SymbolicSpline& t) {
    if (!(s.universe == t.universe))
        throw DomainError("splines " + s.name + " and " + t.name + " are over different universes (" +
                          s.universe.name + " = " + to_string(s.universe.shape) + ", " + t.universe.name + " = " +
                          to_string(t.universe.shape) + ")");
    std::vector<GeneralisedPartition> parts{s.partition(), t.partition()};
    Refinement r = common_strict_refinement(parts);
    HybridExpr e = pointwise_star(StarOp::merge(), s.expression(), t.expression(), r);
    std::vector<HybridTerm> terms = e.terms();
    auto it = std::find_if(terms.begin(), terms.end(),
                           [&](const HybridTerm& term) { return term.region == r.pieces.front().set; });
    if (it != terms.end())
        std::rotate(it, it + 1, terms.end());
    return marked_join(StarOp::merge(), std::move(terms));
}

SplineRegion spline_eval_region(const HybridExpr& e, const Rational& x, const Valuation& v) {
    SplineRegion out;
    out.outcome = eval(e, Point{x}, v);
    if (out.outcome.kind != EvalOutcome::Kind::Value)
        return out;
    std::optional<Rational> lo, hi;
    for (const auto& entry : out.outcome.reduced.entries()) {
        if (entry.exponent < 0) {
            out.residual.push_back(entry.atom);
            continue;
        }
        out.segments.push_back(entry.atom);
        if (!entry.atom.knots)
            continue;
        Rational a = entry.atom.knots->lo.eval(v);
        Rational b = entry.atom.knots->hi.eval(v);
        lo = lo ? std::max(*lo, a) : a;
        hi = hi ? std::min(*hi, b) : b;
    }
    if (lo && hi) {
        out.interval = std::make_pair(*lo, *hi);
        out.empty = *lo > *hi;
        out.degenerate = *lo == *hi;
    }
    return out;
}

std::string to_string(const SplineRegion& r) {
    if (r.outcome.kind == EvalOutcome::Kind::Undefined)
        return "undefined";
    if (r.outcome.kind == EvalOutcome::Kind::Relation)
        return to_string(r.outcome, " ⋈ ");
    std::string s;
    for (const auto& seg : r.segments)
        s += (s.empty() ? "" : " ⋈ ") + seg.name;
    if (r.interval)
        s += " on [" + to_string(r.interval->first) + ", " + to_string(r.interval->second) + "]";
    if (r.empty)
        s += " (empty merge)";
    else if (r.degenerate)
        s += " (degenerate)";
    for (const auto& a : r.residual)
        s += " residual " + a.name;
    return s;
}

} // namespace hybrid
