#pragma once

// Fixtures shared by the unit tests and the acceptance runner.

#include <map>
#include <random>
#include <string>
#include <vector>

#include "hybrid/apps.hpp"
#include "hybrid/calculus.hpp"
#include "hybrid/hybrid_set.hpp"
#include "hybrid/oracle.hpp"
#include "hybrid/refine.hpp"

namespace fixtures {

using namespace hybrid;

inline std::vector<Point> grid(Rational lo, Rational hi, int count) {
    std::vector<Point> pts;
    for (int i = 0; i < count; ++i)
        pts.push_back(Point{lo + (hi - lo) * i / count});
    return pts;
}

inline std::vector<Point> cells(int rows, int cols) {
    std::vector<Point> pts;
    for (int i = 1; i <= rows; ++i)
        for (int j = 1; j <= cols; ++j)
            pts.push_back(Point{Rational(i), Rational(j)});
    return pts;
}

inline HybridSet random_set(std::mt19937_64& rng, int tokens, int max_mult = 3) {
    std::uniform_int_distribution<int> count(0, tokens);
    std::uniform_int_distribution<int> tok(0, tokens - 1);
    std::uniform_int_distribution<int> mult(-max_mult, max_mult);
    HybridSet h;
    for (int n = count(rng); n > 0; --n)
        h.add(Element::token("t" + std::to_string(tok(rng))), mult(rng));
    return h;
}

/// The two-step f, g of the marked-join example: f = 2 on [0,a), 0 after;
/// g = 5 on [0,b), 7 after; U = [0,1].
struct Mult0 {
    RegionAtom U{"U", Interval1D{0, 1, true, true}};
    RegionAtom A1{"A1", Interval1D{0, "a", true, false}};
    RegionAtom A2{"A2", Interval1D{"a", 1, true, true}};
    RegionAtom B1{"B1", Interval1D{0, "b", true, false}};
    RegionAtom B2{"B2", Interval1D{"b", 1, true, true}};
    FunctionAtom f1 = FunctionAtom::constant("f1", 2);
    FunctionAtom f2 = FunctionAtom::constant("f2", 0);
    FunctionAtom g1 = FunctionAtom::constant("g1", 5);
    FunctionAtom g2 = FunctionAtom::constant("g2", 7);

    GeneralisedPartition fp() const { return make_partition("F", U, {A1, A2}, true); }
    GeneralisedPartition gp() const { return make_partition("G", U, {B1, B2}, true); }
    HybridExpr f() const { return HybridExpr::join_of({HybridTerm(f1, A1), HybridTerm(f2, A2)}); }
    HybridExpr g() const { return HybridExpr::join_of({HybridTerm(g1, B1), HybridTerm(g2, B2)}); }

    static ChoiceMatrix matrix() { return ChoiceMatrix{{1, 1, 1}, {1, 0, 0}, {1, 1, 0}}; }

    Refinement refinement() const {
        std::vector<GeneralisedPartition> parts{fp(), gp()};
        return common_strict_refinement(parts, matrix());
    }

    HybridExpr product() const { return pointwise_star(StarOp::times(), f(), g(), refinement()); }

    /// Classical f·g at x.
    static Rational oracle(const Rational& x, const Rational& a, const Rational& b) {
        using X = Rational;
        using V = Rational;
        std::vector<X> uni{x};
        oracle::ClassicalPiecewise<X, V> f{uni,
                                           {{[&](const X& t) { return t < a; }, [](const X&) { return V(2); }, "f1"},
                                            {[&](const X& t) { return t >= a; }, [](const X&) { return V(0); }, "f2"}}};
        oracle::ClassicalPiecewise<X, V> g{uni,
                                           {{[&](const X& t) { return t < b; }, [](const X&) { return V(5); }, "g1"},
                                            {[&](const X& t) { return t >= b; }, [](const X&) { return V(7); }, "g2"}}};
        auto fg = oracle::classical_star<X, V>([](const V& p, const V& q) { return V(p * q); }, f, g);
        return *oracle::classical_eval(fg, x);
    }
};

/// The block matrices M1 (h1, k1) and M2 (h2, k2) over an n×m grid.
inline SymbolicBlockMatrix demo_m1() { return block_matrix_2x2("M1", "n", "m", "h1", "k1", {"A1", "B1", "C1", "D1"}); }
inline SymbolicBlockMatrix demo_m2() { return block_matrix_2x2("M2", "n", "m", "h2", "k2", {"A2", "B2", "C2", "D2"}); }

using FormalSum = std::map<std::string, std::int64_t>;

/// Concrete blockwise sum at (i, j): the names of the blocks containing it.
inline FormalSum block_oracle(std::span<const SymbolicBlockMatrix> ms, std::int64_t i, std::int64_t j,
                              const Valuation& v) {
    using X = std::pair<std::int64_t, std::int64_t>;
    std::vector<X> uni{{i, j}};
    std::vector<oracle::ClassicalPiecewise<X, FormalSum>> fs;
    for (const auto& m : ms) {
        oracle::ClassicalPiecewise<X, FormalSum> f{uni, {}};
        for (const auto& b : m.blocks) {
            const auto& r = std::get<GridRect>(b.region.shape);
            auto lo_i = r.row_lo.eval(v), hi_i = r.row_hi.eval(v), lo_j = r.col_lo.eval(v), hi_j = r.col_hi.eval(v);
            f.pieces.push_back({[=](const X& x) {
                                    return lo_i <= x.first && x.first <= hi_i && lo_j <= x.second && x.second <= hi_j;
                                },
                                [name = b.symbol.name](const X&) { return FormalSum{{name, 1}}; }, b.region.name});
        }
        fs.push_back(std::move(f));
    }
    auto sum = oracle::classical_star<X, FormalSum>(
        [](const FormalSum& a, const FormalSum& b) {
            FormalSum out = a;
            for (const auto& [k, n] : b)
                if ((out[k] += n) == 0)
                    out.erase(k);
            return out;
        },
        fs);
    auto value = oracle::classical_eval(sum, X{i, j});
    return value ? *value : FormalSum{};
}

inline FormalSum residue_of(const EvalOutcome& o) {
    FormalSum out;
    for (const auto& e : o.value.residue)
        out[e.atom.name] += e.exponent;
    return out;
}

inline SymbolicSpline demo_s() { return make_spline("S", {"a", "c", "b"}, {"P1", "P2"}); }
inline SymbolicSpline demo_t() { return make_spline("T", {"a", "d", "b"}, {"Q1", "Q2"}); }

} // namespace fixtures
