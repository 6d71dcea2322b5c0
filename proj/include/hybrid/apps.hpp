#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hybrid/calculus.hpp"
#include "hybrid/hybrid_function.hpp"
#include "hybrid/refine.hpp"

namespace hybrid {

/// A block matrix whose entries are opaque block symbols over grid rectangles
/// of the n×m cell universe `U`.
struct SymbolicBlockMatrix {
    struct Block {
        RegionAtom region;
        FunctionAtom symbol;
        bool operator==(const Block&) const = default;
    };

    std::string name;
    ParamExpr rows, cols;
    std::vector<Block> blocks;

    RegionAtom universe() const;
    /// Blocks as an assumed partition of the universe.
    GeneralisedPartition partition() const;
    /// symbol^region for every block, unmarked.
    HybridExpr expression() const;

    bool operator==(const SymbolicBlockMatrix&) const = default;
};

/// Names of the four blocks in the order upper-left, lower-left, upper-right,
/// lower-right.
struct BlockNames {
    std::string a, b, c, d;
};

/// A = rows 1..h × cols 1..k, B below A, C right of A, D the rest. Region and
/// block symbol share a name unless `symbols` is given.
SymbolicBlockMatrix block_matrix_2x2(std::string name, ParamExpr n, ParamExpr m, const std::string& h,
                                     const std::string& k, const BlockNames& regions,
                                     const std::optional<BlockNames>& symbols = std::nullopt);

/// ⊛⁺ of the matrices over their canonical common refinement. Throws
/// DimensionError when the outer dimensions differ.
HybridExpr matrix_add(const SymbolicBlockMatrix& m1, const SymbolicBlockMatrix& m2);
HybridExpr matrix_sum(std::span<const SymbolicBlockMatrix> ms);

/// Value of the sum at cell (i, j).
EvalOutcome matrix_eval_cell(const HybridExpr& e, std::int64_t i, std::int64_t j, const Valuation& v);

/// Spline with opaque segments between consecutive knots. Pieces are
/// [c_{i−1}, c_i) except the last, which is closed.
struct SymbolicSpline {
    std::string name;
    std::vector<ParamExpr> knots;
    RegionAtom universe;
    std::vector<RegionAtom> pieces;
    std::vector<FunctionAtom> segments;

    GeneralisedPartition partition() const;
    HybridExpr expression() const;

    bool operator==(const SymbolicSpline&) const = default;
};

/// Segment atoms are named `name{lo,hi}` and carry their knot pair. The
/// universe is `universe_name` = [c_0, c_n].
SymbolicSpline make_spline(std::string name, std::vector<ParamExpr> knots, std::vector<std::string> piece_names,
                           std::string universe_name = "U");

/// ⊛⋈ over the canonical refinement; the complement piece comes last. Throws
/// DomainError when the universes differ.
HybridExpr spline_merge(const SymbolicSpline& s, const SymbolicSpline& t);

struct SplineRegion {
    EvalOutcome outcome;
    /// Atoms left with positive exponent after reduction.
    std::vector<FunctionAtom> segments;
    /// Atoms left with a negative exponent; a consistent merge has none.
    std::vector<FunctionAtom> residual;
    /// [max lo, min hi] of the surviving segments.
    std::optional<std::pair<Rational, Rational>> interval;
    bool empty = false;
    bool degenerate = false;

    bool consistent() const { return residual.empty() && !empty; }
};

SplineRegion spline_eval_region(const HybridExpr& e, const Rational& x, const Valuation& v);

std::string to_string(const SplineRegion& r);

} // namespace hybrid
