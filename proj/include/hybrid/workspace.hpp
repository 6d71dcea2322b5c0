#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hybrid/apps.hpp"
#include "hybrid/hybrid_function.hpp"
#include "hybrid/refine.hpp"
#include "hybrid/regions.hpp"

namespace hybrid {

/// Sample points: a uniform 1-d grid, integer cells, or an explicit list.
struct SampleSpec {
    enum class Kind { Grid, Cells, List };

    Kind kind = Kind::List;
    Rational lo, hi;
    std::int64_t count = 0;
    std::int64_t row_lo = 0, row_hi = 0, col_lo = 0, col_hi = 0;
    std::vector<Point> points;

    /// grid(lo, hi, count) is lo + (hi − lo)·i/count for i < count.
    std::vector<Point> expand() const;
    bool operator==(const SampleSpec&) const = default;
};

std::string to_string(const SampleSpec& s);

/// Named declarations read from a workspace file. Names are unique per kind.
/// Matrices and splines own the regions and atoms they create; those are
/// visible for lookup but are not printed separately.
struct Workspace {
    enum class Kind { Param, Region, Function, Set, Partition, Expr, Valuation, Sample, Matrix, Spline };

    std::vector<std::string> params;
    std::map<std::string, RegionAtom> regions;
    std::map<std::string, FunctionAtom> functions;
    std::map<std::string, SymbolicHybridSet> sets;
    std::map<std::string, GeneralisedPartition> partitions;
    std::map<std::string, HybridExpr> exprs;
    std::map<std::string, Valuation> valuations;
    std::map<std::string, SampleSpec> samples;
    std::map<std::string, SymbolicBlockMatrix> matrices;
    std::map<std::string, SymbolicSpline> splines;
    /// Explicit declarations in source order.
    std::vector<std::pair<Kind, std::string>> order;

    bool has_param(const std::string& name) const;

    /// Lookups throw Error naming the missing declaration.
    const RegionAtom& region(const std::string& name) const;
    const FunctionAtom& function(const std::string& name) const;
    const GeneralisedPartition& partition(const std::string& name) const;
    const HybridExpr& expr(const std::string& name) const;
    const Valuation& valuation(const std::string& name) const;
    const SampleSpec& sample(const std::string& name) const;
    const SymbolicBlockMatrix& matrix(const std::string& name) const;
    const SymbolicSpline& spline(const std::string& name) const;
    /// A region or a named set.
    SymbolicHybridSet set(const std::string& name) const;

    bool operator==(const Workspace&) const = default;
};

/// Throws ParseError carrying the line and column of the first problem:
/// syntax errors, unresolved names and duplicates.
Workspace parse_workspace(std::string_view text);

/// Text that parses back to an equal workspace.
std::string print_workspace(const Workspace& ws);

/// `a = 1/2, b = 3` (optionally in braces), checked against the declared
/// parameters.
Valuation parse_valuation(std::string_view text, const Workspace& ws);

} // namespace hybrid
