#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hybrid/hybrid_set.hpp"
#include "hybrid/point.hpp"
#include "hybrid/rational.hpp"

namespace hybrid {

/// Assignment of rational values to symbolic parameters.
class Valuation {
  public:
    Valuation() = default;
    Valuation(std::initializer_list<std::pair<const std::string, Rational>> values) : values_(values) {}

    void set(const std::string& name, Rational value) { values_[name] = std::move(value); }
    bool contains(const std::string& name) const { return values_.count(name) != 0; }

    /// Throws ValuationError if `name` is unassigned.
    const Rational& at(const std::string& name) const;

    const std::map<std::string, Rational>& values() const { return values_; }
    bool operator==(const Valuation&) const = default;

  private:
    std::map<std::string, Rational> values_;
};

/// A rational constant, or a named parameter plus a rational offset (`h1+1`).
struct ParamExpr {
    std::optional<std::string> param;
    Rational offset;

    ParamExpr() = default;
    ParamExpr(Rational constant) : offset(std::move(constant)) {}
    ParamExpr(int constant) : offset(constant) {}
    ParamExpr(std::string name, Rational off = 0) : param(std::move(name)), offset(std::move(off)) {}
    ParamExpr(const char* name) : param(std::string(name)), offset(0) {}

    Rational eval(const Valuation& v) const;
    bool operator==(const ParamExpr&) const = default;
};

std::string to_string(const ParamExpr& e);

struct Interval1D {
    ParamExpr lo, hi;
    bool lo_closed = true;
    bool hi_closed = true;
    bool operator==(const Interval1D&) const = default;
};

/// Integer cells (i, j) with row_lo <= i <= row_hi and col_lo <= j <= col_hi.
struct GridRect {
    ParamExpr row_lo, row_hi, col_lo, col_hi;
    bool operator==(const GridRect&) const = default;
};

struct UniverseShape {
    bool operator==(const UniverseShape&) const = default;
};

struct FinitePointSet {
    std::vector<Point> points;
    bool operator==(const FinitePointSet&) const = default;
};

using Shape = std::variant<Interval1D, GridRect, UniverseShape, FinitePointSet>;

std::string to_string(const Shape& s);

struct RegionAtom {
    std::string name;
    Shape shape;

    bool operator==(const RegionAtom&) const = default;
};

/// Parameters referenced by the shape.
std::set<std::string> parameters(const RegionAtom& r);

/// 1 iff `p` lies in the instantiated region. Empty instantiations (lo > hi)
/// contain nothing. Grid rectangles only contain integer cells.
int indicator(const RegionAtom& r, const Point& p, const Valuation& v);

/// Formal Z-linear combination of region atoms, keyed by atom name. No zero
/// coefficients are stored. Combining two atoms with the same name but
/// different shapes is a DomainError.
class SymbolicHybridSet {
  public:
    struct Entry {
        RegionAtom atom;
        std::int64_t coeff;
        bool operator==(const Entry&) const = default;
    };
    using Entries = std::map<std::string, Entry>;

    SymbolicHybridSet() = default;
    SymbolicHybridSet(const RegionAtom& atom, std::int64_t coeff = 1) { add(atom, coeff); }

    void add(const RegionAtom& atom, std::int64_t coeff);

    std::int64_t coefficient(const std::string& name) const;
    const Entries& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

    /// The atom when this is exactly 1·atom.
    std::optional<RegionAtom> single_atom() const;

    SymbolicHybridSet& operator+=(const SymbolicHybridSet& o);
    SymbolicHybridSet& operator-=(const SymbolicHybridSet& o);

    bool operator==(const SymbolicHybridSet&) const = default;

  private:
    Entries entries_;
};

SymbolicHybridSet operator+(SymbolicHybridSet a, const SymbolicHybridSet& b);
SymbolicHybridSet operator-(SymbolicHybridSet a, const SymbolicHybridSet& b);
SymbolicHybridSet operator-(const SymbolicHybridSet& a);
SymbolicHybridSet operator*(std::int64_t n, const SymbolicHybridSet& a);

/// Positive coefficients first, then negative, each in name order:
/// `U - A1 - B1`, `2*A`, `0` for the empty combination.
std::string to_string(const SymbolicHybridSet& s);

/// Σ coeff · indicator.
std::int64_t multiplicity(const SymbolicHybridSet& s, const Point& p, const Valuation& v);

/// Concrete hybrid set over the sample points.
HybridSet instantiate(const SymbolicHybridSet& s, const Valuation& v, std::span<const Point> sample,
                      std::string universe = {});

} // namespace hybrid
