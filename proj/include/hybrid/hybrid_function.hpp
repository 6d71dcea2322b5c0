#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hybrid/regions.hpp"
#include "hybrid/scalar_expr.hpp"

namespace hybrid {

/// Knot pair of a spline segment; segment atoms are identified by it.
struct KnotPair {
    ParamExpr lo, hi;
    bool operator==(const KnotPair&) const = default;
};

/// A named function. Opaque when it has no body; opaque atoms only take part
/// in formal results.
struct FunctionAtom {
    std::string name;
    std::optional<ScalarExpr> body;
    std::optional<KnotPair> knots;

    static FunctionAtom opaque(std::string name) { return {std::move(name), std::nullopt, std::nullopt}; }
    static FunctionAtom with_body(std::string name, std::string_view body) {
        return {std::move(name), ScalarExpr::parse(body), std::nullopt};
    }
    static FunctionAtom constant(std::string name, Rational value) {
        return {std::move(name), ScalarExpr::constant(std::move(value)), std::nullopt};
    }

    bool operator==(const FunctionAtom&) const = default;
};

/// f(p) for a one-dimensional point (x = the coordinate) or any point when
/// the body does not use x. Throws OpacityError for opaque atoms.
Rational value_at(const FunctionAtom& f, const Point& p, const Valuation& v);

/// Element of the free abelian group over function atoms. Entries keep their
/// first-insertion order for printing; equality ignores order.
class FreeWord {
  public:
    struct Entry {
        FunctionAtom atom;
        std::int64_t exponent;
    };

    FreeWord() = default;
    FreeWord(const FunctionAtom& atom, std::int64_t exponent = 1) { add(atom, exponent); }
    FreeWord(std::initializer_list<FunctionAtom> atoms) {
        for (const auto& a : atoms)
            add(a, 1);
    }

    void add(const FunctionAtom& atom, std::int64_t exponent);
    std::int64_t exponent(const std::string& name) const;

    const std::vector<Entry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

    FreeWord& operator+=(const FreeWord& o);
    bool operator==(const FreeWord& o) const;

  private:
    std::vector<Entry> entries_;
};

FreeWord operator+(FreeWord a, const FreeWord& b);
FreeWord operator*(std::int64_t n, const FreeWord& w);

/// Atoms joined by `separator`, non-unit exponents as `f^-1`.
std::string to_string(const FreeWord& w, std::string_view separator);

/// f^A in unevaluated (pseudo-function) form.
struct HybridTerm {
    FreeWord value;
    SymbolicHybridSet region;

    HybridTerm(FreeWord w, SymbolicHybridSet r);
    HybridTerm(const FunctionAtom& f, SymbolicHybridSet r) : HybridTerm(FreeWord(f), std::move(r)) {}

    bool operator==(const HybridTerm&) const = default;
};

/// A binary operation on scalars used to mark a join. `combine` may be empty,
/// in which case folds stay formal (spline merges).
struct StarOp {
    std::string name;
    std::string symbol;
    std::function<Rational(const Rational&, const Rational&)> combine;
    std::optional<Rational> unit;
    std::function<Rational(const Rational&)> inverse;
    bool associative_commutative = true;
    bool idempotent = false;

    bool has_inverse() const { return bool(inverse); }

    static StarOp plus();
    static StarOp times();
    static StarOp merge();
    static StarOp max();
    static StarOp min();

    /// `+`, `*`, `merge`, `max`, `min`; nullopt otherwise.
    static std::optional<StarOp> builtin(std::string_view name);

    bool operator==(const StarOp& o) const { return name == o.name; }
};

class HybridExpr {
  public:
    enum class Op { Join, MarkedJoin };

    HybridExpr() = default;
    static HybridExpr join_of(std::vector<HybridTerm> terms);
    static HybridExpr marked_of(StarOp star, std::vector<HybridTerm> terms);

    Op op() const { return op_; }
    const std::optional<StarOp>& star() const { return star_; }
    const std::vector<HybridTerm>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    bool operator==(const HybridExpr&) const = default;

  private:
    Op op_ = Op::Join;
    std::optional<StarOp> star_;
    std::vector<HybridTerm> terms_;
};

/// Concatenates and then reduces formally (equal value words merge by ⊕ on
/// their regions, vanished regions drop). Both operands must be unmarked.
HybridExpr join(const HybridExpr& a, const HybridExpr& b);
HybridExpr join(const HybridTerm& a, const HybridTerm& b);
HybridExpr join(const HybridExpr& a, const HybridTerm& b);
HybridExpr join(const HybridTerm& a, const HybridExpr& b);

/// No merging of terms. Throws ContractError unless the star is declared
/// associative and commutative.
HybridExpr marked_join(const StarOp& star, std::vector<HybridTerm> terms);

/// Merges terms with equal value words (first occurrence keeps its place) and
/// drops terms whose region is formally empty. Evaluation is unchanged.
HybridExpr reduce_formally(const HybridExpr& e);

/// True when both expressions have the same terms up to order.
bool same_terms(const HybridExpr& a, const HybridExpr& b);

/// Scalar part (folded bodies) and the formal residue of opaque atoms.
struct FormalValue {
    std::optional<Rational> scalar;
    std::vector<FreeWord::Entry> residue;

    bool is_scalar() const { return scalar.has_value() && residue.empty(); }
    bool operator==(const FormalValue& o) const;
};

std::string to_string(const FormalValue& v, std::string_view separator);

struct EvalOutcome {
    enum class Kind { Undefined, Value, Relation };

    Kind kind = Kind::Undefined;
    FormalValue value;
    std::int64_t multiplicity = 0;
    /// Distinct values with their net multiplicities when Kind::Relation.
    std::vector<std::pair<FormalValue, std::int64_t>> relation;
    /// Σ m_t · word_t in first-appearance order.
    FreeWord reduced;

    bool defined() const { return kind == Kind::Value; }
};

/// Reduces Σ m_t·word_t in the free abelian group, then interprets it.
/// Unmarked joins read it as a graph: one value with net multiplicity 1 is an
/// ordinary function value. Marked joins fold the surviving atoms with the
/// star; exponents outside {0, 1} need an inverse (or idempotence for
/// positive exponents), otherwise NonEvaluable is thrown.
EvalOutcome eval(const HybridExpr& e, const Point& p, const Valuation& v);

std::string to_string(const EvalOutcome& o, std::string_view separator);

/// Separator used when printing words of `e`: the star symbol for marked
/// joins, `·` otherwise.
std::string word_separator(const HybridExpr& e);

/// Every sampled point evaluates to undefined or to one value with
/// multiplicity 1.
bool is_reducible(const HybridExpr& e, const Valuation& v, std::span<const Point> sample);

/// The graph ⊕_x m(x)·⟬(x, value)¹⟭ over the sample, one element per atom of
/// each term word. With `evaluate` the value is f(x) (bodies required);
/// otherwise it is the atom name, i.e. the pseudo-function.
HybridSet hybrid_graph(const HybridExpr& e, const Valuation& v, std::span<const Point> sample, bool evaluate = true);

/// `f^{A1} ⊛ g^{U - A1}`, `(D1 + D2)^{P} ⊛[+] ...`; `∅` for no terms.
std::string to_string(const HybridExpr& e);

} // namespace hybrid
