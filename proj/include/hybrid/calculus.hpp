#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hybrid/hybrid_function.hpp"
#include "hybrid/refine.hpp"

namespace hybrid {

/// Rewrites every operand term onto the refinement pieces and joins the
/// operands' words piece by piece, giving one marked term per covered piece.
/// Operands must be unmarked joins whose regions are original pieces of the
/// refinement (RefinementError otherwise).
HybridExpr pointwise_star(const StarOp& star, std::span<const HybridExpr> operands, const Refinement& refinement);
HybridExpr pointwise_star(const StarOp& star, const HybridExpr& f, const HybridExpr& g, const Refinement& refinement);

/// Uses the canonical refinement of the operands' partitions.
HybridExpr pointwise_star(const StarOp& star, std::span<const HybridExpr> operands,
                          std::span<const GeneralisedPartition> partitions);
HybridExpr pointwise_star(const StarOp& star, const HybridExpr& f, const GeneralisedPartition& fp,
                          const HybridExpr& g, const GeneralisedPartition& gp);

/// Operands over one shared partition (same regions): piecewise star, no
/// refinement needed.
HybridExpr pointwise_star(const StarOp& star, const HybridExpr& f, const HybridExpr& g);

struct CheckReport {
    std::string name;
    std::size_t checks = 0;
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
    void expect(bool condition, const std::string& what) {
        ++checks;
        if (!condition)
            violations.push_back(what);
    }
};

/// (f^P ⋆ (−f)^P)(x) = P(x)·⟬(x, e)¹⟭ at every sample point: undefined where
/// P(x) = 0, otherwise the unit with multiplicity P(x). `f` must be a single
/// atom with a body; the star must have an inverse and a unit.
CheckReport star_inverse_identity_check(const StarOp& star, const HybridTerm& f, const Valuation& v,
                                        std::span<const Point> sample);

/// Σ_{lower ≤ i < upper} summand(i), with Σ_{m≤i<n} = −Σ_{n≤i<m} when n < m.
struct KarrSum {
    ParamExpr lower;
    ParamExpr upper;
    FunctionAtom summand;
};

/// Bounds must evaluate to integers (ContractError otherwise).
Rational karr_sum(const KarrSum& s, const Valuation& v);

/// Karr's convention over an arbitrary summand.
Rational karr_sum(const Integer& lower, const Integer& upper, const std::function<Rational(const Integer&)>& f);

/// Split identity Σ_{ℓ≤i<n} = Σ_{ℓ≤i<m} + Σ_{m≤i<n}, and telescoping
/// Σ_{a≤i<b}(f(i+1) − f(i)) = f(b) − f(a) for the three bound pairs.
CheckReport karr_split_check(const FunctionAtom& f, const Integer& l, const Integer& m, const Integer& n,
                             const Valuation& v = {});

/// Random (ℓ, m, n) in [lo, hi], cycling through all six orderings.
CheckReport karr_split_suite(const FunctionAtom& f, std::size_t trials, std::uint64_t seed, std::int64_t lo = -20,
                             std::int64_t hi = 20, const Valuation& v = {});

/// A linear operator applied to x ↦ w(x) over a finite sample domain.
struct LinearOperatorSpec {
    std::string name;
    std::function<Rational(const std::function<Rational(const Point&)>&, std::span<const Point>)> apply;
};

/// Σ_{x in sample} w(x).
LinearOperatorSpec finite_summation();

/// L(w1 + w2) = L(w1) + L(w2) and L(c·w) = c·L(w) on probe functions.
bool additivity_self_test(const LinearOperatorSpec& op);

/// Named operators; `sum` is always present. Adding an operator runs the
/// additivity self-test.
class OperatorRegistry {
  public:
    OperatorRegistry();

    /// Throws ContractError when `apply` is missing or the self-test fails.
    void add(LinearOperatorSpec op);

    /// Throws ContractError for an undeclared name.
    const LinearOperatorSpec& get(const std::string& name) const;

  private:
    std::map<std::string, LinearOperatorSpec> ops_;
};

/// L(f^P) = L(x ↦ P(x)·f(x)) over the sample. f is evaluated only where
/// P(x) ≠ 0.
Rational apply_linear(const LinearOperatorSpec& op, const HybridTerm& f, const Valuation& v,
                      std::span<const Point> sample);

/// L(f^P) = Σ_i L(f^{P_i}) where P = ⊕ pieces.
CheckReport linear_additivity_check(const LinearOperatorSpec& op, const FunctionAtom& f,
                                    std::span<const SymbolicHybridSet> pieces, const Valuation& v,
                                    std::span<const Point> sample);

} // namespace hybrid
