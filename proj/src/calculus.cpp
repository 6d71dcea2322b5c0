#include "hybrid/calculus.hpp"

#include <algorithm>
#include <array>
#include <random>

#include "hybrid/checked.hpp"
#include "hybrid/error.hpp"

namespace hybrid {

HybridExpr pointwise_star(const StarOp& star, std::span<const HybridExpr> operands, const Refinement& refinement) {
    const std::size_t n = refinement.pieces.size();
    std::vector<FreeWord> words(n);
    for (const auto& f : operands) {
        if (f.op() != HybridExpr::Op::Join)
            throw ContractError("pointwise_star operands must be unmarked joins");
        // Each operand contributes one word per refinement piece.
        std::vector<FreeWord> mine(n);
        for (const auto& t : f.terms()) {
            const Rewrite* rw = refinement.find(t.region);
            if (!rw)
                throw RefinementError("region " + to_string(t.region) + " is not a piece refined by the refinement");
            for (std::size_t j = 0; j < n; ++j)
                if (rw->coeffs[j] != 0)
                    mine[j] += rw->coeffs[j] * t.value;
        }
        for (std::size_t j = 0; j < n; ++j)
            words[j] += mine[j];
    }
    std::vector<HybridTerm> terms;
    for (std::size_t j = 0; j < n; ++j)
        if (!words[j].empty())
            terms.emplace_back(std::move(words[j]), refinement.pieces[j].set);
    return marked_join(star, std::move(terms));
}

HybridExpr pointwise_star(const StarOp& star, const HybridExpr& f, const HybridExpr& g, const Refinement& refinement) {
    std::vector<HybridExpr> ops{f, g};
    return pointwise_star(star, ops, refinement);
}

HybridExpr pointwise_star(const StarOp& star, std::span<const HybridExpr> operands,
                          std::span<const GeneralisedPartition> partitions) {
    return pointwise_star(star, operands, common_strict_refinement(partitions));
}

HybridExpr pointwise_star(const StarOp& star, const HybridExpr& f, const GeneralisedPartition& fp,
                          const HybridExpr& g, const GeneralisedPartition& gp) {
    std::vector<GeneralisedPartition> parts{fp, gp};
    std::vector<HybridExpr> ops{f, g};
    return pointwise_star(star, ops, common_strict_refinement(parts));
}

HybridExpr pointwise_star(const StarOp& star, const HybridExpr& f, const HybridExpr& g) {
    if (f.op() != HybridExpr::Op::Join || g.op() != HybridExpr::Op::Join)
        throw ContractError("pointwise_star operands must be unmarked joins");
    std::vector<HybridTerm> terms;
    std::vector<bool> used(g.terms().size(), false);
    for (const auto& t : f.terms()) {
        bool matched = false;
        for (std::size_t i = 0; i < g.terms().size(); ++i) {
            if (!used[i] && g.terms()[i].region == t.region) {
                terms.emplace_back(t.value + g.terms()[i].value, t.region);
                used[i] = matched = true;
                break;
            }
        }
        if (!matched)
            throw RefinementError("operands are not over one shared partition; supply a refinement");
    }
    for (bool u : used)
        if (!u)
            throw RefinementError("operands are not over one shared partition; supply a refinement");
    return marked_join(star, std::move(terms));
}

CheckReport star_inverse_identity_check(const StarOp& star, const HybridTerm& f, const Valuation& v,
                                        std::span<const Point> sample) {
    if (!star.has_inverse() || !star.unit || !star.combine)
        throw ContractError("star '" + star.name + "' has no group structure");
    if (f.value.entries().size() != 1 || f.value.entries().front().exponent != 1)
        throw ContractError("the inverse identity needs a single function atom");
    const FunctionAtom& atom = f.value.entries().front().atom;
    CheckReport report;
    report.name = "invert";
    for (const auto& p : sample) {
        std::int64_t m = multiplicity(f.region, p, v);
        // (−f) at this point as a constant atom; only its value matters.
        FunctionAtom neg;
        neg.name = "-" + atom.name;
        if (m != 0)
            neg.body = ScalarExpr::constant(star.inverse(value_at(atom, p, v)));
        else
            neg.body = ScalarExpr::constant(*star.unit);
        HybridExpr lhs = pointwise_star(star, HybridExpr::join_of({f}), HybridExpr::join_of({HybridTerm(neg, f.region)}));
        EvalOutcome got = eval(lhs, p, v);
        std::string where = "at " + to_string(p);
        if (m == 0) {
            report.expect(got.kind == EvalOutcome::Kind::Undefined, where + ": expected undefined, got " +
                                                                        to_string(got, star.symbol));
        } else {
            bool ok = got.kind == EvalOutcome::Kind::Value && got.value.is_scalar() && *got.value.scalar == *star.unit &&
                      got.multiplicity == m;
            report.expect(ok, where + ": expected " + to_string(*star.unit) + " with multiplicity " + std::to_string(m) +
                                  ", got " + to_string(got, star.symbol));
        }
    }
    return report;
}

namespace {

Integer integral_bound(const ParamExpr& e, const Valuation& v) {
    Rational r = e.eval(v);
    if (!is_integer(r))
        throw ContractError("summation bound " + to_string(e) + " = " + to_string(r) + " is not an integer");
    return numerator(r);
}

Rational at_integer(const FunctionAtom& f, const Integer& i, const Valuation& v) {
    return value_at(f, Point{Rational(i)}, v);
}

} // namespace

Rational karr_sum(const Integer& lower, const Integer& upper, const std::function<Rational(const Integer&)>& f) {
    if (upper < lower)
        return -karr_sum(upper, lower, f);
    Rational total = 0;
    for (Integer i = lower; i < upper; ++i)
        total += f(i);
    return total;
}

Rational karr_sum(const KarrSum& s, const Valuation& v) {
    Integer lo = integral_bound(s.lower, v);
    Integer hi = integral_bound(s.upper, v);
    return karr_sum(lo, hi, [&](const Integer& i) { return at_integer(s.summand, i, v); });
}

CheckReport karr_split_check(const FunctionAtom& f, const Integer& l, const Integer& m, const Integer& n,
                             const Valuation& v) {
    CheckReport report;
    report.name = "karr";
    auto fv = [&](const Integer& i) { return at_integer(f, i, v); };
    auto diff = [&](const Integer& i) { return Rational(fv(i + 1) - fv(i)); };
    std::string triple = "(" + l.str() + ", " + m.str() + ", " + n.str() + ")";

    Rational whole = karr_sum(l, n, fv);
    Rational split = karr_sum(l, m, fv) + karr_sum(m, n, fv);
    report.expect(whole == split, "split " + triple + ": " + to_string(whole) + " != " + to_string(split));

    const std::pair<Integer, Integer> pairs[] = {{l, n}, {l, m}, {m, n}};
    for (const auto& [a, b] : pairs) {
        Rational lhs = karr_sum(a, b, diff);
        Rational rhs = fv(b) - fv(a);
        report.expect(lhs == rhs, "telescoping (" + a.str() + ", " + b.str() + "): " + to_string(lhs) +
                                      " != " + to_string(rhs));
    }
    return report;
}

CheckReport karr_split_suite(const FunctionAtom& f, std::size_t trials, std::uint64_t seed, std::int64_t lo,
                             std::int64_t hi, const Valuation& v) {
    CheckReport report;
    report.name = "karr";
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> dist(lo, hi);
    for (std::size_t t = 0; t < trials; ++t) {
        std::array<std::int64_t, 3> b{dist(rng), dist(rng), dist(rng)};
        std::sort(b.begin(), b.end());
        // Permutation t mod 6 of the sorted triple, so every ordering occurs.
        for (std::size_t k = 0; k < t % 6; ++k)
            std::next_permutation(b.begin(), b.end());
        CheckReport one = karr_split_check(f, b[0], b[1], b[2], v);
        report.checks += one.checks;
        report.violations.insert(report.violations.end(), one.violations.begin(), one.violations.end());
    }
    return report;
}

LinearOperatorSpec finite_summation() {
    return {"sum", [](const std::function<Rational(const Point&)>& w, std::span<const Point> sample) {
                Rational total = 0;
                for (const auto& p : sample)
                    total += w(p);
                return total;
            }};
}

bool additivity_self_test(const LinearOperatorSpec& op) {
    if (!op.apply)
        return false;
    std::vector<Point> probe;
    for (int i = -3; i <= 3; ++i)
        probe.push_back(Point{Rational(i, 2)});
    auto w1 = [](const Point& p) { return Rational(p[0] * p[0] + 1); };
    auto w2 = [](const Point& p) { return Rational(3 - 2 * p[0]); };
    Rational c(7, 3);
    Rational l1 = op.apply(w1, probe);
    Rational l2 = op.apply(w2, probe);
    Rational sum = op.apply([&](const Point& p) { return Rational(w1(p) + w2(p)); }, probe);
    Rational scaled = op.apply([&](const Point& p) { return Rational(c * w1(p)); }, probe);
    return sum == l1 + l2 && scaled == c * l1;
}

OperatorRegistry::OperatorRegistry() { ops_.emplace("sum", finite_summation()); }

void OperatorRegistry::add(LinearOperatorSpec op) {
    if (!op.apply)
        throw ContractError("linear operator '" + op.name + "' has no implementation");
    if (!additivity_self_test(op))
        throw ContractError("linear operator '" + op.name + "' failed the additivity self-test");
    ops_.insert_or_assign(op.name, std::move(op));
}

const LinearOperatorSpec& OperatorRegistry::get(const std::string& name) const {
    auto it = ops_.find(name);
    if (it == ops_.end())
        throw ContractError("undeclared linear operator '" + name + "'");
    return it->second;
}

Rational apply_linear(const LinearOperatorSpec& op, const HybridTerm& f, const Valuation& v,
                      std::span<const Point> sample) {
    if (!op.apply)
        throw ContractError("linear operator '" + op.name + "' has no implementation");
    if (f.value.entries().size() != 1 || f.value.entries().front().exponent != 1)
        throw ContractError("apply_linear needs a term over a single function atom");
    const FunctionAtom& atom = f.value.entries().front().atom;
    return op.apply(
        [&](const Point& p) -> Rational {
            std::int64_t m = multiplicity(f.region, p, v);
            return m == 0 ? Rational(0) : Rational(m * value_at(atom, p, v));
        },
        sample);
}

CheckReport linear_additivity_check(const LinearOperatorSpec& op, const FunctionAtom& f,
                                    std::span<const SymbolicHybridSet> pieces, const Valuation& v,
                                    std::span<const Point> sample) {
    CheckReport report;
    report.name = "linear";
    SymbolicHybridSet whole;
    Rational parts = 0;
    for (const auto& piece : pieces) {
        whole += piece;
        parts += apply_linear(op, HybridTerm(f, piece), v, sample);
    }
    Rational total = apply_linear(op, HybridTerm(f, whole), v, sample);
    report.expect(total == parts, op.name + "(" + f.name + "^{" + to_string(whole) + "}) = " + to_string(total) +
                                      " but the pieces give " + to_string(parts));
    return report;
}

} // namespace hybrid
