// Acceptance runner: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <exception>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"

using namespace hybrid;

namespace {

struct Verdict {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

bool run_criterion(int id, const std::string& title, double limit_s, const std::function<Verdict()>& body) {
    auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = body();
    } catch (const std::exception& e) {
        v.ok = false;
        v.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_time = limit_s <= 0 || secs < limit_s;
    bool pass = v.ok && in_time;
    std::ostringstream line;
    line << (pass ? "PASS" : "FAIL") << "  " << id << " " << title << ": " << v.detail;
    line << std::fixed << std::setprecision(3) << " (" << secs << " s";
    if (limit_s > 0)
        line << ", limit " << std::setprecision(0) << limit_s << " s";
    line << ")";
    if (!in_time)
        line << " too slow";
    std::cout << line.str() << std::endl;
    return pass;
}

std::int64_t cell_coord(const Rational& r) { return static_cast<std::int64_t>(numerator(r)); }

// Singleton region atoms over the points 1..k.
struct SmallUniverse {
    std::vector<Point> pts;
    std::vector<RegionAtom> atoms;
    RegionAtom universe;

    explicit SmallUniverse(int k) {
        FinitePointSet all;
        for (int i = 1; i <= k; ++i) {
            pts.push_back(Point{Rational(i)});
            atoms.push_back({"X" + std::to_string(i), FinitePointSet{{Point{Rational(i)}}}});
            all.points.push_back(Point{Rational(i)});
        }
        universe = {"U", all};
    }

    SymbolicHybridSet random_set(std::mt19937_64& rng, int lo, int hi) const {
        std::uniform_int_distribution<int> c(lo, hi);
        SymbolicHybridSet s;
        for (const auto& a : atoms)
            s.add(a, c(rng));
        return s;
    }
};

HybridSet graph_of(std::vector<HybridTerm> terms, std::span<const Point> pts, bool evaluate = true) {
    return hybrid_graph(HybridExpr::join_of(std::move(terms)), {}, pts, evaluate);
}

Verdict zmodule_laws() {
    Verdict v;
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> sc(-5, 5);
    std::vector<HybridSet> sets;
    for (int i = 0; i < 1000; ++i)
        sets.push_back(fixtures::random_set(rng, 10));
    std::size_t identities = 0;
    auto expect = [&](bool c, const char* law) {
        ++identities;
        v.require(c, std::string("law violated: ") + law);
    };
    for (std::size_t i = 0; i < sets.size(); ++i) {
        const HybridSet& a = sets[i];
        const HybridSet& b = sets[(i + 1) % sets.size()];
        const HybridSet& c = sets[(i + 7) % sets.size()];
        int m = sc(rng), n = sc(rng);
        expect((a + b) + c == a + (b + c), "associativity");
        expect(a + b == b + a, "commutativity");
        expect(a + HybridSet{} == a, "identity");
        expect((a + (-a)).empty(), "inverse");
        expect(a - b == a + (-b), "subtraction");
        expect(m * (a + b) == m * a + m * b, "scalar over sum");
        expect((m + n) * a == m * a + n * a, "sum of scalars");
        expect((m * n) * a == m * (n * a), "scalar associativity");
        expect(1 * a == a && (0 * a).empty(), "unit scalar");
        expect(otimes(a, b + c) == otimes(a, b) + otimes(a, c), "otimes distributes");
        HybridSet ab = a + b;
        for (const auto& [x, mult] : ab.entries())
            expect(mult == a(x) + b(x), "pointwise sum");
    }
    if (v.ok)
        v.detail = "1000 random sets over 10 tokens, " + std::to_string(identities) + " identities";
    return v;
}

Verdict join_identities() {
    Verdict v;
    std::mt19937_64 rng(2);
    SmallUniverse su(6);
    FunctionAtom f = FunctionAtom::with_body("f", "x + 1");
    FunctionAtom g = FunctionAtom::with_body("g", "x + 100");
    FunctionAtom f1 = FunctionAtom::with_body("f1", "2*x");
    FunctionAtom f2 = FunctionAtom::with_body("f2", "x*x");
    std::vector<Point> sample = su.pts;
    sample.push_back(Point{Rational(0)});
    sample.push_back(Point{Rational(7)});

    // (f ⊛ g)^{A ⊕ B} with f, g the classical partial functions on supp A, supp B
    auto classical_side = [&](const FunctionAtom& fa, const SymbolicHybridSet& a, const FunctionAtom& ga,
                              const SymbolicHybridSet& b) {
        using X = Rational;
        auto in = [](const SymbolicHybridSet& s) {
            return oracle::Predicate<X>([s](const X& x) { return multiplicity(s, Point{x}, {}) != 0; });
        };
        auto lift = [](const FunctionAtom& h) {
            return oracle::total<X, Rational>([h](const X& x) { return value_at(h, Point{x}, {}); });
        };
        auto joined = oracle::join<X, Rational>(oracle::restrict<X, Rational>(lift(fa), in(a)),
                                                oracle::restrict<X, Rational>(lift(ga), in(b)));
        HybridSet out;
        for (const auto& p : sample) {
            std::int64_t m = multiplicity(a + b, p, {});
            auto y = joined(p[0]);
            if (m != 0 && y)
                out.add(Element(Element(p), to_string(*y)), m);
        }
        return out;
    };

    std::size_t iff_true = 0, iff_false = 0;
    for (int t = 0; t < 200; ++t) {
        SymbolicHybridSet a = su.random_set(rng, -2, 2), b = su.random_set(rng, -2, 2);

        // f^0 is the empty function
        HybridExpr empty = HybridExpr::join_of({HybridTerm(f, SymbolicHybridSet{})});
        v.require(hybrid_graph(empty, {}, sample).empty(), "empty region: f^0 has a non-empty graph");
        for (const auto& p : sample)
            v.require(eval(empty, p, {}).kind == EvalOutcome::Kind::Undefined, "empty region: f^0 defined somewhere");

        // f^A join f^A = f^{2A}
        v.require(graph_of({HybridTerm(f, a), HybridTerm(f, a)}, sample) == graph_of({HybridTerm(f, 2 * a)}, sample),
                  "doubling: f^A join f^A differs from f^{2A}");
        v.require(join(HybridTerm(f, a), HybridTerm(f, a)).terms() == std::vector<HybridTerm>{HybridTerm(f, 2 * a)} ||
                      a.empty(),
                  "doubling: formal join is not f^{2A}");

        // f^A join f^B = f^{A+B}, a function
        HybridExpr fab = HybridExpr::join_of({HybridTerm(f, a), HybridTerm(f, b)});
        v.require(hybrid_graph(fab, {}, sample) == graph_of({HybridTerm(f, a + b)}, sample),
                  "same function: f^A join f^B differs from f^{A+B}");
        for (const auto& p : sample)
            v.require(eval(fab, p, {}).kind != EvalOutcome::Kind::Relation, "same function: join of f with f is a relation");

        // f^A join g^B = (f join g)^{A+B} exactly when the supports are disjoint
        SymbolicHybridSet a4, b4;
        bool allow_overlap = t % 2 == 0;
        std::uniform_int_distribution<int> which(0, allow_overlap ? 3 : 2), mult(1, 2), sign(0, 1);
        for (const auto& x : su.atoms) {
            int w = which(rng);
            auto m = [&] { return static_cast<std::int64_t>(mult(rng) * (sign(rng) ? 1 : -1)); };
            if (w == 1 || w == 3)
                a4.add(x, m());
            if (w == 2 || w == 3)
                b4.add(x, m());
        }
        bool disjoint_supports = true;
        for (const auto& p : sample)
            disjoint_supports = disjoint_supports && !(multiplicity(a4, p, {}) != 0 && multiplicity(b4, p, {}) != 0);
        bool equal = graph_of({HybridTerm(f, a4), HybridTerm(g, b4)}, sample) == classical_side(f, a4, g, b4);
        v.require(equal == disjoint_supports, "different functions: equality does not track disjointness");
        (disjoint_supports ? iff_true : iff_false)++;

        // disjoint supports, functions defined only there
        SymbolicHybridSet h1, h2;
        for (const auto& x : su.atoms) {
            int w = which(rng) % 3;
            if (w == 1)
                h1.add(x, mult(rng) * (sign(rng) ? 1 : -1));
            if (w == 2)
                h2.add(x, mult(rng) * (sign(rng) ? 1 : -1));
        }
        v.require(graph_of({HybridTerm(f1, h1), HybridTerm(f2, h2)}, sample) == classical_side(f1, h1, f2, h2),
                  "disjoint supports: disjoint join differs from the classical join");
    }
    v.require(iff_true > 20 && iff_false > 20, "different functions: one direction was barely exercised");
    if (v.ok)
        v.detail = "200 instances per identity; f^A join g^B equal on " + std::to_string(iff_true) +
                   " disjoint cases, unequal on " + std::to_string(iff_false) + " overlapping cases";
    return v;
}

Verdict refinement_cardinality() {
    Verdict v;
    v.require(min_refinement_size(std::vector<std::int64_t>{4, 4}) == 7, "size for [4,4] is not 7");
    for (std::int64_t r = 1; r <= 6; ++r)
        for (std::int64_t n = 1; n <= 6; ++n)
            v.require(min_refinement_size(std::vector<std::int64_t>(static_cast<std::size_t>(r), n)) == r * (n - 1) + 1,
                      "size differs from r(n-1)+1 at r=" + std::to_string(r) + ", n=" + std::to_string(n));
    for (std::int64_t n = 1; n <= 12; ++n) {
        std::vector<std::int64_t> sizes{n};
        auto un = static_cast<std::size_t>(n);
        ChoiceMatrix top = canonical_choice_matrix(sizes, ChoiceStyle::OnesOnTopRow);
        ChoiceMatrix upper = canonical_choice_matrix(sizes, ChoiceStyle::FullUpperTriangle);
        v.require(determinant(top) == 1 && determinant(upper) == 1, "determinant not 1 at size " + std::to_string(n));
        ChoiceMatrix ti = integer_inverse(top), ui = integer_inverse(upper);
        v.require(top * ti == ChoiceMatrix::identity(un) && upper * ui == ChoiceMatrix::identity(un),
                  "inverse check failed at size " + std::to_string(n));
        for (std::size_t i = 0; i < un; ++i)
            for (std::size_t j = 0; j < un; ++j) {
                std::int64_t want_top = i == 0 ? (j == 0 ? 1 : -1) : (i == j ? 1 : 0);
                std::int64_t want_upper = i == j ? 1 : (j == i + 1 ? -1 : 0);
                v.require(ti(i, j) == want_top, "top-row inverse pattern wrong at size " + std::to_string(n));
                v.require(ui(i, j) == want_upper, "upper inverse pattern wrong at size " + std::to_string(n));
            }
    }
    ChoiceMatrix c44 = canonical_choice_matrix(std::vector<std::int64_t>{4, 4});
    v.require(c44.size() == 7 && determinant(c44) == 1, "[4,4] canonical matrix is not 7x7 unimodular");
    if (v.ok)
        v.detail = "[4,4] gives 7, r(n-1)+1 for r,n <= 6, det 1 and inverse patterns for sizes 1..12";
    return v;
}

Verdict step_product() {
    Verdict v;
    fixtures::Mult0 ex;
    HybridExpr fg = ex.product();
    const auto& ts = fg.terms();
    v.require(ts.size() == 3, "expected 3 terms, got " + std::to_string(ts.size()));
    if (!v.ok)
        return v;
    v.require(fg.star() && fg.star()->name == "*", "not a product join");
    v.require(ts[0].region == SymbolicHybridSet(ex.A1) && ts[1].region == SymbolicHybridSet(ex.B1) - ex.A1 &&
                  ts[2].region == SymbolicHybridSet(ex.B2),
              "regions are not A1, B1 - A1, B2");
    v.require(ts[0].value == FreeWord{ex.f1, ex.g1}, "first term is not 2*5");
    v.require(ts[2].value == FreeWord{ex.f2, ex.g2}, "last term is not 0*7");
    v.require(ts[1].value == FreeWord{ex.f2, ex.g1}, "middle term is not 0*5");

    // the middle term written as 2*5 instead
    HybridExpr literal = marked_join(StarOp::times(), {ts[0], HybridTerm(FreeWord{ex.f1, ex.g1}, ts[1].region), ts[2]});

    std::vector<std::pair<Rational, Rational>> cases{{Rational(1, 4), Rational(3, 5)},
                                                    {Rational(3, 5), Rational(1, 4)},
                                                    {Rational(1, 2), Rational(1, 2)},
                                                    {Rational(3, 2), Rational(1, 2)},
                                                    {Rational(1, 3), Rational(5, 4)}};
    auto pts = fixtures::grid(0, 1, 100);
    std::size_t literal_wrong = 0, partitions_checked = 0;
    for (const auto& [a, b] : cases) {
        Valuation val{{"a", a}, {"b", b}};
        v.require(partition_holds(ex.fp(), val, pts) && partition_holds(ex.gp(), val, pts),
                  "assumed partitions fail under a valuation");
        ++partitions_checked;
        for (const auto& p : pts) {
            Rational want = fixtures::Mult0::oracle(p[0], a, b);
            EvalOutcome o = eval(fg, p, val);
            v.require(o.defined() && o.value.is_scalar() && *o.value.scalar == want && o.multiplicity == 1,
                      "oracle mismatch at x=" + to_string(p[0]));
            EvalOutcome lo = eval(literal, p, val);
            if (!(lo.defined() && lo.value.is_scalar() && *lo.value.scalar == want))
                ++literal_wrong;
        }
    }
    if (v.ok)
        v.detail = "3 terms (2*5 on A1, 0*5 on B1 - A1, 0*7 on B2), exact on 100 points for a<b, a>b, a=b, a>1, "
                   "b>1; middle term is 0*5 because f = 0 on B1 - A1 (writing it as 2*5 disagrees with the oracle "
                   "at " +
                   std::to_string(literal_wrong) + " of 500 points)";
    return v;
}

Valuation dims(int h1, int h2, int k1, int k2) {
    return {{"n", 8}, {"m", 8}, {"h1", h1}, {"h2", h2}, {"k1", k1}, {"k2", k2}};
}

Verdict matrix_addition() {
    Verdict v;
    auto m1 = fixtures::demo_m1(), m2 = fixtures::demo_m2();
    HybridExpr e = matrix_add(m1, m2);
    v.require(e.terms().size() == 7, "expected 7 terms, got " + std::to_string(e.terms().size()));
    if (!v.ok)
        return v;
    auto blk = [](const SymbolicBlockMatrix& m, std::size_t i) { return m.blocks[i]; };
    // blocks are A, B, C, D
    SymbolicHybridSet p1(m1.universe());
    for (std::size_t i = 0; i < 3; ++i)
        p1 = p1 - blk(m1, i).region - blk(m2, i).region;
    std::vector<HybridTerm> want{HybridTerm(FreeWord{blk(m1, 3).symbol, blk(m2, 3).symbol}, p1)};
    for (std::size_t i = 0; i < 3; ++i)
        want.emplace_back(FreeWord{blk(m1, i).symbol, blk(m2, 3).symbol}, SymbolicHybridSet(blk(m1, i).region));
    for (std::size_t i = 0; i < 3; ++i)
        want.emplace_back(FreeWord{blk(m1, 3).symbol, blk(m2, i).symbol}, SymbolicHybridSet(blk(m2, i).region));
    v.require(e.terms() == want && e.star()->name == "+", "terms differ from the seven-term sum: " + to_string(e));

    Valuation rows_first = dims(2, 5, 4, 6);
    EvalOutcome c1 = matrix_eval_cell(e, 4, 1, rows_first);
    v.require(to_string(c1, " + ") == "B1 + A2", "cell (4,1) with h1<h2 is " + to_string(c1, " + "));
    std::int64_t covered = 0;
    for (std::size_t i = 0; i < 3; ++i)
        covered += indicator(blk(m1, i).region, Point{4, 1}, rows_first) +
                   indicator(blk(m2, i).region, Point{4, 1}, rows_first);
    std::int64_t p1_mult = multiplicity(e.terms()[0].region, Point{4, 1}, rows_first);
    v.require(p1_mult == -1 && p1_mult == 1 - covered, "P1 multiplicity at (4,1) is not -1");
    EvalOutcome c2 = matrix_eval_cell(e, 4, 1, dims(5, 2, 4, 6));
    v.require(to_string(c2, " + ") == "A1 + B2", "cell (4,1) with h2<h1 is " + to_string(c2, " + "));
    EvalOutcome c3 = matrix_eval_cell(e, 8, 8, rows_first);
    v.require(to_string(c3, " + ") == "D1 + D2", "cell (8,8) is " + to_string(c3, " + "));

    std::vector<SymbolicBlockMatrix> ms{m1, m2};
    std::array<int, 4> vals{2, 3, 5, 6};
    int orderings = 0;
    do {
        Valuation val = dims(vals[0], vals[1], vals[2], vals[3]);
        v.require(partition_holds(m1.partition(), val, fixtures::cells(8, 8)) &&
                      partition_holds(m2.partition(), val, fixtures::cells(8, 8)),
                  "block layout does not partition the grid");
        for (const auto& p : fixtures::cells(8, 8)) {
            auto i = cell_coord(p[0]), j = cell_coord(p[1]);
            EvalOutcome o = matrix_eval_cell(e, i, j, val);
            v.require(o.defined() && fixtures::residue_of(o) == fixtures::block_oracle(ms, i, j, val),
                      "oracle mismatch at (" + std::to_string(i) + "," + std::to_string(j) + ")");
        }
        ++orderings;
    } while (std::next_permutation(vals.begin(), vals.end()));
    if (v.ok)
        v.detail = "7 terms; B1 + A2 (P1 multiplicity " + std::to_string(p1_mult) +
                   "), A1 + B2, D1 + D2; 8x8 oracle match for " + std::to_string(orderings) + " orderings";
    return v;
}

Verdict spline_merging() {
    Verdict v;
    auto s = fixtures::demo_s(), t = fixtures::demo_t();
    HybridExpr e = spline_merge(s, t);
    std::vector<HybridTerm> want{
        HybridTerm(FreeWord{s.segments[0], t.segments[1]}, SymbolicHybridSet(s.pieces[0])),
        HybridTerm(FreeWord{s.segments[1], t.segments[0]}, SymbolicHybridSet(t.pieces[0])),
        HybridTerm(FreeWord{s.segments[1], t.segments[1]},
                   SymbolicHybridSet(s.universe) - s.pieces[0] - t.pieces[0])};
    v.require(e.terms() == want && e.star()->name == "merge", "terms differ: " + to_string(e));

    Valuation cd{{"a", 0}, {"c", 2}, {"d", 5}, {"b", 8}};
    Valuation dc{{"a", 0}, {"c", 5}, {"d", 2}, {"b", 8}};
    std::array<std::pair<int, std::pair<int, int>>, 3> regions{{{1, {0, 2}}, {3, {2, 5}}, {6, {5, 8}}}};
    for (const auto& [x, iv] : regions) {
        SplineRegion r = spline_eval_region(e, x, cd);
        v.require(r.consistent() && r.segments.size() == 2 && r.interval &&
                      *r.interval == std::pair<Rational, Rational>(iv.first, iv.second),
                  "region at x=" + std::to_string(x) + " is " + to_string(r));
    }
    for (const auto& val : {cd, dc})
        for (const auto& p : fixtures::grid(0, 8, 64)) {
            SplineRegion r = spline_eval_region(e, p[0], val);
            v.require(r.outcome.defined() && r.consistent() && r.residual.empty() && r.segments.size() == 2 &&
                          r.interval && r.interval->first <= p[0] && p[0] <= r.interval->second,
                      "inconsistent merge at x=" + to_string(p[0]));
        }
    v.require(to_string(spline_eval_region(e, 8, cd)) == "S{c,b} ⋈ T{d,b} on [5, 8]", "right end not covered");
    if (v.ok)
        v.detail = "3 terms; a<c<d<b gives [a,c], [c,d], [d,b]; a<d<c<b covers [a,b] with no residual atoms";
    return v;
}

Verdict karr_and_linear() {
    Verdict v;
    std::size_t checks = 0;
    for (const char* body : {"x*x*x - 2*x + 1/3", "5*x*x + 7"}) {
        CheckReport r = karr_split_suite(FunctionAtom::with_body("h", body), 200, 17, -20, 20);
        checks += r.checks;
        v.require(r.ok(), std::string("karr identity failed for ") + body +
                              (r.violations.empty() ? "" : ": " + r.violations.front()));
    }

    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> end(-4, 12), coef(-2, 2), poly(-3, 3);
    RegionAtom u{"U", Interval1D{0, 1, true, true}};
    auto pts = fixtures::grid(Rational(-1, 2), Rational(3, 2), 40);
    LinearOperatorSpec sum = finite_summation();
    std::size_t partitions = 0;
    for (int t = 0; t < 50; ++t) {
        std::vector<RegionAtom> atoms;
        for (int k = 0; k < 3; ++k) {
            int x = end(rng), y = end(rng);
            atoms.push_back({"I" + std::to_string(k), Interval1D{Rational(std::min(x, y), 8), Rational(std::max(x, y), 8),
                                                                  bool(k % 2), bool(t % 2)}});
        }
        SymbolicHybridSet p1, p2;
        for (const auto& a : atoms) {
            p1.add(a, coef(rng));
            p2.add(a, coef(rng));
        }
        std::vector<SymbolicHybridSet> pieces{p1, p2, SymbolicHybridSet(u) - p1 - p2};
        std::string body = std::to_string(poly(rng)) + "*x*x + " + std::to_string(poly(rng)) + "*x + " +
                           std::to_string(poly(rng));
        CheckReport r = linear_additivity_check(sum, FunctionAtom::with_body("w", body), pieces, {}, pts);
        checks += r.checks;
        v.require(r.ok(), "additivity failed for " + body);
        ++partitions;
    }
    if (v.ok)
        v.detail = "200 trials x 2 summands over all 6 orderings in [-20,20]; additivity over " +
                   std::to_string(partitions) + " random 3-piece partitions; " + std::to_string(checks) + " checks";
    return v;
}

ChoiceMatrix random_unimodular(std::mt19937_64& rng, std::size_t n) {
    ChoiceMatrix c = ChoiceMatrix::identity(n);
    if (n < 2)
        return c;
    std::uniform_int_distribution<std::size_t> idx(0, n - 1);
    std::uniform_int_distribution<int> s(-1, 1);
    for (int k = 0; k < 4; ++k) {
        std::size_t i = idx(rng), j = idx(rng);
        if (i == j)
            continue;
        ChoiceMatrix e = ChoiceMatrix::identity(n);
        e(i, j) = s(rng);
        c = c * e;
    }
    return c;
}

Verdict refinement_invariance() {
    Verdict v;
    std::mt19937_64 rng(4);
    SmallUniverse su(5);
    std::vector<Point> sample = su.pts;
    sample.push_back(Point{Rational(0)});
    sample.push_back(Point{Rational(6)});
    FunctionAtom f = FunctionAtom::with_body("f", "x + 1");
    FunctionAtom g = FunctionAtom::with_body("g", "2*x + 3");
    std::uniform_int_distribution<int> npieces(2, 3), expo(-2, 2);
    std::size_t pairs = 0, points = 0;
    while (pairs < 100) {
        std::vector<GeneralisedPartition> parts;
        for (int k = 0; k < 2; ++k) {
            int n = npieces(rng);
            std::vector<SymbolicHybridSet> pieces;
            SymbolicHybridSet rest(su.universe);
            for (int i = 0; i + 1 < n; ++i) {
                pieces.push_back(su.random_set(rng, -1, 1));
                rest -= pieces.back();
            }
            pieces.push_back(rest);
            parts.push_back(make_partition("P" + std::to_string(k), su.universe, pieces));
        }
        std::size_t size = parts[0].pieces.size() + parts[1].pieces.size() - 1;
        ChoiceMatrix c = canonical_choice_matrix(std::vector<std::int64_t>{
                             static_cast<std::int64_t>(parts[0].pieces.size()),
                             static_cast<std::int64_t>(parts[1].pieces.size())}) *
                         random_unimodular(rng, size);
        Refinement r = common_strict_refinement(parts, c);
        auto sets = r.sets();
        for (const auto& rw : r.rewrites) {
            FreeWord w;
            w.add(f, expo(rng));
            w.add(g, expo(rng));
            if (w.empty())
                w.add(f, 1);
            HybridExpr direct = HybridExpr::join_of({HybridTerm(w, rw.original)});
            std::vector<HybridTerm> pieces;
            for (std::size_t j = 0; j < sets.size(); ++j)
                if (rw.coeffs[j] != 0)
                    pieces.emplace_back(w, rw.coeffs[j] * sets[j]);
            HybridExpr refined = HybridExpr::join_of(pieces);
            v.require(hybrid_graph(direct, {}, sample, false) == hybrid_graph(refined, {}, sample, false),
                      "pseudo-function graphs differ");
            for (const auto& p : sample) {
                EvalOutcome a = eval(direct, p, {}), b = eval(refined, p, {});
                v.require(a.kind == b.kind && a.value == b.value && a.multiplicity == b.multiplicity,
                          "evaluation differs at " + to_string(p));
                ++points;
            }
            if (++pairs == 100)
                break;
        }
    }
    if (v.ok)
        v.detail = std::to_string(pairs) + " (term, refinement) pairs under random unimodular choice matrices, " +
                   std::to_string(points) + " point evaluations";
    return v;
}

Verdict step_sum() {
    Verdict v;
    constexpr int n = 10;
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> val(-9, 9);
    RegionAtom u{"U", Interval1D{0, 2, true, true}};
    std::vector<HybridExpr> ops;
    std::vector<GeneralisedPartition> parts;
    std::vector<Rational> zs, as;
    for (int i = 0; i < n; ++i) {
        std::string s = std::to_string(i + 1);
        RegionAtom left{"K" + s, Interval1D{0, "k" + s, true, false}};
        zs.push_back(val(rng));
        as.push_back(val(rng));
        ops.push_back(HybridExpr::join_of({HybridTerm(FunctionAtom::constant("Z" + s, zs.back()), left),
                                           HybridTerm(FunctionAtom::constant("A" + s, as.back()),
                                                      SymbolicHybridSet(u) - left)}));
        parts.push_back(make_partition("S" + s, u, {SymbolicHybridSet(left), SymbolicHybridSet(u) - left}));
    }
    HybridExpr sum = pointwise_star(StarOp::plus(), ops, parts);
    v.require(sum.terms().size() <= n + 1, "expression has " + std::to_string(sum.terms().size()) + " terms");

    auto pts = fixtures::grid(0, 2, 200);
    std::vector<Rational> uni;
    for (const auto& p : pts)
        uni.push_back(p[0]);
    std::vector<Rational> ks;
    for (int i = 1; i <= n; ++i)
        ks.push_back(Rational(i * 2, n + 1));
    std::size_t oracle_pieces = 0;
    for (int round = 0; round < 5; ++round) {
        std::shuffle(ks.begin(), ks.end(), rng);
        Valuation kv;
        for (int i = 0; i < n; ++i)
            kv.set("k" + std::to_string(i + 1), ks[static_cast<std::size_t>(i)]);
        using X = Rational;
        std::vector<oracle::ClassicalPiecewise<X, Rational>> fs;
        for (std::size_t i = 0; i < n; ++i) {
            Rational k = ks[i], z = zs[i], a = as[i];
            fs.push_back({uni,
                          {{[k](const X& x) { return x < k; }, [z](const X&) { return z; }, "Z"},
                           {[k](const X& x) { return x >= k; }, [a](const X&) { return a; }, "A"}}});
        }
        auto classical = oracle::classical_star<X, Rational>([](const Rational& p, const Rational& q) { return p + q; },
                                                             std::span<const oracle::ClassicalPiecewise<X, Rational>>(fs));
        oracle_pieces = std::max(oracle_pieces, classical.pieces.size());
        for (const auto& p : pts) {
            auto want = oracle::classical_eval(classical, p[0]);
            EvalOutcome got = eval(sum, p, kv);
            v.require(want && got.defined() && got.value.is_scalar() && *got.value.scalar == *want &&
                          got.multiplicity == 1,
                      "mismatch at x=" + to_string(p[0]));
        }
    }
    if (v.ok)
        v.detail = std::to_string(sum.terms().size()) + " terms for 10 step functions; oracle kept " +
                   std::to_string(oracle_pieces) + " non-empty of 1024 candidate cases; 200 points x 5 orderings agree";
    return v;
}

} // namespace

int main() {
    bool all = true;
    all &= run_criterion(1, "z-module laws", 1, zmodule_laws);
    all &= run_criterion(2, "join identities", 1, join_identities);
    all &= run_criterion(3, "refinement cardinality", 0, refinement_cardinality);
    all &= run_criterion(4, "step function product", 1, step_product);
    all &= run_criterion(5, "block matrix addition", 2, matrix_addition);
    all &= run_criterion(6, "spline merge", 0, spline_merging);
    all &= run_criterion(7, "karr sums and linearity", 0, karr_and_linear);
    all &= run_criterion(8, "refinement invariance", 0, refinement_invariance);
    all &= run_criterion(9, "linear term growth", 5, step_sum);
    return all ? 0 : 1;
}
