#include "hybrid/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include "hybrid/apps.hpp"
#include "hybrid/calculus.hpp"
#include "hybrid/error.hpp"
#include "hybrid/workspace.hpp"

namespace hybrid::cli {

namespace {

using json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Options {
    std::string workspace;
    std::string format = "text";
    std::string with;
    std::vector<std::string> at;
    std::string sample;

    // eval
    std::string expr;
    // refine
    std::vector<std::string> parts;
    std::string matrix_file;
    std::string style;
    // matrix-add, spline-merge
    std::vector<std::string> operands;
    std::string cell;
    bool table = false;
    // check
    std::string fn;
    std::string target;
    std::string star = "+";
    std::string op = "sum";
    std::size_t trials = 200;
    std::uint64_t seed = 1;
    std::int64_t lo = -20, hi = 20;
};

class Runner {
  public:
    Runner(const Options& o, std::ostream& out) : o_(o), out_(out) {
        if (!o.workspace.empty()) {
            try {
                ws_ = parse_workspace(read_file(o.workspace));
            } catch (const ParseError& e) {
                throw ParseError(e.line(), e.column(), o.workspace + ":" + e.what());
            }
        }
    }

    bool json_lines() const { return o_.format == "json-lines"; }

    Valuation valuation() const {
        if (o_.with.empty())
            return {};
        if (o_.with.find('=') != std::string::npos)
            return parse_valuation(o_.with, ws_);
        return ws_.valuation(o_.with);
    }

    /// --at points followed by the --sample points.
    std::vector<Point> points() const {
        std::vector<Point> pts;
        for (const auto& a : o_.at)
            pts.push_back(parse_point(a));
        if (!o_.sample.empty()) {
            auto s = ws_.sample(o_.sample).expand();
            pts.insert(pts.end(), s.begin(), s.end());
        }
        return pts;
    }

    bool single_point() const { return o_.at.size() == 1 && o_.sample.empty(); }

    void outcome(const EvalOutcome& o, const Point& p, const std::string& sep, bool bare) {
        if (json_lines()) {
            json j;
            j["point"] = to_string(p);
            switch (o.kind) {
            case EvalOutcome::Kind::Undefined:
                j["kind"] = "undefined";
                break;
            case EvalOutcome::Kind::Value:
                j["kind"] = "value";
                j["value"] = to_string(o.value, sep);
                j["multiplicity"] = o.multiplicity;
                break;
            case EvalOutcome::Kind::Relation: {
                j["kind"] = "relation";
                json rel = json::array();
                for (const auto& [v, m] : o.relation)
                    rel.push_back({{"value", to_string(v, sep)}, {"multiplicity", m}});
                j["relation"] = rel;
                break;
            }
            }
            out_ << j.dump() << "\n";
        } else if (bare) {
            out_ << to_string(o, sep) << "\n";
        } else {
            out_ << to_string(p) << ": " << to_string(o, sep) << "\n";
        }
    }

    int eval_cmd() {
        const HybridExpr& e = ws_.expr(o_.expr);
        auto pts = points();
        if (pts.empty())
            throw Error("eval needs --at or --sample");
        Valuation v = valuation();
        for (const auto& p : pts)
            outcome(eval(e, p, v), p, word_separator(e), single_point());
        return Ok;
    }

    GeneralisedPartition partition_named(const std::string& name) const {
        if (ws_.partitions.count(name))
            return ws_.partitions.at(name);
        if (ws_.matrices.count(name))
            return ws_.matrices.at(name).partition();
        if (ws_.splines.count(name))
            return ws_.splines.at(name).partition();
        throw Error("no partition, matrix or spline named '" + name + "'");
    }

    int refine_cmd() {
        std::vector<GeneralisedPartition> parts;
        std::vector<std::int64_t> sizes;
        for (const auto& n : o_.parts) {
            parts.push_back(partition_named(n));
            sizes.push_back(static_cast<std::int64_t>(parts.back().pieces.size()));
        }
        ChoiceMatrix c;
        if (!o_.matrix_file.empty())
            c = parse_choice_matrix(read_file(o_.matrix_file));
        else
            c = canonical_choice_matrix(sizes, o_.style == "upper" ? ChoiceStyle::FullUpperTriangle
                                                                  : ChoiceStyle::OnesOnTopRow);
        Refinement r = common_strict_refinement(parts, c);

        out_ << "matrix (det " << determinant(r.matrix).str() << "):\n";
        std::istringstream rows(to_string(r.matrix));
        for (std::string row; std::getline(rows, row);)
            out_ << "  " << row << "\n";
        out_ << "pieces (" << r.pieces.size() << "):\n";
        for (const auto& p : r.pieces)
            out_ << "  " << p.label << " = " << to_string(p.set) << "\n";
        out_ << "rewrites:\n";
        for (const auto& rw : r.rewrites) {
            std::string rhs;
            for (std::size_t j = 0; j < rw.coeffs.size(); ++j) {
                std::int64_t k = rw.coeffs[j];
                if (k == 0)
                    continue;
                std::string term = (k == 1 || k == -1 ? "" : std::to_string(k < 0 ? -k : k) + "*") + r.pieces[j].label;
                if (rhs.empty())
                    rhs = (k < 0 ? "-" : "") + term;
                else
                    rhs += (k < 0 ? " - " : " + ") + term;
            }
            out_ << "  " << parts[rw.partition].name << ": " << to_string(rw.original) << " = "
                 << (rhs.empty() ? "0" : rhs) << "\n";
        }

        if (o_.sample.empty())
            return Ok;
        Valuation v = valuation();
        auto pts = points();
        bool ok = true;
        for (std::size_t k = 0; k < parts.size(); ++k) {
            std::vector<std::vector<std::int64_t>> coeffs;
            for (const auto& rw : r.rewrites)
                if (rw.partition == k)
                    coeffs.push_back(rw.coeffs);
            auto sets = r.sets();
            bool refines = is_refinement(sets, parts[k], coeffs, v, pts);
            bool strict = is_strict(sets, parts[k], coeffs, v, pts);
            out_ << "check " << parts[k].name << ": refinement " << (refines ? "ok" : "FAILED") << ", strict "
                 << (strict ? "ok" : "FAILED") << "\n";
            ok = ok && refines && strict;
        }
        return ok ? Ok : CheckFailed;
    }

    int matrix_cmd() {
        std::vector<SymbolicBlockMatrix> ms;
        for (const auto& n : o_.operands)
            ms.push_back(ws_.matrix(n));
        HybridExpr e = matrix_sum(ms);
        if (o_.cell.empty() && !o_.table) {
            out_ << to_string(e) << "\n";
            return Ok;
        }
        Valuation v = valuation();
        if (!o_.cell.empty()) {
            Point p = parse_point(o_.cell);
            if (p.size() != 2 || !is_integer(p[0]) || !is_integer(p[1]))
                throw Error("--cell expects i,j");
            outcome(eval(e, p, v), p, " + ", true);
        }
        if (o_.table) {
            Rational n = ms.front().rows.eval(v), m = ms.front().cols.eval(v);
            for (Integer i = 1; i <= numerator(n); ++i)
                for (Integer j = 1; j <= numerator(m); ++j) {
                    Point p{Rational(i), Rational(j)};
                    outcome(eval(e, p, v), p, " + ", false);
                }
        }
        return Ok;
    }

    int spline_cmd() {
        if (o_.operands.size() != 2)
            throw Error("spline-merge takes two splines");
        HybridExpr e = spline_merge(ws_.spline(o_.operands[0]), ws_.spline(o_.operands[1]));
        auto pts = points();
        if (pts.empty()) {
            out_ << to_string(e) << "\n";
            return Ok;
        }
        Valuation v = valuation();
        bool ok = true;
        for (const auto& p : pts) {
            if (p.size() != 1)
                throw Error("spline points are one-dimensional");
            SplineRegion r = spline_eval_region(e, p[0], v);
            ok = ok && (r.outcome.kind != EvalOutcome::Kind::Value || r.consistent());
            if (json_lines()) {
                json j;
                j["point"] = to_string(p);
                j["kind"] = r.outcome.kind == EvalOutcome::Kind::Undefined ? "undefined"
                            : r.outcome.kind == EvalOutcome::Kind::Value   ? "value"
                                                                           : "relation";
                json segs = json::array();
                for (const auto& s : r.segments)
                    segs.push_back(s.name);
                j["segments"] = segs;
                if (r.interval)
                    j["interval"] = {to_string(r.interval->first), to_string(r.interval->second)};
                j["consistent"] = r.consistent();
                out_ << j.dump() << "\n";
            } else if (single_point()) {
                out_ << to_string(r) << "\n";
            } else {
                out_ << to_string(p) << ": " << to_string(r) << "\n";
            }
        }
        return ok ? Ok : CheckFailed;
    }

    int report(const CheckReport& r) {
        if (json_lines()) {
            json j{{"check", r.name}, {"checks", r.checks}, {"violations", r.violations}};
            out_ << j.dump() << "\n";
        } else {
            out_ << r.name << ": " << r.checks << " checks, " << r.violations.size() << " violations\n";
            for (const auto& v : r.violations)
                out_ << "  " << v << "\n";
        }
        return r.ok() ? Ok : CheckFailed;
    }

    std::vector<Point> required_points() const {
        auto pts = points();
        if (pts.empty())
            throw Error("this check needs --at or --sample");
        return pts;
    }

    int check_karr() { return report(karr_split_suite(ws_.function(o_.fn), o_.trials, o_.seed, o_.lo, o_.hi, valuation())); }

    int check_invert() {
        auto star = StarOp::builtin(o_.star);
        if (!star)
            throw Error("unknown star operation '" + o_.star + "'");
        HybridTerm t(ws_.function(o_.fn), ws_.set(o_.target));
        return report(star_inverse_identity_check(*star, t, valuation(), required_points()));
    }

    int check_linear() {
        OperatorRegistry reg;
        GeneralisedPartition p = partition_named(o_.target);
        return report(linear_additivity_check(reg.get(o_.op), ws_.function(o_.fn), p.pieces, valuation(),
                                              required_points()));
    }

    int check_partition() {
        GeneralisedPartition p = partition_named(o_.target);
        CheckReport r;
        r.name = "partition";
        Valuation v = valuation();
        for (const auto& x : required_points()) {
            std::int64_t total = 0;
            for (const auto& piece : p.pieces)
                total += multiplicity(piece, x, v);
            std::int64_t u = indicator(p.universe, x, v);
            r.expect(total == u, p.name + " at " + to_string(x) + ": pieces sum to " + std::to_string(total) +
                                     ", universe " + std::to_string(u));
        }
        if (!p.assumed)
            r.expect(p.formally_sums_to_universe(), p.name + " does not sum to " + p.universe.name + " formally");
        return report(r);
    }

  private:
    const Options& o_;
    std::ostream& out_;
    Workspace ws_;
};

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Symbolic piecewise functions with hybrid sets", "hybridsets"};
    app.require_subcommand(1);
    app.add_option("-w,--workspace", o.workspace, "Workspace file");
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json-lines"}));

    auto eval_points = [&](CLI::App* sub) {
        sub->add_option("--at", o.at, "Point, e.g. 1/2 or 3,4");
        sub->add_option("--sample", o.sample, "Named sample");
        sub->add_option("--with", o.with, "Named valuation or a=1/2,b=3");
    };

    auto* ev = app.add_subcommand("eval", "Evaluate an expression");
    ev->add_option("expr", o.expr, "Expression name")->required();
    eval_points(ev);

    auto* rf = app.add_subcommand("refine", "Common strict refinement of partitions");
    rf->add_option("parts", o.parts, "Partitions, matrices or splines")->required();
    auto* mf = rf->add_option("--matrix", o.matrix_file, "Choice matrix file");
    rf->add_option("--style", o.style, "Canonical matrix style")
        ->check(CLI::IsMember({"top", "upper"}))
        ->excludes(mf);
    rf->add_option("--sample", o.sample, "Sample to check the refinement on");
    rf->add_option("--with", o.with, "Valuation for the check");

    auto* ma = app.add_subcommand("matrix-add", "Add block matrices");
    ma->add_option("matrices", o.operands, "Matrix names")->required()->expected(2, -1);
    ma->add_option("--cell", o.cell, "Cell i,j to evaluate");
    ma->add_flag("--table", o.table, "Evaluate every cell");
    ma->add_option("--with", o.with, "Named valuation or a=1/2,b=3");

    auto* sm = app.add_subcommand("spline-merge", "Merge two splines");
    sm->add_option("splines", o.operands, "Spline names")->required()->expected(2);
    eval_points(sm);

    auto* ck = app.add_subcommand("check", "Sampled identity checks");
    ck->require_subcommand(1);
    auto* karr = ck->add_subcommand("karr", "Split and telescoping sums");
    karr->add_option("fn", o.fn, "Summand")->required();
    karr->add_option("--trials", o.trials);
    karr->add_option("--seed", o.seed);
    karr->add_option("--lo", o.lo);
    karr->add_option("--hi", o.hi);
    karr->add_option("--with", o.with, "Named valuation or a=1/2,b=3");
    auto* inv = ck->add_subcommand("invert", "f^P with its inverse gives the unit");
    inv->add_option("fn", o.fn, "Function")->required();
    inv->add_option("region", o.target, "Region or set")->required();
    inv->add_option("--star", o.star, "Star operation");
    eval_points(inv);
    auto* lin = ck->add_subcommand("linear", "Additivity of a linear operator over a partition");
    lin->add_option("fn", o.fn, "Function")->required();
    lin->add_option("partition", o.target, "Partition, matrix or spline")->required();
    lin->add_option("--op", o.op, "Operator");
    eval_points(lin);
    auto* part = ck->add_subcommand("partition", "Pieces sum to the universe");
    part->add_option("partition", o.target, "Partition, matrix or spline")->required();
    eval_points(part);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return Ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return Usage;
    }

    try {
        Runner r(o, out);
        if (ev->parsed())
            return r.eval_cmd();
        if (rf->parsed())
            return r.refine_cmd();
        if (ma->parsed())
            return r.matrix_cmd();
        if (sm->parsed())
            return r.spline_cmd();
        if (karr->parsed())
            return r.check_karr();
        if (inv->parsed())
            return r.check_invert();
        if (lin->parsed())
            return r.check_linear();
        if (part->parsed())
            return r.check_partition();
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return Usage;
    }
    return Usage;
}

} // namespace hybrid::cli
