#include "hybrid/refine.hpp"

#include <limits>
#include <numeric>
#include <sstream>

#include "hybrid/checked.hpp"
#include "hybrid/error.hpp"

namespace hybrid {

bool GeneralisedPartition::formally_sums_to_universe() const {
    SymbolicHybridSet sum;
    for (const auto& p : pieces)
        sum += p;
    return sum == SymbolicHybridSet(universe);
}

GeneralisedPartition make_partition(std::string name, RegionAtom universe, std::vector<SymbolicHybridSet> pieces,
                                    bool assumed) {
    GeneralisedPartition part{std::move(name), std::move(universe), std::move(pieces), assumed};
    if (part.pieces.empty())
        throw RefinementError("partition '" + part.name + "' has no pieces");
    if (!assumed && !part.formally_sums_to_universe())
        throw RefinementError("pieces of partition '" + part.name + "' do not sum to " + part.universe.name +
                              "; declare it assumed if it holds only semantically");
    return part;
}

bool partition_holds(const GeneralisedPartition& part, const Valuation& v, std::span<const Point> sample) {
    for (const auto& p : sample) {
        std::int64_t total = 0;
        for (const auto& piece : part.pieces)
            total = checked_add(total, multiplicity(piece, p, v));
        if (total != indicator(part.universe, p, v))
            return false;
    }
    return true;
}

ChoiceMatrix::ChoiceMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows) : n_(rows.size()) {
    for (const auto& r : rows) {
        if (r.size() != n_)
            throw DimensionError("choice matrix must be square");
        entries_.insert(entries_.end(), r.begin(), r.end());
    }
}

std::vector<std::int64_t> ChoiceMatrix::row(std::size_t i) const {
    return {entries_.begin() + static_cast<std::ptrdiff_t>(i * n_),
            entries_.begin() + static_cast<std::ptrdiff_t>((i + 1) * n_)};
}

ChoiceMatrix ChoiceMatrix::identity(std::size_t n) {
    ChoiceMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

ChoiceMatrix operator*(const ChoiceMatrix& a, const ChoiceMatrix& b) {
    if (a.size() != b.size())
        throw DimensionError("matrix sizes differ");
    ChoiceMatrix r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) {
            std::int64_t s = 0;
            for (std::size_t k = 0; k < a.size(); ++k)
                s = checked_add(s, checked_mul(a(i, k), b(k, j)));
            r(i, j) = s;
        }
    return r;
}

std::string to_string(const ChoiceMatrix& m) {
    std::string out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) {
            if (j)
                out += ' ';
            out += std::to_string(m(i, j));
        }
        out += '\n';
    }
    return out;
}

ChoiceMatrix parse_choice_matrix(std::string_view text) {
    std::vector<std::vector<std::int64_t>> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::int64_t> row;
        std::int64_t x;
        while (ls >> x)
            row.push_back(x);
        if (!ls.eof())
            throw ParseError(lineno, 1, "choice matrix: non-integer entry in '" + line + "'");
        if (!row.empty())
            rows.push_back(std::move(row));
    }
    ChoiceMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size())
            throw DimensionError("choice matrix: row " + std::to_string(i + 1) + " has " +
                                 std::to_string(rows[i].size()) + " entries, expected " + std::to_string(rows.size()));
        for (std::size_t j = 0; j < rows.size(); ++j)
            m(i, j) = rows[i][j];
    }
    return m;
}

std::int64_t min_refinement_size(std::span<const std::int64_t> sizes) {
    if (sizes.empty())
        throw ContractError("min_refinement_size needs at least one partition");
    std::int64_t total = 1;
    for (auto n : sizes) {
        if (n < 1)
            throw ContractError("partition sizes must be at least 1");
        total = checked_add(total, checked_sub(n, 1));
    }
    return total;
}

ChoiceMatrix canonical_choice_matrix(std::span<const std::int64_t> sizes, ChoiceStyle style) {
    auto n = static_cast<std::size_t>(min_refinement_size(sizes));
    ChoiceMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = (i == 0 || i == j || (style == ChoiceStyle::FullUpperTriangle && j > i)) ? 1 : 0;
    return m;
}

Integer determinant(const ChoiceMatrix& m) {
    const std::size_t n = m.size();
    if (n == 0)
        return 1;
    std::vector<Integer> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a[i * n + j] = m(i, j);
    auto at = [&](std::size_t i, std::size_t j) -> Integer& { return a[i * n + j]; };
    Integer sign = 1;
    Integer prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (at(k, k) == 0) {
            std::size_t swap = k + 1;
            while (swap < n && at(swap, k) == 0)
                ++swap;
            if (swap == n)
                return 0;
            for (std::size_t j = 0; j < n; ++j)
                std::swap(at(k, j), at(swap, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j)
                at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
            at(i, k) = 0;
        }
        prev = at(k, k);
    }
    return sign * at(n - 1, n - 1);
}

ChoiceMatrix integer_inverse(const ChoiceMatrix& m) {
    Integer det = determinant(m);
    if (det != 1 && det != -1)
        throw UnimodularityError("choice matrix is not unimodular: determinant " + det.str());
    const std::size_t n = m.size();
    // Gauss-Jordan over the rationals on [m | I]; unimodularity makes the
    // result integral.
    std::vector<Rational> a(n * 2 * n);
    auto at = [&](std::size_t i, std::size_t j) -> Rational& { return a[i * 2 * n + j]; };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            at(i, j) = m(i, j);
        at(i, n + i) = 1;
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        while (at(pivot, k) == 0)
            ++pivot;
        if (pivot != k)
            for (std::size_t j = 0; j < 2 * n; ++j)
                std::swap(at(k, j), at(pivot, j));
        Rational d = at(k, k);
        for (std::size_t j = 0; j < 2 * n; ++j)
            at(k, j) /= d;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || at(i, k) == 0)
                continue;
            Rational f = at(i, k);
            for (std::size_t j = 0; j < 2 * n; ++j)
                at(i, j) -= f * at(k, j);
        }
    }
    ChoiceMatrix inv(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const Rational& x = at(i, n + j);
            if (!is_integer(x) || numerator(x) > std::numeric_limits<std::int64_t>::max() ||
                numerator(x) < std::numeric_limits<std::int64_t>::min())
                throw ArithmeticError("inverse entry out of range");
            inv(i, j) = static_cast<std::int64_t>(numerator(x));
        }
    inv.row_labels = m.column_labels;
    inv.column_labels = m.row_labels;
    return inv;
}

const Rewrite* Refinement::find(const SymbolicHybridSet& original) const {
    for (const auto& r : rewrites)
        if (r.original == original)
            return &r;
    return nullptr;
}

SymbolicHybridSet Refinement::expand(const Rewrite& r) const {
    SymbolicHybridSet out;
    for (std::size_t j = 0; j < pieces.size(); ++j)
        out += r.coeffs[j] * pieces[j].set;
    return out;
}

std::vector<SymbolicHybridSet> Refinement::sets() const {
    std::vector<SymbolicHybridSet> out;
    for (const auto& p : pieces)
        out.push_back(p.set);
    return out;
}

namespace {

std::string piece_label(const GeneralisedPartition& part, std::size_t i) {
    if (auto atom = part.pieces[i].single_atom())
        return atom->name;
    return part.name + "[" + std::to_string(i + 1) + "]";
}

std::vector<std::int64_t> row_difference(std::vector<std::int64_t> a, const std::vector<std::int64_t>& b) {
    for (std::size_t j = 0; j < a.size(); ++j)
        a[j] = checked_sub(a[j], b[j]);
    return a;
}

} // namespace

Refinement common_strict_refinement(std::span<const GeneralisedPartition> parts, const ChoiceMatrix& c) {
    if (parts.empty())
        throw ContractError("refinement needs at least one partition");
    std::vector<std::int64_t> sizes;
    for (const auto& p : parts) {
        if (!(p.universe == parts.front().universe))
            throw DomainError("partitions '" + parts.front().name + "' and '" + p.name + "' have different universes");
        sizes.push_back(static_cast<std::int64_t>(p.pieces.size()));
    }
    auto n = static_cast<std::size_t>(min_refinement_size(sizes));
    if (c.size() != n)
        throw DimensionError("choice matrix is " + std::to_string(c.size()) + "x" + std::to_string(c.size()) +
                             " but the refinement has " + std::to_string(n) + " pieces");
    ChoiceMatrix inv = integer_inverse(c);

    const RegionAtom& universe = parts.front().universe;
    std::vector<SymbolicHybridSet> rhs{SymbolicHybridSet(universe)};
    std::vector<std::string> row_labels{universe.name};
    for (const auto& p : parts)
        for (std::size_t i = 0; i + 1 < p.pieces.size(); ++i) {
            rhs.push_back(p.pieces[i]);
            row_labels.push_back(piece_label(p, i));
        }

    Refinement r;
    r.universe = universe;
    r.matrix = c;
    r.matrix.row_labels = row_labels;
    for (std::size_t j = 0; j < n; ++j) {
        SymbolicHybridSet piece;
        for (std::size_t k = 0; k < n; ++k)
            piece += inv(j, k) * rhs[k];
        // U ⊖ (A_1 ⊕ .. ⊕ A_{n−1}) is the dropped piece A_n.
        for (const auto& p : parts) {
            SymbolicHybridSet closure(universe);
            for (std::size_t i = 0; i + 1 < p.pieces.size(); ++i)
                closure -= p.pieces[i];
            if (p.pieces.size() > 1 && piece == closure) {
                piece = p.pieces.back();
                break;
            }
        }
        std::string label;
        if (auto atom = piece.single_atom())
            label = atom->name;
        else
            label = "R" + std::to_string(j + 1);
        r.pieces.push_back({label, std::move(piece)});
        r.matrix.column_labels.push_back(r.pieces.back().label);
    }

    std::size_t row = 1;
    for (std::size_t k = 0; k < parts.size(); ++k) {
        const auto& p = parts[k];
        std::vector<std::int64_t> closure = c.row(0);
        for (std::size_t i = 0; i + 1 < p.pieces.size(); ++i, ++row) {
            r.rewrites.push_back({k, i, p.pieces[i], c.row(row)});
            closure = row_difference(closure, c.row(row));
        }
        r.rewrites.push_back({k, p.pieces.size() - 1, p.pieces.back(), closure});
    }
    return r;
}

Refinement common_strict_refinement(std::span<const GeneralisedPartition> parts) {
    std::vector<std::int64_t> sizes;
    for (const auto& p : parts)
        sizes.push_back(static_cast<std::int64_t>(p.pieces.size()));
    return common_strict_refinement(parts, canonical_choice_matrix(sizes));
}

namespace {

void check_shapes(std::span<const SymbolicHybridSet> refined, const GeneralisedPartition& original,
                  const std::vector<std::vector<std::int64_t>>& coeffs) {
    if (coeffs.size() != original.pieces.size())
        throw DimensionError("one rewrite row per original piece is required");
    for (const auto& row : coeffs)
        if (row.size() != refined.size())
            throw DimensionError("rewrite row length differs from the number of refinement pieces");
}

} // namespace

bool is_refinement(std::span<const SymbolicHybridSet> refined, const GeneralisedPartition& original,
                   const std::vector<std::vector<std::int64_t>>& coeffs, const Valuation& v,
                   std::span<const Point> sample) {
    check_shapes(refined, original, coeffs);
    for (std::size_t i = 0; i < original.pieces.size(); ++i)
        for (const auto& p : sample) {
            std::int64_t m = 0;
            for (std::size_t j = 0; j < refined.size(); ++j)
                if (coeffs[i][j] != 0)
                    m = checked_add(m, checked_mul(coeffs[i][j], multiplicity(refined[j], p, v)));
            if (m != multiplicity(original.pieces[i], p, v))
                return false;
        }
    return true;
}

bool is_strict(std::span<const SymbolicHybridSet> refined, const GeneralisedPartition& original,
               const std::vector<std::vector<std::int64_t>>& coeffs, const Valuation& v,
               std::span<const Point> sample) {
    check_shapes(refined, original, coeffs);
    std::vector<bool> used(refined.size(), false);
    for (const auto& row : coeffs)
        for (std::size_t j = 0; j < refined.size(); ++j)
            used[j] = used[j] || row[j] != 0;
    SymbolicHybridSet whole;
    for (const auto& piece : original.pieces)
        whole += piece;
    for (const auto& p : sample) {
        bool in_used = false;
        for (std::size_t j = 0; j < refined.size() && !in_used; ++j)
            in_used = used[j] && multiplicity(refined[j], p, v) != 0;
        if (in_used != (multiplicity(whole, p, v) != 0))
            return false;
    }
    return true;
}

bool is_strict(const Refinement& r, const GeneralisedPartition& original, std::size_t index, const Valuation& v,
               std::span<const Point> sample) {
    std::vector<std::vector<std::int64_t>> coeffs;
    for (const auto& rw : r.rewrites)
        if (rw.partition == index)
            coeffs.push_back(rw.coeffs);
    auto sets = r.sets();
    return is_strict(sets, original, coeffs, v, sample);
}

} // namespace hybrid
