#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hybrid/rational.hpp"
#include "hybrid/regions.hpp"

namespace hybrid {

/// Pieces whose ⊕-sum is the universe. Formal partitions sum to 1·universe as
/// coefficient vectors; `assumed` ones only do so semantically (block layouts
/// depend on dimension constraints the formal layer cannot see) and are
/// validated by sampling.
struct GeneralisedPartition {
    std::string name;
    RegionAtom universe;
    std::vector<SymbolicHybridSet> pieces;
    bool assumed = false;

    bool formally_sums_to_universe() const;
    bool operator==(const GeneralisedPartition&) const = default;
};

/// Throws RefinementError when a non-assumed partition does not formally sum
/// to its universe, or has no pieces.
GeneralisedPartition make_partition(std::string name, RegionAtom universe, std::vector<SymbolicHybridSet> pieces,
                                    bool assumed = false);

/// Σ pieces(p) == universe(p) at every sample point.
bool partition_holds(const GeneralisedPartition& part, const Valuation& v, std::span<const Point> sample);

/// Square integer matrix with row/column labels.
class ChoiceMatrix {
  public:
    ChoiceMatrix() = default;
    explicit ChoiceMatrix(std::size_t n) : n_(n), entries_(n * n, 0) {}
    ChoiceMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows);

    std::size_t size() const { return n_; }
    std::int64_t& operator()(std::size_t i, std::size_t j) { return entries_[i * n_ + j]; }
    std::int64_t operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
    std::vector<std::int64_t> row(std::size_t i) const;

    std::vector<std::string> row_labels;
    std::vector<std::string> column_labels;

    static ChoiceMatrix identity(std::size_t n);

    /// Entries only; labels are ignored.
    bool operator==(const ChoiceMatrix& o) const { return n_ == o.n_ && entries_ == o.entries_; }

  private:
    std::size_t n_ = 0;
    std::vector<std::int64_t> entries_;
};

ChoiceMatrix operator*(const ChoiceMatrix& a, const ChoiceMatrix& b);

/// Rows of space-separated integers.
std::string to_string(const ChoiceMatrix& m);
ChoiceMatrix parse_choice_matrix(std::string_view text);

enum class ChoiceStyle { OnesOnTopRow, FullUpperTriangle };

/// (Σ n_i) + 1 − r. Each size must be at least 1 and at least one partition
/// is required (ContractError otherwise).
std::int64_t min_refinement_size(std::span<const std::int64_t> sizes);

ChoiceMatrix canonical_choice_matrix(std::span<const std::int64_t> sizes, ChoiceStyle style = ChoiceStyle::OnesOnTopRow);

/// Exact determinant by fraction-free (Bareiss) elimination.
Integer determinant(const ChoiceMatrix& m);

/// Exact inverse of a unimodular matrix. Throws UnimodularityError reporting
/// the determinant when it is not ±1.
ChoiceMatrix integer_inverse(const ChoiceMatrix& m);

struct RefinementPiece {
    std::string label;
    SymbolicHybridSet set;
    bool operator==(const RefinementPiece&) const = default;
};

/// How one original piece is written over the refinement pieces.
struct Rewrite {
    std::size_t partition;
    std::size_t piece;
    SymbolicHybridSet original;
    std::vector<std::int64_t> coeffs;
};

struct Refinement {
    RegionAtom universe;
    std::vector<RefinementPiece> pieces;
    std::vector<Rewrite> rewrites;
    ChoiceMatrix matrix;

    /// Rewrite whose original piece equals `original`, or nullptr.
    const Rewrite* find(const SymbolicHybridSet& original) const;

    /// Σ coeffs_j · piece_j.
    SymbolicHybridSet expand(const Rewrite& r) const;

    std::vector<SymbolicHybridSet> sets() const;
};

/// Solves C·(P_1..P_N) = (U, A_1..A_{n−1}, B_1..B_{m−1}, ...) for the new
/// pieces; the last piece of every partition is dropped from the system and
/// rewritten through U ⊖ (the others). A new piece that formally equals such a
/// closure is replaced by the dropped piece itself.
Refinement common_strict_refinement(std::span<const GeneralisedPartition> parts, const ChoiceMatrix& c);

/// With the OnesOnTopRow canonical matrix.
Refinement common_strict_refinement(std::span<const GeneralisedPartition> parts);

/// Σ_j coeffs[i][j]·refined_j reproduces piece i at every sample point.
bool is_refinement(std::span<const SymbolicHybridSet> refined, const GeneralisedPartition& original,
                   const std::vector<std::vector<std::int64_t>>& coeffs, const Valuation& v,
                   std::span<const Point> sample);

/// The union of the supports of the refinement pieces used by any rewrite
/// equals the support of the whole partition (sampled). A refinement that
/// spills outside the partition is not strict.
bool is_strict(std::span<const SymbolicHybridSet> refined, const GeneralisedPartition& original,
               const std::vector<std::vector<std::int64_t>>& coeffs, const Valuation& v,
               std::span<const Point> sample);

/// Same, for partition `index` of a computed refinement.
bool is_strict(const Refinement& r, const GeneralisedPartition& original, std::size_t index, const Valuation& v,
               std::span<const Point> sample);

} // namespace hybrid
