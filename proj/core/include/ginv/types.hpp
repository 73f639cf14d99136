#pragma once

#include <Eigen/Core>

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace ginv {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Tolerances shared across the library.
///  - rank_rel_tol: relative singular-value cutoff for numerical rank
///  - nnz_tol:      absolute entry cutoff when counting nonzeros
///  - residual_tol: generalized-inverse property-check tolerance
struct Tolerances {
    double rank_rel_tol = 1e-12;
    double nnz_tol = 1e-6;
    double residual_tol = 1e-8;
};

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ShapeMismatch : Error { using Error::Error; };
struct SingularMatrix : Error { using Error::Error; };
struct NotSymmetric : Error { using Error::Error; };
struct NotSkew : Error { using Error::Error; };
struct WrongCardinality : Error { using Error::Error; };
struct WrongRank : Error { using Error::Error; };
struct SingularBlock : Error { using Error::Error; };
struct RankDeficientBlock : Error { using Error::Error; };
struct ZeroMatrix : Error { using Error::Error; };
struct InvalidLinearizer : Error { using Error::Error; };
struct IterationLimit : Error { using Error::Error; };
struct NumericalBreakdown : Error { using Error::Error; };
struct DegenerateCertificate : Error { using Error::Error; };
struct InvalidParams : Error { using Error::Error; };
struct InvalidSpec : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

/// Ordered, duplicate-free set of 0-based row or column positions
/// drawn from a universe of known size.
class IndexSet {
public:
    IndexSet() = default;
    IndexSet(std::vector<Index> indices, Index universe);
    IndexSet(std::initializer_list<Index> indices, Index universe)
        : IndexSet(std::vector<Index>(indices), universe) {}

    /// The full universe {0, ..., universe-1}.
    static IndexSet all(Index universe);

    Index size() const { return static_cast<Index>(idx_.size()); }
    Index universe() const { return universe_; }
    bool empty() const { return idx_.empty(); }
    Index operator[](Index i) const { return idx_[static_cast<std::size_t>(i)]; }
    const std::vector<Index>& indices() const { return idx_; }

    bool contains(Index v) const;
    /// Ascending list of universe members not in this set.
    IndexSet complement() const;
    /// Replace the element at position pos with value v (must stay valid) and re-sort.
    IndexSet with_swapped(Index pos, Index v) const;

    auto begin() const { return idx_.begin(); }
    auto end() const { return idx_.end(); }

    bool operator==(const IndexSet& other) const = default;

    std::string to_string() const;

private:
    std::vector<Index> idx_;
    Index universe_ = 0;
};

/// Single accepted move of a local search.
struct SwapRecord {
    enum class Side { Row, Column, Principal };
    Index out_index = -1;
    Index in_index = -1;
    Side side = Side::Column;
    double ratio = 0.0;  // improvement factor; > 1+epsilon for every accepted swap
};

}  // namespace ginv
