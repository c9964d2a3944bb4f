#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ph/field.hpp"

namespace ph {

// Opaque row/column label. Labels carry identity only; their ordering as a
// sequence inside a matrix is the order every position-sensitive operation
// (pivot tie-breaks, triangularity checks) refers to.
using Label = std::int64_t;

// Sparse vector keyed by label; zero coefficients are never stored.
using SparseVector = std::map<Label, std::uint32_t>;

using EntryList = std::vector<std::tuple<Label, Label, long long>>;

// Immutable sparse matrix over GF(p) with labeled rows and columns.
// Stored column-major; every stored value is a nonzero residue in [1, p).
class IndexedMatrix {
public:
    IndexedMatrix();
    IndexedMatrix(std::vector<Label> row_labels, std::vector<Label> col_labels,
                  std::uint32_t modulus, const EntryList& entries = {});

    static IndexedMatrix identity(const std::vector<Label>& labels,
                                  std::uint32_t modulus);

    const std::vector<Label>& row_labels() const { return rows_; }
    const std::vector<Label>& col_labels() const { return cols_; }
    std::uint32_t modulus() const { return modulus_; }
    std::size_t n_rows() const { return rows_.size(); }
    std::size_t n_cols() const { return cols_.size(); }
    std::size_t nnz() const { return nnz_; }
    bool is_zero() const { return nnz_ == 0; }

    bool has_row(Label r) const { return row_pos_.count(r) != 0; }
    bool has_col(Label c) const { return col_pos_.count(c) != 0; }
    std::size_t row_position(Label r) const;
    std::size_t col_position(Label c) const;
    Label row_label_at(std::size_t pos) const { return rows_.at(pos); }
    Label col_label_at(std::size_t pos) const { return cols_.at(pos); }

    // Coefficient at (row, col); zero when absent. Unknown labels throw.
    std::uint32_t at(Label row, Label col) const;

    // Column by position, as (row position, value) pairs sorted by row
    // position. Intended for algorithmic consumers.
    const std::vector<std::pair<std::size_t, std::uint32_t>>& column(
        std::size_t col_pos) const {
        return data_[col_pos];
    }

    // All entries in column-major order as (row label, col label, value).
    std::vector<std::tuple<Label, Label, std::uint32_t>> entries() const;

    bool operator==(const IndexedMatrix& o) const;
    bool operator!=(const IndexedMatrix& o) const { return !(*this == o); }

private:
    std::vector<Label> rows_, cols_;
    std::map<Label, std::size_t> row_pos_, col_pos_;
    std::vector<std::vector<std::pair<std::size_t, std::uint32_t>>> data_;
    std::uint32_t modulus_;
    std::size_t nnz_;
};

// L*D*U = A with L (rows x rows) and U (cols x cols) unit-triangular under
// the pivot-sequence order and D supported exactly on the pivot positions,
// carrying the pivot values (identically one over GF(2)). The number of
// pivots equals rank(A).
struct LUFactorization {
    IndexedMatrix L;
    IndexedMatrix D;
    IndexedMatrix U;
    std::vector<std::pair<Label, Label>> pivot_sequence;
};

enum class PivotRule {
    // Choose the eligible column with fewest nonzeros, then the row of
    // smallest count within it; break ties by position order.
    markowitz,
};

// Requires A.col_labels() and B.row_labels() to agree as sets.
IndexedMatrix matmul(const IndexedMatrix& a, const IndexedMatrix& b);

// x is keyed by column labels of A; result is keyed by row labels.
SparseVector matvec(const IndexedMatrix& a, const SparseVector& x);

IndexedMatrix transpose(const IndexedMatrix& a);

// Restriction to the given label sequences, which also fix the result's
// ordering. Labels must exist and repeat-free.
IndexedMatrix submatrix(const IndexedMatrix& a, const std::vector<Label>& rows,
                        const std::vector<Label>& cols);

// Eliminates the square block (pivot_rows x pivot_cols) and returns the
// complement on the remaining labels. Throws "pivot block singular" when the
// block cannot be fully pivoted. The result does not depend on the internal
// pivot order.
IndexedMatrix schur_complement(const IndexedMatrix& a,
                               const std::vector<Label>& pivot_rows,
                               const std::vector<Label>& pivot_cols);

// Column operations annihilating the pivot's row off the pivot entry. The
// block away from the pivot's row and column becomes the Schur complement of
// the 1x1 pivot after the matching clear_column.
IndexedMatrix clear_row(const IndexedMatrix& a, std::pair<Label, Label> pivot);

// Row operations annihilating the pivot's column off the pivot entry.
IndexedMatrix clear_column(const IndexedMatrix& a,
                           std::pair<Label, Label> pivot);

// Full pivoted decomposition; rank-deficient input is fine and simply yields
// fewer pivots.
LUFactorization lu_exchange(const IndexedMatrix& a,
                            PivotRule rule = PivotRule::markowitz);

// Inverse of a square matrix whose off-diagonal support is acyclic, by
// substitution along a topological order of the support graph. Throws
// "cyclic support" and "singular matrix" on the respective precondition
// failures. Row and column label sets must coincide.
IndexedMatrix mobius_inverse(const IndexedMatrix& a);

// Text fixture format: a "rows cols modulus" header line followed by one
// "i j v" triple per nonzero, all 0-indexed by position. Loading assigns
// labels 0..rows-1 and 0..cols-1; saving writes positions, so labels are not
// preserved across a round trip.
IndexedMatrix load_fixture(std::istream& in);
IndexedMatrix load_fixture_file(const std::string& path);
void save_fixture(const IndexedMatrix& a, std::ostream& out);
void save_fixture_file(const IndexedMatrix& a, const std::string& path);

}  // namespace ph
