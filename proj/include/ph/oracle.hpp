#pragma once

#include <cstdint>
#include <vector>

#include "ph/barcode.hpp"
#include "ph/complex.hpp"
#include "ph/field.hpp"

namespace ph {

// Brute-force reference implementations for tests. Everything here is
// written against the field and complex modules only, independent of the
// sparse kernels it is used to check. Dense and cubic on purpose; keep
// instances small (at most a couple thousand cells).

struct DenseMatrix {
    std::vector<std::vector<FieldElement>> rows;

    std::size_t n_rows() const { return rows.size(); }
    std::size_t n_cols() const { return rows.empty() ? 0 : rows[0].size(); }
};

// Rank by plain Gaussian elimination.
int dense_rank(DenseMatrix a);

// Boundary operator of the d-cells as a dense array, rows indexed by the
// (d-1)-cells in id order.
DenseMatrix dense_boundary(const FilteredComplex& k, int d, std::uint32_t p);

// Betti number in the given dimension: nullity of the boundary going down
// minus the rank of the boundary coming in from above.
int betti(const FilteredComplex& k, int dim, std::uint32_t p);

// Classical left-to-right column reduction of the full boundary matrix in
// the tie-broken filtration order. Pairs (low, column) become intervals,
// unpaired cycles become essential classes. Intervals are reported for
// homology dimensions 0 through max_dim; zero-length bars are dropped
// unless keep_zero is set. With reduced set an empty cell at the minimum
// grade absorbs one connected component.
Barcode standard_reduction_barcode(const FilteredComplex& k, std::uint32_t p,
                                   int max_dim, bool reduced = false,
                                   bool keep_zero = false,
                                   std::uint64_t seed = 0);

}  // namespace ph
