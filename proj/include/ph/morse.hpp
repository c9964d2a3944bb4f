#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "ph/complex.hpp"
#include "ph/sparse.hpp"

namespace ph {

// Partial matching on the support of a matrix: each row and each column in
// at most one pair, every pair at a nonzero entry. On a square graded
// differential the row and column sides share one label space and a cell
// may then appear in at most one pair overall.
struct PartialMatching {
    std::vector<std::pair<Label, Label>> pairs;

    std::vector<Label> matched_rows() const;
    std::vector<Label> matched_cols() const;
};

// Reflexive-transitive relation on one side's labels, stored as its full
// edge set.
struct InducedRelation {
    std::set<std::pair<Label, Label>> edges;

    bool contains(Label a, Label b) const {
        return edges.count({a, b}) != 0;
    }
};

// The pair of relations a matching induces: on rows, i relates to j when
// column j's partner has a nonzero entry in row i; on columns dually via
// the partner row. Returned as reflexive-transitive closures over all row
// labels respectively all column labels.
std::pair<InducedRelation, InducedRelation> induced_relations(
    const IndexedMatrix& a, const PartialMatching& m);

// True when neither induced relation admits a directed cycle through
// distinct labels, i.e. both closures are antisymmetric. Invalid matchings
// throw instead of answering.
bool is_acyclic(const IndexedMatrix& a, const PartialMatching& m);

// Harvests the mutual equal-grade pairs between dim and dim+1: cell tau
// takes the face that is last in the tie-broken filtration order, cell
// sigma takes the coface that is first, and a pair forms when both choices
// agree and the grades coincide. The result is acyclic by construction.
PartialMatching obvious_pairs(const FilteredComplex& k, int dim,
                              std::uint32_t p, std::uint64_t seed = 0);

// Differential on the critical (unmatched) cells, computed two ways that
// must agree: by eliminating the matched block as a Schur complement, and
// by summing signed gradient paths. The path version exists as a slow
// cross-check for the Schur route.
IndexedMatrix morse_boundary_schur(const IndexedMatrix& boundary,
                                   const PartialMatching& m);
IndexedMatrix morse_boundary_paths(const FilteredComplex& k,
                                   const PartialMatching& m, std::uint32_t p);

// Result of reducing a filtered complex: the graded differential restricted
// to critical cells (kept up to dimension target_dim + 1), the surviving
// cell ids with their original grades and dimensions, and the eliminated
// pairs (each pair shares one grade).
struct ReducedComplex {
    IndexedMatrix boundary;
    std::vector<Label> critical;
    std::map<Label, double> grades;
    std::map<Label, int> dims;
    std::vector<std::pair<Label, Label>> matched;
};

// Repeatedly harvests obvious pairs from the top dimension downward and
// eliminates them. Homology in dimensions 0..target_dim is untouched.
// With augment set, the empty cell (label -1, dimension -1) joins the
// critical set and keeps its incidence with every surviving vertex; it is
// never matched, so elimination cannot disturb its row.
ReducedComplex reduce(const FilteredComplex& k, std::uint32_t p,
                      int target_dim, std::uint64_t seed = 0,
                      bool augment = false);

}  // namespace ph
