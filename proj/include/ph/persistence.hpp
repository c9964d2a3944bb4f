#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "ph/barcode.hpp"
#include "ph/complex.hpp"
#include "ph/sparse.hpp"

namespace ph {

// Outcome of pairing a 2-nilpotent operator T. Each pair (sigma, tau) is
// one orbit: the basis vector at slot tau maps under T onto the basis
// vector at slot sigma. Essentials are the leftover kernel slots. The new
// basis itself sits in the columns of change_of_basis, expressed in the
// original label coordinates; conjugating T by it leaves a single 1 per
// pair and zeros everywhere else.
struct GradedJordanBasis {
    std::vector<std::pair<Label, Label>> pairs;
    std::vector<Label> essentials;
    IndexedMatrix change_of_basis;
};

// Pairs a graded differential minimally with respect to the grade order,
// ties broken by label sequence. Requires a square matrix, a grade for
// every label, grade(row) strictly preceding grade(col) in that order on
// every support entry, and d composed with itself equal to zero. The
// change of basis is triangular for the refined order, so each pair's
// sigma is the last support row of tau's fully reduced column.
GradedJordanBasis filtered_jordan(const IndexedMatrix& boundary,
                                  const std::map<Label, long long>& grades,
                                  std::uint32_t p);

// Reads intervals off a pairing. A pair (sigma, tau) contributes
// [grade(sigma), grade(tau)) in dimension dim(sigma) when the grades
// differ; equal grades are dropped unless keep_zero asks for the empty
// bar. Essentials never die. Negative dimensions are never reported.
Barcode barcode(const GradedJordanBasis& basis,
                const std::map<Label, double>& grades,
                const std::map<Label, int>& dims, std::uint32_t p,
                bool keep_zero = false);

// Jordan pairing of an arbitrary 2-nilpotent square matrix, no grades
// involved. Exchanges pivots one orbit at a time until the working matrix
// is the exact canonical form.
GradedJordanBasis jordan_unfiltered(const IndexedMatrix& t, std::uint32_t p);

// Jordan chains of a nilpotent operator of any degree. Each orbit lists
// v, Tv, and so on down to the last nonzero power, in original
// coordinates. Representatives are drawn per weight class, independent
// modulo the image and the previous kernel stage, so the union of all
// orbits is a basis.
std::vector<std::vector<SparseVector>> nilpotent_jordan_via_qbasis(
    const IndexedMatrix& t, std::uint32_t p);

// Splits a composable chain of linear maps into interval summands. The
// result is the sorted multiset of closed index ranges [start, end], one
// per indecomposable piece of the chain. The seed only permutes internal
// pivot choices; the multiset is the same for every seed.
std::vector<std::pair<int, int>> decompose_module(
    const std::vector<IndexedMatrix>& maps, std::uint64_t seed = 0);

// Knobs for the end-to-end barcode computation.
//   reduce    morse-eliminate matched cells before pairing (on by default)
//   augment   include the empty cell, yielding reduced homology
//   keep_zero emit zero-length bars instead of dropping them
//   seed      tie-breaking for the filtration order and the matching
struct EngineOptions {
    bool reduce = true;
    bool augment = false;
    bool keep_zero = false;
    std::uint64_t seed = 0;
};

// Barcode plus the pairing it came from. grades and dims describe the
// labels appearing in the basis (surviving cells when reduction ran).
struct PersistenceResult {
    Barcode barcode;
    GradedJordanBasis basis;
    std::map<Label, double> grades;
    std::map<Label, int> dims;
};

// Computes the barcode of a filtered complex over GF(p) for homology
// dimensions 0 through max_dim. The complex is used up to dimension
// max_dim + 1 so that deaths in dimension max_dim are correct.
PersistenceResult compute_persistence(const FilteredComplex& k,
                                      std::uint32_t p, int max_dim,
                                      const EngineOptions& opts = {});
Barcode compute_barcode(const FilteredComplex& k, std::uint32_t p,
                        int max_dim, const EngineOptions& opts = {});

}  // namespace ph
