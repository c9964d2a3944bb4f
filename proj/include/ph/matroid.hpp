#pragma once

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "ph/sparse.hpp"

namespace ph {

using LabelSet = std::set<Label>;
using WeightFunction = std::map<Label, long long>;

// Standard representation of a linear matroid: the stored matrix has rows
// indexed by a distinguished basis B and columns by the remaining ground-set
// elements, so the full representation is [identity | matrix]. Column
// supports therefore read off fundamental circuits directly.
class StandardRep {
public:
    explicit StandardRep(IndexedMatrix m);

    const IndexedMatrix& matrix() const { return m_; }
    const std::vector<Label>& basis() const { return m_.row_labels(); }
    const std::vector<Label>& cobasis() const { return m_.col_labels(); }
    std::uint32_t modulus() const { return m_.modulus(); }

    std::vector<Label> ground_set() const;
    std::size_t ground_size() const { return m_.n_rows() + m_.n_cols(); }
    bool in_basis(Label e) const { return m_.has_row(e); }
    bool has_element(Label e) const { return m_.has_row(e) || m_.has_col(e); }

private:
    IndexedMatrix m_;
};

std::size_t rank(const StandardRep& rep, const LabelSet& s);
bool is_independent(const StandardRep& rep, const LabelSet& s);

// Elements spanned by s, including s itself; closure of the empty set is the
// loop set.
LabelSet closure(const StandardRep& rep, const LabelSet& s);

LabelSet loops(const StandardRep& rep);

// The unique circuit contained in basis ∪ {e}; e must lie outside the basis.
// A loop yields the singleton {e}.
LabelSet fundamental_circuit(const StandardRep& rep, Label e);

// Pivots the exiting basis elements out and the entering ones in, in one
// block step. Each pair is (exiting basis element, entering element); the
// entering element takes the exiting one's row slot and vice versa. Throws
// "pivot block singular" when the requested exchange is not admissible.
StandardRep exchange_basis(const StandardRep& rep,
                           const std::vector<std::pair<Label, Label>>& pairs);

// Minors. Both re-pivot internally as needed, so s may cut across the
// current basis arbitrarily.
StandardRep deletion(const StandardRep& rep, const LabelSet& s);
StandardRep contraction(const StandardRep& rep, const LabelSet& s);

// Dual matroid on the same ground set: the representing matrix is the
// negated transpose and the roles of basis and cobasis swap.
StandardRep dual(const StandardRep& rep);

// Weight-greedy basis, scanning elements by (weight, label). The result is a
// minimum-weight basis and generates every sublevel set of the weights.
std::vector<Label> greedy_minimal_basis(const StandardRep& rep,
                                        const WeightFunction& weights);

bool is_modular_pair(const StandardRep& rep, const LabelSet& a,
                     const LabelSet& b);

// Whether some basis restricts to a generating set of every member of the
// family. Two-chain families are decided through pairwise modularity; other
// families fall back to exhaustive basis search, which refuses ground sets
// larger than 12 elements ("instance too large").
bool is_freely_generated(const StandardRep& rep,
                         const std::vector<LabelSet>& family);

}  // namespace ph
