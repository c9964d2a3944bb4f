#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ph/sparse.hpp"

namespace ph {

// A simplex as its strictly increasing vertex list. Comparison orders by
// dimension first, then lexicographically, matching the canonical cell order.
struct Simplex {
    std::vector<int> vertices;

    int dim() const { return int(vertices.size()) - 1; }
    bool operator==(const Simplex& o) const { return vertices == o.vertices; }
    bool operator<(const Simplex& o) const {
        if (vertices.size() != o.vertices.size()) {
            return vertices.size() < o.vertices.size();
        }
        return vertices < o.vertices;
    }
};

// Finite filtered simplicial complex. Cells get ids 0..size()-1 in (dim,
// lex) order; ids act as matrix labels everywhere downstream. Construction
// validates strict vertex ordering, uniqueness, closure under faces, and
// monotonicity of grades along faces.
class FilteredComplex {
public:
    FilteredComplex() = default;
    explicit FilteredComplex(std::vector<std::pair<Simplex, double>> cells);

    std::size_t size() const { return cells_.size(); }
    int top_dimension() const { return int(by_dim_.size()) - 1; }
    const Simplex& simplex(Label id) const;
    double grade(Label id) const;
    int dim(Label id) const;
    Label id_of(const Simplex& s) const;
    bool contains(const Simplex& s) const { return index_.count(s) != 0; }
    const std::vector<Label>& cells_of_dim(int d) const;

    // Ids sorted by (grade, dim, tie). Seed 0 ties lexicographically; other
    // seeds permute ties deterministically, still refining (grade, dim).
    std::vector<Label> filtration_order(std::uint64_t seed = 0) const;

private:
    std::vector<Simplex> cells_;
    std::vector<double> grades_;
    std::map<Simplex, Label> index_;
    std::vector<std::vector<Label>> by_dim_;
};

// Re-runs the construction checks; throws on violation.
void validate(const FilteredComplex& k);

// Boundary operator from dimension d to d-1 over GF(p), with the sign
// (-1)^q on the face dropping the q-th vertex (1-based count). Rows are the
// (d-1)-cells and columns the d-cells, both in id order. With reduced set,
// dimension 0 gains the empty-simplex row under the label -1.
IndexedMatrix boundary_matrix(const FilteredComplex& k, int d, std::uint32_t p,
                              bool reduced = false);

// The whole differential as one square matrix indexed by cell ids, rows and
// columns alike. Entry (face, cell) follows the same sign convention as
// boundary_matrix. With reduced set, the empty simplex joins under id -1.
IndexedMatrix graded_boundary_matrix(const FilteredComplex& k, std::uint32_t p,
                                     bool reduced = false);

// Vietoris-Rips complex under the diameter filtration: vertices at grade 0,
// each higher simplex at the largest pairwise distance among its vertices.
// Simplices are built up to dimension max_dim and diameter max_scale.
FilteredComplex rips_from_distances(const std::vector<std::vector<double>>& d,
                                    int max_dim, double max_scale);
FilteredComplex rips_from_points(const std::vector<std::vector<double>>& pts,
                                 int max_dim, double max_scale);

std::vector<std::vector<double>> read_points_csv(std::istream& in);
std::vector<std::vector<double>> read_distances_csv(std::istream& in);

// JSON complex format: {"simplices": [{"v": [0, 1], "f": 0.5}, ...]}.
FilteredComplex read_complex_json(std::istream& in);

}  // namespace ph
