#include "ph/oracle.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "ph/barcode.hpp"

namespace ph {

int dense_rank(DenseMatrix a) {
    const std::size_t m = a.n_rows(), n = a.n_cols();
    int rank = 0;
    for (std::size_t col = 0; col < n && std::size_t(rank) < m; ++col) {
        std::size_t piv = rank;
        while (piv < m && a.rows[piv][col].is_zero()) ++piv;
        if (piv == m) continue;
        std::swap(a.rows[piv], a.rows[rank]);
        FieldElement inv = a.rows[rank][col].inverse();
        for (std::size_t i = rank + 1; i < m; ++i) {
            if (a.rows[i][col].is_zero()) continue;
            FieldElement f = a.rows[i][col] * inv;
            for (std::size_t j = col; j < n; ++j) {
                a.rows[i][j] = a.rows[i][j] - f * a.rows[rank][j];
            }
        }
        ++rank;
    }
    return rank;
}

DenseMatrix dense_boundary(const FilteredComplex& k, int d, std::uint32_t p) {
    DenseMatrix out;
    if (d <= 0) return out;
    const std::vector<Label>& rows = k.cells_of_dim(d - 1);
    const std::vector<Label>& cols = k.cells_of_dim(d);
    std::map<Label, std::size_t> row_at;
    for (std::size_t i = 0; i < rows.size(); ++i) row_at[rows[i]] = i;

    out.rows.assign(rows.size(),
                    std::vector<FieldElement>(cols.size(), {0, p}));
    for (std::size_t j = 0; j < cols.size(); ++j) {
        const Simplex& s = k.simplex(cols[j]);
        Simplex face;
        for (std::size_t q = 0; q < s.vertices.size(); ++q) {
            face.vertices.clear();
            for (std::size_t i = 0; i < s.vertices.size(); ++i) {
                if (i != q) face.vertices.push_back(s.vertices[i]);
            }
            long long sign = (q % 2 == 0) ? -1 : 1;
            out.rows[row_at.at(k.id_of(face))][j] = FieldElement(sign, p);
        }
    }
    return out;
}

int betti(const FilteredComplex& k, int dim, std::uint32_t p) {
    if (dim < 0) return 0;
    int cells = int(k.cells_of_dim(dim).size());
    int rank_down = dense_rank(dense_boundary(k, dim, p));
    int rank_up = dense_rank(dense_boundary(k, dim + 1, p));
    return (cells - rank_down) - rank_up;
}

Barcode standard_reduction_barcode(const FilteredComplex& k, std::uint32_t p,
                                   int max_dim, bool reduced, bool keep_zero,
                                   std::uint64_t seed) {
    const double inf = std::numeric_limits<double>::infinity();
    const std::vector<Label> order = k.filtration_order(seed);
    const std::size_t off = reduced ? 1 : 0;
    const std::size_t n = order.size() + off;

    std::vector<int> dims(n);
    std::vector<double> grades(n);
    std::vector<std::size_t> pos_of(k.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        std::size_t pos = off + i;
        dims[pos] = k.dim(order[i]);
        grades[pos] = k.grade(order[i]);
        pos_of[order[i]] = pos;
    }
    if (reduced) {
        dims[0] = -1;
        grades[0] = order.empty() ? 0.0 : k.grade(order[0]);
    }

    // Column j holds the boundary of its cell, keyed by face position.
    std::vector<std::map<std::size_t, std::uint32_t>> cols(n);
    for (std::size_t i = 0; i < order.size(); ++i) {
        std::size_t pos = off + i;
        const Simplex& s = k.simplex(order[i]);
        if (s.dim() == 0) {
            if (reduced) cols[pos][0] = p - 1;
            continue;
        }
        Simplex face;
        for (std::size_t q = 0; q < s.vertices.size(); ++q) {
            face.vertices.clear();
            for (std::size_t v = 0; v < s.vertices.size(); ++v) {
                if (v != q) face.vertices.push_back(s.vertices[v]);
            }
            std::uint32_t coeff = (q % 2 == 0) ? p - 1 : 1;
            cols[pos][pos_of[k.id_of(face)]] = coeff;
        }
    }

    const std::size_t npos = std::size_t(-1);
    std::vector<std::size_t> owner(n, npos);
    for (std::size_t j = 0; j < n; ++j) {
        auto& c = cols[j];
        while (!c.empty()) {
            std::size_t low = c.rbegin()->first;
            std::size_t o = owner[low];
            if (o == npos) break;
            std::uint32_t f = mul_mod(
                c.rbegin()->second, inv_mod(cols[o].rbegin()->second, p), p);
            for (const auto& [r, v] : cols[o]) {
                std::uint32_t delta = mul_mod(f, v, p);
                auto it = c.find(r);
                std::uint32_t cur = it == c.end() ? 0 : it->second;
                std::uint32_t nv = sub_mod(cur, delta, p);
                if (nv == 0) {
                    if (it != c.end()) c.erase(it);
                } else if (it != c.end()) {
                    it->second = nv;
                } else {
                    c[r] = nv;
                }
            }
        }
        if (!c.empty()) owner[c.rbegin()->first] = j;
    }

    Barcode bc;
    bc.modulus = p;
    for (std::size_t j = 0; j < n; ++j) {
        if (cols[j].empty()) continue;
        std::size_t i = cols[j].rbegin()->first;
        int d = dims[i];
        if (d < 0 || d > max_dim) continue;
        double birth = grades[i], death = grades[j];
        if (birth < death || keep_zero) bc.add(d, birth, death);
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!cols[i].empty() || owner[i] != npos) continue;
        if (dims[i] < 0 || dims[i] > max_dim) continue;
        bc.add(dims[i], grades[i], inf);
    }
    bc.canonicalize();
    return bc;
}

}  // namespace ph
