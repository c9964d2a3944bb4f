#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

#include "ph/complex.hpp"
#include "ph/morse.hpp"
#include "ph/oracle.hpp"
#include "ph/rng.hpp"
#include "ph/sparse.hpp"

using namespace ph;

namespace {

IndexedMatrix labeled(const std::vector<Label>& rows,
                      const std::vector<Label>& cols,
                      const std::vector<std::vector<int>>& dense,
                      std::uint32_t p) {
    EntryList e;
    for (std::size_t i = 0; i < dense.size(); ++i) {
        for (std::size_t j = 0; j < dense[i].size(); ++j) {
            if (dense[i][j] != 0) e.emplace_back(rows[i], cols[j], dense[i][j]);
        }
    }
    return IndexedMatrix(rows, cols, p, e);
}

FilteredComplex full_simplex(int n, double grade = 0) {
    std::vector<std::pair<Simplex, double>> cells;
    for (int mask = 1; mask < (1 << n); ++mask) {
        Simplex s;
        for (int v = 0; v < n; ++v) {
            if (mask & (1 << v)) s.vertices.push_back(v);
        }
        cells.push_back({std::move(s), grade});
    }
    return FilteredComplex(std::move(cells));
}

FilteredComplex hollow_simplex(int n) {
    std::vector<std::pair<Simplex, double>> cells;
    for (int mask = 1; mask < (1 << n) - 1; ++mask) {
        Simplex s;
        for (int v = 0; v < n; ++v) {
            if (mask & (1 << v)) s.vertices.push_back(v);
        }
        cells.push_back({std::move(s), 0});
    }
    return FilteredComplex(std::move(cells));
}

FilteredComplex random_rips(SplitMix64& gen, int n_points, int max_dim) {
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < n_points; ++i) pts.push_back({gen.unit(), gen.unit()});
    return rips_from_points(pts, max_dim, 2.0);
}

// Greedy random matching on the graded differential, kept acyclic by
// testing after every tentative pair.
PartialMatching random_acyclic_matching(const FilteredComplex& k,
                                        const IndexedMatrix& d,
                                        SplitMix64& gen) {
    auto entries = d.entries();
    std::vector<std::size_t> idx(entries.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    deterministic_shuffle(idx, gen.next());
    PartialMatching m;
    std::set<Label> used;
    for (std::size_t i : idx) {
        const auto& [r, c, v] = entries[i];
        if (used.count(r) != 0 || used.count(c) != 0) continue;
        m.pairs.push_back({r, c});
        if (!is_acyclic(d, m)) {
            m.pairs.pop_back();
            continue;
        }
        used.insert(r);
        used.insert(c);
    }
    (void)k;
    return m;
}

int reduced_betti(const ReducedComplex& rc, int d, std::uint32_t) {
    std::vector<Label> below, at, above;
    for (Label id : rc.critical) {
        int dd = rc.dims.at(id);
        if (dd == d - 1) below.push_back(id);
        if (dd == d) at.push_back(id);
        if (dd == d + 1) above.push_back(id);
    }
    IndexedMatrix down = submatrix(rc.boundary, below, at);
    IndexedMatrix up = submatrix(rc.boundary, at, above);
    return int(at.size()) - int(lu_exchange(down).pivot_sequence.size()) -
           int(lu_exchange(up).pivot_sequence.size());
}

}  // namespace

TEST_CASE("empty and diagonal matchings induce identity relations") {
    IndexedMatrix a =
        labeled({1, 2}, {3, 4}, {{1, 1}, {0, 1}}, 5);
    auto [rows, cols] = induced_relations(a, {});
    CHECK(rows.edges ==
          std::set<std::pair<Label, Label>>{{1, 1}, {2, 2}});
    CHECK(cols.edges ==
          std::set<std::pair<Label, Label>>{{3, 3}, {4, 4}});

    IndexedMatrix diag = labeled({1, 2}, {3, 4}, {{1, 0}, {0, 1}}, 5);
    PartialMatching full{{{1, 3}, {2, 4}}};
    auto [dr, dc] = induced_relations(diag, full);
    CHECK(dr.edges ==
          std::set<std::pair<Label, Label>>{{1, 1}, {2, 2}});
    CHECK(dc.edges ==
          std::set<std::pair<Label, Label>>{{3, 3}, {4, 4}});
    CHECK(is_acyclic(diag, full));
}

TEST_CASE("induced relations follow the matched column's support") {
    // Lower-triangular with one matched pair: the second row reaches the
    // matched first row through the shared column.
    IndexedMatrix a = labeled({1, 2}, {3, 4}, {{1, 0}, {1, 1}}, 5);
    PartialMatching m{{{1, 3}}};
    auto [rows, cols] = induced_relations(a, m);
    CHECK(rows.edges ==
          std::set<std::pair<Label, Label>>{{1, 1}, {2, 2}, {2, 1}});
    CHECK(rows.contains(2, 1));
    CHECK_FALSE(rows.contains(1, 2));
    CHECK(cols.edges ==
          std::set<std::pair<Label, Label>>{{3, 3}, {4, 4}});
    CHECK(is_acyclic(a, m));
}

TEST_CASE("transitivity closes chains of matched steps") {
    // Rows 1,2,3 all matched; column supports chain 3 -> 2 -> 1.
    IndexedMatrix a = labeled({1, 2, 3}, {4, 5, 6},
                              {{1, 0, 0}, {1, 1, 0}, {0, 1, 1}}, 3);
    PartialMatching m{{{1, 4}, {2, 5}, {3, 6}}};
    auto [rows, unused] = induced_relations(a, m);
    CHECK(rows.contains(2, 1));
    CHECK(rows.contains(3, 2));
    CHECK(rows.contains(3, 1));
    CHECK_FALSE(rows.contains(1, 3));
    CHECK(is_acyclic(a, m));
}

TEST_CASE("invalid matchings are rejected before any answer") {
    IndexedMatrix a = labeled({1, 2}, {3, 4}, {{1, 1}, {1, 1}}, 5);
    CHECK_THROWS_WITH_AS(is_acyclic(a, {{{1, 3}, {1, 4}}}),
                         "row matched twice", std::runtime_error);
    CHECK_THROWS_WITH_AS(is_acyclic(a, {{{1, 3}, {2, 3}}}),
                         "column matched twice", std::runtime_error);
    IndexedMatrix sparse = labeled({1, 2}, {3, 4}, {{1, 0}, {0, 1}}, 5);
    CHECK_THROWS_WITH_AS(is_acyclic(sparse, {{{1, 4}}}),
                         "matched pair outside support", std::runtime_error);
    CHECK_THROWS_AS(induced_relations(a, {{{7, 3}}}), std::runtime_error);

    // On a square graded matrix both sides share the label space, so one
    // cell cannot sit in two pairs.
    IndexedMatrix graded =
        labeled({0, 1, 2}, {0, 1, 2}, {{0, 1, 0}, {0, 0, 1}, {0, 0, 0}}, 5);
    CHECK_THROWS_WITH_AS(
        morse_boundary_schur(graded, {{{0, 1}, {1, 2}}}),
        "cell matched twice", std::runtime_error);
}

TEST_CASE("acyclicity detects cycles through distinct labels") {
    IndexedMatrix a = labeled({1, 2}, {3, 4}, {{1, 1}, {1, 1}}, 5);
    CHECK(is_acyclic(a, {{{1, 3}}}));
    CHECK(is_acyclic(a, {{{2, 4}}}));

    // Invertible pivot block (det = 1 - 4 != 0 mod 5), yet the induced
    // relations loop between the two rows and between the two columns.
    IndexedMatrix b = labeled({1, 2}, {3, 4}, {{1, 2}, {2, 1}}, 5);
    PartialMatching m{{{1, 3}, {2, 4}}};
    CHECK_FALSE(is_acyclic(b, m));
    auto [rows, cols] = induced_relations(b, m);
    CHECK(rows.contains(1, 2));
    CHECK(rows.contains(2, 1));
    CHECK(cols.contains(3, 4));
    CHECK(cols.contains(4, 3));

    // Full diagonal of a triangular matrix only ever walks downward.
    IndexedMatrix tri = labeled({1, 2, 3}, {4, 5, 6},
                                {{1, 0, 0}, {1, 1, 0}, {1, 1, 1}}, 5);
    CHECK(is_acyclic(tri, {{{1, 4}, {2, 5}, {3, 6}}}));
}

TEST_CASE("acyclicity transfers to the composed relation") {
    SplitMix64 gen(0xc1ea5);
    int cyclic_seen = 0, acyclic_seen = 0;
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t n = 3 + gen.below(4);
        std::vector<Label> rl, cl;
        for (std::size_t i = 0; i < n; ++i) rl.push_back(Label(i));
        for (std::size_t j = 0; j < n; ++j) cl.push_back(Label(100 + j));
        EntryList entries;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j || gen.below(100) < 40) {
                    entries.emplace_back(rl[i], cl[j], 1);
                }
            }
        }
        IndexedMatrix a(rl, cl, 2, entries);
        PartialMatching m;
        for (std::size_t i = 0; i < n; ++i) {
            if (gen.below(2) == 0) m.pairs.push_back({rl[i], cl[i]});
        }

        auto [rrel, crel] = induced_relations(a, m);
        std::set<std::pair<Label, Label>> support;
        for (const auto& [r, c, v] : a.entries()) {
            for (Label i : a.row_labels()) {
                if (!rrel.contains(i, r)) continue;
                for (Label j : a.col_labels()) {
                    if (crel.contains(c, j)) support.insert({i, j});
                }
            }
        }
        EntryList composed;
        for (const auto& [i, j] : support) composed.emplace_back(i, j, 1);
        IndexedMatrix s(rl, cl, 2, composed);
        bool base = is_acyclic(a, m);
        CHECK(base == is_acyclic(s, m));
        (base ? acyclic_seen : cyclic_seen)++;
    }
    CHECK(cyclic_seen > 0);
    CHECK(acyclic_seen > 0);
}

TEST_CASE("obvious pairs vanish when all grades differ") {
    FilteredComplex k({{Simplex{{0}}, 0},
                       {Simplex{{1}}, 1},
                       {Simplex{{2}}, 2},
                       {Simplex{{0, 1}}, 3},
                       {Simplex{{0, 2}}, 4},
                       {Simplex{{1, 2}}, 5},
                       {Simplex{{0, 1, 2}}, 6}});
    for (int d = 0; d <= 2; ++d) {
        CHECK(obvious_pairs(k, d, 5).pairs.empty());
    }
}

TEST_CASE("obvious pairs on the equilateral rips triangle") {
    std::vector<std::vector<double>> dist = {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
    FilteredComplex k = rips_from_distances(dist, 2, 2);

    // Vertices sit at grade 0, edges at 1: nothing to pair in dimension 0.
    CHECK(obvious_pairs(k, 0, 5).pairs.empty());

    PartialMatching m = obvious_pairs(k, 1, 5);
    REQUIRE(m.pairs.size() == 1);
    CHECK(m.pairs[0].first == k.id_of(Simplex{{1, 2}}));
    CHECK(m.pairs[0].second == k.id_of(Simplex{{0, 1, 2}}));
    CHECK(is_acyclic(boundary_matrix(k, 2, 5), m));
}

TEST_CASE("obvious pairs stay within one grade and are mutual") {
    FilteredComplex k = full_simplex(4);
    for (int d = 0; d <= 2; ++d) {
        for (std::uint64_t seed : {0ull, 5ull}) {
            PartialMatching m = obvious_pairs(k, d, 3, seed);
            CHECK(!m.pairs.empty());
            std::set<Label> seen;
            for (const auto& [sigma, tau] : m.pairs) {
                CHECK(k.grade(sigma) == k.grade(tau));
                CHECK(k.dim(sigma) == d);
                CHECK(k.dim(tau) == d + 1);
                CHECK(seen.insert(sigma).second);
                CHECK(seen.insert(tau).second);
            }
            CHECK(is_acyclic(boundary_matrix(k, d + 1, 3), m));
        }
    }
}

TEST_CASE("path formula with no matching returns the boundary") {
    FilteredComplex k = hollow_simplex(4);
    for (std::uint32_t p : {2u, 7u}) {
        CHECK(morse_boundary_paths(k, {}, p) == graded_boundary_matrix(k, p));
        CHECK(morse_boundary_schur(graded_boundary_matrix(k, p), {}) ==
              graded_boundary_matrix(k, p));
    }
}

TEST_CASE("pairing a vertex into the edge contracts the interval") {
    FilteredComplex k(
        {{Simplex{{0}}, 0}, {Simplex{{1}}, 0}, {Simplex{{0, 1}}, 0}});
    PartialMatching m{{{k.id_of(Simplex{{1}}), k.id_of(Simplex{{0, 1}})}}};
    IndexedMatrix paths = morse_boundary_paths(k, m, 5);
    CHECK(paths.row_labels() == std::vector<Label>{k.id_of(Simplex{{0}})});
    CHECK(paths.is_zero());
    IndexedMatrix schur = morse_boundary_schur(graded_boundary_matrix(k, 5), m);
    CHECK(schur == paths);
}

TEST_CASE("path and schur formulas agree on random matchings") {
    SplitMix64 gen(0xf00d);
    for (int trial = 0; trial < 12; ++trial) {
        FilteredComplex k = random_rips(gen, 5, 2);
        std::uint32_t p = (trial % 2 == 0) ? 2u : 7u;
        IndexedMatrix d = graded_boundary_matrix(k, p);
        PartialMatching m = random_acyclic_matching(k, d, gen);

        IndexedMatrix via_schur = morse_boundary_schur(d, m);
        IndexedMatrix via_paths = morse_boundary_paths(k, m, p);
        CHECK(via_schur == via_paths);
        CHECK(matmul(via_schur, via_schur).is_zero());
    }
}

TEST_CASE("reduce is the identity when no grades tie") {
    FilteredComplex k({{Simplex{{0}}, 0},
                       {Simplex{{1}}, 1},
                       {Simplex{{2}}, 2},
                       {Simplex{{0, 1}}, 3},
                       {Simplex{{0, 2}}, 4},
                       {Simplex{{1, 2}}, 5},
                       {Simplex{{0, 1, 2}}, 6}});
    ReducedComplex rc = reduce(k, 5, 2);
    CHECK(rc.matched.empty());
    CHECK(rc.critical.size() == k.size());
    CHECK(rc.boundary == graded_boundary_matrix(k, 5));
    CHECK(rc.grades.at(k.id_of(Simplex{{0, 1, 2}})) == 6.0);
    CHECK(rc.dims.at(k.id_of(Simplex{{1, 2}})) == 1);
}

TEST_CASE("reduce truncates above the target dimension") {
    FilteredComplex k = full_simplex(4, 1.0);
    ReducedComplex rc = reduce(k, 3, 0);
    for (Label id : rc.critical) CHECK(rc.dims.at(id) <= 1);
}

TEST_CASE("grade-zero complexes reduce to betti-many critical cells") {
    struct Case {
        FilteredComplex k;
        std::vector<int> betti_by_dim;
    };
    std::vector<Case> cases;
    cases.push_back({hollow_simplex(3), {1, 1}});
    cases.push_back({full_simplex(3), {1, 0, 0}});
    cases.push_back({hollow_simplex(4), {1, 0, 1}});
    cases.push_back({full_simplex(4), {1, 0, 0, 0}});
    for (const Case& c : cases) {
        ReducedComplex rc = reduce(c.k, 2, int(c.betti_by_dim.size()));
        std::vector<int> counts(c.betti_by_dim.size(), 0);
        for (Label id : rc.critical) counts[rc.dims.at(id)]++;
        CHECK(counts == c.betti_by_dim);
        CHECK(rc.boundary.is_zero());
        CHECK(rc.critical.size() + 2 * rc.matched.size() == c.k.size());
    }
}

TEST_CASE("reduce preserves betti numbers on random complexes") {
    SplitMix64 gen(0xbe771);
    for (int trial = 0; trial < 8; ++trial) {
        FilteredComplex k = random_rips(gen, 6, 2);
        std::uint32_t p = (trial % 2 == 0) ? 2u : 3u;
        ReducedComplex rc = reduce(k, p, 2, gen.next());
        for (int d = 0; d <= 2; ++d) {
            CHECK(reduced_betti(rc, d, p) == betti(k, d, p));
        }
        for (const auto& [sigma, tau] : rc.matched) {
            CHECK(k.grade(sigma) == k.grade(tau));
            CHECK(k.dim(tau) == k.dim(sigma) + 1);
        }
        CHECK(matmul(rc.boundary, rc.boundary).is_zero());
    }
}

TEST_CASE("equal-grade incidences force a strictly smaller complex") {
    std::vector<std::vector<double>> dist = {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
    FilteredComplex k = rips_from_distances(dist, 2, 2);
    ReducedComplex rc = reduce(k, 5, 2);
    CHECK(rc.critical.size() < k.size());
    CHECK(!rc.matched.empty());
}
