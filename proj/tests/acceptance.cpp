// Acceptance gate: nine end-to-end checks covering the worked examples, the
// oracle equivalences, the structural invariants, and one scaled timing run.
// Each check prints a single PASS or FAIL line; the exit code is the number
// of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ph/barcode.hpp"
#include "ph/complex.hpp"
#include "ph/matroid.hpp"
#include "ph/morse.hpp"
#include "ph/oracle.hpp"
#include "ph/persistence.hpp"
#include "ph/rng.hpp"
#include "ph/sparse.hpp"

using namespace ph;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void fail(const std::string& why) {
        ok = false;
        if (!detail.empty()) detail += "; ";
        detail += why;
    }
    void expect(bool cond, const std::string& why) {
        if (!cond) fail(why);
    }
};

DenseMatrix dense_from(const IndexedMatrix& a) {
    DenseMatrix out;
    out.rows.assign(a.n_rows(), std::vector<FieldElement>(
                                    a.n_cols(), {0, a.modulus()}));
    for (const auto& [r, c, v] : a.entries()) {
        out.rows[a.row_position(r)][a.col_position(c)] =
            FieldElement(v, a.modulus());
    }
    return out;
}

FilteredComplex random_rips(SplitMix64& gen, int n_points, int max_dim) {
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < n_points; ++i) pts.push_back({gen.unit(), gen.unit()});
    return rips_from_points(pts, max_dim, 2.0);
}

// Downward-closed random complex with at most 20 cells and dimension <= 3,
// graded zero throughout.
FilteredComplex random_small_complex(SplitMix64& gen) {
    const int n_vertices = 4 + int(gen.below(3));
    std::set<Simplex> cells;
    cells.insert(Simplex{{0}});
    for (int attempt = 0; attempt < 8; ++attempt) {
        int top = 1 + int(gen.below(3));
        std::vector<int> verts(n_vertices);
        for (int i = 0; i < n_vertices; ++i) verts[i] = i;
        deterministic_shuffle(verts, gen.next());
        verts.resize(top + 1);
        std::sort(verts.begin(), verts.end());

        std::set<Simplex> widened = cells;
        for (std::size_t mask = 1; mask < (std::size_t(1) << verts.size());
             ++mask) {
            Simplex s;
            for (std::size_t i = 0; i < verts.size(); ++i) {
                if (mask & (std::size_t(1) << i)) {
                    s.vertices.push_back(verts[i]);
                }
            }
            widened.insert(s);
        }
        if (widened.size() <= 20) cells = widened;
    }
    std::vector<std::pair<Simplex, double>> graded;
    for (const Simplex& s : cells) graded.push_back({s, 0.0});
    return FilteredComplex(std::move(graded));
}

// Greedy random matching on the differential, kept acyclic by testing after
// every tentative pair.
PartialMatching random_acyclic_matching(const IndexedMatrix& d,
                                        SplitMix64& gen) {
    auto entries = d.entries();
    std::vector<std::size_t> idx(entries.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    deterministic_shuffle(idx, gen.next());
    PartialMatching m;
    std::set<Label> used;
    for (std::size_t i : idx) {
        const auto& [r, c, v] = entries[i];
        (void)v;
        if (used.count(r) != 0 || used.count(c) != 0) continue;
        m.pairs.push_back({r, c});
        if (!is_acyclic(d, m)) {
            m.pairs.pop_back();
            continue;
        }
        used.insert(r);
        used.insert(c);
    }
    return m;
}

long long vm_hwm_kb() {
    std::ifstream status("/proc/self/status");
    std::string line;
    while (std::getline(status, line)) {
        if (line.rfind("VmHWM:", 0) == 0) {
            std::istringstream ss(line.substr(6));
            long long kb = 0;
            ss >> kb;
            return kb;
        }
    }
    return -1;
}

// 1. Worked rank-3 example on six elements: both fundamental circuits and
// the single-exchange representation, entry by entry.
Outcome check_circuits_and_exchange() {
    Outcome out;
    const Label a1 = 0, a2 = 1, a3 = 2, b1 = 3, b2 = 4, b3 = 5;
    StandardRep rep(IndexedMatrix({b1, b2, b3}, {a1, a2, a3}, 2,
                                  {{b1, a2, 1},
                                   {b1, a3, 1},
                                   {b2, a1, 1},
                                   {b2, a2, 1},
                                   {b3, a1, 1},
                                   {b3, a2, 1},
                                   {b3, a3, 1}}));

    out.expect(fundamental_circuit(rep, a1) == LabelSet{a1, b2, b3},
               "circuit of a1");
    out.expect(fundamental_circuit(rep, a3) == LabelSet{a3, b1, b3},
               "circuit of a3");

    StandardRep ex = exchange_basis(rep, {{b2, a2}});
    out.expect(ex.basis() == std::vector<Label>{b1, a2, b3}, "basis rows");
    out.expect(ex.cobasis() == std::vector<Label>{a1, b2, a3}, "cobasis");
    const IndexedMatrix& m = ex.matrix();
    const std::vector<std::vector<std::uint32_t>> expected = {
        {1, 1, 1}, {1, 1, 0}, {0, 1, 1}};
    const std::vector<Label> rows = {b1, a2, b3}, cols = {a1, b2, a3};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (m.at(rows[i], cols[j]) != expected[i][j]) {
                out.fail("exchange entry (" + std::to_string(rows[i]) + "," +
                         std::to_string(cols[j]) + ")");
            }
        }
    }
    return out;
}

// 2. Worked 4x4 triangular inverse, entry by entry, including the lone
// below-diagonal -1 outside the band.
Outcome check_triangular_inverse() {
    Outcome out;
    const std::vector<std::vector<int>> a_dense = {
        {1, 0, 0, 0}, {0, 1, 0, 0}, {1, 1, 1, 0}, {1, 1, 1, 1}};
    const std::vector<std::vector<int>> inv_dense = {
        {1, 0, 0, 0}, {0, 1, 0, 0}, {-1, -1, 1, 0}, {0, 0, -1, 1}};
    const std::vector<Label> labels = {0, 1, 2, 3};

    for (std::uint32_t p : {2u, 3u, 7u}) {
        EntryList e;
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                if (a_dense[i][j] != 0) e.emplace_back(i, j, a_dense[i][j]);
            }
        }
        IndexedMatrix a(labels, labels, p, e);
        IndexedMatrix inv = mobius_inverse(a);
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                std::uint32_t want =
                    std::uint32_t(((inv_dense[i][j] % int(p)) + int(p)) %
                                  int(p));
                if (inv.at(i, j) != want) {
                    out.fail("inverse entry (" + std::to_string(i) + "," +
                             std::to_string(j) + ") over GF(" +
                             std::to_string(p) + ")");
                }
            }
        }
        out.expect(p == 2 || inv.at(3, 2) == p - 1,
                   "distinguished -1 entry over GF(" + std::to_string(p) +
                       ")");
        out.expect(matmul(a, inv) == IndexedMatrix::identity(labels, p),
                   "right inverse over GF(" + std::to_string(p) + ")");
    }
    return out;
}

// 3. 200 random clouds of at most 8 points, two fields, with and without
// the Morse front end; barcodes must equal the reference reduction.
Outcome check_oracle_equivalence() {
    Outcome out;
    SplitMix64 gen(0xacce55);
    int mismatches = 0;
    for (int trial = 0; trial < 200; ++trial) {
        int n = 1 + int(gen.below(8));
        FilteredComplex k = random_rips(gen, n, 2);
        for (std::uint32_t p : {2u, 7u}) {
            Barcode want = standard_reduction_barcode(k, p, 2);
            for (bool reduce_first : {true, false}) {
                EngineOptions opts;
                opts.reduce = reduce_first;
                if (compute_barcode(k, p, 2, opts) != want) ++mismatches;
            }
        }
    }
    out.expect(mismatches == 0,
               std::to_string(mismatches) + " barcode mismatches");
    return out;
}

// 4. Path and Schur differentials agree on random acyclic matchings over
// random small complexes, square to zero, and preserve Betti numbers.
Outcome check_morse_cross_formula() {
    Outcome out;
    SplitMix64 gen(0x4d0e5e);
    int nonempty = 0;
    for (int trial = 0; trial < 50; ++trial) {
        FilteredComplex k = random_small_complex(gen);
        std::uint32_t p = (trial % 2 == 0) ? 2u : 5u;
        IndexedMatrix d = graded_boundary_matrix(k, p);
        PartialMatching m = random_acyclic_matching(d, gen);
        if (!m.pairs.empty()) ++nonempty;

        IndexedMatrix schur = morse_boundary_schur(d, m);
        IndexedMatrix paths = morse_boundary_paths(k, m, p);
        if (schur != paths) {
            out.fail("path/Schur mismatch in trial " + std::to_string(trial));
            continue;
        }
        if (!matmul(schur, schur).is_zero()) {
            out.fail("differential square nonzero in trial " +
                     std::to_string(trial));
            continue;
        }

        std::map<int, std::vector<Label>> crit;
        for (Label id : schur.row_labels()) crit[k.dim(id)].push_back(id);
        for (int dim = 0; dim <= 3; ++dim) {
            IndexedMatrix down = submatrix(schur, crit[dim - 1], crit[dim]);
            IndexedMatrix up = submatrix(schur, crit[dim], crit[dim + 1]);
            int b = int(crit[dim].size()) -
                    int(lu_exchange(down).pivot_sequence.size()) -
                    int(lu_exchange(up).pivot_sequence.size());
            if (b != betti(k, dim, p)) {
                out.fail("Betti " + std::to_string(dim) + " off in trial " +
                         std::to_string(trial));
            }
        }
    }
    out.expect(nonempty >= 25, "too few nonempty matchings to be probative");
    return out;
}

// 5. Barcode JSON is byte-identical across tie-breaking seeds.
Outcome check_seed_invariance() {
    Outcome out;
    SplitMix64 gen(0x5eed);
    for (int trial = 0; trial < 20; ++trial) {
        FilteredComplex k = random_rips(gen, 6 + int(gen.below(3)), 2);
        std::uint32_t p = (trial % 2 == 0) ? 2u : 7u;
        std::string base;
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            EngineOptions opts;
            opts.seed = seed;
            std::string text = to_json(compute_barcode(k, p, 2, opts));
            if (seed == 0) {
                base = text;
            } else if (text != base) {
                out.fail("seed " + std::to_string(seed) + " diverged in trial " +
                         std::to_string(trial));
            }
        }
    }
    return out;
}

// 6. Exact L*D*U recomposition and rank agreement on 100 random sparse
// matrices up to 200x200 at density up to 5%.
Outcome check_lu_exactness() {
    Outcome out;
    SplitMix64 gen(0x10fac);
    const std::uint32_t primes[3] = {2, 3, 7};
    for (int trial = 0; trial < 100; ++trial) {
        std::uint32_t p = primes[gen.below(3)];
        std::size_t r = 1 + gen.below(200);
        std::size_t c = 1 + gen.below(200);
        std::size_t want = std::size_t(double(r * c) * 0.05 * gen.unit());

        std::set<std::pair<Label, Label>> support;
        for (std::size_t i = 0; i < want; ++i) {
            support.insert({Label(gen.below(r)), Label(gen.below(c))});
        }
        EntryList e;
        for (const auto& [row, col] : support) {
            e.emplace_back(row, col, 1 + (long long)gen.below(p - 1));
        }
        std::vector<Label> rows(r), cols(c);
        for (std::size_t i = 0; i < r; ++i) rows[i] = Label(i);
        for (std::size_t j = 0; j < c; ++j) cols[j] = Label(j);
        IndexedMatrix a(rows, cols, p, e);

        LUFactorization f = lu_exchange(a);
        if (matmul(matmul(f.L, f.D), f.U) != a) {
            out.fail("recomposition failed in trial " + std::to_string(trial));
        }
        if (int(f.pivot_sequence.size()) != dense_rank(dense_from(a))) {
            out.fail("rank mismatch in trial " + std::to_string(trial));
        }
    }
    return out;
}

// 7. Basis-complement duality, exhaustively over every subset of small
// ground sets, and greedy minimum weight against exhaustive search.
Outcome check_matroid_duality_and_greedy() {
    Outcome out;
    SplitMix64 gen(0xd7a1);
    const std::uint32_t primes[3] = {2, 3, 5};

    auto random_rep = [&](std::size_t max_ground) {
        std::uint32_t p = primes[gen.below(3)];
        std::size_t r = 1 + gen.below(max_ground - 1);
        std::size_t c = 1 + gen.below(max_ground - r);
        std::vector<Label> rows(r), cols(c);
        for (std::size_t i = 0; i < r; ++i) rows[i] = Label(i);
        for (std::size_t j = 0; j < c; ++j) cols[j] = Label(r + j);
        EntryList e;
        for (Label row : rows) {
            for (Label col : cols) {
                long long v = (long long)gen.below(p);
                if (v != 0) e.emplace_back(row, col, v);
            }
        }
        return StandardRep(IndexedMatrix(rows, cols, p, e));
    };

    for (int trial = 0; trial < 50; ++trial) {
        StandardRep rep = random_rep(7);
        StandardRep co = dual(rep);
        std::vector<Label> ground = rep.ground_set();
        std::size_t rk = rep.basis().size();

        for (std::size_t mask = 0; mask < (std::size_t(1) << ground.size());
             ++mask) {
            LabelSet s, complement;
            for (std::size_t i = 0; i < ground.size(); ++i) {
                if (mask & (std::size_t(1) << i)) {
                    s.insert(ground[i]);
                } else {
                    complement.insert(ground[i]);
                }
            }
            bool basis_here = s.size() == rk && is_independent(rep, s);
            bool cobasis_there = complement.size() == ground.size() - rk &&
                                 is_independent(co, complement);
            if (basis_here != cobasis_there) {
                out.fail("duality broke in trial " + std::to_string(trial));
                mask = (std::size_t(1) << ground.size());
            }
        }
    }

    for (int trial = 0; trial < 50; ++trial) {
        StandardRep rep = random_rep(8);
        std::vector<Label> ground = rep.ground_set();
        std::size_t rk = rep.basis().size();
        WeightFunction weights;
        for (Label e : ground) weights[e] = (long long)gen.below(10);

        long long best = -1;
        for (std::size_t mask = 0; mask < (std::size_t(1) << ground.size());
             ++mask) {
            LabelSet s;
            long long w = 0;
            for (std::size_t i = 0; i < ground.size(); ++i) {
                if (mask & (std::size_t(1) << i)) {
                    s.insert(ground[i]);
                    w += weights[ground[i]];
                }
            }
            if (s.size() != rk || !is_independent(rep, s)) continue;
            if (best < 0 || w < best) best = w;
        }

        long long got = 0;
        for (Label e : greedy_minimal_basis(rep, weights)) got += weights[e];
        if (got != best) {
            out.fail("greedy weight " + std::to_string(got) + " vs minimum " +
                     std::to_string(best) + " in trial " +
                     std::to_string(trial));
        }
    }
    return out;
}

// 8. Noisy circle: one loop dominates by at least 5x, and the whole barcode
// matches the reference reduction.
Outcome check_circle_signal() {
    Outcome out;
    SplitMix64 gen(0xc17c1e);
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < 100; ++i) {
        double theta = 2.0 * 3.14159265358979323846 * gen.unit();
        double radius = 1.0 + 0.1 * (2.0 * gen.unit() - 1.0);
        pts.push_back({radius * std::cos(theta), radius * std::sin(theta)});
    }
    FilteredComplex k = rips_from_points(pts, 2, 3.0);

    Barcode got = compute_barcode(k, 2, 1);
    if (got != standard_reduction_barcode(k, 2, 1)) {
        out.fail("barcode differs from the reference reduction");
    }

    std::vector<double> lengths;
    for (const Interval& iv : got.in_dim(1)) {
        lengths.push_back(iv.death - iv.birth);
    }
    std::sort(lengths.rbegin(), lengths.rend());
    if (lengths.empty()) {
        out.fail("no loop detected");
    } else {
        double top = lengths[0];
        double next = lengths.size() > 1 ? lengths[1] : 0.0;
        if (!(next == 0.0 || top >= 5.0 * next)) {
            out.fail("dominant loop only " + shortest_decimal(top / next) +
                     "x the runner-up");
        }
    }
    return out;
}

// 9. Torus sample at a scale admitting at least 1e5 simplices; checks wall
// time via the harness limit and peak memory via VmHWM.
Outcome check_torus_timing(std::size_t* cells_out, long long* hwm_out) {
    Outcome out;
    SplitMix64 gen(0x70f05);
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < 150; ++i) {
        double u = 2.0 * 3.14159265358979323846 * gen.unit();
        double v = 2.0 * 3.14159265358979323846 * gen.unit();
        double ring = 1.0 + 0.35 * std::cos(v);
        pts.push_back(
            {ring * std::cos(u), ring * std::sin(u), 0.35 * std::sin(v)});
    }

    FilteredComplex k;
    std::size_t cells = 0;
    for (double scale : {0.55, 0.65, 0.75, 0.9, 1.1, 1.4, 1.8, 2.7}) {
        k = rips_from_points(pts, 2, scale);
        cells = k.size();
        if (cells >= 100000) break;
    }
    *cells_out = cells;
    if (cells < 100000) {
        out.fail("only " + std::to_string(cells) + " simplices at full scale");
        return out;
    }

    Barcode bc = compute_barcode(k, 2, 1);
    out.expect(!bc.in_dim(0).empty(), "no connected components reported");

    long long hwm = vm_hwm_kb();
    *hwm_out = hwm;
    if (hwm < 0) {
        out.fail("peak memory unavailable");
    } else if (hwm >= 2ll * 1024 * 1024) {
        out.fail("peak memory " + std::to_string(hwm) + " kB");
    }
    return out;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        double limit_seconds;
        Outcome result;
        double elapsed = 0;
    };

    std::size_t torus_cells = 0;
    long long torus_hwm = -1;

    std::vector<Criterion> criteria = {
        {"worked circuits and basis exchange", 1, {}, 0},
        {"worked 4x4 triangular inverse", 1, {}, 0},
        {"barcode equals reference on 200 random clouds", 60, {}, 0},
        {"path and Schur differentials with Betti preservation", 30, {}, 0},
        {"barcode JSON invariant across pivot seeds", 30, {}, 0},
        {"exact LDU and rank on random sparse matrices", 60, {}, 0},
        {"basis-complement duality and greedy weight", 60, {}, 0},
        {"noisy circle has one dominant loop", 120, {}, 0},
        {"torus run within time and memory budget", 120, {}, 0},
    };

    for (std::size_t i = 0; i < criteria.size(); ++i) {
        auto start = std::chrono::steady_clock::now();
        switch (i) {
            case 0: criteria[i].result = check_circuits_and_exchange(); break;
            case 1: criteria[i].result = check_triangular_inverse(); break;
            case 2: criteria[i].result = check_oracle_equivalence(); break;
            case 3: criteria[i].result = check_morse_cross_formula(); break;
            case 4: criteria[i].result = check_seed_invariance(); break;
            case 5: criteria[i].result = check_lu_exactness(); break;
            case 6:
                criteria[i].result = check_matroid_duality_and_greedy();
                break;
            case 7: criteria[i].result = check_circle_signal(); break;
            case 8:
                criteria[i].result =
                    check_torus_timing(&torus_cells, &torus_hwm);
                break;
        }
        criteria[i].elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start)
                .count();
        if (criteria[i].elapsed > criteria[i].limit_seconds) {
            criteria[i].result.fail("exceeded " +
                                    std::to_string(criteria[i].limit_seconds) +
                                    " s limit");
        }
    }

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const Criterion& c = criteria[i];
        std::printf("[%s] %zu. %s (%.2f s, limit %.0f s)\n",
                    c.result.ok ? "PASS" : "FAIL", i + 1, c.name, c.elapsed,
                    c.limit_seconds);
        if (!c.result.ok) {
            ++failures;
            std::printf("       %s\n", c.result.detail.c_str());
        }
        if (i == 8 && torus_cells > 0) {
            std::printf("       torus complex: %zu cells, peak memory %lld "
                        "kB\n",
                        torus_cells, torus_hwm);
        }
    }
    std::printf("acceptance: %zu/%zu criteria passed\n",
                criteria.size() - std::size_t(failures), criteria.size());
    return failures;
}
