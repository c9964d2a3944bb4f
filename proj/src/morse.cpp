#include "ph/morse.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

#include "ph/errors.hpp"
#include "ph/field.hpp"

namespace ph {

std::vector<Label> PartialMatching::matched_rows() const {
    std::vector<Label> out;
    out.reserve(pairs.size());
    for (const auto& [r, c] : pairs) out.push_back(r);
    return out;
}

std::vector<Label> PartialMatching::matched_cols() const {
    std::vector<Label> out;
    out.reserve(pairs.size());
    for (const auto& [r, c] : pairs) out.push_back(c);
    return out;
}

namespace {

void validate_matching(const IndexedMatrix& a, const PartialMatching& m) {
    std::set<Label> rows, cols;
    for (const auto& [r, c] : m.pairs) {
        if (!rows.insert(r).second) {
            throw std::runtime_error("row matched twice");
        }
        if (!cols.insert(c).second) {
            throw std::runtime_error("column matched twice");
        }
        if (a.at(r, c) == 0) {
            throw std::runtime_error("matched pair outside support");
        }
    }
    if (a.row_labels() == a.col_labels()) {
        for (const auto& [r, c] : m.pairs) {
            if (rows.count(c) != 0 || cols.count(r) != 0) {
                throw std::runtime_error("cell matched twice");
            }
        }
    }
}

using Successors = std::map<Label, std::vector<Label>>;

// Row-side walk: u steps to a matched row v when u lies in the support of
// v's partner column.
Successors row_successors(const IndexedMatrix& a, const PartialMatching& m) {
    Successors adj;
    for (const auto& [v, vb] : m.pairs) {
        for (const auto& [rp, val] : a.column(a.col_position(vb))) {
            adj[a.row_label_at(rp)].push_back(v);
        }
    }
    return adj;
}

// Column-side walk: a matched column v steps to every column in the
// support of v's partner row.
Successors col_successors(const IndexedMatrix& a, const PartialMatching& m) {
    IndexedMatrix t = transpose(a);
    Successors adj;
    for (const auto& [r, v] : m.pairs) {
        for (const auto& [rp, val] : t.column(t.col_position(r))) {
            adj[v].push_back(t.row_label_at(rp));
        }
    }
    return adj;
}

bool successors_acyclic(const Successors& adj) {
    std::map<Label, int> color;
    for (const auto& [start, unused] : adj) {
        if (color[start] != 0) continue;
        std::vector<std::pair<Label, std::size_t>> stack{{start, 0}};
        color[start] = 1;
        while (!stack.empty()) {
            auto& [u, next] = stack.back();
            auto it = adj.find(u);
            if (it == adj.end() || next >= it->second.size()) {
                color[u] = 2;
                stack.pop_back();
                continue;
            }
            Label s = it->second[next++];
            if (s == u) continue;
            int& c = color[s];
            if (c == 1) return false;
            if (c == 0) {
                c = 1;
                stack.push_back({s, 0});
            }
        }
    }
    return true;
}

bool matching_acyclic(const IndexedMatrix& a, const PartialMatching& m) {
    return successors_acyclic(row_successors(a, m)) &&
           successors_acyclic(col_successors(a, m));
}

InducedRelation close_over(const std::vector<Label>& universe,
                           const Successors& adj) {
    InducedRelation rel;
    for (Label u : universe) {
        rel.edges.insert({u, u});
        std::set<Label> seen{u};
        std::queue<Label> frontier;
        frontier.push(u);
        while (!frontier.empty()) {
            Label x = frontier.front();
            frontier.pop();
            auto it = adj.find(x);
            if (it == adj.end()) continue;
            for (Label s : it->second) {
                if (seen.insert(s).second) {
                    rel.edges.insert({u, s});
                    frontier.push(s);
                }
            }
        }
    }
    return rel;
}

}  // namespace

std::pair<InducedRelation, InducedRelation> induced_relations(
    const IndexedMatrix& a, const PartialMatching& m) {
    validate_matching(a, m);
    return {close_over(a.row_labels(), row_successors(a, m)),
            close_over(a.col_labels(), col_successors(a, m))};
}

bool is_acyclic(const IndexedMatrix& a, const PartialMatching& m) {
    validate_matching(a, m);
    return matching_acyclic(a, m);
}

namespace {

// Mutual minimal pairs of one boundary block: every column picks its
// latest support row, every row picks its earliest non-excluded column,
// and agreeing picks with equal grades form the matching.
PartialMatching harvest_pairs(const FilteredComplex& k, const IndexedMatrix& b,
                              const std::vector<std::size_t>& pos,
                              const std::set<Label>& excluded_cols) {
    std::map<Label, Label> face_pick;
    std::map<Label, Label> coface_pick;
    for (std::size_t cp = 0; cp < b.n_cols(); ++cp) {
        Label tau = b.col_label_at(cp);
        if (excluded_cols.count(tau) != 0) continue;
        const auto& col = b.column(cp);
        if (col.empty()) continue;
        Label best = -1;
        std::size_t best_pos = 0;
        bool first = true;
        for (const auto& [rp, val] : col) {
            Label sigma = b.row_label_at(rp);
            if (first || pos[sigma] > best_pos) {
                best = sigma;
                best_pos = pos[sigma];
                first = false;
            }
            auto it = coface_pick.find(sigma);
            if (it == coface_pick.end() || pos[tau] < pos[it->second]) {
                coface_pick[sigma] = tau;
            }
        }
        face_pick[tau] = best;
    }
    PartialMatching m;
    for (const auto& [tau, sigma] : face_pick) {
        auto it = coface_pick.find(sigma);
        if (it != coface_pick.end() && it->second == tau &&
            k.grade(sigma) == k.grade(tau)) {
            m.pairs.push_back({sigma, tau});
        }
    }
    std::sort(m.pairs.begin(), m.pairs.end());
    return m;
}

std::vector<std::size_t> order_positions(const FilteredComplex& k,
                                         std::uint64_t seed) {
    std::vector<Label> order = k.filtration_order(seed);
    std::vector<std::size_t> pos(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    return pos;
}

}  // namespace

PartialMatching obvious_pairs(const FilteredComplex& k, int dim,
                              std::uint32_t p, std::uint64_t seed) {
    if (dim < 0 || dim >= k.top_dimension()) return {};
    IndexedMatrix b = boundary_matrix(k, dim + 1, p);
    return harvest_pairs(k, b, order_positions(k, seed), {});
}

IndexedMatrix morse_boundary_schur(const IndexedMatrix& boundary,
                                   const PartialMatching& m) {
    if (boundary.row_labels() != boundary.col_labels()) {
        throw std::runtime_error("graded matrix must be square");
    }
    validate_matching(boundary, m);
    if (!matching_acyclic(boundary, m)) {
        throw std::runtime_error("cyclic matching");
    }
    IndexedMatrix s =
        schur_complement(boundary, m.matched_rows(), m.matched_cols());
    std::set<Label> taken;
    for (const auto& [r, c] : m.pairs) {
        taken.insert(r);
        taken.insert(c);
    }
    std::vector<Label> critical;
    for (Label l : boundary.row_labels()) {
        if (taken.count(l) == 0) critical.push_back(l);
    }
    return submatrix(s, critical, critical);
}

IndexedMatrix morse_boundary_paths(const FilteredComplex& k,
                                   const PartialMatching& m, std::uint32_t p) {
    IndexedMatrix d = graded_boundary_matrix(k, p);
    validate_matching(d, m);
    if (!matching_acyclic(d, m)) {
        throw std::runtime_error("cyclic matching");
    }

    std::map<Label, Label> up;
    std::set<Label> taken;
    for (const auto& [r, c] : m.pairs) {
        up[r] = c;
        taken.insert(r);
        taken.insert(c);
    }

    // Flow edges run from a matched cell to the other faces of its partner;
    // Kahn ordering makes each matched cell's accumulated weight final
    // before it is forwarded.
    std::map<Label, std::size_t> indegree;
    for (const auto& [sigma, tau] : up) indegree[sigma];
    for (const auto& [sigma, tau] : up) {
        for (const auto& [rp, val] : d.column(d.col_position(tau))) {
            Label other = d.row_label_at(rp);
            if (other != sigma && up.count(other) != 0) ++indegree[other];
        }
    }
    std::vector<Label> topo;
    std::queue<Label> ready;
    for (const auto& [sigma, deg] : indegree) {
        if (deg == 0) ready.push(sigma);
    }
    while (!ready.empty()) {
        Label sigma = ready.front();
        ready.pop();
        topo.push_back(sigma);
        for (const auto& [rp, val] : d.column(d.col_position(up[sigma]))) {
            Label other = d.row_label_at(rp);
            if (other != sigma && up.count(other) != 0 &&
                --indegree[other] == 0) {
                ready.push(other);
            }
        }
    }

    std::vector<Label> critical;
    for (Label l : d.row_labels()) {
        if (taken.count(l) == 0) critical.push_back(l);
    }

    EntryList entries;
    for (Label beta : critical) {
        const auto& direct = d.column(d.col_position(beta));
        if (direct.empty()) continue;
        std::map<Label, std::uint32_t> w;
        for (const auto& [rp, val] : direct) w[d.row_label_at(rp)] = val;
        for (Label sigma : topo) {
            auto it = w.find(sigma);
            if (it == w.end() || it->second == 0) continue;
            Label tau = up[sigma];
            std::uint32_t flow =
                mul_mod(it->second, inv_mod(d.at(sigma, tau), p), p);
            for (const auto& [rp, val] : d.column(d.col_position(tau))) {
                Label other = d.row_label_at(rp);
                if (other == sigma) continue;
                std::uint32_t& slot = w[other];
                slot = sub_mod(slot, mul_mod(flow, val, p), p);
            }
        }
        for (Label alpha : critical) {
            auto it = w.find(alpha);
            if (it != w.end() && it->second != 0) {
                entries.emplace_back(alpha, beta, it->second);
            }
        }
    }
    return IndexedMatrix(critical, critical, p, entries);
}

ReducedComplex reduce(const FilteredComplex& k, std::uint32_t p,
                      int target_dim, std::uint64_t seed, bool augment) {
    std::vector<std::size_t> pos = order_positions(k, seed);
    const int top = k.top_dimension();

    std::set<Label> taken;
    std::vector<PartialMatching> level(std::max(top, 0));
    for (int d = top - 1; d >= 0; --d) {
        IndexedMatrix b = boundary_matrix(k, d + 1, p);
        level[d] = harvest_pairs(k, b, pos, taken);
        for (const auto& [sigma, tau] : level[d].pairs) {
            taken.insert(sigma);
            taken.insert(tau);
        }
    }

    ReducedComplex out;
    if (augment) {
        double lowest = 0.0;
        for (Label id = 0; id < Label(k.size()); ++id) {
            lowest = (id == 0) ? k.grade(id) : std::min(lowest, k.grade(id));
        }
        out.critical.push_back(-1);
        out.grades[-1] = lowest;
        out.dims[-1] = -1;
    }
    for (Label id = 0; id < Label(k.size()); ++id) {
        if (taken.count(id) != 0 || k.dim(id) > target_dim + 1) continue;
        out.critical.push_back(id);
        out.grades[id] = k.grade(id);
        out.dims[id] = k.dim(id);
    }
    std::set<Label> critical_set(out.critical.begin(), out.critical.end());

    EntryList entries;
    for (int d = 0; d <= std::min(target_dim, top - 1); ++d) {
        IndexedMatrix block = boundary_matrix(k, d + 1, p);
        if (!level[d].pairs.empty()) {
            block = schur_complement(block, level[d].matched_rows(),
                                     level[d].matched_cols());
        }
        for (const auto& [r, c, v] : block.entries()) {
            if (critical_set.count(r) != 0 && critical_set.count(c) != 0) {
                entries.emplace_back(r, c, v);
            }
        }
    }
    if (augment) {
        for (Label id : out.critical) {
            if (out.dims[id] == 0) entries.emplace_back(-1, id, p - 1);
        }
    }
    out.boundary = IndexedMatrix(out.critical, out.critical, p, entries);
    for (const PartialMatching& m : level) {
        out.matched.insert(out.matched.end(), m.pairs.begin(), m.pairs.end());
    }
    return out;
}

}  // namespace ph
