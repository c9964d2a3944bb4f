#include "ph/matroid.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

#include "ph/field.hpp"

namespace ph {

namespace {

void check_element(const StandardRep& rep, Label e) {
    if (!rep.has_element(e)) throw std::runtime_error("unknown element");
}

// Column of the full representation [I | M] over the basis coordinates.
SparseVector full_column(const StandardRep& rep, Label e) {
    SparseVector col;
    if (rep.in_basis(e)) {
        col[e] = 1;
        return col;
    }
    const auto& m = rep.matrix();
    std::size_t cp = m.col_position(e);
    for (const auto& [rp, v] : m.column(cp)) {
        col[m.row_label_at(rp)] = v;
    }
    return col;
}

IndexedMatrix columns_matrix(const StandardRep& rep, const LabelSet& s) {
    EntryList entries;
    std::vector<Label> cols;
    for (Label e : s) {
        check_element(rep, e);
        cols.push_back(e);
        for (const auto& [r, v] : full_column(rep, e)) {
            entries.emplace_back(r, e, v);
        }
    }
    return IndexedMatrix(rep.basis(), cols, rep.modulus(), entries);
}

std::optional<std::vector<std::vector<std::uint32_t>>> dense_inverse(
    std::vector<std::vector<std::uint32_t>> m, std::uint32_t p) {
    const std::size_t k = m.size();
    std::vector<std::vector<std::uint32_t>> inv(
        k, std::vector<std::uint32_t>(k, 0));
    for (std::size_t i = 0; i < k; ++i) inv[i][i] = 1;
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t piv = col;
        while (piv < k && m[piv][col] == 0) ++piv;
        if (piv == k) return std::nullopt;
        std::swap(m[piv], m[col]);
        std::swap(inv[piv], inv[col]);
        std::uint32_t f = inv_mod(m[col][col], p);
        for (std::size_t j = 0; j < k; ++j) {
            m[col][j] = mul_mod(m[col][j], f, p);
            inv[col][j] = mul_mod(inv[col][j], f, p);
        }
        for (std::size_t i = 0; i < k; ++i) {
            if (i == col || m[i][col] == 0) continue;
            std::uint32_t g = m[i][col];
            for (std::size_t j = 0; j < k; ++j) {
                m[i][j] = sub_mod(m[i][j], mul_mod(g, m[col][j], p), p);
                inv[i][j] = sub_mod(inv[i][j], mul_mod(g, inv[col][j], p), p);
            }
        }
    }
    return inv;
}

}  // namespace

StandardRep::StandardRep(IndexedMatrix m) : m_(std::move(m)) {
    for (Label b : m_.row_labels()) {
        if (m_.has_col(b)) {
            throw std::runtime_error("basis and cobasis overlap");
        }
    }
}

std::vector<Label> StandardRep::ground_set() const {
    std::vector<Label> all(basis());
    all.insert(all.end(), cobasis().begin(), cobasis().end());
    return all;
}

std::size_t rank(const StandardRep& rep, const LabelSet& s) {
    if (s.empty()) return 0;
    return lu_exchange(columns_matrix(rep, s)).pivot_sequence.size();
}

bool is_independent(const StandardRep& rep, const LabelSet& s) {
    return rank(rep, s) == s.size();
}

LabelSet closure(const StandardRep& rep, const LabelSet& s) {
    for (Label e : s) check_element(rep, e);
    std::size_t base = rank(rep, s);
    LabelSet out = s;
    for (Label e : rep.ground_set()) {
        if (out.count(e)) continue;
        LabelSet probe = s;
        probe.insert(e);
        if (rank(rep, probe) == base) out.insert(e);
    }
    return out;
}

LabelSet loops(const StandardRep& rep) {
    LabelSet out;
    const auto& m = rep.matrix();
    for (std::size_t j = 0; j < m.n_cols(); ++j) {
        if (m.column(j).empty()) out.insert(m.col_label_at(j));
    }
    return out;
}

LabelSet fundamental_circuit(const StandardRep& rep, Label e) {
    check_element(rep, e);
    if (rep.in_basis(e)) throw std::runtime_error("element is in the basis");
    LabelSet circuit{e};
    for (const auto& [b, v] : full_column(rep, e)) circuit.insert(b);
    return circuit;
}

StandardRep exchange_basis(const StandardRep& rep,
                           const std::vector<std::pair<Label, Label>>& pairs) {
    const auto& m = rep.matrix();
    const std::uint32_t p = rep.modulus();
    const std::size_t k = pairs.size();

    std::map<Label, std::size_t> exit_index, enter_index;
    for (std::size_t i = 0; i < k; ++i) {
        auto [b, e] = pairs[i];
        if (!rep.in_basis(b)) throw std::runtime_error("exchange exit not in basis");
        if (!m.has_col(e)) throw std::runtime_error("exchange entry not in cobasis");
        if (!exit_index.emplace(b, i).second ||
            !enter_index.emplace(e, i).second) {
            throw std::runtime_error("duplicate exchange element");
        }
    }

    std::vector<std::vector<std::uint32_t>> block(
        k, std::vector<std::uint32_t>(k, 0));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            block[i][j] = m.at(pairs[i].first, pairs[j].second);
        }
    }
    auto inv = dense_inverse(block, p);
    if (!inv) throw std::runtime_error("pivot block singular");
    const auto& a_inv = *inv;

    // New labels: entering elements take the exiting rows' slots in place,
    // and symmetrically for columns.
    std::vector<Label> new_rows(rep.basis());
    for (auto& r : new_rows) {
        auto it = exit_index.find(r);
        if (it != exit_index.end()) r = pairs[it->second].second;
    }
    std::vector<Label> new_cols(rep.cobasis());
    for (auto& c : new_cols) {
        auto it = enter_index.find(c);
        if (it != enter_index.end()) c = pairs[it->second].first;
    }

    // Staying rows, in basis order, with their positions.
    std::vector<Label> stay;
    for (Label b : rep.basis()) {
        if (!exit_index.count(b)) stay.push_back(b);
    }

    EntryList entries;
    auto exiting_col = [&](std::size_t pair_pos) {
        // Column of the element leaving the basis: a^{-1} on the entering
        // rows, -(c a^{-1}) on the staying rows.
        Label col_label = pairs[pair_pos].first;
        for (std::size_t i = 0; i < k; ++i) {
            if (a_inv[i][pair_pos] != 0) {
                entries.emplace_back(pairs[i].second, col_label,
                                     a_inv[i][pair_pos]);
            }
        }
        for (Label b : stay) {
            std::uint64_t acc = 0;
            for (std::size_t i = 0; i < k; ++i) {
                acc = (acc + std::uint64_t(m.at(b, pairs[i].second)) *
                                 a_inv[i][pair_pos]) %
                      p;
            }
            if (acc != 0) {
                entries.emplace_back(b, col_label, (long long)(p - acc));
            }
        }
    };
    auto staying_col = [&](Label x) {
        // a^{-1} M(I, x) on entering rows; M(K, x) - c a^{-1} M(I, x) on
        // staying rows.
        std::vector<std::uint32_t> mix(k, 0);
        for (std::size_t j = 0; j < k; ++j) mix[j] = m.at(pairs[j].first, x);
        std::vector<std::uint32_t> top(k, 0);
        for (std::size_t i = 0; i < k; ++i) {
            std::uint64_t acc = 0;
            for (std::size_t j = 0; j < k; ++j) {
                acc = (acc + std::uint64_t(a_inv[i][j]) * mix[j]) % p;
            }
            top[i] = std::uint32_t(acc);
            if (top[i] != 0) entries.emplace_back(pairs[i].second, x, top[i]);
        }
        for (Label b : stay) {
            std::uint64_t corr = 0;
            for (std::size_t i = 0; i < k; ++i) {
                corr = (corr + std::uint64_t(m.at(b, pairs[i].second)) * top[i]) %
                       p;
            }
            std::uint32_t v = sub_mod(m.at(b, x), std::uint32_t(corr), p);
            if (v != 0) entries.emplace_back(b, x, v);
        }
    };

    for (Label c : rep.cobasis()) {
        auto it = enter_index.find(c);
        if (it != enter_index.end()) {
            exiting_col(it->second);
        } else {
            staying_col(c);
        }
    }
    return StandardRep(IndexedMatrix(new_rows, new_cols, p, entries));
}

StandardRep deletion(const StandardRep& rep, const LabelSet& s) {
    for (Label e : s) check_element(rep, e);
    StandardRep cur = rep;
    // Pivot deleted elements out of the basis while a replacement exists.
    for (;;) {
        bool exchanged = false;
        for (Label b : cur.basis()) {
            if (!s.count(b)) continue;
            for (Label e : cur.cobasis()) {
                if (s.count(e) || cur.matrix().at(b, e) == 0) continue;
                cur = exchange_basis(cur, {{b, e}});
                exchanged = true;
                break;
            }
            if (exchanged) break;
        }
        if (!exchanged) break;
    }
    std::vector<Label> keep_rows, keep_cols;
    for (Label b : cur.basis()) {
        if (!s.count(b)) keep_rows.push_back(b);
    }
    for (Label e : cur.cobasis()) {
        if (!s.count(e)) keep_cols.push_back(e);
    }
    return StandardRep(submatrix(cur.matrix(), keep_rows, keep_cols));
}

StandardRep contraction(const StandardRep& rep, const LabelSet& s) {
    for (Label e : s) check_element(rep, e);
    StandardRep cur = rep;
    // Pivot a maximal independent part of s into the basis.
    for (;;) {
        bool exchanged = false;
        for (Label e : cur.cobasis()) {
            if (!s.count(e)) continue;
            for (Label b : cur.basis()) {
                if (s.count(b) || cur.matrix().at(b, e) == 0) continue;
                cur = exchange_basis(cur, {{b, e}});
                exchanged = true;
                break;
            }
            if (exchanged) break;
        }
        if (!exchanged) break;
    }
    std::vector<Label> keep_rows, keep_cols;
    for (Label b : cur.basis()) {
        if (!s.count(b)) keep_rows.push_back(b);
    }
    for (Label e : cur.cobasis()) {
        if (!s.count(e)) keep_cols.push_back(e);
    }
    return StandardRep(submatrix(cur.matrix(), keep_rows, keep_cols));
}

StandardRep dual(const StandardRep& rep) {
    const auto& m = rep.matrix();
    EntryList entries;
    for (const auto& [r, c, v] : m.entries()) {
        entries.emplace_back(c, r, (long long)neg_mod(v, rep.modulus()));
    }
    return StandardRep(IndexedMatrix(rep.cobasis(), rep.basis(),
                                     rep.modulus(), entries));
}

std::vector<Label> greedy_minimal_basis(const StandardRep& rep,
                                        const WeightFunction& weights) {
    std::vector<Label> order = rep.ground_set();
    for (Label e : order) {
        if (!weights.count(e)) throw std::runtime_error("missing weight");
    }
    std::sort(order.begin(), order.end(), [&](Label a, Label b) {
        auto wa = weights.at(a), wb = weights.at(b);
        return wa != wb ? wa < wb : a < b;
    });
    std::vector<Label> picked;
    LabelSet picked_set;
    for (Label e : order) {
        picked_set.insert(e);
        if (rank(rep, picked_set) == picked_set.size()) {
            picked.push_back(e);
        } else {
            picked_set.erase(e);
        }
    }
    return picked;
}

bool is_modular_pair(const StandardRep& rep, const LabelSet& a,
                     const LabelSet& b) {
    LabelSet uni = a, inter;
    uni.insert(b.begin(), b.end());
    for (Label e : a) {
        if (b.count(e)) inter.insert(e);
    }
    return rank(rep, a) + rank(rep, b) == rank(rep, uni) + rank(rep, inter);
}

namespace {

bool is_two_chain(const std::vector<LabelSet>& family) {
    const std::size_t n = family.size();
    auto comparable = [&](std::size_t i, std::size_t j) {
        return std::includes(family[i].begin(), family[i].end(),
                             family[j].begin(), family[j].end()) ||
               std::includes(family[j].begin(), family[j].end(),
                             family[i].begin(), family[i].end());
    };
    // 2-color the incomparability graph; color classes are then chains.
    std::vector<int> color(n, -1);
    for (std::size_t start = 0; start < n; ++start) {
        if (color[start] != -1) continue;
        color[start] = 0;
        std::vector<std::size_t> stack{start};
        while (!stack.empty()) {
            std::size_t u = stack.back();
            stack.pop_back();
            for (std::size_t v = 0; v < n; ++v) {
                if (v == u || comparable(u, v)) continue;
                if (color[v] == -1) {
                    color[v] = 1 - color[u];
                    stack.push_back(v);
                } else if (color[v] == color[u]) {
                    return false;
                }
            }
        }
    }
    return true;
}

}  // namespace

bool is_freely_generated(const StandardRep& rep,
                         const std::vector<LabelSet>& family) {
    for (const auto& s : family) {
        for (Label e : s) check_element(rep, e);
    }
    if (family.empty()) return true;

    if (is_two_chain(family)) {
        for (std::size_t i = 0; i < family.size(); ++i) {
            for (std::size_t j = i + 1; j < family.size(); ++j) {
                if (!is_modular_pair(rep, family[i], family[j])) return false;
            }
        }
        return true;
    }

    if (rep.ground_size() > 12) throw std::runtime_error("instance too large");

    std::vector<Label> ground = rep.ground_set();
    const std::size_t n = ground.size();
    const std::size_t r = rep.basis().size();
    std::vector<std::size_t> ranks;
    ranks.reserve(family.size());
    for (const auto& s : family) ranks.push_back(rank(rep, s));

    auto test_basis = [&](const LabelSet& candidate) {
        if (rank(rep, candidate) != r) return false;
        for (std::size_t f = 0; f < family.size(); ++f) {
            LabelSet inter;
            for (Label e : candidate) {
                if (family[f].count(e)) inter.insert(e);
            }
            if (rank(rep, inter) != ranks[f]) return false;
        }
        return true;
    };
    // Enumerate r-subsets of the ground set.
    std::vector<std::size_t> idx(r);
    for (std::size_t i = 0; i < r; ++i) idx[i] = i;
    for (;;) {
        LabelSet candidate;
        for (std::size_t i : idx) candidate.insert(ground[i]);
        if (test_basis(candidate)) return true;
        std::size_t i = r;
        while (i > 0 && idx[i - 1] == n - r + i - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
    }
    return false;
}

}  // namespace ph
