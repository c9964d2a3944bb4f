#include "ph/sparse.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "ph/errors.hpp"

namespace ph {

namespace {

using Col = std::vector<std::pair<std::size_t, std::uint32_t>>;

// y <- y - f*x on sorted sparse columns, dropping cancellations.
Col axpy_sub(const Col& y, const Col& x, std::uint32_t f, std::uint32_t p) {
    Col out;
    out.reserve(y.size() + x.size());
    std::size_t i = 0, j = 0;
    while (i < y.size() || j < x.size()) {
        if (j == x.size() || (i < y.size() && y[i].first < x[j].first)) {
            out.push_back(y[i++]);
        } else if (i == y.size() || x[j].first < y[i].first) {
            std::uint32_t v = neg_mod(mul_mod(f, x[j].second, p), p);
            if (v != 0) out.emplace_back(x[j].first, v);
            ++j;
        } else {
            std::uint32_t v =
                sub_mod(y[i].second, mul_mod(f, x[j].second, p), p);
            if (v != 0) out.emplace_back(y[i].first, v);
            ++i;
            ++j;
        }
    }
    return out;
}

std::uint32_t col_value_at(const Col& col, std::size_t row) {
    auto it = std::lower_bound(
        col.begin(), col.end(), row,
        [](const std::pair<std::size_t, std::uint32_t>& e, std::size_t r) {
            return e.first < r;
        });
    if (it != col.end() && it->first == row) return it->second;
    return 0;
}

void check_labels_unique(const std::vector<Label>& labels, const char* side) {
    std::map<Label, std::size_t> seen;
    for (Label l : labels) {
        if (!seen.emplace(l, 0).second) {
            throw std::runtime_error(std::string("duplicate ") + side +
                                     " label");
        }
    }
}

}  // namespace

IndexedMatrix::IndexedMatrix() : modulus_(2), nnz_(0) {}

IndexedMatrix::IndexedMatrix(std::vector<Label> row_labels,
                             std::vector<Label> col_labels,
                             std::uint32_t modulus, const EntryList& entries)
    : rows_(std::move(row_labels)),
      cols_(std::move(col_labels)),
      modulus_(modulus),
      nnz_(0) {
    if (modulus_ < 2 || modulus_ > 0x7fffffffu || !is_prime(modulus_)) {
        throw std::runtime_error("modulus must be prime");
    }
    check_labels_unique(rows_, "row");
    check_labels_unique(cols_, "column");
    for (std::size_t i = 0; i < rows_.size(); ++i) row_pos_[rows_[i]] = i;
    for (std::size_t j = 0; j < cols_.size(); ++j) col_pos_[cols_[j]] = j;

    std::vector<std::map<std::size_t, std::uint32_t>> acc(cols_.size());
    for (const auto& [r, c, v] : entries) {
        auto ri = row_pos_.find(r);
        if (ri == row_pos_.end()) throw std::runtime_error("unknown row label");
        auto ci = col_pos_.find(c);
        if (ci == col_pos_.end())
            throw std::runtime_error("unknown column label");
        std::uint32_t red = reduce_mod(v, modulus_);
        auto& cell = acc[ci->second][ri->second];
        cell = add_mod(cell, red, modulus_);
    }
    data_.resize(cols_.size());
    for (std::size_t j = 0; j < cols_.size(); ++j) {
        for (const auto& [rp, v] : acc[j]) {
            if (v != 0) {
                data_[j].emplace_back(rp, v);
                ++nnz_;
            }
        }
    }
}

IndexedMatrix IndexedMatrix::identity(const std::vector<Label>& labels,
                                      std::uint32_t modulus) {
    EntryList entries;
    entries.reserve(labels.size());
    for (Label l : labels) entries.emplace_back(l, l, 1);
    return IndexedMatrix(labels, labels, modulus, entries);
}

std::size_t IndexedMatrix::row_position(Label r) const {
    auto it = row_pos_.find(r);
    if (it == row_pos_.end()) throw std::runtime_error("unknown row label");
    return it->second;
}

std::size_t IndexedMatrix::col_position(Label c) const {
    auto it = col_pos_.find(c);
    if (it == col_pos_.end()) throw std::runtime_error("unknown column label");
    return it->second;
}

std::uint32_t IndexedMatrix::at(Label row, Label col) const {
    return col_value_at(data_[col_position(col)], row_position(row));
}

std::vector<std::tuple<Label, Label, std::uint32_t>> IndexedMatrix::entries()
    const {
    std::vector<std::tuple<Label, Label, std::uint32_t>> out;
    out.reserve(nnz_);
    for (std::size_t j = 0; j < cols_.size(); ++j) {
        for (const auto& [rp, v] : data_[j]) {
            out.emplace_back(rows_[rp], cols_[j], v);
        }
    }
    return out;
}

bool IndexedMatrix::operator==(const IndexedMatrix& o) const {
    return modulus_ == o.modulus_ && rows_ == o.rows_ && cols_ == o.cols_ &&
           data_ == o.data_;
}

IndexedMatrix matmul(const IndexedMatrix& a, const IndexedMatrix& b) {
    if (a.modulus() != b.modulus()) throw std::runtime_error("modulus mismatch");
    const std::uint32_t p = a.modulus();

    // Map positions of B's rows to positions of A's columns. The label sets
    // must agree; the orders need not.
    std::vector<std::size_t> to_acol(b.n_rows());
    if (a.col_labels() == b.row_labels()) {
        for (std::size_t i = 0; i < to_acol.size(); ++i) to_acol[i] = i;
    } else {
        if (a.n_cols() != b.n_rows()) throw std::runtime_error("label mismatch");
        for (std::size_t i = 0; i < b.n_rows(); ++i) {
            Label l = b.row_label_at(i);
            if (!a.has_col(l)) throw std::runtime_error("label mismatch");
            to_acol[i] = a.col_position(l);
        }
    }

    std::vector<std::uint64_t> scratch(a.n_rows(), 0);
    std::vector<std::size_t> touched;
    EntryList entries;
    for (std::size_t j = 0; j < b.n_cols(); ++j) {
        touched.clear();
        for (const auto& [bk, bv] : b.column(j)) {
            for (const auto& [ar, av] : a.column(to_acol[bk])) {
                if (scratch[ar] == 0) touched.push_back(ar);
                scratch[ar] = (scratch[ar] + std::uint64_t(av) * bv) % p;
            }
        }
        for (std::size_t r : touched) {
            if (scratch[r] != 0) {
                entries.emplace_back(a.row_label_at(r), b.col_label_at(j),
                                     (long long)scratch[r]);
            }
            scratch[r] = 0;
        }
    }
    return IndexedMatrix(a.row_labels(), b.col_labels(), p, entries);
}

SparseVector matvec(const IndexedMatrix& a, const SparseVector& x) {
    const std::uint32_t p = a.modulus();
    std::map<std::size_t, std::uint32_t> acc;
    for (const auto& [l, v] : x) {
        if (v == 0) continue;
        for (const auto& [rp, av] : a.column(a.col_position(l))) {
            auto& cell = acc[rp];
            cell = add_mod(cell, mul_mod(av, v % p, p), p);
        }
    }
    SparseVector y;
    for (const auto& [rp, v] : acc) {
        if (v != 0) y[a.row_label_at(rp)] = v;
    }
    return y;
}

IndexedMatrix transpose(const IndexedMatrix& a) {
    EntryList entries;
    entries.reserve(a.nnz());
    for (const auto& [r, c, v] : a.entries()) entries.emplace_back(c, r, v);
    return IndexedMatrix(a.col_labels(), a.row_labels(), a.modulus(), entries);
}

IndexedMatrix submatrix(const IndexedMatrix& a, const std::vector<Label>& rows,
                        const std::vector<Label>& cols) {
    std::map<std::size_t, std::size_t> keep_row;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        keep_row[a.row_position(rows[i])] = i;
    }
    if (keep_row.size() != rows.size())
        throw std::runtime_error("duplicate row label");
    EntryList entries;
    for (Label c : cols) {
        for (const auto& [rp, v] : a.column(a.col_position(c))) {
            auto it = keep_row.find(rp);
            if (it != keep_row.end()) {
                entries.emplace_back(rows[it->second], c, v);
            }
        }
    }
    return IndexedMatrix(rows, cols, a.modulus(), entries);
}

namespace {

// Shared elimination state for the pivot-based operations. Columns hold
// nonzero values at not-yet-eliminated rows only.
struct Workspace {
    std::vector<Col> cols;
    std::uint32_t p;

    explicit Workspace(const IndexedMatrix& a) : p(a.modulus()) {
        cols.resize(a.n_cols());
        for (std::size_t j = 0; j < a.n_cols(); ++j) cols[j] = a.column(j);
    }

    // Schur update for pivot at (row r, column c): subtract multiples of
    // column c from every other column carrying row r, zeroing row r there.
    // Returns the (column position, former value at r) list for U assembly.
    std::vector<std::pair<std::size_t, std::uint32_t>> eliminate(
        std::size_t r, std::size_t c) {
        std::uint32_t v = col_value_at(cols[c], r);
        std::uint32_t vinv = inv_mod(v, p);
        std::vector<std::pair<std::size_t, std::uint32_t>> row_entries;
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (j == c) continue;
            std::uint32_t d = col_value_at(cols[j], r);
            if (d == 0) continue;
            row_entries.emplace_back(j, d);
            cols[j] = axpy_sub(cols[j], cols[c], mul_mod(d, vinv, p), p);
        }
        return row_entries;
    }
};

}  // namespace

IndexedMatrix schur_complement(const IndexedMatrix& a,
                               const std::vector<Label>& pivot_rows,
                               const std::vector<Label>& pivot_cols) {
    if (pivot_rows.size() != pivot_cols.size()) {
        throw std::runtime_error("pivot block not square");
    }
    std::vector<char> in_alpha(a.n_rows(), 0), in_beta(a.n_cols(), 0);
    for (Label r : pivot_rows) {
        std::size_t rp = a.row_position(r);
        if (in_alpha[rp]) throw std::runtime_error("duplicate row label");
        in_alpha[rp] = 1;
    }
    for (Label c : pivot_cols) {
        std::size_t cp = a.col_position(c);
        if (in_beta[cp]) throw std::runtime_error("duplicate column label");
        in_beta[cp] = 1;
    }

    Workspace w(a);
    std::vector<char> row_done(a.n_rows(), 0), col_done(a.n_cols(), 0);
    for (std::size_t k = 0; k < pivot_rows.size(); ++k) {
        std::size_t pr = a.n_rows(), pc = a.n_cols();
        for (std::size_t j = 0; j < a.n_cols() && pc == a.n_cols(); ++j) {
            if (!in_beta[j] || col_done[j]) continue;
            for (const auto& [rp, v] : w.cols[j]) {
                if (in_alpha[rp] && !row_done[rp]) {
                    pr = rp;
                    pc = j;
                    break;
                }
            }
        }
        if (pc == a.n_cols()) throw std::runtime_error("pivot block singular");
        w.eliminate(pr, pc);
        w.cols[pc].clear();
        row_done[pr] = 1;
        col_done[pc] = 1;
    }

    std::vector<Label> out_rows, out_cols;
    for (std::size_t i = 0; i < a.n_rows(); ++i) {
        if (!in_alpha[i]) out_rows.push_back(a.row_label_at(i));
    }
    for (std::size_t j = 0; j < a.n_cols(); ++j) {
        if (!in_beta[j]) out_cols.push_back(a.col_label_at(j));
    }
    EntryList entries;
    for (std::size_t j = 0; j < a.n_cols(); ++j) {
        if (in_beta[j]) continue;
        for (const auto& [rp, v] : w.cols[j]) {
            if (!in_alpha[rp]) {
                entries.emplace_back(a.row_label_at(rp), a.col_label_at(j), v);
            }
        }
    }
    return IndexedMatrix(out_rows, out_cols, a.modulus(), entries);
}

IndexedMatrix clear_row(const IndexedMatrix& a, std::pair<Label, Label> pivot) {
    const std::uint32_t p = a.modulus();
    std::size_t pr = a.row_position(pivot.first);
    std::size_t pc = a.col_position(pivot.second);
    std::uint32_t v = col_value_at(a.column(pc), pr);
    if (v == 0) throw std::runtime_error("pivot entry is zero");
    std::uint32_t vinv = inv_mod(v, p);

    EntryList entries;
    for (std::size_t j = 0; j < a.n_cols(); ++j) {
        Col col = a.column(j);
        if (j != pc) {
            std::uint32_t d = col_value_at(col, pr);
            if (d != 0) col = axpy_sub(col, a.column(pc), mul_mod(d, vinv, p), p);
        }
        for (const auto& [rp, val] : col) {
            entries.emplace_back(a.row_label_at(rp), a.col_label_at(j), val);
        }
    }
    return IndexedMatrix(a.row_labels(), a.col_labels(), p, entries);
}

IndexedMatrix clear_column(const IndexedMatrix& a,
                           std::pair<Label, Label> pivot) {
    const std::uint32_t p = a.modulus();
    std::size_t pr = a.row_position(pivot.first);
    std::size_t pc = a.col_position(pivot.second);
    const Col& pivot_col = a.column(pc);
    std::uint32_t v = col_value_at(pivot_col, pr);
    if (v == 0) throw std::runtime_error("pivot entry is zero");
    std::uint32_t vinv = inv_mod(v, p);

    // Row operations subtract multiples of the pivot row, which touches a
    // column j only where row pr has a coefficient there.
    Col pivot_col_off;
    for (const auto& e : pivot_col) {
        if (e.first != pr) pivot_col_off.push_back(e);
    }
    EntryList entries;
    for (std::size_t j = 0; j < a.n_cols(); ++j) {
        Col col = a.column(j);
        std::uint32_t d = col_value_at(col, pr);
        if (d != 0) col = axpy_sub(col, pivot_col_off, mul_mod(d, vinv, p), p);
        for (const auto& [rp, val] : col) {
            entries.emplace_back(a.row_label_at(rp), a.col_label_at(j), val);
        }
    }
    return IndexedMatrix(a.row_labels(), a.col_labels(), p, entries);
}

LUFactorization lu_exchange(const IndexedMatrix& a, PivotRule rule) {
    (void)rule;
    const std::uint32_t p = a.modulus();
    Workspace w(a);
    std::vector<char> row_done(a.n_rows(), 0), col_done(a.n_cols(), 0);

    EntryList l_entries, d_entries, u_entries;
    std::vector<std::pair<Label, Label>> pivots;

    for (;;) {
        // Markowitz column: fewest stored nonzeros among nonempty columns.
        std::size_t pc = a.n_cols();
        for (std::size_t j = 0; j < a.n_cols(); ++j) {
            if (col_done[j] || w.cols[j].empty()) continue;
            if (pc == a.n_cols() || w.cols[j].size() < w.cols[pc].size()) pc = j;
        }
        if (pc == a.n_cols()) break;

        std::vector<std::size_t> row_count(a.n_rows(), 0);
        for (std::size_t j = 0; j < a.n_cols(); ++j) {
            if (col_done[j]) continue;
            for (const auto& [rp, v] : w.cols[j]) ++row_count[rp];
        }
        std::size_t pr = a.n_rows();
        for (const auto& [rp, v] : w.cols[pc]) {
            if (pr == a.n_rows() || row_count[rp] < row_count[pr]) pr = rp;
        }

        std::uint32_t v = col_value_at(w.cols[pc], pr);
        std::uint32_t vinv = inv_mod(v, p);
        for (const auto& [rp, val] : w.cols[pc]) {
            if (rp != pr) {
                l_entries.emplace_back(a.row_label_at(rp), a.row_label_at(pr),
                                       mul_mod(val, vinv, p));
            }
        }
        auto row_entries = w.eliminate(pr, pc);
        for (const auto& [j, d] : row_entries) {
            u_entries.emplace_back(a.col_label_at(pc), a.col_label_at(j),
                                   mul_mod(d, vinv, p));
        }
        d_entries.emplace_back(a.row_label_at(pr), a.col_label_at(pc), v);
        pivots.emplace_back(a.row_label_at(pr), a.col_label_at(pc));
        w.cols[pc].clear();
        row_done[pr] = 1;
        col_done[pc] = 1;
    }

    for (Label r : a.row_labels()) l_entries.emplace_back(r, r, 1);
    for (Label c : a.col_labels()) u_entries.emplace_back(c, c, 1);

    LUFactorization out{
        IndexedMatrix(a.row_labels(), a.row_labels(), p, l_entries),
        IndexedMatrix(a.row_labels(), a.col_labels(), p, d_entries),
        IndexedMatrix(a.col_labels(), a.col_labels(), p, u_entries),
        std::move(pivots)};
    return out;
}

IndexedMatrix mobius_inverse(const IndexedMatrix& a) {
    if (a.n_rows() != a.n_cols()) throw std::runtime_error("matrix not square");
    const std::uint32_t p = a.modulus();
    const std::size_t n = a.n_rows();

    // Identify row and column index spaces; the support graph lives on the
    // shared label set.
    std::vector<std::size_t> col_of_row(n);
    for (std::size_t i = 0; i < n; ++i) {
        Label l = a.row_label_at(i);
        if (!a.has_col(l)) throw std::runtime_error("label mismatch");
        col_of_row[i] = a.col_position(l);
    }

    // Dependency edges: solving A x = b makes x at row u depend on x at w
    // whenever A(u, w) is nonzero off the diagonal.
    std::vector<std::vector<std::size_t>> dependents(n);
    std::vector<std::size_t> indegree(n, 0);
    std::vector<std::uint32_t> diag(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& [rp, v] : a.column(col_of_row[i])) {
            if (rp == i) {
                diag[i] = v;
            } else {
                dependents[i].push_back(rp);
                ++indegree[rp];
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (diag[i] == 0) throw std::runtime_error("singular matrix");
    }

    std::vector<std::size_t> order;
    order.reserve(n);
    std::queue<std::size_t> ready;
    for (std::size_t i = 0; i < n; ++i) {
        if (indegree[i] == 0) ready.push(i);
    }
    while (!ready.empty()) {
        std::size_t u = ready.front();
        ready.pop();
        order.push_back(u);
        for (std::size_t w : dependents[u]) {
            if (--indegree[w] == 0) ready.push(w);
        }
    }
    if (order.size() != n) throw std::runtime_error("cyclic support");

    // Row-major view for the substitution sweep.
    std::vector<std::vector<std::pair<std::size_t, std::uint32_t>>> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& [rp, v] : a.column(col_of_row[i])) {
            if (rp != i) rows[rp].emplace_back(i, v);
        }
    }

    // Solve A x = e_t for each target t; process unknowns so that every
    // dependency is already known.
    EntryList entries;
    std::vector<std::uint32_t> x(n);
    for (std::size_t t = 0; t < n; ++t) {
        std::fill(x.begin(), x.end(), 0);
        for (std::size_t u : order) {
            std::uint32_t rhs = (u == t) ? 1 : 0;
            for (const auto& [w, v] : rows[u]) {
                if (x[w] != 0) rhs = sub_mod(rhs, mul_mod(v, x[w], p), p);
            }
            x[u] = mul_mod(rhs, inv_mod(diag[u], p), p);
        }
        for (std::size_t u : order) {
            if (x[u] != 0) {
                entries.emplace_back(a.row_label_at(u),
                                     a.col_label_at(col_of_row[t]), x[u]);
            }
        }
    }
    return IndexedMatrix(a.row_labels(), a.col_labels(), p, entries);
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream is(line);
    std::string t;
    while (is >> t) toks.push_back(t);
    return toks;
}

long long parse_int(const std::string& tok, const char* what) {
    long long value = 0;
    auto [ptr, ec] =
        std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw input_error(std::string("malformed ") + what + ": " + tok);
    }
    return value;
}

}  // namespace

IndexedMatrix load_fixture(std::istream& in) {
    std::string line;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        header = tokenize(line);
        if (!header.empty()) break;
    }
    if (header.size() != 3) {
        throw input_error("fixture header must be: rows cols modulus");
    }
    long long m = parse_int(header[0], "row count");
    long long n = parse_int(header[1], "column count");
    long long p = parse_int(header[2], "modulus");
    if (m < 0 || n < 0) throw input_error("negative dimension in fixture");
    if (p < 2 || p > 0x7fffffffLL || !is_prime(std::uint32_t(p))) {
        throw input_error("modulus must be prime");
    }

    EntryList entries;
    std::map<std::pair<long long, long long>, bool> seen;
    while (std::getline(in, line)) {
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        if (toks.size() != 3) throw input_error("fixture entry must be: i j v");
        long long i = parse_int(toks[0], "row index");
        long long j = parse_int(toks[1], "column index");
        long long v = parse_int(toks[2], "value");
        if (i < 0 || i >= m || j < 0 || j >= n) {
            throw input_error("fixture entry out of range");
        }
        if (v <= 0 || v >= p) throw input_error("fixture value not a nonzero residue");
        if (!seen.emplace(std::make_pair(i, j), true).second) {
            throw input_error("duplicate fixture entry");
        }
        entries.emplace_back(i, j, v);
    }

    std::vector<Label> rows(m), cols(n);
    for (long long i = 0; i < m; ++i) rows[i] = i;
    for (long long j = 0; j < n; ++j) cols[j] = j;
    return IndexedMatrix(rows, cols, std::uint32_t(p), entries);
}

IndexedMatrix load_fixture_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open fixture: " + path);
    return load_fixture(in);
}

void save_fixture(const IndexedMatrix& a, std::ostream& out) {
    out << a.n_rows() << ' ' << a.n_cols() << ' ' << a.modulus() << '\n';
    for (std::size_t j = 0; j < a.n_cols(); ++j) {
        for (const auto& [rp, v] : a.column(j)) {
            out << rp << ' ' << j << ' ' << v << '\n';
        }
    }
}

void save_fixture_file(const IndexedMatrix& a, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot open fixture for writing: " + path);
    save_fixture(a, out);
    if (!out.good()) throw input_error("failed writing fixture: " + path);
}

}  // namespace ph
