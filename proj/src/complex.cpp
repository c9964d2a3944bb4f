#include "ph/complex.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "ph/errors.hpp"
#include "ph/rng.hpp"

namespace ph {

FilteredComplex::FilteredComplex(
    std::vector<std::pair<Simplex, double>> cells) {
    std::sort(cells.begin(), cells.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    cells_.reserve(cells.size());
    grades_.reserve(cells.size());
    for (auto& [s, g] : cells) {
        for (std::size_t i = 0; i + 1 < s.vertices.size(); ++i) {
            if (s.vertices[i] >= s.vertices[i + 1]) {
                throw input_error("simplex vertices must be strictly increasing");
            }
        }
        if (s.vertices.empty()) throw input_error("empty simplex");
        Label id = Label(cells_.size());
        if (!index_.emplace(s, id).second) {
            throw input_error("duplicate simplex");
        }
        cells_.push_back(std::move(s));
        grades_.push_back(g);
    }
    for (Label id = 0; id < Label(cells_.size()); ++id) {
        const Simplex& s = cells_[id];
        int d = s.dim();
        if (d >= int(by_dim_.size())) by_dim_.resize(d + 1);
        by_dim_[d].push_back(id);
        if (d == 0) continue;
        Simplex face;
        face.vertices.reserve(s.vertices.size() - 1);
        for (std::size_t q = 0; q < s.vertices.size(); ++q) {
            face.vertices.clear();
            for (std::size_t i = 0; i < s.vertices.size(); ++i) {
                if (i != q) face.vertices.push_back(s.vertices[i]);
            }
            auto it = index_.find(face);
            if (it == index_.end()) {
                throw input_error("complex is not face-closed");
            }
            if (grades_[it->second] > grades_[id]) {
                throw input_error("filtration grades are not monotone");
            }
        }
    }
}

const Simplex& FilteredComplex::simplex(Label id) const {
    if (id < 0 || id >= Label(cells_.size())) {
        throw std::runtime_error("unknown cell id");
    }
    return cells_[id];
}

double FilteredComplex::grade(Label id) const {
    simplex(id);
    return grades_[id];
}

int FilteredComplex::dim(Label id) const { return simplex(id).dim(); }

Label FilteredComplex::id_of(const Simplex& s) const {
    auto it = index_.find(s);
    if (it == index_.end()) throw std::runtime_error("unknown simplex");
    return it->second;
}

const std::vector<Label>& FilteredComplex::cells_of_dim(int d) const {
    static const std::vector<Label> empty;
    if (d < 0 || d >= int(by_dim_.size())) return empty;
    return by_dim_[d];
}

std::vector<Label> FilteredComplex::filtration_order(std::uint64_t seed) const {
    std::vector<Label> tie(cells_.size());
    std::iota(tie.begin(), tie.end(), Label(0));
    if (seed != 0) deterministic_shuffle(tie, seed);
    std::vector<Label> order(cells_.size());
    std::iota(order.begin(), order.end(), Label(0));
    std::sort(order.begin(), order.end(), [&](Label a, Label b) {
        if (grades_[a] != grades_[b]) return grades_[a] < grades_[b];
        int da = cells_[a].dim(), db = cells_[b].dim();
        if (da != db) return da < db;
        return tie[a] < tie[b];
    });
    return order;
}

void validate(const FilteredComplex& k) {
    for (Label id = 0; id < Label(k.size()); ++id) {
        const Simplex& s = k.simplex(id);
        for (std::size_t i = 0; i + 1 < s.vertices.size(); ++i) {
            if (s.vertices[i] >= s.vertices[i + 1]) {
                throw input_error("simplex vertices must be strictly increasing");
            }
        }
        if (s.dim() == 0) continue;
        for (std::size_t q = 0; q < s.vertices.size(); ++q) {
            Simplex face;
            for (std::size_t i = 0; i < s.vertices.size(); ++i) {
                if (i != q) face.vertices.push_back(s.vertices[i]);
            }
            if (!k.contains(face)) {
                throw input_error("complex is not face-closed");
            }
            if (k.grade(k.id_of(face)) > k.grade(id)) {
                throw input_error("filtration grades are not monotone");
            }
        }
    }
}

IndexedMatrix boundary_matrix(const FilteredComplex& k, int d, std::uint32_t p,
                              bool reduced) {
    std::vector<Label> rows;
    if (d == 0) {
        if (reduced) rows.push_back(-1);
    } else {
        rows = k.cells_of_dim(d - 1);
    }
    const std::vector<Label>& cols = k.cells_of_dim(d);
    EntryList entries;
    for (Label c : cols) {
        const Simplex& s = k.simplex(c);
        if (d == 0) {
            if (reduced) entries.emplace_back(-1, c, -1);
            continue;
        }
        Simplex face;
        for (std::size_t q = 0; q < s.vertices.size(); ++q) {
            face.vertices.clear();
            for (std::size_t i = 0; i < s.vertices.size(); ++i) {
                if (i != q) face.vertices.push_back(s.vertices[i]);
            }
            long long sign = (q % 2 == 0) ? -1 : 1;
            entries.emplace_back(k.id_of(face), c, sign);
        }
    }
    return IndexedMatrix(rows, cols, p, entries);
}

IndexedMatrix graded_boundary_matrix(const FilteredComplex& k, std::uint32_t p,
                                     bool reduced) {
    std::vector<Label> labels;
    if (reduced) labels.push_back(-1);
    for (Label id = 0; id < Label(k.size()); ++id) labels.push_back(id);
    EntryList entries;
    for (int d = 0; d <= k.top_dimension(); ++d) {
        IndexedMatrix block = boundary_matrix(k, d, p, reduced);
        for (const auto& [r, c, v] : block.entries()) {
            entries.emplace_back(r, c, v);
        }
    }
    return IndexedMatrix(labels, labels, p, entries);
}

namespace {

void check_distance_matrix(const std::vector<std::vector<double>>& d) {
    const std::size_t n = d.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (d[i].size() != n) throw input_error("distance matrix not square");
        if (d[i][i] != 0.0) {
            throw input_error("distance matrix diagonal must be zero");
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (d[i][j] < 0.0) throw input_error("negative distance");
            if (d[i][j] != d[j][i]) {
                throw input_error("distance matrix not symmetric");
            }
        }
    }
}

void expand_cliques(const std::vector<std::vector<double>>& d,
                    const std::vector<std::vector<int>>& nb, int max_dim,
                    std::vector<int>& clique, double diameter,
                    const std::vector<int>& candidates,
                    std::vector<std::pair<Simplex, double>>& out) {
    for (int v : candidates) {
        double ext = diameter;
        for (int u : clique) ext = std::max(ext, d[u][v]);
        clique.push_back(v);
        out.push_back({Simplex{clique}, ext});
        if (int(clique.size()) <= max_dim) {
            std::vector<int> next;
            const auto& nv = nb[v];
            std::set_intersection(candidates.begin(), candidates.end(),
                                  nv.begin(), nv.end(),
                                  std::back_inserter(next));
            // Candidate lists only hold vertices above the clique maximum.
            next.erase(std::remove_if(next.begin(), next.end(),
                                      [v](int w) { return w <= v; }),
                       next.end());
            expand_cliques(d, nb, max_dim, clique, ext, next, out);
        }
        clique.pop_back();
    }
}

}  // namespace

FilteredComplex rips_from_distances(const std::vector<std::vector<double>>& d,
                                    int max_dim, double max_scale) {
    if (max_dim < 0) throw input_error("max dimension must be non-negative");
    check_distance_matrix(d);
    const int n = int(d.size());
    std::vector<std::vector<int>> nb(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j != i && d[i][j] <= max_scale) nb[i].push_back(j);
        }
    }
    std::vector<std::pair<Simplex, double>> cells;
    for (int i = 0; i < n; ++i) {
        cells.push_back({Simplex{{i}}, 0.0});
        if (max_dim >= 1) {
            std::vector<int> above;
            for (int j : nb[i]) {
                if (j > i) above.push_back(j);
            }
            std::vector<int> clique{i};
            expand_cliques(d, nb, max_dim, clique, 0.0, above, cells);
        }
    }
    return FilteredComplex(std::move(cells));
}

FilteredComplex rips_from_points(const std::vector<std::vector<double>>& pts,
                                 int max_dim, double max_scale) {
    const std::size_t n = pts.size();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        if (pts[i].size() != pts[0].size()) {
            throw input_error("points have inconsistent dimension");
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            double sq = 0;
            for (std::size_t k = 0; k < pts[i].size(); ++k) {
                double diff = pts[i][k] - pts[j][k];
                sq += diff * diff;
            }
            d[i][j] = d[j][i] = std::sqrt(sq);
        }
    }
    return rips_from_distances(d, max_dim, max_scale);
}

namespace {

std::vector<double> parse_csv_row(const std::string& line,
                                  std::size_t line_no) {
    std::vector<double> row;
    std::size_t start = 0;
    while (start <= line.size()) {
        std::size_t end = line.find(',', start);
        if (end == std::string::npos) end = line.size();
        std::string field = line.substr(start, end - start);
        // Trim surrounding whitespace.
        std::size_t a = field.find_first_not_of(" \t\r");
        std::size_t b = field.find_last_not_of(" \t\r");
        if (a == std::string::npos) {
            throw input_error("empty field in CSV line " +
                              std::to_string(line_no));
        }
        field = field.substr(a, b - a + 1);
        double value = 0;
        auto [ptr, ec] =
            std::from_chars(field.data(), field.data() + field.size(), value);
        if (ec != std::errc() || ptr != field.data() + field.size()) {
            throw input_error("malformed number '" + field + "' in CSV line " +
                              std::to_string(line_no));
        }
        row.push_back(value);
        if (end == line.size()) break;
        start = end + 1;
    }
    return row;
}

std::vector<std::vector<double>> read_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        rows.push_back(parse_csv_row(line, line_no));
        if (rows.size() > 1 && rows.back().size() != rows[0].size()) {
            throw input_error("inconsistent CSV row length at line " +
                              std::to_string(line_no));
        }
    }
    return rows;
}

}  // namespace

std::vector<std::vector<double>> read_points_csv(std::istream& in) {
    auto rows = read_csv(in);
    if (rows.empty()) throw input_error("no points in CSV input");
    return rows;
}

std::vector<std::vector<double>> read_distances_csv(std::istream& in) {
    auto rows = read_csv(in);
    if (rows.empty()) throw input_error("no distances in CSV input");
    if (rows.size() != rows[0].size()) {
        throw input_error("distance matrix not square");
    }
    return rows;
}

FilteredComplex read_complex_json(std::istream& in) {
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw input_error(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("simplices") ||
        !doc["simplices"].is_array()) {
        throw input_error("complex JSON must contain a \"simplices\" array");
    }
    std::vector<std::pair<Simplex, double>> cells;
    for (const auto& item : doc["simplices"]) {
        if (!item.is_object() || !item.contains("v") || !item.contains("f") ||
            !item["v"].is_array() || !item["f"].is_number()) {
            throw input_error(
                "each simplex needs a vertex array \"v\" and a grade \"f\"");
        }
        Simplex s;
        for (const auto& v : item["v"]) {
            if (!v.is_number_integer()) {
                throw input_error("simplex vertices must be integers");
            }
            s.vertices.push_back(v.get<int>());
        }
        cells.push_back({std::move(s), item["f"].get<double>()});
    }
    return FilteredComplex(std::move(cells));
}

}  // namespace ph
