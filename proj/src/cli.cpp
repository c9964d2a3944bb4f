#include "ph/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>

#include "ph/barcode.hpp"
#include "ph/complex.hpp"
#include "ph/errors.hpp"
#include "ph/field.hpp"
#include "ph/morse.hpp"
#include "ph/oracle.hpp"
#include "ph/persistence.hpp"
#include "ph/sparse.hpp"

namespace ph {

namespace {

FilteredComplex load_complex(const RunConfig& cfg, int rips_dim) {
    std::string kind = cfg.kind;
    if (kind == "auto") {
        kind = cfg.input_path.ends_with(".json") ? "complex" : "points";
    }
    std::ifstream in(cfg.input_path);
    if (!in) throw input_error("cannot open input file");
    if (kind == "complex") return read_complex_json(in);
    if (kind == "points") {
        return rips_from_points(read_points_csv(in), rips_dim, cfg.max_scale);
    }
    return rips_from_distances(read_distances_csv(in), rips_dim,
                               cfg.max_scale);
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot open output file");
    out << text;
}

// Input path without its extension, for derived artifact names.
std::string stem(const std::string& path) {
    auto slash = path.find_last_of('/');
    auto dot = path.find_last_of('.');
    if (dot == std::string::npos) return path;
    if (slash != std::string::npos && dot < slash) return path;
    return path.substr(0, dot);
}

void check_common(const RunConfig& cfg) {
    if (!is_prime(cfg.field)) throw input_error("modulus must be prime");
    if (cfg.max_dim < 0) {
        throw input_error("max dimension must be non-negative");
    }
    if (!(cfg.max_scale > 0)) throw input_error("max scale must be positive");
}

std::string label_pairs(const std::vector<std::pair<Label, Label>>& pairs) {
    std::string out = "[";
    bool first = true;
    for (const auto& [a, b] : pairs) {
        if (!first) out += ", ";
        first = false;
        out += "[" + std::to_string(a) + ", " + std::to_string(b) + "]";
    }
    return out + "]";
}

}  // namespace

int cmd_barcode(const RunConfig& cfg) {
    check_common(cfg);
    FilteredComplex k = load_complex(cfg, cfg.max_dim + 1);

    EngineOptions opts;
    opts.reduce = !cfg.no_reduce;
    opts.augment = cfg.reduced;
    opts.keep_zero = cfg.keep_zero;
    opts.seed = cfg.seed;
    PersistenceResult result =
        compute_persistence(k, cfg.field, cfg.max_dim, opts);

    if (!cfg.basis_path.empty()) {
        save_fixture_file(result.basis.change_of_basis, cfg.basis_path);
    }
    write_output(cfg.output_path, cfg.format == "csv"
                                      ? to_csv(result.barcode)
                                      : to_json(result.barcode));

    if (cfg.oracle_check) {
        Barcode want = standard_reduction_barcode(
            k, cfg.field, cfg.max_dim, cfg.reduced, cfg.keep_zero, cfg.seed);
        if (result.barcode != want) {
            std::cerr << "oracle mismatch\n";
            return 4;
        }
    }
    return 0;
}

int cmd_lu(const RunConfig& cfg) {
    IndexedMatrix a = load_fixture_file(cfg.input_path);
    LUFactorization f = lu_exchange(a);

    std::string prefix =
        cfg.output_path.empty() ? stem(cfg.input_path) : cfg.output_path;
    save_fixture_file(f.L, prefix + ".L.txt");
    save_fixture_file(f.D, prefix + ".D.txt");
    save_fixture_file(f.U, prefix + ".U.txt");

    std::string out = "{\"field\": " + std::to_string(a.modulus());
    out += ", \"rank\": " + std::to_string(f.pivot_sequence.size());
    out += ", \"pivots\": " + label_pairs(f.pivot_sequence) + "}\n";
    std::cout << out;
    return 0;
}

int cmd_morse(const RunConfig& cfg) {
    check_common(cfg);
    FilteredComplex k = load_complex(cfg, cfg.max_dim + 1);
    ReducedComplex rc =
        reduce(k, cfg.field, cfg.max_dim, cfg.seed, cfg.reduced);

    std::map<Label, std::size_t> pos;
    for (std::size_t i = 0; i < rc.critical.size(); ++i) {
        pos[rc.critical[i]] = i;
    }

    std::string out = "{\"field\": " + std::to_string(cfg.field);
    out += ", \"simplices\": [";
    bool first = true;
    for (Label id : rc.critical) {
        if (!first) out += ", ";
        first = false;
        out += "{\"v\": [";
        if (id >= 0) {
            const Simplex& s = k.simplex(id);
            for (std::size_t q = 0; q < s.vertices.size(); ++q) {
                if (q > 0) out += ", ";
                out += std::to_string(s.vertices[q]);
            }
        }
        out += "], \"f\": " + shortest_decimal(rc.grades.at(id)) + "}";
    }

    // Differential triples index into the simplices array above.
    std::vector<std::tuple<std::size_t, std::size_t, std::uint32_t>> triples;
    for (const auto& [r, c, v] : rc.boundary.entries()) {
        triples.emplace_back(pos.at(c), pos.at(r), std::uint32_t(v));
    }
    std::sort(triples.begin(), triples.end());
    out += "], \"boundary\": [";
    first = true;
    for (const auto& [cell, face, v] : triples) {
        if (!first) out += ", ";
        first = false;
        out += "[" + std::to_string(face) + ", " + std::to_string(cell) +
               ", " + std::to_string(v) + "]";
    }
    out += "]}\n";
    write_output(cfg.output_path, out);
    return 0;
}

int cmd_jordan(const RunConfig& cfg) {
    IndexedMatrix t = load_fixture_file(cfg.input_path);
    GradedJordanBasis basis = jordan_unfiltered(t, t.modulus());

    if (!cfg.basis_path.empty()) {
        save_fixture_file(basis.change_of_basis, cfg.basis_path);
    }
    std::string out = "{\"field\": " + std::to_string(t.modulus());
    out += ", \"pairs\": " + label_pairs(basis.pairs);
    out += ", \"essentials\": [";
    bool first = true;
    for (Label l : basis.essentials) {
        if (!first) out += ", ";
        first = false;
        out += std::to_string(l);
    }
    out += "]}\n";
    write_output(cfg.output_path, out);
    return 0;
}

int run_cli(int argc, const char* const* argv) {
    RunConfig cfg;
    CLI::App app{"Exact persistent homology over small prime fields"};
    app.require_subcommand(1);

    auto add_complex_options = [&cfg](CLI::App* sub) {
        sub->add_option("input", cfg.input_path, "input file")->required();
        sub->add_option("--kind", cfg.kind,
                        "input format; auto picks complex for .json files "
                        "and points otherwise")
            ->check(CLI::IsMember({"auto", "points", "distances", "complex"}));
        sub->add_option("--field", cfg.field, "coefficient field modulus");
        sub->add_option("--max-dim", cfg.max_dim,
                        "largest homology dimension to report");
        sub->add_option("--max-scale", cfg.max_scale,
                        "Rips diameter cutoff (default: none)");
        sub->add_option("--seed", cfg.seed, "tie-breaking seed");
        sub->add_flag("--reduced", cfg.reduced,
                      "reduced homology (adjoins the empty simplex)");
        sub->add_option("-o,--output", cfg.output_path,
                        "write here instead of stdout");
    };

    CLI::App* bc = app.add_subcommand(
        "barcode", "persistence barcode of a filtered complex");
    add_complex_options(bc);
    bc->add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    bc->add_option("--dump-basis", cfg.basis_path,
                   "write the change of basis as a matrix fixture");
    bc->add_flag("--no-reduce", cfg.no_reduce,
                 "skip the discrete Morse preprocessing");
    bc->add_flag("--keep-zero", cfg.keep_zero,
                 "keep zero-length intervals in the output");
    bc->add_flag("--oracle-check", cfg.oracle_check,
                 "recompute with the dense reference and compare");

    CLI::App* lu = app.add_subcommand(
        "lu", "factor a matrix fixture into L, D and U fixtures");
    lu->add_option("input", cfg.input_path, "matrix fixture")->required();
    lu->add_option("-o,--output", cfg.output_path,
                   "prefix for the L/D/U files (default: input stem)");

    CLI::App* morse = app.add_subcommand(
        "morse", "critical cells and differential after Morse reduction");
    add_complex_options(morse);

    CLI::App* jordan = app.add_subcommand(
        "jordan", "canonical pairs of a square 2-nilpotent fixture");
    jordan->add_option("input", cfg.input_path, "matrix fixture")->required();
    jordan->add_option("--dump-basis", cfg.basis_path,
                       "write the change of basis as a matrix fixture");
    jordan->add_option("-o,--output", cfg.output_path,
                       "write here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (bc->parsed()) return cmd_barcode(cfg);
        if (lu->parsed()) return cmd_lu(cfg);
        if (morse->parsed()) return cmd_morse(cfg);
        return cmd_jordan(cfg);
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const invariant_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace ph
