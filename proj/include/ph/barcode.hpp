#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace ph {

// Half-open persistence interval [birth, death) in one homology dimension.
// Essential classes carry death = +infinity.
struct Interval {
    int dim = 0;
    double birth = 0;
    double death = 0;

    bool essential() const {
        return death == std::numeric_limits<double>::infinity();
    }
    bool operator==(const Interval& o) const {
        return dim == o.dim && birth == o.birth && death == o.death;
    }
    bool operator<(const Interval& o) const {
        if (dim != o.dim) return dim < o.dim;
        if (birth != o.birth) return birth < o.birth;
        return death < o.death;
    }
};

// Barcode as a multiset of intervals over a fixed coefficient field.
// Comparison is by canonically sorted content, so producers do not have to
// agree on emission order.
struct Barcode {
    std::uint32_t modulus = 0;
    std::vector<Interval> intervals;

    void add(int dim, double birth, double death) {
        intervals.push_back({dim, birth, death});
    }
    void canonicalize();
    std::vector<Interval> in_dim(int d) const;

    bool operator==(const Barcode& o) const;
    bool operator!=(const Barcode& o) const { return !(*this == o); }
};

// Shortest decimal that parses back to exactly x; infinities print as
// "inf". Keeps emitted grades byte-identical across platforms.
std::string shortest_decimal(double x);

// Serializations with byte-stable numbers: grades are written as shortest
// round-trip decimals and infinite deaths as "inf". JSON shape is
// {"field": p, "dims": {"0": [[birth, death], ...], ...}}; CSV has a
// dim,birth,death header line. Intervals appear in canonical order.
std::string to_json(const Barcode& bc);
std::string to_csv(const Barcode& bc);

}  // namespace ph
