#pragma once

#include <cstdint>
#include <vector>

namespace ph {

// splitmix64: tiny deterministic generator. Used instead of <random> engines
// where output must be reproducible across platforms and standard libraries.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n); n must be positive.
    std::uint64_t below(std::uint64_t n) { return next() % n; }

    double unit() { return double(next() >> 11) * (1.0 / 9007199254740992.0); }

private:
    std::uint64_t state_;
};

// Fisher-Yates with SplitMix64 draws, deterministic for a given seed.
template <typename T>
void deterministic_shuffle(std::vector<T>& v, std::uint64_t seed) {
    SplitMix64 rng(seed);
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = std::size_t(rng.below(i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace ph
