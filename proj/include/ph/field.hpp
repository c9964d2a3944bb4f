#pragma once

#include <cstdint>

namespace ph {

// Arithmetic helpers on residues in [0, p). Callers are expected to pass
// reduced values; p must be a prime in [2, 2^31).
std::uint32_t add_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p);
std::uint32_t sub_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p);
std::uint32_t mul_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p);
std::uint32_t neg_mod(std::uint32_t a, std::uint32_t p);
// Throws "not invertible" on zero input.
std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p);
// Reduces an arbitrary signed integer into [0, p).
std::uint32_t reduce_mod(long long a, std::uint32_t p);

bool is_prime(std::uint32_t n);

// A residue tagged with its modulus. Operations between elements of
// different fields throw "modulus mismatch".
class FieldElement {
public:
    FieldElement(long long value, std::uint32_t modulus);

    std::uint32_t value() const { return value_; }
    std::uint32_t modulus() const { return modulus_; }
    bool is_zero() const { return value_ == 0; }

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement operator-() const;
    FieldElement inverse() const;

    bool operator==(const FieldElement& o) const;
    bool operator!=(const FieldElement& o) const { return !(*this == o); }

private:
    std::uint32_t value_;
    std::uint32_t modulus_;
};

}  // namespace ph
