#include "ph/field.hpp"

#include <stdexcept>

namespace ph {

std::uint32_t add_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
    std::uint64_t s = std::uint64_t(a) + b;
    if (s >= p) s -= p;
    return std::uint32_t(s);
}

std::uint32_t sub_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
    return a >= b ? a - b : std::uint32_t(std::uint64_t(a) + p - b);
}

std::uint32_t mul_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
    return std::uint32_t(std::uint64_t(a) * b % p);
}

std::uint32_t neg_mod(std::uint32_t a, std::uint32_t p) {
    return a == 0 ? 0 : p - a;
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
    if (a == 0) throw std::runtime_error("not invertible");
    // Extended Euclid on (a, p); p prime guarantees gcd 1.
    long long r0 = a, r1 = p, s0 = 1, s1 = 0;
    while (r1 != 0) {
        long long q = r0 / r1;
        long long r2 = r0 - q * r1;
        long long s2 = s0 - q * s1;
        r0 = r1; r1 = r2;
        s0 = s1; s1 = s2;
    }
    long long s = s0 % p;
    if (s < 0) s += p;
    return std::uint32_t(s);
}

std::uint32_t reduce_mod(long long a, std::uint32_t p) {
    long long r = a % static_cast<long long>(p);
    if (r < 0) r += p;
    return std::uint32_t(r);
}

bool is_prime(std::uint32_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2) {
        if (n % d == 0) return false;
    }
    return true;
}

namespace {

void check_same_modulus(std::uint32_t a, std::uint32_t b) {
    if (a != b) throw std::runtime_error("modulus mismatch");
}

}  // namespace

FieldElement::FieldElement(long long value, std::uint32_t modulus)
    : value_(0), modulus_(modulus) {
    if (modulus < 2) throw std::runtime_error("modulus must be at least 2");
    value_ = reduce_mod(value, modulus);
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
    check_same_modulus(modulus_, o.modulus_);
    return FieldElement(add_mod(value_, o.value_, modulus_), modulus_);
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
    check_same_modulus(modulus_, o.modulus_);
    return FieldElement(sub_mod(value_, o.value_, modulus_), modulus_);
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
    check_same_modulus(modulus_, o.modulus_);
    return FieldElement(mul_mod(value_, o.value_, modulus_), modulus_);
}

FieldElement FieldElement::operator-() const {
    return FieldElement(neg_mod(value_, modulus_), modulus_);
}

FieldElement FieldElement::inverse() const {
    return FieldElement(inv_mod(value_, modulus_), modulus_);
}

bool FieldElement::operator==(const FieldElement& o) const {
    check_same_modulus(modulus_, o.modulus_);
    return value_ == o.value_;
}

}  // namespace ph
