#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mtpoly/int_poly.hpp"

namespace mtpoly::modp {

/// Arithmetic modulo an odd prime p < 2^62, elements kept in Montgomery form.
class Field {
public:
    explicit Field(std::uint64_t p);

    std::uint64_t modulus() const { return p_; }

    std::uint64_t to_mont(std::uint64_t a) const { return mul(a % p_, r2_); }
    std::uint64_t from_mont(std::uint64_t a) const { return mul(a, 1); }

    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const
    {
        unsigned __int128 t = static_cast<unsigned __int128>(a) * b;
        std::uint64_t m = static_cast<std::uint64_t>(t) * pinv_;
        std::uint64_t u = static_cast<std::uint64_t>(
            (t + static_cast<unsigned __int128>(m) * p_) >> 64);
        return u >= p_ ? u - p_ : u;
    }
    std::uint64_t add(std::uint64_t a, std::uint64_t b) const
    {
        std::uint64_t s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const
    {
        return a >= b ? a - b : a + p_ - b;
    }
    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;
    std::uint64_t inv(std::uint64_t a) const { return pow(a, p_ - 2); }
    std::uint64_t one() const { return one_; }

private:
    std::uint64_t p_;
    std::uint64_t pinv_;  // -p^{-1} mod 2^64
    std::uint64_t r2_;    // 2^128 mod p
    std::uint64_t one_;   // 2^64 mod p
};

/// Ascending coefficients in Montgomery form, no trailing zeros.
using Poly = std::vector<std::uint64_t>;

Poly reduce(const IntPoly& a, const Field& f);
Poly derivative(const Poly& a, const Field& f);
/// Monic gcd; empty when both inputs are zero.
Poly gcd(Poly a, Poly b, const Field& f);

/// The first `count` primes below 2^62, in descending order.
std::vector<std::uint64_t> word_primes(std::size_t count);

}  // namespace mtpoly::modp
