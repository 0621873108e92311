#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace mtpoly {

using BigInt = mpz_class;

/// Degree of a polynomial. The zero polynomial has degree minus infinity,
/// which absorbs addition so that deg(a*b) = deg(a) + deg(b) holds for all a, b.
class Degree {
public:
    constexpr Degree() = default;
    constexpr explicit Degree(std::int64_t d) : value_(d), finite_(true) {}

    static constexpr Degree minus_infinity() { return Degree(); }

    constexpr bool is_finite() const { return finite_; }
    /// Only meaningful when is_finite().
    constexpr std::int64_t value() const { return value_; }

    friend constexpr Degree operator+(Degree a, Degree b)
    {
        if (!a.finite_ || !b.finite_) return Degree();
        return Degree(a.value_ + b.value_);
    }
    friend constexpr bool operator==(Degree a, Degree b)
    {
        return a.finite_ == b.finite_ && (!a.finite_ || a.value_ == b.value_);
    }
    friend constexpr std::strong_ordering operator<=>(Degree a, Degree b)
    {
        if (!a.finite_ || !b.finite_) return a.finite_ <=> b.finite_;
        return a.value_ <=> b.value_;
    }

private:
    std::int64_t value_ = 0;
    bool finite_ = false;
};

std::string to_string(Degree d);

/// Dense univariate polynomial over the integers, coefficients stored in
/// ascending order. The coefficient vector never carries trailing zeros, so
/// the zero polynomial is the empty vector.
class IntPoly {
public:
    IntPoly() = default;
    explicit IntPoly(std::vector<BigInt> coeffs);
    IntPoly(std::initializer_list<long> coeffs);

    static IntPoly constant(const BigInt& c);
    /// c * z^k
    static IntPoly monomial(const BigInt& c, std::size_t k);
    static IntPoly z() { return monomial(1, 1); }

    Degree degree() const;
    std::size_t size() const { return c_.size(); }
    bool is_zero() const { return c_.empty(); }
    bool is_monic() const { return !c_.empty() && c_.back() == 1; }

    /// Coefficient of z^i; zero beyond the stored range.
    BigInt coeff(std::size_t i) const;
    const BigInt& leading() const { return c_.back(); }
    std::span<const BigInt> coeffs() const { return c_; }

    /// Bit length of the largest coefficient magnitude.
    std::size_t max_coeff_bits() const;

    friend bool operator==(const IntPoly& a, const IntPoly& b);

    IntPoly& operator+=(const IntPoly& o);
    IntPoly& operator-=(const IntPoly& o);

private:
    void normalize();
    std::vector<BigInt> c_;
};

enum class MulAlgorithm { Auto, Schoolbook, Karatsuba, Kronecker };

/// Below this many coefficients (of the shorter operand) multiplication is
/// schoolbook; Karatsuba recursion bottoms out at the same size.
inline constexpr std::size_t kKaratsubaThreshold = 64;
/// From this many coefficients on, Auto packs both operands into single
/// integers and lets GMP multiply them.
inline constexpr std::size_t kKroneckerThreshold = 64;

IntPoly add(const IntPoly& a, const IntPoly& b);
IntPoly sub(const IntPoly& a, const IntPoly& b);
IntPoly negate(const IntPoly& a);
IntPoly mul(const IntPoly& a, const IntPoly& b, MulAlgorithm algo = MulAlgorithm::Auto);
IntPoly scale(const IntPoly& a, const BigInt& c);

/// Quotient of a by the monic polynomial b. Throws NonzeroRemainder when b
/// does not divide a exactly, and InvalidIndex when b is not monic.
IntPoly exact_div(const IntPoly& a, const IntPoly& b);

IntPoly pow(const IntPoly& a, std::uint64_t e);

/// a mod z^k.
IntPoly truncate(const IntPoly& a, std::size_t k);

IntPoly derivative(const IntPoly& a);

/// Product of all factors, always multiplying the two smallest remaining
/// ones so that operand sizes stay balanced.
IntPoly product(std::vector<IntPoly> factors);

/// Greatest common divisor over Z by the subresultant remainder sequence;
/// the result is primitive with positive leading coefficient.
IntPoly gcd(const IntPoly& a, const IntPoly& b);

/// True iff gcd(a, a') is constant. Precondition: a nonzero.
bool is_squarefree(const IntPoly& a);

/// True iff gcd(a, b) is constant.
bool are_coprime(const IntPoly& a, const IntPoly& b);

/// Value at an integer point.
BigInt evaluate(const IntPoly& a, const BigInt& x);

inline IntPoly operator+(const IntPoly& a, const IntPoly& b) { return add(a, b); }
inline IntPoly operator-(const IntPoly& a, const IntPoly& b) { return sub(a, b); }
inline IntPoly operator-(const IntPoly& a) { return negate(a); }
inline IntPoly operator*(const IntPoly& a, const IntPoly& b) { return mul(a, b); }

/// Human readable form, highest degree first, e.g. "z^2 - 1".
std::string to_string(const IntPoly& a);

/// Text format: a header line `poly v1 deg=<d>` followed by d+1 decimal
/// coefficients, one per line, ascending from z^0. The zero polynomial is
/// written as `poly v1 deg=-inf` with no coefficient lines.
void write_poly(std::ostream& os, const IntPoly& a);
IntPoly read_poly(std::istream& is);

}  // namespace mtpoly
