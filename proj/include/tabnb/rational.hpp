#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tabnb {

// Arbitrary-precision unsigned integer. Limbs are base 2^32, least
// significant first; no trailing zero limbs, so zero is the empty vector.
class BigUint {
public:
    BigUint() = default;
    BigUint(std::uint64_t value);

    bool is_zero() const { return limbs_.empty(); }
    bool is_even() const { return limbs_.empty() || (limbs_[0] & 1u) == 0; }
    std::size_t bit_length() const;

    int compare(const BigUint& other) const;
    bool operator==(const BigUint& other) const { return compare(other) == 0; }
    bool operator!=(const BigUint& other) const { return compare(other) != 0; }
    bool operator<(const BigUint& other) const { return compare(other) < 0; }
    bool operator<=(const BigUint& other) const { return compare(other) <= 0; }
    bool operator>=(const BigUint& other) const { return compare(other) >= 0; }

    BigUint& operator+=(const BigUint& other);
    BigUint& operator-=(const BigUint& other);  // requires *this >= other
    BigUint operator*(const BigUint& other) const;
    BigUint shifted_left(std::size_t bits) const;
    void halve();

    // Floor division with remainder; divisor must be nonzero.
    static void divmod(const BigUint& dividend, const BigUint& divisor,
                       BigUint& quotient, BigUint& remainder);
    static BigUint gcd(BigUint a, BigUint b);

    // In-place division by a small divisor, returns the remainder.
    std::uint32_t divmod_small(std::uint32_t divisor);

    double to_double() const;
    // value = mantissa * 2^exponent with mantissa in [0.5, 1); zero -> (0, 0).
    void frexp_parts(double& mantissa, long& exponent) const;

    std::string to_decimal() const;

private:
    std::vector<std::uint32_t> limbs_;

    void trim();
};

BigUint operator+(BigUint a, const BigUint& b);
BigUint operator-(BigUint a, const BigUint& b);

// Exact non-negative rational, always reduced, denominator >= 1.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(std::uint64_t num, std::uint64_t den);
    Rational(std::uint64_t value) : Rational(value, 1) {}
    Rational(BigUint num, BigUint den);

    const BigUint& num() const { return num_; }
    const BigUint& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    Rational operator+(const Rational& other) const;
    Rational operator*(const Rational& other) const;
    Rational operator/(const Rational& other) const;  // divisor must be nonzero

    int compare(const Rational& other) const;
    bool operator==(const Rational& other) const { return compare(other) == 0; }
    bool operator!=(const Rational& other) const { return compare(other) != 0; }
    bool operator<(const Rational& other) const { return compare(other) < 0; }

    double to_double() const;

    // Decimal expansion truncated after `digits` fractional digits,
    // e.g. 2/3 with 4 digits -> "0.6666".
    std::string to_decimal(std::size_t digits) const;

private:
    BigUint num_;
    BigUint den_;

    void reduce();
};

}  // namespace tabnb
