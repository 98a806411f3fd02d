#include "tabnb/rational.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tabnb {

namespace {

constexpr std::uint64_t kLimbBase = 1ull << 32;

}  // namespace

BigUint::BigUint(std::uint64_t value) {
    if (value != 0) {
        limbs_.push_back(static_cast<std::uint32_t>(value & 0xffffffffu));
        std::uint32_t high = static_cast<std::uint32_t>(value >> 32);
        if (high != 0) limbs_.push_back(high);
    }
}

void BigUint::trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

std::size_t BigUint::bit_length() const {
    if (limbs_.empty()) return 0;
    std::uint32_t top = limbs_.back();
    std::size_t bits = (limbs_.size() - 1) * 32;
    while (top != 0) {
        ++bits;
        top >>= 1;
    }
    return bits;
}

int BigUint::compare(const BigUint& other) const {
    if (limbs_.size() != other.limbs_.size())
        return limbs_.size() < other.limbs_.size() ? -1 : 1;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
        if (limbs_[i] != other.limbs_[i]) return limbs_[i] < other.limbs_[i] ? -1 : 1;
    }
    return 0;
}

BigUint& BigUint::operator+=(const BigUint& other) {
    const std::size_t n = std::max(limbs_.size(), other.limbs_.size());
    limbs_.resize(n, 0);
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t sum = carry + limbs_[i];
        if (i < other.limbs_.size()) sum += other.limbs_[i];
        limbs_[i] = static_cast<std::uint32_t>(sum & 0xffffffffu);
        carry = sum >> 32;
    }
    if (carry != 0) limbs_.push_back(static_cast<std::uint32_t>(carry));
    return *this;
}

BigUint& BigUint::operator-=(const BigUint& other) {
    if (compare(other) < 0) throw std::logic_error("BigUint subtraction underflow");
    std::int64_t borrow = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        std::int64_t diff = static_cast<std::int64_t>(limbs_[i]) - borrow;
        if (i < other.limbs_.size()) diff -= static_cast<std::int64_t>(other.limbs_[i]);
        if (diff < 0) {
            diff += static_cast<std::int64_t>(kLimbBase);
            borrow = 1;
        } else {
            borrow = 0;
        }
        limbs_[i] = static_cast<std::uint32_t>(diff);
    }
    trim();
    return *this;
}

BigUint BigUint::operator*(const BigUint& other) const {
    if (is_zero() || other.is_zero()) return BigUint();
    BigUint result;
    result.limbs_.assign(limbs_.size() + other.limbs_.size(), 0);
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        std::uint64_t carry = 0;
        for (std::size_t j = 0; j < other.limbs_.size(); ++j) {
            std::uint64_t cur = result.limbs_[i + j] + carry +
                                static_cast<std::uint64_t>(limbs_[i]) * other.limbs_[j];
            result.limbs_[i + j] = static_cast<std::uint32_t>(cur & 0xffffffffu);
            carry = cur >> 32;
        }
        std::size_t k = i + other.limbs_.size();
        while (carry != 0) {
            std::uint64_t cur = result.limbs_[k] + carry;
            result.limbs_[k] = static_cast<std::uint32_t>(cur & 0xffffffffu);
            carry = cur >> 32;
            ++k;
        }
    }
    result.trim();
    return result;
}

BigUint BigUint::shifted_left(std::size_t bits) const {
    if (is_zero() || bits == 0) {
        BigUint copy = *this;
        return copy;
    }
    const std::size_t limb_shift = bits / 32;
    const std::size_t bit_shift = bits % 32;
    BigUint result;
    result.limbs_.assign(limbs_.size() + limb_shift + 1, 0);
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        std::uint64_t shifted = static_cast<std::uint64_t>(limbs_[i]) << bit_shift;
        result.limbs_[i + limb_shift] |= static_cast<std::uint32_t>(shifted & 0xffffffffu);
        result.limbs_[i + limb_shift + 1] |= static_cast<std::uint32_t>(shifted >> 32);
    }
    result.trim();
    return result;
}

void BigUint::halve() {
    std::uint32_t carry = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
        std::uint32_t next_carry = limbs_[i] & 1u;
        limbs_[i] = (limbs_[i] >> 1) | (carry << 31);
        carry = next_carry;
    }
    trim();
}

void BigUint::divmod(const BigUint& dividend, const BigUint& divisor, BigUint& quotient,
                     BigUint& remainder) {
    if (divisor.is_zero()) throw std::logic_error("BigUint division by zero");
    quotient = BigUint();
    remainder = dividend;
    if (dividend.compare(divisor) < 0) return;
    // Binary long division: subtract shifted divisors from the top down.
    const std::size_t shift_max = dividend.bit_length() - divisor.bit_length();
    for (std::size_t shift = shift_max + 1; shift-- > 0;) {
        BigUint chunk = divisor.shifted_left(shift);
        if (remainder.compare(chunk) >= 0) {
            remainder -= chunk;
            quotient += BigUint(1).shifted_left(shift);
        }
    }
}

BigUint BigUint::gcd(BigUint a, BigUint b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    // Stein's algorithm: only shifts, halvings and subtractions.
    std::size_t common_twos = 0;
    while (a.is_even() && b.is_even()) {
        a.halve();
        b.halve();
        ++common_twos;
    }
    while (a.is_even()) a.halve();
    while (b.is_even()) b.halve();
    while (a != b) {
        if (a.compare(b) > 0) {
            a -= b;
            while (a.is_even() && !a.is_zero()) a.halve();
        } else {
            b -= a;
            while (b.is_even() && !b.is_zero()) b.halve();
        }
    }
    return a.shifted_left(common_twos);
}

std::uint32_t BigUint::divmod_small(std::uint32_t divisor) {
    if (divisor == 0) throw std::logic_error("BigUint division by zero");
    std::uint64_t remainder = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
        std::uint64_t cur = (remainder << 32) | limbs_[i];
        limbs_[i] = static_cast<std::uint32_t>(cur / divisor);
        remainder = cur % divisor;
    }
    trim();
    return static_cast<std::uint32_t>(remainder);
}

void BigUint::frexp_parts(double& mantissa, long& exponent) const {
    if (is_zero()) {
        mantissa = 0.0;
        exponent = 0;
        return;
    }
    const std::size_t bits = bit_length();
    // Top 64 bits are enough for a correctly rounded double mantissa.
    std::uint64_t top = 0;
    const std::size_t take = std::min<std::size_t>(bits, 64);
    for (std::size_t k = 0; k < take; ++k) {
        const std::size_t bit = bits - 1 - k;
        const std::uint32_t limb = limbs_[bit / 32];
        const std::uint32_t mask = 1u << (bit % 32);
        top = (top << 1) | ((limb & mask) ? 1u : 0u);
    }
    mantissa = std::ldexp(static_cast<double>(top), -static_cast<int>(take));
    exponent = static_cast<long>(bits);
}

double BigUint::to_double() const {
    double mantissa;
    long exponent;
    frexp_parts(mantissa, exponent);
    return std::ldexp(mantissa, static_cast<int>(exponent));
}

std::string BigUint::to_decimal() const {
    if (is_zero()) return "0";
    BigUint scratch = *this;
    std::string digits;
    while (!scratch.is_zero()) {
        std::uint32_t chunk = scratch.divmod_small(1000000000u);
        for (int i = 0; i < 9; ++i) {
            digits.push_back(static_cast<char>('0' + chunk % 10));
            chunk /= 10;
        }
    }
    while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
    std::reverse(digits.begin(), digits.end());
    return digits;
}

BigUint operator+(BigUint a, const BigUint& b) {
    a += b;
    return a;
}

BigUint operator-(BigUint a, const BigUint& b) {
    a -= b;
    return a;
}

Rational::Rational(std::uint64_t num, std::uint64_t den) : num_(num), den_(den) {
    reduce();
}

Rational::Rational(BigUint num, BigUint den) : num_(std::move(num)), den_(std::move(den)) {
    reduce();
}

void Rational::reduce() {
    if (den_.is_zero()) throw std::logic_error("Rational with zero denominator");
    if (num_.is_zero()) {
        den_ = BigUint(1);
        return;
    }
    BigUint g = BigUint::gcd(num_, den_);
    if (g == BigUint(1)) return;
    BigUint q, r;
    BigUint::divmod(num_, g, q, r);
    num_ = q;
    BigUint::divmod(den_, g, q, r);
    den_ = q;
}

Rational Rational::operator+(const Rational& other) const {
    BigUint num = num_ * other.den_ + other.num_ * den_;
    return Rational(std::move(num), den_ * other.den_);
}

Rational Rational::operator*(const Rational& other) const {
    return Rational(num_ * other.num_, den_ * other.den_);
}

Rational Rational::operator/(const Rational& other) const {
    if (other.is_zero()) throw std::logic_error("Rational division by zero");
    return Rational(num_ * other.den_, den_ * other.num_);
}

int Rational::compare(const Rational& other) const {
    return (num_ * other.den_).compare(other.num_ * den_);
}

double Rational::to_double() const {
    if (num_.is_zero()) return 0.0;
    double mant_num, mant_den;
    long exp_num, exp_den;
    num_.frexp_parts(mant_num, exp_num);
    den_.frexp_parts(mant_den, exp_den);
    return std::ldexp(mant_num / mant_den, static_cast<int>(exp_num - exp_den));
}

std::string Rational::to_decimal(std::size_t digits) const {
    BigUint whole, rem;
    BigUint::divmod(num_, den_, whole, rem);
    std::string out = whole.to_decimal();
    if (digits == 0) return out;
    out.push_back('.');
    for (std::size_t i = 0; i < digits; ++i) {
        rem = rem * BigUint(10);
        std::uint32_t digit = 0;
        while (rem.compare(den_) >= 0) {
            rem -= den_;
            ++digit;
        }
        out.push_back(static_cast<char>('0' + digit));
    }
    return out;
}

}  // namespace tabnb
