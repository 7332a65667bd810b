#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <string>

namespace matvar {

// Exact half-integer k/2. Gamma-argument offsets and triangular-step exponents
// are all multiples of 1/2, so this is the natural coefficient ring for the
// symbolic ledgers.
class HalfInt {
  public:
    constexpr HalfInt() = default;
    constexpr HalfInt(long long whole) : twice_(2 * whole) {}

    static constexpr HalfInt from_twice(long long twice) {
        HalfInt h;
        h.twice_ = twice;
        return h;
    }
    static constexpr HalfInt half(long long numerator) { return from_twice(numerator); }

    constexpr long long twice() const { return twice_; }
    constexpr bool is_integer() const { return twice_ % 2 == 0; }
    constexpr double value() const { return static_cast<double>(twice_) / 2.0; }

    constexpr HalfInt operator-() const { return from_twice(-twice_); }
    constexpr HalfInt operator+(HalfInt o) const { return from_twice(twice_ + o.twice_); }
    constexpr HalfInt operator-(HalfInt o) const { return from_twice(twice_ - o.twice_); }
    constexpr HalfInt& operator+=(HalfInt o) {
        twice_ += o.twice_;
        return *this;
    }

    constexpr auto operator<=>(const HalfInt&) const = default;

    // "2", "-1/2", "0": fractions, never decimals.
    std::string str() const {
        if (twice_ % 2 == 0) return std::to_string(twice_ / 2);
        return std::to_string(twice_) + "/2";
    }

  private:
    long long twice_ = 0;
};

// Exact rational with small denominator (pi-exponents need quarters).
class Rational {
  public:
    constexpr Rational() = default;
    constexpr Rational(long long n) : num_(n) {}
    constexpr Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }
    constexpr Rational(HalfInt h) : num_(h.twice()), den_(2) { normalize(); }

    constexpr long long num() const { return num_; }
    constexpr long long den() const { return den_; }
    constexpr double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    constexpr Rational operator+(Rational o) const {
        return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
    }
    constexpr Rational operator-(Rational o) const {
        return Rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
    }
    constexpr Rational operator*(Rational o) const { return Rational(num_ * o.num_, den_ * o.den_); }
    constexpr Rational& operator+=(Rational o) {
        *this = *this + o;
        return *this;
    }

    constexpr bool operator==(const Rational&) const = default;
    constexpr auto operator<=>(const Rational& o) const {
        return num_ * o.den_ <=> o.num_ * den_;
    }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

  private:
    constexpr void normalize() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
        if (num_ == 0) den_ = 1;
    }

    long long num_ = 0;
    long long den_ = 1;
};

}  // namespace matvar
