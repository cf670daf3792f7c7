#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "retrocarbon/error.hpp"

namespace retrocarbon {

// Settlement year index. One step of the simulation clock.
using Year = std::int32_t;

// Signed fixed-point currency with a resolution of 1e-6 units. All arithmetic
// is exact integer arithmetic; overflow throws.
class Money {
public:
    static constexpr std::int64_t micro_per_unit = 1'000'000;

    constexpr Money() = default;

    static constexpr Money from_micro(std::int64_t micro) { return Money(micro); }
    static constexpr Money units(std::int64_t whole) { return Money(whole * micro_per_unit); }
    // Rounds to the nearest micro unit, ties away from zero.
    static Money from_double(double units);
    // Parses "[-]digits[.digits]" with at most six fractional digits.
    static Money parse(std::string_view text);

    constexpr std::int64_t micro() const { return micro_; }
    double to_double() const { return static_cast<double>(micro_) / micro_per_unit; }
    std::string to_string() const;

    constexpr bool is_zero() const { return micro_ == 0; }
    constexpr bool is_positive() const { return micro_ > 0; }
    constexpr bool is_negative() const { return micro_ < 0; }

    Money operator-() const;
    Money& operator+=(Money rhs);
    Money& operator-=(Money rhs);
    friend Money operator+(Money a, Money b) { return a += b; }
    friend Money operator-(Money a, Money b) { return a -= b; }
    // Scales by an integer quantity (tonnes, credits).
    friend Money operator*(Money a, std::int64_t qty);
    friend Money operator*(std::int64_t qty, Money a) { return a * qty; }

    friend constexpr auto operator<=>(Money, Money) = default;
    friend constexpr bool operator==(Money, Money) = default;

private:
    constexpr explicit Money(std::int64_t micro) : micro_(micro) {}
    std::int64_t micro_ = 0;
};

inline Money abs(Money m) { return m.is_negative() ? -m : m; }
inline Money min(Money a, Money b) { return a < b ? a : b; }
inline Money max(Money a, Money b) { return a < b ? b : a; }

}  // namespace retrocarbon
