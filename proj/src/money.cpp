#include "retrocarbon/money.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

namespace retrocarbon {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::domain: return "domain";
        case ErrorCode::horizon: return "horizon";
        case ErrorCode::data_gap: return "data-gap";
        case ErrorCode::sequencing: return "sequencing";
        case ErrorCode::window: return "window";
        case ErrorCode::agency_coverage: return "agency-coverage";
        case ErrorCode::lifecycle: return "lifecycle";
        case ErrorCode::purchasability: return "purchasability";
        case ErrorCode::singularity: return "singularity";
        case ErrorCode::ledger: return "ledger";
        case ErrorCode::overflow: return "overflow";
        case ErrorCode::config: return "config";
        case ErrorCode::audit: return "audit";
        case ErrorCode::io: return "io";
    }
    return "unknown";
}

Money Money::from_double(double units) {
    if (!std::isfinite(units)) {
        throw Error(ErrorCode::overflow, "non-finite money value");
    }
    const double scaled = std::round(units * static_cast<double>(micro_per_unit));
    // 2^63 is exactly representable; anything at or above it does not fit.
    if (scaled >= 9.223372036854775807e18 || scaled < -9.223372036854775807e18) {
        throw Error(ErrorCode::overflow, "money value out of range");
    }
    return Money(static_cast<std::int64_t>(scaled));
}

Money Money::parse(std::string_view text) {
    auto fail = [&] { return Error(ErrorCode::domain, "malformed money literal '" + std::string(text) + "'"); };
    if (text.empty()) throw fail();
    bool negative = false;
    std::size_t i = 0;
    if (text[0] == '-' || text[0] == '+') {
        negative = text[0] == '-';
        i = 1;
    }
    std::int64_t whole = 0;
    std::int64_t frac = 0;
    int frac_digits = 0;
    bool seen_digit = false;
    bool in_frac = false;
    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '.') {
            if (in_frac) throw fail();
            in_frac = true;
            continue;
        }
        if (c < '0' || c > '9') throw fail();
        seen_digit = true;
        const int d = c - '0';
        if (in_frac) {
            if (++frac_digits > 6) throw fail();
            frac = frac * 10 + d;
        } else {
            if (__builtin_mul_overflow(whole, 10, &whole) || __builtin_add_overflow(whole, d, &whole)) {
                throw Error(ErrorCode::overflow, "money literal out of range");
            }
        }
    }
    if (!seen_digit) throw fail();
    for (; frac_digits < 6; ++frac_digits) frac *= 10;
    std::int64_t micro = 0;
    if (__builtin_mul_overflow(whole, micro_per_unit, &micro) || __builtin_add_overflow(micro, frac, &micro)) {
        throw Error(ErrorCode::overflow, "money literal out of range");
    }
    return Money(negative ? -micro : micro);
}

std::string Money::to_string() const {
    const bool negative = micro_ < 0;
    // Work in unsigned space so INT64_MIN prints correctly.
    const std::uint64_t mag = negative ? (~static_cast<std::uint64_t>(micro_) + 1) : static_cast<std::uint64_t>(micro_);
    std::string frac = std::to_string(mag % micro_per_unit);
    frac.insert(0, 6 - frac.size(), '0');
    return (negative ? "-" : "") + std::to_string(mag / micro_per_unit) + "." + frac;
}

Money Money::operator-() const {
    if (micro_ == std::numeric_limits<std::int64_t>::min()) {
        throw Error(ErrorCode::overflow, "money negation overflow");
    }
    return Money(-micro_);
}

Money& Money::operator+=(Money rhs) {
    if (__builtin_add_overflow(micro_, rhs.micro_, &micro_)) {
        throw Error(ErrorCode::overflow, "money addition overflow");
    }
    return *this;
}

Money& Money::operator-=(Money rhs) {
    if (__builtin_sub_overflow(micro_, rhs.micro_, &micro_)) {
        throw Error(ErrorCode::overflow, "money subtraction overflow");
    }
    return *this;
}

Money operator*(Money a, std::int64_t qty) {
    std::int64_t out = 0;
    if (__builtin_mul_overflow(a.micro_, qty, &out)) {
        throw Error(ErrorCode::overflow, "money scaling overflow");
    }
    return Money(out);
}

}  // namespace retrocarbon
