#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace mixcascade {

// Exact fraction used for thresholds and population fractions. Always
// stored reduced with a positive denominator. Range checks are left to the
// caller so that errors can name the offending setting.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t num, std::int64_t den);

    // Accepts "3/4", "0.25", "1", ".5". Decimal input is converted exactly.
    static Rational parse(std::string_view text);
    static Rational from_int(std::int64_t v) { return Rational(v, 1); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    // Shortest decimal rendering when the value has a finite decimal
    // expansion, otherwise "p/q".
    std::string to_string() const;

    // round(value * n) with halves rounded up.
    std::int64_t round_times(std::int64_t n) const;

    // count / total > *this, evaluated exactly.
    bool exceeded_by(std::int64_t count, std::int64_t total) const {
        return static_cast<__int128>(count) * den_ > static_cast<__int128>(num_) * total;
    }

    Rational operator+(const Rational& o) const;
    Rational operator*(std::int64_t k) const;

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num_) * b.den_ <=> static_cast<__int128>(b.num_) * a.den_;
    }

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace mixcascade
