#include "mixcascade/rational.hpp"

#include <charconv>
#include <numeric>
#include <stdexcept>

namespace mixcascade {

namespace {

std::int64_t parse_int(std::string_view s, std::string_view whole) {
    std::int64_t v = 0;
    if (s.empty())
        throw std::invalid_argument("malformed number '" + std::string(whole) + "'");
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::invalid_argument("malformed number '" + std::string(whole) + "'");
    return v;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0)
        throw std::invalid_argument("zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    num_ = num / g;
    den_ = den / g;
}

Rational Rational::parse(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t'))
        text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t'))
        text.remove_suffix(1);
    if (text.empty())
        throw std::invalid_argument("empty number");

    if (auto slash = text.find('/'); slash != std::string_view::npos)
        return Rational(parse_int(text.substr(0, slash), text), parse_int(text.substr(slash + 1), text));

    bool negative = false;
    std::string_view body = text;
    if (body.front() == '-' || body.front() == '+') {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }
    const auto dot = body.find('.');
    std::string_view int_part = body.substr(0, dot);
    std::string_view frac_part = dot == std::string_view::npos ? std::string_view{} : body.substr(dot + 1);
    if (int_part.empty() && frac_part.empty())
        throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    if (frac_part.size() > 15)
        throw std::invalid_argument("too many decimal places in '" + std::string(text) + "'");
    for (char c : frac_part)
        if (c < '0' || c > '9')
            throw std::invalid_argument("malformed number '" + std::string(text) + "'");

    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i)
        den *= 10;
    const std::int64_t whole = int_part.empty() ? 0 : parse_int(int_part, text);
    if (whole < 0)
        throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    const std::int64_t frac = frac_part.empty() ? 0 : parse_int(frac_part, text);
    const std::int64_t num = whole * den + frac;
    return Rational(negative ? -num : num, den);
}

std::string Rational::to_string() const {
    // Finite decimal expansion iff the reduced denominator is 2^a 5^b.
    std::int64_t d = den_;
    int twos = 0, fives = 0;
    while (d % 2 == 0) { d /= 2; ++twos; }
    while (d % 5 == 0) { d /= 5; ++fives; }
    if (d != 1)
        return std::to_string(num_) + "/" + std::to_string(den_);

    const int digits = std::max(twos, fives);
    std::int64_t scale = 1;
    for (int i = 0; i < digits; ++i)
        scale *= 10;
    const std::int64_t scaled = num_ * (scale / den_);
    const bool negative = scaled < 0;
    const std::int64_t mag = negative ? -scaled : scaled;
    std::string out = std::to_string(mag / scale);
    if (digits > 0) {
        std::string frac = std::to_string(mag % scale);
        frac.insert(0, static_cast<std::size_t>(digits) - frac.size(), '0');
        out += "." + frac;
    }
    return negative ? "-" + out : out;
}

std::int64_t Rational::round_times(std::int64_t n) const {
    // floor((2 * num * n + den) / (2 * den)), exact for non-negative values.
    const __int128 top = static_cast<__int128>(2) * num_ * n + den_;
    const __int128 bottom = static_cast<__int128>(2) * den_;
    __int128 q = top / bottom;
    if (top % bottom != 0 && top < 0)
        --q;
    return static_cast<std::int64_t>(q);
}

Rational Rational::operator+(const Rational& o) const {
    return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

Rational Rational::operator*(std::int64_t k) const {
    return Rational(num_ * k, den_);
}

}  // namespace mixcascade
