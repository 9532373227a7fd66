#include "common/amount.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace teevil {

Amount Amount::from_coins(double coins)
{
    return Amount(std::llround(coins * static_cast<double>(units_per_coin)));
}

Amount Amount::parse(const std::string& text)
{
    if (text.empty())
        throw std::invalid_argument("empty amount");
    std::size_t pos = 0;
    bool negative = false;
    if (text[0] == '-') {
        negative = true;
        pos = 1;
    }
    std::int64_t whole = 0;
    std::int64_t frac = 0;
    int frac_digits = 0;
    bool seen_digit = false;
    bool in_frac = false;
    for (; pos < text.size(); ++pos) {
        char c = text[pos];
        if (c == '.') {
            if (in_frac)
                throw std::invalid_argument("bad amount: " + text);
            in_frac = true;
            continue;
        }
        if (c < '0' || c > '9')
            throw std::invalid_argument("bad amount: " + text);
        seen_digit = true;
        if (in_frac) {
            if (++frac_digits > 8)
                throw std::invalid_argument("amount has more than 8 decimals: " + text);
            frac = frac * 10 + (c - '0');
        } else {
            whole = whole * 10 + (c - '0');
        }
    }
    if (!seen_digit)
        throw std::invalid_argument("bad amount: " + text);
    for (; frac_digits < 8; ++frac_digits)
        frac *= 10;
    std::int64_t units = whole * units_per_coin + frac;
    return Amount(negative ? -units : units);
}

std::string Amount::to_string() const
{
    std::int64_t abs_units = units_ < 0 ? -units_ : units_;
    std::string out = units_ < 0 ? "-" : "";
    out += std::to_string(abs_units / units_per_coin);
    std::int64_t frac = abs_units % units_per_coin;
    if (frac != 0) {
        std::string digits = std::to_string(frac);
        digits.insert(0, 8 - digits.size(), '0');
        while (!digits.empty() && digits.back() == '0')
            digits.pop_back();
        out += "." + digits;
    }
    return out;
}

Rate Rate::from_double(double fraction)
{
    if (!(fraction >= 0.0))
        throw std::invalid_argument("rate must be non-negative");
    return Rate(std::llround(fraction * one));
}

Amount Rate::apply_floor(Amount amount) const
{
    __int128 product = static_cast<__int128>(amount.units()) * ppm_;
    return Amount::from_units(static_cast<std::int64_t>(product / one));
}

} // namespace teevil
