#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace teevil {

/// Coin value in indivisible units (1 coin = 10^8 units). All ledger
/// arithmetic is integral so conservation checks are bit-exact.
class Amount {
public:
    static constexpr std::int64_t units_per_coin = 100'000'000;

    constexpr Amount() = default;
    static constexpr Amount from_units(std::int64_t units) { return Amount(units); }
    static Amount from_coins(double coins);
    /// Parses "12", "0.5", "65.50000001". Throws std::invalid_argument.
    static Amount parse(const std::string& text);

    constexpr std::int64_t units() const { return units_; }
    std::string to_string() const;

    constexpr Amount& operator+=(Amount o) { units_ += o.units_; return *this; }
    constexpr Amount& operator-=(Amount o) { units_ -= o.units_; return *this; }
    friend constexpr Amount operator+(Amount a, Amount b) { return Amount(a.units_ + b.units_); }
    friend constexpr Amount operator-(Amount a, Amount b) { return Amount(a.units_ - b.units_); }
    friend constexpr Amount operator*(Amount a, std::int64_t k) { return Amount(a.units_ * k); }
    friend constexpr Amount operator-(Amount a) { return Amount(-a.units_); }
    friend constexpr auto operator<=>(Amount, Amount) = default;

private:
    constexpr explicit Amount(std::int64_t units) : units_(units) {}
    std::int64_t units_ = 0;
};

/// A non-negative fraction in parts per million.
class Rate {
public:
    static constexpr std::int64_t one = 1'000'000;

    constexpr Rate() = default;
    static constexpr Rate from_ppm(std::int64_t ppm) { return Rate(ppm); }
    static Rate from_double(double fraction);

    constexpr std::int64_t ppm() const { return ppm_; }
    double as_double() const { return static_cast<double>(ppm_) / one; }

    /// floor(rate * amount) for non-negative amounts.
    Amount apply_floor(Amount amount) const;

    friend constexpr auto operator<=>(Rate, Rate) = default;

private:
    constexpr explicit Rate(std::int64_t ppm) : ppm_(ppm) {}
    std::int64_t ppm_ = 0;
};

} // namespace teevil
