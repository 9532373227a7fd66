#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>

namespace teevil {

/// 256-bit SHA-256 digest, compared bit-exactly.
struct Digest {
    std::array<std::uint8_t, 32> bytes{};

    std::string hex() const;
    std::string short_hex() const { return hex().substr(0, 12); }
    static Digest from_hex(std::string_view hex);
    bool is_zero() const;

    /// Number of leading zero bits when read as a big-endian integer.
    unsigned leading_zero_bits() const;

    friend auto operator<=>(const Digest&, const Digest&) = default;
};

/// Incremental hasher; field encodings are fixed-width little-endian so the
/// digest of a structure never depends on the platform.
class Hasher {
public:
    Hasher();
    ~Hasher();
    Hasher(const Hasher&) = delete;
    Hasher& operator=(const Hasher&) = delete;

    Hasher& add(std::span<const std::uint8_t> bytes);
    Hasher& add(std::string_view text);
    Hasher& add(const Digest& d) { return add(std::span<const std::uint8_t>(d.bytes)); }
    Hasher& add_u64(std::uint64_t v);
    Hasher& add_i64(std::int64_t v) { return add_u64(static_cast<std::uint64_t>(v)); }
    Digest finish();

private:
    void* ctx_;
};

Digest sha256(std::string_view data);

} // namespace teevil

template <>
struct std::hash<teevil::Digest> {
    std::size_t operator()(const teevil::Digest& d) const noexcept
    {
        std::size_t h = 0;
        for (int i = 0; i < 8; ++i)
            h = (h << 8) | d.bytes[i];
        return h;
    }
};
