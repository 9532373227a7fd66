#include "common/digest.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace teevil {

std::string Digest::hex() const
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(64, '0');
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        out[2 * i] = digits[bytes[i] >> 4];
        out[2 * i + 1] = digits[bytes[i] & 0xf];
    }
    return out;
}

namespace {
int nibble(char c)
{
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    throw std::invalid_argument("bad hex digit");
}
} // namespace

Digest Digest::from_hex(std::string_view hex)
{
    if (hex.size() != 64)
        throw std::invalid_argument("digest hex must be 64 characters");
    Digest d;
    for (std::size_t i = 0; i < 32; ++i)
        d.bytes[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
    return d;
}

bool Digest::is_zero() const
{
    for (auto b : bytes)
        if (b != 0)
            return false;
    return true;
}

unsigned Digest::leading_zero_bits() const
{
    unsigned bits = 0;
    for (auto b : bytes) {
        if (b == 0) {
            bits += 8;
            continue;
        }
        for (int i = 7; i >= 0 && !(b & (1u << i)); --i)
            ++bits;
        break;
    }
    return bits;
}

Hasher::Hasher() : ctx_(EVP_MD_CTX_new())
{
    if (!ctx_ || EVP_DigestInit_ex(static_cast<EVP_MD_CTX*>(ctx_), EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 init failed");
}

Hasher::~Hasher() { EVP_MD_CTX_free(static_cast<EVP_MD_CTX*>(ctx_)); }

Hasher& Hasher::add(std::span<const std::uint8_t> bytes)
{
    EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), bytes.data(), bytes.size());
    return *this;
}

Hasher& Hasher::add(std::string_view text)
{
    add_u64(text.size());
    EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), text.data(), text.size());
    return *this;
}

Hasher& Hasher::add_u64(std::uint64_t v)
{
    std::uint8_t buf[8];
    for (int i = 0; i < 8; ++i)
        buf[i] = static_cast<std::uint8_t>(v >> (8 * i));
    return add(std::span<const std::uint8_t>(buf, 8));
}

Digest Hasher::finish()
{
    Digest d;
    unsigned int len = 0;
    EVP_DigestFinal_ex(static_cast<EVP_MD_CTX*>(ctx_), d.bytes.data(), &len);
    return d;
}

Digest sha256(std::string_view data)
{
    Digest d;
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), d.bytes.data(), &len, EVP_sha256(), nullptr);
    return d;
}

} // namespace teevil
