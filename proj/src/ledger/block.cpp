#include "ledger/block.hpp"

#include "common/error.hpp"

#include <algorithm>

namespace teevil::ledger {

Digest BlockHeader::compute_digest() const
{
    Hasher h;
    h.add(std::string_view("teevil/header/v1"));
    h.add_u64(height);
    h.add(prev_digest);
    h.add(payload_digest);
    h.add_u64(pow_nonce);
    return h.finish();
}

bool meets_target(const Digest& digest, unsigned difficulty_bits)
{
    return digest.leading_zero_bits() >= difficulty_bits;
}

BlockHeader mine_header(std::uint64_t height, const Digest& prev, const Digest& payload,
                        unsigned difficulty_bits)
{
    BlockHeader header{height, prev, payload, 0, {}};
    for (;; ++header.pow_nonce) {
        header.own_digest = header.compute_digest();
        if (meets_target(header.own_digest, difficulty_bits))
            return header;
    }
}

HeaderCheck verify_headers(std::span<const BlockHeader> headers, unsigned difficulty_bits)
{
    if (headers.empty())
        return {false, std::nullopt, "empty header sequence"};
    for (std::size_t i = 0; i < headers.size(); ++i) {
        const BlockHeader& h = headers[i];
        if (h.compute_digest() != h.own_digest)
            return {false, i, "digest does not match header fields"};
        if (!meets_target(h.own_digest, difficulty_bits))
            return {false, i, "proof of work below target"};
        if (i > 0) {
            if (h.height != headers[i - 1].height + 1)
                return {false, i, "height discontinuity"};
            if (h.prev_digest != headers[i - 1].own_digest)
                return {false, i, "broken prev link"};
        } else if (h.height == 0 && !h.prev_digest.is_zero()) {
            return {false, i, "genesis with non-zero prev link"};
        }
    }
    return {};
}

bool check_consistency(std::span<const BlockHeader> a, std::span<const BlockHeader> b,
                       unsigned difficulty_bits)
{
    if (auto c = verify_headers(a, difficulty_bits); !c)
        throw Error(ErrorCode::malformed_chain, "first sequence: " + c.reason);
    if (auto c = verify_headers(b, difficulty_bits); !c)
        throw Error(ErrorCode::malformed_chain, "second sequence: " + c.reason);

    auto longer = a;
    auto shorter = b;
    if (b.back().height > a.back().height)
        std::swap(longer, shorter);

    const std::uint64_t longer_start = longer.front().height;
    const std::uint64_t shorter_start = shorter.front().height;
    const std::uint64_t shorter_tip = shorter.back().height;
    if (longer_start > shorter_tip)
        return false;

    for (std::uint64_t h = std::max(longer_start, shorter_start); h <= shorter_tip; ++h) {
        if (longer[h - longer_start].own_digest != shorter[h - shorter_start].own_digest)
            return false;
    }
    return true;
}

} // namespace teevil::ledger
