#pragma once

#include "common/digest.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace teevil::ledger {

/// Default proof-of-work difficulty: the header digest must start with this
/// many zero bits.
inline constexpr unsigned default_difficulty_bits = 12;

struct BlockHeader {
    std::uint64_t height = 0;
    Digest prev_digest;
    Digest payload_digest;
    std::uint64_t pow_nonce = 0;
    Digest own_digest;

    /// H(height, prev_digest, payload_digest, pow_nonce), independent of the
    /// stored own_digest.
    Digest compute_digest() const;

    friend bool operator==(const BlockHeader&, const BlockHeader&) = default;
};

bool meets_target(const Digest& digest, unsigned difficulty_bits);

/// Searches nonces from zero upward until the digest meets the target.
BlockHeader mine_header(std::uint64_t height, const Digest& prev, const Digest& payload,
                        unsigned difficulty_bits);

struct HeaderCheck {
    bool ok = true;
    std::optional<std::size_t> failure_index;
    std::string reason;

    explicit operator bool() const { return ok; }
};

/// Checks every header's proof of work and the continuity of heights and
/// prev links. An empty sequence is rejected.
HeaderCheck verify_headers(std::span<const BlockHeader> headers, unsigned difficulty_bits);

/// true iff one sequence extends the other. Both must be valid header
/// sequences (throws Error{malformed_chain} otherwise). Sequences may be
/// suffixes of a longer chain: the one with the higher tip must cover the
/// other's tip height, and all overlapping heights must carry equal digests.
bool check_consistency(std::span<const BlockHeader> a, std::span<const BlockHeader> b,
                       unsigned difficulty_bits);

} // namespace teevil::ledger
