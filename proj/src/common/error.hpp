#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace teevil {

enum class ErrorCode {
    invalid_transaction,
    malformed_chain,
    measurement_mismatch,
    unreachable,
    not_enlisted,
    recovery_refused,
    proxy_unreachable,
    bad_credentials,
    no_compliant_accounts,
    unverified_funding,
    no_service_enclaves,
    no_payment_enclaves,
    insufficient_share,
    response_cut,
    action_rejected,
    not_observable,
    proxy_dead,
    nothing_to_revert,
    auth_failed,
    duplicate_action,
    not_found,
    already_voted,
    no_compliant_nodes,
    cpu_already_bound,
    schema_error,
    io_error,
};

std::string_view to_string(ErrorCode code);

/// Protocol-level failure. Every operation that can fail throws one of these
/// with the code naming the failure; the message carries the detail.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::invalid_transaction: return "InvalidTransaction";
    case ErrorCode::malformed_chain: return "MalformedChain";
    case ErrorCode::measurement_mismatch: return "MeasurementMismatch";
    case ErrorCode::unreachable: return "Unreachable";
    case ErrorCode::not_enlisted: return "NotEnlisted";
    case ErrorCode::recovery_refused: return "RecoveryRefused";
    case ErrorCode::proxy_unreachable: return "ProxyUnreachable";
    case ErrorCode::bad_credentials: return "BadCredentials";
    case ErrorCode::no_compliant_accounts: return "NoCompliantAccounts";
    case ErrorCode::unverified_funding: return "UnverifiedFunding";
    case ErrorCode::no_service_enclaves: return "NoServiceEnclaves";
    case ErrorCode::no_payment_enclaves: return "NoPaymentEnclaves";
    case ErrorCode::insufficient_share: return "InsufficientShare";
    case ErrorCode::response_cut: return "ResponseCut";
    case ErrorCode::action_rejected: return "ActionRejected";
    case ErrorCode::not_observable: return "NotObservable";
    case ErrorCode::proxy_dead: return "ProxyDead";
    case ErrorCode::nothing_to_revert: return "NothingToRevert";
    case ErrorCode::auth_failed: return "AuthFailed";
    case ErrorCode::duplicate_action: return "DuplicateAction";
    case ErrorCode::not_found: return "NotFound";
    case ErrorCode::already_voted: return "AlreadyVoted";
    case ErrorCode::no_compliant_nodes: return "NoCompliantNodes";
    case ErrorCode::cpu_already_bound: return "CpuAlreadyBound";
    case ErrorCode::schema_error: return "SchemaError";
    case ErrorCode::io_error: return "IoError";
    }
    return "Unknown";
}

} // namespace teevil
