#include "enclave/campaign.hpp"

namespace teevil::enclave {

std::string to_string(SlotStatus status)
{
    switch (status) {
    case SlotStatus::pending: return "pending";
    case SlotStatus::skipped_inconsistent: return "skipped_inconsistent";
    case SlotStatus::skipped_unreachable: return "skipped_unreachable";
    case SlotStatus::performed: return "performed";
    case SlotStatus::confirmed: return "confirmed";
    case SlotStatus::reverted: return "reverted";
    case SlotStatus::timeout: return "timeout";
    case SlotStatus::failed: return "failed";
    }
    return "?";
}

bool is_final(SlotStatus status)
{
    return status != SlotStatus::pending && status != SlotStatus::performed;
}

bool valid_transition(SlotStatus from, SlotStatus to)
{
    switch (from) {
    case SlotStatus::pending:
        return to == SlotStatus::skipped_inconsistent || to == SlotStatus::skipped_unreachable ||
               to == SlotStatus::performed || to == SlotStatus::timeout || to == SlotStatus::failed;
    case SlotStatus::performed:
        return to == SlotStatus::confirmed || to == SlotStatus::reverted || to == SlotStatus::timeout ||
               to == SlotStatus::failed;
    default: return false;
    }
}

std::string to_string(CampaignStatus status)
{
    switch (status) {
    case CampaignStatus::created: return "created";
    case CampaignStatus::funded: return "funded";
    case CampaignStatus::running: return "running";
    case CampaignStatus::terminated: return "terminated";
    }
    return "?";
}

} // namespace teevil::enclave
