#include "attestation/mesh.hpp"

#include "common/error.hpp"

namespace teevil::attestation {

std::string to_string(EnclaveKind kind)
{
    switch (kind) {
    case EnclaveKind::interface: return "interface";
    case EnclaveKind::service: return "service";
    case EnclaveKind::payment: return "payment";
    case EnclaveKind::combined: return "combined";
    }
    return "?";
}

Digest measurement_for(EnclaveKind kind, std::string_view code_version)
{
    Hasher h;
    h.add(std::string_view("teevil/measurement/v1")).add(to_string(kind)).add(code_version);
    return h.finish();
}

Mesh::Mesh(std::set<Digest> genuine, Reachability reachable)
    : genuine_(std::move(genuine)), reachable_(std::move(reachable))
{
}

void Mesh::add_enclave(EnclaveIdentity identity)
{
    auto id = identity.enclave_id;
    enclaves_[id] = std::move(identity);
}

const EnclaveIdentity* Mesh::find(const std::string& enclave_id) const
{
    auto it = enclaves_.find(enclave_id);
    return it == enclaves_.end() ? nullptr : &it->second;
}

Session Mesh::attest(const std::string& initiator, const Digest& expected, const std::string& target_id)
{
    const EnclaveIdentity* target = find(target_id);
    if (!target || (reachable_ && !reachable_(initiator, target_id)))
        throw Error(ErrorCode::unreachable, target_id);
    if (target->measurement != expected)
        throw Error(ErrorCode::measurement_mismatch, target_id + " reports " + target->measurement.short_hex());
    auto key = std::make_pair(initiator, target_id);
    auto it = sessions_.find(key);
    if (it != sessions_.end())
        return it->second;
    Session s{next_session_++, initiator, target_id, true};
    sessions_.emplace(key, s);
    return s;
}

bool Mesh::has_session(const std::string& a, const std::string& b) const
{
    return sessions_.contains({a, b}) || sessions_.contains({b, a});
}

const EnlistmentRecord& Mesh::enlist(const std::string& interface_id, const std::string& other_id)
{
    auto key = std::make_pair(interface_id, other_id);
    if (auto it = enlisted_.find(key); it != enlisted_.end())
        return it->second;
    const EnclaveIdentity* iface = find(interface_id);
    const EnclaveIdentity* other = find(other_id);
    if (!iface || !other)
        throw Error(ErrorCode::unreachable, iface ? other_id : interface_id);
    if (!is_genuine(iface->measurement))
        throw Error(ErrorCode::measurement_mismatch, interface_id);
    if (!is_genuine(other->measurement))
        throw Error(ErrorCode::measurement_mismatch, other_id);
    attest(interface_id, other->measurement, other_id);
    attest(other_id, iface->measurement, interface_id);
    return enlisted_.emplace(key, EnlistmentRecord{interface_id, other_id, other->kind, other->public_key})
        .first->second;
}

bool Mesh::enlisted(const std::string& interface_id, const std::string& other_id) const
{
    return enlisted_.contains({interface_id, other_id});
}

std::vector<EnlistmentRecord> Mesh::registry(const std::string& interface_id) const
{
    std::vector<EnlistmentRecord> out;
    for (const auto& [key, rec] : enlisted_)
        if (key.first == interface_id)
            out.push_back(rec);
    return out;
}

EscrowReceipt Mesh::backup_keys(const std::string& payment_id, const std::string& interface_id,
                                const ledger::SpendKey& key)
{
    if (!enlisted(interface_id, payment_id))
        throw Error(ErrorCode::not_enlisted, payment_id + " under " + interface_id);
    escrow_[{interface_id, key.address}] = Escrow{payment_id, key};
    return EscrowReceipt{payment_id, interface_id, key.address};
}

bool Mesh::has_escrow(const std::string& interface_id, const std::string& address) const
{
    return escrow_.contains({interface_id, address});
}

ledger::SpendKey Mesh::release_escrow(const std::string& interface_id, const std::string& payment_id,
                                      const std::string& address, SimTime last_heartbeat, SimTime now,
                                      Duration liveness_window)
{
    auto it = escrow_.find({interface_id, address});
    if (it == escrow_.end() || it->second.payment_id != payment_id)
        throw Error(ErrorCode::not_enlisted, "no escrow for " + address);
    if (now - last_heartbeat < liveness_window)
        throw Error(ErrorCode::recovery_refused, payment_id + " heartbeat is recent");
    return it->second.key;
}

} // namespace teevil::attestation
