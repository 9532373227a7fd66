#include "attestation/mesh.hpp"
#include "common/error.hpp"

#include <doctest.h>

using namespace teevil;
using namespace teevil::attestation;

namespace {

ErrorCode code_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::io_error;
}

struct Fixture {
    Digest iface_m = measurement_for(EnclaveKind::interface, "1.0");
    Digest pay_m = measurement_for(EnclaveKind::payment, "1.0");
    Digest svc_m = measurement_for(EnclaveKind::service, "1.0");
    Mesh mesh{{iface_m, pay_m, svc_m}};

    Fixture()
    {
        mesh.add_enclave({"iface", EnclaveKind::interface, iface_m, sha256("k-iface"), "host"});
        mesh.add_enclave({"pay", EnclaveKind::payment, pay_m, sha256("k-pay"), "host"});
        mesh.add_enclave({"svc", EnclaveKind::service, svc_m, sha256("k-svc"), "host"});
        mesh.add_enclave({"evil", EnclaveKind::service, measurement_for(EnclaveKind::service, "1.0-patched"),
                          sha256("k-evil"), "host"});
    }
};

} // namespace

TEST_CASE("measurements separate kinds and versions")
{
    CHECK(measurement_for(EnclaveKind::service, "1.0") == measurement_for(EnclaveKind::service, "1.0"));
    CHECK(measurement_for(EnclaveKind::service, "1.0") != measurement_for(EnclaveKind::service, "1.1"));
    CHECK(measurement_for(EnclaveKind::service, "1.0") != measurement_for(EnclaveKind::payment, "1.0"));
}

TEST_CASE("attestation succeeds only on the expected measurement")
{
    Fixture f;
    Session s = f.mesh.attest("renter", f.iface_m, "iface");
    CHECK(s.established);
    CHECK(f.mesh.has_session("iface", "renter"));
    CHECK(code_of([&] { f.mesh.attest("renter", f.svc_m, "evil"); }) == ErrorCode::measurement_mismatch);
    CHECK_FALSE(f.mesh.has_session("renter", "evil"));
    CHECK(code_of([&] { f.mesh.attest("renter", f.svc_m, "ghost"); }) == ErrorCode::unreachable);
}

TEST_CASE("unreachable targets fail without leaving a session")
{
    Fixture f;
    f.mesh.set_reachability([](const std::string&, const std::string& to) { return to != "svc"; });
    CHECK(code_of([&] { f.mesh.attest("iface", f.svc_m, "svc"); }) == ErrorCode::unreachable);
    CHECK_FALSE(f.mesh.has_session("iface", "svc"));
}

TEST_CASE("enlistment is mutual, idempotent and refuses patched code")
{
    Fixture f;
    const auto& rec = f.mesh.enlist("iface", "svc");
    CHECK(rec.kind == EnclaveKind::service);
    CHECK(rec.public_key == sha256("k-svc"));
    CHECK(f.mesh.has_session("iface", "svc"));
    CHECK(f.mesh.has_session("svc", "iface"));
    f.mesh.enlist("iface", "svc");
    CHECK(f.mesh.registry("iface").size() == 1);
    CHECK(code_of([&] { f.mesh.enlist("iface", "evil"); }) == ErrorCode::measurement_mismatch);
    CHECK_FALSE(f.mesh.enlisted("iface", "evil"));
}

TEST_CASE("escrowed keys are released only after the liveness window")
{
    Fixture f;
    ledger::SpendKey key{"share-0", sha256("secret")};
    CHECK(code_of([&] { f.mesh.backup_keys("pay", "iface", key); }) == ErrorCode::not_enlisted);
    f.mesh.enlist("iface", "pay");
    auto receipt = f.mesh.backup_keys("pay", "iface", key);
    CHECK(receipt.address == "share-0");
    CHECK(f.mesh.has_escrow("iface", "share-0"));

    CHECK(code_of([&] { f.mesh.release_escrow("iface", "pay", "share-0", seconds(10), seconds(15), seconds(6)); })
          == ErrorCode::recovery_refused);
    auto released = f.mesh.release_escrow("iface", "pay", "share-0", seconds(10), seconds(16), seconds(6));
    CHECK(released.secret == key.secret);
    CHECK(code_of([&] { f.mesh.release_escrow("iface", "svc", "share-0", seconds(0), seconds(100), seconds(6)); })
          == ErrorCode::not_enlisted);
    CHECK(code_of([&] { f.mesh.release_escrow("other", "pay", "share-0", seconds(0), seconds(100), seconds(6)); })
          == ErrorCode::not_enlisted);
}
