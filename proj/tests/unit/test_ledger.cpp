#include "common/error.hpp"
#include "ledger/chain.hpp"
#include "ledger/chain_io.hpp"
#include "ledger/ledger_node.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace teevil;
using namespace teevil::ledger;

namespace {

constexpr unsigned bits = 8;

struct Fixture {
    std::shared_ptr<KeyRegistry> keys = std::make_shared<KeyRegistry>();
    SpendKey alice = keys->create("alice", 1);
    SpendKey bob = keys->create("bob", 2);
    Chain genesis = Chain::make_genesis(bits, {{"alice", Amount::from_coins(10), OutputKind::issuance},
                                               {"bob", Amount::from_coins(5), OutputKind::issuance}},
                                        42);

    Transaction pay(const Chain& c, const SpendKey& from, const std::string& to, Amount value,
                    const std::string& memo = "")
    {
        auto notes = c.unspent_for(from.address);
        REQUIRE(!notes.empty());
        Note n = notes.front();
        Transaction tx;
        tx.inputs = {n.id};
        tx.outputs = {{to, value, OutputKind::transfer}};
        if (n.value > value)
            tx.outputs.push_back({from.address, n.value - value, OutputKind::change});
        tx.memo = memo;
        tx.seal();
        sign_transaction(tx, {n}, {from});
        return tx;
    }
};

std::string header_digest_oracle(const BlockHeader& h)
{
    std::string tag = "teevil/header/v1";
    std::string buf = oracle::le64(tag.size()) + tag + oracle::le64(h.height);
    buf.append(reinterpret_cast<const char*>(h.prev_digest.bytes.data()), 32);
    buf.append(reinterpret_cast<const char*>(h.payload_digest.bytes.data()), 32);
    buf += oracle::le64(h.pow_nonce);
    return oracle::sha256_hex(buf);
}

} // namespace

TEST_CASE("genesis issues the allocations")
{
    Fixture f;
    CHECK(f.genesis.tip_height() == 0);
    CHECK(f.genesis.balance("alice") == Amount::from_coins(10));
    CHECK(f.genesis.balance("bob") == Amount::from_coins(5));
    CHECK(f.genesis.genesis_issuance() == Amount::from_coins(15));
    CHECK(verify_headers(f.genesis.headers(), bits));
}

TEST_CASE("different seeds give different genesis blocks")
{
    std::vector<TxOutput> alloc{{"alice", Amount::from_coins(1), OutputKind::issuance}};
    auto a = Chain::make_genesis(bits, alloc, 1);
    auto b = Chain::make_genesis(bits, alloc, 2);
    CHECK(a.tip().own_digest != b.tip().own_digest);
}

TEST_CASE("header digests match an independent encoding")
{
    Fixture f;
    Chain c = f.genesis;
    for (int i = 0; i < 5; ++i)
        c = append_block(c, {}, f.keys.get());
    for (const auto& h : c.headers()) {
        CHECK(h.own_digest.hex() == header_digest_oracle(h));
        CHECK(oracle::leading_zero_bits(h.own_digest.hex()) >= bits);
    }
}

TEST_CASE("a transfer moves value and conserves supply")
{
    Fixture f;
    Transaction tx = f.pay(f.genesis, f.alice, "bob", Amount::from_coins(3));
    Chain c = append_block(f.genesis, {tx}, f.keys.get());
    CHECK(c.balance("alice") == Amount::from_coins(7));
    CHECK(c.balance("bob") == Amount::from_coins(8));
    CHECK(c.balance("alice") + c.balance("bob") == c.genesis_issuance());
    CHECK(confirmations(c, tx.tx_id) == 1);
    c = append_block(c, {}, f.keys.get());
    CHECK(confirmations(c, tx.tx_id) == 2);
    CHECK(confirmations(c, sha256("nope")) == 0);
}

TEST_CASE("invalid transactions are rejected")
{
    Fixture f;
    SUBCASE("double spend across blocks")
    {
        Transaction tx = f.pay(f.genesis, f.alice, "bob", Amount::from_coins(3));
        Chain c = append_block(f.genesis, {tx}, f.keys.get());
        Transaction again = tx;
        again.memo = "again";
        again.seal();
        sign_transaction(again, {f.genesis.unspent_for("alice").front()}, {f.alice});
        CHECK_THROWS_AS(append_block(c, {again}, f.keys.get()), Error);
    }
    SUBCASE("double spend within a block")
    {
        Transaction a = f.pay(f.genesis, f.alice, "bob", Amount::from_coins(3), "a");
        Transaction b = f.pay(f.genesis, f.alice, "bob", Amount::from_coins(4), "b");
        CHECK_THROWS_AS(append_block(f.genesis, {a, b}, f.keys.get()), Error);
    }
    SUBCASE("unbalanced")
    {
        Transaction tx = f.pay(f.genesis, f.alice, "bob", Amount::from_coins(3));
        tx.outputs[0].value += Amount::from_units(1);
        tx.seal();
        sign_transaction(tx, {f.genesis.unspent_for("alice").front()}, {f.alice});
        CHECK_THROWS_AS(append_block(f.genesis, {tx}, f.keys.get()), Error);
    }
    SUBCASE("wrong key")
    {
        Transaction tx = f.pay(f.genesis, f.alice, "bob", Amount::from_coins(3));
        tx.witnesses[0] = sign_input(f.bob, tx.tx_id);
        CHECK_THROWS_AS(append_block(f.genesis, {tx}, f.keys.get()), Error);
    }
    SUBCASE("tampered contents")
    {
        Transaction tx = f.pay(f.genesis, f.alice, "bob", Amount::from_coins(3));
        tx.outputs[0].address = "mallory";
        CHECK_THROWS_AS(append_block(f.genesis, {tx}, f.keys.get()), Error);
    }
    SUBCASE("issuance outside genesis")
    {
        Transaction tx;
        tx.outputs = {{"mallory", Amount::from_coins(1), OutputKind::issuance}};
        tx.seal();
        CHECK_THROWS_AS(append_block(f.genesis, {tx}, f.keys.get()), Error);
    }
}

TEST_CASE("the burn address can never spend")
{
    KeyRegistry keys;
    CHECK_THROWS(keys.add(SpendKey{std::string(burn_address), sha256("k")}));
}

TEST_CASE("ledger node submission is idempotent and rejects mempool double spends")
{
    Fixture f;
    LedgerNode node(f.genesis, f.keys);
    Transaction a = f.pay(f.genesis, f.alice, "bob", Amount::from_coins(3), "a");
    CHECK(node.submit_tx(a) == LedgerNode::SubmitOutcome::queued);
    CHECK(node.submit_tx(a) == LedgerNode::SubmitOutcome::duplicate);
    Transaction b = f.pay(f.genesis, f.alice, "bob", Amount::from_coins(4), "b");
    CHECK_THROWS_AS(node.submit_tx(b), Error);
    const Block& blk = node.mine_block();
    CHECK(blk.txs.size() == 1);
    CHECK(node.mempool().empty());
    CHECK(node.submit_tx(a) == LedgerNode::SubmitOutcome::duplicate);
    CHECK(node.chain().balance("bob") == Amount::from_coins(8));
}

TEST_CASE("pending outputs can be spent before mining")
{
    Fixture f;
    LedgerNode node(f.genesis, f.keys);
    Transaction a = f.pay(f.genesis, f.alice, "bob", Amount::from_coins(3), "a");
    node.submit_tx(a);
    auto pending = node.pending_unspent_for("bob");
    CHECK(pending.size() == 2);
}

TEST_CASE("inclusion proofs bind a transaction to a header view")
{
    Fixture f;
    Transaction tx = f.pay(f.genesis, f.alice, "bob", Amount::from_coins(1));
    Chain c = append_block(f.genesis, {tx}, f.keys.get());
    for (int i = 0; i < 6; ++i)
        c = append_block(c, {}, f.keys.get());
    auto proof = make_inclusion_proof(c, tx.tx_id);
    auto view = c.header_suffix(10);
    CHECK(confirmations_in_view(view, tx.tx_id, proof) == 7);
    CHECK(confirmations_in_view(view, sha256("other"), proof) == 0);
    auto forged = proof;
    forged.block_tx_ids.push_back(sha256("extra"));
    CHECK(confirmations_in_view(view, tx.tx_id, forged) == 0);
    // A view that stops before the including block proves nothing.
    CHECK(confirmations_in_view(c.prefix(0).headers(), tx.tx_id, proof) == 0);
}

TEST_CASE("observers only see outputs paying them")
{
    Fixture f;
    Transaction tx = f.pay(f.genesis, f.alice, "bob", Amount::from_coins(3));
    Chain c = append_block(f.genesis, {tx}, f.keys.get());
    auto carol = observe_transaction(c, tx.tx_id, "carol");
    CHECK(carol.exists);
    CHECK(carol.output_count == 2);
    CHECK(carol.visible_outputs.empty());
    auto bob = observe_transaction(c, tx.tx_id, "bob");
    REQUIRE(bob.visible_outputs.size() == 1);
    CHECK(bob.visible_outputs[0].second.value == Amount::from_coins(3));
}

TEST_CASE("chain dumps restore with full revalidation")
{
    Fixture f;
    Transaction tx = f.pay(f.genesis, f.alice, "bob", Amount::from_coins(3), "memo-1");
    Chain c = append_block(f.genesis, {tx}, f.keys.get());
    c = append_block(c, {}, f.keys.get());
    std::string text = dump_chain(c);
    Chain back = restore_chain(text, f.keys.get());
    CHECK(back.tip() == c.tip());
    CHECK(back.balance("bob") == c.balance("bob"));
    CHECK(dump_chain(back) == text);

    std::string tampered = text;
    auto pos = tampered.find("out transfer bob ");
    REQUIRE(pos != std::string::npos);
    tampered.replace(pos, 17, "out transfer eve ");
    CHECK_THROWS_AS(restore_chain(tampered, f.keys.get()), Error);
    CHECK_THROWS_AS(restore_chain(std::string("garbage"), f.keys.get()), Error);
}

TEST_CASE("consistency: extension, fork and gap")
{
    Fixture f;
    Chain base = f.genesis;
    for (int i = 0; i < 3; ++i)
        base = append_block(base, {}, f.keys.get());
    Chain longer = append_block(base, {}, f.keys.get());
    Chain fork = append_block(base, {f.pay(base, f.alice, "bob", Amount::from_coins(1))}, f.keys.get());
    CHECK(check_consistency(base.headers(), longer.headers(), bits));
    CHECK(check_consistency(longer.headers(), base.headers(), bits));
    CHECK_FALSE(check_consistency(longer.headers(), fork.headers(), bits));
    CHECK(check_consistency(longer.header_suffix(2), base.header_suffix(2), bits));
    auto broken = longer.headers();
    broken[2].pow_nonce ^= 1;
    CHECK_THROWS_AS(check_consistency(broken, base.headers(), bits), Error);
}

TEST_CASE("verify_headers reports the failing index")
{
    Fixture f;
    Chain c = f.genesis;
    for (int i = 0; i < 4; ++i)
        c = append_block(c, {}, f.keys.get());
    auto hs = c.headers();
    CHECK(verify_headers(hs, bits));
    CHECK_FALSE(verify_headers({}, bits));
    hs[3].prev_digest = hs[1].own_digest;
    auto r = verify_headers(hs, bits);
    CHECK_FALSE(r.ok);
    CHECK(r.failure_index == 3u);
    CHECK_FALSE(verify_headers(c.headers(), 200));
}
