#include "harness/world.hpp"

#include "gossip/p2p.hpp"
#include "harness/verdict.hpp"
#include "services/social_service.hpp"
#include "services/voting_service.hpp"

#include <algorithm>

namespace teevil::harness {

using attestation::EnclaveIdentity;
using attestation::EnclaveKind;
using simnet::Channel;
using simnet::Message;
using simnet::MsgKind;

namespace {

std::uint64_t seed_of(std::uint64_t seed, std::string_view tag, std::string_view id)
{
    Hasher h;
    h.add(tag).add(id).add_u64(seed);
    Digest d = h.finish();
    std::uint64_t out = 0;
    for (int i = 0; i < 8; ++i)
        out = (out << 8) | d.bytes[i];
    return out;
}

EnclaveIdentity identity(const std::string& id, EnclaveKind kind)
{
    return EnclaveIdentity{id, kind, attestation::measurement_for(kind, enclave_code_version), sha256(id), "host"};
}

std::string wallet_of(const std::string& renter) { return "wallet-" + renter; }

} // namespace

World::World(ScenarioConfig config) : cfg_(std::move(config)), net_(cfg_.seed)
{
    keys_ = std::make_shared<ledger::KeyRegistry>();
    std::vector<ledger::TxOutput> alloc;
    for (const auto& r : cfg_.renters)
        alloc.push_back(ledger::TxOutput{wallet_of(r.id), r.balance, ledger::OutputKind::issuance});
    genesis_ = std::make_unique<ledger::Chain>(ledger::Chain::make_genesis(cfg_.params.difficulty_bits, alloc, cfg_.seed));
    ledger_ = std::make_unique<ledger::LedgerNode>(*genesis_, keys_);

    std::set<Digest> genuine;
    for (auto k : {EnclaveKind::interface, EnclaveKind::service, EnclaveKind::payment, EnclaveKind::combined})
        genuine.insert(attestation::measurement_for(k, enclave_code_version));
    mesh_ = std::make_unique<attestation::Mesh>(
        genuine, [this](const std::string& from, const std::string& to) { return net_.alive(from) && net_.alive(to); });

    std::map<std::string, services::MockService*> service_map;
    for (const auto& sc : cfg_.services) {
        std::unique_ptr<services::MockService> svc;
        if (sc.kind == ServiceConfig::Kind::social) {
            auto social = std::make_unique<services::SocialService>(sc.id);
            for (const auto& item : sc.items)
                social->create_item(item.id, item.hidden);
            svc = std::move(social);
        } else {
            svc = std::make_unique<services::VotingService>(sc.id, sc.vote_policy, sc.candidates);
        }
        svc->set_collusion(sc.colluding);
        service_map[sc.id] = svc.get();
        services_.push_back(std::move(svc));
    }
    rt_ = std::make_unique<enclave::Runtime>(
        enclave::Runtime{net_, *ledger_, keys_, *mesh_, service_map, cfg_.params, cfg_.seed});

    if (cfg_.topology.mode == gossip::Mode::p2p)
        return;

    for (const auto& svc : services_) {
        hosts_.push_back(std::make_unique<parties::ServiceHost>(*rt_, *svc));
        auto* host = hosts_.back().get();
        net_.register_actor(svc->id(), [host](const Message& m) { host->handle(m); });
    }
    net_.register_actor(enclave::ledger_actor, [this](const Message& m) {
        if (m.kind != MsgKind::tx_submit && m.kind != MsgKind::settlement_broadcast &&
            m.kind != MsgKind::refund_broadcast)
            return;
        const auto& copy = std::any_cast<const enclave::msg::TxCopy&>(m.payload);
        try {
            ledger_->submit_tx(copy.tx);
        } catch (const Error& e) {
            net_.log(enclave::ledger_actor, "reject", "tx=" + copy.tx.tx_id.short_hex() + " " + e.what());
        }
    });

    build_centralized_or_distributed();

    for (const auto& rc : cfg_.renters) {
        ledger::SpendKey key = keys_->create(wallet_of(rc.id), seed_of(cfg_.seed, "wallet", rc.id));
        auto renter = std::make_unique<parties::Renter>(*rt_, rc.id, key);
        auto* rp = renter.get();
        net_.register_actor(rc.id, [rp](const Message& m) { rp->handle(m); });
        renters_[rc.id] = std::move(renter);
    }
    setup_owners();

    for (const auto& cc : cfg_.campaigns)
        tracks_.push_back(Track{cc, cc.action});
    for (std::size_t i = 0; i < tracks_.size(); ++i)
        net_.schedule(seconds(tracks_[i].cfg.start_at_s), "", [this, i] { begin_campaign(tracks_[i]); });
    setup_adversary();
    net_.schedule(cfg_.params.block_interval, "", [this] { mine(); });
}

World::~World() = default;

services::MockService* World::service(const std::string& id) const { return rt_->service(id); }

const parties::Owner* World::owner(const std::string& id) const
{
    auto it = owner_index_.find(id);
    return it == owner_index_.end() ? nullptr : it->second;
}

std::size_t World::interface_index(const std::string& id) const
{
    for (std::size_t i = 0; i < ifaces_.size(); ++i)
        if (ifaces_[i]->id() == id)
            return i;
    return ifaces_.size();
}

void World::build_centralized_or_distributed()
{
    const TopologyConfig& T = cfg_.topology;
    gossip::Topology topo;
    topo.mode = T.mode;
    std::vector<std::string> iface_ids;
    for (std::size_t i = 0; i < T.interfaces; ++i) {
        std::string iid = "iface-" + std::to_string(i);
        iface_ids.push_back(iid);
        topo.add_node(iid, EnclaveKind::interface);
        auto ie = std::make_unique<enclave::InterfaceEnclave>(*rt_, identity(iid, EnclaveKind::interface));
        mesh_->add_enclave(ie->identity());
        auto* ip = ie.get();
        net_.register_actor(iid, [ip](const Message& m) { ip->handle(m); });
        ifaces_.push_back(std::move(ie));

        for (std::size_t e = 0; e < T.service_enclaves; ++e) {
            std::string sid = "svc-" + std::to_string(i) + "-" + std::to_string(e);
            auto se = std::make_unique<enclave::ServiceEnclave>(*rt_, identity(sid, EnclaveKind::service));
            mesh_->add_enclave(se->identity());
            auto* sp = se.get();
            net_.register_actor(sid, [sp](const Message& m) { sp->handle(m); });
            ip->attach(*sp);
            topo.add_node(sid, EnclaveKind::service);
            topo.add_edge(iid, sid);
            service_enclaves_.push_back(std::move(se));
        }
        for (std::size_t p = 0; p < T.payment_enclaves; ++p) {
            std::string pid = "pay-" + std::to_string(i) + "-" + std::to_string(p);
            auto pe = std::make_unique<enclave::PaymentEnclave>(*rt_, identity(pid, EnclaveKind::payment));
            mesh_->add_enclave(pe->identity());
            auto* pp = pe.get();
            net_.register_actor(pid, [pp](const Message& m) { pp->handle(m); });
            net_.on_revive(pid, [pp] { pp->on_revive(); });
            ip->attach(*pp);
            topo.add_node(pid, EnclaveKind::payment);
            topo.add_edge(iid, pid);
            payment_enclaves_.push_back(std::move(pe));
        }
    }
    if (T.mode == gossip::Mode::distributed) {
        if (T.edges.empty())
            for (std::size_t i = 1; i < T.interfaces; ++i)
                topo.add_edge(iface_ids[i - 1], iface_ids[i]);
        for (auto [a, b] : T.edges)
            topo.add_edge(iface_ids[a], iface_ids[b]);
    }
    gossip::validate_topology(topo);
    for (std::size_t i = 0; i < ifaces_.size(); ++i) {
        ifaces_[i]->set_peers(topo.peer_neighbors(iface_ids[i]));
        if (T.mode != gossip::Mode::distributed)
            continue;
        std::vector<std::string> others;
        for (const auto& id : iface_ids)
            if (id != iface_ids[i])
                others.push_back(id);
        for (std::size_t p = 0; p < T.payment_enclaves; ++p)
            payment_enclaves_[i * T.payment_enclaves + p]->set_backup_interfaces(others);
        auto* ip = ifaces_[i].get();
        std::string iid = iface_ids[i];
        // Self-rescheduling gossip loop; stops for good if the node dies.
        auto tick = std::make_shared<std::function<void()>>();
        *tick = [this, ip, iid, tick] {
            ip->gossip_tick();
            net_.schedule(cfg_.params.gossip_interval, iid, *tick);
        };
        net_.schedule(cfg_.params.gossip_interval, iid, *tick);
    }
}

void World::setup_owners()
{
    for (const auto& g : cfg_.owner_groups) {
        for (std::size_t i = 0; i < g.count; ++i) {
            std::string id = g.prefix + "-" + std::to_string(i);
            parties::OwnerProfile profile;
            profile.drops_nonce = g.profile.drops_nonce;
            profile.cuts_responses = g.profile.cuts_responses;
            profile.reverts_actions = g.profile.reverts_actions;
            profile.revert_delay = seconds(g.profile.revert_delay_s);
            auto owner = std::make_unique<parties::Owner>(*rt_, id, profile, "payout-" + id);
            for (const auto& sid : g.services) {
                services::MockService* svc = service(sid);
                std::string secret = "pw-" + id;
                if (g.ghost)
                    svc->add_ghost(id, secret);
                else
                    svc->add_account(id, secret);
                enclave::Policy pol;
                pol.service_id = sid;
                for (auto k : {services::ActionKind::upvote, services::ActionKind::post, services::ActionKind::follow,
                               services::ActionKind::vote})
                    if (svc->accepts(k) && (g.actions.empty() || std::count(g.actions.begin(), g.actions.end(), k)))
                        pol.allowed_actions.insert(k);
                pol.target_whitelist.insert(g.targets.begin(), g.targets.end());
                pol.price_per_action = g.price + g.price_step * static_cast<std::int64_t>(i);
                pol.accepts_revert_window = g.accepts_revert_window;
                services::Credential cred{sid, id, secret};
                if (!g.profile.prevote.empty())
                    if (auto* voting = dynamic_cast<services::VotingService*>(svc)) {
                        try {
                            voting->cast_vote(cred, g.profile.prevote);
                        } catch (const Error& e) {
                            net_.log(id, "prevote-failed", e.what());
                        }
                    }
                owner->add_account(cred, pol);
            }
            auto* op = owner.get();
            owner_index_[id] = op;
            if (cfg_.topology.mode == gossip::Mode::p2p) {
                owners_.push_back(std::move(owner));
                continue;
            }
            net_.register_actor(id, [op](const Message& m) { op->handle(m); });
            if (profile.cuts_responses) {
                simnet::NetRule rule;
                rule.adversary = id;
                rule.match.cut_point = simnet::CutPoint::service_response;
                rule.match.owner = id;
                net_.add_rule(rule);
            }
            enroll(*op, g.home);
            op->start_polling([this](parties::Owner& o) { reenroll(o); });
            owners_.push_back(std::move(owner));
        }
    }
}

bool World::enroll(parties::Owner& owner, std::size_t index)
{
    enclave::InterfaceEnclave& f = *ifaces_.at(index);
    try {
        mesh_->attest(owner.id(), f.identity().measurement, f.id());
        f.enroll_owner(owner.enrollment(),
                       [&owner](const std::string&, const Digest& nonce) { return owner.echo_nonce(nonce); });
        owner.set_home(f.id());
        return true;
    } catch (const Error& e) {
        enrollment_failures_.push_back(owner.id() + "@" + f.id() + ": " + e.what());
        net_.log(owner.id(), "enroll-failed", "interface=" + f.id() + " code=" + std::string(to_string(e.code())));
        if (e.code() == ErrorCode::bad_credentials && f.own_owners().contains(owner.id())) {
            owner.set_home(f.id());
            return true;
        }
        return false;
    }
}

void World::reenroll(parties::Owner& owner)
{
    std::size_t home = interface_index(owner.home());
    std::size_t n = ifaces_.size();
    for (std::size_t k = 1; k <= n; ++k) {
        std::size_t j = (home + k) % n;
        if (j == home || !net_.alive(ifaces_[j]->id()))
            continue;
        if (enroll(owner, j)) {
            net_.log(owner.id(), "reenroll", "interface=" + ifaces_[j]->id());
            return;
        }
    }
}

void World::setup_adversary()
{
    for (const auto& d : cfg_.adversary) {
        SimTime from = seconds(d.at_s);
        SimTime until = d.until_s ? seconds(*d.until_s) : SimTime{std::numeric_limits<std::int64_t>::max()};
        switch (d.kind) {
        case DirectiveKind::cut:
        case DirectiveKind::drop:
        case DirectiveKind::delay: {
            simnet::NetRule rule;
            rule.adversary = d.adversary;
            if (d.cut_point)
                rule.match.cut_point = simnet::cut_point_from_int(*d.cut_point);
            rule.match.kind = d.msg_kind;
            rule.match.owner = d.owner;
            rule.match.campaign = d.campaign;
            rule.match.src = d.src;
            rule.match.dst = d.dst;
            rule.match.exchange = d.exchange;
            rule.action = d.kind == DirectiveKind::delay ? simnet::RuleAction::delay : simnet::RuleAction::drop;
            rule.delay = seconds(d.extra_s);
            rule.active_from = from;
            rule.active_until = until;
            net_.add_rule(rule);
            break;
        }
        case DirectiveKind::kill: net_.kill_at(d.target, from, d.adversary); break;
        case DirectiveKind::revive: net_.revive_at(d.target, from); break;
        case DirectiveKind::eclipse:
            net_.schedule(from, "", [this, d] {
                pending_eclipses_.push_back(d);
                apply_eclipses();
            });
            break;
        case DirectiveKind::collusion:
            net_.schedule(from, "", [this, d] {
                if (services::MockService* svc = service(d.target)) {
                    svc->set_collusion(d.on);
                    net_.log(d.target, "collusion", d.on ? "on" : "off");
                }
            });
            break;
        }
    }
}

void World::apply_eclipses()
{
    std::vector<Directive> still;
    for (const auto& d : pending_eclipses_) {
        auto it = std::find_if(tracks_.begin(), tracks_.end(), [&](const Track& t) { return t.cfg.id == *d.campaign; });
        if (it == tracks_.end() || !it->forged) {
            still.push_back(d);
            continue;
        }
        net_.set_eclipse(*d.owner, it->forged->fork, d.adversary);
        eclipses_.push_back(EclipseReport{*d.owner, d.adversary, *d.campaign});
        net_.log("net", "eclipse", "owner=" + *d.owner + " adversary=" + d.adversary + " campaign=" + *d.campaign);
    }
    pending_eclipses_ = std::move(still);
}

void World::begin_campaign(Track& t)
{
    const std::string& cid = t.cfg.id;
    enclave::InterfaceEnclave& iface = *ifaces_.at(t.cfg.interface);
    services::MockService* svc = service(t.cfg.service);
    if (t.cfg.hidden_target)
        if (auto* social = dynamic_cast<services::SocialService*>(svc)) {
            t.action.target = "hidden-" + cid;
            t.action.link = social->create_item(t.action.target, true);
        }
    if (!net_.alive(iface.id())) {
        t.state = "lost";
        t.reason = "interface " + iface.id() + " is down";
        return;
    }
    try {
        t.quote = iface.quote_campaign(cid, t.cfg.service, t.action, t.cfg.count, seconds(t.cfg.revert_window_s));
    } catch (const Error& e) {
        t.state = "rejected";
        t.reason = e.what();
        net_.log(t.cfg.renter, "quote-refused", "campaign=" + cid + " code=" + std::string(to_string(e.code())));
        return;
    }
    t.funding_address = iface.funding_address(cid);
    parties::Renter& renter = *renters_.at(t.cfg.renter);
    Amount total = t.quote->total();
    try {
        if (t.cfg.forged_view) {
            t.forged = renter.forge_funding(t.funding_address, total, cid + "/fund", cfg_.params.confirmations);
            renter.submit(t.forged->double_spend);
            t.funding_tx = t.forged->funding;
            net_.log(t.cfg.renter, "fund", "campaign=" + cid + " amount=" + total.to_string() + " forged=1");
            apply_eclipses();
            // Mining k blocks alone takes the renter at least as long as the
            // honest network needs for k blocks, which diverge from the fork.
            Track* tp = &t;
            net_.schedule(cfg_.params.block_interval * cfg_.params.confirmations, "", [this, tp] {
                send_start(*tp, tp->forged->fork->header_suffix(cfg_.params.view_headers),
                           ledger::make_inclusion_proof(*tp->forged->fork, tp->forged->funding.tx_id),
                           tp->forged->funding);
            });
            t.state = "funding";
            return;
        }
        ledger::Transaction tx = renter.make_payment(t.funding_address, total, cid + "/fund");
        renter.submit(tx);
        t.funding_tx = tx;
        t.state = "funding";
        net_.log(t.cfg.renter, "fund",
                 "campaign=" + cid + " amount=" + total.to_string() + " tx=" + tx.tx_id.short_hex());
    } catch (const Error& e) {
        t.state = "unfunded";
        t.reason = e.what();
        net_.log(t.cfg.renter, "unfunded", "campaign=" + cid);
    }
}

void World::send_start(Track& t, const std::vector<ledger::BlockHeader>& view, const ledger::InclusionProof& proof,
                       const ledger::Transaction& funding)
{
    enclave::CampaignSpec spec;
    spec.campaign_id = t.cfg.id;
    spec.service_id = t.cfg.service;
    spec.action = t.action;
    spec.count = t.cfg.count;
    spec.revert_window = seconds(t.cfg.revert_window_s);
    spec.renter_id = t.cfg.renter;
    spec.renter_refund_address = wallet_of(t.cfg.renter);
    spec.renter_chain_view = view;
    spec.funding_tx = funding;
    spec.funding_proof = proof;
    t.state = "started";
    Message m;
    m.src = t.cfg.renter;
    m.dst = ifaces_.at(t.cfg.interface)->id();
    m.kind = MsgKind::campaign_start;
    m.channel = Channel::attested;
    m.meta.campaign = t.cfg.id;
    m.payload = enclave::msg::CampaignStart{std::move(spec)};
    net_.send(std::move(m), cfg_.params.latency.link);
    Track* tp = &t;
    net_.schedule(seconds(cfg_.start_timeout_s), "", [this, tp] {
        const auto& iface = *ifaces_.at(tp->cfg.interface);
        bool rejected = std::any_of(iface.rejected().begin(), iface.rejected().end(),
                                    [&](const enclave::RejectedStart& r) { return r.campaign_id == tp->cfg.id; });
        if (!iface.campaigns().contains(tp->cfg.id) && !rejected && tp->state == "started") {
            tp->state = "lost";
            tp->reason = "campaign start never reached the interface";
            net_.log(tp->cfg.renter, "start-lost", "campaign=" + tp->cfg.id);
        }
    });
}

bool World::shares_closed(const enclave::Campaign& c) const
{
    for (std::size_t j = 0; j < c.shares.size(); ++j) {
        std::string memo = c.spec.campaign_id + "/refund/" + std::to_string(j);
        bool closed = false;
        for (const auto& pe : payment_enclaves_)
            for (const auto& tx : pe->emitted())
                closed = closed || tx.memo == memo;
        if (!closed)
            return false;
    }
    return true;
}

bool World::resolved(const Track& t) const
{
    if (t.state == "rejected" || t.state == "unfunded" || t.state == "lost")
        return true;
    if (t.state != "started")
        return false;
    const auto& iface = *ifaces_.at(t.cfg.interface);
    for (const auto& r : iface.rejected())
        if (r.campaign_id == t.cfg.id)
            return true;
    auto it = iface.campaigns().find(t.cfg.id);
    if (it == iface.campaigns().end())
        return false;
    if (it->second.status == enclave::CampaignStatus::terminated)
        return true;
    if (net_.alive(iface.id()))
        return false;
    if (shares_closed(it->second))
        return true;
    for (const auto& other : ifaces_)
        for (const auto& h : other->handoffs())
            if (h.campaign_id == t.cfg.id && h.closed.size() >= it->second.shares.size())
                return true;
    return false;
}

void World::mine()
{
    if (stopped_)
        return;
    const ledger::Block& b = ledger_->mine_block();
    net_.log(enclave::ledger_actor, "block",
             "height=" + std::to_string(b.header.height) + " txs=" + std::to_string(b.txs.size()) +
                 " digest=" + b.header.own_digest.short_hex());
    const ledger::Chain& chain = ledger_->chain();
    for (auto& t : tracks_) {
        if (t.state != "funding" || !t.funding_tx)
            continue;
        if (ledger::confirmations(chain, t.funding_tx->tx_id) >= cfg_.params.confirmations)
            send_start(t, chain.header_suffix(cfg_.params.view_headers),
                       ledger::make_inclusion_proof(chain, t.funding_tx->tx_id), *t.funding_tx);
    }
    bool all = std::all_of(tracks_.begin(), tracks_.end(), [this](const Track& t) { return resolved(t); });
    if (all) {
        if (!draining_) {
            draining_ = true;
            drain_blocks_ = cfg_.params.confirmations;
        }
        if (ledger_->mempool().empty()) {
            if (drain_blocks_ == 0) {
                stopped_ = true;
                net_.log("world", "stop", "height=" + std::to_string(b.header.height));
                return;
            }
            --drain_blocks_;
        }
    }
    net_.schedule(cfg_.params.block_interval, "", [this] { mine(); });
}

void World::run()
{
    if (cfg_.topology.mode == gossip::Mode::p2p) {
        build_p2p();
        return;
    }
    const SimTime stop = seconds(cfg_.stop_after_s);
    while (!stopped_ && !net_.idle() && net_.next_event_time() <= stop)
        net_.step();
}

void World::build_p2p()
{
    setup_owners();
    gossip::Topology topo;
    topo.mode = gossip::Mode::p2p;
    std::vector<std::string> nodes;
    for (const auto& o : owners_) {
        nodes.push_back("node-" + o->id());
        topo.add_node(nodes.back(), EnclaveKind::combined);
    }
    for (std::size_t i = 1; i < nodes.size(); ++i)
        topo.add_edge(nodes[i - 1], nodes[i]);
    if (nodes.size() > 2)
        topo.add_edge(nodes.back(), nodes.front());
    gossip::P2PNetwork p2p(topo);
    P2PReport rep;
    std::size_t idx = 0;
    for (const auto& g : cfg_.owner_groups)
        for (std::size_t i = 0; i < g.count; ++i, ++idx) {
            const parties::Owner& o = *owners_[idx];
            std::string cpu = g.cpu.empty() ? "cpu-" + o.id() : g.cpu;
            p2p.add_node(gossip::P2PNode{nodes[idx], cpu, o.proxy_endpoint(), std::nullopt, {}});
            ++rep.registrations;
            try {
                gossip::register_owner_p2p(p2p, nodes[idx], o.id(), cpu);
                ++rep.accepted;
                for (const auto& e : o.enrollment().services)
                    p2p.delegate(nodes[idx], e);
                net_.log(nodes[idx], "register", "owner=" + o.id() + " cpu=" + cpu + " accepted=1");
            } catch (const Error& e) {
                ++rep.rejected;
                net_.log(nodes[idx], "register",
                         "owner=" + o.id() + " cpu=" + cpu + " accepted=0 code=" + std::string(to_string(e.code())));
            }
        }
    for (const auto& cc : cfg_.campaigns) {
        P2PReport::Campaign out{cc.id};
        services::ServiceAction action = cc.action;
        if (cc.hidden_target)
            if (auto* social = dynamic_cast<services::SocialService*>(service(cc.service))) {
                action.target = "hidden-" + cc.id;
                action.link = social->create_item(action.target, true);
            }
        if (!nodes.empty()) {
            try {
                auto f = gossip::p2p_broadcast_campaign(
                    p2p, nodes.front(),
                    gossip::P2PCampaign{cc.id, cc.service, action, cc.count, seconds(cc.revert_window_s)},
                    rt_->services);
                out.fulfilled = f.fulfilled.size();
                out.refunded_slots = f.refunded_slots;
                out.reached = f.reached.size();
                out.flood_messages = f.flood_messages;
            } catch (const Error& e) {
                out.refunded_slots = cc.count;
                net_.log("p2p", "campaign-failed", "campaign=" + cc.id + " code=" + std::string(to_string(e.code())));
            }
        }
        net_.log("p2p", "campaign",
                 "campaign=" + cc.id + " fulfilled=" + std::to_string(out.fulfilled) +
                     " refunded=" + std::to_string(out.refunded_slots));
        rep.campaigns.push_back(out);
    }
    p2p_ = rep;
}

Report World::report() const
{
    Report r;
    r.scenario = cfg_.name;
    r.seed = cfg_.seed;
    r.mode = gossip::to_string(cfg_.topology.mode);
    r.end_time_s = to_seconds(net_.now());
    r.enrollment_failures = enrollment_failures_;
    r.p2p = p2p_;
    const ledger::Chain& chain = ledger_->chain();
    r.chain_height = chain.tip_height();

    std::map<std::string, const ledger::Transaction*> landed;
    for (const auto& block : chain.blocks())
        for (const auto& tx : block->txs)
            if (!tx.memo.empty())
                landed[tx.memo] = &tx;
    std::map<std::string, const ledger::Transaction*> emitted;
    for (const auto& pe : payment_enclaves_)
        for (const auto& tx : pe->emitted())
            emitted.emplace(tx.memo, &tx);

    if (cfg_.topology.mode != gossip::Mode::p2p) {
        for (const auto& rc : cfg_.renters) {
            std::string a = wallet_of(rc.id);
            r.parties.push_back(PartyAccount{rc.id, "renter", a, genesis_->balance(a), chain.balance(a)});
        }
        for (const auto& o : owners_)
            r.parties.push_back(PartyAccount{o->id(), "owner", o->payout_address(), genesis_->balance(o->payout_address()),
                                             chain.balance(o->payout_address())});
        const std::string& m = cfg_.params.maintainer_address;
        r.parties.push_back(PartyAccount{"maintainer", "maintainer", m, genesis_->balance(m), chain.balance(m)});
    }

    Amount escrow_start, escrow_end;
    for (const auto& t : tracks_) {
        CampaignReport c;
        c.id = t.cfg.id;
        c.renter = t.cfg.renter;
        const enclave::InterfaceEnclave& iface = *ifaces_.at(t.cfg.interface);
        c.interface = iface.id();
        c.service = t.cfg.service;
        c.forged_view = t.cfg.forged_view;
        c.count = t.cfg.count;
        c.reason = t.reason;
        if (t.quote) {
            c.funds_upper_bound = t.quote->funds_upper_bound;
            c.deposit_required = t.quote->deposit_required;
        }
        const enclave::Campaign* camp = nullptr;
        if (auto it = iface.campaigns().find(c.id); it != iface.campaigns().end())
            camp = &it->second;
        if (t.state == "started") {
            c.outcome = camp ? (camp->status == enclave::CampaignStatus::terminated ? "terminated" : "unfinished")
                             : "unfinished";
            if (camp && c.outcome == "unfinished" && !net_.alive(iface.id()) && shares_closed(*camp)) {
                c.outcome = "terminated";
                c.reason = "interface " + iface.id() + " down; payment enclaves closed every share";
            }
            for (const auto& rj : iface.rejected())
                if (rj.campaign_id == c.id) {
                    c.outcome = "rejected";
                    c.reason = rj.reason;
                }
        } else if (t.state == "pending" || t.state == "funding") {
            c.outcome = "unfinished";
        } else {
            c.outcome = t.state;
        }
        if (t.funding_tx && chain.find_transaction(t.funding_tx->tx_id))
            for (const auto& out : t.funding_tx->outputs)
                if (out.address == t.funding_address)
                    c.funding_landed += out.value;

        std::vector<std::string> escrow_addresses;
        if (!t.funding_address.empty())
            escrow_addresses.push_back(t.funding_address);
        services::MockService* svc = service(t.cfg.service);
        if (camp) {
            c.flags = camp->flags;
            auto span = [](std::optional<SimTime> a, std::optional<SimTime> b) {
                return a && b && *b >= *a ? to_seconds(*b - *a) : 0.0;
            };
            c.phases.service_s = span(camp->dispatched_at, camp->service_done_at);
            c.phases.payment_s = span(camp->payment_started_at, camp->last_reward_at);
            c.phases.termination_s =
                span(camp->last_reward_at ? camp->last_reward_at : camp->payment_started_at, camp->terminated_at);
            for (const auto& s : camp->shares) {
                escrow_addresses.push_back(s.address);
                c.payment_enclaves.push_back(s.payment_enclave);
            }
            for (const auto& slot : camp->slots) {
                SlotReport s;
                s.slot_id = slot.slot_id;
                s.owner = slot.owner_id;
                s.price = slot.price;
                s.status = enclave::to_string(slot.status);
                for (const auto& [o, st] : slot.skipped)
                    s.skipped.emplace_back(o, enclave::to_string(st));
                s.failure = slot.failure;
                if (!enclave::is_final(slot.status) && !net_.alive(iface.id())) {
                    s.status = "orphaned";
                    s.failure = "interface " + iface.id() + " lost before the slot was reported";
                }
                s.unverifiable = slot.unverifiable;
                if (!s.owner.empty() && svc) {
                    s.ghost = svc->is_ghost(s.owner);
                    const auto& hist = svc->history(s.owner);
                    s.applied = std::find(hist.begin(), hist.end(), t.action) != hist.end();
                    try {
                        s.effect_present = svc->effect_present(s.owner, t.action);
                    } catch (const Error&) {
                    }
                }
                if (slot.budget_entry)
                    s.share_enclave = camp->shares.at(camp->schedule.share_of_entry(*slot.budget_entry)).payment_enclave;
                std::string memo = c.id + "/slot/" + std::to_string(slot.slot_id);
                const ledger::Transaction* tx = nullptr;
                if (auto it = landed.find(memo); it != landed.end()) {
                    tx = it->second;
                    s.settlement_landed = true;
                } else if (auto e = emitted.find(memo); e != emitted.end()) {
                    tx = e->second;
                }
                if (tx) {
                    s.settlement_tx = tx->tx_id.short_hex();
                    for (const auto& out : tx->outputs) {
                        if (out.kind == ledger::OutputKind::reward)
                            s.reward += out.value;
                        else if (out.kind == ledger::OutputKind::deposit_return)
                            s.deposit_share += out.value;
                        else if (out.kind == ledger::OutputKind::fee)
                            s.fee += out.value;
                    }
                }
                c.slots.push_back(std::move(s));
            }
        }
        std::string prefix = c.id + "/";
        std::string refund_to = wallet_of(t.cfg.renter);
        for (const auto& [memo, tx] : landed) {
            if (memo.rfind(prefix, 0) != 0)
                continue;
            for (const auto& out : tx->outputs) {
                switch (out.kind) {
                case ledger::OutputKind::deposit_return: c.deposit_returned += out.value; break;
                case ledger::OutputKind::burn: c.deposit_burned += out.value; break;
                case ledger::OutputKind::reward: c.rewards_paid += out.value; break;
                case ledger::OutputKind::fee: c.fees_paid += out.value; break;
                case ledger::OutputKind::refund:
                    if (out.address == refund_to)
                        c.refunded += out.value;
                    break;
                default: break;
                }
            }
        }
        for (const auto& a : escrow_addresses) {
            c.escrow_residual += chain.balance(a);
            escrow_start += genesis_->balance(a);
            escrow_end += chain.balance(a);
        }
        if (svc && !t.action.target.empty()) {
            for (const auto& account : svc->exposed_accounts(t.action.target))
                if (owner_index_.contains(account))
                    c.exposed_owners.push_back(account);
            auto& ex = r.exposure[c.service];
            for (const auto& o : c.exposed_owners)
                if (std::find(ex.begin(), ex.end(), o) == ex.end())
                    ex.push_back(o);
            std::sort(ex.begin(), ex.end());
        }
        r.campaigns.push_back(std::move(c));
    }
    if (cfg_.topology.mode != gossip::Mode::p2p) {
        r.parties.push_back(PartyAccount{"escrow", "escrow", "*", escrow_start, escrow_end});
        std::string burn(ledger::burn_address);
        r.burned = chain.balance(burn) - genesis_->balance(burn);
        for (const auto& p : r.parties)
            if (p.role == "maintainer")
                r.fees_collected = p.delta();
    }

    for (const auto& d : net_.drops()) {
        DropReport dr;
        dr.msg_id = d.msg_id;
        dr.adversary = d.adversary;
        dr.kind = simnet::to_string(d.kind);
        if (d.cut_point)
            dr.cut_point = static_cast<int>(*d.cut_point);
        dr.campaign = d.meta.campaign;
        dr.slot = d.meta.slot;
        dr.owner = d.meta.owner;
        r.drops.push_back(std::move(dr));
    }
    for (const auto& k : net_.kills())
        r.kills.push_back(KillReport{k.actor, k.adversary, to_seconds(k.time)});
    r.eclipses = eclipses_;
    for (const auto& o : owners_)
        if (o->reverts() > 0)
            r.reverts.push_back(RevertReport{o->id(), o->reverts()});
    r.event_count = net_.event_log().size();
    r.event_log_digest = sha256(net_.event_log_text()).hex();
    r.verdict = compute_verdict(r);
    return r;
}

RunOutput run_scenario(const ScenarioConfig& config)
{
    World w(config);
    w.run();
    return RunOutput{w.report(), w.net().event_log_text()};
}

std::vector<std::string> run_deanonymization_campaign(const ScenarioConfig& base, const std::string& service_id)
{
    ScenarioConfig cfg = base;
    cfg.campaigns.clear();
    cfg.adversary.clear();
    const ServiceConfig* sc = nullptr;
    for (auto& s : cfg.services)
        if (s.id == service_id) {
            s.colluding = true;
            sc = &s;
        }
    if (!sc)
        throw Error(ErrorCode::not_found, "service " + service_id);
    std::size_t owners = 0;
    Amount budget;
    for (const auto& g : cfg.owner_groups)
        if (std::count(g.services.begin(), g.services.end(), service_id) && !g.ghost) {
            owners += g.count;
            budget += (g.price + g.price_step * static_cast<std::int64_t>(g.count)) * static_cast<std::int64_t>(2 * g.count);
        }
    if (owners == 0)
        return {};
    const std::string renter = "deanon-renter";
    cfg.renters.push_back(RenterConfig{renter, budget + Amount::from_units(Amount::units_per_coin)});
    CampaignConfig cc;
    cc.id = "deanon-" + service_id;
    cc.renter = renter;
    cc.service = service_id;
    cc.count = owners;
    if (sc->kind == ServiceConfig::Kind::social) {
        cc.action.kind = services::ActionKind::upvote;
        cc.hidden_target = true;
    } else {
        cc.action.kind = services::ActionKind::vote;
        cc.action.target = sc->candidates.empty() ? "" : sc->candidates.front();
    }
    cfg.campaigns.push_back(cc);
    RunOutput out = run_scenario(cfg);
    const CampaignReport* c = out.report.campaign(cc.id);
    return c ? c->exposed_owners : std::vector<std::string>{};
}

std::string event_log_file(const ScenarioConfig& config, const std::string& event_log)
{
    return "# teevil-eventlog v1\n# config " + to_json(config).dump() + "\n" + event_log;
}

} // namespace teevil::harness
