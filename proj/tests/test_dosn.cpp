#include <dosnrbac/dosn.hpp>

#include <gtest/gtest.h>

#include <map>

using namespace dosnrbac;

namespace {

DosnError::Kind error_kind(const std::function<void()>& f)
{
    try {
        f();
    } catch (const DosnError& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no DosnError";
    return DosnError::Kind::InvalidRequest;
}

struct Fixture {
    Network net;
    Ledger ledger;
    ContractId contract;
    Role role{"friend"};

    explicit Fixture(NetworkConfig cfg)
        : net{Network::create(cfg)}, ledger{Ledger::init_genesis(MiningConfig{})}
    {
        const KeyPair& owner = net.owner().keys;
        send_call(ledger, owner, std::nullopt, {DeployCall{}});
        ledger.mine_next_block();
        contract = contract_address(owner.address(), 0);
    }

    void grant(NodeId subject)
    {
        send_call(ledger, net.owner().keys, contract, {PolicyAddCall{{net.node(subject).address()}, role, {Access::Read}}});
        ledger.mine_next_block();
    }
};

NetworkConfig three_three()
{
    NetworkConfig cfg;
    cfg.trusted = 3;
    cfg.subjects = 5;
    cfg.rng_seed = 11;
    return cfg;
}

} // namespace

TEST(Network, CreateBuildsTopology)
{
    const Network net = Network::create(three_three());
    ASSERT_EQ(net.nodes().size(), 9u);
    EXPECT_EQ(net.owner().kind, NodeKind::Owner);
    EXPECT_EQ(net.owner().id, 0u);
    EXPECT_EQ(net.trusted().size(), 3u);
    EXPECT_EQ(net.subjects().size(), 5u);
    for (const auto& n : net.nodes()) EXPECT_TRUE(n.online);
    EXPECT_TRUE(net.is_verifier(0));
    EXPECT_FALSE(net.is_verifier(net.subjects().front()));
    EXPECT_EQ(net.find("trusted1"), std::optional<NodeId>{2});
}

TEST(Network, SameSeedSameKeys)
{
    const Network a = Network::create(three_three());
    const Network b = Network::create(three_three());
    for (std::size_t i = 0; i < a.nodes().size(); ++i) EXPECT_EQ(a.nodes()[i].address(), b.nodes()[i].address());
}

TEST(Network, ConfigErrors)
{
    NetworkConfig cfg = three_three();
    cfg.owners = 0;
    EXPECT_EQ(error_kind([&] { Network::create(cfg); }), DosnError::Kind::ConfigError);
    cfg.owners = 2;
    EXPECT_EQ(error_kind([&] { Network::create(cfg); }), DosnError::Kind::ConfigError);
    cfg = three_three();
    cfg.node_churn = 1.5;
    EXPECT_EQ(error_kind([&] { Network::create(cfg); }), DosnError::Kind::ConfigError);
    cfg = three_three();
    cfg.subject_names = {"x", "x"};
    EXPECT_EQ(error_kind([&] { Network::create(cfg); }), DosnError::Kind::ConfigError);
}

TEST(Routing, OwnerFirstThenTrusted)
{
    Network net = Network::create(three_three());
    std::mt19937_64 rng{1};
    const AccessRequest req{net.subjects().front(), Role{"friend"}, "photo", 0};
    EXPECT_EQ(route_request(net, req, rng), 0u);

    net.set_online(0, false);
    net.set_online(1, false);
    net.set_online(2, false);
    EXPECT_EQ(route_request(net, req, rng), 3u);

    net.set_online(3, false);
    EXPECT_EQ(error_kind([&] { route_request(net, req, rng); }), DosnError::Kind::NoVerifierAvailable);

    const AccessRequest from_trusted{1, Role{"friend"}, "photo", 0};
    EXPECT_EQ(error_kind([&] { route_request(net, from_trusted, rng); }), DosnError::Kind::InvalidRequest);
}

TEST(Routing, UniformOverOnlineTrustedNodes)
{
    Network net = Network::create(three_three());
    net.set_online(0, false);
    std::mt19937_64 rng{5};
    const AccessRequest req{net.subjects().front(), Role{"friend"}, "photo", 0};
    std::map<NodeId, int> counts;
    constexpr int draws = 100'000;
    for (int i = 0; i < draws; ++i) ++counts[route_request(net, req, rng)];
    ASSERT_EQ(counts.size(), 3u);
    for (const auto& [id, c] : counts) EXPECT_NEAR(static_cast<double>(c) / draws, 1.0 / 3.0, 0.02) << id;
}

TEST(Churn, ZeroAndOneProbabilities)
{
    NetworkConfig cfg = three_three();
    Network still = Network::create(cfg);
    std::mt19937_64 rng{3};
    for (int i = 0; i < 100; ++i) EXPECT_TRUE(step_churn(still, rng).empty());

    cfg.owner_churn = 1.0;
    cfg.node_churn = 1.0;
    Network flip = Network::create(cfg);
    for (int step = 1; step <= 4; ++step) {
        const auto events = step_churn(flip, rng);
        ASSERT_EQ(events.size(), flip.nodes().size());
        for (const auto& e : events) {
            EXPECT_EQ(e.online, step % 2 == 0);
            EXPECT_EQ(flip.node(e.node).online, e.online);
        }
    }
}

TEST(Churn, ToggleRateMatchesProbability)
{
    NetworkConfig cfg = three_three();
    cfg.owner_churn = 0.3;
    cfg.node_churn = 0.3;
    Network net = Network::create(cfg);
    std::mt19937_64 rng{17};
    std::size_t toggles = 0;
    std::size_t node_steps = 0;
    while (node_steps < 10'000) {
        toggles += step_churn(net, rng).size();
        node_steps += net.nodes().size();
    }
    EXPECT_NEAR(static_cast<double>(toggles) / static_cast<double>(node_steps), 0.3, 0.02);
}

TEST(Decisions, GrantedSubjectIsGrantedEverywhere)
{
    Fixture f{three_three()};
    const NodeId alice = f.net.subjects()[0];
    const NodeId eve = f.net.subjects()[1];
    f.grant(alice);

    std::mt19937_64 rng{9};
    const AccessDecision d = handle_request(f.net, f.ledger, f.contract, {alice, f.role, "photo", 1}, rng);
    EXPECT_TRUE(is_grant(d.verdict));
    EXPECT_EQ(d.decided_by, std::optional<NodeId>{0});

    for (NodeId v : {0u, 1u, 2u, 3u}) {
        EXPECT_TRUE(is_grant(decide_at(f.net, v, f.ledger, f.contract, {alice, f.role, "photo", 1}).verdict)) << v;
        EXPECT_EQ(decide_at(f.net, v, f.ledger, f.contract, {eve, f.role, "photo", 1}).verdict,
                  Verdict{Deny{DenyReason::NoPolicy}});
    }
}

TEST(Decisions, OwnerOfflineTrustedNodeDecides)
{
    Fixture f{three_three()};
    const NodeId alice = f.net.subjects()[0];
    f.grant(alice);
    f.net.set_online(0, false);
    std::mt19937_64 rng{10};
    const AccessDecision d = handle_request(f.net, f.ledger, f.contract, {alice, f.role, "photo", 1}, rng);
    ASSERT_TRUE(d.decided_by.has_value());
    EXPECT_NE(*d.decided_by, 0u);
    EXPECT_TRUE(is_grant(d.verdict));
}

TEST(Decisions, RevocationIsSeenByEveryVerifier)
{
    Fixture f{three_three()};
    const NodeId alice = f.net.subjects()[0];
    f.grant(alice);
    send_call(f.ledger, f.net.owner().keys, f.contract, {PolicyDeleteCall{f.net.node(alice).address(), f.role}});
    f.ledger.mine_next_block();
    for (NodeId v : {0u, 1u, 2u, 3u}) {
        EXPECT_EQ(decide_at(f.net, v, f.ledger, f.contract, {alice, f.role, "photo", 2}).verdict,
                  Verdict{Deny{DenyReason::NoPolicy}});
    }
}

TEST(Decisions, SubjectCannotVerify)
{
    Fixture f{three_three()};
    const NodeId alice = f.net.subjects()[0];
    EXPECT_EQ(error_kind([&] { decide_at(f.net, alice, f.ledger, f.contract, {alice, f.role, "photo", 0}); }),
              DosnError::Kind::InvalidRequest);
}
