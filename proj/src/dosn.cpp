#include <dosnrbac/dosn.hpp>

#include <set>

namespace dosnrbac {

std::string_view to_string(NodeKind kind)
{
    switch (kind) {
    case NodeKind::Owner: return "owner";
    case NodeKind::Trusted: return "trusted";
    case NodeKind::Subject: return "subject";
    }
    return "unknown";
}

Network Network::create(const NetworkConfig& config)
{
    if (config.owners != 1) {
        throw DosnError(DosnError::Kind::ConfigError,
                        "a network needs exactly one resource owner, got " + std::to_string(config.owners));
    }
    const auto valid_probability = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!valid_probability(config.owner_churn) || !valid_probability(config.node_churn)) {
        throw DosnError(DosnError::Kind::ConfigError, "churn probabilities must lie in [0, 1]");
    }

    Network net{config};
    const auto add = [&](NodeKind kind, std::string name) {
        const auto id = static_cast<NodeId>(net.m_nodes.size());
        net.m_nodes.push_back(Node{id, std::move(name), generate_keypair(derive_seed(config.rng_seed, "account", id)),
                                   kind, true});
    };
    add(NodeKind::Owner, config.owner_name.empty() ? "owner" : config.owner_name);
    for (std::size_t i = 0; i < config.trusted; ++i) {
        add(NodeKind::Trusted, i < config.trusted_names.size() ? config.trusted_names[i] : "trusted" + std::to_string(i));
    }
    for (std::size_t i = 0; i < config.subjects; ++i) {
        add(NodeKind::Subject, i < config.subject_names.size() ? config.subject_names[i] : "subject" + std::to_string(i));
    }

    std::set<std::string> names;
    for (const auto& n : net.m_nodes) {
        if (!names.insert(n.name).second) throw DosnError(DosnError::Kind::ConfigError, "duplicate node name " + n.name);
    }

    for (const auto& n : net.m_nodes) {
        if (n.kind == NodeKind::Subject) continue;
        Verifier v{derive_seed(config.rng_seed, "challenges", n.id)};
        for (const auto& s : net.m_nodes) {
            if (s.kind == NodeKind::Subject) v.bind_public_key(s.keys.public_key());
        }
        net.m_verifiers.emplace(n.id, std::move(v));
    }
    return net;
}

std::vector<NodeId> Network::trusted() const
{
    std::vector<NodeId> out;
    for (const auto& n : m_nodes) {
        if (n.kind == NodeKind::Trusted) out.push_back(n.id);
    }
    return out;
}

std::vector<NodeId> Network::subjects() const
{
    std::vector<NodeId> out;
    for (const auto& n : m_nodes) {
        if (n.kind == NodeKind::Subject) out.push_back(n.id);
    }
    return out;
}

std::optional<NodeId> Network::find(std::string_view name) const
{
    for (const auto& n : m_nodes) {
        if (n.name == name) return n.id;
    }
    return std::nullopt;
}

bool Network::is_verifier(NodeId id) const
{
    return m_verifiers.contains(id);
}

Verifier& Network::verifier(NodeId id)
{
    const auto it = m_verifiers.find(id);
    if (it == m_verifiers.end()) {
        throw DosnError(DosnError::Kind::InvalidRequest, "node " + std::to_string(id) + " is not a verifier");
    }
    return it->second;
}

namespace {

void check_request(const Network& network, const AccessRequest& request)
{
    if (request.subject >= network.nodes().size() || network.node(request.subject).kind != NodeKind::Subject) {
        throw DosnError(DosnError::Kind::InvalidRequest, "access requests must come from a subject node");
    }
}

} // namespace

NodeId route_request(const Network& network, const AccessRequest& request, std::mt19937_64& rng)
{
    check_request(network, request);
    if (network.owner().online) return network.owner().id;

    std::vector<NodeId> candidates;
    for (const NodeId id : network.trusted()) {
        if (network.node(id).online) candidates.push_back(id);
    }
    if (candidates.empty()) {
        throw DosnError(DosnError::Kind::NoVerifierAvailable, "owner offline and no trusted node online");
    }
    return candidates[std::uniform_int_distribution<std::size_t>{0, candidates.size() - 1}(rng)];
}

AccessDecision decide_at(Network& network, NodeId verifier, const Ledger& ledger, const ContractId& contract,
                         const AccessRequest& request)
{
    check_request(network, request);
    const Node& subject = network.node(request.subject);
    HandshakeResult hs = run_handshake(ledger, contract, network.verifier(verifier), subject.keys, request.role,
                                       network.owner().address(), request.issued_at);
    return AccessDecision{request, std::move(hs.verdict), verifier, std::move(hs.transcript)};
}

AccessDecision handle_request(Network& network, const Ledger& ledger, const ContractId& contract,
                              const AccessRequest& request, std::mt19937_64& rng)
{
    const NodeId verifier = route_request(network, request, rng);
    return decide_at(network, verifier, ledger, contract, request);
}

std::vector<ChurnEvent> step_churn(Network& network, std::mt19937_64& rng)
{
    std::vector<ChurnEvent> events;
    const auto& cfg = network.config();
    for (const auto& n : network.nodes()) {
        const double p = n.kind == NodeKind::Owner ? cfg.owner_churn : cfg.node_churn;
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (u < p) {
            const bool now_online = !n.online;
            network.set_online(n.id, now_online);
            events.push_back({n.id, now_online});
        }
    }
    return events;
}

} // namespace dosnrbac
