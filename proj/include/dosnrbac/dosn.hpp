#pragma once

#include <dosnrbac/auth.hpp>
#include <dosnrbac/chain.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace dosnrbac {

using NodeId = std::uint32_t;

enum class NodeKind { Owner, Trusted, Subject };

std::string_view to_string(NodeKind kind);

class DosnError : public std::runtime_error {
public:
    enum class Kind { ConfigError, NoVerifierAvailable, InvalidRequest };

    DosnError(Kind kind, const std::string& what) : std::runtime_error{what}, m_kind{kind} {}
    Kind kind() const { return m_kind; }

private:
    Kind m_kind;
};

struct Node {
    NodeId id{0};
    std::string name;
    KeyPair keys;
    NodeKind kind{NodeKind::Subject};
    bool online{true};

    const Address& address() const { return keys.address(); }
};

struct NetworkConfig {
    std::size_t owners{1};
    std::size_t trusted{0};
    std::size_t subjects{0};
    //! Per-step probability that the owner toggles online/offline.
    double owner_churn{0.0};
    //! Per-step toggle probability for every trusted and subject node.
    double node_churn{0.0};
    std::uint64_t rng_seed{1};
    //! Optional display names; missing entries default to owner, trusted<i>, subject<i>.
    std::string owner_name;
    std::vector<std::string> trusted_names;
    std::vector<std::string> subject_names;
};

struct AccessRequest {
    NodeId subject{0};
    Role role;
    std::string resource_id;
    double issued_at{0};
};

struct AccessDecision {
    AccessRequest request;
    Verdict verdict;
    //! Empty only when no verifier was reachable.
    std::optional<NodeId> decided_by;
    Transcript transcript;
};

struct ChurnEvent {
    NodeId node{0};
    bool online{false};
};

/**
 * Topology: one resource owner, the trusted nodes it designated,
 * and subjects. Node 0 is always the owner. Owner and trusted nodes each keep
 * their own verifier state and know every subject's public key, shared when
 * the relationship was established.
 */
class Network {
public:
    static Network create(const NetworkConfig& config);

    const std::vector<Node>& nodes() const { return m_nodes; }
    const Node& node(NodeId id) const { return m_nodes.at(id); }
    const Node& owner() const { return m_nodes.front(); }
    std::vector<NodeId> trusted() const;
    std::vector<NodeId> subjects() const;
    std::optional<NodeId> find(std::string_view name) const;

    void set_online(NodeId id, bool online) { m_nodes.at(id).online = online; }
    bool is_verifier(NodeId id) const;
    Verifier& verifier(NodeId id);

    const NetworkConfig& config() const { return m_config; }

private:
    explicit Network(const NetworkConfig& config) : m_config{config} {}

    NetworkConfig m_config;
    std::vector<Node> m_nodes;
    std::map<NodeId, Verifier> m_verifiers;
};

//! Owner if online, otherwise a uniformly random online trusted node.
NodeId route_request(const Network& network, const AccessRequest& request, std::mt19937_64& rng);

//! Runs the handshake at a specific verifier, regardless of routing.
AccessDecision decide_at(Network& network, NodeId verifier, const Ledger& ledger, const ContractId& contract,
                         const AccessRequest& request);

//! Routes, then decides. Throws DosnError(NoVerifierAvailable) when nobody can decide.
AccessDecision handle_request(Network& network, const Ledger& ledger, const ContractId& contract,
                              const AccessRequest& request, std::mt19937_64& rng);

std::vector<ChurnEvent> step_churn(Network& network, std::mt19937_64& rng);

} // namespace dosnrbac
