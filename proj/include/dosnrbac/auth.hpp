#pragma once

#include <dosnrbac/chain.hpp>
#include <dosnrbac/crypto.hpp>
#include <dosnrbac/rbac.hpp>

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace dosnrbac {

using ChallengeData = std::array<std::uint8_t, 32>;

struct Declaration {
    Address subject_address;
    Role asserted_role;
    Address target_owner;

    bool operator==(const Declaration&) const = default;
};

struct Challenge {
    ChallengeData d{};
    Address issued_to;
    double issued_at{0};
    double ttl{0};
};

struct Response {
    Signature signature;
};

enum class DenyReason {
    NoPolicy,
    UnknownKey,
    BadSignature,
    StaleChallenge,
    Replay,
    NoVerifierAvailable,
};

std::string_view to_string(DenyReason reason);

struct Grant {
    Permission permission;
    bool operator==(const Grant&) const = default;
};
struct Deny {
    DenyReason reason;
    bool operator==(const Deny&) const = default;
};
using Verdict = std::variant<Grant, Deny>;

inline bool is_grant(const Verdict& v) { return std::holds_alternative<Grant>(v); }
std::string verdict_str(const Verdict& v);

struct TranscriptStep {
    std::string step;
    std::vector<std::pair<std::string, std::string>> inputs;
    std::string outcome;
};

struct Transcript {
    std::vector<TranscriptStep> steps;

    std::string to_jsonl() const;
};

Declaration declare(const KeyPair& subject, const Role& role, const Address& owner);

//! Free read of the on-chain policy; false when the contract is missing or destroyed.
bool verify_on_chain(const Ledger& ledger, const ContractId& contract, const Declaration& declaration);

//! Signed message: SHA3-256 over the length-prefixed (address, d) pair.
Hash256 challenge_message(const Address& subject, const ChallengeData& d);

Response respond(const KeyPair& subject, const Challenge& challenge);

/**
 * Verifier-side protocol state held by the resource owner or a trusted node:
 * the address-to-public-key bindings learned when relationships were set up,
 * and the outstanding and consumed challenges. Calls for one verifier must be
 * serialized by the caller.
 */
class Verifier {
public:
    static constexpr double default_ttl = 300.0;

    Verifier(std::uint64_t seed, double ttl = default_ttl);

    void bind_public_key(const PublicKey& key);
    bool knows(const Address& subject) const { return m_keys.contains(subject); }

    Challenge issue_challenge(const Address& subject, double now);

    /**
     * Accepts iff d is outstanding for subject, unexpired, and S verifies
     * under the key bound to subject. Any attempt on an outstanding challenge
     * consumes it.
     */
    std::optional<DenyReason> confirm_response(const Address& subject, const ChallengeData& d,
                                               const Signature& s, double now);

    std::size_t outstanding() const { return m_outstanding.size(); }

private:
    std::mt19937_64 m_rng;
    double m_ttl;
    std::map<Address, PublicKey> m_keys;
    std::map<ChallengeData, Challenge> m_outstanding;
    std::set<ChallengeData> m_consumed;
};

struct HandshakeResult {
    Verdict verdict;
    Transcript transcript;
};

/**
 * Full protocol run: declare, check the chain, challenge, respond, confirm.
 * claimed is the address the requester asserts; signer is the key it
 * actually holds. For an honest subject they match.
 */
HandshakeResult run_handshake(const Ledger& ledger, const ContractId& contract, Verifier& verifier,
                              const Address& claimed, const KeyPair& signer, const Role& role,
                              const Address& owner, double now);

HandshakeResult run_handshake(const Ledger& ledger, const ContractId& contract, Verifier& verifier,
                              const KeyPair& subject, const Role& role, const Address& owner, double now);

} // namespace dosnrbac
