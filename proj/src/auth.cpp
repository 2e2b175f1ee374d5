#include <dosnrbac/auth.hpp>

#include <json.hpp>

#include <sstream>

namespace dosnrbac {

std::string_view to_string(DenyReason reason)
{
    switch (reason) {
    case DenyReason::NoPolicy: return "NoPolicy";
    case DenyReason::UnknownKey: return "UnknownKey";
    case DenyReason::BadSignature: return "BadSignature";
    case DenyReason::StaleChallenge: return "StaleChallenge";
    case DenyReason::Replay: return "Replay";
    case DenyReason::NoVerifierAvailable: return "NoVerifierAvailable";
    }
    return "Unknown";
}

std::string verdict_str(const Verdict& v)
{
    if (const auto* g = std::get_if<Grant>(&v)) return "Grant(" + g->permission.str() + ")";
    return "Deny(" + std::string{to_string(std::get<Deny>(v).reason)} + ")";
}

std::string Transcript::to_jsonl() const
{
    std::ostringstream out;
    for (const auto& s : steps) {
        nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
        for (const auto& [k, v] : s.inputs) inputs[k] = v;
        out << nlohmann::ordered_json{{"step", s.step}, {"inputs", inputs}, {"outcome", s.outcome}}.dump() << '\n';
    }
    return out.str();
}

Declaration declare(const KeyPair& subject, const Role& role, const Address& owner)
{
    return Declaration{subject.address(), role, owner};
}

namespace {

std::optional<Permission> on_chain_permission(const Ledger& ledger, const ContractId& contract,
                                              const Declaration& declaration)
{
    const ContractState* state = ledger.contract(contract);
    if (!state || state->owner != declaration.target_owner) return std::nullopt;
    return access_control(*state, declaration.subject_address, declaration.asserted_role);
}

} // namespace

bool verify_on_chain(const Ledger& ledger, const ContractId& contract, const Declaration& declaration)
{
    return on_chain_permission(ledger, contract, declaration).has_value();
}

Hash256 challenge_message(const Address& subject, const ChallengeData& d)
{
    Encoder enc;
    enc.put_string("dosnrbac.challenge").put(subject.bytes).put(d);
    return sha3_256(enc.bytes());
}

Response respond(const KeyPair& subject, const Challenge& challenge)
{
    if (subject.address() != challenge.issued_to) {
        throw std::invalid_argument("challenge was issued to a different address");
    }
    return Response{sign_message(subject.private_key(), challenge_message(challenge.issued_to, challenge.d))};
}

Verifier::Verifier(std::uint64_t seed, double ttl) : m_rng{seed}, m_ttl{ttl}
{
    if (!(ttl > 0)) throw std::invalid_argument("challenge ttl must be positive");
}

void Verifier::bind_public_key(const PublicKey& key)
{
    m_keys.insert_or_assign(derive_address(key), key);
}

Challenge Verifier::issue_challenge(const Address& subject, double now)
{
    Challenge c{{}, subject, now, m_ttl};
    do {
        for (std::size_t i = 0; i < c.d.size(); i += 8) {
            const std::uint64_t word = m_rng();
            for (std::size_t j = 0; j < 8; ++j) c.d[i + j] = static_cast<std::uint8_t>(word >> (8 * j));
        }
    } while (m_outstanding.contains(c.d) || m_consumed.contains(c.d));
    m_outstanding.emplace(c.d, c);
    return c;
}

std::optional<DenyReason> Verifier::confirm_response(const Address& subject, const ChallengeData& d,
                                                     const Signature& s, double now)
{
    if (m_consumed.contains(d)) return DenyReason::Replay;
    const auto it = m_outstanding.find(d);
    if (it == m_outstanding.end() || it->second.issued_to != subject) return DenyReason::StaleChallenge;

    const Challenge challenge = it->second;
    m_outstanding.erase(it);
    m_consumed.insert(d);

    if (now > challenge.issued_at + challenge.ttl) return DenyReason::StaleChallenge;
    const auto key = m_keys.find(subject);
    if (key == m_keys.end() || derive_address(key->second) != subject) return DenyReason::UnknownKey;
    if (!verify_signature(key->second, challenge_message(subject, d), s)) return DenyReason::BadSignature;
    return std::nullopt;
}

HandshakeResult run_handshake(const Ledger& ledger, const ContractId& contract, Verifier& verifier,
                              const Address& claimed, const KeyPair& signer, const Role& role,
                              const Address& owner, double now)
{
    HandshakeResult out{Deny{DenyReason::NoPolicy}, {}};
    auto& steps = out.transcript.steps;

    const Declaration decl{claimed, role, owner};
    steps.push_back({"declaration",
                     {{"subject_address", claimed.hex()}, {"asserted_role", role.str()}, {"target_owner", owner.hex()}},
                     "ok"});

    const auto permission = on_chain_permission(ledger, contract, decl);
    steps.push_back({"information_verification",
                     {{"contract", contract.hex()}, {"block_height", std::to_string(ledger.height())}},
                     permission ? "policy:" + permission->str() : "no_policy"});
    if (!permission) return out;

    if (!verifier.knows(claimed)) {
        out.verdict = Deny{DenyReason::UnknownKey};
        steps.push_back({"challenge", {{"subject_address", claimed.hex()}}, "unknown_key"});
        return out;
    }

    const Challenge challenge = verifier.issue_challenge(claimed, now);
    steps.push_back({"challenge", {{"d", to_hex(challenge.d)}, {"issued_to", claimed.hex()}}, "issued"});

    const Response response = signer.address() == claimed
                                  ? respond(signer, challenge)
                                  : Response{sign_message(signer.private_key(), challenge_message(claimed, challenge.d))};
    steps.push_back({"response", {{"signature", response.signature.hex()}}, "signed"});

    const auto rejected = verifier.confirm_response(claimed, challenge.d, response.signature, now);
    if (rejected) {
        out.verdict = Deny{*rejected};
    } else {
        out.verdict = Grant{*permission};
    }
    steps.push_back({"response_confirmation",
                     {{"subject_address", claimed.hex()}, {"d", to_hex(challenge.d)}, {"signature", response.signature.hex()}},
                     verdict_str(out.verdict)});
    return out;
}

HandshakeResult run_handshake(const Ledger& ledger, const ContractId& contract, Verifier& verifier,
                              const KeyPair& subject, const Role& role, const Address& owner, double now)
{
    return run_handshake(ledger, contract, verifier, subject.address(), subject, role, owner, now);
}

} // namespace dosnrbac
