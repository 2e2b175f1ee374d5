#pragma once

#include <dosnrbac/bytes.hpp>
#include <dosnrbac/crypto.hpp>

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dosnrbac {

using BlockHeight = std::uint64_t;

/** Short case-sensitive role name such as "friend" or "family". */
class Role {
public:
    static constexpr std::size_t max_size = 32;

    //! Throws std::invalid_argument for an empty or over-long name.
    explicit Role(std::string name);

    const std::string& str() const { return m_name; }
    auto operator<=>(const Role&) const = default;

private:
    std::string m_name;
};

enum class Access : std::uint8_t {
    Read = 1,
    Write = 2,
    Delegate = 4,
};

/**
 * Subset of {READ, WRITE, DELEGATE}. The empty set is an explicit deny, and
 * DELEGATE on its own confers no read access.
 */
class Permission {
public:
    static constexpr std::uint8_t all_bits = 0b111;

    constexpr Permission() = default;
    constexpr Permission(std::initializer_list<Access> flags)
    {
        for (const Access a : flags) m_bits |= static_cast<std::uint8_t>(a);
    }

    //! Throws std::invalid_argument if bits outside the three flags are set.
    static Permission from_bits(std::uint8_t bits);
    //! Parses "READ|DELEGATE" style text (case-insensitive); "" and "NONE" give the empty set.
    static Permission parse(std::string_view text);

    constexpr std::uint8_t bits() const { return m_bits; }
    constexpr bool has(Access a) const { return (m_bits & static_cast<std::uint8_t>(a)) != 0; }
    constexpr bool empty() const { return m_bits == 0; }
    std::string str() const;
    std::vector<std::string> names() const;

    auto operator<=>(const Permission&) const = default;

private:
    std::uint8_t m_bits{0};
};

struct PolicyKey {
    Address subject;
    Role role;

    std::string str() const { return subject.hex() + ":" + role.str(); }
    auto operator<=>(const PolicyKey&) const = default;
};

struct PolicyEntry {
    Address subject;
    Role role;
    Permission permission;
    Address grantor;
    //! Everyone who endorsed this grant, starting at the owner and ending at grantor.
    std::vector<Address> delegation_chain;
    BlockHeight created_at{0};
    BlockHeight updated_at{0};
    bool active{true};

    bool operator==(const PolicyEntry&) const = default;
};

struct ContractOptions {
    //! When set, roleTransfer deactivates the transferor's own entry.
    bool transfer_moves_rights{false};

    bool operator==(const ContractOptions&) const = default;
};

struct ContractState {
    Address owner;
    std::map<PolicyKey, PolicyEntry> policies;
    bool destroyed{false};
    ContractOptions options;

    bool operator==(const ContractState&) const = default;
};

enum class RevertReason {
    NotOwner,
    PolicyExists,
    PolicyNotFound,
    EmptyInput,
    NotEndorsed,
    ContractDestroyed,
    NoContract,
};

std::string_view to_string(RevertReason reason);

// Contract ABI. Each call is one transaction payload.

struct DeployCall {
    bool operator==(const DeployCall&) const = default;
};
struct PolicyAddCall {
    std::vector<Address> subjects;
    Role role;
    Permission permission;
    bool operator==(const PolicyAddCall&) const = default;
};
struct PolicyUpdateCall {
    std::vector<Address> subjects;
    Role role;
    Permission permission;
    bool operator==(const PolicyUpdateCall&) const = default;
};
struct PolicyDeleteCall {
    Address subject;
    Role role;
    bool operator==(const PolicyDeleteCall&) const = default;
};
struct RoleTransferCall {
    PolicyKey source;
    Address new_subject;
    bool operator==(const RoleTransferCall&) const = default;
};
struct AccessControlCall {
    Address subject;
    Role role;
    bool operator==(const AccessControlCall&) const = default;
};
struct DeleteRbacCall {
    bool operator==(const DeleteRbacCall&) const = default;
};

using CallArgs = std::variant<DeployCall, PolicyAddCall, PolicyUpdateCall, PolicyDeleteCall,
                              RoleTransferCall, AccessControlCall, DeleteRbacCall>;

struct FunctionCall {
    CallArgs args;
    //! Extra input bits attached by the experiment harness; only affects metering.
    std::uint64_t payload_bits{0};

    //! Contract-level function name, e.g. "policyAdd".
    std::string_view name() const;
    //! Number of subject addresses carried by the call.
    std::size_t subject_count() const;
    bool is_deploy() const { return std::holds_alternative<DeployCall>(args); }

    bool operator==(const FunctionCall&) const = default;
};

namespace fn {
inline constexpr std::string_view deploy = "deploy";
inline constexpr std::string_view policy_add = "policyAdd";
inline constexpr std::string_view policy_update = "policyUpdate";
inline constexpr std::string_view policy_delete = "policyDelete";
inline constexpr std::string_view role_transfer = "roleTransfer";
inline constexpr std::string_view access_control = "accessControl";
inline constexpr std::string_view delete_rbac = "deleteRBAC";
} // namespace fn

void encode_call(Encoder& enc, const FunctionCall& call);
//! Throws DecodeError on unknown tags, std::invalid_argument on invalid roles or permissions.
FunctionCall decode_call(Decoder& dec);

ContractState deploy(const Address& owner, ContractOptions options = {});

// State transitions. Each returns the revert reason, leaving the state
// untouched on revert, or std::nullopt on success.

std::optional<RevertReason> policy_add(ContractState& state, const Address& caller,
                                       const std::vector<Address>& subjects, const Role& role,
                                       Permission permission, BlockHeight height);
std::optional<RevertReason> policy_update(ContractState& state, const Address& caller,
                                          const Address& subject, const Role& role,
                                          Permission permission, BlockHeight height);
std::optional<RevertReason> policy_delete(ContractState& state, const Address& caller,
                                          const Address& subject, const Role& role, BlockHeight height);
std::optional<RevertReason> role_transfer(ContractState& state, const Address& caller,
                                          const PolicyKey& source, const Address& new_subject,
                                          BlockHeight height);
std::optional<RevertReason> delete_rbac(ContractState& state, const Address& caller);

/**
 * Local read path used by trusted nodes. Returns the active, non-empty
 * permission for (subject, role), or std::nullopt for a deny. A destroyed
 * contract denies everything.
 */
std::optional<Permission> access_control(const ContractState& state, const Address& subject, const Role& role);

struct CallResult {
    ContractState state;
    std::optional<RevertReason> revert;
    Bytes return_value;

    bool success() const { return !revert.has_value(); }
};

/**
 * Executes one contract call as a transaction from caller at the given block
 * height. Pure: the input state is never modified, and a reverted call
 * returns it unchanged. An accessControl call returns one byte holding the
 * permission bits, zero meaning deny.
 */
CallResult apply(const ContractState& state, const Address& caller, const FunctionCall& call, BlockHeight height);

//! Canonical bytes of the whole state, for bit-identity comparisons.
Bytes encode_state(const ContractState& state);

//! Audit dump: JSON object keyed "address:role".
std::string dump_policies_json(const ContractState& state);

} // namespace dosnrbac
