#include <dosnrbac/rbac.hpp>

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

namespace dosnrbac {

Role::Role(std::string name) : m_name{std::move(name)}
{
    if (m_name.empty()) throw std::invalid_argument("role name must not be empty");
    if (m_name.size() > max_size) throw std::invalid_argument("role name longer than 32 bytes: " + m_name);
}

Permission Permission::from_bits(std::uint8_t bits)
{
    if ((bits & ~all_bits) != 0) throw std::invalid_argument("unknown permission bits");
    Permission p;
    p.m_bits = bits;
    return p;
}

Permission Permission::parse(std::string_view text)
{
    Permission p;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = text.find_first_of("|,", start);
        std::string token{text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start)};
        token.erase(std::remove_if(token.begin(), token.end(), [](unsigned char c) { return std::isspace(c); }),
                    token.end());
        std::transform(token.begin(), token.end(), token.begin(), [](unsigned char c) { return std::toupper(c); });
        if (token == "READ") {
            p.m_bits |= static_cast<std::uint8_t>(Access::Read);
        } else if (token == "WRITE") {
            p.m_bits |= static_cast<std::uint8_t>(Access::Write);
        } else if (token == "DELEGATE") {
            p.m_bits |= static_cast<std::uint8_t>(Access::Delegate);
        } else if (!token.empty() && token != "NONE") {
            throw std::invalid_argument("unknown permission flag: " + token);
        }
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return p;
}

std::vector<std::string> Permission::names() const
{
    std::vector<std::string> out;
    if (has(Access::Read)) out.emplace_back("READ");
    if (has(Access::Write)) out.emplace_back("WRITE");
    if (has(Access::Delegate)) out.emplace_back("DELEGATE");
    return out;
}

std::string Permission::str() const
{
    const auto parts = names();
    if (parts.empty()) return "NONE";
    std::string out;
    for (const auto& part : parts) {
        if (!out.empty()) out += '|';
        out += part;
    }
    return out;
}

std::string_view to_string(RevertReason reason)
{
    switch (reason) {
    case RevertReason::NotOwner: return "NotOwner";
    case RevertReason::PolicyExists: return "PolicyExists";
    case RevertReason::PolicyNotFound: return "PolicyNotFound";
    case RevertReason::EmptyInput: return "EmptyInput";
    case RevertReason::NotEndorsed: return "NotEndorsed";
    case RevertReason::ContractDestroyed: return "ContractDestroyed";
    case RevertReason::NoContract: return "NoContract";
    }
    return "Unknown";
}

std::string_view FunctionCall::name() const
{
    return std::visit(
        [](const auto& a) -> std::string_view {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, DeployCall>) return fn::deploy;
            else if constexpr (std::is_same_v<T, PolicyAddCall>) return fn::policy_add;
            else if constexpr (std::is_same_v<T, PolicyUpdateCall>) return fn::policy_update;
            else if constexpr (std::is_same_v<T, PolicyDeleteCall>) return fn::policy_delete;
            else if constexpr (std::is_same_v<T, RoleTransferCall>) return fn::role_transfer;
            else if constexpr (std::is_same_v<T, AccessControlCall>) return fn::access_control;
            else return fn::delete_rbac;
        },
        args);
}

std::size_t FunctionCall::subject_count() const
{
    if (const auto* add = std::get_if<PolicyAddCall>(&args)) return add->subjects.size();
    if (const auto* upd = std::get_if<PolicyUpdateCall>(&args)) return upd->subjects.size();
    if (std::holds_alternative<PolicyDeleteCall>(args) || std::holds_alternative<RoleTransferCall>(args) ||
        std::holds_alternative<AccessControlCall>(args)) {
        return 1;
    }
    return 0;
}

namespace {

void put_addresses(Encoder& enc, const std::vector<Address>& addrs)
{
    enc.put_u64(addrs.size());
    for (const auto& a : addrs) enc.put(a.bytes);
}

std::vector<Address> get_addresses(Decoder& dec)
{
    const std::uint64_t n = dec.get_u64();
    std::vector<Address> out;
    for (std::uint64_t i = 0; i < n; ++i) out.push_back(Address{dec.get<Address::size>()});
    return out;
}

} // namespace

void encode_call(Encoder& enc, const FunctionCall& call)
{
    enc.put_u8(static_cast<std::uint8_t>(call.args.index()));
    std::visit(
        [&enc](const auto& a) {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, PolicyAddCall> || std::is_same_v<T, PolicyUpdateCall>) {
                put_addresses(enc, a.subjects);
                enc.put_string(a.role.str()).put_u8(a.permission.bits());
            } else if constexpr (std::is_same_v<T, PolicyDeleteCall> || std::is_same_v<T, AccessControlCall>) {
                enc.put(a.subject.bytes).put_string(a.role.str());
            } else if constexpr (std::is_same_v<T, RoleTransferCall>) {
                enc.put(a.source.subject.bytes).put_string(a.source.role.str()).put(a.new_subject.bytes);
            }
        },
        call.args);
    enc.put_u64(call.payload_bits);
}

FunctionCall decode_call(Decoder& dec)
{
    FunctionCall call;
    switch (dec.get_u8()) {
    case 0: call.args = DeployCall{}; break;
    case 1: {
        auto subjects = get_addresses(dec);
        Role role{dec.get_string()};
        call.args = PolicyAddCall{std::move(subjects), role, Permission::from_bits(dec.get_u8())};
        break;
    }
    case 2: {
        auto subjects = get_addresses(dec);
        Role role{dec.get_string()};
        call.args = PolicyUpdateCall{std::move(subjects), role, Permission::from_bits(dec.get_u8())};
        break;
    }
    case 3: {
        Address subject{dec.get<Address::size>()};
        call.args = PolicyDeleteCall{subject, Role{dec.get_string()}};
        break;
    }
    case 4: {
        Address subject{dec.get<Address::size>()};
        Role role{dec.get_string()};
        call.args = RoleTransferCall{PolicyKey{subject, role}, Address{dec.get<Address::size>()}};
        break;
    }
    case 5: {
        Address subject{dec.get<Address::size>()};
        call.args = AccessControlCall{subject, Role{dec.get_string()}};
        break;
    }
    case 6: call.args = DeleteRbacCall{}; break;
    default: throw DecodeError("unknown function tag");
    }
    call.payload_bits = dec.get_u64();
    return call;
}

ContractState deploy(const Address& owner, ContractOptions options)
{
    ContractState state;
    state.owner = owner;
    state.options = options;
    return state;
}

namespace {

const PolicyEntry* find_active(const ContractState& state, const Address& subject, const Role& role)
{
    const auto it = state.policies.find(PolicyKey{subject, role});
    if (it == state.policies.end() || !it->second.active) return nullptr;
    return &it->second;
}

PolicyEntry owner_grant(const ContractState& state, const Address& subject, const Role& role,
                        Permission permission, BlockHeight height)
{
    return PolicyEntry{subject, role, permission, state.owner, {state.owner}, height, height, true};
}

std::optional<RevertReason> owner_guard(const ContractState& state, const Address& caller)
{
    if (state.destroyed) return RevertReason::ContractDestroyed;
    if (caller != state.owner) return RevertReason::NotOwner;
    return std::nullopt;
}

} // namespace

std::optional<RevertReason> policy_add(ContractState& state, const Address& caller,
                                       const std::vector<Address>& subjects, const Role& role,
                                       Permission permission, BlockHeight height)
{
    if (auto err = owner_guard(state, caller)) return err;
    if (subjects.empty()) return RevertReason::EmptyInput;
    std::set<Address> seen;
    for (const auto& s : subjects) {
        if (!seen.insert(s).second || find_active(state, s, role)) return RevertReason::PolicyExists;
    }
    for (const auto& s : subjects) {
        state.policies.insert_or_assign(PolicyKey{s, role}, owner_grant(state, s, role, permission, height));
    }
    return std::nullopt;
}

std::optional<RevertReason> policy_update(ContractState& state, const Address& caller,
                                          const Address& subject, const Role& role,
                                          Permission permission, BlockHeight height)
{
    if (auto err = owner_guard(state, caller)) return err;

    if (const auto it = state.policies.find(PolicyKey{subject, role});
        it != state.policies.end() && it->second.active) {
        it->second.permission = permission;
        it->second.updated_at = height;
        return std::nullopt;
    }

    // Role change: the subject's current roles are replaced by the new one.
    bool moved = false;
    for (auto& [key, entry] : state.policies) {
        if (key.subject == subject && entry.active) {
            entry.active = false;
            entry.updated_at = height;
            moved = true;
        }
    }
    if (!moved) return RevertReason::PolicyNotFound;
    state.policies.insert_or_assign(PolicyKey{subject, role}, owner_grant(state, subject, role, permission, height));
    return std::nullopt;
}

std::optional<RevertReason> policy_delete(ContractState& state, const Address& caller,
                                          const Address& subject, const Role& role, BlockHeight height)
{
    if (auto err = owner_guard(state, caller)) return err;
    const auto it = state.policies.find(PolicyKey{subject, role});
    if (it == state.policies.end() || !it->second.active) return RevertReason::PolicyNotFound;
    it->second.active = false;
    it->second.updated_at = height;
    return std::nullopt;
}

std::optional<RevertReason> role_transfer(ContractState& state, const Address& caller,
                                          const PolicyKey& source, const Address& new_subject,
                                          BlockHeight height)
{
    if (state.destroyed) return RevertReason::ContractDestroyed;
    if (caller != source.subject) return RevertReason::NotEndorsed;
    const auto src = state.policies.find(source);
    if (src == state.policies.end() || !src->second.active) return RevertReason::PolicyNotFound;
    if (!src->second.permission.has(Access::Delegate)) return RevertReason::NotEndorsed;
    if (find_active(state, new_subject, source.role)) return RevertReason::PolicyExists;

    PolicyEntry granted{new_subject,
                        source.role,
                        src->second.permission,
                        caller,
                        src->second.delegation_chain,
                        height,
                        height,
                        true};
    granted.delegation_chain.push_back(caller);
    if (state.options.transfer_moves_rights) {
        src->second.active = false;
        src->second.updated_at = height;
    }
    state.policies.insert_or_assign(PolicyKey{new_subject, source.role}, std::move(granted));
    return std::nullopt;
}

std::optional<RevertReason> delete_rbac(ContractState& state, const Address& caller)
{
    if (auto err = owner_guard(state, caller)) return err;
    state.destroyed = true;
    return std::nullopt;
}

std::optional<Permission> access_control(const ContractState& state, const Address& subject, const Role& role)
{
    if (state.destroyed) return std::nullopt;
    const PolicyEntry* entry = find_active(state, subject, role);
    if (!entry || entry->permission.empty()) return std::nullopt;
    return entry->permission;
}

CallResult apply(const ContractState& state, const Address& caller, const FunctionCall& call, BlockHeight height)
{
    CallResult result{state, std::nullopt, {}};
    ContractState& next = result.state;

    std::visit(
        [&](const auto& a) {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, DeployCall>) {
                throw std::invalid_argument("deploy is not a call on an existing contract");
            } else if constexpr (std::is_same_v<T, PolicyAddCall>) {
                result.revert = policy_add(next, caller, a.subjects, a.role, a.permission, height);
            } else if constexpr (std::is_same_v<T, PolicyUpdateCall>) {
                if (auto err = owner_guard(next, caller)) {
                    result.revert = err;
                } else if (a.subjects.empty()) {
                    result.revert = RevertReason::EmptyInput;
                } else {
                    for (const auto& s : a.subjects) {
                        result.revert = policy_update(next, caller, s, a.role, a.permission, height);
                        if (result.revert) break;
                    }
                }
            } else if constexpr (std::is_same_v<T, PolicyDeleteCall>) {
                result.revert = policy_delete(next, caller, a.subject, a.role, height);
            } else if constexpr (std::is_same_v<T, RoleTransferCall>) {
                result.revert = role_transfer(next, caller, a.source, a.new_subject, height);
            } else if constexpr (std::is_same_v<T, AccessControlCall>) {
                if (next.destroyed) {
                    result.revert = RevertReason::ContractDestroyed;
                } else {
                    const auto perm = access_control(next, a.subject, a.role);
                    result.return_value = {perm ? perm->bits() : std::uint8_t{0}};
                }
            } else {
                result.revert = delete_rbac(next, caller);
            }
        },
        call.args);

    if (result.revert) {
        result.state = state;
        result.return_value.clear();
    } else if (result.return_value.empty()) {
        result.return_value = {1};
    }
    return result;
}

Bytes encode_state(const ContractState& state)
{
    Encoder enc;
    enc.put(state.owner.bytes).put_u8(state.destroyed ? 1 : 0).put_u8(state.options.transfer_moves_rights ? 1 : 0);
    enc.put_u64(state.policies.size());
    for (const auto& [key, e] : state.policies) {
        enc.put(key.subject.bytes).put_string(key.role.str());
        enc.put(e.subject.bytes).put_string(e.role.str()).put_u8(e.permission.bits()).put(e.grantor.bytes);
        enc.put_u64(e.delegation_chain.size());
        for (const auto& a : e.delegation_chain) enc.put(a.bytes);
        enc.put_u64(e.created_at).put_u64(e.updated_at).put_u8(e.active ? 1 : 0);
    }
    return std::move(enc).bytes();
}

std::string dump_policies_json(const ContractState& state)
{
    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    for (const auto& [key, e] : state.policies) {
        nlohmann::ordered_json chain = nlohmann::ordered_json::array();
        for (const auto& a : e.delegation_chain) chain.push_back(a.hex());
        out[key.str()] = {
            {"permission", e.permission.names()},
            {"grantor", e.grantor.hex()},
            {"active", e.active},
            {"created_at", e.created_at},
            {"updated_at", e.updated_at},
            {"delegation_chain", chain},
        };
    }
    return out.dump(2) + "\n";
}

} // namespace dosnrbac
