#include <dosnrbac/experiments.hpp>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace dosnrbac {

namespace {

std::string fixed(double v, int decimals)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

bool same_rounded(double a, double b, int decimals)
{
    const double scale = std::pow(10.0, decimals);
    return std::llround(a * scale) == std::llround(b * scale);
}

const ReferenceCost* find_reference(std::string_view function)
{
    for (const auto& r : reference_costs) {
        if (r.function == function) return &r;
    }
    return nullptr;
}

const Receipt& mine_one(Ledger& ledger, const Hash256& tx)
{
    ledger.mine_next_block();
    const Receipt* r = ledger.receipt(tx);
    if (!r) throw std::logic_error("mined transaction has no receipt");
    return *r;
}

} // namespace

std::string GasReport::to_csv() const
{
    std::string out = "function,gas,eth,usd\n";
    for (const auto& r : rows) {
        out += r.function + ',' + std::to_string(r.gas) + ',' + fixed(r.eth, 9) + ',' + fixed(r.usd, 4) + '\n';
    }
    for (const auto& n : notes) out += "# " + n + '\n';
    return out;
}

GasReport run_gas_report(const GasSchedule& schedule, std::uint64_t seed)
{
    MiningConfig mining;
    mining.rng_seed = derive_seed(seed, "mining");
    Ledger ledger = Ledger::init_genesis(mining, schedule);

    const KeyPair owner = generate_keypair(derive_seed(seed, "account", 0));
    const KeyPair alice = generate_keypair(derive_seed(seed, "account", 1));
    const KeyPair carol = generate_keypair(derive_seed(seed, "account", 2));
    const Role friend_role{"friend"};

    const Receipt deployed = mine_one(ledger, send_call(ledger, owner, std::nullopt, FunctionCall{DeployCall{}}));
    ContractId contract;
    std::copy(deployed.return_value.begin(), deployed.return_value.end(), contract.bytes.begin());

    const std::vector<std::pair<const KeyPair*, FunctionCall>> calls = {
        {&owner, {PolicyAddCall{{alice.address()}, friend_role, {Access::Read, Access::Delegate}}}},
        {&owner, {PolicyUpdateCall{{alice.address()}, friend_role, {Access::Read, Access::Write, Access::Delegate}}}},
        {&alice, {RoleTransferCall{{alice.address(), friend_role}, carol.address()}}},
        {&owner, {AccessControlCall{alice.address(), friend_role}}},
        {&owner, {PolicyDeleteCall{carol.address(), friend_role}}},
        {&owner, {DeleteRbacCall{}}},
    };
    std::map<std::string, Gas, std::less<>> used;
    for (const auto& [sender, call] : calls) {
        const Receipt& r = mine_one(ledger, send_call(ledger, *sender, contract, call));
        if (!r.success()) {
            throw std::logic_error("gas report call " + std::string{call.name()} + " reverted: " +
                                   std::string{to_string(*r.revert)});
        }
        used.emplace(std::string{call.name()}, r.gas_used);
    }

    GasReport report;
    report.deploy_gas = deployed.gas_used;
    report.deploy_eth = to_eth(schedule, deployed.gas_used);
    report.deploy_usd = to_usd(schedule, deployed.gas_used);

    for (const std::string_view name : {fn::policy_add, fn::policy_update, fn::policy_delete, fn::role_transfer,
                                        fn::access_control, fn::delete_rbac}) {
        const Gas gas = used.at(std::string{name});
        GasReportRow row{std::string{name}, gas, to_eth(schedule, gas), to_usd(schedule, gas)};
        if (const ReferenceCost* ref = find_reference(name)) {
            if (ref->gas != gas) {
                report.notes.push_back(row.function + ": reference gas " + std::to_string(ref->gas) + ", metered " +
                                       std::to_string(gas));
            } else if (!same_rounded(row.eth, ref->eth, 6) || !same_rounded(row.usd, ref->usd, 4)) {
                report.notes.push_back(row.function + ": reference lists " + fixed(ref->eth, 6) + " ETH / " +
                                       fixed(ref->usd, 4) + " USD; " + std::to_string(gas) + " gas at " +
                                       fixed(schedule.gas_price_eth * 1e9, 3) + " gwei and " +
                                       fixed(schedule.eth_usd, 2) + " USD/ETH gives " + fixed(row.eth, 9) +
                                       " ETH / " + fixed(row.usd, 4) + " USD");
            }
        }
        report.rows.push_back(std::move(row));
    }
    report.notes.push_back("deploy: " + std::to_string(report.deploy_gas) + " gas, " + fixed(report.deploy_eth, 9) +
                           " ETH, " + fixed(report.deploy_usd, 4) + " USD");
    return report;
}

std::vector<AddressScalingRow> run_address_scaling(const GasSchedule& schedule, std::size_t n_max)
{
    if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
    std::vector<AddressScalingRow> rows;
    for (std::size_t n = 1; n <= n_max; ++n) {
        rows.push_back({n, meter(schedule, fn::policy_add, n), meter(schedule, fn::policy_update, n)});
    }
    return rows;
}

std::string to_csv(const std::vector<AddressScalingRow>& rows)
{
    std::string out = "n,policyAdd_gas,policyUpdate_gas\n";
    for (const auto& r : rows) {
        out += std::to_string(r.n) + ',' + std::to_string(r.policy_add) + ',' + std::to_string(r.policy_update) + '\n';
    }
    return out;
}

std::vector<BitScalingRow> run_bit_scaling(const GasSchedule& schedule, std::uint64_t bits_max)
{
    if (bits_max < 1) throw std::invalid_argument("bits_max must be at least 1");
    std::vector<BitScalingRow> rows;
    for (std::uint64_t bits = 1; bits <= bits_max; ++bits) {
        rows.push_back({bits, meter(schedule, fn::policy_add, 1, bits)});
    }
    return rows;
}

std::string to_csv(const std::vector<BitScalingRow>& rows)
{
    std::string out = "bits,gas\n";
    for (const auto& r : rows) out += std::to_string(r.bits) + ',' + std::to_string(r.gas) + '\n';
    return out;
}

std::vector<MiningPoint> run_mining_times(const MiningConfig& base, std::uint32_t miners_max, std::size_t blocks_per_point)
{
    if (miners_max < 1) throw std::invalid_argument("miners_max must be at least 1");
    if (blocks_per_point < 1000) throw std::invalid_argument("blocks_per_point must be at least 1000");
    std::vector<MiningPoint> points;
    for (std::uint32_t m = 1; m <= miners_max; ++m) {
        MiningConfig cfg = base;
        cfg.num_miners = m;
        const auto times = simulate_block_times(cfg, blocks_per_point);
        double sum = 0;
        for (const double t : times) sum += t;
        const double mean = sum / static_cast<double>(times.size());
        double sq = 0;
        for (const double t : times) sq += (t - mean) * (t - mean);
        points.push_back({m, mean, std::sqrt(sq / static_cast<double>(times.size() - 1))});
    }
    return points;
}

std::string to_csv(const std::vector<MiningPoint>& points)
{
    std::string out = "miners,mean_s,stddev_s\n";
    for (const auto& p : points) out += std::to_string(p.miners) + ',' + fixed(p.mean_s, 6) + ',' + fixed(p.stddev_s, 6) + '\n';
    return out;
}

// ---------------------------------------------------------------------------
// Scenario parsing
// ---------------------------------------------------------------------------

namespace {

using json = nlohmann::json;

/** Source lines of the top-level keys and of each timeline entry. */
struct LineIndex {
    std::map<std::string, std::size_t> keys;
    std::vector<std::size_t> timeline;
};

LineIndex index_lines(std::string_view text)
{
    LineIndex idx;
    std::vector<char> stack;
    std::size_t line = 1;
    bool in_string = false;
    bool escaped = false;
    std::string current;
    std::size_t string_line = 0;
    std::string pending_key;
    std::size_t pending_line = 0;
    std::string last_key;
    bool in_timeline = false;

    for (const char c : text) {
        if (in_string) {
            if (escaped) {
                escaped = false;
                current += c;
            } else if (c == '\\') {
                escaped = true;
            } else if (c == '"') {
                in_string = false;
                if (stack.size() == 1) {
                    pending_key = current;
                    pending_line = string_line;
                }
            } else {
                current += c;
            }
            if (c == '\n') ++line;
            continue;
        }
        switch (c) {
        case '\n': ++line; break;
        case '"':
            in_string = true;
            current.clear();
            string_line = line;
            break;
        case ':':
            if (stack.size() == 1 && !pending_key.empty()) {
                idx.keys.emplace(pending_key, pending_line);
                last_key = pending_key;
                pending_key.clear();
            }
            break;
        case ',':
            pending_key.clear();
            break;
        case '{':
        case '[':
            if (in_timeline && stack.size() == 2) idx.timeline.push_back(line);
            if (c == '[' && stack.size() == 1 && last_key == "timeline") in_timeline = true;
            stack.push_back(c);
            break;
        case '}':
        case ']':
            if (!stack.empty()) stack.pop_back();
            if (stack.size() == 1) {
                in_timeline = false;
                last_key.clear();
            }
            break;
        default: break;
        }
    }
    return idx;
}

std::size_t line_of_offset(std::string_view text, std::size_t offset)
{
    offset = std::min(offset, text.size());
    std::size_t line = 1;
    for (std::size_t i = 0; i < offset; ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

class Resolver {
public:
    Resolver(const Network& net, std::size_t line) : m_net{net}, m_line{line} {}

    NodeId node(const json& obj, const char* field, std::optional<NodeKind> kind = std::nullopt) const
    {
        const std::string name = string(obj, field);
        const auto id = m_net.find(name);
        if (!id) fail("unknown node '" + name + "'");
        if (kind && m_net.node(*id).kind != *kind) {
            fail("node '" + name + "' is not a " + std::string{to_string(*kind)});
        }
        return *id;
    }

    NodeId verifier(const json& obj, const char* field) const
    {
        const NodeId id = node(obj, field);
        if (!m_net.is_verifier(id)) fail("node '" + m_net.node(id).name + "' cannot verify requests");
        return id;
    }

    std::vector<NodeId> subjects(const json& obj) const
    {
        if (obj.contains("subject") && !obj.contains("subjects")) return {node(obj, "subject", NodeKind::Subject)};
        const json& arr = require(obj, "subjects");
        if (!arr.is_array() || arr.empty()) fail("'subjects' must be a non-empty array");
        std::vector<NodeId> out;
        for (const auto& item : arr) {
            const json wrapper = {{"subject", item}};
            out.push_back(node(wrapper, "subject", NodeKind::Subject));
        }
        return out;
    }

    Role role(const json& obj) const
    {
        try {
            return Role{string(obj, "role")};
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
    }

    Permission permission(const json& obj) const
    {
        const json& p = require(obj, "permission");
        try {
            if (p.is_string()) return Permission::parse(p.get<std::string>());
            if (p.is_array()) {
                std::string joined;
                for (const auto& flag : p) {
                    if (!flag.is_string()) fail("permission flags must be strings");
                    joined += flag.get<std::string>() + "|";
                }
                return Permission::parse(joined);
            }
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
        fail("'permission' must be a string or an array of strings");
    }

    std::string string(const json& obj, const char* field) const
    {
        const json& v = require(obj, field);
        if (!v.is_string()) fail(std::string{"'"} + field + "' must be a string");
        return v.get<std::string>();
    }

    const json& require(const json& obj, const char* field) const
    {
        if (!obj.contains(field)) fail(std::string{"missing field '"} + field + "'");
        return obj.at(field);
    }

    [[noreturn]] void fail(const std::string& what) const { throw ScenarioError(m_line, what); }

private:
    const Network& m_net;
    std::size_t m_line;
};

void read_group(const json& doc, const char* key, std::size_t line, std::size_t& count, std::vector<std::string>& names)
{
    if (!doc.contains(key)) return;
    const json& v = doc.at(key);
    if (v.is_number_unsigned()) {
        count = v.get<std::size_t>();
    } else if (v.is_array()) {
        names.clear();
        for (const auto& n : v) {
            if (!n.is_string()) throw ScenarioError(line, std::string{"'"} + key + "' names must be strings");
            names.push_back(n.get<std::string>());
        }
        count = names.size();
    } else {
        throw ScenarioError(line, std::string{"'"} + key + "' must be a count or a list of names");
    }
}

double read_probability(const json& doc, const char* key, std::size_t line)
{
    if (!doc.contains(key)) return 0.0;
    const json& v = doc.at(key);
    if (!v.is_number() || v.get<double>() < 0.0 || v.get<double>() > 1.0) {
        throw ScenarioError(line, std::string{"'"} + key + "' must be a probability in [0, 1]");
    }
    return v.get<double>();
}

} // namespace

Scenario parse_scenario(std::string_view text)
{
    Scenario sc;
    if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) return sc;

    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
    }
    if (!doc.is_object()) throw ScenarioError(1, "scenario must be a JSON object");

    const LineIndex lines = index_lines(text);
    const auto key_line = [&](const char* key) {
        const auto it = lines.keys.find(key);
        return it == lines.keys.end() ? std::size_t{1} : it->second;
    };

    NetworkConfig& nc = sc.network;
    if (doc.contains("owner")) {
        if (!doc["owner"].is_string()) throw ScenarioError(key_line("owner"), "'owner' must be a name");
        nc.owner_name = doc["owner"].get<std::string>();
    }
    read_group(doc, "trusted", key_line("trusted"), nc.trusted, nc.trusted_names);
    read_group(doc, "subjects", key_line("subjects"), nc.subjects, nc.subject_names);
    nc.owner_churn = read_probability(doc, "owner_churn", key_line("owner_churn"));
    nc.node_churn = read_probability(doc, "node_churn", key_line("node_churn"));

    // Building the network here resolves names exactly as the run will.
    std::optional<Network> net;
    try {
        net.emplace(Network::create(nc));
    } catch (const DosnError& e) {
        throw ScenarioError(1, e.what());
    }

    if (doc.contains("initially_offline")) {
        const Resolver r{*net, key_line("initially_offline")};
        const json& arr = doc["initially_offline"];
        if (!arr.is_array()) r.fail("'initially_offline' must be an array of node names");
        for (const auto& item : arr) sc.initially_offline.push_back(r.node(json{{"node", item}}, "node"));
    }

    if (!doc.contains("timeline")) return sc;
    const json& timeline = doc["timeline"];
    if (!timeline.is_array()) throw ScenarioError(key_line("timeline"), "'timeline' must be an array");

    for (std::size_t i = 0; i < timeline.size(); ++i) {
        const std::size_t line = i < lines.timeline.size() ? lines.timeline[i] : key_line("timeline");
        const json& entry = timeline[i];
        const Resolver r{*net, line};
        if (!entry.is_object()) r.fail("timeline entries must be objects");
        const std::string op = r.string(entry, "op");

        scenario::Step step{line, scenario::Destroy{}};
        if (op == "grant") {
            step.op = scenario::Grant{r.subjects(entry), r.role(entry), r.permission(entry)};
        } else if (op == "update") {
            step.op = scenario::Update{r.subjects(entry), r.role(entry), r.permission(entry)};
        } else if (op == "revoke") {
            step.op = scenario::Revoke{r.node(entry, "subject", NodeKind::Subject), r.role(entry)};
        } else if (op == "transfer") {
            step.op = scenario::Transfer{r.node(entry, "from", NodeKind::Subject), r.role(entry),
                                         r.node(entry, "to", NodeKind::Subject)};
        } else if (op == "request") {
            scenario::Request req{r.node(entry, "subject", NodeKind::Subject), r.role(entry), "", std::nullopt};
            if (entry.contains("resource")) req.resource = r.string(entry, "resource");
            if (entry.contains("via")) req.via = r.verifier(entry, "via");
            step.op = std::move(req);
        } else if (op == "audit") {
            step.op = scenario::Audit{r.node(entry, "subject", NodeKind::Subject), r.role(entry)};
        } else if (op == "online" || op == "offline") {
            step.op = scenario::SetOnline{r.node(entry, "node"), op == "online"};
        } else if (op == "churn") {
            scenario::Churn churn;
            if (entry.contains("steps")) {
                if (!entry["steps"].is_number_unsigned()) r.fail("'steps' must be a non-negative integer");
                churn.steps = entry["steps"].get<std::size_t>();
            }
            step.op = churn;
        } else if (op == "destroy") {
            step.op = scenario::Destroy{};
        } else {
            r.fail("unknown op '" + op + "'");
        }
        sc.timeline.push_back(std::move(step));
    }
    return sc;
}

Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in{path};
    if (!in) throw ScenarioError(0, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

// ---------------------------------------------------------------------------
// Scenario replay
// ---------------------------------------------------------------------------

namespace {

using ojson = nlohmann::ordered_json;

std::vector<Address> addresses(const Network& net, const std::vector<NodeId>& ids)
{
    std::vector<Address> out;
    for (const NodeId id : ids) out.push_back(net.node(id).address());
    return out;
}

} // namespace

ScenarioResult run_scenario(const Scenario& sc, const ScenarioOptions& options)
{
    NetworkConfig nc = sc.network;
    nc.rng_seed = derive_seed(options.seed, "accounts");
    MiningConfig mc = options.mining;
    mc.rng_seed = derive_seed(options.seed, "mining");

    ScenarioResult res{Network::create(nc), Ledger::init_genesis(mc, options.schedule), {}, {}, {}, {}};
    Network& net = res.network;
    Ledger& ledger = res.ledger;
    for (const NodeId id : sc.initially_offline) net.set_online(id, false);

    std::mt19937_64 routing{derive_seed(options.seed, "routing")};
    std::mt19937_64 churn{derive_seed(options.seed, "churn")};
    std::ostringstream log;
    std::ostringstream transcripts;
    std::size_t transcript_index = 0;

    const KeyPair& owner = net.owner().keys;
    const Hash256 deploy_tx = send_call(ledger, owner, std::nullopt, FunctionCall{DeployCall{}});
    ledger.mine_next_block();
    const Receipt* deployed = ledger.receipt(deploy_tx);
    std::copy(deployed->return_value.begin(), deployed->return_value.end(), res.contract.bytes.begin());

    const auto transact = [&](std::size_t line, const KeyPair& sender, FunctionCall call) -> const Receipt& {
        const Hash256 tx = send_call(ledger, sender, res.contract, std::move(call));
        ledger.mine_next_block();
        const Receipt& r = *ledger.receipt(tx);
        ojson entry = {
            {"kind", "tx"},
            {"line", line},
            {"function", std::string{ledger.blocks().back().transactions.back().call.name()}},
            {"from", sender.address().hex()},
            {"tx_hash", to_hex(r.tx_hash)},
            {"block", r.block_height},
            {"status", r.success() ? std::string{"Success"} : std::string{to_string(*r.revert)}},
            {"gas_used", r.gas_used},
        };
        log << entry.dump() << '\n';
        return r;
    };

    for (const auto& step : sc.timeline) {
        std::visit(
            [&](const auto& op) {
                using T = std::decay_t<decltype(op)>;
                if constexpr (std::is_same_v<T, scenario::Grant>) {
                    transact(step.line, owner, {PolicyAddCall{addresses(net, op.subjects), op.role, op.permission}});
                } else if constexpr (std::is_same_v<T, scenario::Update>) {
                    transact(step.line, owner, {PolicyUpdateCall{addresses(net, op.subjects), op.role, op.permission}});
                } else if constexpr (std::is_same_v<T, scenario::Revoke>) {
                    transact(step.line, owner, {PolicyDeleteCall{net.node(op.subject).address(), op.role}});
                } else if constexpr (std::is_same_v<T, scenario::Transfer>) {
                    const Node& from = net.node(op.from);
                    transact(step.line, from.keys,
                             {RoleTransferCall{{from.address(), op.role}, net.node(op.to).address()}});
                } else if constexpr (std::is_same_v<T, scenario::Destroy>) {
                    transact(step.line, owner, {DeleteRbacCall{}});
                } else if constexpr (std::is_same_v<T, scenario::Audit>) {
                    const Receipt& r = transact(step.line, owner, {AccessControlCall{net.node(op.subject).address(), op.role}});
                    const Permission perm =
                        r.success() ? Permission::from_bits(r.return_value.at(0)) : Permission{};
                    ojson entry = {
                        {"kind", "audit"},
                        {"line", step.line},
                        {"subject", net.node(op.subject).name},
                        {"role", op.role.str()},
                        {"permission", perm.names()},
                        {"granted", !perm.empty()},
                    };
                    log << entry.dump() << '\n';
                } else if constexpr (std::is_same_v<T, scenario::SetOnline>) {
                    net.set_online(op.node, op.online);
                    log << ojson{{"kind", "status"}, {"line", step.line}, {"node", net.node(op.node).name},
                                 {"online", op.online}}.dump()
                        << '\n';
                } else if constexpr (std::is_same_v<T, scenario::Churn>) {
                    for (std::size_t s = 0; s < op.steps; ++s) {
                        for (const auto& ev : step_churn(net, churn)) {
                            log << ojson{{"kind", "churn"}, {"line", step.line}, {"node", net.node(ev.node).name},
                                         {"online", ev.online}}.dump()
                                << '\n';
                        }
                    }
                } else if constexpr (std::is_same_v<T, scenario::Request>) {
                    const AccessRequest request{op.subject, op.role, op.resource, ledger.now()};
                    ScenarioDecision d{step.line, AccessDecision{request, Deny{DenyReason::NoVerifierAvailable}, std::nullopt, {}}, {}, true};
                    try {
                        d.decision = op.via ? decide_at(net, *op.via, ledger, res.contract, request)
                                            : handle_request(net, ledger, res.contract, request, routing);
                    } catch (const DosnError& e) {
                        if (e.kind() != DosnError::Kind::NoVerifierAvailable) throw;
                    }
                    if (options.cross_check_verifiers) {
                        for (const auto& n : net.nodes()) {
                            if (!net.is_verifier(n.id)) continue;
                            auto other = decide_at(net, n.id, ledger, res.contract, request);
                            if (d.decision.decided_by && other.verdict != d.decision.verdict) d.consistent = false;
                            d.cross_checks.emplace_back(n.id, std::move(other.verdict));
                        }
                    }

                    const std::size_t tref = transcript_index++;
                    for (const auto& ts : d.decision.transcript.steps) {
                        ojson inputs = ojson::object();
                        for (const auto& [k, v] : ts.inputs) inputs[k] = v;
                        transcripts << ojson{{"decision", tref}, {"step", ts.step}, {"inputs", inputs},
                                             {"outcome", ts.outcome}}.dump()
                                    << '\n';
                    }

                    const Node& subject = net.node(request.subject);
                    ojson entry = {
                        {"kind", "access"},
                        {"line", step.line},
                        {"subject", subject.name},
                        {"subject_address", subject.address().hex()},
                        {"role", request.role.str()},
                        {"resource", request.resource_id},
                        {"time", request.issued_at},
                        {"verdict", is_grant(d.decision.verdict) ? "grant" : "deny"},
                    };
                    if (const auto* g = std::get_if<Grant>(&d.decision.verdict)) {
                        entry["permission"] = g->permission.names();
                    } else {
                        entry["reason"] = std::string{to_string(std::get<Deny>(d.decision.verdict).reason)};
                    }
                    if (d.decision.decided_by) {
                        const Node& v = net.node(*d.decision.decided_by);
                        entry["decided_by"] = v.name;
                        entry["decided_by_kind"] = std::string{to_string(v.kind)};
                    } else {
                        entry["decided_by"] = nullptr;
                        entry["decided_by_kind"] = nullptr;
                    }
                    entry["transcript"] = tref;
                    if (options.cross_check_verifiers) entry["consistent"] = d.consistent;
                    log << entry.dump() << '\n';
                    res.decisions.push_back(std::move(d));
                }
            },
            step.op);
    }

    res.decision_log = log.str();
    res.transcript_log = transcripts.str();
    return res;
}

void write_scenario_outputs(const ScenarioResult& result, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    const auto write = [&](const char* name, const std::string& content) {
        std::ofstream out{dir / name, std::ios::binary};
        if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
        out << content;
    };
    write("decisions.jsonl", result.decision_log);
    write("transcripts.jsonl", result.transcript_log);
    const ContractState* state = result.ledger.contract(result.contract);
    write("policy_store.json", state ? dump_policies_json(*state) : std::string{"{}\n"});
    write("chain.jsonl", result.ledger.dump_jsonl());
}

} // namespace dosnrbac
