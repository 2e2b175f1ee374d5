#pragma once

#include <dosnrbac/chain.hpp>
#include <dosnrbac/dosn.hpp>
#include <dosnrbac/gas.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace dosnrbac {

// ---------------------------------------------------------------------------
// Gas report
// ---------------------------------------------------------------------------

struct GasReportRow {
    std::string function;
    Gas gas{0};
    double eth{0};
    double usd{0};
};

struct GasReport {
    std::vector<GasReportRow> rows;
    Gas deploy_gas{0};
    double deploy_eth{0};
    double deploy_usd{0};
    //! Emitted as trailing `#` lines after the CSV rows.
    std::vector<std::string> notes;

    //! `function,gas,eth,usd`; ETH at 9 decimals, USD at 4.
    std::string to_csv() const;
};

/** Reference measurements the report is checked against: gas, ether and USD as published. */
struct ReferenceCost {
    std::string_view function;
    Gas gas;
    double eth;
    double usd;
};

inline constexpr ReferenceCost reference_costs[] = {
    {"policyAdd", 27864, 0.000028, 0.0038},     {"policyUpdate", 27800, 0.000028, 0.0038},
    {"policyDelete", 22680, 0.000023, 0.0031},  {"roleTransfer", 51456, 0.000051, 0.0069},
    {"accessControl", 22808, 0.000023, 0.0031}, {"deleteRBAC", 13455, 0.000027, 0.0036},
};

/**
 * Deploys the contract on a fresh ledger and sends one successful transaction
 * per contract function, reporting the gas each receipt consumed. Rows whose
 * recomputed ether or USD figure disagrees with the reference measurement
 * get a note.
 */
GasReport run_gas_report(const GasSchedule& schedule, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Scaling experiments
// ---------------------------------------------------------------------------

struct AddressScalingRow {
    std::size_t n{0};
    Gas policy_add{0};
    Gas policy_update{0};
};

std::vector<AddressScalingRow> run_address_scaling(const GasSchedule& schedule, std::size_t n_max);
std::string to_csv(const std::vector<AddressScalingRow>& rows);

struct BitScalingRow {
    std::uint64_t bits{0};
    Gas gas{0};
};

//! policyAdd with one subject plus 1..bits_max payload bits.
std::vector<BitScalingRow> run_bit_scaling(const GasSchedule& schedule, std::uint64_t bits_max);
std::string to_csv(const std::vector<BitScalingRow>& rows);

struct MiningPoint {
    std::uint32_t miners{0};
    double mean_s{0};
    double stddev_s{0};
};

//! Every point reuses base.rng_seed so miner counts are compared on common random numbers.
std::vector<MiningPoint> run_mining_times(const MiningConfig& base, std::uint32_t miners_max, std::size_t blocks_per_point);
std::string to_csv(const std::vector<MiningPoint>& points);

// ---------------------------------------------------------------------------
// Scenario replay
// ---------------------------------------------------------------------------

class ScenarioError : public std::runtime_error {
public:
    ScenarioError(std::size_t line, const std::string& what)
        : std::runtime_error{"scenario line " + std::to_string(line) + ": " + what}, m_line{line}
    {
    }
    std::size_t line() const { return m_line; }

private:
    std::size_t m_line;
};

namespace scenario {

struct Grant {
    std::vector<NodeId> subjects;
    Role role;
    Permission permission;
};
struct Update {
    std::vector<NodeId> subjects;
    Role role;
    Permission permission;
};
struct Revoke {
    NodeId subject;
    Role role;
};
struct Transfer {
    NodeId from;
    Role role;
    NodeId to;
};
struct Request {
    NodeId subject;
    Role role;
    std::string resource;
    //! Forces a verifier instead of routing.
    std::optional<NodeId> via;
};
//! Paid, on-chain accessControl call sent by the owner.
struct Audit {
    NodeId subject;
    Role role;
};
struct SetOnline {
    NodeId node;
    bool online;
};
struct Churn {
    std::size_t steps{1};
};
struct Destroy {};

using Op = std::variant<Grant, Update, Revoke, Transfer, Request, Audit, SetOnline, Churn, Destroy>;

struct Step {
    std::size_t line{0};
    Op op;
};

} // namespace scenario

struct Scenario {
    NetworkConfig network;
    std::vector<NodeId> initially_offline;
    std::vector<scenario::Step> timeline;
};

/**
 * Parses the JSON scenario format. Node names are resolved here, so every
 * semantic error carries the line of the offending timeline entry.
 * Whitespace-only input is the empty scenario.
 */
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

struct ScenarioOptions {
    std::uint64_t seed{1};
    GasSchedule schedule{};
    MiningConfig mining{};
    //! Re-run every request at every verifier and record whether all verdicts agree.
    bool cross_check_verifiers{false};
};

struct ScenarioDecision {
    std::size_t line{0};
    AccessDecision decision;
    std::vector<std::pair<NodeId, Verdict>> cross_checks;
    bool consistent{true};
};

struct ScenarioResult {
    Network network;
    Ledger ledger;
    ContractId contract;
    std::vector<ScenarioDecision> decisions;
    //! One JSON object per request, audit call, reverted transaction and churn event.
    std::string decision_log;
    std::string transcript_log;
};

ScenarioResult run_scenario(const Scenario& scenario, const ScenarioOptions& options);

//! Writes decisions.jsonl, transcripts.jsonl, policy_store.json and chain.jsonl into dir.
void write_scenario_outputs(const ScenarioResult& result, const std::filesystem::path& dir);

} // namespace dosnrbac
