// Command-line front end for the DOSN RBAC simulator.

#include <dosnrbac/experiments.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

using namespace dosnrbac;

namespace {

struct Options {
    std::uint64_t seed{0};
    std::string out;
    std::string schedule_file;
    std::optional<double> gas_price;
    std::optional<double> eth_usd;
    std::uint32_t miners{8};
    std::size_t blocks{10'000};
    std::size_t n_max{50};
    std::uint64_t bits_max{256};
    std::string scenario_file;
    bool cross_check{false};
};

GasSchedule schedule_from(const Options& opt)
{
    GasSchedule s = opt.schedule_file.empty() ? GasSchedule{} : GasSchedule::load(opt.schedule_file);
    if (opt.gas_price) s.gas_price_eth = *opt.gas_price;
    if (opt.eth_usd) s.eth_usd = *opt.eth_usd;
    return s;
}

void emit(const Options& opt, const std::string& content)
{
    if (opt.out.empty() || opt.out == "-") {
        std::cout << content;
        return;
    }
    std::ofstream f{opt.out, std::ios::binary};
    if (!f) throw std::runtime_error("cannot write " + opt.out);
    f << content;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Blockchain RBAC simulator for decentralized online social networks"};
    app.require_subcommand(1);
    app.fallthrough();

    Options opt;
    app.add_option("--seed", opt.seed, "Master seed; every experiment is a pure function of it")->required();
    app.add_option("--out", opt.out, "Output file for CSV commands, output directory for scenario");
    app.add_option("--schedule", opt.schedule_file, "Gas schedule file (key=value lines)")->check(CLI::ExistingFile);
    app.add_option("--gas-price", opt.gas_price, "Gas price in ETH per gas")->check(CLI::NonNegativeNumber);
    app.add_option("--eth-usd", opt.eth_usd, "USD per ETH")->check(CLI::NonNegativeNumber);

    auto* gas = app.add_subcommand("gas-report", "Cost of every contract function on a fresh ledger");
    auto* addr = app.add_subcommand("address-scaling", "policyAdd/policyUpdate gas versus subject count");
    addr->add_option("--n-max", opt.n_max, "Largest subject count")->check(CLI::PositiveNumber);
    auto* bits = app.add_subcommand("bit-scaling", "policyAdd gas versus payload bits");
    bits->add_option("--bits-max", opt.bits_max, "Largest payload size in bits")->check(CLI::PositiveNumber);
    auto* mining = app.add_subcommand("mining-times", "Mean block time versus miner count");
    mining->add_option("--miners", opt.miners, "Largest miner count")->check(CLI::PositiveNumber);
    mining->add_option("--blocks", opt.blocks, "Simulated blocks per miner count")->check(CLI::Range(1000, 100'000'000));
    auto* scen = app.add_subcommand("scenario", "Replay a scripted DOSN scenario");
    scen->add_option("--scenario", opt.scenario_file, "Scenario JSON file")->required();
    scen->add_flag("--cross-check", opt.cross_check, "Also decide every request at every verifier");
    auto* sched = app.add_subcommand("schedule", "Print the effective gas schedule");

    CLI11_PARSE(app, argc, argv);

    try {
        const GasSchedule schedule = schedule_from(opt);
        if (*gas) {
            emit(opt, run_gas_report(schedule, opt.seed).to_csv());
        } else if (*addr) {
            emit(opt, to_csv(run_address_scaling(schedule, opt.n_max)));
        } else if (*bits) {
            emit(opt, to_csv(run_bit_scaling(schedule, opt.bits_max)));
        } else if (*mining) {
            MiningConfig cfg;
            cfg.rng_seed = derive_seed(opt.seed, "mining");
            emit(opt, to_csv(run_mining_times(cfg, opt.miners, opt.blocks)));
        } else if (*scen) {
            ScenarioOptions so;
            so.seed = opt.seed;
            so.schedule = schedule;
            so.cross_check_verifiers = opt.cross_check;
            const ScenarioResult result = run_scenario(load_scenario(opt.scenario_file), so);
            if (opt.out.empty() || opt.out == "-") {
                std::cout << result.decision_log;
            } else {
                write_scenario_outputs(result, opt.out);
            }
        } else if (*sched) {
            emit(opt, schedule.to_text());
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
