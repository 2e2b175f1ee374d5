#pragma once

#include <dosnrbac/rbac.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dosnrbac {

using Gas = std::uint64_t;

class GasError : public std::runtime_error {
public:
    enum class Kind { UnknownFunction, InvalidSchedule };

    GasError(Kind kind, const std::string& what) : std::runtime_error{what}, m_kind{kind} {}
    Kind kind() const { return m_kind; }

private:
    Kind m_kind;
};

/**
 * Calibrated cost table for the RBAC contract.
 *
 * policyAdd and policyUpdate cost base + per_address_gas per subject, so the
 * base values are the measured single-subject totals minus one per-address
 * increment (27,864 - 3,392 and 27,800 - 3,392). The other functions are flat.
 * Any call additionally pays per_bit_gas for every attached payload bit.
 */
struct GasSchedule {
    Gas deploy_gas{1'869'303};
    std::map<std::string, Gas, std::less<>> base_gas{
        {"policyAdd", 24'472},    {"policyUpdate", 24'408},  {"policyDelete", 22'680},
        {"roleTransfer", 51'456}, {"accessControl", 22'808}, {"deleteRBAC", 13'455},
    };
    Gas per_address_gas{3'392};
    Gas per_bit_gas{8};
    //! 1 gwei: the only price consistent with the measured ether column.
    double gas_price_eth{1e-9};
    double eth_usd{137.66};

    //! Throws GasError(UnknownFunction) when the schedule has no entry.
    Gas base(std::string_view function) const;

    /**
     * Parses the flat key=value format: one `function=gas` per line plus the
     * reserved keys deploy, per_address_gas, per_bit_gas, gas_price_eth and
     * eth_usd. Blank lines and `#` comments are ignored. Keys not present
     * keep their defaults.
     */
    static GasSchedule parse(std::string_view text);
    static GasSchedule load(const std::filesystem::path& path);
    std::string to_text() const;

    bool operator==(const GasSchedule&) const = default;
};

Gas meter(const GasSchedule& schedule, const FunctionCall& call);
Gas meter(const GasSchedule& schedule, std::string_view function, std::size_t subjects, std::uint64_t payload_bits = 0);

double to_eth(const GasSchedule& schedule, Gas gas);
double to_usd(const GasSchedule& schedule, Gas gas);

} // namespace dosnrbac
