#include <dosnrbac/gas.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace dosnrbac {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

Gas parse_gas(std::string_view value, std::size_t line_no)
{
    Gas out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw GasError(GasError::Kind::InvalidSchedule,
                       "line " + std::to_string(line_no) + ": expected a non-negative integer gas value");
    }
    return out;
}

double parse_real(std::string_view value, std::size_t line_no)
{
    // std::from_chars for double is not available on every toolchain we target.
    std::string buf{value};
    std::size_t used = 0;
    double out = 0;
    try {
        out = std::stod(buf, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != buf.size() || !(out >= 0)) {
        throw GasError(GasError::Kind::InvalidSchedule,
                       "line " + std::to_string(line_no) + ": expected a non-negative number");
    }
    return out;
}

bool is_per_address(std::string_view function)
{
    return function == fn::policy_add || function == fn::policy_update;
}

} // namespace

Gas GasSchedule::base(std::string_view function) const
{
    if (function == fn::deploy) return deploy_gas;
    const auto it = base_gas.find(function);
    if (it == base_gas.end()) {
        throw GasError(GasError::Kind::UnknownFunction, "no gas schedule entry for " + std::string{function});
    }
    return it->second;
}

GasSchedule GasSchedule::parse(std::string_view text)
{
    GasSchedule s;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw GasError(GasError::Kind::InvalidSchedule, "line " + std::to_string(line_no) + ": missing '='");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw GasError(GasError::Kind::InvalidSchedule, "line " + std::to_string(line_no) + ": empty key");
        }

        if (key == "deploy") s.deploy_gas = parse_gas(value, line_no);
        else if (key == "per_address_gas") s.per_address_gas = parse_gas(value, line_no);
        else if (key == "per_bit_gas") s.per_bit_gas = parse_gas(value, line_no);
        else if (key == "gas_price_eth") s.gas_price_eth = parse_real(value, line_no);
        else if (key == "eth_usd") s.eth_usd = parse_real(value, line_no);
        else s.base_gas.insert_or_assign(std::string{key}, parse_gas(value, line_no));
    }
    return s;
}

GasSchedule GasSchedule::load(const std::filesystem::path& path)
{
    std::ifstream in{path};
    if (!in) throw GasError(GasError::Kind::InvalidSchedule, "cannot open schedule file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string GasSchedule::to_text() const
{
    std::ostringstream out;
    out.precision(17);
    out << "deploy=" << deploy_gas << '\n';
    for (const auto& [name, gas] : base_gas) out << name << '=' << gas << '\n';
    out << "per_address_gas=" << per_address_gas << '\n';
    out << "per_bit_gas=" << per_bit_gas << '\n';
    out << "gas_price_eth=" << gas_price_eth << '\n';
    out << "eth_usd=" << eth_usd << '\n';
    return out.str();
}

Gas meter(const GasSchedule& schedule, std::string_view function, std::size_t subjects, std::uint64_t payload_bits)
{
    Gas gas = schedule.base(function);
    if (is_per_address(function)) gas += schedule.per_address_gas * subjects;
    return gas + schedule.per_bit_gas * payload_bits;
}

Gas meter(const GasSchedule& schedule, const FunctionCall& call)
{
    return meter(schedule, call.name(), call.subject_count(), call.payload_bits);
}

double to_eth(const GasSchedule& schedule, Gas gas)
{
    return static_cast<double>(gas) * schedule.gas_price_eth;
}

double to_usd(const GasSchedule& schedule, Gas gas)
{
    return to_eth(schedule, gas) * schedule.eth_usd;
}

} // namespace dosnrbac
