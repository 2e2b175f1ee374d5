#include <dosnrbac/bytes.hpp>
#include <dosnrbac/crypto.hpp>

#include <bit>
#include <cstring>

namespace dosnrbac {

namespace {

constexpr char HEX_DIGITS[] = "0123456789abcdef";

int hex_value(char c)
{
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

} // namespace

std::string to_hex(std::span<const std::uint8_t> data)
{
    std::string out;
    out.reserve(2 + data.size() * 2);
    out += "0x";
    for (const std::uint8_t b : data) {
        out += HEX_DIGITS[b >> 4];
        out += HEX_DIGITS[b & 0x0f];
    }
    return out;
}

Bytes from_hex(std::string_view hex)
{
    if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
    if (hex.size() % 2 != 0) throw std::invalid_argument("odd-length hex string");
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        const int hi = hex_value(hex[i]);
        const int lo = hex_value(hex[i + 1]);
        if (hi < 0 || lo < 0) throw std::invalid_argument("invalid hex digit");
        out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
    }
    return out;
}

void Encoder::put_length(std::size_t n)
{
    const auto len = static_cast<std::uint32_t>(n);
    for (int shift = 24; shift >= 0; shift -= 8) {
        m_buf.push_back(static_cast<std::uint8_t>(len >> shift));
    }
}

Encoder& Encoder::put_bytes(std::span<const std::uint8_t> data)
{
    put_length(data.size());
    m_buf.insert(m_buf.end(), data.begin(), data.end());
    return *this;
}

Encoder& Encoder::put_string(std::string_view s)
{
    put_length(s.size());
    m_buf.insert(m_buf.end(), s.begin(), s.end());
    return *this;
}

Encoder& Encoder::put_u64(std::uint64_t v)
{
    std::array<std::uint8_t, 8> raw{};
    for (int i = 0; i < 8; ++i) raw[i] = static_cast<std::uint8_t>(v >> (56 - 8 * i));
    return put_bytes(raw);
}

Encoder& Encoder::put_f64(double v)
{
    return put_u64(std::bit_cast<std::uint64_t>(v));
}

Encoder& Encoder::put_u8(std::uint8_t v)
{
    const std::array<std::uint8_t, 1> raw{v};
    return put_bytes(raw);
}

std::span<const std::uint8_t> Decoder::take(std::size_t n)
{
    if (m_data.size() - m_pos < n) throw DecodeError("truncated input");
    auto out = m_data.subspan(m_pos, n);
    m_pos += n;
    return out;
}

Bytes Decoder::get_bytes()
{
    const auto prefix = take(4);
    std::uint32_t len = 0;
    for (const std::uint8_t b : prefix) len = (len << 8) | b;
    const auto body = take(len);
    return Bytes(body.begin(), body.end());
}

std::string Decoder::get_string()
{
    const Bytes raw = get_bytes();
    return std::string(raw.begin(), raw.end());
}

std::uint64_t Decoder::get_u64()
{
    const auto raw = get<8>();
    std::uint64_t v = 0;
    for (const std::uint8_t b : raw) v = (v << 8) | b;
    return v;
}

double Decoder::get_f64()
{
    return std::bit_cast<double>(get_u64());
}

std::uint8_t Decoder::get_u8()
{
    return get<1>()[0];
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::uint64_t index)
{
    Encoder enc;
    enc.put_string("dosnrbac.seed").put_u64(master).put_string(label).put_u64(index);
    const Hash256 digest = sha3_256(enc.bytes());
    std::uint64_t out = 0;
    for (int i = 0; i < 8; ++i) out = (out << 8) | digest[i];
    return out;
}

} // namespace dosnrbac
