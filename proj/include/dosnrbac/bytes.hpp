#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dosnrbac {

using Bytes = std::vector<std::uint8_t>;
using Hash256 = std::array<std::uint8_t, 32>;

//! Lowercase, 0x-prefixed hex.
std::string to_hex(std::span<const std::uint8_t> data);

//! Accepts an optional 0x prefix; throws std::invalid_argument on bad input.
Bytes from_hex(std::string_view hex);

template <std::size_t N>
std::array<std::uint8_t, N> from_hex_fixed(std::string_view hex)
{
    const Bytes raw = from_hex(hex);
    if (raw.size() != N) {
        throw std::invalid_argument("hex string has wrong length");
    }
    std::array<std::uint8_t, N> out{};
    std::copy(raw.begin(), raw.end(), out.begin());
    return out;
}

/** Thrown by Decoder when input is truncated or a length prefix is inconsistent. */
class DecodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * Canonical encoding: every field is written as a 4-byte big-endian length
 * followed by its bytes, in declared field order.
 */
class Encoder {
public:
    Encoder& put_bytes(std::span<const std::uint8_t> data);
    Encoder& put_string(std::string_view s);
    Encoder& put_u64(std::uint64_t v);
    Encoder& put_f64(double v);
    Encoder& put_u8(std::uint8_t v);

    template <std::size_t N>
    Encoder& put(const std::array<std::uint8_t, N>& a) { return put_bytes(a); }

    const Bytes& bytes() const& { return m_buf; }
    Bytes bytes() && { return std::move(m_buf); }

private:
    void put_length(std::size_t n);

    Bytes m_buf;
};

class Decoder {
public:
    explicit Decoder(std::span<const std::uint8_t> data) : m_data{data} {}

    Bytes get_bytes();
    std::string get_string();
    std::uint64_t get_u64();
    double get_f64();
    std::uint8_t get_u8();

    template <std::size_t N>
    std::array<std::uint8_t, N> get()
    {
        const Bytes raw = get_bytes();
        if (raw.size() != N) throw DecodeError("fixed-size field has wrong length");
        std::array<std::uint8_t, N> out{};
        std::copy(raw.begin(), raw.end(), out.begin());
        return out;
    }

    bool done() const { return m_pos == m_data.size(); }

private:
    std::span<const std::uint8_t> take(std::size_t n);

    std::span<const std::uint8_t> m_data;
    std::size_t m_pos{0};
};

//! Derives an independent 64-bit seed for a named sub-stream of a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::uint64_t index = 0);

} // namespace dosnrbac
