#pragma once

#include <dosnrbac/bytes.hpp>

#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

namespace dosnrbac {

Hash256 sha3_256(std::span<const std::uint8_t> data);

/** 20-byte account identifier: the trailing 20 bytes of SHA3-256(public key). */
struct Address {
    static constexpr std::size_t size = 20;
    std::array<std::uint8_t, size> bytes{};

    std::string hex() const { return to_hex(bytes); }
    static Address from_hex(std::string_view hex) { return {from_hex_fixed<size>(hex)}; }
    bool is_zero() const;

    auto operator<=>(const Address&) const = default;
};

struct PublicKey {
    static constexpr std::size_t size = 32;
    std::array<std::uint8_t, size> bytes{};

    std::string hex() const { return to_hex(bytes); }
    auto operator<=>(const PublicKey&) const = default;
};

struct Signature {
    static constexpr std::size_t size = 64;
    Bytes bytes;

    std::string hex() const { return to_hex(bytes); }
    bool operator==(const Signature&) const = default;
};

class InvalidKey : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/**
 * Ed25519 signing key. Has no serialization or hex accessor so it cannot leak
 * into reports, ledgers or logs.
 */
class PrivateKey {
public:
    explicit PrivateKey(const std::array<std::uint8_t, 32>& secret);

    Signature sign(std::span<const std::uint8_t> message) const;
    PublicKey public_key() const { return m_public; }

private:
    struct Handle;
    std::shared_ptr<const Handle> m_handle;
    PublicKey m_public;
};

class KeyPair {
public:
    explicit KeyPair(const std::array<std::uint8_t, 32>& secret);

    const PrivateKey& private_key() const { return m_private; }
    const PublicKey& public_key() const { return m_public; }
    const Address& address() const { return m_address; }

private:
    PrivateKey m_private;
    PublicKey m_public;
    Address m_address;
};

//! Same seed gives the same keypair; no seed draws from the OS CSPRNG.
KeyPair generate_keypair(std::optional<std::uint64_t> seed = std::nullopt);

//! Throws InvalidKey unless the input is exactly one encoded public key.
Address derive_address(std::span<const std::uint8_t> public_key);
Address derive_address(const PublicKey& public_key);

Signature sign_message(const PrivateKey& key, std::span<const std::uint8_t> message);

//! Never throws: malformed keys or signatures simply fail verification.
bool verify_signature(std::span<const std::uint8_t> public_key,
                      std::span<const std::uint8_t> message,
                      std::span<const std::uint8_t> signature);
bool verify_signature(const PublicKey& public_key,
                      std::span<const std::uint8_t> message,
                      const Signature& signature);

} // namespace dosnrbac
