#include <dosnrbac/crypto.hpp>

#include <openssl/err.h>
#include <openssl/evp.h>
#include <openssl/rand.h>

#include <algorithm>

namespace dosnrbac {

namespace {

struct MdCtxDeleter {
    void operator()(EVP_MD_CTX* ctx) const { EVP_MD_CTX_free(ctx); }
};
using MdCtxPtr = std::unique_ptr<EVP_MD_CTX, MdCtxDeleter>;

struct PkeyDeleter {
    void operator()(EVP_PKEY* key) const { EVP_PKEY_free(key); }
};
using PkeyPtr = std::unique_ptr<EVP_PKEY, PkeyDeleter>;

} // namespace

Hash256 sha3_256(std::span<const std::uint8_t> data)
{
    Hash256 out{};
    MdCtxPtr ctx{EVP_MD_CTX_new()};
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha3_256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), out.data(), &len) != 1 || len != out.size()) {
        throw std::runtime_error("sha3-256 failed");
    }
    return out;
}

bool Address::is_zero() const
{
    return std::all_of(bytes.begin(), bytes.end(), [](std::uint8_t b) { return b == 0; });
}

struct PrivateKey::Handle {
    PkeyPtr pkey;
};

PrivateKey::PrivateKey(const std::array<std::uint8_t, 32>& secret)
{
    PkeyPtr pkey{EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr, secret.data(), secret.size())};
    if (!pkey) throw InvalidKey("cannot load ed25519 private key");
    std::size_t len = m_public.bytes.size();
    if (EVP_PKEY_get_raw_public_key(pkey.get(), m_public.bytes.data(), &len) != 1 || len != PublicKey::size) {
        throw InvalidKey("cannot derive ed25519 public key");
    }
    m_handle = std::make_shared<const Handle>(Handle{std::move(pkey)});
}

Signature PrivateKey::sign(std::span<const std::uint8_t> message) const
{
    MdCtxPtr ctx{EVP_MD_CTX_new()};
    Signature sig;
    sig.bytes.resize(Signature::size);
    std::size_t len = sig.bytes.size();
    if (!ctx || EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, m_handle->pkey.get()) != 1 ||
        EVP_DigestSign(ctx.get(), sig.bytes.data(), &len, message.data(), message.size()) != 1 ||
        len != Signature::size) {
        throw std::runtime_error("ed25519 signing failed");
    }
    return sig;
}

KeyPair::KeyPair(const std::array<std::uint8_t, 32>& secret)
    : m_private{secret}, m_public{m_private.public_key()}, m_address{derive_address(m_public)}
{
}

KeyPair generate_keypair(std::optional<std::uint64_t> seed)
{
    std::array<std::uint8_t, 32> secret{};
    if (seed) {
        Encoder enc;
        enc.put_string("dosnrbac.keypair").put_u64(*seed);
        secret = sha3_256(enc.bytes());
    } else if (RAND_bytes(secret.data(), static_cast<int>(secret.size())) != 1) {
        throw std::runtime_error("system randomness unavailable");
    }
    return KeyPair{secret};
}

Address derive_address(std::span<const std::uint8_t> public_key)
{
    if (public_key.size() != PublicKey::size) {
        throw InvalidKey("public key must be " + std::to_string(PublicKey::size) + " bytes");
    }
    const Hash256 digest = sha3_256(public_key);
    Address out;
    std::copy(digest.end() - Address::size, digest.end(), out.bytes.begin());
    return out;
}

Address derive_address(const PublicKey& public_key)
{
    return derive_address(std::span<const std::uint8_t>{public_key.bytes});
}

Signature sign_message(const PrivateKey& key, std::span<const std::uint8_t> message)
{
    return key.sign(message);
}

bool verify_signature(std::span<const std::uint8_t> public_key,
                      std::span<const std::uint8_t> message,
                      std::span<const std::uint8_t> signature)
{
    if (public_key.size() != PublicKey::size || signature.size() != Signature::size) return false;
    PkeyPtr pkey{EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr, public_key.data(), public_key.size())};
    MdCtxPtr ctx{EVP_MD_CTX_new()};
    const bool ok = pkey && ctx &&
                    EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr, pkey.get()) == 1 &&
                    EVP_DigestVerify(ctx.get(), signature.data(), signature.size(), message.data(), message.size()) == 1;
    // Failed verifications leave entries on the thread's error queue.
    if (!ok) ERR_clear_error();
    return ok;
}

bool verify_signature(const PublicKey& public_key,
                      std::span<const std::uint8_t> message,
                      const Signature& signature)
{
    return verify_signature(std::span<const std::uint8_t>{public_key.bytes}, message, signature.bytes);
}

} // namespace dosnrbac
