#pragma once

#include <dosnrbac/crypto.hpp>
#include <dosnrbac/gas.hpp>
#include <dosnrbac/rbac.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dosnrbac {

using ContractId = Address;

class ChainError : public std::runtime_error {
public:
    enum class Kind { InvalidSignature, NonceError, OutOfGas, Malformed, InvalidConfig };

    ChainError(Kind kind, const std::string& what) : std::runtime_error{what}, m_kind{kind} {}
    Kind kind() const { return m_kind; }

private:
    Kind m_kind;
};

struct Transaction {
    Address from;
    PublicKey sender_key;
    //! Target contract; empty for a deployment.
    std::optional<Address> to;
    FunctionCall call;
    std::uint64_t nonce{0};
    Gas gas_limit{0};
    double gas_price_eth{0};
    Signature signature;

    //! Canonical bytes covered by the signature (every field but the signature).
    Bytes signing_payload() const;
    Bytes encode() const;
    Hash256 hash() const;
    static Transaction decode(Decoder& dec);

    bool operator==(const Transaction&) const = default;
};

Transaction make_transaction(const KeyPair& sender, std::optional<Address> to, FunctionCall call,
                             std::uint64_t nonce, Gas gas_limit, double gas_price_eth);

struct Block {
    std::uint64_t height{0};
    Hash256 prev_hash{};
    //! Simulated seconds since genesis.
    double timestamp{0};
    Hash256 tx_root{};
    std::vector<Transaction> transactions;
    Address miner;
    std::uint64_t pow_nonce{0};
    Hash256 hash{};

    Bytes header_bytes() const;
    Hash256 compute_hash() const;
    //! Full canonical serialization, including the stored hash.
    Bytes serialize() const;
    static Block deserialize(std::span<const std::uint8_t> bytes);

    bool operator==(const Block&) const = default;
};

/**
 * Merkle root over transaction hashes with leaf/node domain separation. An
 * odd node is carried up unchanged instead of being paired with itself.
 */
Hash256 merkle_root(std::span<const Transaction> txs);

struct Receipt {
    Hash256 tx_hash{};
    std::uint64_t block_height{0};
    std::optional<RevertReason> revert;
    Gas gas_used{0};
    Bytes return_value;

    bool success() const { return !revert.has_value(); }
};

struct MiningConfig {
    std::uint32_t num_miners{1};
    double hashrate_per_miner{1e5};
    //! Expected hashes per block; with the defaults one miner needs 10 s on average.
    double difficulty{1e6};
    //! Propagation and validation overhead added to every block interval.
    double overhead_floor{1.0};
    std::uint64_t rng_seed{1};
    //! Leading zero bits every block hash must carry.
    unsigned target_zero_bits{8};

    //! Throws ChainError(InvalidConfig) unless every parameter is strictly positive.
    void validate() const;
    double block_rate() const { return num_miners * hashrate_per_miner / difficulty; }
};

bool meets_target(const Hash256& hash, unsigned zero_bits);

/**
 * Samples block intervals from the race model
 * T = Exp(num_miners * hashrate / difficulty) + overhead_floor.
 * Uses inverse-transform sampling, so two samplers with the same seed draw the
 * same uniforms regardless of miner count.
 */
class BlockTimeSampler {
public:
    explicit BlockTimeSampler(const MiningConfig& config);
    double next();

private:
    std::mt19937_64 m_rng;
    double m_rate;
    double m_floor;
};

std::vector<double> simulate_block_times(const MiningConfig& config, std::size_t num_blocks);

struct MinedBlock {
    Block block;
    std::vector<Receipt> receipts;
};

/**
 * Single-writer ledger: an append-only block list, a mempool, and the state of
 * every deployed contract. Not internally synchronized.
 */
class Ledger {
public:
    static Ledger init_genesis(const MiningConfig& config, GasSchedule schedule = {});

    //! Validates and queues a transaction; returns its hash.
    Hash256 submit_transaction(Transaction tx);
    MinedBlock mine_next_block();

    const std::vector<Block>& blocks() const { return m_blocks; }
    std::uint64_t height() const { return m_blocks.back().height; }
    double now() const { return m_blocks.back().timestamp; }
    std::size_t mempool_size() const { return m_mempool.size(); }
    //! Next nonce the sender must use, counting mempool entries.
    std::uint64_t next_nonce(const Address& sender) const;

    const Receipt* receipt(const Hash256& tx_hash) const;
    const ContractState* contract(const ContractId& id) const;
    const std::map<ContractId, ContractState>& contracts() const { return m_contracts; }

    const MiningConfig& config() const { return m_config; }
    const GasSchedule& schedule() const { return m_schedule; }
    const std::vector<Address>& miners() const { return m_miners; }

    //! One JSON object per line per block, with transactions and receipts.
    std::string dump_jsonl() const;

private:
    Ledger(const MiningConfig& config, GasSchedule schedule);

    Block seal(Block block);
    Receipt execute(const Transaction& tx, std::uint64_t height);

    MiningConfig m_config;
    GasSchedule m_schedule;
    BlockTimeSampler m_block_times;
    std::mt19937_64 m_rng;
    std::vector<Address> m_miners;
    std::vector<Block> m_blocks;
    std::vector<Transaction> m_mempool;
    std::map<Address, std::uint64_t> m_confirmed_nonces;
    std::map<Address, std::uint64_t> m_pending_nonces;
    std::map<ContractId, ContractState> m_contracts;
    std::map<Hash256, Receipt> m_receipts;
};

//! Contract address for a deployment by sender at nonce.
ContractId contract_address(const Address& sender, std::uint64_t nonce);

/**
 * True iff every block recomputes to its stored hash, meets the target,
 * commits to its transactions, links to its predecessor with strictly
 * increasing height and timestamp, and carries only validly signed
 * transactions. Block 0 must have an all-zero prev_hash.
 */
bool verify_chain(std::span<const Block> blocks, unsigned target_zero_bits);
bool verify_chain(const Ledger& ledger);

/** Signs call with the sender's next nonce and a gas limit equal to its metered cost, then submits it. */
Hash256 send_call(Ledger& ledger, const KeyPair& sender, std::optional<Address> to, FunctionCall call);

} // namespace dosnrbac
