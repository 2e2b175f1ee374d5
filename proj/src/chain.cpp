#include <dosnrbac/chain.hpp>

#include <json.hpp>

#include <cmath>
#include <sstream>

namespace dosnrbac {

Bytes Transaction::signing_payload() const
{
    Encoder enc;
    enc.put_string("dosnrbac.tx").put(from.bytes).put(sender_key.bytes);
    if (to) {
        enc.put(to->bytes);
    } else {
        enc.put_bytes({});
    }
    encode_call(enc, call);
    enc.put_u64(nonce).put_u64(gas_limit).put_f64(gas_price_eth);
    return std::move(enc).bytes();
}

Bytes Transaction::encode() const
{
    Encoder enc;
    enc.put_bytes(signing_payload()).put_bytes(signature.bytes);
    return std::move(enc).bytes();
}

Hash256 Transaction::hash() const
{
    return sha3_256(encode());
}

Transaction Transaction::decode(Decoder& outer)
{
    const Bytes payload = outer.get_bytes();
    Transaction tx;
    tx.signature.bytes = outer.get_bytes();

    Decoder dec{payload};
    if (dec.get_string() != "dosnrbac.tx") throw DecodeError("bad transaction domain tag");
    tx.from = Address{dec.get<Address::size>()};
    tx.sender_key = PublicKey{dec.get<PublicKey::size>()};
    const Bytes to = dec.get_bytes();
    if (to.size() == Address::size) {
        Address a;
        std::copy(to.begin(), to.end(), a.bytes.begin());
        tx.to = a;
    } else if (!to.empty()) {
        throw DecodeError("bad transaction target");
    }
    tx.call = decode_call(dec);
    tx.nonce = dec.get_u64();
    tx.gas_limit = dec.get_u64();
    tx.gas_price_eth = dec.get_f64();
    if (!dec.done()) throw DecodeError("trailing bytes in transaction");
    return tx;
}

Transaction make_transaction(const KeyPair& sender, std::optional<Address> to, FunctionCall call,
                             std::uint64_t nonce, Gas gas_limit, double gas_price_eth)
{
    Transaction tx{sender.address(), sender.public_key(), to, std::move(call), nonce, gas_limit, gas_price_eth, {}};
    tx.signature = sign_message(sender.private_key(), tx.signing_payload());
    return tx;
}

Bytes Block::header_bytes() const
{
    Encoder enc;
    enc.put_string("dosnrbac.block")
        .put_u64(height)
        .put(prev_hash)
        .put_f64(timestamp)
        .put(tx_root)
        .put_u64(transactions.size())
        .put(miner.bytes)
        .put_u64(pow_nonce);
    return std::move(enc).bytes();
}

Hash256 Block::compute_hash() const
{
    return sha3_256(header_bytes());
}

Bytes Block::serialize() const
{
    Encoder enc;
    enc.put_bytes(header_bytes());
    enc.put_u64(transactions.size());
    for (const auto& tx : transactions) enc.put_bytes(tx.encode());
    enc.put(hash);
    return std::move(enc).bytes();
}

Block Block::deserialize(std::span<const std::uint8_t> bytes)
{
    Decoder outer{bytes};
    const Bytes header = outer.get_bytes();
    Block b;
    Decoder dec{header};
    if (dec.get_string() != "dosnrbac.block") throw DecodeError("bad block domain tag");
    b.height = dec.get_u64();
    b.prev_hash = dec.get<32>();
    b.timestamp = dec.get_f64();
    b.tx_root = dec.get<32>();
    const std::uint64_t header_tx_count = dec.get_u64();
    b.miner = Address{dec.get<Address::size>()};
    b.pow_nonce = dec.get_u64();
    if (!dec.done()) throw DecodeError("trailing bytes in block header");

    const std::uint64_t tx_count = outer.get_u64();
    if (tx_count != header_tx_count) throw DecodeError("transaction count mismatch");
    for (std::uint64_t i = 0; i < tx_count; ++i) {
        const Bytes raw = outer.get_bytes();
        Decoder tx_dec{raw};
        b.transactions.push_back(Transaction::decode(tx_dec));
        if (!tx_dec.done()) throw DecodeError("trailing bytes after transaction");
    }
    b.hash = outer.get<32>();
    if (!outer.done()) throw DecodeError("trailing bytes in block");
    return b;
}

Hash256 merkle_root(std::span<const Transaction> txs)
{
    if (txs.empty()) return Hash256{};
    std::vector<Hash256> level;
    level.reserve(txs.size());
    for (const auto& tx : txs) {
        Bytes leaf{0x00};
        const Hash256 h = tx.hash();
        leaf.insert(leaf.end(), h.begin(), h.end());
        level.push_back(sha3_256(leaf));
    }
    while (level.size() > 1) {
        std::vector<Hash256> next;
        for (std::size_t i = 0; i < level.size(); i += 2) {
            if (i + 1 == level.size()) {
                next.push_back(level[i]);
                continue;
            }
            Bytes node{0x01};
            node.insert(node.end(), level[i].begin(), level[i].end());
            node.insert(node.end(), level[i + 1].begin(), level[i + 1].end());
            next.push_back(sha3_256(node));
        }
        level = std::move(next);
    }
    return level.front();
}

void MiningConfig::validate() const
{
    const auto bad = [](const char* what) {
        return ChainError(ChainError::Kind::InvalidConfig, std::string{"mining config: "} + what + " must be positive");
    };
    if (num_miners < 1) throw bad("num_miners");
    if (!(hashrate_per_miner > 0) || !std::isfinite(hashrate_per_miner)) throw bad("hashrate_per_miner");
    if (!(difficulty > 0) || !std::isfinite(difficulty)) throw bad("difficulty");
    if (!(overhead_floor > 0) || !std::isfinite(overhead_floor)) throw bad("overhead_floor");
    if (rng_seed == 0) throw bad("rng_seed");
    if (target_zero_bits > 24) {
        throw ChainError(ChainError::Kind::InvalidConfig, "mining config: target_zero_bits above 24 is impractical");
    }
}

bool meets_target(const Hash256& hash, unsigned zero_bits)
{
    for (std::size_t i = 0; i < hash.size() && zero_bits > 0; ++i) {
        const unsigned bits = zero_bits >= 8 ? 8 : zero_bits;
        const auto mask = static_cast<std::uint8_t>(0xff << (8 - bits));
        if ((hash[i] & mask) != 0) return false;
        zero_bits -= bits;
    }
    return true;
}

BlockTimeSampler::BlockTimeSampler(const MiningConfig& config)
    : m_rng{config.rng_seed}, m_rate{config.block_rate()}, m_floor{config.overhead_floor}
{
    config.validate();
}

double BlockTimeSampler::next()
{
    // 53 random bits give a uniform u in [0, 1).
    const double u = static_cast<double>(m_rng() >> 11) * 0x1.0p-53;
    return -std::log1p(-u) / m_rate + m_floor;
}

std::vector<double> simulate_block_times(const MiningConfig& config, std::size_t num_blocks)
{
    if (num_blocks < 1) throw ChainError(ChainError::Kind::InvalidConfig, "num_blocks must be at least 1");
    BlockTimeSampler sampler{config};
    std::vector<double> out(num_blocks);
    for (auto& t : out) t = sampler.next();
    return out;
}

ContractId contract_address(const Address& sender, std::uint64_t nonce)
{
    Encoder enc;
    enc.put_string("dosnrbac.contract").put(sender.bytes).put_u64(nonce);
    const Hash256 digest = sha3_256(enc.bytes());
    ContractId id;
    std::copy(digest.end() - Address::size, digest.end(), id.bytes.begin());
    return id;
}

Ledger::Ledger(const MiningConfig& config, GasSchedule schedule)
    : m_config{config},
      m_schedule{std::move(schedule)},
      m_block_times{config},
      m_rng{derive_seed(config.rng_seed, "ledger")}
{
    for (std::uint32_t i = 0; i < config.num_miners; ++i) {
        m_miners.push_back(generate_keypair(derive_seed(config.rng_seed, "miner", i)).address());
    }
}

Ledger Ledger::init_genesis(const MiningConfig& config, GasSchedule schedule)
{
    config.validate();
    Ledger ledger{config, std::move(schedule)};
    Block genesis;
    genesis.pow_nonce = ledger.m_rng();
    ledger.m_blocks.push_back(ledger.seal(std::move(genesis)));
    return ledger;
}

Block Ledger::seal(Block block)
{
    block.tx_root = merkle_root(block.transactions);
    // Simulated PoW: the search starts at an rng-chosen nonce against a small target.
    for (;;) {
        block.hash = block.compute_hash();
        if (meets_target(block.hash, m_config.target_zero_bits)) return block;
        ++block.pow_nonce;
    }
}

std::uint64_t Ledger::next_nonce(const Address& sender) const
{
    if (const auto it = m_pending_nonces.find(sender); it != m_pending_nonces.end()) return it->second;
    if (const auto it = m_confirmed_nonces.find(sender); it != m_confirmed_nonces.end()) return it->second;
    return 0;
}

Hash256 Ledger::submit_transaction(Transaction tx)
{
    if (tx.call.is_deploy() == tx.to.has_value()) {
        throw ChainError(ChainError::Kind::Malformed, "deployments must have no target and calls must have one");
    }
    if (derive_address(tx.sender_key) != tx.from || !verify_signature(tx.sender_key, tx.signing_payload(), tx.signature)) {
        throw ChainError(ChainError::Kind::InvalidSignature, "transaction signature does not verify for sender");
    }
    const std::uint64_t expected = next_nonce(tx.from);
    if (tx.nonce != expected) {
        throw ChainError(ChainError::Kind::NonceError,
                         "nonce " + std::to_string(tx.nonce) + " but sender expects " + std::to_string(expected));
    }
    const Gas intrinsic = meter(m_schedule, tx.call);
    if (tx.gas_limit < intrinsic) {
        throw ChainError(ChainError::Kind::OutOfGas, "gas limit " + std::to_string(tx.gas_limit) +
                                                         " below intrinsic cost " + std::to_string(intrinsic));
    }
    const Hash256 h = tx.hash();
    m_pending_nonces[tx.from] = expected + 1;
    m_mempool.push_back(std::move(tx));
    return h;
}

Receipt Ledger::execute(const Transaction& tx, std::uint64_t height)
{
    Receipt r{tx.hash(), height, std::nullopt, meter(m_schedule, tx.call), {}};
    if (tx.call.is_deploy()) {
        const ContractId id = contract_address(tx.from, tx.nonce);
        m_contracts.insert_or_assign(id, deploy(tx.from));
        r.return_value.assign(id.bytes.begin(), id.bytes.end());
        return r;
    }
    const auto it = m_contracts.find(*tx.to);
    if (it == m_contracts.end()) {
        r.revert = RevertReason::NoContract;
        return r;
    }
    CallResult result = apply(it->second, tx.from, tx.call, height);
    r.revert = result.revert;
    r.return_value = std::move(result.return_value);
    it->second = std::move(result.state);
    return r;
}

MinedBlock Ledger::mine_next_block()
{
    Block block;
    block.height = height() + 1;
    block.prev_hash = m_blocks.back().hash;
    block.timestamp = now() + m_block_times.next();
    block.miner = m_miners[std::uniform_int_distribution<std::size_t>{0, m_miners.size() - 1}(m_rng)];
    block.pow_nonce = m_rng();
    block.transactions = std::move(m_mempool);
    m_mempool.clear();
    m_pending_nonces.clear();

    std::vector<Receipt> receipts;
    receipts.reserve(block.transactions.size());
    for (const auto& tx : block.transactions) {
        receipts.push_back(execute(tx, block.height));
        m_confirmed_nonces[tx.from] = tx.nonce + 1;
    }

    m_blocks.push_back(seal(std::move(block)));
    for (const auto& r : receipts) m_receipts.insert_or_assign(r.tx_hash, r);
    return MinedBlock{m_blocks.back(), std::move(receipts)};
}

const Receipt* Ledger::receipt(const Hash256& tx_hash) const
{
    const auto it = m_receipts.find(tx_hash);
    return it == m_receipts.end() ? nullptr : &it->second;
}

const ContractState* Ledger::contract(const ContractId& id) const
{
    const auto it = m_contracts.find(id);
    return it == m_contracts.end() ? nullptr : &it->second;
}

std::string Ledger::dump_jsonl() const
{
    std::ostringstream out;
    for (const auto& b : m_blocks) {
        nlohmann::ordered_json txs = nlohmann::ordered_json::array();
        nlohmann::ordered_json receipts = nlohmann::ordered_json::array();
        for (const auto& tx : b.transactions) {
            const Hash256 h = tx.hash();
            txs.push_back({
                {"hash", to_hex(h)},
                {"from", tx.from.hex()},
                {"to", tx.to ? nlohmann::ordered_json(tx.to->hex()) : nlohmann::ordered_json(nullptr)},
                {"function", std::string{tx.call.name()}},
                {"nonce", tx.nonce},
                {"gas_limit", tx.gas_limit},
                {"payload_bits", tx.call.payload_bits},
                {"signature", tx.signature.hex()},
            });
            if (const Receipt* r = receipt(h)) {
                receipts.push_back({
                    {"tx_hash", to_hex(r->tx_hash)},
                    {"status", r->success() ? std::string{"Success"} : std::string{to_string(*r->revert)}},
                    {"gas_used", r->gas_used},
                    {"return_value", to_hex(r->return_value)},
                });
            }
        }
        nlohmann::ordered_json line = {
            {"height", b.height},
            {"hash", to_hex(b.hash)},
            {"prev_hash", to_hex(b.prev_hash)},
            {"timestamp", b.timestamp},
            {"miner", b.miner.hex()},
            {"pow_nonce", b.pow_nonce},
            {"tx_root", to_hex(b.tx_root)},
            {"transactions", txs},
            {"receipts", receipts},
        };
        out << line.dump() << '\n';
    }
    return out.str();
}

bool verify_chain(std::span<const Block> blocks, unsigned target_zero_bits)
{
    if (blocks.empty()) return false;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const Block& b = blocks[i];
        if (b.height != i || !std::isfinite(b.timestamp)) return false;
        if (i == 0) {
            if (b.prev_hash != Hash256{}) return false;
        } else if (b.prev_hash != blocks[i - 1].hash || !(b.timestamp > blocks[i - 1].timestamp)) {
            return false;
        }
        if (merkle_root(b.transactions) != b.tx_root) return false;
        if (b.compute_hash() != b.hash || !meets_target(b.hash, target_zero_bits)) return false;
        for (const auto& tx : b.transactions) {
            if (derive_address(tx.sender_key) != tx.from ||
                !verify_signature(tx.sender_key, tx.signing_payload(), tx.signature)) {
                return false;
            }
        }
    }
    return true;
}

bool verify_chain(const Ledger& ledger)
{
    return verify_chain(ledger.blocks(), ledger.config().target_zero_bits);
}

Hash256 send_call(Ledger& ledger, const KeyPair& sender, std::optional<Address> to, FunctionCall call)
{
    const Gas limit = meter(ledger.schedule(), call);
    return ledger.submit_transaction(make_transaction(sender, to, std::move(call), ledger.next_nonce(sender.address()),
                                                      limit, ledger.schedule().gas_price_eth));
}

} // namespace dosnrbac
