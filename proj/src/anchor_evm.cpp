#include "httplib.h"
#include "json.hpp"

#include "sdoc/anchor.hpp"
#include "sdoc/error.hpp"
#include "sdoc/evm.hpp"

#include <mutex>
#include <thread>

namespace sdoc {

using json = nlohmann::json;

namespace {

constexpr std::string_view sig_store = "store(uint256)";
constexpr std::string_view sig_get_stored = "getStored(uint256)";
constexpr std::string_view sig_is_stored = "isStored(uint256)";

std::uint64_t word_to_u64(const Bytes& word)
{
    if (word.size() != 32)
        throw Error(Errc::anchor_rpc, "contract returned " + std::to_string(word.size()) + " bytes, expected 32");
    for (std::size_t i = 0; i < 24; ++i)
        if (word[i] != 0)
            throw Error(Errc::anchor_rpc, "block number does not fit in 64 bits");
    std::uint64_t v = 0;
    for (std::size_t i = 24; i < 32; ++i)
        v = v << 8 | word[i];
    return v;
}

} // namespace

struct EvmAnchor::Rpc {
    std::unique_ptr<httplib::Client> client;
    std::string path = "/";
    std::uint64_t next_id = 1;
    std::mutex mutex;

    explicit Rpc(const std::string& url)
    {
        auto scheme_end = url.find("://");
        auto path_start = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
        std::string base = path_start == std::string::npos ? url : url.substr(0, path_start);
        if (path_start != std::string::npos)
            path = url.substr(path_start);
        client = std::make_unique<httplib::Client>(base);
        client->set_connection_timeout(5);
        client->set_read_timeout(30);
    }

    json call(const std::string& method, json params)
    {
        std::lock_guard lock(mutex);
        json req = {{"jsonrpc", "2.0"}, {"id", next_id++}, {"method", method}, {"params", std::move(params)}};
        auto res = client->Post(path, req.dump(), "application/json");
        if (!res)
            throw Error(Errc::anchor_io, "anchor RPC " + method + ": " + httplib::to_string(res.error()));
        if (res->status != 200)
            throw Error(Errc::anchor_io, "anchor RPC " + method + ": HTTP " + std::to_string(res->status));
        json body;
        try {
            body = json::parse(res->body);
        } catch (const json::exception& e) {
            throw Error(Errc::anchor_rpc, "anchor RPC " + method + ": unparseable response");
        }
        if (body.contains("error") && !body["error"].is_null())
            throw Error(Errc::anchor_rpc, "anchor RPC " + method + ": " + body["error"].dump());
        if (!body.contains("result"))
            throw Error(Errc::anchor_rpc, "anchor RPC " + method + ": response has no result");
        return body["result"];
    }
};

EvmAnchor::EvmAnchor(EvmConfig config) : config_(std::move(config))
{
    if (!is_url(config_.url))
        throw Error(Errc::invalid_argument, "EVM anchor needs an http(s) URL");
    evm::parse_address(config_.contract_address);
    if (config_.private_key_hex) {
        auto raw = from_hex(*config_.private_key_hex);
        if (!raw || raw->size() != 32)
            throw Error(Errc::key_format, "ANCHOR_PRIVKEY must be 64 hex characters");
    }
    rpc_ = std::make_unique<Rpc>(config_.url);
}

EvmAnchor::~EvmAnchor() = default;

std::uint64_t EvmAnchor::get_stored(const Digest& digest) const
{
    json tx = {{"to", config_.contract_address},
               {"data", evm::data_hex(evm::encode_uint256_call(sig_get_stored, digest))}};
    return word_to_u64(evm::parse_data(rpc_->call("eth_call", json::array({tx, "latest"})).get<std::string>()));
}

bool EvmAnchor::is_stored(const Digest& digest) const
{
    json tx = {{"to", config_.contract_address},
               {"data", evm::data_hex(evm::encode_uint256_call(sig_is_stored, digest))}};
    return word_to_u64(evm::parse_data(rpc_->call("eth_call", json::array({tx, "latest"})).get<std::string>())) != 0;
}

std::string EvmAnchor::sender() const
{
    if (config_.private_key_hex) {
        ecdsa::Scalar key{};
        auto raw = *from_hex(*config_.private_key_hex);
        std::copy(raw.begin(), raw.end(), key.begin());
        return evm::address_hex(evm::address_of(ecdsa::public_key(ecdsa::Curve::secp256k1, key)));
    }
    json accounts = rpc_->call("eth_accounts", json::array());
    if (!accounts.is_array() || accounts.empty())
        throw Error(Errc::anchor_rpc, "node has no unlocked accounts and ANCHOR_PRIVKEY is not set");
    return accounts[0].get<std::string>();
}

bool EvmAnchor::store(const Digest& digest)
{
    // The contract's return value is not observable from a transaction, so
    // the already-stored answer comes from a read first.
    if (is_stored(digest))
        return true;

    const Bytes data = evm::encode_uint256_call(sig_store, digest);
    const std::string from = sender();
    std::uint64_t gas = 100000;
    try {
        json est = {{"from", from}, {"to", config_.contract_address}, {"data", evm::data_hex(data)}};
        gas = evm::parse_quantity(rpc_->call("eth_estimateGas", json::array({est})).get<std::string>());
        gas += gas / 5;
    } catch (const Error&) {
    }

    std::string tx_hash;
    if (config_.private_key_hex) {
        ecdsa::Scalar key{};
        auto raw = *from_hex(*config_.private_key_hex);
        std::copy(raw.begin(), raw.end(), key.begin());

        evm::LegacyTx tx;
        tx.nonce = evm::parse_quantity(
            rpc_->call("eth_getTransactionCount", json::array({from, "pending"})).get<std::string>());
        tx.gas_price = evm::rlp::scalar(evm::parse_data(rpc_->call("eth_gasPrice", json::array()).get<std::string>()));
        tx.gas = gas;
        tx.to = evm::parse_address(config_.contract_address);
        tx.data = data;
        const std::uint64_t chain_id =
            evm::parse_quantity(rpc_->call("eth_chainId", json::array()).get<std::string>());
        Bytes raw_tx = evm::sign_legacy_tx(tx, chain_id, key);
        tx_hash = rpc_->call("eth_sendRawTransaction", json::array({evm::data_hex(raw_tx)})).get<std::string>();
    } else {
        json tx = {{"from", from},
                   {"to", config_.contract_address},
                   {"data", evm::data_hex(data)},
                   {"gas", evm::quantity_hex(gas)}};
        tx_hash = rpc_->call("eth_sendTransaction", json::array({tx})).get<std::string>();
    }

    const auto deadline = std::chrono::steady_clock::now() + config_.receipt_timeout;
    while (true) {
        json receipt = rpc_->call("eth_getTransactionReceipt", json::array({tx_hash}));
        if (!receipt.is_null()) {
            if (receipt.contains("status") && receipt["status"].is_string() &&
                evm::parse_quantity(receipt["status"].get<std::string>()) != 1)
                throw Error(Errc::anchor_rpc, "store transaction " + tx_hash + " reverted");
            return false;
        }
        if (std::chrono::steady_clock::now() > deadline)
            throw Error(Errc::anchor_io, "no receipt for store transaction " + tx_hash);
        std::this_thread::sleep_for(config_.poll_interval);
    }
}

AnchorSpec EvmAnchor::describe() const
{
    return AnchorSpec{std::string(subsystem_ethereum), config_.network, "BBcAnchor", config_.contract_address, 0};
}

} // namespace sdoc
