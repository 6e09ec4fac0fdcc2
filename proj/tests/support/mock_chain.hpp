#pragma once

// In-process Ethereum JSON-RPC node hosting one anchor contract with the
// store/getStored/isStored semantics. Every accepted transaction mines one
// block. Raw transactions are RLP-decoded and their EIP-155 signatures are
// checked against the expected sender key.

#include "sdoc/ecdsa.hpp"
#include "sdoc/evm.hpp"
#include "sdoc/hex.hpp"

#include "httplib.h"
#include "json.hpp"

#include <atomic>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <thread>

namespace sdoc::testgen {

class MockChain {
public:
    static constexpr std::uint64_t chain_id = 1337;
    static constexpr std::string_view contract = "0x5fbdb2315678afecb367f032d93f642f64180aa3";
    static constexpr std::string_view unlocked = "0xf39fd6e51aad88f6f4ce6ab8827279cfffb92266";

    explicit MockChain(std::optional<ecdsa::Scalar> sender_key = std::nullopt)
    {
        if (sender_key) {
            sender_pub_ = ecdsa::public_key(ecdsa::Curve::secp256k1, *sender_key);
            sender_ = evm::address_hex(evm::address_of(sender_pub_));
        }
        server_.Post("/", [this](const httplib::Request& req, httplib::Response& res) { handle(req, res); });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~MockChain()
    {
        server_.stop();
        thread_.join();
    }

    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

    // Failure injection.
    std::atomic<bool> fail_http{false};
    std::atomic<bool> revert_next{false};
    std::string rpc_error_method; // answers this method with a JSON-RPC error
    int receipt_delay_polls = 1;  // receipt requests answered with null first

    std::uint64_t block() const
    {
        std::lock_guard lock(mutex_);
        return block_;
    }
    std::size_t transactions() const
    {
        std::lock_guard lock(mutex_);
        return tx_count_;
    }
    std::size_t writes_seen() const { return writes_.load(); }

private:
    using json = nlohmann::json;

    static std::string word(std::uint64_t v)
    {
        Bytes w(32, 0);
        for (int i = 0; i < 8; ++i)
            w[31 - i] = static_cast<std::uint8_t>(v >> (8 * i));
        return evm::data_hex(w);
    }

    std::string digest_key(const Bytes& call, std::string_view sig) const
    {
        const auto sel = evm::selector(sig);
        if (call.size() != 36 || !std::equal(sel.begin(), sel.end(), call.begin()))
            return {};
        return to_hex(std::span<const std::uint8_t>(call.data() + 4, 32));
    }

    // Returns an error message, or empty on success.
    std::string execute(const Bytes& data, const std::string& to, std::string& tx_hash, const Bytes& raw)
    {
        if (to != contract)
            return "transaction not sent to the contract";
        auto key = digest_key(data, "store(uint256)");
        if (key.empty())
            return "unknown function";
        ++block_;
        ++tx_count_;
        const bool reverted = revert_next.exchange(false);
        if (!reverted && !stored_.count(key))
            stored_[key] = block_;
        Bytes preimage = raw.empty() ? data : raw;
        for (int i = 0; i < 8; ++i)
            preimage.push_back(static_cast<std::uint8_t>(tx_count_ >> (8 * i)));
        tx_hash = evm::data_hex(evm::keccak256(preimage));
        receipts_[tx_hash] = {block_, reverted, receipt_delay_polls};
        return {};
    }

    std::string check_raw(const Bytes& raw, std::string& tx_hash)
    {
        auto item = evm::rlp::decode(raw);
        auto* list = std::get_if<evm::rlp::List>(&item.value);
        if (!list || list->size() != 9)
            return "raw transaction is not a 9-item list";
        auto field = [&](std::size_t i) -> const Bytes& { return std::get<Bytes>((*list)[i].value); };
        auto u64 = [&](std::size_t i) {
            std::uint64_t v = 0;
            for (auto b : field(i))
                v = v << 8 | b;
            return v;
        };
        evm::LegacyTx tx;
        tx.nonce = u64(0);
        tx.gas_price = field(1);
        tx.gas = u64(2);
        if (field(3).size() != 20)
            return "bad to";
        std::copy(field(3).begin(), field(3).end(), tx.to.begin());
        tx.value = field(4);
        tx.data = field(5);
        const std::uint64_t v = u64(6);
        if (v != chain_id * 2 + 35 && v != chain_id * 2 + 36)
            return "v does not encode the chain id";
        if (tx.nonce != nonces_[sender_])
            return "nonce mismatch";
        if (field(7).size() > 32 || field(8).size() > 32)
            return "bad r/s";
        Bytes sig(64, 0);
        std::copy(field(7).begin(), field(7).end(), sig.begin() + static_cast<long>(32 - field(7).size()));
        std::copy(field(8).begin(), field(8).end(), sig.begin() + static_cast<long>(64 - field(8).size()));
        const auto hash = evm::signing_hash(tx, chain_id);
        if (!ecdsa::verify_digest(ecdsa::Curve::secp256k1, sender_pub_, hash, sig))
            return "signature does not match the sender";
        ++nonces_[sender_];
        return execute(tx.data, evm::address_hex(tx.to), tx_hash, raw);
    }

    json dispatch(const std::string& method, const json& params)
    {
        if (method == rpc_error_method)
            throw std::runtime_error("injected failure");
        if (method == "eth_chainId")
            return evm::quantity_hex(chain_id);
        if (method == "eth_gasPrice")
            return evm::quantity_hex(1000000000);
        if (method == "eth_estimateGas")
            return evm::quantity_hex(45000);
        if (method == "eth_accounts")
            return json::array({unlocked});
        if (method == "eth_blockNumber")
            return evm::quantity_hex(block_);
        if (method == "eth_getTransactionCount")
            return evm::quantity_hex(nonces_[params.at(0).get<std::string>()]);
        if (method == "eth_call") {
            const auto& call = params.at(0);
            if (call.at("to").get<std::string>() != contract)
                return word(0);
            const Bytes data = evm::parse_data(call.at("data").get<std::string>());
            for (std::string_view sig : {"getStored(uint256)", "isStored(uint256)"}) {
                auto key = digest_key(data, sig);
                if (key.empty())
                    continue;
                auto it = stored_.find(key);
                const std::uint64_t block = it == stored_.end() ? 0 : it->second;
                return word(sig.starts_with("is") ? (block > 0) : block);
            }
            throw std::runtime_error("execution reverted");
        }
        if (method == "eth_sendRawTransaction") {
            ++writes_;
            std::string hash;
            auto err = check_raw(evm::parse_data(params.at(0).get<std::string>()), hash);
            if (!err.empty())
                throw std::runtime_error(err);
            return hash;
        }
        if (method == "eth_sendTransaction") {
            ++writes_;
            const auto& tx = params.at(0);
            if (tx.at("from").get<std::string>() != unlocked)
                throw std::runtime_error("account is locked");
            std::string hash;
            auto err = execute(evm::parse_data(tx.at("data").get<std::string>()), tx.at("to").get<std::string>(),
                               hash, {});
            if (!err.empty())
                throw std::runtime_error(err);
            return hash;
        }
        if (method == "eth_getTransactionReceipt") {
            auto it = receipts_.find(params.at(0).get<std::string>());
            if (it == receipts_.end())
                return nullptr;
            if (it->second.delay > 0) {
                --it->second.delay;
                return nullptr;
            }
            return json{{"status", it->second.reverted ? "0x0" : "0x1"},
                        {"blockNumber", evm::quantity_hex(it->second.block)}};
        }
        throw std::runtime_error("method not found: " + method);
    }

    void handle(const httplib::Request& req, httplib::Response& res)
    {
        if (fail_http) {
            res.status = 503;
            return;
        }
        json request = json::parse(req.body);
        json reply = {{"jsonrpc", "2.0"}, {"id", request.at("id")}};
        try {
            std::lock_guard lock(mutex_);
            reply["result"] = dispatch(request.at("method").get<std::string>(), request.value("params", json::array()));
        } catch (const std::exception& e) {
            reply["error"] = {{"code", -32000}, {"message", e.what()}};
        }
        res.set_content(reply.dump(), "application/json");
    }

    struct Receipt {
        std::uint64_t block;
        bool reverted;
        int delay;
    };

    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    mutable std::mutex mutex_;
    std::uint64_t block_ = 0;
    std::size_t tx_count_ = 0;
    std::atomic<std::size_t> writes_{0};
    std::map<std::string, std::uint64_t> stored_;
    std::map<std::string, std::uint64_t> nonces_;
    std::map<std::string, Receipt> receipts_;
    Bytes sender_pub_;
    std::string sender_;
};

} // namespace sdoc::testgen
