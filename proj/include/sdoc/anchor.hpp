#pragma once

// Digest registries with the semantics of the on-chain anchor contract:
// store() records the current block (or sequence) number the first time a
// digest is seen and never changes it afterwards.

#include "sdoc/hash.hpp"
#include "sdoc/proof.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>

namespace sdoc {

/// Read side of a registry. Verification only ever needs this.
class AnchorReader {
public:
    virtual ~AnchorReader() = default;

    /// Block number of the first store of `digest`, or 0 if never stored.
    virtual std::uint64_t get_stored(const Digest& digest) const = 0;

    virtual bool is_stored(const Digest& digest) const { return get_stored(digest) > 0; }

    /// Identification for proof objects; `block` is left 0.
    virtual AnchorSpec describe() const = 0;
};

class Anchor : public AnchorReader {
public:
    /// Returns whether the digest was already stored. Idempotent.
    virtual bool store(const Digest& digest) = 0;
};

/// Local registry: an append-only journal of `hex64 SP seq LF` records.
/// The sequence number stands in for the block number and starts at 1.
///
/// Stores are serialized within the process by a mutex and across processes
/// by an advisory file lock; records appended by other processes are picked
/// up before each store and on lookup misses.
class JournalAnchor final : public Anchor {
public:
    /// Opens or creates the journal. Throws anchor_io on unreadable or
    /// corrupt journals.
    explicit JournalAnchor(std::filesystem::path path);
    ~JournalAnchor() override;

    JournalAnchor(const JournalAnchor&) = delete;
    JournalAnchor& operator=(const JournalAnchor&) = delete;

    bool store(const Digest& digest) override;
    std::uint64_t get_stored(const Digest& digest) const override;
    AnchorSpec describe() const override;

    std::size_t size() const;
    const std::filesystem::path& path() const noexcept { return path_; }

private:
    void refresh_locked() const;

    std::filesystem::path path_;
    int fd_ = -1;
    mutable std::shared_mutex mutex_;
    mutable std::unordered_map<Digest, std::uint64_t> index_;
    mutable std::uint64_t last_seq_ = 0;
    mutable std::uint64_t consumed_ = 0; // bytes of the journal already indexed
};

struct EvmConfig {
    std::string url;              // JSON-RPC endpoint, http(s)://host:port[/path]
    std::string contract_address; // 0x-prefixed, 20 bytes
    std::string network = "devchain";
    /// secp256k1 key (64 hex) used to sign store transactions; when absent the
    /// node's first unlocked account sends them.
    std::optional<std::string> private_key_hex;
    std::chrono::milliseconds receipt_timeout{60000};
    std::chrono::milliseconds poll_interval{250};
};

/// Registry backed by the anchor contract over Ethereum JSON-RPC.
class EvmAnchor final : public Anchor {
public:
    explicit EvmAnchor(EvmConfig config);
    ~EvmAnchor() override;

    bool store(const Digest& digest) override;
    std::uint64_t get_stored(const Digest& digest) const override;
    bool is_stored(const Digest& digest) const override;
    AnchorSpec describe() const override;

    /// 0x-prefixed address that sends store transactions.
    std::string sender() const;

private:
    struct Rpc;
    EvmConfig config_;
    std::unique_ptr<Rpc> rpc_;
};

/// `locator` is a URL (EVM backend, contract from `contract_address`) or a
/// filesystem path (journal backend). ANCHOR_PRIVKEY supplies the EVM signing
/// key when set.
std::unique_ptr<Anchor> open_anchor(std::string_view locator, std::string_view contract_address = {},
                                    std::string_view network = {});

bool is_url(std::string_view locator) noexcept;

} // namespace sdoc
