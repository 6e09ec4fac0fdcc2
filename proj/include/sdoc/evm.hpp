#pragma once

// Ethereum encodings needed to talk to the anchor contract: Keccak-256,
// RLP, ABI calls taking one uint256, and EIP-155 legacy transactions.

#include "sdoc/ecdsa.hpp"
#include "sdoc/hash.hpp"
#include "sdoc/hex.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace sdoc::evm {

using Hash256 = std::array<std::uint8_t, 32>;
using Address = std::array<std::uint8_t, 20>;

/// Original Keccak (0x01 padding), as used by Ethereum; not SHA3-256.
Hash256 keccak256(std::span<const std::uint8_t> data);
Hash256 keccak256(std::string_view data);

/// First four bytes of keccak256(signature), e.g. "store(uint256)".
std::array<std::uint8_t, 4> selector(std::string_view signature);

/// selector || 32-byte big-endian argument. The digest bytes are the uint256.
Bytes encode_uint256_call(std::string_view signature, const Digest& argument);

Address address_of(std::span<const std::uint8_t> uncompressed_pubkey);
std::string address_hex(const Address& a); // 0x-prefixed lowercase
/// Parses 0x-prefixed (or bare) 40 hex digits. Throws invalid_argument.
Address parse_address(std::string_view text);

namespace rlp {

struct Item;
using List = std::vector<Item>;
struct Item {
    std::variant<Bytes, List> value;
};

Bytes encode(const Item& item);
Bytes encode_bytes(std::span<const std::uint8_t> bytes);
Bytes encode_list(std::span<const Bytes> encoded_items);
/// Minimal big-endian bytes; zero encodes as the empty string.
Bytes scalar(std::uint64_t v);
Bytes scalar(std::span<const std::uint8_t> big_endian);

/// Throws invalid_argument on malformed or non-canonical input.
Item decode(std::span<const std::uint8_t> data);

} // namespace rlp

struct LegacyTx {
    std::uint64_t nonce = 0;
    Bytes gas_price;  // big-endian
    std::uint64_t gas = 0;
    Address to{};
    Bytes value;      // big-endian
    Bytes data;
};

/// EIP-155 signing hash: keccak(rlp([nonce, gasPrice, gas, to, value, data, chainId, 0, 0])).
Hash256 signing_hash(const LegacyTx& tx, std::uint64_t chain_id);

/// Fully signed raw transaction with v = chainId * 2 + 35 + parity and low s.
Bytes sign_legacy_tx(const LegacyTx& tx, std::uint64_t chain_id, const ecdsa::Scalar& private_key);

/// Parses an 0x-prefixed JSON-RPC quantity or data string.
Bytes parse_data(std::string_view hex);
std::uint64_t parse_quantity(std::string_view hex);
std::string quantity_hex(std::uint64_t v);
std::string data_hex(std::span<const std::uint8_t> bytes);

} // namespace sdoc::evm
