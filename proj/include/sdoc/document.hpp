#pragma once

#include "sdoc/hash.hpp"
#include "sdoc/hex.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace sdoc {

/// Registered signature algorithm. Byte lengths are exact.
struct AlgorithmInfo {
    std::string_view name;
    std::uint16_t id;
    std::size_t sig_len;
    std::size_t pubkey_len;
    std::uint8_t pubkey_prefix; // first byte of an encoded public key
};

inline constexpr std::string_view default_algorithm = "ecdsa-p256v1";

const AlgorithmInfo* find_algorithm(std::string_view name) noexcept;
const AlgorithmInfo* find_algorithm(std::uint16_t id) noexcept;
std::span<const AlgorithmInfo> registered_algorithms() noexcept;

struct SignatureBlock {
    std::string algo;
    std::uint16_t algo_id = 0;
    Bytes sig;
    Bytes pubkey;

    friend bool operator==(const SignatureBlock&, const SignatureBlock&) = default;
};

/// Builds a block for a registered algorithm from hex attribute values.
/// Throws unknown_algorithm or malformed_signature.
SignatureBlock make_signature_block(std::string_view algo, std::string_view sig_hex, std::string_view pubkey_hex);

/// Throws malformed_signature unless the block matches its registry entry.
void validate_signature_block(const SignatureBlock& block);

struct DocNode;

struct Leaf {
    std::string tag;
    std::string salt;
    std::string text;

    friend bool operator==(const Leaf&, const Leaf&) = default;
};

struct Container {
    std::string tag;
    std::vector<DocNode> children;
    std::optional<SignatureBlock> sig;

    friend bool operator==(const Container&, const Container&) = default;
};

/// A part withheld from disclosure, represented only by its digest.
struct Hidden {
    Digest digest;

    friend bool operator==(const Hidden&, const Hidden&) = default;
};

struct DocNode {
    std::variant<Leaf, Container, Hidden> value;

    DocNode(Leaf l) : value(std::move(l)) {}
    DocNode(Container c) : value(std::move(c)) {}
    DocNode(Hidden h) : value(h) {}

    const Leaf* leaf() const noexcept { return std::get_if<Leaf>(&value); }
    const Container* container() const noexcept { return std::get_if<Container>(&value); }
    const Hidden* hidden() const noexcept { return std::get_if<Hidden>(&value); }
    Leaf* leaf() noexcept { return std::get_if<Leaf>(&value); }
    Container* container() noexcept { return std::get_if<Container>(&value); }
    Hidden* hidden() noexcept { return std::get_if<Hidden>(&value); }

    /// Tag of a leaf or container; empty for hidden nodes.
    std::string_view tag() const noexcept;

    friend bool operator==(const DocNode&, const DocNode&) = default;
};

// Element name reserved for hidden parts in the XML form.
inline constexpr std::string_view hidden_tag = "digest";

bool is_valid_tag(std::string_view tag) noexcept;
bool is_valid_salt(std::string_view salt) noexcept;
/// Valid UTF-8 with no control characters other than tab, LF and CR.
bool is_valid_text(std::string_view text) noexcept;

/// Checks every structural invariant of the tree. Throws encoding,
/// malformed_signature or invalid_argument.
void validate(const DocNode& node);

inline constexpr std::size_t salt_length = 20;
inline constexpr std::string_view salt_alphabet =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789.!@-";

/// Fresh random salt of salt_length characters from salt_alphabet.
std::string generate_salt();

} // namespace sdoc
