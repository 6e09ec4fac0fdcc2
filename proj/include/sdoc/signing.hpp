#pragma once

#include "sdoc/document.hpp"
#include "sdoc/ecdsa.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace sdoc {

struct KeyPair {
    ecdsa::Scalar private_key{};
    Bytes public_key; // 65 bytes, uncompressed SEC1
};

KeyPair keygen();
KeyPair keypair_from_private(const ecdsa::Scalar& private_key);

/// Attaches a signature over the container's unsigned digest D.
/// Throws unknown_algorithm, or invalid_argument if already signed.
Container sign_container(Container c, const KeyPair& key, std::string_view algo = default_algorithm);

enum class Verdict { valid, invalid, unsigned_stanza };

std::string_view verdict_name(Verdict v) noexcept;

/// Checks the stanza's own signature against D recomputed from whatever is
/// disclosed. Hidden children contribute their digests, so the verdict does
/// not depend on what is hidden. Never throws: a stanza whose content has
/// no canonical serialization is invalid.
Verdict verify_container(const Container& c);

struct StanzaVerdict {
    std::string path; // dotted member path, "" for the root
    Verdict verdict;
};

/// Verdicts for the root and every disclosed nested container, in document
/// order. Unsigned nested containers are omitted.
std::vector<StanzaVerdict> verify_stanzas(const DocNode& root);

/// Writes `<stem>.key` (private scalar hex, mode 0600) and `<stem>.pub`.
void write_key_files(const KeyPair& key, const std::filesystem::path& stem);

/// Reads a private key file; the public key is derived.
KeyPair read_private_key(const std::filesystem::path& file);

/// Reads a public key file: 130 hex characters.
Bytes read_public_key(const std::filesystem::path& file);

} // namespace sdoc
