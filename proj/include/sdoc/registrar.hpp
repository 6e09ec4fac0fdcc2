#pragma once

// Issuance, batch registration and verification workflows.

#include "sdoc/anchor.hpp"
#include "sdoc/proof.hpp"
#include "sdoc/signing.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sdoc {

/// Salts every leaf of plain content JSON, signs the containers named in
/// `nested_keys` (dotted paths, innermost first) and then the root with
/// `issuer`. Returns canonical document JSON.
std::string issue_document(std::string_view plain_json, const KeyPair& issuer,
                           const std::map<std::string, KeyPair>& nested_keys = {});

/// Anchors one Merkle root over the signed-document digests of `docs` and
/// returns each document with its proof embedded, in input order.
///
/// Every document is parsed and checked before anything is stored; the root
/// is stored before any proof is returned. Throws on the first bad document
/// (message names its index) or on anchor failure.
std::vector<std::string> register_batch(std::span<const std::string> docs, Anchor& anchor);

struct ProofCheck {
    bool present = false;
    Digest document_digest; // signed-document digest the proof starts from
    Digest root;            // root reproduced from the subtree
    std::uint64_t anchored_block = 0;
    bool anchored = false;
    AnchorSpec claimed; // as written in the document
};

struct VerificationReport {
    std::vector<StanzaVerdict> signatures; // root first; only signed nested stanzas
    ProofCheck proof;
    bool accepted = false;
    std::vector<std::string> reasons;  // why it was rejected
    std::vector<std::string> warnings; // informational, never affect acceptance
    std::string error;                 // parse error text for malformed input

    std::string to_json() const;
    std::string to_text() const;
};

/// Checks every disclosed signature and, when a proof is embedded, that the
/// reproduced Merkle root is anchored. Only reads from `anchor`; the issuer
/// takes no part. Never throws: every failure is a report entry.
VerificationReport verify_document(std::string_view doc, const AnchorReader& anchor);

} // namespace sdoc
