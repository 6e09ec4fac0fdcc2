#pragma once

// JSON form of a document.
//
//   {
//     "id": "4445 4558 1689",          leaf (salt in the sibling "salt" object)
//     "digest1": "9c2b...",            hidden part
//     "grades": { ... },               nested container, same rules recursively
//     "salt": { "id": "rGheZ..." },
//     "algo": "...", "sig": "...", "pubkey": "...",
//     "proof": { "spec": {...}, "subtree": [...] }     root only, never hashed
//   }
//
// Member order is semantic: child digests concatenate in that order.

#include "sdoc/document.hpp"
#include "sdoc/proof.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace sdoc {

struct JsonDocument {
    DocNode root;
    std::optional<ProofObject> proof;
};

inline constexpr std::string_view default_root_tag = "document";

/// Throws json_syntax, json_unsupported, json_bad_member, missing_salt,
/// orphan_salt, invalid_digest_hex, unknown_algorithm, malformed_signature
/// or encoding.
JsonDocument json_to_tree(std::string_view text);

/// Canonical JSON: two-space indentation, content members in tree order,
/// hidden parts named digest1, digest2, ... per object, then salt, algo, sig,
/// pubkey, and proof last. Ends with a newline.
std::string tree_to_json(const DocNode& root, const std::optional<ProofObject>& proof = std::nullopt);

/// Builds a tree from plain content JSON (strings and objects only, no
/// reserved members), drawing one fresh salt per leaf from `salt_source`.
DocNode plain_json_to_tree(std::string_view text, const std::function<std::string()>& salt_source);

/// Replaces the member at a dotted path ("grades.math") by its digest.
/// Throws path_not_found, or path_hidden when the member is already hidden.
void hide(DocNode& root, std::string_view path);

/// json_to_tree, hide each path, tree_to_json. The proof is carried over.
std::string redact(std::string_view text, std::span<const std::string> paths);

} // namespace sdoc
