#pragma once

// Digests of document trees.
//
//   leaf       h'(<TAG salt="SALT">ESC(TEXT)</TAG>)
//   hidden     the stored digest, unchanged
//   container  D = h'(digest(child_1) || ... || digest(child_n))
//              and, when signed, h'(D || pubkey || algo_id (u16 BE) || sig)
//
// Container tags are not hashed. Hiding any node behind its own digest leaves
// every ancestor digest unchanged, which is what makes redaction verifiable.

#include "sdoc/document.hpp"

#include <string>

namespace sdoc {

/// Exact bytes hashed for a leaf. Only &, < and > are escaped in the text.
std::string canonical_leaf(const Leaf& leaf);

Digest leaf_digest(const Leaf& leaf);

/// D: the digest of the container ignoring any signature block.
Digest unsigned_digest(const Container& c);

/// Binds a signature block to D.
Digest signed_digest(const Digest& unsigned_d, const SignatureBlock& sig);

Digest container_digest(const Container& c);

Digest node_digest(const DocNode& node);

} // namespace sdoc
