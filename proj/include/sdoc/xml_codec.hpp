#pragma once

#include "sdoc/document.hpp"

#include <string>
#include <string_view>

namespace sdoc {

/// Serializes a container stanza.
///
/// Canonical mode (pretty = false) emits no whitespace between elements and
/// orders attributes algo, sig, pubkey, salt. Hidden nodes become
/// `<digest>` elements holding lowercase hex. Pretty mode indents by two
/// spaces per level and ends with a newline; both forms parse to the same tree.
std::string to_xml(const DocNode& root, bool pretty = false);

/// Parses a container stanza produced by to_xml (or any equivalent XML).
///
/// Elements with a salt attribute are leaves, `<digest>` elements are hidden
/// nodes, everything else is a container. Comments, processing instructions,
/// CDATA, DTDs and namespace prefixes are rejected. An XML declaration and
/// surrounding whitespace are accepted.
DocNode from_xml(std::string_view text);

} // namespace sdoc
