#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sdoc {

enum class Errc {
    encoding,             // tag/salt/text outside the canonical alphabet
    malformed_signature,  // signature block violates its algorithm's shape
    xml_syntax,
    xml_unsupported,      // comments, PIs, DTDs, namespaces
    invalid_digest_hex,
    unknown_algorithm,
    missing_salt,
    mixed_content,
    json_syntax,
    json_unsupported,     // arrays, numbers, booleans, null as content
    json_bad_member,      // a reserved member with the wrong shape
    orphan_salt,          // salt entry naming no disclosed leaf
    duplicate_member,
    path_not_found,
    path_hidden,
    empty_batch,
    index_out_of_range,
    anchor_io,
    anchor_rpc,
    entropy,
    key_format,
    invalid_argument,
};

std::string_view errc_name(Errc c) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace sdoc
