#include "sdoc/hex.hpp"
#include "sdoc/error.hpp"

namespace sdoc {

std::string_view errc_name(Errc c) noexcept
{
    switch (c) {
    case Errc::encoding: return "encoding";
    case Errc::malformed_signature: return "malformed_signature";
    case Errc::xml_syntax: return "xml_syntax";
    case Errc::xml_unsupported: return "xml_unsupported";
    case Errc::invalid_digest_hex: return "invalid_digest_hex";
    case Errc::unknown_algorithm: return "unknown_algorithm";
    case Errc::missing_salt: return "missing_salt";
    case Errc::mixed_content: return "mixed_content";
    case Errc::json_syntax: return "json_syntax";
    case Errc::json_unsupported: return "json_unsupported";
    case Errc::json_bad_member: return "json_bad_member";
    case Errc::orphan_salt: return "orphan_salt";
    case Errc::duplicate_member: return "duplicate_member";
    case Errc::path_not_found: return "path_not_found";
    case Errc::path_hidden: return "path_hidden";
    case Errc::empty_batch: return "empty_batch";
    case Errc::index_out_of_range: return "index_out_of_range";
    case Errc::anchor_io: return "anchor_io";
    case Errc::anchor_rpc: return "anchor_rpc";
    case Errc::entropy: return "entropy";
    case Errc::key_format: return "key_format";
    case Errc::invalid_argument: return "invalid_argument";
    }
    return "unknown";
}

std::string to_hex(std::span<const std::uint8_t> bytes)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

static int nibble(char c) noexcept
{
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}

std::optional<Bytes> from_hex(std::string_view text)
{
    if (text.size() % 2 != 0)
        return std::nullopt;
    Bytes out(text.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = nibble(text[2 * i]);
        int lo = nibble(text[2 * i + 1]);
        if (hi < 0 || lo < 0)
            return std::nullopt;
        out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
    return out;
}

bool is_lower_hex(std::string_view text) noexcept
{
    for (char c : text)
        if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f')))
            return false;
    return true;
}

} // namespace sdoc
