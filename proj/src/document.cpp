#include "sdoc/document.hpp"
#include "sdoc/error.hpp"

#include <openssl/rand.h>

#include <array>

namespace sdoc {

namespace {

constexpr std::array<AlgorithmInfo, 1> registry{{
    {"ecdsa-p256v1", 1, 64, 65, 0x04},
}};

bool is_utf8(std::string_view s) noexcept
{
    std::size_t i = 0;
    while (i < s.size()) {
        auto c = static_cast<unsigned char>(s[i]);
        std::size_t len;
        std::uint32_t cp;
        if (c < 0x80) {
            ++i;
            continue;
        } else if ((c & 0xe0) == 0xc0) {
            len = 2;
            cp = c & 0x1f;
        } else if ((c & 0xf0) == 0xe0) {
            len = 3;
            cp = c & 0x0f;
        } else if ((c & 0xf8) == 0xf0) {
            len = 4;
            cp = c & 0x07;
        } else {
            return false;
        }
        if (i + len > s.size())
            return false;
        for (std::size_t k = 1; k < len; ++k) {
            auto cc = static_cast<unsigned char>(s[i + k]);
            if ((cc & 0xc0) != 0x80)
                return false;
            cp = cp << 6 | (cc & 0x3f);
        }
        // overlong forms, surrogates, out of range
        if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) || cp > 0x10ffff ||
            (cp >= 0xd800 && cp <= 0xdfff))
            return false;
        i += len;
    }
    return true;
}

bool name_start(unsigned char c) noexcept
{
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_' || c >= 0x80;
}

bool name_char(unsigned char c) noexcept
{
    return name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

} // namespace

const AlgorithmInfo* find_algorithm(std::string_view name) noexcept
{
    for (const auto& a : registry)
        if (a.name == name)
            return &a;
    return nullptr;
}

const AlgorithmInfo* find_algorithm(std::uint16_t id) noexcept
{
    for (const auto& a : registry)
        if (a.id == id)
            return &a;
    return nullptr;
}

std::span<const AlgorithmInfo> registered_algorithms() noexcept { return registry; }

void validate_signature_block(const SignatureBlock& block)
{
    const AlgorithmInfo* info = find_algorithm(block.algo);
    if (!info)
        throw Error(Errc::unknown_algorithm, "unregistered signature algorithm '" + block.algo + "'");
    if (info->id != block.algo_id)
        throw Error(Errc::malformed_signature, "algorithm number " + std::to_string(block.algo_id) +
                                                   " does not match '" + block.algo + "'");
    if (block.sig.size() != info->sig_len)
        throw Error(Errc::malformed_signature, "signature must be " + std::to_string(info->sig_len) + " bytes, got " +
                                                   std::to_string(block.sig.size()));
    if (block.pubkey.size() != info->pubkey_len || block.pubkey.front() != info->pubkey_prefix)
        throw Error(Errc::malformed_signature, "public key must be " + std::to_string(info->pubkey_len) +
                                                   " bytes of uncompressed SEC1");
}

SignatureBlock make_signature_block(std::string_view algo, std::string_view sig_hex, std::string_view pubkey_hex)
{
    const AlgorithmInfo* info = find_algorithm(algo);
    if (!info)
        throw Error(Errc::unknown_algorithm, "unregistered signature algorithm '" + std::string(algo) + "'");
    auto sig = from_hex(sig_hex);
    auto pub = from_hex(pubkey_hex);
    if (!sig || !pub)
        throw Error(Errc::malformed_signature, "signature and public key must be hex");
    SignatureBlock block{std::string(algo), info->id, std::move(*sig), std::move(*pub)};
    validate_signature_block(block);
    return block;
}

std::string_view DocNode::tag() const noexcept
{
    if (auto* l = leaf())
        return l->tag;
    if (auto* c = container())
        return c->tag;
    return {};
}

bool is_valid_tag(std::string_view tag) noexcept
{
    if (tag.empty() || !name_start(static_cast<unsigned char>(tag.front())))
        return false;
    for (char c : tag)
        if (!name_char(static_cast<unsigned char>(c)))
            return false;
    return is_utf8(tag);
}

bool is_valid_salt(std::string_view salt) noexcept
{
    if (salt.empty() || salt.size() > 64)
        return false;
    for (char c : salt)
        if (c < 0x20 || c > 0x7e || c == '"' || c == '&')
            return false;
    return true;
}

bool is_valid_text(std::string_view text) noexcept
{
    for (char c : text) {
        auto u = static_cast<unsigned char>(c);
        if (u < 0x20 && u != '\t' && u != '\n' && u != '\r')
            return false;
    }
    return is_utf8(text);
}

static void validate_name(std::string_view tag)
{
    if (!is_valid_tag(tag))
        throw Error(Errc::encoding, "invalid element name '" + std::string(tag) + "'");
    if (tag.starts_with(hidden_tag))
        throw Error(Errc::encoding, "element name '" + std::string(tag) + "' collides with the reserved 'digest' prefix");
}

void validate(const DocNode& node)
{
    if (const Leaf* l = node.leaf()) {
        validate_name(l->tag);
        if (!is_valid_salt(l->salt))
            throw Error(Errc::encoding, "invalid salt on '" + l->tag + "'");
        if (!is_valid_text(l->text))
            throw Error(Errc::encoding, "text of '" + l->tag + "' is not valid UTF-8 XML character data");
    } else if (const Container* c = node.container()) {
        validate_name(c->tag);
        if (c->children.empty())
            throw Error(Errc::invalid_argument, "container '" + c->tag + "' has no children");
        if (c->sig)
            validate_signature_block(*c->sig);
        for (const auto& child : c->children)
            validate(child);
    }
}

std::string generate_salt()
{
    // Largest multiple of the alphabet size that fits in a byte; bytes at or
    // above it are redrawn so every character is equally likely.
    constexpr unsigned limit = 256 / salt_alphabet.size() * salt_alphabet.size();
    std::string salt;
    salt.reserve(salt_length);
    std::array<unsigned char, 32> raw;
    while (salt.size() < salt_length) {
        if (RAND_bytes(raw.data(), static_cast<int>(raw.size())) != 1)
            throw Error(Errc::entropy, "system random source failed");
        for (unsigned char b : raw)
            if (b < limit && salt.size() < salt_length)
                salt.push_back(salt_alphabet[b % salt_alphabet.size()]);
    }
    return salt;
}

} // namespace sdoc
