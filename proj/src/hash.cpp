#include "sdoc/hash.hpp"
#include "sdoc/error.hpp"
#include "sdoc/hex.hpp"
#include "sdoc/kernels.hpp"

#include <openssl/sha.h>

namespace sdoc {

namespace {

thread_local DigestTally tally;

void count(std::uint64_t ops, std::uint64_t weight_halves) noexcept
{
    tally.ops += ops;
    tally.weight_halves += weight_halves;
}

} // namespace

DigestTally digest_tally() noexcept { return tally; }

std::string Digest::hex() const { return to_hex(bytes); }

std::optional<Digest> Digest::from_hex(std::string_view text)
{
    if (text.size() != 2 * size)
        return std::nullopt;
    auto raw = sdoc::from_hex(text);
    if (!raw)
        return std::nullopt;
    return from_span(*raw);
}

Digest Digest::from_span(std::span<const std::uint8_t> raw)
{
    if (raw.size() != size)
        throw Error(Errc::invalid_argument, "digest must be exactly 32 bytes, got " + std::to_string(raw.size()));
    Digest d;
    std::memcpy(d.bytes.data(), raw.data(), size);
    return d;
}

Digest sha256(std::span<const std::uint8_t> data)
{
    count(1, 2);
    Digest d;
    SHA256(data.data(), data.size(), d.bytes.data());
    return d;
}

Digest sha256(std::string_view data) { return sha256(as_bytes(data)); }

Digest sha256_concat(std::span<const Digest> parts)
{
    count(1, parts.size());
    static_assert(sizeof(Digest) == Digest::size);
    Digest d;
    static const std::uint8_t none = 0;
    SHA256(parts.empty() ? &none : parts.front().bytes.data(), parts.size() * Digest::size, d.bytes.data());
    return d;
}

Digest sha256_pair(const Digest& left, const Digest& right)
{
    const Digest parts[2] = {left, right};
    return sha256_concat(parts);
}

std::vector<Digest> sha256_pairs(std::span<const Digest> level)
{
    const std::size_t n = level.size() / 2;
    std::vector<Digest> out(n);
    if (n == 0)
        return out;
    count(n, 2 * n);
    kernels::sha256_64(kernels::active_isa(), level.front().bytes.data(), out.front().bytes.data(), n);
    return out;
}

} // namespace sdoc
