#include "sdoc/evm.hpp"
#include "sdoc/error.hpp"

#include <cstring>

namespace sdoc::evm {

namespace {

constexpr std::uint64_t round_constants[24] = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL, 0x8000000080008000ULL,
    0x000000000000808bULL, 0x0000000080000001ULL, 0x8000000080008081ULL, 0x8000000000008009ULL,
    0x000000000000008aULL, 0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL, 0x8000000000008003ULL,
    0x8000000000008002ULL, 0x8000000000000080ULL, 0x000000000000800aULL, 0x800000008000000aULL,
    0x8000000080008081ULL, 0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL,
};

constexpr int rotations[25] = {
    0, 1, 62, 28, 27, 36, 44, 6, 55, 20, 3, 10, 43, 25, 39, 41, 45, 15, 21, 8, 18, 2, 61, 56, 14,
};

inline std::uint64_t rotl(std::uint64_t x, int n) noexcept { return n == 0 ? x : (x << n) | (x >> (64 - n)); }

// Lane (x, y) lives at a[x + 5y].
void keccak_f(std::uint64_t a[25]) noexcept
{
    for (int round = 0; round < 24; ++round) {
        std::uint64_t c[5], d[5], b[25];
        for (int x = 0; x < 5; ++x)
            c[x] = a[x] ^ a[x + 5] ^ a[x + 10] ^ a[x + 15] ^ a[x + 20];
        for (int x = 0; x < 5; ++x)
            d[x] = c[(x + 4) % 5] ^ rotl(c[(x + 1) % 5], 1);
        for (int i = 0; i < 25; ++i)
            a[i] ^= d[i % 5];
        // rho and pi: B[y, 2x + 3y] = rot(A[x, y], r[x, y])
        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 5; ++y)
                b[y + 5 * ((2 * x + 3 * y) % 5)] = rotl(a[x + 5 * y], rotations[x + 5 * y]);
        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 5; ++y)
                a[x + 5 * y] = b[x + 5 * y] ^ (~b[(x + 1) % 5 + 5 * y] & b[(x + 2) % 5 + 5 * y]);
        a[0] ^= round_constants[round];
    }
}

} // namespace

Hash256 keccak256(std::span<const std::uint8_t> data)
{
    constexpr std::size_t rate = 136;
    std::uint64_t state[25] = {};

    auto absorb = [&](const std::uint8_t* block) {
        for (std::size_t i = 0; i < rate / 8; ++i) {
            std::uint64_t lane = 0;
            for (int b = 7; b >= 0; --b)
                lane = lane << 8 | block[8 * i + static_cast<std::size_t>(b)];
            state[i] ^= lane;
        }
        keccak_f(state);
    };

    std::size_t off = 0;
    for (; off + rate <= data.size(); off += rate)
        absorb(data.data() + off);

    std::uint8_t last[rate] = {};
    std::size_t rest = data.size() - off;
    if (rest)
        std::memcpy(last, data.data() + off, rest);
    last[rest] ^= 0x01;
    last[rate - 1] ^= 0x80;
    absorb(last);

    Hash256 out{};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t b = 0; b < 8; ++b)
            out[8 * i + b] = static_cast<std::uint8_t>(state[i] >> (8 * b));
    return out;
}

Hash256 keccak256(std::string_view data) { return keccak256(as_bytes(data)); }

std::array<std::uint8_t, 4> selector(std::string_view signature)
{
    Hash256 h = keccak256(signature);
    return {h[0], h[1], h[2], h[3]};
}

Bytes encode_uint256_call(std::string_view signature, const Digest& argument)
{
    const auto sel = selector(signature);
    Bytes out(sel.size() + Digest::size);
    std::copy(sel.begin(), sel.end(), out.begin());
    std::copy(argument.bytes.begin(), argument.bytes.end(), out.begin() + sel.size());
    return out;
}

Address address_of(std::span<const std::uint8_t> uncompressed_pubkey)
{
    if (uncompressed_pubkey.size() != 65 || uncompressed_pubkey[0] != 0x04)
        throw Error(Errc::key_format, "address derivation needs an uncompressed public key");
    Hash256 h = keccak256(uncompressed_pubkey.subspan(1));
    Address a{};
    std::memcpy(a.data(), h.data() + 12, a.size());
    return a;
}

std::string address_hex(const Address& a) { return "0x" + to_hex(a); }

Address parse_address(std::string_view text)
{
    if (text.starts_with("0x") || text.starts_with("0X"))
        text.remove_prefix(2);
    auto raw = from_hex(text);
    if (text.size() != 40 || !raw)
        throw Error(Errc::invalid_argument, "contract address must be 20 bytes of hex");
    Address a{};
    std::memcpy(a.data(), raw->data(), a.size());
    return a;
}

} // namespace sdoc::evm
