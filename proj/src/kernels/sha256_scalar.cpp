#include "sdoc/kernels.hpp"
#include "sha256_constants.hpp"

#include <cstring>

namespace sdoc::kernels {

namespace {

inline std::uint32_t rotr(std::uint32_t x, int n) noexcept { return (x >> n) | (x << (32 - n)); }

inline std::uint32_t load_be32(const std::uint8_t* p) noexcept
{
    return std::uint32_t(p[0]) << 24 | std::uint32_t(p[1]) << 16 | std::uint32_t(p[2]) << 8 | p[3];
}

inline void store_be32(std::uint8_t* p, std::uint32_t v) noexcept
{
    p[0] = std::uint8_t(v >> 24);
    p[1] = std::uint8_t(v >> 16);
    p[2] = std::uint8_t(v >> 8);
    p[3] = std::uint8_t(v);
}

} // namespace

void sha256_compress_scalar(std::uint32_t state[8], const std::uint8_t block[64]) noexcept
{
    std::uint32_t w[64];
    for (int i = 0; i < 16; ++i)
        w[i] = load_be32(block + 4 * i);
    for (int i = 16; i < 64; ++i) {
        std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
        std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
        w[i] = w[i - 16] + s0 + w[i - 7] + s1;
    }

    std::uint32_t a = state[0], b = state[1], c = state[2], d = state[3];
    std::uint32_t e = state[4], f = state[5], g = state[6], h = state[7];
    for (int i = 0; i < 64; ++i) {
        std::uint32_t S1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
        std::uint32_t ch = (e & f) ^ (~e & g);
        std::uint32_t t1 = h + S1 + ch + detail::sha256_k[i] + w[i];
        std::uint32_t S0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
        std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
        std::uint32_t t2 = S0 + maj;
        h = g;
        g = f;
        f = e;
        e = d + t1;
        d = c;
        c = b;
        b = a;
        a = t1 + t2;
    }
    state[0] += a;
    state[1] += b;
    state[2] += c;
    state[3] += d;
    state[4] += e;
    state[5] += f;
    state[6] += g;
    state[7] += h;
}

void sha256_scalar(std::span<const std::uint8_t> message, std::uint8_t out[32]) noexcept
{
    std::uint32_t state[8];
    std::memcpy(state, detail::sha256_iv, sizeof state);

    std::size_t full = message.size() / 64;
    for (std::size_t i = 0; i < full; ++i)
        sha256_compress_scalar(state, message.data() + 64 * i);

    std::uint8_t tail[128] = {};
    std::size_t rest = message.size() - 64 * full;
    if (rest)
        std::memcpy(tail, message.data() + 64 * full, rest);
    tail[rest] = 0x80;
    std::size_t tail_len = rest + 1 + 8 <= 64 ? 64 : 128;
    std::uint64_t bits = std::uint64_t(message.size()) * 8;
    for (int i = 0; i < 8; ++i)
        tail[tail_len - 1 - i] = std::uint8_t(bits >> (8 * i));
    sha256_compress_scalar(state, tail);
    if (tail_len == 128)
        sha256_compress_scalar(state, tail + 64);

    for (int i = 0; i < 8; ++i)
        store_be32(out + 4 * i, state[i]);
}

void sha256_64_scalar(const std::uint8_t* in, std::uint8_t* out, std::size_t count) noexcept
{
    for (std::size_t m = 0; m < count; ++m) {
        std::uint32_t state[8];
        std::memcpy(state, detail::sha256_iv, sizeof state);
        sha256_compress_scalar(state, in + 64 * m);
        sha256_compress_scalar(state, detail::sha256_pad64);
        for (int i = 0; i < 8; ++i)
            store_be32(out + 32 * m + 4 * i, state[i]);
    }
}

} // namespace sdoc::kernels
