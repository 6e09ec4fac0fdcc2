#include "sdoc/kernels.hpp"
#include "sha256_constants.hpp"

#include <immintrin.h>

#include <array>
#include <cstring>

namespace sdoc::kernels {

namespace {

constexpr std::size_t lanes = 8;

inline __m256i rotr(__m256i x, int n) noexcept
{
    return _mm256_or_si256(_mm256_srli_epi32(x, n), _mm256_slli_epi32(x, 32 - n));
}

inline __m256i add(__m256i a, __m256i b) noexcept { return _mm256_add_epi32(a, b); }

inline std::uint32_t load_be32(const std::uint8_t* p) noexcept
{
    return std::uint32_t(p[0]) << 24 | std::uint32_t(p[1]) << 16 | std::uint32_t(p[2]) << 8 | p[3];
}

// K[i] + W[i] for the fixed padding block of a 64-byte message.
constexpr std::array<std::uint32_t, 64> padding_schedule()
{
    std::array<std::uint32_t, 64> w{};
    for (int i = 0; i < 16; ++i)
        w[i] = std::uint32_t(detail::sha256_pad64[4 * i]) << 24 | std::uint32_t(detail::sha256_pad64[4 * i + 1]) << 16 |
               std::uint32_t(detail::sha256_pad64[4 * i + 2]) << 8 | detail::sha256_pad64[4 * i + 3];
    auto r = [](std::uint32_t x, int n) { return (x >> n) | (x << (32 - n)); };
    for (int i = 16; i < 64; ++i) {
        std::uint32_t s0 = r(w[i - 15], 7) ^ r(w[i - 15], 18) ^ (w[i - 15] >> 3);
        std::uint32_t s1 = r(w[i - 2], 17) ^ r(w[i - 2], 19) ^ (w[i - 2] >> 10);
        w[i] = w[i - 16] + s0 + w[i - 7] + s1;
    }
    for (int i = 0; i < 64; ++i)
        w[i] += detail::sha256_k[i];
    return w;
}

constexpr auto pad_kw = padding_schedule();

struct State8 {
    __m256i v[8];
};

// 64 rounds; `kw(i)` yields K[i] + W[i] for all lanes.
template <typename KW>
inline void rounds(State8& st, KW&& kw) noexcept
{
    __m256i a = st.v[0], b = st.v[1], c = st.v[2], d = st.v[3];
    __m256i e = st.v[4], f = st.v[5], g = st.v[6], h = st.v[7];
    for (int i = 0; i < 64; ++i) {
        __m256i S1 = _mm256_xor_si256(_mm256_xor_si256(rotr(e, 6), rotr(e, 11)), rotr(e, 25));
        __m256i ch = _mm256_xor_si256(_mm256_and_si256(e, f), _mm256_andnot_si256(e, g));
        __m256i t1 = add(add(add(h, S1), ch), kw(i));
        __m256i S0 = _mm256_xor_si256(_mm256_xor_si256(rotr(a, 2), rotr(a, 13)), rotr(a, 22));
        __m256i maj = _mm256_xor_si256(_mm256_xor_si256(_mm256_and_si256(a, b), _mm256_and_si256(a, c)),
                                       _mm256_and_si256(b, c));
        __m256i t2 = add(S0, maj);
        h = g;
        g = f;
        f = e;
        e = add(d, t1);
        d = c;
        c = b;
        b = a;
        a = add(t1, t2);
    }
    st.v[0] = add(st.v[0], a);
    st.v[1] = add(st.v[1], b);
    st.v[2] = add(st.v[2], c);
    st.v[3] = add(st.v[3], d);
    st.v[4] = add(st.v[4], e);
    st.v[5] = add(st.v[5], f);
    st.v[6] = add(st.v[6], g);
    st.v[7] = add(st.v[7], h);
}

void hash8(const std::uint8_t* in, std::uint8_t* out) noexcept
{
    __m256i w[64];
    for (int i = 0; i < 16; ++i) {
        w[i] = _mm256_set_epi32(
            int(load_be32(in + 7 * 64 + 4 * i)), int(load_be32(in + 6 * 64 + 4 * i)),
            int(load_be32(in + 5 * 64 + 4 * i)), int(load_be32(in + 4 * 64 + 4 * i)),
            int(load_be32(in + 3 * 64 + 4 * i)), int(load_be32(in + 2 * 64 + 4 * i)),
            int(load_be32(in + 1 * 64 + 4 * i)), int(load_be32(in + 0 * 64 + 4 * i)));
    }
    for (int i = 16; i < 64; ++i) {
        __m256i x = w[i - 15];
        __m256i s0 = _mm256_xor_si256(_mm256_xor_si256(rotr(x, 7), rotr(x, 18)), _mm256_srli_epi32(x, 3));
        __m256i y = w[i - 2];
        __m256i s1 = _mm256_xor_si256(_mm256_xor_si256(rotr(y, 17), rotr(y, 19)), _mm256_srli_epi32(y, 10));
        w[i] = add(add(w[i - 16], s0), add(w[i - 7], s1));
    }

    State8 st;
    for (int i = 0; i < 8; ++i)
        st.v[i] = _mm256_set1_epi32(int(detail::sha256_iv[i]));

    rounds(st, [&](int i) { return add(w[i], _mm256_set1_epi32(int(detail::sha256_k[i]))); });
    rounds(st, [](int i) { return _mm256_set1_epi32(int(pad_kw[i])); });

    // Transpose back: word i of lane j goes to out[32*j + 4*i], big-endian.
    const __m256i bswap = _mm256_setr_epi8(3, 2, 1, 0, 7, 6, 5, 4, 11, 10, 9, 8, 15, 14, 13, 12,
                                           3, 2, 1, 0, 7, 6, 5, 4, 11, 10, 9, 8, 15, 14, 13, 12);
    alignas(32) std::uint32_t words[8][8];
    for (int i = 0; i < 8; ++i)
        _mm256_store_si256(reinterpret_cast<__m256i*>(words[i]), _mm256_shuffle_epi8(st.v[i], bswap));
    for (std::size_t lane = 0; lane < lanes; ++lane)
        for (int i = 0; i < 8; ++i)
            std::memcpy(out + 32 * lane + 4 * i, &words[i][lane], 4);
}

} // namespace

void sha256_64_avx2(const std::uint8_t* in, std::uint8_t* out, std::size_t count) noexcept
{
    std::size_t m = 0;
    for (; m + lanes <= count; m += lanes)
        hash8(in + 64 * m, out + 32 * m);
    if (m < count)
        sha256_64_scalar(in + 64 * m, out + 32 * m, count - m);
}

} // namespace sdoc::kernels
