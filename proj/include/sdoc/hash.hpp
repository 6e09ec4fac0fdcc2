#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <cstring>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sdoc {

/// Output of the base hash (SHA-256). Always exactly 32 bytes.
struct Digest {
    static constexpr std::size_t size = 32;
    std::array<std::uint8_t, size> bytes{};

    std::span<const std::uint8_t> span() const noexcept { return bytes; }
    std::string hex() const;
    static std::optional<Digest> from_hex(std::string_view text);
    static Digest from_span(std::span<const std::uint8_t> raw);

    friend bool operator==(const Digest&, const Digest&) = default;
    friend auto operator<=>(const Digest&, const Digest&) = default;
};

/// h' over arbitrary bytes.
Digest sha256(std::span<const std::uint8_t> data);
Digest sha256(std::string_view data);

/// h' over the raw concatenation of digests, in order.
Digest sha256_concat(std::span<const Digest> parts);

Digest sha256_pair(const Digest& left, const Digest& right);

/// Parents of consecutive pairs: out[i] = h'(level[2i] || level[2i+1]).
/// A trailing odd element is ignored. Runs on the active SIMD kernel.
std::vector<Digest> sha256_pairs(std::span<const Digest> level);

/// Per-thread tally of h' invocations made through this header.
///
/// Each call counts as one operation. The weight models hashing cost by
/// input width: a call over k concatenated digests weighs k/2, a pair weighs
/// 1, any other input weighs 1. Weights are kept in half-units so they stay
/// exact integers.
struct DigestTally {
    std::uint64_t ops = 0;
    std::uint64_t weight_halves = 0;
};

DigestTally digest_tally() noexcept;

/// Difference of the thread's tally since construction.
class DigestCountScope {
public:
    DigestCountScope() noexcept : start_(digest_tally()) {}

    std::uint64_t ops() const noexcept { return digest_tally().ops - start_.ops; }
    std::uint64_t weight_halves() const noexcept
    {
        return digest_tally().weight_halves - start_.weight_halves;
    }

private:
    DigestTally start_;
};

} // namespace sdoc

template <>
struct std::hash<sdoc::Digest> {
    std::size_t operator()(const sdoc::Digest& d) const noexcept
    {
        std::size_t v;
        std::memcpy(&v, d.bytes.data(), sizeof v);
        return v;
    }
};
