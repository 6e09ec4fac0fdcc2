#pragma once

// ECDSA over prime curves with RFC 6979 deterministic nonces (HMAC-SHA-256).
// Messages are 32-byte digests and are signed as given, without rehashing.

#include "sdoc/hex.hpp"

#include <array>
#include <cstdint>
#include <span>

namespace sdoc::ecdsa {

enum class Curve { p256, secp256k1 };

using Scalar = std::array<std::uint8_t, 32>;

struct Signature {
    Scalar r{};
    Scalar s{};
    /// Parity of R.y in bit 0, R.x >= n in bit 1.
    int recovery_id = 0;

    Bytes raw() const; // r || s
};

/// Uniformly random scalar in [1, n).
Scalar random_private_key(Curve curve);

/// Uncompressed SEC1 point (0x04 || X || Y). Throws key_format when the
/// scalar is zero or not below the group order.
Bytes public_key(Curve curve, const Scalar& private_key);

/// The nonce RFC 6979 derives first for this key and digest.
Scalar rfc6979_nonce(Curve curve, const Scalar& private_key, std::span<const std::uint8_t, 32> digest);

/// `low_s` normalizes s into the lower half of the group order (and adjusts
/// the recovery id accordingly).
Signature sign_digest(Curve curve, const Scalar& private_key, std::span<const std::uint8_t, 32> digest,
                      bool low_s = false);

/// Raw r || s signature against an uncompressed public key. Never throws.
bool verify_digest(Curve curve, std::span<const std::uint8_t> public_key, std::span<const std::uint8_t, 32> digest,
                   std::span<const std::uint8_t> signature) noexcept;

} // namespace sdoc::ecdsa
