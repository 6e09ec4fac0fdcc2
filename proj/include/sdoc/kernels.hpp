#pragma once

// SHA-256 kernels. The scalar versions are the portable reference; the AVX2
// version hashes eight independent 64-byte messages per pass and must agree
// with the reference bit for bit.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace sdoc::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

/// True when the kernel is compiled in and the CPU supports it.
bool isa_available(Isa isa) noexcept;

/// Best available ISA, unless SDOC_ISA=scalar is set in the environment.
Isa active_isa() noexcept;

/// One SHA-256 compression round over a 64-byte block.
void sha256_compress_scalar(std::uint32_t state[8], const std::uint8_t block[64]) noexcept;

/// Complete SHA-256 of an arbitrary message built on sha256_compress_scalar.
void sha256_scalar(std::span<const std::uint8_t> message, std::uint8_t out[32]) noexcept;

/// Hash `count` messages of exactly 64 bytes each.
/// `in` holds count*64 bytes back to back; `out` receives count*32 bytes.
void sha256_64_scalar(const std::uint8_t* in, std::uint8_t* out, std::size_t count) noexcept;
void sha256_64_avx2(const std::uint8_t* in, std::uint8_t* out, std::size_t count) noexcept;

void sha256_64(Isa isa, const std::uint8_t* in, std::uint8_t* out, std::size_t count) noexcept;

} // namespace sdoc::kernels
