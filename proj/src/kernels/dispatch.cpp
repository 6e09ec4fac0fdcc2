#include "sdoc/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace sdoc::kernels {

std::string_view isa_name(Isa isa) noexcept
{
    switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    }
    return "unknown";
}

bool isa_available(Isa isa) noexcept
{
    switch (isa) {
    case Isa::scalar:
        return true;
    case Isa::avx2:
#if defined(SDOC_HAVE_AVX2_KERNEL) && (defined(__GNUC__) || defined(__clang__))
        return __builtin_cpu_supports("avx2");
#else
        return false;
#endif
    }
    return false;
}

static Isa detect() noexcept
{
    if (const char* forced = std::getenv("SDOC_ISA"); forced && std::string_view(forced) == "scalar")
        return Isa::scalar;
    return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

Isa active_isa() noexcept
{
    static const Isa isa = detect();
    return isa;
}

void sha256_64(Isa isa, const std::uint8_t* in, std::uint8_t* out, std::size_t count) noexcept
{
#if defined(SDOC_HAVE_AVX2_KERNEL)
    if (isa == Isa::avx2) {
        sha256_64_avx2(in, out, count);
        return;
    }
#else
    (void)isa;
#endif
    sha256_64_scalar(in, out, count);
}

#if !defined(SDOC_HAVE_AVX2_KERNEL)
void sha256_64_avx2(const std::uint8_t* in, std::uint8_t* out, std::size_t count) noexcept
{
    sha256_64_scalar(in, out, count);
}
#endif

} // namespace sdoc::kernels
