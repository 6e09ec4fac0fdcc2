#include "sdoc/ecdsa.hpp"
#include "sdoc/error.hpp"

#include <openssl/bn.h>
#include <openssl/core_names.h>
#include <openssl/ec.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/obj_mac.h>
#include <openssl/param_build.h>
#include <openssl/rand.h>

#include <cstring>
#include <memory>

namespace sdoc::ecdsa {

namespace {

template <auto Fn>
struct Deleter {
    template <typename T>
    void operator()(T* p) const noexcept { Fn(p); }
};

using BnPtr = std::unique_ptr<BIGNUM, Deleter<BN_clear_free>>;
using BnCtxPtr = std::unique_ptr<BN_CTX, Deleter<BN_CTX_free>>;
using GroupPtr = std::unique_ptr<EC_GROUP, Deleter<EC_GROUP_free>>;
using PointPtr = std::unique_ptr<EC_POINT, Deleter<EC_POINT_free>>;
using PkeyPtr = std::unique_ptr<EVP_PKEY, Deleter<EVP_PKEY_free>>;
using PkeyCtxPtr = std::unique_ptr<EVP_PKEY_CTX, Deleter<EVP_PKEY_CTX_free>>;
using SigPtr = std::unique_ptr<ECDSA_SIG, Deleter<ECDSA_SIG_free>>;
using ParamBldPtr = std::unique_ptr<OSSL_PARAM_BLD, Deleter<OSSL_PARAM_BLD_free>>;
using ParamPtr = std::unique_ptr<OSSL_PARAM, Deleter<OSSL_PARAM_free>>;

[[noreturn]] void crypto_failure(const char* what) { throw Error(Errc::key_format, std::string("ecdsa: ") + what); }

BnPtr bn() { return BnPtr(BN_new()); }

BnPtr bn(std::span<const std::uint8_t> be) { return BnPtr(BN_bin2bn(be.data(), static_cast<int>(be.size()), nullptr)); }

Scalar to_scalar(const BIGNUM* v)
{
    Scalar out{};
    if (BN_bn2binpad(v, out.data(), static_cast<int>(out.size())) != static_cast<int>(out.size()))
        crypto_failure("scalar does not fit in 32 bytes");
    return out;
}

int nid(Curve c) noexcept { return c == Curve::p256 ? NID_X9_62_prime256v1 : NID_secp256k1; }
const char* group_name(Curve c) noexcept { return c == Curve::p256 ? "prime256v1" : "secp256k1"; }

struct Group {
    GroupPtr group;
    BnPtr order;
    BnCtxPtr ctx;

    explicit Group(Curve c) : group(EC_GROUP_new_by_curve_name(nid(c))), order(bn()), ctx(BN_CTX_new())
    {
        if (!group || !order || !ctx || !EC_GROUP_get_order(group.get(), order.get(), ctx.get()))
            crypto_failure("curve setup failed");
    }
};

BnPtr checked_private(const Group& g, const Scalar& key)
{
    BnPtr d = bn(key);
    if (!d || BN_is_zero(d.get()) || BN_cmp(d.get(), g.order.get()) >= 0)
        throw Error(Errc::key_format, "private key is not in [1, n)");
    return d;
}

using Mac = std::array<std::uint8_t, 32>;

Mac hmac(const Mac& key, std::initializer_list<std::span<const std::uint8_t>> parts)
{
    std::vector<std::uint8_t> msg;
    for (auto p : parts)
        msg.insert(msg.end(), p.begin(), p.end());
    Mac out{};
    unsigned len = 0;
    if (!HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), msg.data(), msg.size(), out.data(), &len))
        crypto_failure("HMAC failed");
    return out;
}

// Successive RFC 6979 candidates for qlen = hlen = 256.
class NonceStream {
public:
    NonceStream(const Group& g, const Scalar& x, std::span<const std::uint8_t, 32> h1) : g_(g)
    {
        // bits2octets(h1) = int2octets(bits2int(h1) mod q)
        BnPtr h = bn(h1);
        if (BN_cmp(h.get(), g.order.get()) >= 0)
            BN_sub(h.get(), h.get(), g.order.get());
        Scalar h_oct = to_scalar(h.get());

        v_.fill(0x01);
        k_.fill(0x00);
        const std::uint8_t zero = 0x00, one = 0x01;
        k_ = hmac(k_, {v_, {&zero, 1}, x, h_oct});
        v_ = hmac(k_, {v_});
        k_ = hmac(k_, {v_, {&one, 1}, x, h_oct});
        v_ = hmac(k_, {v_});
    }

    BnPtr next()
    {
        while (true) {
            if (!first_) {
                const std::uint8_t zero = 0x00;
                k_ = hmac(k_, {v_, {&zero, 1}});
                v_ = hmac(k_, {v_});
            }
            first_ = false;
            v_ = hmac(k_, {v_});
            BnPtr k = bn(v_);
            if (!BN_is_zero(k.get()) && BN_cmp(k.get(), g_.order.get()) < 0)
                return k;
        }
    }

private:
    const Group& g_;
    Mac v_{};
    Mac k_{};
    bool first_ = true;
};

} // namespace

Bytes Signature::raw() const
{
    Bytes out(r.begin(), r.end());
    out.insert(out.end(), s.begin(), s.end());
    return out;
}

Scalar random_private_key(Curve curve)
{
    Group g(curve);
    for (int attempt = 0; attempt < 64; ++attempt) {
        Scalar candidate{};
        if (RAND_priv_bytes(candidate.data(), static_cast<int>(candidate.size())) != 1)
            throw Error(Errc::entropy, "system random source failed");
        BnPtr d = bn(candidate);
        if (!BN_is_zero(d.get()) && BN_cmp(d.get(), g.order.get()) < 0)
            return candidate;
    }
    throw Error(Errc::entropy, "could not draw a private key in range");
}

Bytes public_key(Curve curve, const Scalar& private_key)
{
    Group g(curve);
    BnPtr d = checked_private(g, private_key);
    PointPtr q(EC_POINT_new(g.group.get()));
    if (!q || !EC_POINT_mul(g.group.get(), q.get(), d.get(), nullptr, nullptr, g.ctx.get()))
        crypto_failure("point multiplication failed");
    Bytes out(65);
    if (EC_POINT_point2oct(g.group.get(), q.get(), POINT_CONVERSION_UNCOMPRESSED, out.data(), out.size(),
                           g.ctx.get()) != out.size())
        crypto_failure("point encoding failed");
    return out;
}

Scalar rfc6979_nonce(Curve curve, const Scalar& private_key, std::span<const std::uint8_t, 32> digest)
{
    Group g(curve);
    checked_private(g, private_key);
    NonceStream nonces(g, private_key, digest);
    return to_scalar(nonces.next().get());
}

Signature sign_digest(Curve curve, const Scalar& private_key, std::span<const std::uint8_t, 32> digest, bool low_s)
{
    Group g(curve);
    BnPtr d = checked_private(g, private_key);
    BnPtr e = bn(digest);
    NonceStream nonces(g, private_key, digest);
    BN_CTX* ctx = g.ctx.get();
    const BIGNUM* n = g.order.get();

    while (true) {
        BnPtr k = nonces.next();
        PointPtr R(EC_POINT_new(g.group.get()));
        BnPtr x = bn(), y = bn(), r = bn(), s = bn(), kinv = bn(), tmp = bn();
        if (!R || !EC_POINT_mul(g.group.get(), R.get(), k.get(), nullptr, nullptr, ctx) ||
            !EC_POINT_get_affine_coordinates(g.group.get(), R.get(), x.get(), y.get(), ctx))
            crypto_failure("nonce point computation failed");
        if (!BN_nnmod(r.get(), x.get(), n, ctx))
            crypto_failure("reduction failed");
        if (BN_is_zero(r.get()))
            continue;
        // s = k^-1 (e + r d) mod n
        if (!BN_mod_mul(tmp.get(), r.get(), d.get(), n, ctx) || !BN_mod_add(tmp.get(), tmp.get(), e.get(), n, ctx) ||
            !BN_mod_inverse(kinv.get(), k.get(), n, ctx) || !BN_mod_mul(s.get(), kinv.get(), tmp.get(), n, ctx))
            crypto_failure("signature arithmetic failed");
        if (BN_is_zero(s.get()))
            continue;

        Signature sig;
        sig.recovery_id = (BN_is_odd(y.get()) ? 1 : 0) | (BN_cmp(x.get(), n) >= 0 ? 2 : 0);
        if (low_s) {
            BnPtr half = bn();
            BN_rshift1(half.get(), n);
            if (BN_cmp(s.get(), half.get()) > 0) {
                BN_sub(s.get(), n, s.get());
                sig.recovery_id ^= 1;
            }
        }
        sig.r = to_scalar(r.get());
        sig.s = to_scalar(s.get());
        return sig;
    }
}

bool verify_digest(Curve curve, std::span<const std::uint8_t> public_key, std::span<const std::uint8_t, 32> digest,
                   std::span<const std::uint8_t> signature) noexcept
{
    if (signature.size() != 64 || public_key.size() != 65 || public_key[0] != 0x04)
        return false;
    try {
        Group g(curve);
        PointPtr q(EC_POINT_new(g.group.get()));
        if (!q || !EC_POINT_oct2point(g.group.get(), q.get(), public_key.data(), public_key.size(), g.ctx.get()))
            return false;

        ParamBldPtr bld(OSSL_PARAM_BLD_new());
        if (!bld || !OSSL_PARAM_BLD_push_utf8_string(bld.get(), OSSL_PKEY_PARAM_GROUP_NAME, group_name(curve), 0) ||
            !OSSL_PARAM_BLD_push_octet_string(bld.get(), OSSL_PKEY_PARAM_PUB_KEY, public_key.data(),
                                              public_key.size()))
            return false;
        ParamPtr params(OSSL_PARAM_BLD_to_param(bld.get()));
        PkeyCtxPtr from(EVP_PKEY_CTX_new_from_name(nullptr, "EC", nullptr));
        EVP_PKEY* raw = nullptr;
        if (!params || !from || EVP_PKEY_fromdata_init(from.get()) != 1 ||
            EVP_PKEY_fromdata(from.get(), &raw, EVP_PKEY_PUBLIC_KEY, params.get()) != 1)
            return false;
        PkeyPtr pkey(raw);

        SigPtr sig(ECDSA_SIG_new());
        BIGNUM* r = BN_bin2bn(signature.data(), 32, nullptr);
        BIGNUM* s = BN_bin2bn(signature.data() + 32, 32, nullptr);
        if (!sig || !r || !s || !ECDSA_SIG_set0(sig.get(), r, s)) {
            BN_free(r);
            BN_free(s);
            return false;
        }
        unsigned char* der = nullptr;
        int der_len = i2d_ECDSA_SIG(sig.get(), &der);
        if (der_len <= 0)
            return false;
        std::unique_ptr<unsigned char, void (*)(unsigned char*)> der_owner(
            der, [](unsigned char* p) { OPENSSL_free(p); });

        PkeyCtxPtr vctx(EVP_PKEY_CTX_new(pkey.get(), nullptr));
        if (!vctx || EVP_PKEY_verify_init(vctx.get()) != 1)
            return false;
        return EVP_PKEY_verify(vctx.get(), der, static_cast<std::size_t>(der_len), digest.data(), digest.size()) == 1;
    } catch (...) {
        return false;
    }
}

} // namespace sdoc::ecdsa
