#include "sdoc/error.hpp"
#include "sdoc/evm.hpp"

namespace sdoc::evm {

namespace rlp {

namespace {

Bytes length_prefix(std::size_t len, std::uint8_t short_base, std::uint8_t long_base)
{
    if (len <= 55)
        return {static_cast<std::uint8_t>(short_base + len)};
    Bytes len_bytes = scalar(static_cast<std::uint64_t>(len));
    Bytes out{static_cast<std::uint8_t>(long_base + len_bytes.size())};
    out.insert(out.end(), len_bytes.begin(), len_bytes.end());
    return out;
}

[[noreturn]] void bad(const std::string& what) { throw Error(Errc::invalid_argument, "rlp: " + what); }

std::uint64_t read_length(std::span<const std::uint8_t> data, std::size_t n)
{
    if (n == 0 || n > 8 || data.size() < n)
        bad("bad length of length");
    if (data[0] == 0)
        bad("length with leading zero");
    std::uint64_t len = 0;
    for (std::size_t i = 0; i < n; ++i)
        len = len << 8 | data[i];
    if (len <= 55)
        bad("long form used for a short length");
    return len;
}

// Decodes one item at the front of `data`; returns bytes consumed.
std::size_t decode_one(std::span<const std::uint8_t> data, Item& out)
{
    if (data.empty())
        bad("unexpected end of input");
    const std::uint8_t p = data[0];
    std::size_t header = 1;
    std::uint64_t len = 0;
    bool list = false;
    if (p < 0x80) {
        out.value = Bytes{p};
        return 1;
    } else if (p <= 0xb7) {
        len = p - 0x80u;
        if (len == 1 && data.size() > 1 && data[1] < 0x80)
            bad("single byte should be encoded as itself");
    } else if (p <= 0xbf) {
        header += p - 0xb7u;
        len = read_length(data.subspan(1), p - 0xb7u);
    } else if (p <= 0xf7) {
        list = true;
        len = p - 0xc0u;
    } else {
        list = true;
        header += p - 0xf7u;
        len = read_length(data.subspan(1), p - 0xf7u);
    }
    if (data.size() < header || data.size() - header < len)
        bad("item runs past end of input");
    auto body = data.subspan(header, static_cast<std::size_t>(len));
    if (!list) {
        out.value = Bytes(body.begin(), body.end());
    } else {
        List items;
        std::size_t pos = 0;
        while (pos < body.size()) {
            Item child;
            pos += decode_one(body.subspan(pos), child);
            items.push_back(std::move(child));
        }
        out.value = std::move(items);
    }
    return header + static_cast<std::size_t>(len);
}

} // namespace

Bytes scalar(std::uint64_t v)
{
    Bytes out;
    for (int shift = 56; shift >= 0; shift -= 8) {
        auto b = static_cast<std::uint8_t>(v >> shift);
        if (b || !out.empty())
            out.push_back(b);
    }
    return out;
}

Bytes scalar(std::span<const std::uint8_t> big_endian)
{
    std::size_t i = 0;
    while (i < big_endian.size() && big_endian[i] == 0)
        ++i;
    return Bytes(big_endian.begin() + static_cast<std::ptrdiff_t>(i), big_endian.end());
}

Bytes encode_bytes(std::span<const std::uint8_t> bytes)
{
    if (bytes.size() == 1 && bytes[0] < 0x80)
        return {bytes[0]};
    Bytes out = length_prefix(bytes.size(), 0x80, 0xb7);
    out.insert(out.end(), bytes.begin(), bytes.end());
    return out;
}

Bytes encode_list(std::span<const Bytes> encoded_items)
{
    std::size_t total = 0;
    for (const auto& e : encoded_items)
        total += e.size();
    Bytes out = length_prefix(total, 0xc0, 0xf7);
    for (const auto& e : encoded_items)
        out.insert(out.end(), e.begin(), e.end());
    return out;
}

Bytes encode(const Item& item)
{
    if (const auto* b = std::get_if<Bytes>(&item.value))
        return encode_bytes(*b);
    std::vector<Bytes> parts;
    for (const auto& child : std::get<List>(item.value))
        parts.push_back(encode(child));
    return encode_list(parts);
}

Item decode(std::span<const std::uint8_t> data)
{
    Item out;
    if (decode_one(data, out) != data.size())
        bad("trailing bytes after item");
    return out;
}

} // namespace rlp

namespace {

std::vector<Bytes> tx_fields(const LegacyTx& tx)
{
    return {
        rlp::encode_bytes(rlp::scalar(tx.nonce)),
        rlp::encode_bytes(rlp::scalar(tx.gas_price)),
        rlp::encode_bytes(rlp::scalar(tx.gas)),
        rlp::encode_bytes(tx.to),
        rlp::encode_bytes(rlp::scalar(tx.value)),
        rlp::encode_bytes(tx.data),
    };
}

} // namespace

Hash256 signing_hash(const LegacyTx& tx, std::uint64_t chain_id)
{
    auto fields = tx_fields(tx);
    fields.push_back(rlp::encode_bytes(rlp::scalar(chain_id)));
    fields.push_back(rlp::encode_bytes(Bytes{}));
    fields.push_back(rlp::encode_bytes(Bytes{}));
    return keccak256(rlp::encode_list(fields));
}

Bytes sign_legacy_tx(const LegacyTx& tx, std::uint64_t chain_id, const ecdsa::Scalar& private_key)
{
    const Hash256 h = signing_hash(tx, chain_id);
    const ecdsa::Signature sig = ecdsa::sign_digest(ecdsa::Curve::secp256k1, private_key, h, true);
    const std::uint64_t v = chain_id * 2 + 35 + static_cast<std::uint64_t>(sig.recovery_id & 1);

    auto fields = tx_fields(tx);
    fields.push_back(rlp::encode_bytes(rlp::scalar(v)));
    fields.push_back(rlp::encode_bytes(rlp::scalar(sig.r)));
    fields.push_back(rlp::encode_bytes(rlp::scalar(sig.s)));
    return rlp::encode_list(fields);
}

Bytes parse_data(std::string_view hex)
{
    if (!hex.starts_with("0x"))
        throw Error(Errc::anchor_rpc, "expected 0x-prefixed hex, got '" + std::string(hex) + "'");
    hex.remove_prefix(2);
    std::string padded;
    if (hex.size() % 2) {
        padded = "0" + std::string(hex);
        hex = padded;
    }
    auto raw = from_hex(hex);
    if (!raw)
        throw Error(Errc::anchor_rpc, "malformed hex in RPC response");
    return *raw;
}

std::uint64_t parse_quantity(std::string_view hex)
{
    Bytes raw = parse_data(hex);
    Bytes trimmed = rlp::scalar(raw);
    if (trimmed.size() > 8)
        throw Error(Errc::anchor_rpc, "quantity does not fit in 64 bits");
    std::uint64_t v = 0;
    for (auto b : trimmed)
        v = v << 8 | b;
    return v;
}

std::string quantity_hex(std::uint64_t v)
{
    static constexpr char digits[] = "0123456789abcdef";
    if (v == 0)
        return "0x0";
    std::string out;
    while (v) {
        out.insert(out.begin(), digits[v & 0xf]);
        v >>= 4;
    }
    return "0x" + out;
}

std::string data_hex(std::span<const std::uint8_t> bytes) { return "0x" + to_hex(bytes); }

} // namespace sdoc::evm
