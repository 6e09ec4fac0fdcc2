#include "sdoc/digest.hpp"
#include "sdoc/error.hpp"

namespace sdoc {

std::string canonical_leaf(const Leaf& leaf)
{
    if (!is_valid_tag(leaf.tag))
        throw Error(Errc::encoding, "invalid element name '" + leaf.tag + "'");
    if (!is_valid_salt(leaf.salt))
        throw Error(Errc::encoding, "invalid salt on '" + leaf.tag + "'");

    std::string out;
    out.reserve(2 * leaf.tag.size() + leaf.salt.size() + leaf.text.size() + 16);
    out += '<';
    out += leaf.tag;
    out += " salt=\"";
    out += leaf.salt;
    out += "\">";
    for (char c : leaf.text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out += c;
        }
    }
    out += "</";
    out += leaf.tag;
    out += '>';
    return out;
}

Digest leaf_digest(const Leaf& leaf) { return sha256(canonical_leaf(leaf)); }

Digest unsigned_digest(const Container& c)
{
    std::vector<Digest> parts;
    parts.reserve(c.children.size());
    for (const auto& child : c.children)
        parts.push_back(node_digest(child));
    return sha256_concat(parts);
}

Digest signed_digest(const Digest& unsigned_d, const SignatureBlock& sig)
{
    validate_signature_block(sig);
    Bytes buf;
    buf.reserve(Digest::size + sig.pubkey.size() + 2 + sig.sig.size());
    buf.insert(buf.end(), unsigned_d.bytes.begin(), unsigned_d.bytes.end());
    buf.insert(buf.end(), sig.pubkey.begin(), sig.pubkey.end());
    buf.push_back(static_cast<std::uint8_t>(sig.algo_id >> 8));
    buf.push_back(static_cast<std::uint8_t>(sig.algo_id & 0xff));
    buf.insert(buf.end(), sig.sig.begin(), sig.sig.end());
    return sha256(buf);
}

Digest container_digest(const Container& c)
{
    Digest d = unsigned_digest(c);
    if (!c.sig)
        return d;
    return signed_digest(d, *c.sig);
}

Digest node_digest(const DocNode& node)
{
    if (const Leaf* l = node.leaf())
        return leaf_digest(*l);
    if (const Container* c = node.container())
        return container_digest(*c);
    return node.hidden()->digest;
}

} // namespace sdoc
