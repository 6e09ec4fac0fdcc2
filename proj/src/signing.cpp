#include "sdoc/signing.hpp"
#include "sdoc/digest.hpp"
#include "sdoc/error.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <fstream>
#include <sstream>

namespace sdoc {

namespace {

// Maps a registered algorithm to its curve. The registry currently holds one.
ecdsa::Curve curve_for(const AlgorithmInfo& info)
{
    if (info.name == "ecdsa-p256v1")
        return ecdsa::Curve::p256;
    throw Error(Errc::unknown_algorithm, "no signer for algorithm '" + std::string(info.name) + "'");
}

std::string read_single_line(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in)
        throw Error(Errc::key_format, "cannot read key file " + file.string());
    std::string line;
    std::getline(in, line);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
        line.pop_back();
    return line;
}

void collect(const DocNode& node, const std::string& path, std::vector<StanzaVerdict>& out, bool root)
{
    const Container* c = node.container();
    if (!c)
        return;
    if (root || c->sig)
        out.push_back({path, verify_container(*c)});
    for (const auto& child : c->children)
        if (child.container())
            collect(child, path.empty() ? std::string(child.tag()) : path + "." + std::string(child.tag()), out,
                    false);
}

} // namespace

std::string_view verdict_name(Verdict v) noexcept
{
    switch (v) {
    case Verdict::valid: return "valid";
    case Verdict::invalid: return "invalid";
    case Verdict::unsigned_stanza: return "unsigned";
    }
    return "unknown";
}

KeyPair keygen()
{
    return keypair_from_private(ecdsa::random_private_key(ecdsa::Curve::p256));
}

KeyPair keypair_from_private(const ecdsa::Scalar& private_key)
{
    return KeyPair{private_key, ecdsa::public_key(ecdsa::Curve::p256, private_key)};
}

Container sign_container(Container c, const KeyPair& key, std::string_view algo)
{
    const AlgorithmInfo* info = find_algorithm(algo);
    if (!info)
        throw Error(Errc::unknown_algorithm, "unregistered signature algorithm '" + std::string(algo) + "'");
    if (c.sig)
        throw Error(Errc::invalid_argument, "container '" + c.tag + "' is already signed");

    const Digest d = unsigned_digest(c);
    ecdsa::Signature sig = ecdsa::sign_digest(curve_for(*info), key.private_key, d.bytes);
    c.sig = SignatureBlock{std::string(info->name), info->id, sig.raw(), key.public_key};
    validate_signature_block(*c.sig);
    return c;
}

Verdict verify_container(const Container& c)
{
    if (!c.sig)
        return Verdict::unsigned_stanza;
    const AlgorithmInfo* info = find_algorithm(c.sig->algo);
    if (!info || info->id != c.sig->algo_id)
        return Verdict::invalid;
    Digest d;
    try {
        d = unsigned_digest(c);
    } catch (const Error&) {
        return Verdict::invalid; // content with no canonical form cannot carry a valid signature
    }
    return ecdsa::verify_digest(curve_for(*info), c.sig->pubkey, d.bytes, c.sig->sig) ? Verdict::valid
                                                                                         : Verdict::invalid;
}

std::vector<StanzaVerdict> verify_stanzas(const DocNode& root)
{
    std::vector<StanzaVerdict> out;
    collect(root, "", out, true);
    return out;
}

void write_key_files(const KeyPair& key, const std::filesystem::path& stem)
{
    namespace fs = std::filesystem;
    fs::path priv = stem, pub = stem;
    priv += ".key";
    pub += ".pub";
    {
        // Created owner-only from the start; never world readable.
        int fd = ::open(priv.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
        if (fd < 0)
            throw Error(Errc::key_format, "cannot write " + priv.string());
        ::fchmod(fd, 0600);
        const std::string line = to_hex(key.private_key) + "\n";
        bool ok = ::write(fd, line.data(), line.size()) == static_cast<ssize_t>(line.size());
        ::close(fd);
        if (!ok)
            throw Error(Errc::key_format, "cannot write " + priv.string());
    }
    std::ofstream out(pub, std::ios::trunc);
    if (!out)
        throw Error(Errc::key_format, "cannot write " + pub.string());
    out << to_hex(key.public_key) << '\n';
}

KeyPair read_private_key(const std::filesystem::path& file)
{
    std::string line = read_single_line(file);
    auto raw = from_hex(line);
    if (line.size() != 64 || !raw)
        throw Error(Errc::key_format, file.string() + ": private key must be 64 hex characters");
    ecdsa::Scalar scalar{};
    std::copy(raw->begin(), raw->end(), scalar.begin());
    return keypair_from_private(scalar);
}

Bytes read_public_key(const std::filesystem::path& file)
{
    std::string line = read_single_line(file);
    auto raw = from_hex(line);
    if (line.size() != 130 || !raw || raw->front() != 0x04)
        throw Error(Errc::key_format, file.string() + ": public key must be 130 hex characters (uncompressed SEC1)");
    return *raw;
}

} // namespace sdoc
