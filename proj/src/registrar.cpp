#include "sdoc/registrar.hpp"
#include "sdoc/digest.hpp"
#include "sdoc/error.hpp"
#include "sdoc/json_codec.hpp"
#include "sdoc/merkle.hpp"

#include "json.hpp"

#include <set>
#include <sstream>

namespace sdoc {

namespace {

// Post-order so inner signatures exist before the outer digest is taken.
void sign_nested(DocNode& node, const std::string& path, const std::map<std::string, KeyPair>& keys,
                 std::set<std::string>& used)
{
    Container* c = node.container();
    if (!c)
        return;
    for (auto& child : c->children)
        if (child.container())
            sign_nested(child, path.empty() ? std::string(child.tag()) : path + "." + std::string(child.tag()), keys,
                        used);
    if (path.empty())
        return;
    if (auto it = keys.find(path); it != keys.end()) {
        *c = sign_container(std::move(*c), it->second);
        used.insert(path);
    }
}

} // namespace

std::string issue_document(std::string_view plain_json, const KeyPair& issuer,
                           const std::map<std::string, KeyPair>& nested_keys)
{
    DocNode root = plain_json_to_tree(plain_json, generate_salt);
    std::set<std::string> used;
    sign_nested(root, "", nested_keys, used);
    for (const auto& [path, _] : nested_keys)
        if (!used.count(path))
            throw Error(Errc::path_not_found, "no nested object at '" + path + "' to sign");
    root = sign_container(std::move(*root.container()), issuer);
    return tree_to_json(root);
}

std::vector<std::string> register_batch(std::span<const std::string> docs, Anchor& anchor)
{
    if (docs.empty())
        throw Error(Errc::empty_batch, "nothing to register");

    std::vector<JsonDocument> parsed;
    std::vector<Digest> leaves;
    parsed.reserve(docs.size());
    leaves.reserve(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
        try {
            parsed.push_back(json_to_tree(docs[i]));
        } catch (const Error& e) {
            throw Error(e.code(), "document " + std::to_string(i) + ": " + e.what());
        }
        const Container& root = *parsed.back().root.container();
        if (!root.sig)
            throw Error(Errc::invalid_argument, "document " + std::to_string(i) + ": root is not signed");
        leaves.push_back(container_digest(root));
    }

    MerkleBatch batch(std::move(leaves));
    anchor.store(batch.root());
    AnchorSpec spec = anchor.describe();
    spec.block = anchor.get_stored(batch.root());
    if (spec.block == 0)
        throw Error(Errc::anchor_io, "anchor does not report the root it just stored");

    std::vector<std::string> out;
    out.reserve(parsed.size());
    for (std::size_t i = 0; i < parsed.size(); ++i)
        out.push_back(tree_to_json(parsed[i].root, ProofObject{spec, batch.prove(i)}));
    return out;
}

VerificationReport verify_document(std::string_view doc, const AnchorReader& anchor)
{
    VerificationReport report;
    JsonDocument parsed{Container{}, std::nullopt};
    try {
        parsed = json_to_tree(doc);
    } catch (const Error& e) {
        report.error = e.what();
        report.reasons.push_back("malformed_document");
        return report;
    }

    report.signatures = verify_stanzas(parsed.root);
    for (const auto& s : report.signatures)
        if (s.verdict == Verdict::invalid)
            report.reasons.push_back("signature_invalid:" + (s.path.empty() ? std::string("(root)") : s.path));

    if (parsed.proof) {
        ProofCheck& p = report.proof;
        p.present = true;
        p.claimed = parsed.proof->spec;
        p.document_digest = node_digest(parsed.root);
        p.root = fold_proof(p.document_digest, parsed.proof->subtree);
        try {
            p.anchored_block = anchor.get_stored(p.root);
            p.anchored = p.anchored_block > 0;
            if (!p.anchored)
                report.reasons.push_back("root_not_anchored");
        } catch (const Error& e) {
            report.reasons.push_back("anchor_unavailable");
            report.error = e.what();
        }
        if (p.anchored && p.claimed.block != p.anchored_block)
            report.warnings.push_back("claimed block " + std::to_string(p.claimed.block) + " differs from anchored block " +
                                      std::to_string(p.anchored_block));
        if (p.claimed.subsystem != anchor.describe().subsystem)
            report.warnings.push_back("proof names subsystem '" + p.claimed.subsystem + "' but was checked against '" +
                                      anchor.describe().subsystem + "'");
    }

    const bool root_signed = !report.signatures.empty() && report.signatures.front().verdict != Verdict::unsigned_stanza;
    if (!root_signed && !parsed.proof)
        report.warnings.push_back("no evidence: the root is unsigned and no proof is embedded");
    else if (!root_signed)
        report.warnings.push_back("root stanza is unsigned");
    else if (!parsed.proof)
        report.warnings.push_back("no proof of existence embedded");

    report.accepted = report.reasons.empty();
    return report;
}

std::string VerificationReport::to_json() const
{
    using json = nlohmann::ordered_json;
    json sigs = json::array();
    for (const auto& s : signatures)
        sigs.push_back({{"path", s.path}, {"verdict", verdict_name(s.verdict)}});
    json out;
    out["accepted"] = accepted;
    out["signatures"] = std::move(sigs);
    if (proof.present) {
        out["proof"] = {
            {"present", true},
            {"document_digest", proof.document_digest.hex()},
            {"root", proof.root.hex()},
            {"anchored", proof.anchored},
            {"block", proof.anchored_block},
            {"claimed", {{"subsystem", proof.claimed.subsystem},
                         {"network", proof.claimed.network},
                         {"contract", proof.claimed.contract},
                         {"contract_address", proof.claimed.contract_address},
                         {"block", proof.claimed.block}}},
        };
    } else {
        out["proof"] = {{"present", false}};
    }
    out["reasons"] = reasons;
    out["warnings"] = warnings;
    if (!error.empty())
        out["error"] = error;
    return out.dump(2) + "\n";
}

std::string VerificationReport::to_text() const
{
    std::ostringstream os;
    os << (accepted ? "ACCEPTED" : "REJECTED") << '\n';
    for (const auto& s : signatures)
        os << "  signature " << (s.path.empty() ? "(root)" : s.path) << ": " << verdict_name(s.verdict) << '\n';
    if (proof.present) {
        os << "  merkle root " << proof.root.hex() << ": ";
        if (proof.anchored)
            os << "anchored at block " << proof.anchored_block << '\n';
        else
            os << "not anchored\n";
    } else {
        os << "  proof: none\n";
    }
    for (const auto& r : reasons)
        os << "  reason: " << r << '\n';
    for (const auto& w : warnings)
        os << "  warning: " << w << '\n';
    if (!error.empty())
        os << "  error: " << error << '\n';
    return os.str();
}

} // namespace sdoc
