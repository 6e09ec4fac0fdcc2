#include "sdoc/json_codec.hpp"
#include "sdoc/digest.hpp"
#include "sdoc/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace sdoc {

using json = nlohmann::ordered_json;

std::string_view side_name(Side s) noexcept { return s == Side::left ? "left" : "right"; }

namespace {

constexpr std::string_view reserved_members[] = {"salt", "algo", "sig", "pubkey", "proof"};

bool is_reserved(std::string_view name) noexcept
{
    return std::find(std::begin(reserved_members), std::end(reserved_members), name) != std::end(reserved_members);
}

bool is_hidden_name(std::string_view name) noexcept { return name.starts_with(hidden_tag); }

[[noreturn]] void fail(Errc code, const std::string& where, const std::string& what)
{
    throw Error(code, "json: " + what + (where.empty() ? "" : " (at '" + where + "')"));
}

std::string join(const std::string& prefix, std::string_view name)
{
    return prefix.empty() ? std::string(name) : prefix + "." + std::string(name);
}

const std::string& as_string(const json& v, const std::string& where, std::string_view what)
{
    if (!v.is_string())
        fail(Errc::json_bad_member, where, std::string(what) + " must be a string");
    return v.get_ref<const std::string&>();
}

ProofObject parse_proof(const json& j)
{
    if (!j.is_object())
        fail(Errc::json_bad_member, "proof", "proof must be an object");
    ProofObject p;
    for (const auto& [key, value] : j.items()) {
        if (key == "spec") {
            if (!value.is_object())
                fail(Errc::json_bad_member, "proof.spec", "spec must be an object");
            const json& fields = value;
            auto str = [&](const char* name) -> std::string {
                auto it = fields.find(name);
                if (it == fields.end())
                    fail(Errc::json_bad_member, "proof.spec", std::string("missing '") + name + "'");
                return as_string(*it, std::string("proof.spec.") + name, name);
            };
            p.spec.subsystem = str("subsystem");
            if (p.spec.subsystem != subsystem_local && p.spec.subsystem != subsystem_ethereum)
                fail(Errc::json_bad_member, "proof.spec.subsystem", "unknown subsystem '" + p.spec.subsystem + "'");
            p.spec.network = str("network");
            p.spec.contract = str("contract");
            p.spec.contract_address = str("contract_address");
            auto block = value.find("block");
            if (block == value.end() || !block->is_number_unsigned())
                fail(Errc::json_bad_member, "proof.spec.block", "block must be a non-negative integer");
            p.spec.block = block->get<std::uint64_t>();
        } else if (key == "subtree") {
            if (!value.is_array())
                fail(Errc::json_bad_member, "proof.subtree", "subtree must be an array");
            for (const auto& step : value) {
                if (!step.is_object() || !step.contains("position") || !step.contains("digest") || step.size() != 2)
                    fail(Errc::json_bad_member, "proof.subtree", "each step is {position, digest}");
                const auto& pos = as_string(step["position"], "proof.subtree.position", "position");
                ProofStep s;
                if (pos == "left")
                    s.position = Side::left;
                else if (pos == "right")
                    s.position = Side::right;
                else
                    fail(Errc::json_bad_member, "proof.subtree.position", "position must be \"left\" or \"right\"");
                const auto& hex = as_string(step["digest"], "proof.subtree.digest", "digest");
                if (hex.size() != 64 || !is_lower_hex(hex))
                    fail(Errc::invalid_digest_hex, "proof.subtree.digest", "digest must be 64 lowercase hex characters");
                s.digest = *Digest::from_hex(hex);
                p.subtree.push_back(s);
            }
        } else {
            fail(Errc::json_bad_member, "proof." + key, "unexpected member in proof");
        }
    }
    if (!j.contains("spec") || !j.contains("subtree"))
        fail(Errc::json_bad_member, "proof", "proof needs both spec and subtree");
    return p;
}

json proof_json(const ProofObject& p)
{
    json spec = json::object();
    spec["subsystem"] = p.spec.subsystem;
    spec["network"] = p.spec.network;
    spec["contract"] = p.spec.contract;
    spec["contract_address"] = p.spec.contract_address;
    spec["block"] = p.spec.block;
    json subtree = json::array();
    for (const auto& s : p.subtree) {
        json step = json::object();
        step["position"] = side_name(s.position);
        step["digest"] = s.digest.hex();
        subtree.push_back(std::move(step));
    }
    json out = json::object();
    out["spec"] = std::move(spec);
    out["subtree"] = std::move(subtree);
    return out;
}

Container parse_object(const json& obj, std::string tag, const std::string& where, std::optional<ProofObject>* proof)
{
    Container c;
    c.tag = std::move(tag);
    const json* salts = nullptr;
    const json *algo = nullptr, *sig = nullptr, *pubkey = nullptr;

    for (const auto& [key, value] : obj.items()) {
        const std::string here = join(where, key);
        if (key == "salt") {
            if (!value.is_object())
                fail(Errc::json_bad_member, here, "salt must be an object");
            for (const auto& [_, s] : value.items())
                as_string(s, here, "salt value");
            salts = &value;
        } else if (key == "algo") {
            as_string(value, here, "algo");
            algo = &value;
        } else if (key == "sig") {
            as_string(value, here, "sig");
            sig = &value;
        } else if (key == "pubkey") {
            as_string(value, here, "pubkey");
            pubkey = &value;
        } else if (key == "proof") {
            if (!proof)
                fail(Errc::json_bad_member, here, "proof is only allowed on the root object");
            *proof = parse_proof(value);
        } else if (is_hidden_name(key)) {
            if (!value.is_string())
                fail(Errc::invalid_digest_hex, here, "hidden member must hold a digest string");
            const auto& hex = value.get_ref<const std::string&>();
            if (hex.size() != 64 || !is_lower_hex(hex))
                fail(Errc::invalid_digest_hex, here, "hidden member must be 64 lowercase hex characters");
            c.children.emplace_back(Hidden{*Digest::from_hex(hex)});
        } else if (value.is_string()) {
            if (!is_valid_tag(key))
                fail(Errc::encoding, here, "member name is not a valid element name");
            c.children.emplace_back(Leaf{key, {}, value.get<std::string>()});
        } else if (value.is_object()) {
            if (!is_valid_tag(key))
                fail(Errc::encoding, here, "member name is not a valid element name");
            c.children.emplace_back(parse_object(value, key, here, nullptr));
        } else if (value.is_array()) {
            fail(Errc::json_unsupported, here, "arrays are not supported as document content");
        } else {
            fail(Errc::json_unsupported, here, "document values must be strings or objects");
        }
    }

    std::unordered_set<std::string> disclosed;
    for (auto& child : c.children) {
        Leaf* leaf = child.leaf();
        if (!leaf)
            continue;
        const std::string here = join(where, leaf->tag);
        if (!salts || !salts->contains(leaf->tag))
            fail(Errc::missing_salt, here, "disclosed member has no salt entry");
        leaf->salt = (*salts)[leaf->tag].get<std::string>();
        if (!is_valid_salt(leaf->salt))
            fail(Errc::encoding, join(join(where, "salt"), leaf->tag), "invalid salt");
        disclosed.insert(leaf->tag);
    }
    if (salts)
        for (const auto& [key, _] : salts->items())
            if (!disclosed.count(key))
                fail(Errc::orphan_salt, join(join(where, "salt"), key), "salt entry names no disclosed member");

    if (algo || sig || pubkey) {
        if (!(algo && sig && pubkey))
            fail(Errc::malformed_signature, where, "algo, sig and pubkey must appear together");
        c.sig = make_signature_block(algo->get_ref<const std::string&>(), sig->get_ref<const std::string&>(),
                                     pubkey->get_ref<const std::string&>());
    }
    if (c.children.empty())
        fail(Errc::json_bad_member, where, "object has no content members");
    return c;
}

json object_json(const Container& c)
{
    json out = json::object();
    json salts = json::object();
    std::size_t hidden = 0;
    std::set<std::string_view> names;
    for (const auto& child : c.children) {
        std::string name;
        if (const Hidden* h = child.hidden()) {
            name = "digest" + std::to_string(++hidden);
            out[name] = h->digest.hex();
            continue;
        }
        name = std::string(child.tag());
        if (is_reserved(name))
            throw Error(Errc::json_bad_member, "json: element '" + name + "' collides with a reserved member name");
        if (!names.insert(child.tag()).second)
            throw Error(Errc::duplicate_member, "json: element '" + name + "' appears twice in one container");
        if (const Leaf* l = child.leaf()) {
            out[name] = l->text;
            salts[name] = l->salt;
        } else {
            out[name] = object_json(*child.container());
        }
    }
    if (!salts.empty())
        out["salt"] = std::move(salts);
    if (c.sig) {
        out["algo"] = c.sig->algo;
        out["sig"] = to_hex(c.sig->sig);
        out["pubkey"] = to_hex(c.sig->pubkey);
    }
    return out;
}

// Rejects duplicate member names, which the parser would otherwise collapse.
struct DuplicateGuard {
    std::vector<std::unordered_set<std::string>> stack;

    bool operator()(int, json::parse_event_t event, json& parsed)
    {
        switch (event) {
        case json::parse_event_t::object_start:
            stack.emplace_back();
            break;
        case json::parse_event_t::object_end:
            stack.pop_back();
            break;
        case json::parse_event_t::key: {
            const auto& key = parsed.get_ref<const std::string&>();
            if (!stack.back().insert(key).second)
                throw Error(Errc::duplicate_member, "json: duplicate member '" + key + "'");
            break;
        }
        default:
            break;
        }
        return true;
    }
};

DocNode* find_child(Container& c, std::string_view name)
{
    for (auto& child : c.children)
        if (!child.hidden() && child.tag() == name)
            return &child;
    return nullptr;
}

bool has_hidden(const Container& c)
{
    return std::any_of(c.children.begin(), c.children.end(), [](const DocNode& n) { return n.hidden() != nullptr; });
}

// Resolves `path` below `c`. Tags may contain '.', so every split point is
// tried, preferring the longest segment that names a child.
DocNode* resolve(Container& c, std::string_view path, bool& blocked_by_hidden)
{
    if (DocNode* exact = find_child(c, path))
        return exact;
    for (std::size_t dot = path.rfind('.'); dot != std::string_view::npos && dot > 0;
         dot = path.rfind('.', dot - 1)) {
        DocNode* head = find_child(c, path.substr(0, dot));
        if (head && head->container())
            if (DocNode* found = resolve(*head->container(), path.substr(dot + 1), blocked_by_hidden))
                return found;
    }
    if (has_hidden(c))
        blocked_by_hidden = true;
    return nullptr;
}

Container plain_object(const json& obj, std::string tag, const std::string& where,
                       const std::function<std::string()>& salt_source)
{
    Container c;
    c.tag = std::move(tag);
    for (const auto& [key, value] : obj.items()) {
        const std::string here = join(where, key);
        if (is_reserved(key) || is_hidden_name(key))
            fail(Errc::json_bad_member, here, "plain content may not use reserved member names");
        if (!is_valid_tag(key))
            fail(Errc::encoding, here, "member name is not a valid element name");
        if (value.is_string())
            c.children.emplace_back(Leaf{key, salt_source(), value.get<std::string>()});
        else if (value.is_object())
            c.children.emplace_back(plain_object(value, key, here, salt_source));
        else if (value.is_array())
            fail(Errc::json_unsupported, here, "arrays are not supported as document content");
        else
            fail(Errc::json_unsupported, here, "document values must be strings or objects");
    }
    if (c.children.empty())
        fail(Errc::json_bad_member, where, "object has no content members");
    return c;
}

json parse_text(std::string_view text)
{
    json j;
    try {
        j = json::parse(text.begin(), text.end(), DuplicateGuard{});
    } catch (const json::exception& e) {
        throw Error(Errc::json_syntax, std::string("json: ") + e.what());
    }
    if (!j.is_object())
        throw Error(Errc::json_unsupported, "json: document must be an object");
    return j;
}

} // namespace

DocNode plain_json_to_tree(std::string_view text, const std::function<std::string()>& salt_source)
{
    DocNode root = plain_object(parse_text(text), std::string(default_root_tag), "", salt_source);
    validate(root);
    return root;
}

JsonDocument json_to_tree(std::string_view text)
{
    json j = parse_text(text);
    JsonDocument doc{Container{}, std::nullopt};
    doc.root = parse_object(j, std::string(default_root_tag), "", &doc.proof);
    validate(doc.root);
    return doc;
}

std::string tree_to_json(const DocNode& root, const std::optional<ProofObject>& proof)
{
    const Container* c = root.container();
    if (!c)
        throw Error(Errc::invalid_argument, "document root must be a container");
    json out = object_json(*c);
    if (proof)
        out["proof"] = proof_json(*proof);
    return out.dump(2) + "\n";
}

void hide(DocNode& root, std::string_view path)
{
    Container* c = root.container();
    if (!c)
        throw Error(Errc::invalid_argument, "document root must be a container");
    if (path.empty())
        throw Error(Errc::path_not_found, "empty member path");

    const auto last = path.substr(path.rfind('.') == std::string_view::npos ? 0 : path.rfind('.') + 1);
    if (is_hidden_name(last) || is_hidden_name(path))
        throw Error(Errc::path_hidden, "'" + std::string(path) + "' is already hidden");

    bool blocked = false;
    DocNode* node = resolve(*c, path, blocked);
    if (!node) {
        if (blocked)
            throw Error(Errc::path_hidden,
                        "'" + std::string(path) + "' is not disclosed here; it may already be hidden");
        throw Error(Errc::path_not_found, "no member at '" + std::string(path) + "'");
    }
    *node = Hidden{node_digest(*node)};
}

std::string redact(std::string_view text, std::span<const std::string> paths)
{
    JsonDocument doc = json_to_tree(text);
    for (const auto& p : paths)
        hide(doc.root, p);
    return tree_to_json(doc.root, doc.proof);
}

} // namespace sdoc
