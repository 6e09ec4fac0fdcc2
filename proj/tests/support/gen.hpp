#pragma once

// Random document trees for property tests.

#include "sdoc/digest.hpp"
#include "sdoc/document.hpp"
#include "sdoc/signing.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace sdoc::testgen {

using Rng = std::mt19937_64;

struct Shape {
    int max_depth = 4;        // container nesting below the root
    std::size_t max_fanout = 8;
    std::size_t min_leaves = 1;
    std::size_t max_leaves = 24;
    double sign_probability = 0.0; // per nested container; the root is signed separately
};

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi)
{
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

inline std::string random_name(Rng& rng)
{
    static constexpr std::string_view first = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_";
    static constexpr std::string_view rest = "abcdefghijklmnopqrstuvwxyz0123456789_-";
    static const std::set<std::string> reserved = {"salt", "algo", "sig", "pubkey", "proof"};
    for (;;) {
        std::string s(1, first[uniform(rng, 0, first.size() - 1)]);
        const std::size_t len = uniform(rng, 0, 9);
        for (std::size_t i = 0; i < len; ++i)
            s.push_back(rest[uniform(rng, 0, rest.size() - 1)]);
        std::string lower = s;
        std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
        if (!reserved.count(s) && !s.starts_with("digest") && !lower.starts_with("xml"))
            return s;
    }
}

inline std::string random_salt(Rng& rng)
{
    std::string s(salt_length, '\0');
    for (auto& c : s)
        c = salt_alphabet[uniform(rng, 0, salt_alphabet.size() - 1)];
    return s;
}

/// Printable ASCII with markup characters, occasional whitespace controls and
/// multi-byte UTF-8.
inline std::string random_text(Rng& rng)
{
    static const std::vector<std::string> pieces = {
        "a", "Z", "7", " ", "&", "<", ">", "\"", "'", "\\", "/", "=", ";", "#", "\t", "\n", "\r",
        "\xc3\xa9", "\xe2\x82\xac", "\xf0\x9f\x98\x80", "&amp;", "]]>", "{", "}",
    };
    std::string s;
    const std::size_t len = uniform(rng, 0, 24);
    for (std::size_t i = 0; i < len; ++i) {
        if (chance(rng, 0.6))
            s.push_back(static_cast<char>(uniform(rng, 0x20, 0x7e)));
        else
            s += pieces[uniform(rng, 0, pieces.size() - 1)];
    }
    return s;
}

inline KeyPair deterministic_key(Rng& rng)
{
    for (;;) {
        ecdsa::Scalar k{};
        for (auto& b : k)
            b = static_cast<std::uint8_t>(uniform(rng, 0, 255));
        k[0] &= 0x7f; // below the P-256 order
        if (std::any_of(k.begin(), k.end(), [](auto b) { return b != 0; }))
            return keypair_from_private(k);
    }
}

namespace detail {

inline Container build(Rng& rng, const Shape& shape, int depth, std::size_t& leaves_left, std::string tag)
{
    Container c{std::move(tag), {}, std::nullopt};
    std::set<std::string> used;
    auto fresh = [&] {
        for (;;) {
            auto n = random_name(rng);
            if (used.insert(n).second)
                return n;
        }
    };
    const std::size_t fanout = uniform(rng, 1, shape.max_fanout);
    for (std::size_t i = 0; i < fanout && leaves_left > 0; ++i) {
        if (depth < shape.max_depth && leaves_left >= 2 && chance(rng, 0.25)) {
            Container child = build(rng, shape, depth + 1, leaves_left, fresh());
            if (shape.sign_probability > 0 && chance(rng, shape.sign_probability))
                child = sign_container(std::move(child), deterministic_key(rng));
            c.children.emplace_back(std::move(child));
        } else {
            c.children.emplace_back(Leaf{fresh(), random_salt(rng), random_text(rng)});
            --leaves_left;
        }
    }
    if (c.children.empty()) {
        c.children.emplace_back(Leaf{fresh(), random_salt(rng), random_text(rng)});
        if (leaves_left > 0)
            --leaves_left;
    }
    return c;
}

} // namespace detail

/// Unsigned random tree rooted at a container named "document". Sibling names
/// are unique, none is reserved or starts with "digest".
inline Container random_tree(Rng& rng, const Shape& shape = {})
{
    std::size_t leaves = uniform(rng, shape.min_leaves, shape.max_leaves);
    Container root = detail::build(rng, shape, 0, leaves, "document");
    // Spend any remaining leaf budget at the root so min_leaves is honored.
    std::set<std::string> used;
    for (const auto& ch : root.children)
        used.insert(std::string(ch.tag()));
    while (leaves > 0) {
        auto n = random_name(rng);
        if (!used.insert(n).second)
            continue;
        root.children.emplace_back(Leaf{n, random_salt(rng), random_text(rng)});
        --leaves;
    }
    return root;
}

inline std::size_t count_leaves(const DocNode& n)
{
    if (n.leaf())
        return 1;
    std::size_t total = 0;
    if (const Container* c = n.container())
        for (const auto& ch : c->children)
            total += count_leaves(ch);
    return total;
}

inline int depth_of(const DocNode& n)
{
    int d = 0;
    if (const Container* c = n.container())
        for (const auto& ch : c->children)
            if (ch.container())
                d = std::max(d, 1 + depth_of(ch));
    return d;
}

/// Hides each child subtree with probability `p`, top-down; the root itself
/// is never hidden. Returns the number of nodes hidden.
inline std::size_t random_redaction(Container& c, Rng& rng, double p)
{
    std::size_t hidden = 0;
    for (auto& ch : c.children) {
        if (ch.hidden())
            continue;
        if (chance(rng, p)) {
            ch = Hidden{node_digest(ch)};
            ++hidden;
        } else if (Container* inner = ch.container()) {
            hidden += random_redaction(*inner, rng, p);
        }
    }
    return hidden;
}

/// Dotted paths of every leaf and container below the root.
inline void member_paths(const Container& c, const std::string& prefix, std::vector<std::string>& out)
{
    for (const auto& ch : c.children) {
        if (ch.hidden())
            continue;
        std::string path = prefix.empty() ? std::string(ch.tag()) : prefix + "." + std::string(ch.tag());
        out.push_back(path);
        if (const Container* inner = ch.container())
            member_paths(*inner, path, out);
    }
}

} // namespace sdoc::testgen
